#include "dofseg/imageio.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <png.h>

#include "dofseg/error.hpp"
#include "dofseg/morphology.hpp"

namespace dofseg {

namespace {

bool is_png(std::span<const std::uint8_t> b)
{
    return b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> b)
{
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

struct PngSource {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_mem(png_structp png, png_bytep out, png_size_t count)
{
    auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
    if (src->offset + count > src->size)
        png_error(png, "read past end of buffer");
    std::memcpy(out, src->data + src->offset, count);
    src->offset += count;
}

void png_warn_silent(png_structp, png_const_charp) {}

// Decodes into `rgb` (pre-sized by the callback). Returns false on any libpng
// error. Only trivially destructible locals live in this frame because of
// the longjmp.
bool decode_png_into(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& rgb,
                     png_uint_32& width, png_uint_32& height)
{
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_silent);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    PngSource src{bytes.data(), bytes.size(), 0};
    png_bytep* rows = nullptr;

    if (setjmp(png_jmpbuf(png))) {
        std::free(rows);
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }

    png_set_read_fn(png, &src, png_read_mem);
    png_read_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (bit_depth == 16) png_set_scale_16(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        // tRNS would otherwise become an alpha channel after expansion.
        png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3)
        png_error(png, "unexpected row layout");

    rgb.resize(static_cast<std::size_t>(width) * height * 3);
    rows = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * height));
    if (!rows) png_error(png, "out of memory");
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = rgb.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows);
    png_read_end(png, nullptr);

    std::free(rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo)
{
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

bool decode_jpeg_into(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& rgb,
                      unsigned& width, unsigned& height)
{
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    err.base.emit_message = jpeg_silent;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        return false;
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    if (jpeg_read_header(&cinfo, TRUE) != JPEG_HEADER_OK) {
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    width = cinfo.output_width;
    height = cinfo.output_height;
    rgb.resize(static_cast<std::size_t>(width) * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    // A truncated stream only produces a warning in libjpeg; treat it as fatal.
    const bool truncated = cinfo.err->num_warnings > 0;
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return !truncated;
}

struct PngWriteBuffer {
    std::vector<std::uint8_t>* out;
};

void png_write_mem(png_structp png, png_bytep data, png_size_t length)
{
    auto* buf = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
    buf->out->insert(buf->out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

bool encode_png_into(int width, int height, int channels, const std::uint8_t* data,
                     std::vector<std::uint8_t>& out)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_silent);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    PngWriteBuffer buf{&out};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &buf, png_write_mem, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

} // namespace

RgbImage decode_rgb(std::span<const std::uint8_t> bytes)
{
    std::vector<std::uint8_t> raw;
    bool ok = false;
    unsigned width = 0, height = 0;
    if (is_png(bytes)) {
        png_uint_32 w = 0, h = 0;
        ok = decode_png_into(bytes, raw, w, h);
        width = w;
        height = h;
    } else if (is_jpeg(bytes)) {
        ok = decode_jpeg_into(bytes, raw, width, height);
    }
    if (!ok || width == 0 || height == 0)
        throw Error(ErrorCode::DecodeFailed, "unsupported or corrupt image");

    RgbImage img(static_cast<int>(width), static_cast<int>(height));
    auto& px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
    return img;
}

LabImage decode_image(std::span<const std::uint8_t> bytes)
{
    return to_lab(decode_rgb(bytes));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailed, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RgbImage load_rgb(const std::filesystem::path& path)
{
    return decode_rgb(read_file(path));
}

std::vector<std::uint8_t> encode_png_gray(int width, int height, std::span<const std::uint8_t> gray)
{
    if (width < 1 || height < 1 || gray.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorCode::InvalidArgument, "gray buffer does not match dimensions");
    std::vector<std::uint8_t> out;
    if (!encode_png_into(width, height, 1, gray.data(), out))
        throw Error(ErrorCode::IoFailed, "png encoding failed");
    return out;
}

std::vector<std::uint8_t> encode_png_rgb(const RgbImage& img)
{
    std::vector<std::uint8_t> raw;
    raw.reserve(img.size() * 3);
    for (const auto& c : img.pixels()) {
        raw.push_back(c.r);
        raw.push_back(c.g);
        raw.push_back(c.b);
    }
    std::vector<std::uint8_t> out;
    if (!encode_png_into(img.width(), img.height(), 3, raw.data(), out))
        throw Error(ErrorCode::IoFailed, "png encoding failed");
    return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailed, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailed, "write failed for " + path.string());
}

void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask)
{
    std::vector<std::uint8_t> gray(mask.size());
    for (std::size_t i = 0; i < gray.size(); ++i)
        gray[i] = mask.bits()[i] ? 255 : 0;
    write_file(path, encode_png_gray(mask.width(), mask.height(), gray));
}

BinaryMask load_mask(const std::filesystem::path& path)
{
    const RgbImage img = load_rgb(path);
    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const auto& c = img.pixels()[i];
        const int gray = (c.r + c.g + c.b) / 3;
        mask.bits()[i] = gray >= 128 ? 1 : 0;
    }
    return mask;
}

} // namespace dofseg
