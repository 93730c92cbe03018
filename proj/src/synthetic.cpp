#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dofseg/error.hpp"
#include "dofseg/evaluation.hpp"
#include "dofseg/scoring.hpp"
#include "resample.hpp"

namespace dofseg {

const std::vector<Palette>& synthetic_palettes()
{
    static const std::vector<Palette> palettes = {
        {{255, 235, 0}, {20, 20, 220}},   // yellow / blue
        {{0, 255, 0}, {255, 0, 255}},     // green / magenta
        {{150, 255, 20}, {110, 0, 230}},  // lime / violet
        {{170, 255, 0}, {10, 0, 160}},    // chartreuse / navy
        {{40, 230, 20}, {20, 20, 230}},   // green / blue
    };
    return palettes;
}

namespace {

struct FloatRgb {
    std::vector<float> r, g, b;
};

std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void blur_channel(std::vector<float>& ch, int w, int h, const std::vector<double>& k)
{
    const int r = static_cast<int>(k.size() / 2);
    std::vector<float> tmp(ch.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += k[static_cast<std::size_t>(i + r)] * ch[static_cast<std::size_t>(y) * w + std::clamp(x + i, 0, w - 1)];
            tmp[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += k[static_cast<std::size_t>(i + r)] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            ch[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
        }
}

// Muted patchwork of overlapping blobs and bars plus fine grain.
FloatRgb render_background(int w, int h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed * 0x2545F4914F6CDD1DULL + 17);
    std::uniform_real_distribution<double> muted(60.0, 200.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t n = static_cast<std::size_t>(w) * h;
    FloatRgb bg{std::vector<float>(n), std::vector<float>(n), std::vector<float>(n)};
    const float base[3] = {static_cast<float>(muted(rng)), static_cast<float>(muted(rng)), static_cast<float>(muted(rng))};
    std::fill(bg.r.begin(), bg.r.end(), base[0]);
    std::fill(bg.g.begin(), bg.g.end(), base[1]);
    std::fill(bg.b.begin(), bg.b.end(), base[2]);

    const int blobs = 14;
    for (int i = 0; i < blobs; ++i) {
        const float col[3] = {static_cast<float>(muted(rng)), static_cast<float>(muted(rng)), static_cast<float>(muted(rng))};
        const double cx = unit(rng) * w, cy = unit(rng) * h;
        const double rad = (0.08 + 0.25 * unit(rng)) * std::min(w, h);
        const bool bar = unit(rng) < 0.35;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const bool inside = bar ? std::abs(x - cx) < rad * 0.25 || std::abs(y - cy) < rad * 0.1
                                        : (x - cx) * (x - cx) + (y - cy) * (y - cy) < rad * rad;
                if (!inside) continue;
                const std::size_t k = static_cast<std::size_t>(y) * w + x;
                bg.r[k] = col[0];
                bg.g[k] = col[1];
                bg.b[k] = col[2];
            }
    }
    std::uniform_real_distribution<float> grain(-25.0f, 25.0f);
    for (std::size_t k = 0; k < n; ++k) {
        const float g = grain(rng);
        bg.r[k] += g;
        bg.g[k] += g;
        bg.b[k] += g;
    }
    return bg;
}

} // namespace

SyntheticImage make_synthetic(const SyntheticSpec& spec)
{
    if (spec.width < 64 || spec.height < 64)
        throw Error(ErrorCode::InvalidArgument, "synthetic images need at least 64x64 pixels");
    if (!(spec.blur_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "blur sigma must be >= 0");
    if (spec.cell < 1) throw Error(ErrorCode::InvalidArgument, "texture cell must be >= 1");

    const int w = spec.width, h = spec.height;
    FloatRgb bg = render_background(w, h, spec.background_seed.value_or(spec.seed));
    if (spec.blur_sigma > 0.0) {
        const auto k = gaussian_kernel(spec.blur_sigma);
        blur_channel(bg.r, w, h, k);
        blur_channel(bg.g, w, h, k);
        blur_channel(bg.b, w, h, k);
    }

    std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& palettes = synthetic_palettes();
    const std::size_t pi = spec.palette ? static_cast<std::size_t>(*spec.palette) % palettes.size()
                                        : static_cast<std::size_t>(rng() % palettes.size());
    const Palette pal = palettes[pi];

    const int side = std::min(w, h);
    const double cx = w * (0.4 + 0.2 * unit(rng));
    const double cy = h * (0.4 + 0.2 * unit(rng));
    const double radius = side * (0.22 + 0.1 * unit(rng));
    double ax = radius, ay = radius, angle = 0.0;
    if (spec.shape == SyntheticShape::Ellipse) {
        ax = radius * (1.0 + 0.35 * unit(rng));
        ay = radius * (0.7 + 0.25 * unit(rng));
        angle = std::numbers::pi * unit(rng);
    }
    const double ca = std::cos(angle), sa = std::sin(angle);

    SyntheticImage out{RgbImage(w, h), BinaryMask(w, h)};
    const int cells_x = (w + spec.cell - 1) / spec.cell;
    const int cells_y = (h + spec.cell - 1) / spec.cell;
    std::vector<std::uint8_t> texture(static_cast<std::size_t>(cells_x) * cells_y);
    for (auto& t : texture) t = static_cast<std::uint8_t>(rng() & 1u);
    const bool stripe_vertical = (rng() & 1u) != 0;
    std::uniform_int_distribution<int> jitter(-12, 12);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t k = static_cast<std::size_t>(y) * w + x;
            const double dx = x - cx, dy = y - cy;
            const double u = (ca * dx + sa * dy) / ax;
            const double v = (-sa * dx + ca * dy) / ay;
            const int j = jitter(rng);
            if (u * u + v * v <= 1.0) {
                out.truth.bits()[k] = 1;
                bool first = false;
                switch (spec.texture) {
                case SyntheticTexture::Stripes: first = ((stripe_vertical ? x : y) / spec.cell) % 2 == 0; break;
                case SyntheticTexture::Checker: first = (x / spec.cell + y / spec.cell) % 2 == 0; break;
                case SyntheticTexture::Cells:
                    first = texture[static_cast<std::size_t>(y / spec.cell) * cells_x + x / spec.cell] != 0;
                    break;
                }
                const Rgb8 c = first ? pal.first : pal.second;
                out.image.pixels()[k] = {to_byte(c.r + j), to_byte(c.g + j), to_byte(c.b + j)};
            } else {
                out.image.pixels()[k] = {to_byte(bg.r[k]), to_byte(bg.g[k]), to_byte(bg.b[k])};
            }
        }
    }
    return out;
}

SyntheticImage rescale_synthetic(const SyntheticImage& s, int longest)
{
    const int w = s.image.width(), h = s.image.height();
    const double f = static_cast<double>(longest) / std::max(w, h);
    const int ow = std::max(1, static_cast<int>(std::lround(w * f)));
    const int oh = std::max(1, static_cast<int>(std::lround(h * f)));
    if (ow == w && oh == h) return s;
    if (ow > w || oh > h) throw Error(ErrorCode::InvalidArgument, "rescale_synthetic only shrinks");

    struct Acc {
        double r = 0, g = 0, b = 0;
    };
    std::vector<Acc> rgb;
    detail::resample<Acc>(
        w, h, ow, oh, [&](int x, int y) { return s.image.at(x, y); },
        [](Acc& d, const Rgb8& c, double wt) {
            d.r += c.r * wt;
            d.g += c.g * wt;
            d.b += c.b * wt;
        },
        rgb);
    std::vector<double> cover;
    detail::resample<double>(
        w, h, ow, oh, [&](int x, int y) { return static_cast<double>(s.truth.at(x, y)); },
        [](double& d, double v, double wt) { d += v * wt; }, cover);

    SyntheticImage out{RgbImage(ow, oh), BinaryMask(ow, oh)};
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        out.image.pixels()[i] = {to_byte(rgb[i].r), to_byte(rgb[i].g), to_byte(rgb[i].b)};
        out.truth.bits()[i] = cover[i] >= 0.5 ? 1 : 0;
    }
    return out;
}

} // namespace dofseg
