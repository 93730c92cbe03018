#include "dofseg/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dofseg {

namespace {

// D65 reference white, Y normalized to 1.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.00000;
constexpr double kZn = 1.08883;

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double decode_gamma(double c)
{
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double encode_gamma(double c)
{
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t)
{
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f)
{
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

const std::array<double, 256>& linear_table()
{
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i)
            t[i] = decode_gamma(i / 255.0);
        return t;
    }();
    return table;
}

} // namespace

RgbImage::RgbImage(int width, int height, Rgb8 fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill)
{
}

LabImage::LabImage(int width, int height, LabColor fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill)
{
}

LabColor srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8)
{
    const auto& lin = linear_table();
    const double r = lin[r8], g = lin[g8], b = lin[b8];

    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb8 lab_to_srgb(const LabColor& c)
{
    const double fy = (c.L + 16.0) / 116.0;
    const double fx = fy + c.a / 500.0;
    const double fz = fy - c.b / 200.0;

    const double x = kXn * lab_f_inv(fx);
    const double y = kYn * (c.L > kKappa * kEpsilon ? fy * fy * fy : c.L / kKappa);
    const double z = kZn * lab_f_inv(fz);

    const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;

    auto to8 = [](double v) {
        const double e = encode_gamma(std::clamp(v, 0.0, 1.0));
        return static_cast<std::uint8_t>(std::lround(std::clamp(e, 0.0, 1.0) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

double delta_e(const LabColor& u, const LabColor& v)
{
    const double dl = u.L - v.L;
    const double da = u.a - v.a;
    const double db = u.b - v.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

double delta_e_max()
{
    static const double value = std::sqrt(100.0 * 100.0 + 255.0 * 255.0 + 255.0 * 255.0);
    return value;
}

LabImage to_lab(const RgbImage& img)
{
    LabImage out(img.width(), img.height());
    std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                   [](Rgb8 c) { return srgb_to_lab(c); });
    return out;
}

RgbImage to_rgb(const LabImage& img)
{
    RgbImage out(img.width(), img.height());
    std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                   [](const LabColor& c) { return lab_to_srgb(c); });
    return out;
}

} // namespace dofseg
