#pragma once

#include <cstdint>
#include <vector>

namespace dofseg {

struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const LabColor&, const LabColor&) = default;
};

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

// Row-major 8-bit sRGB raster. Kept next to the Lab image where hue is needed.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb8 fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    Rgb8& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const Rgb8& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    std::vector<Rgb8>& pixels() { return pixels_; }
    const std::vector<Rgb8>& pixels() const { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb8> pixels_;
};

// Row-major CIELAB raster; the working representation of every photo.
class LabImage {
public:
    LabImage() = default;
    LabImage(int width, int height, LabColor fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    LabColor& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const LabColor& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    std::vector<LabColor>& pixels() { return pixels_; }
    const std::vector<LabColor>& pixels() const { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<LabColor> pixels_;
};

/// sRGB (D65, standard gamma) to CIELAB.
LabColor srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline LabColor srgb_to_lab(Rgb8 c) { return srgb_to_lab(c.r, c.g, c.b); }

/// Inverse of srgb_to_lab, rounded and clamped to 8 bits.
Rgb8 lab_to_srgb(const LabColor& c);

/// CIE76 color difference.
double delta_e(const LabColor& u, const LabColor& v);

/// Diameter of the nominal Lab box [0,100]x[-128,127]x[-128,127].
double delta_e_max();

LabImage to_lab(const RgbImage& img);
RgbImage to_rgb(const LabImage& img);

} // namespace dofseg
