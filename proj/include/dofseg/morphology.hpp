#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dofseg {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

// Row-major {0,1} raster.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bits_.size(); }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::uint8_t& at(int x, int y) { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
    bool on(int x, int y) const { return contains(x, y) && at(x, y) != 0; }

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::size_t count() const;
    bool same_shape(const BinaryMask& o) const { return width_ == o.width_ && height_ == o.height_; }
    /// Pointwise this <= o.
    bool subset_of(const BinaryMask& o) const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

BinaryMask complement(const BinaryMask& m);

// Square all-ones structuring element centered on its origin.
class StructuringElement {
public:
    explicit StructuringElement(int side = 3);

    int side() const { return side_; }
    int radius() const { return side_ / 2; }

    /// Side derived from sqrt(pixel_count) * fraction, rounded to the nearest
    /// odd integer, minimum 3.
    static StructuringElement relative(std::size_t pixel_count, double fraction);

private:
    int side_;
};

// Out-of-range translates are dropped by dilation. Erosion only inspects the
// in-bounds part of the window, which makes it the exact adjoint of dilation
// on the image domain: erode(m) == complement(dilate(complement(m))).
BinaryMask dilate(const BinaryMask& m, const StructuringElement& se);
BinaryMask erode(const BinaryMask& m, const StructuringElement& se);
BinaryMask close(const BinaryMask& m, const StructuringElement& se);

/// min(dilate(marker), mask)
BinaryMask geodesic_dilate_1(const BinaryMask& marker, const BinaryMask& mask, const StructuringElement& se);
/// max(erode(marker), mask)
BinaryMask geodesic_erode_1(const BinaryMask& marker, const BinaryMask& mask, const StructuringElement& se);

/// Fixed point of geodesic_dilate_1: components of `mask` (se-connectivity)
/// touching `marker`. Requires marker <= mask.
BinaryMask reconstruct_by_dilation(const BinaryMask& marker, const BinaryMask& mask,
                                   const StructuringElement& se);
/// Fixed point of geodesic_erode_1. Requires marker >= mask.
BinaryMask reconstruct_by_erosion(const BinaryMask& marker, const BinaryMask& mask,
                                  const StructuringElement& se);

/// On-pixels plus every background region not connected to the image border.
BinaryMask fill_holes(const BinaryMask& m, const StructuringElement& se = StructuringElement(3));

struct Polygon {
    std::vector<Point> vertices; // counterclockwise in x-right/y-up orientation
};

/// Andrew's monotone chain; collinear points dropped. Throws on empty input.
Polygon convex_hull(std::span<const Point> points);

/// Sets every pixel whose center lies inside or on the polygon. Degenerate
/// hulls (a point or a segment) rasterize to the pixels they pass through.
void rasterize_convex(const Polygon& poly, BinaryMask& out);

} // namespace dofseg
