#include "dofseg/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dofseg/error.hpp"

namespace dofseg {

BinaryMask::BinaryMask(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0)
{
    if (width < 0 || height < 0)
        throw Error(ErrorCode::InvalidArgument, "negative mask dimensions");
}

std::size_t BinaryMask::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::subset_of(const BinaryMask& o) const
{
    if (!same_shape(o)) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] > o.bits_[i]) return false;
    return true;
}

BinaryMask complement(const BinaryMask& m)
{
    BinaryMask out(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i)
        out.bits()[i] = m.bits()[i] ? 0 : 1;
    return out;
}

StructuringElement::StructuringElement(int side) : side_(side)
{
    if (side < 1 || side % 2 == 0)
        throw Error(ErrorCode::InvalidArgument, "structuring element side must be odd and >= 1");
}

StructuringElement StructuringElement::relative(std::size_t pixel_count, double fraction)
{
    const double h = std::sqrt(static_cast<double>(pixel_count)) * fraction;
    // nearest odd integer: odd numbers are 2k+1, so round (h-1)/2
    long k = std::lround((h - 1.0) / 2.0);
    int side = static_cast<int>(2 * k + 1);
    return StructuringElement(std::max(side, 3));
}

namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b)
{
    if (!a.same_shape(b))
        throw Error(ErrorCode::DimensionMismatch, "marker and mask dimensions differ");
}

// One separable pass over a line of `n` samples. `any` selects dilation
// (any on in window) versus erosion (all in-bounds samples on).
void window_pass(const std::uint8_t* in, std::ptrdiff_t stride, int n, int r, bool any,
                 std::vector<int>& prefix, std::uint8_t* out)
{
    prefix.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + in[i * stride];
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - r);
        const int hi = std::min(n - 1, i + r);
        const int on = prefix[hi + 1] - prefix[lo];
        out[i * stride] = any ? (on > 0) : (on == hi - lo + 1);
    }
}

BinaryMask separable(const BinaryMask& m, int r, bool any)
{
    const int w = m.width(), h = m.height();
    BinaryMask tmp(w, h), out(w, h);
    if (m.size() == 0) return out;
    std::vector<int> prefix;
    for (int y = 0; y < h; ++y)
        window_pass(&m.bits()[static_cast<std::size_t>(y) * w], 1, w, r, any, prefix,
                    &tmp.bits()[static_cast<std::size_t>(y) * w]);
    for (int x = 0; x < w; ++x)
        window_pass(&tmp.bits()[x], w, h, r, any, prefix, &out.bits()[x]);
    return out;
}

} // namespace

BinaryMask dilate(const BinaryMask& m, const StructuringElement& se)
{
    return separable(m, se.radius(), true);
}

BinaryMask erode(const BinaryMask& m, const StructuringElement& se)
{
    return separable(m, se.radius(), false);
}

BinaryMask close(const BinaryMask& m, const StructuringElement& se)
{
    return erode(dilate(m, se), se);
}

BinaryMask geodesic_dilate_1(const BinaryMask& marker, const BinaryMask& mask, const StructuringElement& se)
{
    require_same_shape(marker, mask);
    BinaryMask out = dilate(marker, se);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.bits()[i] = std::min(out.bits()[i], mask.bits()[i]);
    return out;
}

BinaryMask geodesic_erode_1(const BinaryMask& marker, const BinaryMask& mask, const StructuringElement& se)
{
    require_same_shape(marker, mask);
    BinaryMask out = erode(marker, se);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.bits()[i] = std::max(out.bits()[i], mask.bits()[i]);
    return out;
}

BinaryMask reconstruct_by_dilation(const BinaryMask& marker, const BinaryMask& mask,
                                   const StructuringElement& se)
{
    require_same_shape(marker, mask);
    if (!marker.subset_of(mask))
        throw Error(ErrorCode::InvalidArgument, "reconstruction by dilation needs marker <= mask");

    const int w = mask.width(), h = mask.height(), r = se.radius();
    BinaryMask out = marker;
    std::deque<Point> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (out.at(x, y)) queue.push_back({x, y});

    while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        const int y0 = std::max(0, p.y - r), y1 = std::min(h - 1, p.y + r);
        const int x0 = std::max(0, p.x - r), x1 = std::min(w - 1, p.x + r);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (mask.at(x, y) && !out.at(x, y)) {
                    out.at(x, y) = 1;
                    queue.push_back({x, y});
                }
    }
    return out;
}

BinaryMask reconstruct_by_erosion(const BinaryMask& marker, const BinaryMask& mask,
                                  const StructuringElement& se)
{
    require_same_shape(marker, mask);
    if (!mask.subset_of(marker))
        throw Error(ErrorCode::InvalidArgument, "reconstruction by erosion needs marker >= mask");
    return complement(reconstruct_by_dilation(complement(marker), complement(mask), se));
}

BinaryMask fill_holes(const BinaryMask& m, const StructuringElement& se)
{
    const int w = m.width(), h = m.height();
    const BinaryMask background = complement(m);
    BinaryMask seeds(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x == 0 || y == 0 || x == w - 1 || y == h - 1) && background.at(x, y))
                seeds.at(x, y) = 1;
    return complement(reconstruct_by_dilation(seeds, background, se));
}

namespace {

std::int64_t cross(const Point& o, const Point& a, const Point& b)
{
    return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) -
           static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

} // namespace

Polygon convex_hull(std::span<const Point> points)
{
    if (points.empty())
        throw Error(ErrorCode::InvalidArgument, "convex hull of an empty point set");

    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return Polygon{pts};

    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return Polygon{std::move(hull)};
}

void rasterize_convex(const Polygon& poly, BinaryMask& out)
{
    const auto& v = poly.vertices;
    if (v.empty()) return;

    int x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
    for (const auto& p : v) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, out.width() - 1);
    y1 = std::min(y1, out.height() - 1);

    if (v.size() == 1) {
        if (out.contains(v[0].x, v[0].y)) out.at(v[0].x, v[0].y) = 1;
        return;
    }
    if (v.size() == 2) {
        // bounding box already limits the segment's extent
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (cross(v[0], v[1], {x, y}) == 0) out.at(x, y) = 1;
        return;
    }
    const std::size_t n = v.size();
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const Point p{x, y};
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i)
                inside = cross(v[i], v[(i + 1) % n], p) >= 0;
            if (inside) out.at(x, y) = 1;
        }
    }
}

} // namespace dofseg
