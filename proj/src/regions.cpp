#include "dofseg/regions.hpp"

#include <algorithm>

#include "dofseg/error.hpp"
#include "dofseg/parallel.hpp"

namespace dofseg {

std::vector<ColorRegion> color_segment(const LabImage& img, const BinaryMask& mask, double theta_dist)
{
    if (img.width() != mask.width() || img.height() != mask.height())
        throw Error(ErrorCode::DimensionMismatch, "image and mask dimensions differ");
    if (!(theta_dist >= 0.0 && theta_dist <= 100.0))
        throw Error(ErrorCode::InvalidArgument, "theta_dist must lie in [0,100]");

    const int w = mask.width(), h = mask.height();
    std::vector<std::uint8_t> visited(mask.size(), 0);
    std::vector<ColorRegion> regions;
    std::vector<Point> work;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t seed = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits()[seed] || visited[seed]) continue;

            ColorRegion region;
            region.id = static_cast<int>(regions.size());
            visited[seed] = 1;
            region.pixels.push_back({x, y});
            work.assign(1, {x, y});
            while (!work.empty()) {
                const Point p = work.back();
                work.pop_back();
                const LabColor& pc = img.at(p.x, p.y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx, ny = p.y + dy;
                        if ((dx == 0 && dy == 0) || !mask.on(nx, ny)) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (visited[ni] || !(delta_e(pc, img.at(nx, ny)) < theta_dist)) continue;
                        visited[ni] = 1;
                        region.pixels.push_back({nx, ny});
                        work.push_back({nx, ny});
                    }
                }
            }
            region.boundary = outer_boundary(region.pixels, w, h);
            regions.push_back(std::move(region));
        }
    }
    return regions;
}

std::vector<Point> outer_boundary(const std::vector<Point>& pixels, int width, int height)
{
    if (pixels.empty()) return {};
    int x0 = width, y0 = height, x1 = -1, y1 = -1;
    for (const auto& p : pixels) {
        if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height)
            throw Error(ErrorCode::InvalidArgument, "region pixel outside image bounds");
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    // local raster over the bounding box grown by one pixel
    x0 = std::max(0, x0 - 1);
    y0 = std::max(0, y0 - 1);
    x1 = std::min(width - 1, x1 + 1);
    y1 = std::min(height - 1, y1 + 1);
    const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
    BinaryMask local(bw, bh);
    for (const auto& p : pixels) local.at(p.x - x0, p.y - y0) = 1;
    const BinaryMask grown = dilate(local, StructuringElement(3));

    std::vector<Point> out;
    for (int y = 0; y < bh; ++y)
        for (int x = 0; x < bw; ++x)
            if (grown.at(x, y) && !local.at(x, y)) out.push_back({x + x0, y + y0});
    return out;
}

RegionScore score_region(const ColorRegion& r, const BinaryMask& alive, const BinaryMask& cluster_pixels)
{
    if (r.boundary.empty()) return {1.0, 1.0, 1.0};
    std::size_t in_alive = 0, in_clusters = 0;
    for (const auto& b : r.boundary) {
        in_alive += alive.on(b.x, b.y);
        in_clusters += cluster_pixels.on(b.x, b.y);
    }
    const double n = static_cast<double>(r.boundary.size());
    RegionScore s;
    s.mbo = static_cast<double>(in_alive) / n;
    s.sbo = static_cast<double>(in_clusters) / n;
    s.mr = s.sbo * s.mbo;
    return s;
}

RegionScoringResult region_scoring(const std::vector<ColorRegion>& regions, const BinaryMask& cluster_pixels,
                                   double theta_rel)
{
    if (!(theta_rel >= 0.0 && theta_rel <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "theta_rel must lie in [0,1]");

    const int w = cluster_pixels.width(), h = cluster_pixels.height();
    RegionScoringResult res;
    res.alive.assign(regions.size(), 1);
    res.scores.resize(regions.size());
    res.mask = BinaryMask(w, h);
    for (const auto& r : regions)
        for (const auto& p : r.pixels) res.mask.at(p.x, p.y) = 1;

    std::size_t alive_count = regions.size();
    while (alive_count > 0) {
        ++res.sweeps;
        parallel_for(static_cast<int>(regions.size()), [&](int i) {
            if (res.alive[static_cast<std::size_t>(i)])
                res.scores[static_cast<std::size_t>(i)] =
                    score_region(regions[static_cast<std::size_t>(i)], res.mask, cluster_pixels);
        });
        bool deleted = false;
        for (std::size_t i = 0; i < regions.size(); ++i) {
            if (!res.alive[i] || res.scores[i].mr > theta_rel) continue;
            res.alive[i] = 0;
            --alive_count;
            deleted = true;
        }
        if (!deleted) break;
        for (std::size_t i = 0; i < regions.size(); ++i)
            if (!res.alive[i])
                for (const auto& p : regions[i].pixels) res.mask.at(p.x, p.y) = 0;
    }
    return res;
}

} // namespace dofseg
