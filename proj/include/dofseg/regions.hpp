#pragma once

#include <vector>

#include "dofseg/colorspace.hpp"
#include "dofseg/morphology.hpp"

namespace dofseg {

struct ColorRegion {
    int id = 0;
    std::vector<Point> pixels;   // row-major discovery order of the seed, then growth order
    std::vector<Point> boundary; // dilate(region, 3x3) minus region, in bounds, row-major
};

/// Region growing over the on-pixels of `mask`: seeds in row-major order, an
/// 8-neighbor joins when dE(current pixel, neighbor) < theta_dist.
std::vector<ColorRegion> color_segment(const LabImage& img, const BinaryMask& mask, double theta_dist);

/// 3x3 dilation of the pixel set minus the set, clipped to width x height.
std::vector<Point> outer_boundary(const std::vector<Point>& pixels, int width, int height);

struct RegionScore {
    double mbo = 0.0;
    double sbo = 0.0;
    double mr = 0.0;
};

/// `alive` holds, per pixel, whether it belongs to a region still alive;
/// `cluster_pixels` marks pixels of the relevant clusters. A region without
/// boundary pixels scores MR = 1.
RegionScore score_region(const ColorRegion& r, const BinaryMask& alive, const BinaryMask& cluster_pixels);

struct RegionScoringResult {
    BinaryMask mask;                  // union of surviving regions
    std::vector<std::uint8_t> alive;  // per region
    std::vector<RegionScore> scores;  // per region, as of its last evaluation
    int sweeps = 0;                   // sweeps run, including the final no-op one
};

/// Batch deletion: every sweep scores all alive regions against the frozen
/// alive set, removes those with MR <= theta_rel, and repeats until a sweep
/// deletes nothing.
RegionScoringResult region_scoring(const std::vector<ColorRegion>& regions, const BinaryMask& cluster_pixels,
                                   double theta_rel);

} // namespace dofseg
