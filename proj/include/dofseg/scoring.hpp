#pragma once

#include <vector>

#include "dofseg/colorspace.hpp"

namespace dofseg {

// Per-pixel sharpness score in [0,255]; non-candidates hold 0.
class ScoreMap {
public:
    ScoreMap() = default;
    ScoreMap(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return scores_.size(); }

    double& at(int x, int y) { return scores_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return scores_[static_cast<std::size_t>(y) * width_ + x]; }
    std::vector<double>& scores() { return scores_; }
    const std::vector<double>& scores() const { return scores_; }

    std::size_t candidate_count() const;

    friend bool operator==(const ScoreMap&, const ScoreMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> scores_;
};

struct ScoringParams {
    double sigma = 0.9;        // blur standard deviation, pixels
    double theta_score = 50.0; // candidate threshold on the 0..255 scale
    int radius = 1;            // L-infinity neighborhood radius

    void validate() const;
};

/// Normalized discrete Gaussian, truncated at +-ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian per Lab channel with edge replication.
LabImage gaussian_blur(const LabImage& img, double sigma);

/// Mean color of the in-bounds pixels within L-infinity distance r (p included).
LabColor neighbor_mean(const LabImage& img, int x, int y, int r);

/// min(255 * dE(neighbor mean, p) / dE_max, 255).
double neighbor_difference(const LabImage& img, int x, int y, int r);

/// neighbor_difference for every pixel.
std::vector<double> neighbor_difference_map(const LabImage& img, int r);

/// Edge pixels of `img` (difference above theta) receive the squared change of
/// their neighbor difference between the once- and twice-blurred images,
/// capped at 255; anything not above theta is zeroed.
ScoreMap deviation_score_map(const LabImage& img, const ScoringParams& params);

/// Higher-order-statistics map on the lightness channel (3x3 fourth central
/// moment / 100, capped at 255). Diagnostic baseline only.
ScoreMap hos_map(const LabImage& img);

/// Rounded 8-bit rendering of a score map.
std::vector<std::uint8_t> score_map_gray(const ScoreMap& sm);

} // namespace dofseg
