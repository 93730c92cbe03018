#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dofseg/morphology.hpp"
#include "dofseg/scoring.hpp"

namespace dofseg {

struct DbscanParams {
    double eps = 0.0;
    int min_pts = 4;
    int raw_min_pts = 0; // formula value before the lower clamp
};

inline constexpr int kMinPtsFloor = 4;

/// eps = sqrt(|I|) * theta_eps; min_pts = floor((eps+1)^2/|I| * sum min(mu/theta_dbscan, 1)),
/// clamped to >= kMinPtsFloor.
DbscanParams auto_params(const ScoreMap& score_map, double theta_eps, double theta_dbscan = 255.0);

// Uniform grid with cell size eps over a fixed point set.
class NeighborIndex {
public:
    NeighborIndex(std::span<const Point> points, double eps);

    /// Indices of points within eps of `p` (inclusive), ascending row-major
    /// by coordinate, which is also ascending index order for sorted input.
    void query(const Point& p, std::vector<std::size_t>& out) const;

private:
    std::span<const Point> points_;
    double eps_;
    double eps2_;
    int cell_;
    int min_x_ = 0, min_y_ = 0, cols_ = 0, rows_ = 0;
    std::vector<std::size_t> cell_start_;
    std::vector<std::size_t> cell_items_;
};

inline constexpr int kNoise = -1;

struct ClusterSet {
    std::vector<Point> points;           // the clustered database
    std::vector<int> labels;             // cluster id or kNoise, per point
    std::vector<std::uint8_t> core;      // per point
    std::vector<std::vector<std::size_t>> clusters; // point indices per id
    double eps = 0.0;
    int min_pts = 0;

    std::size_t noise_count() const;
};

/// Classic DBSCAN on Euclidean pixel coordinates. |N_eps(p)| counts p itself.
/// Points are visited in row-major coordinate order, so ids and border-point
/// ties do not depend on the order of `points`.
ClusterSet dbscan(std::span<const Point> points, double eps, int min_pts);

/// Candidate pixels (score > 0) of a score map in row-major order.
std::vector<Point> candidate_points(const ScoreMap& sm);

struct RelevantClusters {
    std::vector<std::size_t> cluster_ids;  // retained ids, ascending
    std::vector<std::size_t> core_points;  // indices into ClusterSet::points
    std::size_t max_size = 0;
};

/// Keeps clusters with |c| >= max|c|/2. Throws Error(NoFocusRegion) when the
/// set has no clusters.
RelevantClusters relevant_clusters(const ClusterSet& cs);

} // namespace dofseg
