#include "dofseg/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "dofseg/error.hpp"

namespace dofseg {

DbscanParams auto_params(const ScoreMap& score_map, double theta_eps, double theta_dbscan)
{
    if (score_map.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty score map");
    if (!(theta_dbscan > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta_dbscan must be > 0");

    const double pixels = static_cast<double>(score_map.size());
    DbscanParams p;
    p.eps = std::sqrt(pixels) * theta_eps;

    double mass = 0.0;
    for (double mu : score_map.scores())
        if (mu > 0.0) mass += std::min(mu / theta_dbscan, 1.0);

    p.raw_min_pts = static_cast<int>(std::floor((p.eps + 1.0) * (p.eps + 1.0) / pixels * mass));
    p.min_pts = std::max(p.raw_min_pts, kMinPtsFloor);
    return p;
}

NeighborIndex::NeighborIndex(std::span<const Point> points, double eps)
    : points_(points), eps_(eps), eps2_(eps * eps), cell_(std::max(1, static_cast<int>(std::ceil(eps))))
{
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be > 0");
    if (points.empty()) return;

    int max_x = points[0].x, max_y = points[0].y;
    min_x_ = points[0].x;
    min_y_ = points[0].y;
    for (const auto& p : points) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    cols_ = (max_x - min_x_) / cell_ + 1;
    rows_ = (max_y - min_y_) / cell_ + 1;

    const std::size_t cells = static_cast<std::size_t>(cols_) * rows_;
    cell_start_.assign(cells + 1, 0);
    auto cell_of = [&](const Point& p) {
        return static_cast<std::size_t>((p.y - min_y_) / cell_) * cols_ + (p.x - min_x_) / cell_;
    };
    for (const auto& p : points) ++cell_start_[cell_of(p) + 1];
    std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());
    cell_items_.resize(points.size());
    std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) cell_items_[fill[cell_of(points[i])]++] = i;
}

void NeighborIndex::query(const Point& p, std::vector<std::size_t>& out) const
{
    out.clear();
    if (points_.empty()) return;
    const int reach = static_cast<int>(std::ceil(eps_ / cell_));
    const int cx = (p.x - min_x_) >= 0 ? (p.x - min_x_) / cell_ : -1 - (min_x_ - p.x - 1) / cell_;
    const int cy = (p.y - min_y_) >= 0 ? (p.y - min_y_) / cell_ : -1 - (min_y_ - p.y - 1) / cell_;
    for (int gy = std::max(0, cy - reach); gy <= std::min(rows_ - 1, cy + reach); ++gy) {
        for (int gx = std::max(0, cx - reach); gx <= std::min(cols_ - 1, cx + reach); ++gx) {
            const std::size_t c = static_cast<std::size_t>(gy) * cols_ + gx;
            for (std::size_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
                const Point& q = points_[cell_items_[k]];
                const double dx = q.x - p.x, dy = q.y - p.y;
                if (dx * dx + dy * dy <= eps2_) out.push_back(cell_items_[k]);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

std::size_t ClusterSet::noise_count() const
{
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

ClusterSet dbscan(std::span<const Point> input, double eps, int min_pts)
{
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be > 0");
    if (min_pts < 1) throw Error(ErrorCode::InvalidArgument, "min_pts must be >= 1");

    // Work on a row-major sorted copy; results are mapped back to input order.
    std::vector<std::size_t> order(input.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return input[a].y != input[b].y ? input[a].y < input[b].y : input[a].x < input[b].x;
    });
    std::vector<Point> sorted(input.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = input[order[i]];

    const std::size_t n = sorted.size();
    const NeighborIndex index(sorted, eps);
    std::vector<std::uint8_t> core(n, 0);
    std::vector<std::size_t> nbrs;
    for (std::size_t i = 0; i < n; ++i) {
        index.query(sorted[i], nbrs);
        core[i] = nbrs.size() >= static_cast<std::size_t>(min_pts);
    }

    constexpr int kUnlabeled = -2;
    std::vector<int> labels(n, kUnlabeled);
    int next_id = 0;
    std::deque<std::size_t> queue;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || labels[seed] != kUnlabeled) continue;
        const int id = next_id++;
        labels[seed] = id;
        queue.push_back(seed);
        while (!queue.empty()) {
            const std::size_t p = queue.front();
            queue.pop_front();
            index.query(sorted[p], nbrs);
            for (std::size_t q : nbrs) {
                if (labels[q] != kUnlabeled) continue;
                labels[q] = id;
                if (core[q]) queue.push_back(q);
            }
        }
    }

    ClusterSet cs;
    cs.eps = eps;
    cs.min_pts = min_pts;
    cs.points.assign(input.begin(), input.end());
    cs.labels.assign(n, kNoise);
    cs.core.assign(n, 0);
    cs.clusters.resize(static_cast<std::size_t>(next_id));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t orig = order[i];
        cs.core[orig] = core[i];
        if (labels[i] >= 0) {
            cs.labels[orig] = labels[i];
            cs.clusters[static_cast<std::size_t>(labels[i])].push_back(orig);
        }
    }
    return cs;
}

std::vector<Point> candidate_points(const ScoreMap& sm)
{
    std::vector<Point> pts;
    for (int y = 0; y < sm.height(); ++y)
        for (int x = 0; x < sm.width(); ++x)
            if (sm.at(x, y) > 0.0) pts.push_back({x, y});
    return pts;
}

RelevantClusters relevant_clusters(const ClusterSet& cs)
{
    if (cs.clusters.empty()) throw Error(ErrorCode::NoFocusRegion, "no focus region found");

    RelevantClusters rel;
    for (const auto& c : cs.clusters) rel.max_size = std::max(rel.max_size, c.size());
    for (std::size_t id = 0; id < cs.clusters.size(); ++id) {
        if (2 * cs.clusters[id].size() < rel.max_size) continue;
        rel.cluster_ids.push_back(id);
        for (std::size_t i : cs.clusters[id])
            if (cs.core[i]) rel.core_points.push_back(i);
    }
    std::sort(rel.core_points.begin(), rel.core_points.end());
    return rel;
}

} // namespace dofseg
