#include "dofseg/mask_approximation.hpp"

#include "dofseg/error.hpp"
#include "dofseg/parallel.hpp"

namespace dofseg {

ApproximateMask build_approximate_mask(const ClusterSet& cs, const RelevantClusters& rel, int width,
                                       int height, double theta_rec)
{
    if (rel.core_points.empty())
        throw Error(ErrorCode::InvalidArgument, "approximate mask needs at least one core point");

    const NeighborIndex index(cs.points, cs.eps);
    const int chunks = static_cast<int>(std::min<std::size_t>(thread_count(), rel.core_points.size()));
    std::vector<BinaryMask> partial(static_cast<std::size_t>(chunks), BinaryMask(width, height));

    parallel_for(chunks, [&](int c) {
        const std::size_t n = rel.core_points.size();
        const std::size_t begin = n * static_cast<std::size_t>(c) / chunks;
        const std::size_t end = n * static_cast<std::size_t>(c + 1) / chunks;
        std::vector<std::size_t> nbrs;
        std::vector<Point> hood;
        for (std::size_t i = begin; i < end; ++i) {
            index.query(cs.points[rel.core_points[i]], nbrs);
            hood.clear();
            for (std::size_t q : nbrs) hood.push_back(cs.points[q]);
            rasterize_convex(convex_hull(hood), partial[static_cast<std::size_t>(c)]);
        }
    });

    ApproximateMask out;
    out.hulls = BinaryMask(width, height);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < p.size(); ++i) out.hulls.bits()[i] |= p.bits()[i];

    const auto se = StructuringElement::relative(static_cast<std::size_t>(width) * height, theta_rec);
    out.se_side = se.side();
    out.mask = fill_holes(close(out.hulls, se));
    return out;
}

} // namespace dofseg
