#pragma once

#include "dofseg/clustering.hpp"
#include "dofseg/morphology.hpp"

namespace dofseg {

struct ApproximateMask {
    BinaryMask hulls;  // union of rasterized neighborhood hulls
    BinaryMask mask;   // after closing and hole filling
    int se_side = 0;
};

/// Rasterizes convex(N_eps(k)) for every retained core point k, then applies
/// a closing with an h x h square (h = sqrt(w*h) * theta_rec, nearest odd,
/// >= 3) and fills enclosed holes.
ApproximateMask build_approximate_mask(const ClusterSet& cs, const RelevantClusters& rel, int width,
                                       int height, double theta_rec);

} // namespace dofseg
