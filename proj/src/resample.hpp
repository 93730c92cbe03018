#pragma once

// Internal area-average resampling shared by the pipeline and the synthetic
// generator.

#include <algorithm>
#include <cmath>
#include <vector>

namespace dofseg::detail {

struct Tap {
    int index;
    double weight;
};

// Per-output-sample list of source taps for an area-average from n to m samples.
inline std::vector<std::vector<Tap>> area_taps(int n, int m)
{
    std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(m));
    const double scale = static_cast<double>(n) / m;
    for (int i = 0; i < m; ++i) {
        const double lo = i * scale, hi = (i + 1) * scale;
        for (int j = static_cast<int>(std::floor(lo)); j < n && j < hi; ++j) {
            const double overlap = std::min(hi, j + 1.0) - std::max(lo, static_cast<double>(j));
            if (overlap > 0.0) taps[static_cast<std::size_t>(i)].push_back({j, overlap / scale});
        }
    }
    return taps;
}

template <typename T, typename Get, typename Accumulate>
void resample(int w, int h, int ow, int oh, Get get, Accumulate acc, std::vector<T>& out)
{
    const auto tx = area_taps(w, ow);
    const auto ty = area_taps(h, oh);
    out.assign(static_cast<std::size_t>(ow) * oh, T{});
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            T& dst = out[static_cast<std::size_t>(y) * ow + x];
            for (const auto& sy : ty[static_cast<std::size_t>(y)])
                for (const auto& sx : tx[static_cast<std::size_t>(x)])
                    acc(dst, get(sx.index, sy.index), sx.weight * sy.weight);
        }
}

} // namespace dofseg::detail
