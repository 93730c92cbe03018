#include "dofseg/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "dofseg/error.hpp"
#include "dofseg/parallel.hpp"

namespace dofseg {

ScoreMap::ScoreMap(int width, int height, double fill)
    : width_(width), height_(height), scores_(static_cast<std::size_t>(width) * height, fill)
{
}

std::size_t ScoreMap::candidate_count() const
{
    return static_cast<std::size_t>(
        std::count_if(scores_.begin(), scores_.end(), [](double s) { return s > 0.0; }));
}

void ScoringParams::validate() const
{
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
    if (!(theta_score >= 0.0 && theta_score <= 255.0))
        throw Error(ErrorCode::InvalidArgument, "theta_score must lie in [0,255]");
    if (radius < 1) throw Error(ErrorCode::InvalidArgument, "neighborhood radius must be >= 1");
}

std::vector<double> gaussian_kernel(double sigma)
{
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * static_cast<std::size_t>(r) + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += k[i + r];
    }
    for (auto& v : k) v /= sum;
    return k;
}

LabImage gaussian_blur(const LabImage& img, double sigma)
{
    const auto kernel = gaussian_kernel(sigma);
    const int r = static_cast<int>(kernel.size() / 2);
    const int w = img.width(), h = img.height();

    LabImage tmp(w, h), out(w, h);
    parallel_for(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            LabColor acc;
            for (int i = -r; i <= r; ++i) {
                const auto& c = img.at(std::clamp(x + i, 0, w - 1), y);
                const double k = kernel[i + r];
                acc.L += k * c.L;
                acc.a += k * c.a;
                acc.b += k * c.b;
            }
            tmp.at(x, y) = acc;
        }
    });
    parallel_for(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            LabColor acc;
            for (int i = -r; i <= r; ++i) {
                const auto& c = tmp.at(x, std::clamp(y + i, 0, h - 1));
                const double k = kernel[i + r];
                acc.L += k * c.L;
                acc.a += k * c.a;
                acc.b += k * c.b;
            }
            out.at(x, y) = acc;
        }
    });
    return out;
}

LabColor neighbor_mean(const LabImage& img, int x, int y, int r)
{
    const int x0 = std::max(0, x - r), x1 = std::min(img.width() - 1, x + r);
    const int y0 = std::max(0, y - r), y1 = std::min(img.height() - 1, y + r);
    LabColor sum;
    for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) {
            const auto& c = img.at(xx, yy);
            sum.L += c.L;
            sum.a += c.a;
            sum.b += c.b;
        }
    const double n = static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1));
    return {sum.L / n, sum.a / n, sum.b / n};
}

double neighbor_difference(const LabImage& img, int x, int y, int r)
{
    const double d = delta_e(neighbor_mean(img, x, y, r), img.at(x, y));
    return std::min(255.0 * d / delta_e_max(), 255.0);
}

std::vector<double> neighbor_difference_map(const LabImage& img, int r)
{
    const int w = img.width();
    std::vector<double> out(img.size());
    parallel_for(img.height(), [&](int y) {
        for (int x = 0; x < w; ++x)
            out[static_cast<std::size_t>(y) * w + x] = neighbor_difference(img, x, y, r);
    });
    return out;
}

ScoreMap deviation_score_map(const LabImage& img, const ScoringParams& params)
{
    params.validate();
    const LabImage denoised = gaussian_blur(img, params.sigma);
    const LabImage reblurred = gaussian_blur(denoised, params.sigma);

    const auto edge = neighbor_difference_map(img, params.radius);
    const auto diff_once = neighbor_difference_map(denoised, params.radius);
    const auto diff_twice = neighbor_difference_map(reblurred, params.radius);

    ScoreMap out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(edge[i] > params.theta_score)) continue;
        const double delta = diff_once[i] - diff_twice[i];
        const double mu = std::min(255.0, delta * delta);
        if (mu > params.theta_score) out.scores()[i] = mu;
    }
    return out;
}

ScoreMap hos_map(const LabImage& img)
{
    constexpr double kDownScale = 100.0;
    const int w = img.width(), h = img.height();
    ScoreMap out(w, h);
    parallel_for(h, [&](int y) {
        const int y0 = std::max(0, y - 1), y1 = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - 1), x1 = std::min(w - 1, x + 1);
            const double n = static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1));
            double mean = 0.0;
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) mean += img.at(xx, yy).L * 2.55;
            mean /= n;
            double m4 = 0.0;
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) {
                    const double d = img.at(xx, yy).L * 2.55 - mean;
                    m4 += d * d * d * d;
                }
            m4 /= n;
            out.at(x, y) = std::min(255.0, m4 / kDownScale);
        }
    });
    return out;
}

std::vector<std::uint8_t> score_map_gray(const ScoreMap& sm)
{
    std::vector<std::uint8_t> out(sm.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(sm.scores()[i], 0.0, 255.0)));
    return out;
}

} // namespace dofseg
