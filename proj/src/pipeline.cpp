#include "dofseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <json.hpp>

#include "dofseg/error.hpp"
#include "dofseg/imageio.hpp"
#include "resample.hpp"

namespace dofseg {

namespace {

using detail::resample;

double ms_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void PipelineParams::validate() const
{
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(theta_score >= 0.0 && theta_score <= 255.0)) fail("theta_score must lie in [0,255]");
    if (!(theta_eps > 0.0 && theta_eps <= 1.0)) fail("theta_eps must lie in (0,1]");
    if (!(sigma > 0.0)) fail("sigma must be > 0");
    if (!(theta_dist >= 0.0 && theta_dist <= 100.0)) fail("theta_dist must lie in [0,100]");
    if (!(theta_rec > 0.0 && theta_rec <= 1.0)) fail("theta_rec must lie in (0,1]");
    if (!(theta_rel >= 0.0 && theta_rel <= 1.0)) fail("theta_rel must lie in [0,1]");
    if (!(theta_dbscan > 0.0)) fail("theta_dbscan must be > 0");
    if (working_size < 16) fail("working_size must be >= 16");
    if (radius < 1) fail("radius must be >= 1");
}

std::pair<int, int> working_dims(int width, int height, int max_side)
{
    const int longest = std::max(width, height);
    if (longest <= max_side) return {width, height};
    const double s = static_cast<double>(max_side) / longest;
    return {std::clamp(static_cast<int>(std::lround(width * s)), 1, max_side),
            std::clamp(static_cast<int>(std::lround(height * s)), 1, max_side)};
}

ScoreMap downscale_score_map(const ScoreMap& sm, int max_side, double theta_score)
{
    if (max_side < 16) throw Error(ErrorCode::InvalidArgument, "max_side must be >= 16");
    const auto [ow, oh] = working_dims(sm.width(), sm.height(), max_side);
    if (ow == sm.width() && oh == sm.height()) return sm;

    ScoreMap out(ow, oh);
    resample<double>(
        sm.width(), sm.height(), ow, oh, [&](int x, int y) { return sm.at(x, y); },
        [](double& dst, double v, double wgt) { dst += v * wgt; }, out.scores());
    for (auto& v : out.scores())
        if (!(v > theta_score)) v = 0.0;
    return out;
}

LabImage downscale_image(const LabImage& img, int max_side)
{
    const auto [ow, oh] = working_dims(img.width(), img.height(), max_side);
    if (ow == img.width() && oh == img.height()) return img;
    LabImage out(ow, oh);
    resample<LabColor>(
        img.width(), img.height(), ow, oh, [&](int x, int y) { return img.at(x, y); },
        [](LabColor& dst, const LabColor& v, double wgt) {
            dst.L += v.L * wgt;
            dst.a += v.a * wgt;
            dst.b += v.b * wgt;
        },
        out.pixels());
    return out;
}

BinaryMask upscale_mask(const BinaryMask& m, int width, int height)
{
    if (width < m.width() || height < m.height())
        throw Error(ErrorCode::InvalidArgument, "upscale target smaller than mask");
    if (width == m.width() && height == m.height()) return m;
    BinaryMask out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = static_cast<int>(static_cast<long long>(y) * m.height() / height);
        for (int x = 0; x < width; ++x) {
            const int sx = static_cast<int>(static_cast<long long>(x) * m.width() / width);
            out.at(x, y) = m.at(sx, sy);
        }
    }
    return out;
}

SegmentationReport segment(const LabImage& img, const PipelineParams& params, bool keep_artifacts)
{
    params.validate();
    if (img.width() < 1 || img.height() < 1)
        throw Error(ErrorCode::InvalidArgument, "image must be at least 1x1");

    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();

    SegmentationReport rep;
    rep.params = params;
    rep.input_width = img.width();
    rep.input_height = img.height();
    rep.mask = BinaryMask(img.width(), img.height());
    std::tie(rep.working_width, rep.working_height) = working_dims(img.width(), img.height(), params.working_size);
    if (keep_artifacts) rep.artifacts.emplace();

    auto finish = [&](SegmentationStatus status) {
        rep.status = status;
        rep.timings.total_ms = ms_since(t_start);
        return rep;
    };

    // 1. deviation scoring at input resolution
    auto t0 = clock::now();
    const ScoreMap scores = deviation_score_map(img, {params.sigma, params.theta_score, params.radius});
    rep.candidate_count = scores.candidate_count();
    const ScoreMap working_scores = downscale_score_map(scores, params.working_size, params.theta_score);
    const LabImage working = downscale_image(img, params.working_size);
    rep.working_candidate_count = working_scores.candidate_count();
    rep.timings.scoring_ms = ms_since(t0);
    if (rep.artifacts) {
        rep.artifacts->score_map = scores;
        rep.artifacts->working_scores = working_scores;
        rep.artifacts->working_image = working;
    }
    if (rep.working_candidate_count == 0) return finish(SegmentationStatus::NoCandidates);

    // 2. score clustering on the working grid
    t0 = clock::now();
    const DbscanParams db = auto_params(working_scores, params.theta_eps, params.theta_dbscan);
    rep.eps = db.eps;
    rep.min_pts = db.min_pts;
    rep.raw_min_pts = db.raw_min_pts;
    const auto points = candidate_points(working_scores);
    ClusterSet clusters = dbscan(points, db.eps, db.min_pts);
    rep.cluster_count = clusters.clusters.size();
    rep.timings.clustering_ms = ms_since(t0);
    if (clusters.clusters.empty()) {
        if (rep.artifacts) rep.artifacts->clusters = std::move(clusters);
        return finish(SegmentationStatus::NoClusters);
    }
    const RelevantClusters relevant = relevant_clusters(clusters);
    rep.relevant_cluster_count = relevant.cluster_ids.size();
    rep.core_point_count = relevant.core_points.size();

    // 3. mask approximation
    t0 = clock::now();
    const int ww = working.width(), wh = working.height();
    ApproximateMask approx = build_approximate_mask(clusters, relevant, ww, wh, params.theta_rec);
    rep.se_side = approx.se_side;
    rep.timings.approximation_ms = ms_since(t0);

    // 4. color segmentation
    t0 = clock::now();
    std::vector<ColorRegion> regions = color_segment(working, approx.mask, params.theta_dist);
    rep.regions_before = regions.size();
    rep.timings.color_segmentation_ms = ms_since(t0);

    // 5. region scoring
    t0 = clock::now();
    BinaryMask cluster_pixels(ww, wh);
    for (std::size_t id : relevant.cluster_ids)
        for (std::size_t i : clusters.clusters[id]) cluster_pixels.at(clusters.points[i].x, clusters.points[i].y) = 1;
    RegionScoringResult scored = region_scoring(regions, cluster_pixels, params.theta_rel);
    rep.sweeps = scored.sweeps;
    rep.regions_after = static_cast<std::size_t>(std::count(scored.alive.begin(), scored.alive.end(), 1));
    rep.timings.region_scoring_ms = ms_since(t0);

    rep.mask = upscale_mask(scored.mask, img.width(), img.height());

    if (rep.artifacts) {
        rep.artifacts->clusters = std::move(clusters);
        rep.artifacts->relevant = relevant;
        rep.artifacts->approximate_mask = std::move(approx.mask);
        rep.artifacts->regions = std::move(regions);
        rep.artifacts->region_alive = std::move(scored.alive);
    }
    return finish(SegmentationStatus::Ok);
}

const char* status_name(SegmentationStatus s)
{
    switch (s) {
    case SegmentationStatus::Ok: return "ok";
    case SegmentationStatus::NoCandidates: return "no_candidates";
    case SegmentationStatus::NoClusters: return "no_clusters";
    }
    return "unknown";
}

std::string report_json(const SegmentationReport& r, bool with_timings)
{
    nlohmann::ordered_json j;
    j["status"] = status_name(r.status);
    j["input"] = {{"width", r.input_width}, {"height", r.input_height}};
    j["working"] = {{"width", r.working_width}, {"height", r.working_height}};
    j["candidate_count"] = r.candidate_count;
    j["working_candidate_count"] = r.working_candidate_count;
    j["eps"] = r.eps;
    j["min_pts"] = r.min_pts;
    j["raw_min_pts"] = r.raw_min_pts;
    j["cluster_count"] = r.cluster_count;
    j["relevant_cluster_count"] = r.relevant_cluster_count;
    j["core_point_count"] = r.core_point_count;
    j["se_side"] = r.se_side;
    j["regions_before"] = r.regions_before;
    j["regions_after"] = r.regions_after;
    j["sweeps"] = r.sweeps;
    j["mask_pixels"] = r.mask.count();
    const auto& p = r.params;
    j["params"] = {{"theta_score", p.theta_score}, {"theta_eps", p.theta_eps},   {"sigma", p.sigma},
                   {"theta_dist", p.theta_dist},   {"theta_rec", p.theta_rec},   {"theta_rel", p.theta_rel},
                   {"theta_dbscan", p.theta_dbscan}, {"working_size", p.working_size}, {"radius", p.radius}};
    if (with_timings) {
        const auto& t = r.timings;
        j["timings_ms"] = {{"scoring", t.scoring_ms},
                           {"clustering", t.clustering_ms},
                           {"approximation", t.approximation_ms},
                           {"color_segmentation", t.color_segmentation_ms},
                           {"region_scoring", t.region_scoring_ms},
                           {"total", t.total_ms}};
    }
    return j.dump(2);
}

Rgb8 label_color(std::size_t id, std::uint64_t seed)
{
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (id + 1)));
    std::uniform_int_distribution<int> channel(48, 255);
    return {static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
            static_cast<std::uint8_t>(channel(rng))};
}

void write_stage_dump(const SegmentationReport& r, const std::filesystem::path& dir)
{
    if (!r.artifacts) throw Error(ErrorCode::InvalidArgument, "report carries no stage artifacts");
    const auto& a = *r.artifacts;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailed, "cannot create " + dir.string());

    write_file(dir / "01_score.png", encode_png_gray(a.score_map.width(), a.score_map.height(), score_map_gray(a.score_map)));

    const int ww = r.working_width, wh = r.working_height;
    RgbImage clusters(ww, wh);
    for (std::size_t i = 0; i < a.clusters.points.size(); ++i) {
        const auto& p = a.clusters.points[i];
        const int label = a.clusters.labels[i];
        clusters.at(p.x, p.y) = label == kNoise ? Rgb8{80, 80, 80} : label_color(static_cast<std::size_t>(label));
    }
    write_file(dir / "02_clusters.png", encode_png_rgb(clusters));

    BinaryMask approx = a.approximate_mask.size() ? a.approximate_mask : BinaryMask(ww, wh);
    std::vector<std::uint8_t> gray(approx.size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = approx.bits()[i] ? 255 : 0;
    write_file(dir / "03_approx_mask.png", encode_png_gray(ww, wh, gray));

    RgbImage regions(ww, wh);
    for (const auto& reg : a.regions) {
        const Rgb8 c = label_color(static_cast<std::size_t>(reg.id), 0xC0102ULL);
        for (const auto& p : reg.pixels) regions.at(p.x, p.y) = c;
    }
    write_file(dir / "04_regions.png", encode_png_rgb(regions));

    save_mask_png(dir / "05_final_mask.png", r.mask);
}

} // namespace dofseg
