#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dofseg/clustering.hpp"
#include "dofseg/colorspace.hpp"
#include "dofseg/mask_approximation.hpp"
#include "dofseg/morphology.hpp"
#include "dofseg/regions.hpp"
#include "dofseg/scoring.hpp"

namespace dofseg {

struct PipelineParams {
    double theta_score = 50.0;
    double theta_eps = 1.0 / 40.0;
    double sigma = 0.9;
    double theta_dist = 25.0;
    double theta_rec = 1.0 / 3.0;
    double theta_rel = 2.0 / 3.0;
    double theta_dbscan = 255.0;
    int working_size = 400;
    int radius = 1;

    /// Throws Error(InvalidArgument) naming the first out-of-range field.
    void validate() const;
};

enum class SegmentationStatus { Ok, NoCandidates, NoClusters };

struct StageTimings {
    double scoring_ms = 0.0;
    double clustering_ms = 0.0;
    double approximation_ms = 0.0;
    double color_segmentation_ms = 0.0;
    double region_scoring_ms = 0.0;
    double total_ms = 0.0;
};

// Intermediate products on the working grid, kept when requested.
struct StageArtifacts {
    ScoreMap score_map;          // input resolution
    ScoreMap working_scores;
    LabImage working_image;
    ClusterSet clusters;
    RelevantClusters relevant;
    BinaryMask approximate_mask; // working grid, after filtering
    std::vector<ColorRegion> regions;
    std::vector<std::uint8_t> region_alive;
};

struct SegmentationReport {
    SegmentationStatus status = SegmentationStatus::Ok;
    BinaryMask mask; // input resolution
    int input_width = 0, input_height = 0;
    int working_width = 0, working_height = 0;
    std::size_t candidate_count = 0;         // input resolution
    std::size_t working_candidate_count = 0;
    double eps = 0.0;
    int min_pts = 0;
    int raw_min_pts = 0;
    std::size_t cluster_count = 0;
    std::size_t relevant_cluster_count = 0;
    std::size_t core_point_count = 0;
    int se_side = 0;
    std::size_t regions_before = 0;
    std::size_t regions_after = 0;
    int sweeps = 0;
    StageTimings timings;
    PipelineParams params;
    std::optional<StageArtifacts> artifacts;
};

/// Area-average resample so that max(w, h) <= max_side, aspect preserved;
/// values not above theta_score are re-zeroed. No-op when already small enough.
ScoreMap downscale_score_map(const ScoreMap& sm, int max_side, double theta_score);

/// Same geometry and resampling as downscale_score_map, per Lab channel.
LabImage downscale_image(const LabImage& img, int max_side);

/// Output dimensions used by both downscale functions.
std::pair<int, int> working_dims(int width, int height, int max_side);

/// Nearest-neighbor upscale to the target size.
BinaryMask upscale_mask(const BinaryMask& m, int width, int height);

/// Runs all five stages. Empty score maps and cluster sets are reported
/// through `status` with an all-zero mask rather than thrown.
SegmentationReport segment(const LabImage& img, const PipelineParams& params, bool keep_artifacts = false);

/// JSON rendering of a report (without the mask). Timings are emitted only
/// when `with_timings` is set, so default reports are reproducible byte for byte.
std::string report_json(const SegmentationReport& report, bool with_timings);

/// Writes 01_score.png .. 05_final_mask.png. Needs report.artifacts.
void write_stage_dump(const SegmentationReport& report, const std::filesystem::path& dir);

/// Deterministic distinct-ish color for label `id`.
Rgb8 label_color(std::size_t id, std::uint64_t seed = 0x5eedULL);

const char* status_name(SegmentationStatus s);

} // namespace dofseg
