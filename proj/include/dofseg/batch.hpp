#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dofseg/evaluation.hpp"
#include "dofseg/pipeline.hpp"

namespace dofseg {

/// Every manifest row needs a `mask_path` (the reference). Rows with a
/// `pred_path` are scored as given; the rest are segmented with `params`.
/// Rows are processed and reported in manifest order.
std::string evaluate_manifest_json(const ClassManifest& m, const PipelineParams& params, bool with_timings);

/// Loads every image (and, with `use_masks`, every mask) named by a class
/// manifest and renders the similarity report as JSON.
std::string similarity_manifest_json(const ClassManifest& m, int bins, double p, bool use_masks);

struct SynthSetSpec {
    int count = 10;
    std::uint64_t seed = 1;
    double blur = 8.0;
    int width = 400;
    int height = 300;
    int classes = 0; // > 0: palette per class, one shared background, `class` column
};

/// Writes img_NNNN.png / truth_NNNN.png pairs and manifest.csv into `dir`.
void write_synthetic_set(const std::filesystem::path& dir, const SynthSetSpec& spec);

} // namespace dofseg
