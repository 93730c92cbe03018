#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dofseg/colorspace.hpp"
#include "dofseg/morphology.hpp"

namespace dofseg {

// ---- segmentation quality -------------------------------------------------

struct EvalRecord {
    double d_prime = 0.0;
    double d = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// d' = |pred XOR truth| / |truth|, d = min(1, d'). Throws EmptyReference for
/// an all-zero truth and DimensionMismatch for differing shapes.
EvalRecord spatial_distortion(const BinaryMask& pred, const BinaryMask& truth);

struct SummaryStats {
    std::size_t count = 0;
    double min = 0.0, median = 0.0, average = 0.0, stddev = 0.0, max = 0.0;
};

/// Population standard deviation; median averages the middle pair for even counts.
SummaryStats summarize(std::vector<double> values);

// ---- retrieval -------------------------------------------------------------

struct Histogram {
    std::vector<double> bins;
    bool normalized = false;

    double total() const;
    Histogram normalized_copy() const;
};

inline constexpr double kAchromaticSaturation = 0.05;

/// Hue histogram: the hue circle is split into `bins` equal arcs starting at
/// 0 degrees; pixels with HSV saturation below 0.05 count toward the bin of
/// hue 0. Pixels outside `mask` are skipped. Throws NoPixels when nothing is
/// counted.
Histogram color_histogram(const RgbImage& img, const BinaryMask* mask = nullptr, int bins = 12);
/// Same, with hue taken from the sRGB rendering of the Lab pixels.
Histogram color_histogram(const LabImage& img, const BinaryMask* mask = nullptr, int bins = 12);

/// (sum |q_i - t_i|^p)^(1/p).
double minkowski_distance(const Histogram& q, const Histogram& t, double p = 2.0);

struct ClassManifest {
    struct Entry {
        std::filesystem::path path;
        std::string source; // path as written in the manifest
        std::string label;
        std::optional<std::filesystem::path> mask_path;
        std::optional<std::filesystem::path> pred_path;
    };
    std::vector<Entry> entries;

    std::vector<std::string> class_order() const; // first-appearance order
};

/// Mean distance from entry `index` to the other members of its class.
double inner_class_distance(const ClassManifest& m, std::size_t index, const std::vector<Histogram>& hists,
                            double p = 2.0);
/// Mean distance from entry `index` to every entry of a different class.
double inter_class_distance(const ClassManifest& m, std::size_t index, const std::vector<Histogram>& hists,
                            double p = 2.0);

struct ClassSimilarity {
    std::string label;
    std::size_t images = 0;
    double inner = 0.0;
    std::optional<double> inter;
    std::optional<double> masked_inner;
    std::optional<double> masked_inter;
    std::optional<double> ratio_inner;
    std::optional<double> ratio_outer;
    std::optional<double> gap;
    std::optional<double> masked_gap;
    std::optional<double> gap_delta;
};

struct SimilarityReport {
    std::vector<ClassSimilarity> classes;
    ClassSimilarity overall;
    bool normalized = false;
    int bins = 12;
    double p = 2.0;
};

/// Histograms are compared as raw counts when every histogram in play has
/// the same mass, otherwise as frequencies. `masked`, when given, holds one
/// histogram per entry computed under that entry's mask.
SimilarityReport similarity_report(const ClassManifest& m, const std::vector<Histogram>& unmasked,
                                   const std::vector<Histogram>* masked, double p = 2.0);

std::string similarity_json(const SimilarityReport& r);
std::string eval_record_json(const EvalRecord& r);

// ---- manifests ---------------------------------------------------------------

/// CSV with a header naming `path` plus `class` and/or `mask_path` columns;
/// an optional `pred_path` column names precomputed masks. Relative paths
/// resolve against the manifest's directory.
ClassManifest load_manifest(const std::filesystem::path& csv);

/// Singleton classes, by label; empty when every class has >= 2 members.
std::vector<std::string> singleton_classes(const ClassManifest& m);

// ---- synthetic ground truth -----------------------------------------------

enum class SyntheticShape { Disc, Ellipse };
enum class SyntheticTexture { Cells, Stripes, Checker };

struct SyntheticSpec {
    int width = 400;
    int height = 300;
    double blur_sigma = 8.0;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> background_seed; // defaults to `seed`
    SyntheticShape shape = SyntheticShape::Disc;
    std::optional<int> palette;                   // index into synthetic_palettes()
    SyntheticTexture texture = SyntheticTexture::Checker;
    int cell = 2;                                 // texture cell or stripe width, pixels
};

struct SyntheticImage {
    RgbImage image;
    BinaryMask truth;
};

struct Palette {
    Rgb8 first;
    Rgb8 second;
};

/// High-contrast two-color foreground palettes.
const std::vector<Palette>& synthetic_palettes();

/// Blurred textured background with a sharp two-color textured shape on top.
/// Deterministic for a given spec. Throws for dims below 64x64 or negative blur.
SyntheticImage make_synthetic(const SyntheticSpec& spec);

/// Area-average downscale of an image and majority downscale of its mask so
/// that the longest side equals `longest`.
SyntheticImage rescale_synthetic(const SyntheticImage& s, int longest);

} // namespace dofseg
