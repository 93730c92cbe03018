#include "dofseg/batch.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dofseg/error.hpp"
#include "dofseg/imageio.hpp"

namespace dofseg {

std::string evaluate_manifest_json(const ClassManifest& m, const PipelineParams& params, bool with_timings)
{
    params.validate();
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    std::vector<double> ds;
    for (const auto& e : m.entries) {
        if (!e.mask_path)
            throw Error(ErrorCode::InvalidArgument, "manifest row " + e.source + " has no mask_path");
        const BinaryMask truth = load_mask(*e.mask_path);

        nlohmann::ordered_json rec;
        rec["path"] = e.source;
        BinaryMask pred;
        double ms = 0.0;
        if (e.pred_path) {
            pred = load_mask(*e.pred_path);
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            const auto rep = segment(to_lab(load_rgb(e.path)), params);
            ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rec["status"] = status_name(rep.status);
            pred = rep.mask;
        }
        const EvalRecord r = spatial_distortion(pred, truth);
        rec["d_prime"] = r.d_prime;
        rec["d"] = r.d;
        rec["tp"] = r.tp;
        rec["fp"] = r.fp;
        rec["fn"] = r.fn;
        rec["tn"] = r.tn;
        if (with_timings && !e.pred_path) rec["runtime_ms"] = ms;
        records.push_back(std::move(rec));
        ds.push_back(r.d);
    }

    const SummaryStats s = summarize(ds);
    nlohmann::ordered_json j;
    j["records"] = std::move(records);
    j["summary"] = {{"count", s.count},     {"min", s.min}, {"median", s.median},
                    {"average", s.average}, {"std_dev", s.stddev}, {"max", s.max}};
    return j.dump(2);
}

std::string similarity_manifest_json(const ClassManifest& m, int bins, double p, bool use_masks)
{
    if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
    if (m.entries.empty()) throw Error(ErrorCode::InvalidArgument, "manifest has no rows");
    if (const auto lonely = singleton_classes(m); !lonely.empty()) {
        std::string names;
        for (const auto& l : lonely) names += (names.empty() ? "" : ", ") + l;
        throw Error(ErrorCode::SingletonClass, "classes with a single image: " + names);
    }

    std::vector<Histogram> plain, masked;
    for (const auto& e : m.entries) {
        const RgbImage img = load_rgb(e.path);
        plain.push_back(color_histogram(img, nullptr, bins));
        if (use_masks) {
            if (!e.mask_path)
                throw Error(ErrorCode::InvalidArgument, "manifest row " + e.source + " has no mask_path");
            const BinaryMask mask = load_mask(*e.mask_path);
            if (mask.width() != img.width() || mask.height() != img.height())
                throw Error(ErrorCode::DimensionMismatch, "mask size differs from image for " + e.source);
            masked.push_back(color_histogram(img, &mask, bins));
        }
    }
    return similarity_json(similarity_report(m, plain, use_masks ? &masked : nullptr, p));
}

void write_synthetic_set(const std::filesystem::path& dir, const SynthSetSpec& spec)
{
    if (spec.count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
    const int palettes = static_cast<int>(synthetic_palettes().size());
    if (spec.classes < 0 || spec.classes > palettes)
        throw Error(ErrorCode::InvalidArgument, "classes must lie in [0," + std::to_string(palettes) + "]");

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoFailed, "cannot create " + dir.string());

    std::string manifest = spec.classes > 0 ? "path,mask_path,class\n" : "path,mask_path\n";
    for (int i = 0; i < spec.count; ++i) {
        SyntheticSpec s;
        s.width = spec.width;
        s.height = spec.height;
        s.blur_sigma = spec.blur;
        s.seed = spec.seed + static_cast<std::uint64_t>(i);
        s.shape = i % 2 ? SyntheticShape::Ellipse : SyntheticShape::Disc;
        if (spec.classes > 0) {
            s.palette = i % spec.classes;
            s.background_seed = spec.seed;
        }
        const SyntheticImage syn = make_synthetic(s);

        char img_name[32], truth_name[32];
        std::snprintf(img_name, sizeof img_name, "img_%04d.png", i);
        std::snprintf(truth_name, sizeof truth_name, "truth_%04d.png", i);
        write_file(dir / img_name, encode_png_rgb(syn.image));
        save_mask_png(dir / truth_name, syn.truth);
        manifest += std::string(img_name) + "," + truth_name;
        if (spec.classes > 0) manifest += ",class" + std::to_string(i % spec.classes);
        manifest += "\n";
    }

    std::ofstream out(dir / "manifest.csv", std::ios::binary);
    out << manifest;
    if (!out) throw Error(ErrorCode::IoFailed, "cannot write " + (dir / "manifest.csv").string());
}

} // namespace dofseg
