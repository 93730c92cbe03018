// dofseg command-line front end. Talks to the library only through dofseg.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dofseg/dofseg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitEmpty = 2;

// Flat JSON object whose keys are long flag names of the chosen subcommand,
// with or without the leading dashes; underscores may stand in for hyphens.
// Config files are read after the command line is parsed, so the selected
// subcommand is already known and keys are routed to it.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override
    {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config", "config must be a JSON object");

        const auto chosen = root_->get_subcommands();
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            if (!chosen.empty()) item.parents = {chosen.front()->get_name()};
            item.name = key.substr(key.find_first_not_of('-') == std::string::npos ? 0 : key.find_first_not_of('-'));
            for (auto& c : item.name)
                if (c == '_') c = '-';
            auto scalar = [&](const nlohmann::json& v) -> std::string {
                if (v.is_string()) return v.get<std::string>();
                if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
                if (v.is_number()) return v.dump();
                throw CLI::ConversionError(key, "config values must be scalars or arrays of scalars");
            };
            if (value.is_array())
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    const CLI::App* root_;
};

struct Failure {
    dofseg_status status;
};

void check(dofseg_status s)
{
    if (s != DOFSEG_OK) throw Failure{s};
}

struct StringOut {
    char* p = nullptr;
    ~StringOut() { dofseg_string_free(p); }
};

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Free(p); }
};
using Image = Handle<dofseg_image, dofseg_image_free>;
using Mask = Handle<dofseg_mask, dofseg_mask_free>;
using Result = Handle<dofseg_result, dofseg_result_free>;

void write_text(const std::string& path, const char* text)
{
    std::ofstream out(path, std::ios::binary);
    out << text << '\n';
    if (!out) throw CLI::FileError("cannot write " + path);
}

void add_pipeline_flags(CLI::App* sub, dofseg_params& p)
{
    sub->add_option("--theta-score", p.theta_score, "Candidate score threshold")
        ->check(CLI::Range(0.0, 255.0))
        ->capture_default_str();
    sub->add_option("--theta-eps", p.theta_eps, "DBSCAN radius relative to sqrt(pixel count), in (0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--sigma", p.sigma, "Pre-blur sigma in pixels, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--theta-dist", p.theta_dist, "Color region distance (Delta E)")
        ->check(CLI::Range(0.0, 100.0))
        ->capture_default_str();
    sub->add_option("--theta-rec", p.theta_rec, "Closing element size relative to sqrt(pixel count), in (0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--theta-rel", p.theta_rel, "Region relevance threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--theta-dbscan", p.theta_dbscan, "Score normalizer for minPts, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--working-size", p.working_size, "Longest side of the working grid")
        ->check(CLI::Range(16, 1 << 16))
        ->capture_default_str();
    sub->add_option("--radius", p.radius, "Neighborhood radius in pixels")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Object-of-interest segmentation for low depth-of-field images"};
    app.set_version_flag("--version", dofseg_version());
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "JSON file supplying flag values; command-line flags win");
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.allow_config_extras(CLI::config_extras_mode::error);

    dofseg_params params;
    dofseg_params_default(&params);

    // segment
    auto* seg = app.add_subcommand("segment", "Segment the in-focus object of an image");
    std::string seg_in, seg_out, seg_report, seg_stages;
    bool seg_timings = false;
    seg->add_option("input", seg_in, "Input PNG or JPEG")->required();
    seg->add_option("-o,--output", seg_out, "Output mask PNG")->required();
    seg->add_option("--report", seg_report, "Write the JSON report here");
    seg->add_option("--stages", seg_stages, "Write stage images into this directory");
    seg->add_flag("--timings", seg_timings, "Include stage timings in the report");
    add_pipeline_flags(seg, params);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Spatial distortion against reference masks");
    std::string ev_pred, ev_truth, ev_manifest;
    bool ev_timings = false;
    auto* o_pred = ev->add_option("--pred", ev_pred, "Predicted mask PNG");
    auto* o_truth = ev->add_option("--truth", ev_truth, "Reference mask PNG");
    auto* o_man = ev->add_option("--manifest", ev_manifest, "CSV with path,mask_path[,pred_path]");
    o_pred->needs(o_truth);
    o_truth->needs(o_pred);
    o_man->excludes(o_pred)->excludes(o_truth);
    ev->add_flag("--timings", ev_timings, "Include per-image runtimes (manifest mode)");
    add_pipeline_flags(ev, params);

    // diagnose
    auto* dg = app.add_subcommand("diagnose", "Write a score map as a gray PNG");
    std::string dg_in, dg_out, dg_method = "deviation";
    dg->add_option("input", dg_in, "Input PNG or JPEG")->required();
    dg->add_option("-o,--output", dg_out, "Output PNG")->required();
    dg->add_option("--method", dg_method, "deviation or hos")
        ->check(CLI::IsMember({"deviation", "hos"}))
        ->capture_default_str();
    dg->add_option("--theta-score", params.theta_score, "Candidate score threshold")
        ->check(CLI::Range(0.0, 255.0))
        ->capture_default_str();
    dg->add_option("--sigma", params.sigma, "Pre-blur sigma in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    dg->add_option("--radius", params.radius, "Neighborhood radius")->check(CLI::Range(1, 64))->capture_default_str();

    // similarity
    auto* sim = app.add_subcommand("similarity", "Inner- and inter-class histogram distances");
    std::string sim_manifest;
    int sim_bins = 12;
    double sim_p = 2.0;
    bool sim_masks = false;
    sim->add_option("--manifest", sim_manifest, "CSV with path,class[,mask_path]")->required();
    sim->add_option("--bins", sim_bins, "Hue histogram bins")->check(CLI::Range(1, 360))->capture_default_str();
    sim->add_option("--p", sim_p, "Minkowski order")->check(CLI::Range(1.0, 1e6))->capture_default_str();
    sim->add_flag("--use-masks", sim_masks, "Also compare histograms restricted to the masks");

    // synth
    auto* syn = app.add_subcommand("synth", "Write synthetic images with exact reference masks");
    dofseg_synth_spec synth;
    dofseg_synth_default(&synth);
    std::string syn_dir;
    syn->add_option("--out-dir", syn_dir, "Output directory")->required();
    syn->add_option("--count", synth.count, "Number of images")->check(CLI::Range(0, 100000))->capture_default_str();
    syn->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    syn->add_option("--blur", synth.blur, "Background blur sigma")->check(CLI::Range(0.0, 100.0))->capture_default_str();
    syn->add_option("--width", synth.width, "Image width")->check(CLI::Range(64, 8192))->capture_default_str();
    syn->add_option("--height", synth.height, "Image height")->check(CLI::Range(64, 8192))->capture_default_str();
    syn->add_option("--classes", synth.classes, "Classes (0 = no class column)")
        ->check(CLI::Range(0, 5))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        // Ranges are checked before touching any file.
        check(dofseg_params_validate(&params));

        if (*seg) {
            Image img;
            check(dofseg_image_load(seg_in.c_str(), &img.p));
            Result res;
            check(dofseg_segment(img.p, &params, seg_stages.empty() ? 0 : 1, &res.p));
            check(dofseg_mask_save_png(dofseg_result_mask(res.p), seg_out.c_str()));
            if (!seg_report.empty()) {
                StringOut json;
                check(dofseg_result_report_json(res.p, seg_timings ? 1 : 0, &json.p));
                write_text(seg_report, json.p);
            }
            if (!seg_stages.empty()) check(dofseg_result_write_stages(res.p, seg_stages.c_str()));
            const dofseg_outcome outcome = dofseg_result_outcome(res.p);
            if (outcome != DOFSEG_SEGMENTED) {
                std::cerr << "note: "
                          << (outcome == DOFSEG_NO_CANDIDATES ? "no sharp candidates found" : "no clusters found")
                          << "; wrote an empty mask\n";
                return kExitEmpty;
            }
        } else if (*ev) {
            StringOut json;
            if (!ev_manifest.empty()) {
                check(dofseg_evaluate_manifest(ev_manifest.c_str(), &params, ev_timings ? 1 : 0, &json.p));
            } else if (!ev_pred.empty()) {
                Mask pred, truth;
                check(dofseg_mask_load(ev_pred.c_str(), &pred.p));
                check(dofseg_mask_load(ev_truth.c_str(), &truth.p));
                dofseg_eval e;
                check(dofseg_evaluate(pred.p, truth.p, &e));
                check(dofseg_eval_json(&e, &json.p));
            } else {
                std::cerr << "error: evaluate needs --pred and --truth, or --manifest\n";
                return kExitError;
            }
            std::cout << json.p << '\n';
        } else if (*dg) {
            Image img;
            check(dofseg_image_load(dg_in.c_str(), &img.p));
            const dofseg_method m = dg_method == "hos" ? DOFSEG_METHOD_HOS : DOFSEG_METHOD_DEVIATION;
            check(dofseg_diagnose(img.p, m, &params, dg_out.c_str()));
        } else if (*sim) {
            StringOut json;
            check(dofseg_similarity(sim_manifest.c_str(), sim_bins, sim_p, sim_masks ? 1 : 0, &json.p));
            std::cout << json.p << '\n';
        } else if (*syn) {
            check(dofseg_synth(syn_dir.c_str(), &synth));
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << dofseg_status_string(f.status) << ": " << dofseg_last_error() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
