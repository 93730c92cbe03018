#include "dofseg/dofseg.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "dofseg/batch.hpp"
#include "dofseg/error.hpp"
#include "dofseg/evaluation.hpp"
#include "dofseg/imageio.hpp"
#include "dofseg/pipeline.hpp"

struct dofseg_image {
    dofseg::RgbImage rgb;
};

struct dofseg_mask {
    dofseg::BinaryMask bits;
};

struct dofseg_result {
    dofseg::SegmentationReport report;
    dofseg_mask mask;
};

namespace {

thread_local std::string g_last_error;

dofseg_status map_code(dofseg::ErrorCode c)
{
    using dofseg::ErrorCode;
    switch (c) {
    case ErrorCode::InvalidArgument: return DOFSEG_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return DOFSEG_ERR_DIMENSION_MISMATCH;
    case ErrorCode::DecodeFailed: return DOFSEG_ERR_DECODE;
    case ErrorCode::IoFailed: return DOFSEG_ERR_IO;
    case ErrorCode::EmptyReference: return DOFSEG_ERR_EMPTY_REFERENCE;
    case ErrorCode::NoPixels: return DOFSEG_ERR_NO_PIXELS;
    case ErrorCode::SingletonClass: return DOFSEG_ERR_SINGLETON_CLASS;
    case ErrorCode::NoForeignImages: return DOFSEG_ERR_NO_FOREIGN_IMAGES;
    case ErrorCode::NoFocusRegion: return DOFSEG_ERR_NO_FOCUS_REGION;
    }
    return DOFSEG_ERR_INTERNAL;
}

dofseg_status fail(dofseg_status s, const std::string& msg)
{
    g_last_error = msg;
    return s;
}

// Runs `body`, translating exceptions into status codes at the boundary.
template <class F>
dofseg_status guarded(F&& body)
{
    try {
        body();
        g_last_error.clear();
        return DOFSEG_OK;
    } catch (const dofseg::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DOFSEG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DOFSEG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DOFSEG_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what)
{
    if (!ok) throw dofseg::Error(dofseg::ErrorCode::InvalidArgument, what);
}

dofseg::PipelineParams to_params(const dofseg_params* p)
{
    dofseg::PipelineParams out;
    if (!p) return out;
    out.theta_score = p->theta_score;
    out.theta_eps = p->theta_eps;
    out.sigma = p->sigma;
    out.theta_dist = p->theta_dist;
    out.theta_rec = p->theta_rec;
    out.theta_rel = p->theta_rel;
    out.theta_dbscan = p->theta_dbscan;
    out.working_size = p->working_size;
    out.radius = p->radius;
    return out;
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* dofseg_version(void) { return "1.0.0"; }

const char* dofseg_last_error(void) { return g_last_error.c_str(); }

const char* dofseg_status_string(dofseg_status status)
{
    switch (status) {
    case DOFSEG_OK: return "ok";
    case DOFSEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DOFSEG_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case DOFSEG_ERR_DECODE: return "decode failed";
    case DOFSEG_ERR_IO: return "i/o failed";
    case DOFSEG_ERR_EMPTY_REFERENCE: return "reference mask empty";
    case DOFSEG_ERR_NO_PIXELS: return "no pixels to histogram";
    case DOFSEG_ERR_SINGLETON_CLASS: return "singleton class";
    case DOFSEG_ERR_NO_FOREIGN_IMAGES: return "no foreign images";
    case DOFSEG_ERR_NO_FOCUS_REGION: return "no focus region";
    case DOFSEG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void dofseg_string_free(char* s) { std::free(s); }

void dofseg_params_default(dofseg_params* params)
{
    if (!params) return;
    const dofseg::PipelineParams d;
    *params = {d.theta_score, d.theta_eps, d.sigma, d.theta_dist, d.theta_rec,
               d.theta_rel,   d.theta_dbscan, d.working_size, d.radius};
}

dofseg_status dofseg_params_validate(const dofseg_params* params)
{
    return guarded([&] {
        require(params != nullptr, "params is null");
        to_params(params).validate();
    });
}

dofseg_status dofseg_image_load(const char* path, dofseg_image** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new dofseg_image{dofseg::load_rgb(path)};
    });
}

dofseg_status dofseg_image_decode(const uint8_t* bytes, size_t size, dofseg_image** out)
{
    return guarded([&] {
        require(bytes && out, "null argument");
        *out = new dofseg_image{dofseg::decode_rgb({bytes, size})};
    });
}

dofseg_status dofseg_image_from_rgb(int width, int height, const uint8_t* rgb, dofseg_image** out)
{
    return guarded([&] {
        require(rgb && out, "null argument");
        require(width > 0 && height > 0, "image dimensions must be positive");
        dofseg::RgbImage img(width, height);
        for (std::size_t i = 0; i < img.size(); ++i) img.pixels()[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
        *out = new dofseg_image{std::move(img)};
    });
}

int dofseg_image_width(const dofseg_image* img) { return img ? img->rgb.width() : 0; }
int dofseg_image_height(const dofseg_image* img) { return img ? img->rgb.height() : 0; }
void dofseg_image_free(dofseg_image* img) { delete img; }

dofseg_status dofseg_mask_load(const char* path, dofseg_mask** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new dofseg_mask{dofseg::load_mask(path)};
    });
}

dofseg_status dofseg_mask_from_bytes(int width, int height, const uint8_t* bits, dofseg_mask** out)
{
    return guarded([&] {
        require(bits && out, "null argument");
        require(width > 0 && height > 0, "mask dimensions must be positive");
        dofseg::BinaryMask m(width, height);
        for (std::size_t i = 0; i < m.size(); ++i) m.bits()[i] = bits[i] ? 1 : 0;
        *out = new dofseg_mask{std::move(m)};
    });
}

int dofseg_mask_width(const dofseg_mask* mask) { return mask ? mask->bits.width() : 0; }
int dofseg_mask_height(const dofseg_mask* mask) { return mask ? mask->bits.height() : 0; }
size_t dofseg_mask_count(const dofseg_mask* mask) { return mask ? mask->bits.count() : 0; }

dofseg_status dofseg_mask_copy(const dofseg_mask* mask, uint8_t* out, size_t size)
{
    return guarded([&] {
        require(mask && out, "null argument");
        require(size >= mask->bits.size(), "output buffer too small");
        std::memcpy(out, mask->bits.bits().data(), mask->bits.size());
    });
}

dofseg_status dofseg_mask_save_png(const dofseg_mask* mask, const char* path)
{
    return guarded([&] {
        require(mask && path, "null argument");
        dofseg::save_mask_png(path, mask->bits);
    });
}

void dofseg_mask_free(dofseg_mask* mask) { delete mask; }

dofseg_status dofseg_segment(const dofseg_image* img, const dofseg_params* params, int keep_stages,
                             dofseg_result** out)
{
    return guarded([&] {
        require(img && out, "null argument");
        auto* r = new dofseg_result;
        try {
            r->report = dofseg::segment(dofseg::to_lab(img->rgb), to_params(params), keep_stages != 0);
            r->mask.bits = r->report.mask;
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
    });
}

dofseg_outcome dofseg_result_outcome(const dofseg_result* result)
{
    if (!result) return DOFSEG_NO_CANDIDATES;
    switch (result->report.status) {
    case dofseg::SegmentationStatus::Ok: return DOFSEG_SEGMENTED;
    case dofseg::SegmentationStatus::NoCandidates: return DOFSEG_NO_CANDIDATES;
    case dofseg::SegmentationStatus::NoClusters: return DOFSEG_NO_CLUSTERS;
    }
    return DOFSEG_NO_CANDIDATES;
}

const dofseg_mask* dofseg_result_mask(const dofseg_result* result) { return result ? &result->mask : nullptr; }

dofseg_status dofseg_result_report_json(const dofseg_result* result, int with_timings, char** out)
{
    return guarded([&] {
        require(result && out, "null argument");
        *out = dup_string(dofseg::report_json(result->report, with_timings != 0));
    });
}

dofseg_status dofseg_result_write_stages(const dofseg_result* result, const char* dir)
{
    return guarded([&] {
        require(result && dir, "null argument");
        dofseg::write_stage_dump(result->report, dir);
    });
}

void dofseg_result_free(dofseg_result* result) { delete result; }

dofseg_status dofseg_evaluate(const dofseg_mask* pred, const dofseg_mask* truth, dofseg_eval* out)
{
    return guarded([&] {
        require(pred && truth && out, "null argument");
        const auto r = dofseg::spatial_distortion(pred->bits, truth->bits);
        *out = {r.d_prime, r.d, r.tp, r.fp, r.fn, r.tn};
    });
}

dofseg_status dofseg_eval_json(const dofseg_eval* eval, char** out)
{
    return guarded([&] {
        require(eval && out, "null argument");
        dofseg::EvalRecord r;
        r.d_prime = eval->d_prime;
        r.d = eval->d;
        r.tp = eval->tp;
        r.fp = eval->fp;
        r.fn = eval->fn;
        r.tn = eval->tn;
        *out = dup_string(dofseg::eval_record_json(r));
    });
}

dofseg_status dofseg_evaluate_manifest(const char* manifest, const dofseg_params* params, int with_timings,
                                       char** out)
{
    return guarded([&] {
        require(manifest && out, "null argument");
        const auto m = dofseg::load_manifest(manifest);
        *out = dup_string(dofseg::evaluate_manifest_json(m, to_params(params), with_timings != 0));
    });
}

dofseg_status dofseg_diagnose(const dofseg_image* img, dofseg_method method, const dofseg_params* params,
                              const char* out_png)
{
    return guarded([&] {
        require(img && out_png, "null argument");
        const auto p = to_params(params);
        p.validate();
        const auto lab = dofseg::to_lab(img->rgb);
        dofseg::ScoreMap sm;
        switch (method) {
        case DOFSEG_METHOD_DEVIATION: {
            dofseg::ScoringParams sp;
            sp.sigma = p.sigma;
            sp.theta_score = p.theta_score;
            sp.radius = p.radius;
            sm = dofseg::deviation_score_map(lab, sp);
            break;
        }
        case DOFSEG_METHOD_HOS: sm = dofseg::hos_map(lab); break;
        default: throw dofseg::Error(dofseg::ErrorCode::InvalidArgument, "unknown diagnose method");
        }
        dofseg::write_file(out_png, dofseg::encode_png_gray(sm.width(), sm.height(), dofseg::score_map_gray(sm)));
    });
}

dofseg_status dofseg_similarity(const char* manifest, int bins, double p, int use_masks, char** out)
{
    return guarded([&] {
        require(manifest && out, "null argument");
        const auto m = dofseg::load_manifest(manifest);
        *out = dup_string(dofseg::similarity_manifest_json(m, bins, p, use_masks != 0));
    });
}

void dofseg_synth_default(dofseg_synth_spec* spec)
{
    if (!spec) return;
    const dofseg::SynthSetSpec d;
    *spec = {d.count, d.seed, d.blur, d.width, d.height, d.classes};
}

dofseg_status dofseg_synth(const char* dir, const dofseg_synth_spec* spec)
{
    return guarded([&] {
        require(dir && spec, "null argument");
        dofseg::SynthSetSpec s;
        s.count = spec->count;
        s.seed = spec->seed;
        s.blur = spec->blur;
        s.width = spec->width;
        s.height = spec->height;
        s.classes = spec->classes;
        dofseg::write_synthetic_set(dir, s);
    });
}

} // extern "C"
