/* Low depth-of-field object segmentation: C interface.
 *
 * All objects are opaque and owned by the caller once returned; release
 * them with the matching *_free function. Functions that can fail return a
 * dofseg_status and leave a message in dofseg_last_error() (per thread).
 * Strings handed out through char** are released with dofseg_string_free.
 */
#ifndef DOFSEG_H
#define DOFSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DOFSEG_API __declspec(dllexport)
#else
#define DOFSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dofseg_status {
    DOFSEG_OK = 0,
    DOFSEG_ERR_INVALID_ARGUMENT = 1,
    DOFSEG_ERR_DIMENSION_MISMATCH = 2,
    DOFSEG_ERR_DECODE = 3,
    DOFSEG_ERR_IO = 4,
    DOFSEG_ERR_EMPTY_REFERENCE = 5,
    DOFSEG_ERR_NO_PIXELS = 6,
    DOFSEG_ERR_SINGLETON_CLASS = 7,
    DOFSEG_ERR_NO_FOREIGN_IMAGES = 8,
    DOFSEG_ERR_NO_FOCUS_REGION = 9,
    DOFSEG_ERR_INTERNAL = 99
} dofseg_status;

/* How a segmentation run ended. Anything but DOFSEG_SEGMENTED comes with an
 * all-zero mask. */
typedef enum dofseg_outcome {
    DOFSEG_SEGMENTED = 0,
    DOFSEG_NO_CANDIDATES = 1,
    DOFSEG_NO_CLUSTERS = 2
} dofseg_outcome;

typedef enum dofseg_method {
    DOFSEG_METHOD_DEVIATION = 0,
    DOFSEG_METHOD_HOS = 1
} dofseg_method;

typedef struct dofseg_params {
    double theta_score;  /* candidate threshold, [0,255] */
    double theta_eps;    /* eps relative to sqrt(pixel count), (0,1] */
    double sigma;        /* pre-blur, pixels, > 0 */
    double theta_dist;   /* color region threshold (Delta E), [0,100] */
    double theta_rec;    /* closing element relative size, (0,1] */
    double theta_rel;    /* region relevance threshold, [0,1] */
    double theta_dbscan; /* minPts score normalizer, > 0 */
    int working_size;    /* longest working side, >= 16 */
    int radius;          /* neighborhood radius, >= 1 */
} dofseg_params;

typedef struct dofseg_eval {
    double d_prime;
    double d;
    uint64_t tp, fp, fn, tn;
} dofseg_eval;

typedef struct dofseg_synth_spec {
    int count;
    uint64_t seed;
    double blur;   /* background defocus sigma, pixels */
    int width;
    int height;
    int classes;   /* > 0 writes a class column, one palette per class */
} dofseg_synth_spec;

typedef struct dofseg_image dofseg_image;
typedef struct dofseg_mask dofseg_mask;
typedef struct dofseg_result dofseg_result;

DOFSEG_API const char* dofseg_version(void);
DOFSEG_API const char* dofseg_last_error(void);
DOFSEG_API const char* dofseg_status_string(dofseg_status status);
DOFSEG_API void dofseg_string_free(char* s);

DOFSEG_API void dofseg_params_default(dofseg_params* params);
DOFSEG_API dofseg_status dofseg_params_validate(const dofseg_params* params);

/* PNG or JPEG. */
DOFSEG_API dofseg_status dofseg_image_load(const char* path, dofseg_image** out);
DOFSEG_API dofseg_status dofseg_image_decode(const uint8_t* bytes, size_t size, dofseg_image** out);
/* Interleaved 8-bit RGB, width*height*3 bytes. */
DOFSEG_API dofseg_status dofseg_image_from_rgb(int width, int height, const uint8_t* rgb, dofseg_image** out);
DOFSEG_API int dofseg_image_width(const dofseg_image* img);
DOFSEG_API int dofseg_image_height(const dofseg_image* img);
DOFSEG_API void dofseg_image_free(dofseg_image* img);

/* Gray level >= 128 counts as foreground. */
DOFSEG_API dofseg_status dofseg_mask_load(const char* path, dofseg_mask** out);
/* width*height bytes, nonzero = foreground. */
DOFSEG_API dofseg_status dofseg_mask_from_bytes(int width, int height, const uint8_t* bits, dofseg_mask** out);
DOFSEG_API int dofseg_mask_width(const dofseg_mask* mask);
DOFSEG_API int dofseg_mask_height(const dofseg_mask* mask);
DOFSEG_API size_t dofseg_mask_count(const dofseg_mask* mask);
/* Copies width*height bytes of 0/1 into `out`; `size` must be large enough. */
DOFSEG_API dofseg_status dofseg_mask_copy(const dofseg_mask* mask, uint8_t* out, size_t size);
/* 8-bit gray PNG with values 0 and 255. */
DOFSEG_API dofseg_status dofseg_mask_save_png(const dofseg_mask* mask, const char* path);
DOFSEG_API void dofseg_mask_free(dofseg_mask* mask);

/* `params` may be NULL for the defaults. With keep_stages set the result can
 * write its intermediate stages later. */
DOFSEG_API dofseg_status dofseg_segment(const dofseg_image* img, const dofseg_params* params, int keep_stages,
                                        dofseg_result** out);
DOFSEG_API dofseg_outcome dofseg_result_outcome(const dofseg_result* result);
/* Borrowed; lives as long as the result. */
DOFSEG_API const dofseg_mask* dofseg_result_mask(const dofseg_result* result);
DOFSEG_API dofseg_status dofseg_result_report_json(const dofseg_result* result, int with_timings, char** out);
DOFSEG_API dofseg_status dofseg_result_write_stages(const dofseg_result* result, const char* dir);
DOFSEG_API void dofseg_result_free(dofseg_result* result);

DOFSEG_API dofseg_status dofseg_evaluate(const dofseg_mask* pred, const dofseg_mask* truth, dofseg_eval* out);
DOFSEG_API dofseg_status dofseg_eval_json(const dofseg_eval* eval, char** out);
/* Manifest with path,mask_path[,pred_path]; rows without pred_path are
 * segmented with `params` (NULL for defaults). */
DOFSEG_API dofseg_status dofseg_evaluate_manifest(const char* manifest, const dofseg_params* params,
                                                  int with_timings, char** out);

/* Writes the score map as an 8-bit gray PNG. */
DOFSEG_API dofseg_status dofseg_diagnose(const dofseg_image* img, dofseg_method method,
                                         const dofseg_params* params, const char* out_png);

/* Manifest with path,class[,mask_path]. */
DOFSEG_API dofseg_status dofseg_similarity(const char* manifest, int bins, double p, int use_masks, char** out);

DOFSEG_API void dofseg_synth_default(dofseg_synth_spec* spec);
DOFSEG_API dofseg_status dofseg_synth(const char* dir, const dofseg_synth_spec* spec);

#ifdef __cplusplus
}
#endif

#endif
