/*
 * tlcrf: two-layer CRF decision fusion, C interface.
 *
 * All objects are opaque handles created by the library and released with the
 * matching *_free function (passing NULL is allowed). Every fallible function
 * returns a tlcrf_status; on failure tlcrf_last_error() describes the problem
 * for the calling thread. Data pointers returned by *_data accessors stay valid
 * until the owning handle is freed.
 *
 * Labels use 65535 (TLCRF_UNLABELED) for pixels without a reference class.
 */
#ifndef TLCRF_H
#define TLCRF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TLCRF_BUILDING_LIBRARY)
#    define TLCRF_API __declspec(dllexport)
#  else
#    define TLCRF_API __declspec(dllimport)
#  endif
#else
#  define TLCRF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TLCRF_UNLABELED 65535u

typedef enum tlcrf_status {
  TLCRF_OK = 0,
  TLCRF_ERR_INVALID_ARGUMENT = 1,
  TLCRF_ERR_DIMENSION_MISMATCH = 2,
  TLCRF_ERR_NONCONTIGUOUS_REGION_IDS = 3,
  TLCRF_ERR_INVALID_PROBABILITIES = 4,
  TLCRF_ERR_INVALID_FLOOR = 5,
  TLCRF_ERR_NO_EDGES = 6,
  TLCRF_ERR_LABEL_OUT_OF_RANGE = 7,
  TLCRF_ERR_INSTANCE_TOO_LARGE = 8,
  TLCRF_ERR_SHAPE_MISMATCH = 9,
  TLCRF_ERR_EMPTY_MATRIX = 10,
  TLCRF_ERR_BAD_MAGIC = 11,
  TLCRF_ERR_TRUNCATED_FILE = 12,
  TLCRF_ERR_BAD_HEADER = 13,
  TLCRF_ERR_IO = 14,
  TLCRF_ERR_OUT_OF_MEMORY = 15,
  TLCRF_ERR_INTERNAL = 16
} tlcrf_status;

typedef enum tlcrf_solver_method {
  TLCRF_SOLVER_TRWS = 0,
  TLCRF_SOLVER_ICM = 1,
  TLCRF_SOLVER_BRUTE_FORCE = 2
} tlcrf_solver_method;

typedef enum tlcrf_layer { TLCRF_LAYER_PIXEL = 0, TLCRF_LAYER_REGION = 1 } tlcrf_layer;

typedef struct tlcrf_raster tlcrf_raster;        /* H x W x bands features */
typedef struct tlcrf_labels tlcrf_labels;        /* H x W class labels */
typedef struct tlcrf_regions tlcrf_regions;      /* H x W region ids 0..R-1 */
typedef struct tlcrf_probs tlcrf_probs;          /* nodes x classes posteriors */
typedef struct tlcrf_result tlcrf_result;        /* output of fuse / baseline */
typedef struct tlcrf_confusion tlcrf_confusion;  /* C x C confusion matrix */

typedef struct tlcrf_segmentation_params {
  double k;
  size_t min_size;
  int connectivity; /* 4 or 8 */
} tlcrf_segmentation_params;

typedef struct tlcrf_fusion_params {
  double lambda_p;
  double lambda_r;
  double mu;
  int sigma_fixed; /* nonzero: use `sigma` for both layers */
  double sigma;
  double prob_floor;
  size_t max_iterations;
  double energy_tolerance;
  tlcrf_solver_method method;
} tlcrf_fusion_params;

typedef struct tlcrf_synth_params {
  size_t height;
  size_t width;
  size_t classes;
  double noise;
  uint64_t seed;
  size_t sites; /* 0 = automatic */
  double confidence;
  double feature_noise;
} tlcrf_synth_params;

typedef struct tlcrf_result_info {
  double energy;
  double lower_bound; /* -inf unless the solver is TRW-S */
  size_t iterations;
  int converged;
  double sigma_p;
  double sigma_r;
} tlcrf_result_info;

typedef struct tlcrf_scores {
  double oa;
  double aa;
  double kappa;
} tlcrf_scores;

TLCRF_API const char* tlcrf_version(void);
TLCRF_API const char* tlcrf_status_string(tlcrf_status status);
TLCRF_API const char* tlcrf_last_error(void);

TLCRF_API void tlcrf_segmentation_params_init(tlcrf_segmentation_params* params);
TLCRF_API void tlcrf_fusion_params_init(tlcrf_fusion_params* params);
TLCRF_API void tlcrf_synth_params_init(tlcrf_synth_params* params);

/* Rasters */
TLCRF_API tlcrf_status tlcrf_raster_create(size_t height, size_t width, size_t bands, const double* values,
                                           tlcrf_raster** out);
TLCRF_API void tlcrf_raster_free(tlcrf_raster* raster);
TLCRF_API tlcrf_status tlcrf_raster_dims(const tlcrf_raster* raster, size_t* height, size_t* width, size_t* bands);
TLCRF_API tlcrf_status tlcrf_raster_data(const tlcrf_raster* raster, const double** values);
/* P6 PPM, or PRB1 when the file starts with that magic (then `width` must be nonzero). */
TLCRF_API tlcrf_status tlcrf_raster_read(const char* path, size_t width, tlcrf_raster** out);
TLCRF_API tlcrf_status tlcrf_raster_write_ppm(const tlcrf_raster* raster, const char* path);
TLCRF_API tlcrf_status tlcrf_raster_write_prb(const tlcrf_raster* raster, const char* path);
TLCRF_API tlcrf_status tlcrf_raster_standardize(const tlcrf_raster* raster, tlcrf_raster** out);

/* Label maps */
TLCRF_API tlcrf_status tlcrf_labels_create(size_t height, size_t width, size_t num_classes, const uint16_t* labels,
                                           tlcrf_labels** out);
TLCRF_API void tlcrf_labels_free(tlcrf_labels* labels);
TLCRF_API tlcrf_status tlcrf_labels_dims(const tlcrf_labels* labels, size_t* height, size_t* width,
                                         size_t* num_classes);
TLCRF_API tlcrf_status tlcrf_labels_data(const tlcrf_labels* labels, const uint16_t** data);
/* num_classes == 0 infers max label + 1 (at least 2). */
TLCRF_API tlcrf_status tlcrf_labels_read_pgm(const char* path, size_t num_classes, tlcrf_labels** out);
TLCRF_API tlcrf_status tlcrf_labels_write_pgm(const tlcrf_labels* labels, const char* path);

/* Region maps */
TLCRF_API tlcrf_status tlcrf_regions_create(size_t height, size_t width, const uint32_t* ids, tlcrf_regions** out);
/* Accepts arbitrary ids and renumbers them by first appearance in row-major order. */
TLCRF_API tlcrf_status tlcrf_regions_relabel(size_t height, size_t width, const uint32_t* ids, tlcrf_regions** out);
TLCRF_API void tlcrf_regions_free(tlcrf_regions* regions);
TLCRF_API tlcrf_status tlcrf_regions_dims(const tlcrf_regions* regions, size_t* height, size_t* width,
                                          size_t* num_regions);
TLCRF_API tlcrf_status tlcrf_regions_data(const tlcrf_regions* regions, const uint32_t** ids);
TLCRF_API tlcrf_status tlcrf_regions_read_pgm(const char* path, tlcrf_regions** out);
TLCRF_API tlcrf_status tlcrf_regions_write_pgm(const tlcrf_regions* regions, const char* path);
TLCRF_API tlcrf_status tlcrf_segment(const tlcrf_raster* raster, const tlcrf_segmentation_params* params,
                                     tlcrf_regions** out);
/* Flattened graph edge list as `u,v,kind` CSV. */
TLCRF_API tlcrf_status tlcrf_graph_write_csv(const tlcrf_regions* regions, const char* path);

/* Probability fields */
TLCRF_API tlcrf_status tlcrf_probs_create(size_t num_nodes, size_t num_classes, const float* probs, tlcrf_probs** out);
TLCRF_API void tlcrf_probs_free(tlcrf_probs* probs);
TLCRF_API tlcrf_status tlcrf_probs_dims(const tlcrf_probs* probs, size_t* num_nodes, size_t* num_classes);
TLCRF_API tlcrf_status tlcrf_probs_data(const tlcrf_probs* probs, const float** data);
TLCRF_API tlcrf_status tlcrf_probs_read(const char* path, tlcrf_probs** out);
TLCRF_API tlcrf_status tlcrf_probs_write(const tlcrf_probs* probs, const char* path);
/* Per-pixel argmax as an H x W label map. */
TLCRF_API tlcrf_status tlcrf_probs_argmax(const tlcrf_probs* probs, size_t height, size_t width, tlcrf_labels** out);
TLCRF_API tlcrf_status tlcrf_pool_region_probs(const tlcrf_probs* pixel_probs, const tlcrf_regions* regions,
                                               tlcrf_probs** out);
/* Majority reference class per region, returned as a 1 x R label map. */
TLCRF_API tlcrf_status tlcrf_majority_labels(const tlcrf_regions* regions, const tlcrf_labels* labels,
                                             tlcrf_labels** out);
TLCRF_API tlcrf_status tlcrf_validate_alignment(const tlcrf_raster* raster, const tlcrf_regions* regions,
                                                const tlcrf_labels* labels);

/* Inference. `region_probs` may be NULL, in which case pooled pixel posteriors are used. */
TLCRF_API tlcrf_status tlcrf_fuse(const tlcrf_raster* raster, const tlcrf_regions* regions,
                                  const tlcrf_probs* pixel_probs, const tlcrf_probs* region_probs,
                                  const tlcrf_fusion_params* params, tlcrf_result** out);
TLCRF_API tlcrf_status tlcrf_baseline(const tlcrf_raster* raster, const tlcrf_regions* regions,
                                      const tlcrf_probs* pixel_probs, const tlcrf_probs* region_probs,
                                      const tlcrf_fusion_params* params, tlcrf_layer layer, tlcrf_result** out);
TLCRF_API void tlcrf_result_free(tlcrf_result* result);
TLCRF_API tlcrf_status tlcrf_result_info_get(const tlcrf_result* result, tlcrf_result_info* info);
/* Pixel-layer labels. Not available for a region-layer baseline. */
TLCRF_API tlcrf_status tlcrf_result_pixel_labels(const tlcrf_result* result, tlcrf_labels** out);
/* Region-layer labels broadcast to pixels. Not available for a pixel-layer baseline. */
TLCRF_API tlcrf_status tlcrf_result_region_labels(const tlcrf_result* result, tlcrf_labels** out);
TLCRF_API tlcrf_status tlcrf_result_region_label_data(const tlcrf_result* result, const uint16_t** labels,
                                                      size_t* count);
TLCRF_API tlcrf_status tlcrf_result_write_trace_csv(const tlcrf_result* result, const char* path);

/* Metrics. num_classes == 0 takes the larger class count of the two maps. */
TLCRF_API tlcrf_status tlcrf_confusion_compute(const tlcrf_labels* reference, const tlcrf_labels* predicted,
                                               size_t num_classes, tlcrf_confusion** out);
TLCRF_API void tlcrf_confusion_free(tlcrf_confusion* cm);
TLCRF_API tlcrf_status tlcrf_confusion_counts(const tlcrf_confusion* cm, const uint64_t** counts,
                                              size_t* num_classes, uint64_t* total);
TLCRF_API tlcrf_status tlcrf_confusion_scores(const tlcrf_confusion* cm, tlcrf_scores* scores);
TLCRF_API tlcrf_status tlcrf_aggregate(const tlcrf_confusion* const* tiles, size_t count, tlcrf_scores* pooled,
                                       tlcrf_scores* averaged);

TLCRF_API tlcrf_status tlcrf_synth(const tlcrf_synth_params* params, tlcrf_raster** image, tlcrf_labels** truth,
                                   tlcrf_probs** pixel_probs);

#ifdef __cplusplus
}
#endif

#endif /* TLCRF_H */
