#include "tlcrf/tlcrf.h"

#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "tlcrf/error.hpp"
#include "tlcrf/io.hpp"
#include "tlcrf/metrics.hpp"
#include "tlcrf/pipeline.hpp"
#include "tlcrf/segmentation.hpp"
#include "tlcrf/synth.hpp"

struct tlcrf_raster {
  tlcrf::FeatureRaster value;
};
struct tlcrf_labels {
  tlcrf::LabelMap value;
};
struct tlcrf_regions {
  tlcrf::RegionMap value;
};
struct tlcrf_probs {
  tlcrf::ProbabilityField value;
};
struct tlcrf_confusion {
  tlcrf::ConfusionMatrix value;
};
struct tlcrf_result {
  std::optional<tlcrf::LabelMap> pixel_labels;
  std::optional<tlcrf::LabelMap> region_labels_pixel;
  std::vector<tlcrf::Label> region_labels;
  tlcrf::SolverResult solver;
  double sigma_p = 0.0;
  double sigma_r = 0.0;
};

namespace {

thread_local std::string last_error;

template <typename F>
tlcrf_status guarded(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return TLCRF_OK;
  } catch (const tlcrf::Error& e) {
    last_error = e.what();
    return static_cast<tlcrf_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TLCRF_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TLCRF_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return TLCRF_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw tlcrf::Error(tlcrf::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

tlcrf::FusionParams to_fusion_params(const tlcrf_fusion_params& p) {
  tlcrf::FusionParams out;
  out.lambda_p = p.lambda_p;
  out.lambda_r = p.lambda_r;
  out.mu = p.mu;
  if (p.sigma_fixed) out.sigma = p.sigma;
  out.prob_floor = p.prob_floor;
  out.solver.max_iterations = p.max_iterations;
  out.solver.energy_tolerance = p.energy_tolerance;
  switch (p.method) {
    case TLCRF_SOLVER_TRWS: out.solver.method = tlcrf::SolverMethod::TRWS; break;
    case TLCRF_SOLVER_ICM: out.solver.method = tlcrf::SolverMethod::ICM; break;
    case TLCRF_SOLVER_BRUTE_FORCE: out.solver.method = tlcrf::SolverMethod::BruteForce; break;
    default: throw tlcrf::Error(tlcrf::ErrorCode::InvalidArgument, "unknown solver method");
  }
  return out;
}

const tlcrf::ProbabilityField& region_probs_or_pooled(const tlcrf_probs* region_probs, const tlcrf_probs* pixel_probs,
                                                      const tlcrf_regions* regions,
                                                      std::optional<tlcrf::ProbabilityField>& storage) {
  if (region_probs != nullptr) return region_probs->value;
  storage.emplace(tlcrf::pool_region_probs(pixel_probs->value, regions->value));
  return *storage;
}

}  // namespace

extern "C" {

const char* tlcrf_version(void) { return "0.1.0"; }

const char* tlcrf_status_string(tlcrf_status status) {
  switch (status) {
    case TLCRF_OK: return "OK";
    case TLCRF_ERR_OUT_OF_MEMORY: return "OutOfMemory";
    case TLCRF_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= TLCRF_ERR_INVALID_ARGUMENT && status <= TLCRF_ERR_IO) {
    return tlcrf::to_string(static_cast<tlcrf::ErrorCode>(status));
  }
  return "Unknown";
}

const char* tlcrf_last_error(void) { return last_error.c_str(); }

void tlcrf_segmentation_params_init(tlcrf_segmentation_params* params) {
  if (params == nullptr) return;
  const tlcrf::SegmentationParams defaults;
  params->k = defaults.k;
  params->min_size = defaults.min_size;
  params->connectivity = defaults.connectivity;
}

void tlcrf_fusion_params_init(tlcrf_fusion_params* params) {
  if (params == nullptr) return;
  const tlcrf::FusionParams defaults;
  params->lambda_p = defaults.lambda_p;
  params->lambda_r = defaults.lambda_r;
  params->mu = defaults.mu;
  params->sigma_fixed = 0;
  params->sigma = 1.0;
  params->prob_floor = defaults.prob_floor;
  params->max_iterations = defaults.solver.max_iterations;
  params->energy_tolerance = defaults.solver.energy_tolerance;
  params->method = TLCRF_SOLVER_TRWS;
}

void tlcrf_synth_params_init(tlcrf_synth_params* params) {
  if (params == nullptr) return;
  const tlcrf::SynthParams defaults;
  params->height = defaults.height;
  params->width = defaults.width;
  params->classes = defaults.classes;
  params->noise = defaults.noise;
  params->seed = defaults.seed;
  params->sites = defaults.sites;
  params->confidence = defaults.confidence;
  params->feature_noise = defaults.feature_noise;
}

/* Rasters */

tlcrf_status tlcrf_raster_create(size_t height, size_t width, size_t bands, const double* values,
                                 tlcrf_raster** out) {
  return guarded([&] {
    require(values, "values");
    require(out, "out");
    std::vector<double> v(values, values + height * width * bands);
    *out = new tlcrf_raster{tlcrf::FeatureRaster(height, width, bands, std::move(v))};
  });
}

void tlcrf_raster_free(tlcrf_raster* raster) { delete raster; }

tlcrf_status tlcrf_raster_dims(const tlcrf_raster* raster, size_t* height, size_t* width, size_t* bands) {
  return guarded([&] {
    require(raster, "raster");
    if (height) *height = raster->value.height();
    if (width) *width = raster->value.width();
    if (bands) *bands = raster->value.bands();
  });
}

tlcrf_status tlcrf_raster_data(const tlcrf_raster* raster, const double** values) {
  return guarded([&] {
    require(raster, "raster");
    require(values, "values");
    *values = raster->value.values().data();
  });
}

tlcrf_status tlcrf_raster_read(const char* path, size_t width, tlcrf_raster** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::optional<std::size_t> w;
    if (width > 0) w = width;
    *out = new tlcrf_raster{tlcrf::read_raster(path, w)};
  });
}

tlcrf_status tlcrf_raster_write_ppm(const tlcrf_raster* raster, const char* path) {
  return guarded([&] {
    require(raster, "raster");
    require(path, "path");
    tlcrf::write_ppm(std::string(path), raster->value);
  });
}

tlcrf_status tlcrf_raster_write_prb(const tlcrf_raster* raster, const char* path) {
  return guarded([&] {
    require(raster, "raster");
    require(path, "path");
    tlcrf::write_raster_prb(std::string(path), raster->value);
  });
}

tlcrf_status tlcrf_raster_standardize(const tlcrf_raster* raster, tlcrf_raster** out) {
  return guarded([&] {
    require(raster, "raster");
    require(out, "out");
    *out = new tlcrf_raster{tlcrf::standardize(raster->value)};
  });
}

/* Label maps */

tlcrf_status tlcrf_labels_create(size_t height, size_t width, size_t num_classes, const uint16_t* labels,
                                 tlcrf_labels** out) {
  return guarded([&] {
    require(labels, "labels");
    require(out, "out");
    std::vector<tlcrf::Label> v(labels, labels + height * width);
    *out = new tlcrf_labels{tlcrf::LabelMap(height, width, num_classes, std::move(v))};
  });
}

void tlcrf_labels_free(tlcrf_labels* labels) { delete labels; }

tlcrf_status tlcrf_labels_dims(const tlcrf_labels* labels, size_t* height, size_t* width, size_t* num_classes) {
  return guarded([&] {
    require(labels, "labels");
    if (height) *height = labels->value.height();
    if (width) *width = labels->value.width();
    if (num_classes) *num_classes = labels->value.num_classes();
  });
}

tlcrf_status tlcrf_labels_data(const tlcrf_labels* labels, const uint16_t** data) {
  return guarded([&] {
    require(labels, "labels");
    require(data, "data");
    *data = labels->value.labels().data();
  });
}

tlcrf_status tlcrf_labels_read_pgm(const char* path, size_t num_classes, tlcrf_labels** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::optional<std::size_t> classes;
    if (num_classes > 0) classes = num_classes;
    *out = new tlcrf_labels{tlcrf::read_label_pgm(std::string(path), classes)};
  });
}

tlcrf_status tlcrf_labels_write_pgm(const tlcrf_labels* labels, const char* path) {
  return guarded([&] {
    require(labels, "labels");
    require(path, "path");
    tlcrf::write_label_pgm(std::string(path), labels->value);
  });
}

/* Region maps */

tlcrf_status tlcrf_regions_create(size_t height, size_t width, const uint32_t* ids, tlcrf_regions** out) {
  return guarded([&] {
    require(ids, "ids");
    require(out, "out");
    std::vector<tlcrf::RegionId> v(ids, ids + height * width);
    *out = new tlcrf_regions{tlcrf::RegionMap(height, width, std::move(v))};
  });
}

tlcrf_status tlcrf_regions_relabel(size_t height, size_t width, const uint32_t* ids, tlcrf_regions** out) {
  return guarded([&] {
    require(ids, "ids");
    require(out, "out");
    *out = new tlcrf_regions{
        tlcrf::relabel_contiguous(height, width, std::span<const tlcrf::RegionId>(ids, height * width))};
  });
}

void tlcrf_regions_free(tlcrf_regions* regions) { delete regions; }

tlcrf_status tlcrf_regions_dims(const tlcrf_regions* regions, size_t* height, size_t* width, size_t* num_regions) {
  return guarded([&] {
    require(regions, "regions");
    if (height) *height = regions->value.height();
    if (width) *width = regions->value.width();
    if (num_regions) *num_regions = regions->value.num_regions();
  });
}

tlcrf_status tlcrf_regions_data(const tlcrf_regions* regions, const uint32_t** ids) {
  return guarded([&] {
    require(regions, "regions");
    require(ids, "ids");
    *ids = regions->value.ids().data();
  });
}

tlcrf_status tlcrf_regions_read_pgm(const char* path, tlcrf_regions** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tlcrf_regions{tlcrf::read_region_pgm(std::string(path))};
  });
}

tlcrf_status tlcrf_regions_write_pgm(const tlcrf_regions* regions, const char* path) {
  return guarded([&] {
    require(regions, "regions");
    require(path, "path");
    tlcrf::write_region_pgm(std::string(path), regions->value);
  });
}

tlcrf_status tlcrf_segment(const tlcrf_raster* raster, const tlcrf_segmentation_params* params,
                           tlcrf_regions** out) {
  return guarded([&] {
    require(raster, "raster");
    require(params, "params");
    require(out, "out");
    tlcrf::SegmentationParams p;
    p.k = params->k;
    p.min_size = params->min_size;
    p.connectivity = params->connectivity;
    *out = new tlcrf_regions{tlcrf::segment(raster->value, p)};
  });
}

tlcrf_status tlcrf_graph_write_csv(const tlcrf_regions* regions, const char* path) {
  return guarded([&] {
    require(regions, "regions");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw tlcrf::Error(tlcrf::ErrorCode::IoError, std::string("cannot open ") + path);
    const auto graph = tlcrf::flatten(regions->value.height(), regions->value.width(), regions->value);
    tlcrf::write_edge_csv(graph, out);
    if (!out) throw tlcrf::Error(tlcrf::ErrorCode::IoError, std::string("write failed: ") + path);
  });
}

/* Probability fields */

tlcrf_status tlcrf_probs_create(size_t num_nodes, size_t num_classes, const float* probs, tlcrf_probs** out) {
  return guarded([&] {
    require(probs, "probs");
    require(out, "out");
    std::vector<float> v(probs, probs + num_nodes * num_classes);
    *out = new tlcrf_probs{tlcrf::ProbabilityField(num_nodes, num_classes, std::move(v))};
  });
}

void tlcrf_probs_free(tlcrf_probs* probs) { delete probs; }

tlcrf_status tlcrf_probs_dims(const tlcrf_probs* probs, size_t* num_nodes, size_t* num_classes) {
  return guarded([&] {
    require(probs, "probs");
    if (num_nodes) *num_nodes = probs->value.num_nodes();
    if (num_classes) *num_classes = probs->value.num_classes();
  });
}

tlcrf_status tlcrf_probs_data(const tlcrf_probs* probs, const float** data) {
  return guarded([&] {
    require(probs, "probs");
    require(data, "data");
    *data = probs->value.probs().data();
  });
}

tlcrf_status tlcrf_probs_read(const char* path, tlcrf_probs** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tlcrf_probs{tlcrf::read_probs(std::string(path))};
  });
}

tlcrf_status tlcrf_probs_write(const tlcrf_probs* probs, const char* path) {
  return guarded([&] {
    require(probs, "probs");
    require(path, "path");
    tlcrf::write_probs(std::string(path), probs->value);
  });
}

tlcrf_status tlcrf_probs_argmax(const tlcrf_probs* probs, size_t height, size_t width, tlcrf_labels** out) {
  return guarded([&] {
    require(probs, "probs");
    require(out, "out");
    if (height * width != probs->value.num_nodes()) {
      throw tlcrf::Error(tlcrf::ErrorCode::DimensionMismatch, "grid does not match the posterior node count");
    }
    *out = new tlcrf_labels{tlcrf::LabelMap(height, width, probs->value.num_classes(), probs->value.argmax())};
  });
}

tlcrf_status tlcrf_pool_region_probs(const tlcrf_probs* pixel_probs, const tlcrf_regions* regions,
                                     tlcrf_probs** out) {
  return guarded([&] {
    require(pixel_probs, "pixel_probs");
    require(regions, "regions");
    require(out, "out");
    *out = new tlcrf_probs{tlcrf::pool_region_probs(pixel_probs->value, regions->value)};
  });
}

tlcrf_status tlcrf_majority_labels(const tlcrf_regions* regions, const tlcrf_labels* labels, tlcrf_labels** out) {
  return guarded([&] {
    require(regions, "regions");
    require(labels, "labels");
    require(out, "out");
    auto majority = tlcrf::majority_label(regions->value, labels->value);
    const std::size_t count = majority.size();
    *out = new tlcrf_labels{tlcrf::LabelMap(1, count, labels->value.num_classes(), std::move(majority))};
  });
}

tlcrf_status tlcrf_validate_alignment(const tlcrf_raster* raster, const tlcrf_regions* regions,
                                      const tlcrf_labels* labels) {
  return guarded([&] {
    require(raster, "raster");
    require(regions, "regions");
    require(labels, "labels");
    tlcrf::validate_alignment(raster->value, regions->value, labels->value);
  });
}

/* Inference */

tlcrf_status tlcrf_fuse(const tlcrf_raster* raster, const tlcrf_regions* regions, const tlcrf_probs* pixel_probs,
                        const tlcrf_probs* region_probs, const tlcrf_fusion_params* params, tlcrf_result** out) {
  return guarded([&] {
    require(raster, "raster");
    require(regions, "regions");
    require(pixel_probs, "pixel_probs");
    require(params, "params");
    require(out, "out");
    std::optional<tlcrf::ProbabilityField> pooled;
    const auto& rp = region_probs_or_pooled(region_probs, pixel_probs, regions, pooled);
    auto fused = tlcrf::fuse(raster->value, regions->value, pixel_probs->value, rp, to_fusion_params(*params));
    auto result = std::make_unique<tlcrf_result>();
    result->pixel_labels.emplace(std::move(fused.pixel_labels));
    result->region_labels_pixel.emplace(std::move(fused.region_labels_pixel));
    result->region_labels = std::move(fused.region_labels);
    result->solver = std::move(fused.solver);
    result->sigma_p = fused.sigma_p;
    result->sigma_r = fused.sigma_r;
    *out = result.release();
  });
}

tlcrf_status tlcrf_baseline(const tlcrf_raster* raster, const tlcrf_regions* regions, const tlcrf_probs* pixel_probs,
                            const tlcrf_probs* region_probs, const tlcrf_fusion_params* params, tlcrf_layer layer,
                            tlcrf_result** out) {
  return guarded([&] {
    require(raster, "raster");
    require(regions, "regions");
    require(pixel_probs, "pixel_probs");
    require(params, "params");
    require(out, "out");
    if (layer != TLCRF_LAYER_PIXEL && layer != TLCRF_LAYER_REGION) {
      throw tlcrf::Error(tlcrf::ErrorCode::InvalidArgument, "unknown layer");
    }
    std::optional<tlcrf::ProbabilityField> pooled;
    const auto& rp = region_probs_or_pooled(region_probs, pixel_probs, regions, pooled);
    const auto which = layer == TLCRF_LAYER_PIXEL ? tlcrf::Layer::Pixel : tlcrf::Layer::Region;
    auto base = tlcrf::run_baseline(raster->value, regions->value, pixel_probs->value, rp, to_fusion_params(*params),
                                    which);
    auto result = std::make_unique<tlcrf_result>();
    if (which == tlcrf::Layer::Pixel) {
      result->pixel_labels.emplace(std::move(base.pixel_labels));
    } else {
      result->region_labels_pixel.emplace(std::move(base.pixel_labels));
      result->region_labels = std::move(base.layer_labels);
    }
    result->solver = std::move(base.solver);
    *out = result.release();
  });
}

void tlcrf_result_free(tlcrf_result* result) { delete result; }

tlcrf_status tlcrf_result_info_get(const tlcrf_result* result, tlcrf_result_info* info) {
  return guarded([&] {
    require(result, "result");
    require(info, "info");
    info->energy = result->solver.energy;
    info->lower_bound = result->solver.lower_bound;
    info->iterations = result->solver.iterations_run;
    info->converged = result->solver.converged ? 1 : 0;
    info->sigma_p = result->sigma_p;
    info->sigma_r = result->sigma_r;
  });
}

tlcrf_status tlcrf_result_pixel_labels(const tlcrf_result* result, tlcrf_labels** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    if (!result->pixel_labels) {
      throw tlcrf::Error(tlcrf::ErrorCode::InvalidArgument, "result has no pixel-layer labels");
    }
    *out = new tlcrf_labels{*result->pixel_labels};
  });
}

tlcrf_status tlcrf_result_region_labels(const tlcrf_result* result, tlcrf_labels** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    if (!result->region_labels_pixel) {
      throw tlcrf::Error(tlcrf::ErrorCode::InvalidArgument, "result has no region-layer labels");
    }
    *out = new tlcrf_labels{*result->region_labels_pixel};
  });
}

tlcrf_status tlcrf_result_region_label_data(const tlcrf_result* result, const uint16_t** labels, size_t* count) {
  return guarded([&] {
    require(result, "result");
    require(labels, "labels");
    require(count, "count");
    *labels = result->region_labels.data();
    *count = result->region_labels.size();
  });
}

tlcrf_status tlcrf_result_write_trace_csv(const tlcrf_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw tlcrf::Error(tlcrf::ErrorCode::IoError, std::string("cannot open ") + path);
    tlcrf::write_trace_csv(result->solver, out);
    if (!out) throw tlcrf::Error(tlcrf::ErrorCode::IoError, std::string("write failed: ") + path);
  });
}

/* Metrics */

tlcrf_status tlcrf_confusion_compute(const tlcrf_labels* reference, const tlcrf_labels* predicted,
                                     size_t num_classes, tlcrf_confusion** out) {
  return guarded([&] {
    require(reference, "reference");
    require(predicted, "predicted");
    require(out, "out");
    const auto& ref = reference->value;
    const auto& pred = predicted->value;
    if (ref.height() != pred.height() || ref.width() != pred.width()) {
      throw tlcrf::Error(tlcrf::ErrorCode::ShapeMismatch, "reference and prediction differ in size");
    }
    const std::size_t classes = num_classes > 0 ? num_classes : std::max(ref.num_classes(), pred.num_classes());
    *out = new tlcrf_confusion{tlcrf::confusion(ref.labels(), pred.labels(), classes)};
  });
}

void tlcrf_confusion_free(tlcrf_confusion* cm) { delete cm; }

tlcrf_status tlcrf_confusion_counts(const tlcrf_confusion* cm, const uint64_t** counts, size_t* num_classes,
                                    uint64_t* total) {
  return guarded([&] {
    require(cm, "cm");
    if (counts) *counts = cm->value.counts().data();
    if (num_classes) *num_classes = cm->value.num_classes();
    if (total) *total = cm->value.total();
  });
}

tlcrf_status tlcrf_confusion_scores(const tlcrf_confusion* cm, tlcrf_scores* scores) {
  return guarded([&] {
    require(cm, "cm");
    require(scores, "scores");
    const auto s = tlcrf::scores(cm->value);
    *scores = {s.oa, s.aa, s.kappa};
  });
}

tlcrf_status tlcrf_aggregate(const tlcrf_confusion* const* tiles, size_t count, tlcrf_scores* pooled,
                             tlcrf_scores* averaged) {
  return guarded([&] {
    require(tiles, "tiles");
    std::vector<tlcrf::ConfusionMatrix> matrices;
    matrices.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(tiles[i], "tile");
      matrices.push_back(tiles[i]->value);
    }
    const auto agg = tlcrf::aggregate(matrices);
    if (pooled) *pooled = {agg.pooled.oa, agg.pooled.aa, agg.pooled.kappa};
    if (averaged) *averaged = {agg.averaged.oa, agg.averaged.aa, agg.averaged.kappa};
  });
}

tlcrf_status tlcrf_synth(const tlcrf_synth_params* params, tlcrf_raster** image, tlcrf_labels** truth,
                         tlcrf_probs** pixel_probs) {
  return guarded([&] {
    require(params, "params");
    require(image, "image");
    require(truth, "truth");
    require(pixel_probs, "pixel_probs");
    tlcrf::SynthParams p;
    p.height = params->height;
    p.width = params->width;
    p.classes = params->classes;
    p.noise = params->noise;
    p.seed = params->seed;
    p.sites = params->sites;
    p.confidence = params->confidence;
    p.feature_noise = params->feature_noise;
    auto inst = tlcrf::synthesize(p);
    auto img = std::make_unique<tlcrf_raster>(tlcrf_raster{std::move(inst.image)});
    auto gt = std::make_unique<tlcrf_labels>(tlcrf_labels{std::move(inst.truth)});
    auto probs = std::make_unique<tlcrf_probs>(tlcrf_probs{std::move(inst.pixel_probs)});
    *image = img.release();
    *truth = gt.release();
    *pixel_probs = probs.release();
  });
}

}  // extern "C"
