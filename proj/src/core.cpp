#include "tlcrf/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "tlcrf/error.hpp"

namespace tlcrf {

namespace {

constexpr double kSumTolerance = 1e-5;
constexpr double kRenormalizeTolerance = 1e-3;
constexpr double kSdFloor = 1e-12;

std::string dims_string(std::size_t h, std::size_t w) {
  return std::to_string(h) + "x" + std::to_string(w);
}

// In-place z-scoring of each column of a row-major table.
void standardize_columns(std::vector<double>& values, std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += values[r * cols + c];
    mean /= static_cast<double>(rows);
    double var = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = values[r * cols + c] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      double& v = values[r * cols + c];
      v = sd < kSdFloor ? 0.0 : (v - mean) / sd;
    }
  }
}

}  // namespace

FeatureRaster::FeatureRaster(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> values)
    : height_(height), width_(width), bands_(bands), values_(std::move(values)) {
  if (height_ == 0 || width_ == 0 || bands_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "raster dimensions must be positive");
  }
  if (values_.size() != height_ * width_ * bands_) {
    throw Error(ErrorCode::DimensionMismatch, "raster payload has " + std::to_string(values_.size()) +
                                                  " values, expected " + std::to_string(height_ * width_ * bands_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "raster contains a non-finite value");
  }
}

LabelMap::LabelMap(std::size_t height, std::size_t width, std::size_t num_classes, std::vector<Label> labels)
    : height_(height), width_(width), num_classes_(num_classes), labels_(std::move(labels)) {
  if (height_ == 0 || width_ == 0) throw Error(ErrorCode::InvalidArgument, "label map dimensions must be positive");
  if (num_classes_ < 2 || num_classes_ >= kUnlabeled) {
    throw Error(ErrorCode::InvalidArgument, "label map needs 2 <= num_classes < 65535");
  }
  if (labels_.size() != height_ * width_) {
    throw Error(ErrorCode::DimensionMismatch, "label payload does not match " + dims_string(height_, width_));
  }
  for (Label l : labels_) {
    if (l != kUnlabeled && l >= num_classes_) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(l) + " >= num_classes " +
                                                  std::to_string(num_classes_));
    }
  }
}

RegionMap::RegionMap(std::size_t height, std::size_t width, std::vector<RegionId> ids)
    : height_(height), width_(width), num_regions_(0), ids_(std::move(ids)) {
  if (height_ == 0 || width_ == 0) throw Error(ErrorCode::InvalidArgument, "region map dimensions must be positive");
  if (ids_.size() != height_ * width_) {
    throw Error(ErrorCode::DimensionMismatch, "region payload does not match " + dims_string(height_, width_));
  }
  RegionId max_id = 0;
  for (RegionId id : ids_) max_id = std::max(max_id, id);
  if (static_cast<std::size_t>(max_id) >= ids_.size()) {
    throw Error(ErrorCode::NonContiguousRegionIds, "region id " + std::to_string(max_id) + " exceeds pixel count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
  for (RegionId id : ids_) seen[id] = true;
  for (std::size_t id = 0; id < seen.size(); ++id) {
    if (!seen[id]) throw Error(ErrorCode::NonContiguousRegionIds, "region id " + std::to_string(id) + " is missing");
  }
  num_regions_ = seen.size();
}

std::vector<std::size_t> RegionMap::region_sizes() const {
  std::vector<std::size_t> sizes(num_regions_, 0);
  for (RegionId id : ids_) ++sizes[id];
  return sizes;
}

ProbabilityField::ProbabilityField(std::size_t num_nodes, std::size_t num_classes, std::vector<float> probs)
    : num_nodes_(num_nodes), num_classes_(num_classes), probs_(std::move(probs)) {
  if (num_classes_ < 2) throw Error(ErrorCode::InvalidArgument, "probability field needs at least 2 classes");
  if (probs_.size() != num_nodes_ * num_classes_) {
    throw Error(ErrorCode::DimensionMismatch, "probability payload does not match nodes x classes");
  }
  std::size_t renormalized = 0;
  for (std::size_t n = 0; n < num_nodes_; ++n) {
    float* p = probs_.data() + n * num_classes_;
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes_; ++c) {
      if (!(p[c] >= 0.0f) || p[c] > 1.0f + static_cast<float>(kSumTolerance)) {
        throw Error(ErrorCode::InvalidProbabilities, "node " + std::to_string(n) + " has an entry outside [0,1]");
      }
      sum += p[c];
    }
    const double miss = std::abs(sum - 1.0);
    if (miss <= kSumTolerance) continue;
    if (miss > kRenormalizeTolerance) {
      throw Error(ErrorCode::InvalidProbabilities,
                  "node " + std::to_string(n) + " sums to " + std::to_string(sum));
    }
    for (std::size_t c = 0; c < num_classes_; ++c) p[c] = static_cast<float>(p[c] / sum);
    ++renormalized;
  }
  if (renormalized > 0) {
    warn("renormalized " + std::to_string(renormalized) + " probability vectors off by more than 1e-5");
  }
}

std::vector<Label> ProbabilityField::argmax() const {
  std::vector<Label> out(num_nodes_);
  for (std::size_t n = 0; n < num_nodes_; ++n) {
    auto p = node(n);
    std::size_t best = 0;
    for (std::size_t c = 1; c < num_classes_; ++c) {
      if (p[c] > p[best]) best = c;
    }
    out[n] = static_cast<Label>(best);
  }
  return out;
}

RegionFeatureTable::RegionFeatureTable(std::size_t num_regions, std::size_t dims, std::vector<double> rows)
    : num_regions_(num_regions), dims_(dims), rows_(std::move(rows)) {
  if (rows_.size() != num_regions_ * dims_) {
    throw Error(ErrorCode::DimensionMismatch, "region feature table payload does not match regions x dims");
  }
  for (double v : rows_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "region features contain a non-finite value");
  }
}

void validate_alignment(const FeatureRaster& raster, const RegionMap& regions, const LabelMap& labels) {
  const auto expected = dims_string(raster.height(), raster.width());
  if (regions.height() != raster.height() || regions.width() != raster.width()) {
    throw Error(ErrorCode::DimensionMismatch,
                "regions are " + dims_string(regions.height(), regions.width()) + ", raster is " + expected);
  }
  if (labels.height() != raster.height() || labels.width() != raster.width()) {
    throw Error(ErrorCode::DimensionMismatch,
                "labels are " + dims_string(labels.height(), labels.width()) + ", raster is " + expected);
  }
  // RegionMap enforces contiguity on construction; nothing more to check.
}

FeatureRaster standardize(const FeatureRaster& raster) {
  std::vector<double> values(raster.values().begin(), raster.values().end());
  standardize_columns(values, raster.pixel_count(), raster.bands());
  return FeatureRaster(raster.height(), raster.width(), raster.bands(), std::move(values));
}

RegionFeatureTable standardize(const RegionFeatureTable& table) {
  std::vector<double> values(table.values().begin(), table.values().end());
  if (table.num_regions() > 0) standardize_columns(values, table.num_regions(), table.dims());
  return RegionFeatureTable(table.num_regions(), table.dims(), std::move(values));
}

RegionMap relabel_contiguous(std::size_t height, std::size_t width, std::span<const RegionId> ids) {
  std::unordered_map<RegionId, RegionId> remap;
  std::vector<RegionId> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(ids[i], static_cast<RegionId>(remap.size()));
    out[i] = it->second;
  }
  return RegionMap(height, width, std::move(out));
}

RegionMap relabel_contiguous(const RegionMap& regions) {
  return relabel_contiguous(regions.height(), regions.width(), regions.ids());
}

LabelMap broadcast(const RegionMap& regions, std::span<const Label> region_labels, std::size_t num_classes) {
  if (region_labels.size() != regions.num_regions()) {
    throw Error(ErrorCode::DimensionMismatch, "one label per region required");
  }
  std::vector<Label> out(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) out[i] = region_labels[regions[i]];
  return LabelMap(regions.height(), regions.width(), num_classes, std::move(out));
}

}  // namespace tlcrf
