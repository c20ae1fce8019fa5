#pragma once

// Data model shared by every stage of the fusion pipeline: feature rasters,
// label and region maps, probability fields and region feature tables.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace tlcrf {

using Label = std::uint16_t;
using RegionId = std::uint32_t;

/// Reference entries carrying this value are ignored by every metric.
inline constexpr Label kUnlabeled = std::numeric_limits<Label>::max();

/// Read-only view over a row-major table of equally sized feature vectors.
struct FeatureRows {
  std::span<const double> values;
  std::size_t dims = 0;

  std::size_t size() const { return dims == 0 ? 0 : values.size() / dims; }
  std::span<const double> row(std::size_t i) const { return values.subspan(i * dims, dims); }
};

/// H x W grid of m-dimensional feature vectors, stored pixel-major.
class FeatureRaster {
 public:
  FeatureRaster(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> values);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t bands() const { return bands_; }
  std::size_t pixel_count() const { return height_ * width_; }

  std::span<const double> values() const { return values_; }
  std::span<const double> pixel(std::size_t index) const {
    return std::span<const double>(values_).subspan(index * bands_, bands_);
  }
  double at(std::size_t row, std::size_t col, std::size_t band) const {
    return values_[(row * width_ + col) * bands_ + band];
  }
  FeatureRows rows() const { return {values_, bands_}; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t bands_;
  std::vector<double> values_;
};

/// H x W grid of class indices in [0, num_classes) or kUnlabeled.
class LabelMap {
 public:
  LabelMap(std::size_t height, std::size_t width, std::size_t num_classes, std::vector<Label> labels);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t num_classes() const { return num_classes_; }
  std::span<const Label> labels() const { return labels_; }
  Label operator[](std::size_t index) const { return labels_[index]; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t num_classes_;
  std::vector<Label> labels_;
};

/// Partition of an H x W grid into regions with contiguous ids 0..R-1.
class RegionMap {
 public:
  /// Throws NonContiguousRegionIds unless every id in 0..max occurs.
  RegionMap(std::size_t height, std::size_t width, std::vector<RegionId> ids);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return ids_.size(); }
  std::size_t num_regions() const { return num_regions_; }
  std::span<const RegionId> ids() const { return ids_; }
  RegionId operator[](std::size_t index) const { return ids_[index]; }

  /// Pixel count of every region.
  std::vector<std::size_t> region_sizes() const;

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t num_regions_;
  std::vector<RegionId> ids_;
};

/// Per-node class posteriors. Stored as float so that files round-trip exactly.
///
/// Construction checks that every entry lies in [0, 1] and that each node's
/// vector sums to one within 1e-5. Vectors that miss by at most 1e-3 are
/// renormalized (with a warning); anything worse is InvalidProbabilities.
class ProbabilityField {
 public:
  ProbabilityField(std::size_t num_nodes, std::size_t num_classes, std::vector<float> probs);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_classes() const { return num_classes_; }
  std::span<const float> probs() const { return probs_; }
  std::span<const float> node(std::size_t index) const {
    return std::span<const float>(probs_).subspan(index * num_classes_, num_classes_);
  }

  /// Per-node argmax, lowest class index on ties.
  std::vector<Label> argmax() const;

 private:
  std::size_t num_nodes_;
  std::size_t num_classes_;
  std::vector<float> probs_;
};

/// One n-dimensional descriptor per region.
class RegionFeatureTable {
 public:
  RegionFeatureTable(std::size_t num_regions, std::size_t dims, std::vector<double> rows);

  std::size_t num_regions() const { return num_regions_; }
  std::size_t dims() const { return dims_; }
  std::span<const double> values() const { return rows_; }
  std::span<const double> row(std::size_t region) const {
    return std::span<const double>(rows_).subspan(region * dims_, dims_);
  }
  FeatureRows rows() const { return {rows_, dims_}; }

 private:
  std::size_t num_regions_;
  std::size_t dims_;
  std::vector<double> rows_;
};

/// Throws DimensionMismatch or NonContiguousRegionIds.
void validate_alignment(const FeatureRaster& raster, const RegionMap& regions, const LabelMap& labels);

/// Z-scores every band over all pixels. Bands with sd < 1e-12 become zero.
FeatureRaster standardize(const FeatureRaster& raster);

/// Column-wise z-scores over regions, same degenerate rule as for rasters.
RegionFeatureTable standardize(const RegionFeatureTable& table);

/// Maps arbitrary ids to 0..R-1 in order of first appearance (row-major).
RegionMap relabel_contiguous(std::size_t height, std::size_t width, std::span<const RegionId> ids);
RegionMap relabel_contiguous(const RegionMap& regions);

/// Expands per-region labels to pixel resolution.
LabelMap broadcast(const RegionMap& regions, std::span<const Label> region_labels, std::size_t num_classes);

}  // namespace tlcrf
