#include "tlcrf/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "tlcrf/error.hpp"

namespace tlcrf {

namespace {

struct WeightedEdge {
  double w;
  std::uint32_t a;
  std::uint32_t b;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), internal_(n, 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Joins two roots; `w` becomes the internal difference of the union.
  void join(std::uint32_t a, std::uint32_t b, double w) {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    internal_[a] = w;
  }

  std::size_t size(std::uint32_t root) const { return size_[root]; }
  double internal(std::uint32_t root) const { return internal_[root]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<double> internal_;
};

double feature_distance(const FeatureRaster& raster, std::size_t i, std::size_t j) {
  auto a = raster.pixel(i);
  auto b = raster.pixel(j);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<WeightedEdge> grid_edges(const FeatureRaster& raster, int connectivity) {
  const std::size_t h = raster.height();
  const std::size_t w = raster.width();
  std::vector<WeightedEdge> edges;
  edges.reserve(h * w * (connectivity == 8 ? 4 : 2));
  auto add = [&](std::size_t i, std::size_t j) {
    edges.push_back({feature_distance(raster, i, j), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      if (c + 1 < w) add(i, i + 1);
      if (r + 1 < h) {
        if (connectivity == 8 && c > 0) add(i, i + w - 1);
        add(i, i + w);
        if (connectivity == 8 && c + 1 < w) add(i, i + w + 1);
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    if (x.w != y.w) return x.w < y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return edges;
}

}  // namespace

RegionMap segment(const FeatureRaster& raster, const SegmentationParams& params) {
  if (!(params.k >= 0.0) || !std::isfinite(params.k)) {
    throw Error(ErrorCode::InvalidArgument, "segmentation scale k must be finite and >= 0");
  }
  if (params.min_size < 1) throw Error(ErrorCode::InvalidArgument, "min_size must be at least 1");
  if (params.connectivity != 4 && params.connectivity != 8) {
    throw Error(ErrorCode::InvalidArgument, "connectivity must be 4 or 8");
  }

  const std::size_t n = raster.pixel_count();
  const auto edges = grid_edges(raster, params.connectivity);
  DisjointSets sets(n);

  for (const auto& e : edges) {
    const auto a = sets.find(e.a);
    const auto b = sets.find(e.b);
    if (a == b) continue;
    const double ta = sets.internal(a) + params.k / static_cast<double>(sets.size(a));
    const double tb = sets.internal(b) + params.k / static_cast<double>(sets.size(b));
    if (e.w <= std::min(ta, tb)) sets.join(a, b, e.w);
  }

  // Small components are absorbed through their cheapest remaining edge.
  for (const auto& e : edges) {
    const auto a = sets.find(e.a);
    const auto b = sets.find(e.b);
    if (a == b) continue;
    if (sets.size(a) < params.min_size || sets.size(b) < params.min_size) {
      sets.join(a, b, std::max({e.w, sets.internal(a), sets.internal(b)}));
    }
  }

  std::vector<RegionId> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = sets.find(static_cast<std::uint32_t>(i));
  return relabel_contiguous(raster.height(), raster.width(), roots);
}

RegionFeatureTable region_features(const FeatureRaster& raster, const RegionMap& regions) {
  if (regions.height() != raster.height() || regions.width() != raster.width()) {
    throw Error(ErrorCode::DimensionMismatch, "region map and raster differ in size");
  }
  const std::size_t bands = raster.bands();
  const std::size_t num_regions = regions.num_regions();
  const std::size_t dims = 4 * bands;

  std::vector<double> mins(num_regions * bands, std::numeric_limits<double>::infinity());
  std::vector<double> maxs(num_regions * bands, -std::numeric_limits<double>::infinity());
  std::vector<double> sums(num_regions * bands, 0.0);
  const auto counts = regions.region_sizes();

  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::size_t base = static_cast<std::size_t>(regions[i]) * bands;
    auto px = raster.pixel(i);
    for (std::size_t b = 0; b < bands; ++b) {
      mins[base + b] = std::min(mins[base + b], px[b]);
      maxs[base + b] = std::max(maxs[base + b], px[b]);
      sums[base + b] += px[b];
    }
  }
  std::vector<double> means(num_regions * bands);
  for (std::size_t k = 0; k < num_regions; ++k) {
    for (std::size_t b = 0; b < bands; ++b) {
      means[k * bands + b] = sums[k * bands + b] / static_cast<double>(counts[k]);
    }
  }
  // Second pass for the variance keeps it non-negative and accurate.
  std::vector<double> sq(num_regions * bands, 0.0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::size_t base = static_cast<std::size_t>(regions[i]) * bands;
    auto px = raster.pixel(i);
    for (std::size_t b = 0; b < bands; ++b) {
      const double d = px[b] - means[base + b];
      sq[base + b] += d * d;
    }
  }

  std::vector<double> rows(num_regions * dims);
  for (std::size_t k = 0; k < num_regions; ++k) {
    for (std::size_t b = 0; b < bands; ++b) {
      double* out = rows.data() + k * dims + 4 * b;
      const std::size_t s = k * bands + b;
      out[0] = mins[s];
      out[1] = maxs[s];
      out[2] = means[s];
      out[3] = std::sqrt(sq[s] / static_cast<double>(counts[k]));
    }
  }
  return RegionFeatureTable(num_regions, dims, std::move(rows));
}

std::vector<Label> majority_label(const RegionMap& regions, const LabelMap& labels) {
  if (regions.height() != labels.height() || regions.width() != labels.width()) {
    throw Error(ErrorCode::DimensionMismatch, "region map and label map differ in size");
  }
  const std::size_t num_classes = labels.num_classes();
  std::vector<std::size_t> votes(regions.num_regions() * num_classes, 0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Label l = labels[i];
    if (l == kUnlabeled) continue;
    ++votes[static_cast<std::size_t>(regions[i]) * num_classes + l];
  }
  std::vector<Label> out(regions.num_regions(), kUnlabeled);
  for (std::size_t k = 0; k < regions.num_regions(); ++k) {
    std::size_t best_count = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const std::size_t v = votes[k * num_classes + c];
      if (v > best_count) {
        best_count = v;
        out[k] = static_cast<Label>(c);
      }
    }
  }
  return out;
}

ProbabilityField pool_region_probs(const ProbabilityField& pixel_probs, const RegionMap& regions) {
  if (pixel_probs.num_nodes() != regions.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pixel posteriors have " + std::to_string(pixel_probs.num_nodes()) +
                                                  " nodes, region map has " + std::to_string(regions.size()) +
                                                  " pixels");
  }
  const std::size_t num_classes = pixel_probs.num_classes();
  std::vector<double> sums(regions.num_regions() * num_classes, 0.0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    auto p = pixel_probs.node(i);
    double* acc = sums.data() + static_cast<std::size_t>(regions[i]) * num_classes;
    for (std::size_t c = 0; c < num_classes; ++c) acc[c] += p[c];
  }
  std::vector<float> out(sums.size());
  for (std::size_t k = 0; k < regions.num_regions(); ++k) {
    const double* acc = sums.data() + k * num_classes;
    const double total = std::accumulate(acc, acc + num_classes, 0.0);
    for (std::size_t c = 0; c < num_classes; ++c) out[k * num_classes + c] = static_cast<float>(acc[c] / total);
  }
  return ProbabilityField(regions.num_regions(), num_classes, std::move(out));
}

}  // namespace tlcrf
