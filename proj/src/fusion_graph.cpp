#include "tlcrf/fusion_graph.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "tlcrf/error.hpp"

namespace tlcrf {

const char* to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::PixelPixel: return "PixelPixel";
    case EdgeKind::RegionRegion: return "RegionRegion";
    case EdgeKind::Cross: return "Cross";
  }
  return "Unknown";
}

std::vector<NodePair> pixel_adjacency(std::size_t height, std::size_t width) {
  std::vector<NodePair> pairs;
  if (height == 0 || width == 0) return pairs;
  pairs.reserve(4 * height * width);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto i = static_cast<NodeId>(r * width + c);
      // Later neighbours in increasing id order.
      if (c + 1 < width) pairs.push_back({i, static_cast<NodeId>(i + 1)});
      if (r + 1 < height) {
        const auto below = static_cast<NodeId>(i + width);
        if (c > 0) pairs.push_back({i, below - 1});
        pairs.push_back({i, below});
        if (c + 1 < width) pairs.push_back({i, below + 1});
      }
    }
  }
  return pairs;
}

std::vector<NodePair> region_adjacency(const RegionMap& regions) {
  const std::size_t h = regions.height();
  const std::size_t w = regions.width();
  std::vector<NodePair> pairs;
  auto consider = [&](RegionId a, RegionId b) {
    if (a == b) return;
    pairs.push_back({std::min(a, b), std::max(a, b)});
  };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      if (c + 1 < w) consider(regions[i], regions[i + 1]);
      if (r + 1 < h) consider(regions[i], regions[i + w]);
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const NodePair& x, const NodePair& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

FusionGraph::FusionGraph(std::size_t height, std::size_t width, std::size_t num_regions,
                         std::vector<RegionId> pixel_region, std::vector<GraphEdge> edges)
    : height_(height), width_(width), num_regions_(num_regions), pixel_region_(std::move(pixel_region)),
      edges_(std::move(edges)) {
  if (pixel_region_.size() != height_ * width_) {
    throw Error(ErrorCode::DimensionMismatch, "pixel-to-region map does not match the grid");
  }
  const std::size_t n = num_nodes();
  for (const auto& e : edges_) {
    if (!(e.u < e.v) || e.v >= n) throw Error(ErrorCode::InvalidArgument, "edge endpoints must satisfy u < v < N");
  }
}

std::size_t FusionGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [kind](const GraphEdge& e) { return e.kind == kind; }));
}

FusionGraph flatten(std::size_t height, std::size_t width, const RegionMap& regions) {
  if (regions.height() != height || regions.width() != width) {
    throw Error(ErrorCode::DimensionMismatch, "region map does not match the requested grid");
  }
  const auto pixel_pairs = pixel_adjacency(height, width);
  const auto region_pairs = region_adjacency(regions);
  const auto num_pixels = static_cast<NodeId>(height * width);

  std::vector<GraphEdge> edges;
  edges.reserve(pixel_pairs.size() + region_pairs.size() + num_pixels);
  for (const auto& p : pixel_pairs) edges.push_back({p.u, p.v, EdgeKind::PixelPixel});
  for (const auto& p : region_pairs) edges.push_back({p.u + num_pixels, p.v + num_pixels, EdgeKind::RegionRegion});
  for (NodeId i = 0; i < num_pixels; ++i) edges.push_back({i, num_pixels + regions[i], EdgeKind::Cross});

  return FusionGraph(height, width, regions.num_regions(),
                     std::vector<RegionId>(regions.ids().begin(), regions.ids().end()), std::move(edges));
}

void write_edge_csv(const FusionGraph& graph, std::ostream& out) {
  out << "u,v,kind\n";
  for (const auto& e : graph.edges()) out << e.u << ',' << e.v << ',' << to_string(e.kind) << '\n';
}

}  // namespace tlcrf
