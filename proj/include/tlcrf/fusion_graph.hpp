#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tlcrf/core.hpp"

namespace tlcrf {

using NodeId = std::uint32_t;

enum class EdgeKind : std::uint8_t { PixelPixel, RegionRegion, Cross };

const char* to_string(EdgeKind kind) noexcept;

/// Undirected pair with u < v.
struct NodePair {
  NodeId u;
  NodeId v;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

struct GraphEdge {
  NodeId u;
  NodeId v;
  EdgeKind kind;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// All 8-neighbour pixel pairs, each once, sorted by (u, v).
std::vector<NodePair> pixel_adjacency(std::size_t height, std::size_t width);

/// Region pairs that share a 4-adjacent pixel boundary, sorted by (u, v).
std::vector<NodePair> region_adjacency(const RegionMap& regions);

/// Flattened two-layer graph. Nodes 0..P-1 are pixels in row-major order,
/// P..P+R-1 are regions. Edges are listed PixelPixel, then RegionRegion,
/// then one Cross edge per pixel in pixel order.
class FusionGraph {
 public:
  FusionGraph(std::size_t height, std::size_t width, std::size_t num_regions, std::vector<RegionId> pixel_region,
              std::vector<GraphEdge> edges);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t num_pixel_nodes() const { return pixel_region_.size(); }
  std::size_t num_region_nodes() const { return num_regions_; }
  std::size_t num_nodes() const { return num_pixel_nodes() + num_regions_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  bool is_pixel(NodeId node) const { return node < num_pixel_nodes(); }
  NodeId pixel_node(std::size_t pixel) const { return static_cast<NodeId>(pixel); }
  NodeId region_node(std::size_t region) const { return static_cast<NodeId>(num_pixel_nodes() + region); }
  /// Node id of the region containing `pixel`.
  NodeId up(std::size_t pixel) const { return region_node(pixel_region_[pixel]); }

  std::size_t count(EdgeKind kind) const;

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t num_regions_;
  std::vector<RegionId> pixel_region_;
  std::vector<GraphEdge> edges_;
};

FusionGraph flatten(std::size_t height, std::size_t width, const RegionMap& regions);

/// Debug dump: header `u,v,kind`, one line per edge.
void write_edge_csv(const FusionGraph& graph, std::ostream& out);

}  // namespace tlcrf
