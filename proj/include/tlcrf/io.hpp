#pragma once

// File formats:
//   P6 PPM    feature rasters with three 8- or 16-bit bands
//   P5 PGM    label and region maps, 16-bit big-endian samples, maxval 65535;
//             label 65535 is the unlabeled sentinel
//   PRB1      "PRB1", then u32 LE nodes, u32 LE channels, u32 LE flags (0),
//             then nodes * channels float32 LE values, row-major

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tlcrf/core.hpp"

namespace tlcrf {

struct Prb1 {
  std::uint32_t nodes = 0;
  std::uint32_t channels = 0;
  std::uint32_t flags = 0;
  std::vector<float> payload;
};

Prb1 read_prb1(std::istream& in);
void write_prb1(std::ostream& out, const Prb1& data);

ProbabilityField read_probs(std::istream& in);
void write_probs(std::ostream& out, const ProbabilityField& probs);

/// PRB1 carries no grid shape, so the caller supplies the width.
FeatureRaster read_raster_prb(std::istream& in, std::size_t width);
void write_raster_prb(std::ostream& out, const FeatureRaster& raster);

FeatureRaster read_ppm(std::istream& in);
/// Needs three bands of integers; maxval is 255 when every value fits, else 65535.
void write_ppm(std::ostream& out, const FeatureRaster& raster);

/// With no explicit class count, it is max label + 1 (at least 2).
LabelMap read_label_pgm(std::istream& in, std::optional<std::size_t> num_classes = std::nullopt);
void write_label_pgm(std::ostream& out, const LabelMap& labels);

RegionMap read_region_pgm(std::istream& in);
void write_region_pgm(std::ostream& out, const RegionMap& regions);

// Path-based helpers; failures to open raise IoError.
ProbabilityField read_probs(const std::string& path);
void write_probs(const std::string& path, const ProbabilityField& probs);
LabelMap read_label_pgm(const std::string& path, std::optional<std::size_t> num_classes = std::nullopt);
void write_label_pgm(const std::string& path, const LabelMap& labels);
RegionMap read_region_pgm(const std::string& path);
void write_region_pgm(const std::string& path, const RegionMap& regions);
void write_ppm(const std::string& path, const FeatureRaster& raster);
void write_raster_prb(const std::string& path, const FeatureRaster& raster);

/// Detects P6 or PRB1 by magic. `width` is only consulted for PRB1.
FeatureRaster read_raster(const std::string& path, std::optional<std::size_t> width = std::nullopt);

}  // namespace tlcrf
