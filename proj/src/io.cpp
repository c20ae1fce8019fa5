#include "tlcrf/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "tlcrf/error.hpp"

namespace tlcrf {

namespace {

constexpr char kPrbMagic[4] = {'P', 'R', 'B', '1'};

void read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::TruncatedFile, std::string("unexpected end of file in ") + what);
  }
}

std::uint32_t load_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(unsigned char* p, std::uint32_t v) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

void check_stream(std::ostream& out) {
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

// Netpbm header token: skips whitespace and '#' comments.
std::size_t read_header_number(std::istream& in) {
  int ch = in.get();
  while (true) {
    if (ch == '#') {
      while (ch != '\n' && ch != EOF) ch = in.get();
    } else if (ch != EOF && std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  if (ch == EOF) throw Error(ErrorCode::TruncatedFile, "netpbm header ends early");
  if (!std::isdigit(ch)) throw Error(ErrorCode::BadHeader, "expected a number in netpbm header");
  std::size_t value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + static_cast<std::size_t>(ch - '0');
    if (value > (std::size_t{1} << 40)) throw Error(ErrorCode::BadHeader, "netpbm header number too large");
    ch = in.get();
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (ch == EOF) throw Error(ErrorCode::TruncatedFile, "netpbm header ends early");
  if (!std::isspace(ch)) throw Error(ErrorCode::BadHeader, "malformed netpbm header");
  return value;
}

struct NetpbmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t maxval = 0;
  std::vector<std::uint16_t> samples;
};

NetpbmImage read_netpbm(std::istream& in, const char* magic, std::size_t channels) {
  char m[2];
  read_exact(in, m, 2, "netpbm magic");
  if (m[0] != magic[0] || m[1] != magic[1]) {
    throw Error(ErrorCode::BadMagic, std::string("expected ") + magic);
  }
  NetpbmImage img;
  img.width = read_header_number(in);
  img.height = read_header_number(in);
  img.maxval = read_header_number(in);
  if (img.width == 0 || img.height == 0) throw Error(ErrorCode::BadHeader, "zero image dimension");
  if (img.maxval == 0 || img.maxval > 65535) throw Error(ErrorCode::BadHeader, "maxval must be in 1..65535");

  const std::size_t count = img.width * img.height * channels;
  const std::size_t bytes_per_sample = img.maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(count * bytes_per_sample);
  read_exact(in, reinterpret_cast<char*>(raw.data()), raw.size(), "netpbm raster");
  img.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    img.samples[i] = bytes_per_sample == 1
                         ? raw[i]
                         : static_cast<std::uint16_t>((static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1]);
    if (img.samples[i] > img.maxval) throw Error(ErrorCode::BadHeader, "sample exceeds maxval");
  }
  return img;
}

void write_netpbm(std::ostream& out, const char* magic, std::size_t width, std::size_t height, std::size_t maxval,
                  const std::vector<std::uint16_t>& samples) {
  out << magic << '\n' << width << ' ' << height << '\n' << maxval << '\n';
  std::vector<unsigned char> raw;
  if (maxval < 256) {
    raw.assign(samples.begin(), samples.end());
  } else {
    raw.resize(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      raw[2 * i] = static_cast<unsigned char>(samples[i] >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(samples[i] & 0xFF);
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  check_stream(out);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

Prb1 read_prb1(std::istream& in) {
  unsigned char header[16];
  read_exact(in, reinterpret_cast<char*>(header), 4, "PRB1 magic");
  if (std::memcmp(header, kPrbMagic, 4) != 0) throw Error(ErrorCode::BadMagic, "expected PRB1");
  read_exact(in, reinterpret_cast<char*>(header + 4), 12, "PRB1 header");
  Prb1 data;
  data.nodes = load_u32_le(header + 4);
  data.channels = load_u32_le(header + 8);
  data.flags = load_u32_le(header + 12);
  if (data.flags != 0) throw Error(ErrorCode::BadHeader, "PRB1 flags must be zero");
  const std::size_t count = static_cast<std::size_t>(data.nodes) * data.channels;
  std::vector<unsigned char> raw(count * 4);
  read_exact(in, reinterpret_cast<char*>(raw.data()), raw.size(), "PRB1 payload");
  data.payload.resize(count);
  for (std::size_t i = 0; i < count; ++i) data.payload[i] = std::bit_cast<float>(load_u32_le(&raw[4 * i]));
  return data;
}

void write_prb1(std::ostream& out, const Prb1& data) {
  if (data.payload.size() != static_cast<std::size_t>(data.nodes) * data.channels) {
    throw Error(ErrorCode::DimensionMismatch, "PRB1 payload does not match its header");
  }
  std::vector<unsigned char> raw(16 + data.payload.size() * 4);
  std::memcpy(raw.data(), kPrbMagic, 4);
  store_u32_le(&raw[4], data.nodes);
  store_u32_le(&raw[8], data.channels);
  store_u32_le(&raw[12], data.flags);
  for (std::size_t i = 0; i < data.payload.size(); ++i) {
    store_u32_le(&raw[16 + 4 * i], std::bit_cast<std::uint32_t>(data.payload[i]));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  check_stream(out);
}

ProbabilityField read_probs(std::istream& in) {
  auto data = read_prb1(in);
  return ProbabilityField(data.nodes, data.channels, std::move(data.payload));
}

void write_probs(std::ostream& out, const ProbabilityField& probs) {
  Prb1 data;
  data.nodes = static_cast<std::uint32_t>(probs.num_nodes());
  data.channels = static_cast<std::uint32_t>(probs.num_classes());
  data.payload.assign(probs.probs().begin(), probs.probs().end());
  write_prb1(out, data);
}

FeatureRaster read_raster_prb(std::istream& in, std::size_t width) {
  auto data = read_prb1(in);
  if (width == 0 || data.nodes % width != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "PRB1 node count " + std::to_string(data.nodes) + " is not a multiple of width " +
                    std::to_string(width));
  }
  std::vector<double> values(data.payload.begin(), data.payload.end());
  return FeatureRaster(data.nodes / width, width, data.channels, std::move(values));
}

void write_raster_prb(std::ostream& out, const FeatureRaster& raster) {
  Prb1 data;
  data.nodes = static_cast<std::uint32_t>(raster.pixel_count());
  data.channels = static_cast<std::uint32_t>(raster.bands());
  data.payload.reserve(raster.values().size());
  for (double v : raster.values()) data.payload.push_back(static_cast<float>(v));
  write_prb1(out, data);
}

FeatureRaster read_ppm(std::istream& in) {
  auto img = read_netpbm(in, "P6", 3);
  std::vector<double> values(img.samples.begin(), img.samples.end());
  return FeatureRaster(img.height, img.width, 3, std::move(values));
}

void write_ppm(std::ostream& out, const FeatureRaster& raster) {
  if (raster.bands() != 3) throw Error(ErrorCode::InvalidArgument, "PPM output needs exactly three bands");
  std::vector<std::uint16_t> samples(raster.values().size());
  std::size_t maxval = 255;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = raster.values()[i];
    if (v < 0.0 || v > 65535.0 || v != std::floor(v)) {
      throw Error(ErrorCode::InvalidArgument, "PPM samples must be integers in 0..65535");
    }
    samples[i] = static_cast<std::uint16_t>(v);
    if (samples[i] > 255) maxval = 65535;
  }
  write_netpbm(out, "P6", raster.width(), raster.height(), maxval, samples);
}

LabelMap read_label_pgm(std::istream& in, std::optional<std::size_t> num_classes) {
  auto img = read_netpbm(in, "P5", 1);
  std::vector<Label> labels(img.samples.size());
  std::size_t max_label = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint16_t v = img.samples[i];
    labels[i] = (img.maxval == 65535 && v == 65535) ? kUnlabeled : static_cast<Label>(v);
    if (labels[i] != kUnlabeled) max_label = std::max<std::size_t>(max_label, labels[i]);
  }
  const std::size_t classes = num_classes.value_or(std::max<std::size_t>(2, max_label + 1));
  return LabelMap(img.height, img.width, classes, std::move(labels));
}

void write_label_pgm(std::ostream& out, const LabelMap& labels) {
  std::vector<std::uint16_t> samples(labels.labels().begin(), labels.labels().end());
  write_netpbm(out, "P5", labels.width(), labels.height(), 65535, samples);
}

RegionMap read_region_pgm(std::istream& in) {
  auto img = read_netpbm(in, "P5", 1);
  std::vector<RegionId> ids(img.samples.begin(), img.samples.end());
  return RegionMap(img.height, img.width, std::move(ids));
}

void write_region_pgm(std::ostream& out, const RegionMap& regions) {
  if (regions.num_regions() > 65536) {
    throw Error(ErrorCode::InvalidArgument, "16-bit PGM holds at most 65536 regions");
  }
  std::vector<std::uint16_t> samples(regions.ids().begin(), regions.ids().end());
  write_netpbm(out, "P5", regions.width(), regions.height(), 65535, samples);
}

ProbabilityField read_probs(const std::string& path) {
  auto in = open_in(path);
  return read_probs(in);
}

void write_probs(const std::string& path, const ProbabilityField& probs) {
  auto out = open_out(path);
  write_probs(out, probs);
}

LabelMap read_label_pgm(const std::string& path, std::optional<std::size_t> num_classes) {
  auto in = open_in(path);
  return read_label_pgm(in, num_classes);
}

void write_label_pgm(const std::string& path, const LabelMap& labels) {
  auto out = open_out(path);
  write_label_pgm(out, labels);
}

RegionMap read_region_pgm(const std::string& path) {
  auto in = open_in(path);
  return read_region_pgm(in);
}

void write_region_pgm(const std::string& path, const RegionMap& regions) {
  auto out = open_out(path);
  write_region_pgm(out, regions);
}

void write_ppm(const std::string& path, const FeatureRaster& raster) {
  auto out = open_out(path);
  write_ppm(out, raster);
}

void write_raster_prb(const std::string& path, const FeatureRaster& raster) {
  auto out = open_out(path);
  write_raster_prb(out, raster);
}

FeatureRaster read_raster(const std::string& path, std::optional<std::size_t> width) {
  auto in = open_in(path);
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(magic, kPrbMagic, 4) == 0) {
    if (!width) throw Error(ErrorCode::InvalidArgument, path + " is a PRB1 raster; its width must be given");
    return read_raster_prb(in, *width);
  }
  return read_ppm(in);
}

}  // namespace tlcrf
