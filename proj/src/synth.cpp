#include "tlcrf/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "tlcrf/error.hpp"

namespace tlcrf {

namespace {

// Corners of the RGB cube pulled inward; pairwise distances are at least 175.
constexpr std::array<std::array<double, 3>, 8> kPalette{{
    {40, 40, 40},
    {215, 40, 40},
    {40, 215, 40},
    {40, 40, 215},
    {215, 215, 40},
    {215, 40, 215},
    {40, 215, 215},
    {215, 215, 215},
}};

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

SynthInstance synthesize(const SynthParams& params) {
  if (params.height == 0 || params.width == 0) throw Error(ErrorCode::InvalidArgument, "synth size must be positive");
  if (params.classes < 2) throw Error(ErrorCode::InvalidArgument, "synth needs at least 2 classes");
  if (!(params.noise >= 0.0 && params.noise <= 1.0)) throw Error(ErrorCode::InvalidArgument, "noise must be in [0,1]");
  if (!(params.confidence > 0.0 && params.confidence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence must be in (0,1]");
  }

  Random rng(params.seed);
  const std::size_t h = params.height;
  const std::size_t w = params.width;
  const std::size_t num_classes = params.classes;
  const std::size_t sites = params.sites > 0 ? params.sites : std::clamp<std::size_t>(h * w / 256, 2, 64);

  std::vector<double> site_row(sites), site_col(sites);
  std::vector<Label> site_class(sites);
  for (std::size_t s = 0; s < sites; ++s) {
    site_row[s] = rng.uniform() * static_cast<double>(h);
    site_col[s] = rng.uniform() * static_cast<double>(w);
    site_class[s] = static_cast<Label>(rng.below(num_classes));
  }

  std::vector<std::array<double, 3>> means(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (c < kPalette.size()) {
      means[c] = kPalette[c];
    } else {
      for (double& m : means[c]) m = 30.0 + 195.0 * rng.uniform();
    }
  }

  std::vector<Label> truth(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < sites; ++s) {
        const double dr = static_cast<double>(r) + 0.5 - site_row[s];
        const double dc = static_cast<double>(c) + 0.5 - site_col[s];
        const double d = dr * dr + dc * dc;
        if (d < best) {
          best = d;
          nearest = s;
        }
      }
      truth[r * w + c] = site_class[nearest];
    }
  }

  const double sd = params.feature_noise * params.noise;
  std::vector<double> pixels(h * w * 3);
  for (std::size_t i = 0; i < h * w; ++i) {
    for (std::size_t b = 0; b < 3; ++b) {
      const double v = means[truth[i]][b] + sd * rng.normal();
      pixels[i * 3 + b] = std::clamp(std::round(v), 0.0, 255.0);
    }
  }

  const double base = (1.0 - params.confidence) / static_cast<double>(num_classes);
  std::vector<float> probs(h * w * num_classes);
  for (std::size_t i = 0; i < h * w; ++i) {
    std::size_t predicted = truth[i];
    if (rng.uniform() >= 1.0 - params.noise) {
      const std::size_t shift = 1 + rng.below(num_classes - 1);
      predicted = (truth[i] + shift) % num_classes;
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      probs[i * num_classes + c] = static_cast<float>(base + (c == predicted ? params.confidence : 0.0));
    }
  }

  return SynthInstance{FeatureRaster(h, w, 3, std::move(pixels)), LabelMap(h, w, num_classes, std::move(truth)),
                       ProbabilityField(h * w, num_classes, std::move(probs))};
}

}  // namespace tlcrf
