#include <doctest.h>

#include <queue>
#include <random>

#include "oracles.hpp"
#include "tlcrf/error.hpp"
#include "tlcrf/segmentation.hpp"

using namespace tlcrf;

namespace {

// Every region forms one connected blob under the given connectivity.
bool regions_connected(const RegionMap& r, int connectivity) {
  const std::size_t h = r.height(), w = r.width();
  std::vector<bool> seen(r.size(), false);
  std::vector<bool> region_done(r.num_regions(), false);
  for (std::size_t start = 0; start < r.size(); ++start) {
    if (seen[start]) continue;
    if (region_done[r[start]]) return false;
    region_done[r[start]] = true;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      const std::size_t p = q.front();
      q.pop();
      const long pr = static_cast<long>(p / w), pc = static_cast<long>(p % w);
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || (connectivity == 4 && dr != 0 && dc != 0)) continue;
          const long nr = pr + dr, nc = pc + dc;
          if (nr < 0 || nc < 0 || nr >= static_cast<long>(h) || nc >= static_cast<long>(w)) continue;
          const std::size_t n = static_cast<std::size_t>(nr) * w + static_cast<std::size_t>(nc);
          if (!seen[n] && r[n] == r[p]) {
            seen[n] = true;
            q.push(n);
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("segmentation") {

TEST_CASE("constant image gives one region") {
  FeatureRaster r(6, 7, 3, std::vector<double>(6 * 7 * 3, 42.0));
  for (double k : {0.0, 1.0, 300.0}) CHECK(segment(r, {k, 1, 8}).num_regions() == 1);
}

TEST_CASE("two halves") {
  std::vector<double> v(8 * 8);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 8) < 4 ? 0.0 : 100.0;
  const auto regions = segment(FeatureRaster(8, 8, 1, v), {1.0, 1, 8});
  REQUIRE(regions.num_regions() == 2);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(regions[i] == ((i % 8) < 4 ? 0u : 1u));
}

TEST_CASE("hand-traced 1x4 row") {
  const auto regions = segment(FeatureRaster(1, 4, 1, {0, 0, 10, 10}), {0.5, 2, 8});
  CHECK(std::vector<RegionId>(regions.ids().begin(), regions.ids().end()) == std::vector<RegionId>{0, 0, 1, 1});
}

TEST_CASE("small components are absorbed") {
  std::vector<double> v(5 * 5, 0.0);
  v[12] = 50.0;
  CHECK(segment(FeatureRaster(5, 5, 1, v), {1.0, 1, 8}).num_regions() == 2);
  CHECK(segment(FeatureRaster(5, 5, 1, v), {1.0, 2, 8}).num_regions() == 1);
}

TEST_CASE("regions are connected and deterministic") {
  std::mt19937_64 rng(3);
  for (int conn : {4, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto raster = oracle::random_raster(rng, 12, 15, 3);
      const SegmentationParams p{200.0, 4, conn};
      const auto a = segment(raster, p);
      const auto b = segment(raster, p);
      CHECK(std::equal(a.ids().begin(), a.ids().end(), b.ids().begin()));
      CHECK(regions_connected(a, conn));
      for (auto s : a.region_sizes()) CHECK(s >= 4);
    }
  }
}

TEST_CASE("bad parameters") {
  FeatureRaster r(2, 2, 1, {0, 0, 0, 0});
  CHECK_THROWS_AS(segment(r, {1.0, 1, 6}), Error);
  CHECK_THROWS_AS(segment(r, {-1.0, 1, 8}), Error);
}

TEST_CASE("region descriptors") {
  FeatureRaster r(1, 3, 1, {2, 4, 7});
  RegionMap regions(1, 3, {0, 0, 1});
  const auto t = region_features(r, regions);
  REQUIRE(t.dims() == 4);
  CHECK(std::vector<double>(t.row(0).begin(), t.row(0).end()) == std::vector<double>{2, 4, 3, 1});
  CHECK(std::vector<double>(t.row(1).begin(), t.row(1).end()) == std::vector<double>{7, 7, 7, 0});
  FeatureRaster two(1, 2, 2, {1, 2, 3, 4});
  CHECK(region_features(two, RegionMap(1, 2, {0, 0})).dims() == 8);
}

TEST_CASE("majority label with ties and sentinels") {
  RegionMap regions(1, 7, {0, 0, 0, 1, 1, 2, 2});
  LabelMap labels(1, 7, 3, {1, 1, 2, 1, 0, kUnlabeled, kUnlabeled});
  CHECK(majority_label(regions, labels) == std::vector<Label>{1, 0, kUnlabeled});
}

TEST_CASE("pooling averages posteriors") {
  RegionMap regions(1, 3, {0, 0, 1});
  ProbabilityField px(3, 2, {0.6f, 0.4f, 0.2f, 0.8f, 0.3f, 0.7f});
  const auto pooled = pool_region_probs(px, regions);
  REQUIRE(pooled.num_nodes() == 2);
  CHECK(pooled.node(0)[0] == doctest::Approx(0.4));
  CHECK(pooled.node(0)[1] == doctest::Approx(0.6));
  CHECK(pooled.node(1)[0] == 0.3f);
  CHECK(pooled.node(1)[1] == 0.7f);
}

}  // TEST_SUITE
