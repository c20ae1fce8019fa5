#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tlcrf/energy.hpp"
#include "tlcrf/error.hpp"
#include "tlcrf/segmentation.hpp"

using namespace tlcrf;

namespace {

struct Fixture {
  std::size_t h, w, classes;
  FeatureRaster raster;
  RegionMap regions;
  FusionGraph graph;
  ProbabilityField pixel_probs;
  ProbabilityField region_probs;
  RegionFeatureTable region_table;
};

Fixture make_fixture(std::mt19937_64& rng, std::size_t h, std::size_t w, std::size_t regions_count,
                     std::size_t classes) {
  auto raster = oracle::random_raster(rng, h, w, 3);
  auto regions = oracle::random_regions(rng, h, w, regions_count);
  auto graph = flatten(h, w, regions);
  ProbabilityField px(h * w, classes, oracle::random_probs(rng, h * w, classes));
  ProbabilityField rp(regions.num_regions(), classes, oracle::random_probs(rng, regions.num_regions(), classes));
  auto table = region_features(raster, regions);
  return {h, w, classes, std::move(raster), std::move(regions), std::move(graph), std::move(px), std::move(rp),
          std::move(table)};
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("unary costs") {
  ProbabilityField p(2, 2, {1.0f, 0.0f, 0.5f, 0.5f});
  const auto u = unary_from_probs(p, 1e-6);
  CHECK(u[0] == 0.0);
  CHECK(u[1] == doctest::Approx(13.815510557964274));
  CHECK(u[2] == doctest::Approx(0.6931471805599453));
  CHECK_THROWS_AS(unary_from_probs(p, 0.0), Error);
  CHECK_THROWS_AS(unary_from_probs(p, 1.0), Error);
}

TEST_CASE("gaussian kernel") {
  const std::vector<double> a{1.0, 2.0}, b{1.0, 2.0};
  CHECK(gaussian_kernel(a, b, 0.7) == 1.0);
  const double sigma = 1.3;
  const std::vector<double> c{1.0 + sigma * std::sqrt(2.0), 2.0};
  CHECK(gaussian_kernel(a, c, sigma) == doctest::Approx(std::exp(-1.0)));
  const std::vector<double> far{1000.0, 2.0};
  CHECK(gaussian_kernel(a, far, 1.0) < 1e-100);
}

TEST_CASE("sigma heuristic") {
  const std::vector<double> equal{0.0, 2.0, 4.0};
  const std::vector<NodePair> chain{{0, 1}, {1, 2}};
  CHECK(sigma_heuristic({equal, 1}, chain) == 1.0);
  const std::vector<double> mixed{0.0, 1.0, 4.0};
  CHECK(sigma_heuristic({mixed, 1}, chain) == 1.0);
  const std::vector<double> flat{5.0, 5.0, 5.0};
  CHECK(sigma_heuristic({flat, 1}, chain) == 1.0);
  const std::vector<double> scaled{0.0, 3.0, 6.0};
  CHECK(sigma_heuristic({scaled, 1}, chain) == 1.5);
  try {
    sigma_heuristic({flat, 1}, {});
    FAIL("expected NoEdges");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEdges);
  }
}

TEST_CASE("evaluate small examples") {
  EnergyModel iso(2, 2, {0, 1, 1, 0}, {});
  CHECK(evaluate(iso, std::vector<Label>{0, 1}) == 0.0);
  EnergyModel chain(2, 2, {0, 1, 1, 0}, {{0, 1, 0.4}});
  CHECK(evaluate(chain, std::vector<Label>{0, 1}) == doctest::Approx(0.4));
  CHECK(evaluate(chain, std::vector<Label>{0, 0}) == doctest::Approx(1.0));
  CHECK(evaluate(chain, std::vector<Label>{1, 0}) == doctest::Approx(2.4));
  CHECK(evaluate(chain, std::vector<Label>{1, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluate(chain, std::vector<Label>{0, 2}), Error);
  CHECK_THROWS_AS(evaluate(chain, std::vector<Label>{0}), Error);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(EnergyModel(1, 2, {0.0, -1.0}, {}), Error);
  CHECK_THROWS_AS(EnergyModel(2, 2, {0, 0, 0, 0}, {{0, 2, 1.0}}), Error);
  CHECK_THROWS_AS(EnergyModel(2, 2, {0, 0, 0, 0}, {{0, 1, -1.0}}), Error);
}

TEST_CASE("assemble edge weights") {
  std::mt19937_64 rng(21);
  auto f = make_fixture(rng, 4, 5, 3, 3);
  const auto table = standardize(f.region_table);
  const EnergyParams params{0.7, 1.9, 2.5, 40.0, 1.3, 1e-6};
  const auto model = assemble(f.graph, f.pixel_probs, f.region_probs, f.raster, table, params);
  REQUIRE(model.edges().size() == f.graph.edges().size());
  const std::size_t p = f.graph.num_pixel_nodes();
  for (std::size_t i = 0; i < model.edges().size(); ++i) {
    const auto& ge = f.graph.edges()[i];
    const auto& me = model.edges()[i];
    CHECK(me.u == ge.u);
    CHECK(me.v == ge.v);
    double expected = params.mu;
    if (ge.kind == EdgeKind::PixelPixel) {
      expected = params.lambda_p * gaussian_kernel(f.raster.pixel(ge.u), f.raster.pixel(ge.v), params.sigma_p);
    } else if (ge.kind == EdgeKind::RegionRegion) {
      expected = params.lambda_r * gaussian_kernel(table.row(ge.u - p), table.row(ge.v - p), params.sigma_r);
    }
    CHECK(me.weight == expected);
  }
  const auto pu = unary_from_probs(f.pixel_probs, 1e-6);
  const auto ru = unary_from_probs(f.region_probs, 1e-6);
  for (std::size_t i = 0; i < pu.size(); ++i) CHECK(model.unaries()[i] == pu[i]);
  for (std::size_t i = 0; i < ru.size(); ++i) CHECK(model.unaries()[pu.size() + i] == ru[i]);
}

TEST_CASE("assemble with zero weights and identical features") {
  std::mt19937_64 rng(22);
  auto f = make_fixture(rng, 3, 3, 2, 2);
  const auto zero = assemble(f.graph, f.pixel_probs, f.region_probs, f.raster, f.region_table,
                             {0.0, 0.0, 0.0, 1.0, 1.0, 1e-6});
  for (const auto& e : zero.edges()) CHECK(e.weight == 0.0);
  FeatureRaster flat(3, 3, 3, std::vector<double>(27, 1.0));
  const auto same = assemble(f.graph, f.pixel_probs, f.region_probs, flat, f.region_table,
                             {0.8, 1.0, 3.0, 1.0, 1.0, 1e-6});
  for (std::size_t i = 0; i < same.edges().size(); ++i) {
    if (f.graph.edges()[i].kind == EdgeKind::PixelPixel) CHECK(same.edges()[i].weight == 0.8);
    if (f.graph.edges()[i].kind == EdgeKind::Cross) CHECK(same.edges()[i].weight == 3.0);
  }
}

TEST_CASE("assemble dimension checks") {
  std::mt19937_64 rng(23);
  auto f = make_fixture(rng, 3, 3, 2, 2);
  ProbabilityField wrong(4, 2, oracle::random_probs(rng, 4, 2));
  try {
    assemble(f.graph, wrong, f.region_probs, f.raster, f.region_table, {});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("cross terms charge mu per disagreeing pixel") {
  std::mt19937_64 rng(24);
  auto f = make_fixture(rng, 4, 4, 3, 3);
  const double mu = 1.75;
  const auto model = assemble(f.graph, f.pixel_probs, f.region_probs, f.raster, f.region_table,
                              {0.5, 0.5, mu, 50.0, 2.0, 1e-6});
  std::vector<Label> agree(f.graph.num_nodes(), 0);
  for (std::size_t r = 0; r < f.graph.num_region_nodes(); ++r) agree[f.graph.region_node(r)] = static_cast<Label>(r % 3);
  for (std::size_t px = 0; px < f.graph.num_pixel_nodes(); ++px) agree[px] = agree[f.graph.up(px)];
  auto flip = agree;
  flip[5] = static_cast<Label>((flip[5] + 1) % 3);
  // Only pixel 5 changes: its unary, its pixel edges and exactly one cross edge.
  double expected = evaluate(model, agree) + model.unary(5)[flip[5]] - model.unary(5)[agree[5]] + mu;
  for (std::size_t i = 0; i < model.edges().size(); ++i) {
    const auto& e = model.edges()[i];
    if (f.graph.edges()[i].kind != EdgeKind::PixelPixel || (e.u != 5 && e.v != 5)) continue;
    const NodeId other = e.u == 5 ? e.v : e.u;
    expected += e.weight * ((flip[other] != flip[5]) - (agree[other] != agree[5]));
  }
  CHECK(evaluate(model, flip) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("zeroed edges make the optimum the unary argmin") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    auto in = oracle::random_tree(rng, 6);
    for (auto& e : in.edges) e.w = 0.0;
    const auto best = oracle::exhaustive(in);
    for (std::size_t n = 0; n < in.nodes; ++n) {
      const auto* row = &in.unary[n * in.classes];
      CHECK(best.labeling[n] == std::min_element(row, row + in.classes) - row);
    }
    CHECK(evaluate(oracle::to_model(in), best.labeling) == doctest::Approx(best.energy));
  }
}

}  // TEST_SUITE
