// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tlcrf/error.hpp"
#include "tlcrf/io.hpp"
#include "tlcrf/metrics.hpp"
#include "tlcrf/pipeline.hpp"
#include "tlcrf/segmentation.hpp"
#include "tlcrf/solver.hpp"
#include "tlcrf/synth.hpp"

using namespace tlcrf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Random flattened instance on an h x w grid with `regions` regions.
FusionProblem flattened(std::mt19937_64& rng, std::size_t h, std::size_t w, std::size_t regions,
                        std::size_t classes, double lambda, double mu) {
  const auto raster = oracle::random_raster(rng, h, w, 3);
  const auto region_map = oracle::random_regions(rng, h, w, regions);
  ProbabilityField px(h * w, classes, oracle::random_probs(rng, h * w, classes));
  ProbabilityField rp(regions, classes, oracle::random_probs(rng, regions, classes));
  FusionParams params;
  params.lambda_p = params.lambda_r = lambda;
  params.mu = mu;
  return build_problem(raster, region_map, px, rp, params);
}

Outcome tree_exactness() {
  std::mt19937_64 rng(1001);
  std::vector<oracle::Instance> instances;
  for (int i = 0; i < 200; ++i) instances.push_back(oracle::random_tree(rng, 12));

  const auto t0 = Clock::now();
  std::vector<SolverResult> results;
  for (const auto& in : instances) results.push_back(trws_solve(oracle::to_model(in), {}));
  const double solve_time = seconds_since(t0);

  Outcome out;
  double worst_gap = 0.0, worst_opt = 0.0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto best = brute_force_solve(oracle::to_model(instances[i]));
    const auto check = oracle::exhaustive(instances[i]);
    worst_opt = std::max({worst_opt, std::abs(results[i].energy - best.energy), std::abs(best.energy - check.energy)});
    worst_gap = std::max(worst_gap, std::abs(results[i].energy - results[i].lower_bound));
  }
  out.pass = worst_opt <= 1e-6 && worst_gap <= 1e-6 && solve_time < 5.0;
  out.detail = "200 trees, max |E-E*| " + num(worst_opt, 12) + ", max |E-LB| " + num(worst_gap, 12) + ", solve " +
               num(solve_time, 3) + " s";
  return out;
}

Outcome loopy_bound() {
  std::mt19937_64 rng(1002);
  Outcome out;
  int violations = 0, non_monotone = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t regions = oracle::pick(rng, 2, 3);
    const std::size_t classes = oracle::pick(rng, 2, 3);
    const auto problem =
        flattened(rng, 3, 3, regions, classes, oracle::uniform(rng, 0.0, 3.0), oracle::uniform(rng, 0.0, 3.0));
    const auto r = trws_solve(problem.model, {});
    const double opt = oracle::exhaustive(oracle::from_model(problem.model)).energy;
    if (!(r.lower_bound <= opt + 1e-9 && opt <= r.energy + 1e-9)) ++violations;
    for (std::size_t k = 1; k < r.bound_trace.size(); ++k) {
      if (r.bound_trace[k] < r.bound_trace[k - 1] - 1e-9) {
        ++non_monotone;
        break;
      }
    }
  }
  out.pass = violations == 0 && non_monotone == 0;
  out.detail = "200 loopy 3x3 instances, " + std::to_string(violations) + " bound violations, " +
               std::to_string(non_monotone) + " non-monotone traces";
  return out;
}

Outcome decoupling() {
  std::mt19937_64 rng(1003);
  Outcome out;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t h = oracle::pick(rng, 3, 8), w = oracle::pick(rng, 3, 8);
    const auto problem = flattened(rng, h, w, oracle::pick(rng, 2, std::min<std::size_t>(6, h * w)),
                                   oracle::pick(rng, 2, 4), oracle::uniform(rng, 0.1, 3.0), 0.0);
    const auto joint = trws_solve(problem.model, {});
    for (auto layer : {Layer::Pixel, Layer::Region}) {
      const auto alone = solve_single_layer(problem.model, problem.graph, layer, {});
      worst = std::max(worst, std::abs(layer_energy(problem.model, problem.graph, joint.labeling, layer) - alone.energy));
    }
  }
  out.pass = worst <= 1e-9;
  out.detail = "50 instances, max per-layer energy difference " + num(worst, 12);
  return out;
}

Outcome forced_agreement() {
  std::mt19937_64 rng(1004);
  Outcome out;
  int disagreements = 0, oracle_mismatch = 0, near_ties = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t h = oracle::pick(rng, 3, 8), w = oracle::pick(rng, 3, 8);
    const std::size_t p = h * w;
    auto probe = flattened(rng, h, w, oracle::pick(rng, 2, std::min<std::size_t>(6, p)), oracle::pick(rng, 2, 4),
                           0.0, 0.0);
    double range = 0.0;
    for (std::size_t n = 0; n < probe.model.num_nodes(); ++n) {
      const auto u = probe.model.unary(n);
      range = std::max(range, *std::max_element(u.begin(), u.end()) - *std::min_element(u.begin(), u.end()));
    }
    const double mu = 1.0 + 2.0 * range * static_cast<double>(p);
    std::vector<PottsEdge> edges = probe.model.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (probe.graph.edges()[e].kind == EdgeKind::Cross) edges[e].weight = mu;
    }
    const std::vector<double> unary(probe.model.unaries().begin(), probe.model.unaries().end());
    EnergyModel model(probe.model.num_nodes(), probe.model.num_classes(), unary, edges, probe.model.params());
    const auto r = trws_solve(model, {});
    for (std::size_t px = 0; px < p; ++px) {
      if (r.labeling[px] != r.labeling[probe.graph.up(px)]) ++disagreements;
    }
    const auto expected = oracle::forced_agreement(model, probe.graph);
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (expected[k].second < 1e-9) {
        ++near_ties;
        continue;
      }
      if (r.labeling[probe.graph.region_node(k)] != expected[k].first) ++oracle_mismatch;
    }
  }
  out.pass = disagreements == 0 && oracle_mismatch == 0;
  out.detail = "50 instances, " + std::to_string(disagreements) + " pixel/region disagreements, " +
               std::to_string(oracle_mismatch) + " oracle mismatches, " + std::to_string(near_ties) + " exact ties";
  return out;
}

Outcome cross_accounting() {
  std::mt19937_64 rng(1005);
  Outcome out;
  double worst = 0.0;
  int exact_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t h = oracle::pick(rng, 2, 8), w = oracle::pick(rng, 2, 8);
    const std::size_t classes = oracle::pick(rng, 2, 5);
    // Dyadic mu keeps repeated sums exact in binary floating point.
    const double mu = static_cast<double>(oracle::pick(rng, 1, 64)) / 16.0;
    const auto problem = flattened(rng, h, w, oracle::pick(rng, 1, std::min<std::size_t>(6, h * w)), classes,
                                   oracle::uniform(rng, 0.0, 3.0), mu);
    std::vector<Label> y(problem.model.num_nodes());
    for (auto& l : y) l = static_cast<Label>(oracle::pick(rng, 0, classes - 1));

    double rest = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) rest += problem.model.unary(n)[y[n]];
    std::size_t disagree = 0;
    for (std::size_t e = 0; e < problem.model.edges().size(); ++e) {
      const auto& me = problem.model.edges()[e];
      if (y[me.u] == y[me.v]) continue;
      if (problem.graph.edges()[e].kind == EdgeKind::Cross) {
        ++disagree;
      } else {
        rest += me.weight;
      }
    }
    const double cross = evaluate(problem.model, y) - rest;
    const double expected = mu * static_cast<double>(disagree);
    worst = std::max(worst, std::abs(cross - expected) / std::max(1.0, std::abs(evaluate(problem.model, y))));

    // Same labeling on a model holding only the cross terms: must equal mu x count bit for bit.
    std::vector<PottsEdge> cross_only;
    for (std::size_t e = 0; e < problem.model.edges().size(); ++e) {
      if (problem.graph.edges()[e].kind == EdgeKind::Cross) cross_only.push_back(problem.model.edges()[e]);
    }
    EnergyModel bare(y.size(), classes, std::vector<double>(y.size() * classes, 0.0), cross_only);
    if (evaluate(bare, y) != expected) ++exact_failures;
  }
  out.pass = worst <= 1e-12 && exact_failures == 0;
  out.detail = "100 random labelings, max relative residual " + num(worst, 15) + ", " +
               std::to_string(exact_failures) + " inexact cross-only sums";
  return out;
}

Outcome segmentation() {
  Outcome out;
  const double k = 1.0;
  const std::size_t cell = 12;
  std::vector<std::string> notes;
  for (std::size_t g : {1, 2, 4, 9}) {
    const std::size_t gr = g == 2 ? 1 : static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(g))));
    const std::size_t gc = g / gr;
    const std::size_t h = gr * cell, w = gc * cell;
    std::vector<double> v(h * w * 3);
    std::vector<RegionId> planted(h * w);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const std::size_t id = (r / cell) * gc + c / cell;
        planted[r * w + c] = static_cast<RegionId>(id);
        // Cells differ by at least 100 k in the first band.
        v[(r * w + c) * 3] = 100.0 * k * static_cast<double>(id);
        v[(r * w + c) * 3 + 1] = 17.0;
        v[(r * w + c) * 3 + 2] = 3.0 * static_cast<double>(id % 2);
      }
    }
    const auto regions = segment(FeatureRaster(h, w, 3, v), {k, 20, 8});
    const auto expected = relabel_contiguous(h, w, planted);
    const bool match = regions.num_regions() == g &&
                       std::equal(regions.ids().begin(), regions.ids().end(), expected.ids().begin());
    if (!match) out.pass = false;
    notes.push_back("G=" + std::to_string(g) + (match ? " ok" : " MISMATCH"));
  }

  std::mt19937_64 rng(1006);
  const auto noisy = oracle::random_raster(rng, 40, 40, 3);
  const auto first = segment(noisy, {});
  bool deterministic = true;
  for (int run = 0; run < 10; ++run) {
    const auto again = segment(noisy, {});
    deterministic = deterministic && std::equal(again.ids().begin(), again.ids().end(), first.ids().begin());
  }
  if (!deterministic) out.pass = false;
  std::string joined;
  for (const auto& n : notes) joined += (joined.empty() ? "" : ", ") + n;
  out.detail = joined + ", 10 repeated runs " + (deterministic ? "identical" : "DIFFER");
  return out;
}

ConfusionMatrix two_class(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  ConfusionMatrix cm(2);
  cm.add(0, 0, a);
  cm.add(0, 1, b);
  cm.add(1, 0, c);
  cm.add(1, 1, d);
  return cm;
}

Outcome metrics() {
  Outcome out;
  const auto cm = two_class(2, 0, 1, 1);
  const bool exact = oa(cm) == 0.75 && aa(cm) == 0.75 && kappa(cm) == 0.5;

  // Tile 1: 100 pixels, tile 2: 10 pixels, both balanced.
  const std::vector<ConfusionMatrix> method_a{two_class(50, 0, 0, 50), two_class(5, 0, 5, 0)};
  const std::vector<ConfusionMatrix> method_b{two_class(40, 10, 0, 50), two_class(5, 0, 0, 5)};
  const auto a = aggregate(method_a);
  const auto b = aggregate(method_b);
  const double pooled_delta = a.pooled.aa - b.pooled.aa;
  const double averaged_delta = a.averaged.aa - b.averaged.aa;
  const bool flipped = pooled_delta * averaged_delta < 0.0;
  out.pass = exact && flipped;
  out.detail = "[[2,0],[1,1]] -> OA " + num(oa(cm)) + " AA " + num(aa(cm)) + " kappa " + num(kappa(cm)) +
               "; AA delta pooled " + num(pooled_delta) + " vs averaged " + num(averaged_delta);
  return out;
}

struct SynthCase {
  SynthInstance inst;
  RegionMap regions;
  ProbabilityField region_probs;
};

SynthCase make_case(std::uint64_t seed) {
  SynthParams p;
  p.height = 64;
  p.width = 64;
  p.classes = 4;
  p.noise = 0.45;
  p.seed = seed;
  auto inst = synthesize(p);
  auto regions = segment(inst.image, {});
  auto pooled = pool_region_probs(inst.pixel_probs, regions);
  return {std::move(inst), std::move(regions), std::move(pooled)};
}

double pixel_oa(const SynthCase& c, const LabelMap& pred) { return oa(confusion(c.inst.truth, pred)); }

Outcome fusion_benefit() {
  const auto t0 = Clock::now();
  const std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
  const std::vector<double> mus{0.5, 1.0, 2.0, 4.0};

  // Parameters are picked on validation seeds disjoint from the test seeds.
  std::vector<SynthCase> validation;
  for (std::uint64_t s = 9001; s <= 9004; ++s) validation.push_back(make_case(s));
  double best_fused = -1.0, best_lambda = 0.0, best_mu = 0.0;
  for (double l : lambdas) {
    for (double m : mus) {
      double sum = 0.0;
      for (const auto& c : validation) {
        FusionParams fp;
        fp.lambda_p = fp.lambda_r = l;
        fp.mu = m;
        sum += pixel_oa(c, fuse(c.inst.image, c.regions, c.inst.pixel_probs, c.region_probs, fp).pixel_labels);
      }
      if (sum > best_fused) {
        best_fused = sum;
        best_lambda = l;
        best_mu = m;
      }
    }
  }
  double best_base = -1.0, base_lambda = 0.0;
  for (double l : lambdas) {
    double sum = 0.0;
    for (const auto& c : validation) {
      FusionParams fp;
      fp.lambda_p = fp.lambda_r = l;
      sum += pixel_oa(c, run_baseline(c.inst.image, c.regions, c.inst.pixel_probs, c.region_probs, fp, Layer::Pixel)
                             .pixel_labels);
    }
    if (sum > best_base) {
      best_base = sum;
      base_lambda = l;
    }
  }

  double unary = 0.0, fused = 0.0, base = 0.0;
  const int seeds = 20;
  for (int s = 1; s <= seeds; ++s) {
    const auto c = make_case(static_cast<std::uint64_t>(s));
    const LabelMap argmax(64, 64, 4, c.inst.pixel_probs.argmax());
    unary += pixel_oa(c, argmax);
    FusionParams fp;
    fp.lambda_p = fp.lambda_r = best_lambda;
    fp.mu = best_mu;
    fused += pixel_oa(c, fuse(c.inst.image, c.regions, c.inst.pixel_probs, c.region_probs, fp).pixel_labels);
    FusionParams bp;
    bp.lambda_p = bp.lambda_r = base_lambda;
    base += pixel_oa(c, run_baseline(c.inst.image, c.regions, c.inst.pixel_probs, c.region_probs, bp, Layer::Pixel)
                            .pixel_labels);
  }
  unary /= seeds;
  fused /= seeds;
  base /= seeds;
  const double elapsed = seconds_since(t0);

  Outcome out;
  out.pass = fused - unary >= 0.05 && fused > base && elapsed < 60.0;
  out.detail = "mean pixel OA: unary " + num(unary) + ", pixel CRF " + num(base) + " (lambda " + num(base_lambda, 1) +
               "), fused " + num(fused) + " (lambda " + num(best_lambda, 1) + ", mu " + num(best_mu, 1) + "), " +
               num(elapsed, 2) + " s";
  return out;
}

template <typename Write, typename Read>
bool round_trip(const Write& write, const Read& read) {
  std::ostringstream first;
  write(first, nullptr);
  std::istringstream in(first.str());
  auto back = read(in);
  std::ostringstream second;
  write(second, &back);
  return first.str() == second.str();
}

Outcome io_round_trips() {
  std::mt19937_64 rng(1009);
  int failures = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t h = oracle::pick(rng, 1, 20), w = oracle::pick(rng, 1, 20);

    // PGM label maps, including sentinels.
    const std::size_t classes = oracle::pick(rng, 2, 300);
    std::vector<Label> labels(h * w);
    for (auto& l : labels) l = oracle::pick(rng, 0, 9) == 0 ? kUnlabeled : static_cast<Label>(oracle::pick(rng, 0, classes - 1));
    const LabelMap map(h, w, classes, labels);
    std::ostringstream a;
    write_label_pgm(a, map);
    std::istringstream ain(a.str());
    const auto map_back = read_label_pgm(ain, classes);
    std::ostringstream a2;
    write_label_pgm(a2, map_back);
    if (a.str() != a2.str() || !std::equal(labels.begin(), labels.end(), map_back.labels().begin())) ++failures;

    // PGM region maps.
    const auto regions = oracle::random_regions(rng, h, w, oracle::pick(rng, 1, h * w));
    std::ostringstream r;
    write_region_pgm(r, regions);
    std::istringstream rin(r.str());
    const auto regions_back = read_region_pgm(rin);
    std::ostringstream r2;
    write_region_pgm(r2, regions_back);
    if (r.str() != r2.str() || !std::equal(regions.ids().begin(), regions.ids().end(), regions_back.ids().begin())) {
      ++failures;
    }

    // PPM rasters, 8-bit and 16-bit.
    const double top = i % 2 == 0 ? 255.0 : 65535.0;
    std::vector<double> px(h * w * 3);
    for (auto& v : px) v = std::floor(oracle::uniform(rng, 0.0, top + 1.0));
    const FeatureRaster raster(h, w, 3, px);
    std::ostringstream p;
    write_ppm(p, raster);
    std::istringstream pin(p.str());
    const auto raster_back = read_ppm(pin);
    std::ostringstream p2;
    write_ppm(p2, raster_back);
    if (p.str() != p2.str() || !std::equal(px.begin(), px.end(), raster_back.values().begin())) ++failures;

    // PRB1 posteriors and float rasters.
    const std::size_t c = oracle::pick(rng, 2, 6);
    const auto probs_values = oracle::random_probs(rng, h * w, c);
    const ProbabilityField probs(h * w, c, probs_values);
    std::ostringstream q;
    write_probs(q, probs);
    std::istringstream qin(q.str());
    const auto probs_back = read_probs(qin);
    std::ostringstream q2;
    write_probs(q2, probs_back);
    if (q.str() != q2.str() || std::memcmp(probs_back.probs().data(), probs.probs().data(), probs_values.size() * 4) != 0) {
      ++failures;
    }
    std::vector<double> fv(h * w * c);
    for (auto& v : fv) v = static_cast<float>(oracle::uniform(rng, -1e3, 1e3));
    const FeatureRaster fr(h, w, c, fv);
    std::ostringstream f;
    write_raster_prb(f, fr);
    std::istringstream fin(f.str());
    const auto fr_back = read_raster_prb(fin, w);
    std::ostringstream f2;
    write_raster_prb(f2, fr_back);
    if (f.str() != f2.str() || !std::equal(fv.begin(), fv.end(), fr_back.values().begin())) ++failures;
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = "20 objects each of label PGM, region PGM, PPM, PRB1 posteriors, PRB1 rasters; " +
               std::to_string(failures) + " mismatches";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 tree exactness", tree_exactness},
      {"2 loopy bound soundness", loopy_bound},
      {"3 decoupling at mu=0", decoupling},
      {"4 forced agreement at large mu", forced_agreement},
      {"5 cross-term accounting", cross_accounting},
      {"6 segmentation of planted cells", segmentation},
      {"7 metrics and aggregation", metrics},
      {"8 synthetic fusion benefit", fusion_benefit},
      {"9 I/O round trips", io_round_trips},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
