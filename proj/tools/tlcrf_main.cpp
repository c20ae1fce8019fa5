// Command-line front end for the tlcrf shared library.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tlcrf/tlcrf.h"

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tlcrf_status status, const std::string& what) {
  if (status == TLCRF_OK) return;
  std::string msg = what + ": " + tlcrf_status_string(status);
  const std::string detail = tlcrf_last_error();
  if (!detail.empty()) msg += " (" + detail + ")";
  throw Failure(msg);
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Raster = std::unique_ptr<tlcrf_raster, Deleter<tlcrf_raster, tlcrf_raster_free>>;
using Labels = std::unique_ptr<tlcrf_labels, Deleter<tlcrf_labels, tlcrf_labels_free>>;
using Regions = std::unique_ptr<tlcrf_regions, Deleter<tlcrf_regions, tlcrf_regions_free>>;
using Probs = std::unique_ptr<tlcrf_probs, Deleter<tlcrf_probs, tlcrf_probs_free>>;
using Result = std::unique_ptr<tlcrf_result, Deleter<tlcrf_result, tlcrf_result_free>>;
using Confusion = std::unique_ptr<tlcrf_confusion, Deleter<tlcrf_confusion, tlcrf_confusion_free>>;

Raster load_raster(const std::string& path, std::size_t width) {
  tlcrf_raster* r = nullptr;
  check(tlcrf_raster_read(path.c_str(), width, &r), "reading " + path);
  return Raster(r);
}

Regions load_regions(const std::string& path) {
  tlcrf_regions* r = nullptr;
  check(tlcrf_regions_read_pgm(path.c_str(), &r), "reading " + path);
  return Regions(r);
}

Probs load_probs(const std::string& path) {
  tlcrf_probs* p = nullptr;
  check(tlcrf_probs_read(path.c_str(), &p), "reading " + path);
  return Probs(p);
}

Labels load_labels(const std::string& path, std::size_t classes = 0) {
  tlcrf_labels* l = nullptr;
  check(tlcrf_labels_read_pgm(path.c_str(), classes, &l), "reading " + path);
  return Labels(l);
}

void log(const std::string& msg) { std::cerr << "tlcrf: " << msg << '\n'; }

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string score_cells(const tlcrf_scores& s) {
  return fmt(s.oa, 4) + ',' + fmt(s.aa, 4) + ',' + fmt(s.kappa, 4) + ',' + fmt(s.kappa, 2);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CLI::ValidationError("grid", "bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("grid", "empty value list");
  return out;
}

// Shared inference inputs.
struct InferenceArgs {
  std::string image;
  std::size_t width = 0;
  std::string regions;
  std::string pixel_probs;
  std::string region_probs;
  double lambda_p = 1.0;
  double lambda_r = 1.0;
  double mu = 1.0;
  double sigma = 0.0;
  double prob_floor = 1e-6;
  std::size_t max_iterations = 100;
  double tolerance = 1e-4;
  std::string method = "trws";
};

void add_inference_options(CLI::App* cmd, InferenceArgs& a, bool weights) {
  cmd->add_option("--image", a.image, "Feature raster (PPM or PRB1)")->required();
  cmd->add_option("--width", a.width, "Raster width, needed for PRB1 rasters");
  cmd->add_option("--regions", a.regions, "Region map (16-bit PGM)")->required();
  cmd->add_option("--pixel-probs", a.pixel_probs, "Pixel posteriors (PRB1)")->required();
  cmd->add_option("--region-probs", a.region_probs, "Region posteriors (PRB1); pooled from pixels when omitted");
  if (weights) {
    cmd->add_option("--lambda-p", a.lambda_p, "Pixel pairwise weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--lambda-r", a.lambda_r, "Region pairwise weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--mu", a.mu, "Cross-layer weight")->check(CLI::NonNegativeNumber);
  }
  cmd->add_option("--sigma", a.sigma, "Fixed kernel width for both layers (default: heuristic)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--prob-floor", a.prob_floor, "Probability floor for unaries")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", a.max_iterations, "Solver sweep limit")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", a.tolerance, "Bound improvement threshold")->check(CLI::NonNegativeNumber);
  cmd->add_option("--method", a.method, "Solver")->check(CLI::IsMember({"trws", "icm", "brute-force"}));
}

tlcrf_fusion_params fusion_params(const InferenceArgs& a, const CLI::App* cmd) {
  tlcrf_fusion_params p;
  tlcrf_fusion_params_init(&p);
  p.lambda_p = a.lambda_p;
  p.lambda_r = a.lambda_r;
  p.mu = a.mu;
  if (cmd->count("--sigma") > 0) {
    p.sigma_fixed = 1;
    p.sigma = a.sigma;
  }
  p.prob_floor = a.prob_floor;
  p.max_iterations = a.max_iterations;
  p.energy_tolerance = a.tolerance;
  p.method = a.method == "icm" ? TLCRF_SOLVER_ICM
             : a.method == "brute-force" ? TLCRF_SOLVER_BRUTE_FORCE
                                         : TLCRF_SOLVER_TRWS;
  return p;
}

struct Inputs {
  Raster raster;
  Regions regions;
  Probs pixel_probs;
  Probs region_probs;
  std::size_t height = 0;
  std::size_t width = 0;
};

Inputs load_inputs(const InferenceArgs& a) {
  Inputs in;
  in.raster = load_raster(a.image, a.width);
  in.regions = load_regions(a.regions);
  in.pixel_probs = load_probs(a.pixel_probs);
  if (!a.region_probs.empty()) in.region_probs = load_probs(a.region_probs);
  check(tlcrf_raster_dims(in.raster.get(), &in.height, &in.width, nullptr), "raster");
  return in;
}

void write_labels(tlcrf_labels* labels, const std::string& path) {
  check(tlcrf_labels_write_pgm(labels, path.c_str()), "writing " + path);
}

void report(const tlcrf_result* result) {
  tlcrf_result_info info;
  check(tlcrf_result_info_get(result, &info), "result");
  std::ostringstream msg;
  msg.precision(10);
  msg << "energy " << info.energy << ", lower bound " << info.lower_bound << ", sweeps " << info.iterations
      << (info.converged ? ", converged" : ", not converged");
  if (info.sigma_p > 0.0) msg << ", sigma_p " << info.sigma_p << ", sigma_r " << info.sigma_r;
  log(msg.str());
}

int run_segment(const std::string& image, std::size_t width, double k, std::size_t min_size, int connectivity,
                const std::string& out) {
  auto raster = load_raster(image, width);
  tlcrf_segmentation_params p;
  tlcrf_segmentation_params_init(&p);
  p.k = k;
  p.min_size = min_size;
  p.connectivity = connectivity;
  tlcrf_regions* regions = nullptr;
  check(tlcrf_segment(raster.get(), &p, &regions), "segmentation");
  Regions owned(regions);
  std::size_t count = 0;
  check(tlcrf_regions_dims(regions, nullptr, nullptr, &count), "regions");
  check(tlcrf_regions_write_pgm(regions, out.c_str()), "writing " + out);
  log(std::to_string(count) + " regions");
  return 0;
}

int run_pool(const std::string& pixel_probs, const std::string& regions_path, const std::string& out) {
  auto probs = load_probs(pixel_probs);
  auto regions = load_regions(regions_path);
  tlcrf_probs* pooled = nullptr;
  check(tlcrf_pool_region_probs(probs.get(), regions.get(), &pooled), "pooling");
  Probs owned(pooled);
  check(tlcrf_probs_write(pooled, out.c_str()), "writing " + out);
  return 0;
}

int run_fuse(const InferenceArgs& a, const CLI::App* cmd, const std::string& out_pixel, const std::string& out_region,
             const std::string& trace, const std::string& graph_csv) {
  auto in = load_inputs(a);
  const auto params = fusion_params(a, cmd);
  tlcrf_result* result = nullptr;
  check(tlcrf_fuse(in.raster.get(), in.regions.get(), in.pixel_probs.get(), in.region_probs.get(), &params, &result),
        "fusion");
  Result owned(result);
  report(result);
  tlcrf_labels* labels = nullptr;
  check(tlcrf_result_pixel_labels(result, &labels), "pixel labels");
  Labels pixel(labels);
  write_labels(pixel.get(), out_pixel);
  check(tlcrf_result_region_labels(result, &labels), "region labels");
  Labels region(labels);
  write_labels(region.get(), out_region);
  if (!trace.empty()) check(tlcrf_result_write_trace_csv(result, trace.c_str()), "writing " + trace);
  if (!graph_csv.empty()) check(tlcrf_graph_write_csv(in.regions.get(), graph_csv.c_str()), "writing " + graph_csv);
  return 0;
}

int run_baseline(const InferenceArgs& a, const CLI::App* cmd, const std::string& layer, const std::string& out,
                 const std::string& trace) {
  auto in = load_inputs(a);
  const auto params = fusion_params(a, cmd);
  const bool pixel = layer == "pixel";
  tlcrf_result* result = nullptr;
  check(tlcrf_baseline(in.raster.get(), in.regions.get(), in.pixel_probs.get(), in.region_probs.get(), &params,
                       pixel ? TLCRF_LAYER_PIXEL : TLCRF_LAYER_REGION, &result),
        "baseline");
  Result owned(result);
  report(result);
  tlcrf_labels* labels = nullptr;
  check(pixel ? tlcrf_result_pixel_labels(result, &labels) : tlcrf_result_region_labels(result, &labels), "labels");
  Labels map(labels);
  write_labels(map.get(), out);
  if (!trace.empty()) check(tlcrf_result_write_trace_csv(result, trace.c_str()), "writing " + trace);
  return 0;
}

struct Tile {
  std::string name;
  std::string pred;
  std::string ref;
};

std::vector<Tile> read_tile_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open " + path);
  std::vector<Tile> tiles;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      const auto e = field.find_last_not_of(" \t\r");
      fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() != 3) throw Failure(path + ": expected 'tile,pred,ref' lines");
    tiles.push_back({fields[0], fields[1], fields[2]});
  }
  if (tiles.empty()) throw Failure(path + ": no tiles listed");
  return tiles;
}

int run_eval(const std::vector<std::string>& preds, const std::vector<std::string>& refs, const std::string& tile_list,
             const std::string& out_csv, const std::string& layer, const std::string& method,
             std::size_t classes) {
  std::vector<Tile> tiles;
  if (!tile_list.empty()) {
    tiles = read_tile_list(tile_list);
  } else {
    if (preds.size() != refs.size() || preds.empty()) throw Failure("--pred and --ref must pair up");
    for (std::size_t i = 0; i < preds.size(); ++i) tiles.push_back({std::to_string(i + 1), preds[i], refs[i]});
  }

  std::vector<Confusion> matrices;
  std::ostringstream csv;
  csv << "tile,layer,method,oa,aa,kappa,kappa_2dp\n";
  for (const auto& t : tiles) {
    auto ref = load_labels(t.ref, classes);
    auto pred = load_labels(t.pred, classes);
    tlcrf_confusion* cm = nullptr;
    check(tlcrf_confusion_compute(ref.get(), pred.get(), classes, &cm), "tile " + t.name);
    matrices.emplace_back(cm);
    tlcrf_scores s;
    check(tlcrf_confusion_scores(cm, &s), "tile " + t.name);
    csv << t.name << ',' << layer << ',' << method << ',' << score_cells(s) << '\n';
  }
  std::vector<const tlcrf_confusion*> raw;
  for (const auto& m : matrices) raw.push_back(m.get());
  tlcrf_scores pooled, averaged;
  check(tlcrf_aggregate(raw.data(), raw.size(), &pooled, &averaged), "aggregation");
  csv << "pooled," << layer << ',' << method << ',' << score_cells(pooled) << '\n';
  csv << "averaged," << layer << ',' << method << ',' << score_cells(averaged) << '\n';

  std::ofstream out(out_csv);
  if (!out) throw Failure("cannot open " + out_csv);
  out << csv.str();
  if (!out) throw Failure("write failed: " + out_csv);
  log("pooled OA " + fmt(pooled.oa, 4) + ", kappa " + fmt(pooled.kappa, 4));
  return 0;
}

struct Cell {
  double lambda = 0.0;
  double mu = 0.0;
  tlcrf_scores pixel{};
  tlcrf_scores region{};
  std::string error;
};

int run_sweep(const InferenceArgs& a, const CLI::App* cmd, const std::vector<std::string>& grid,
              const std::string& val_ref, const std::string& out_csv, std::size_t jobs) {
  std::vector<double> lambdas{a.lambda_p};
  std::vector<double> mus{a.mu};
  for (const auto& entry : grid) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw Failure("grid entries look like lambda=a,b or mu=c,d");
    const auto key = entry.substr(0, eq);
    const auto values = parse_list(entry.substr(eq + 1));
    if (std::any_of(values.begin(), values.end(), [](double v) { return !(v >= 0.0); })) {
      throw Failure("grid values must be non-negative");
    }
    if (key == "lambda") {
      lambdas = values;
    } else if (key == "mu") {
      mus = values;
    } else {
      throw Failure("unknown grid key '" + key + "'");
    }
  }

  auto in = load_inputs(a);
  auto ref = load_labels(val_ref);
  const auto base = fusion_params(a, cmd);

  std::vector<Cell> cells;
  for (double l : lambdas) {
    for (double m : mus) cells.push_back({l, m, {}, {}, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& cell = cells[i];
      try {
        auto p = base;
        p.lambda_p = cell.lambda;
        p.lambda_r = cell.lambda;
        p.mu = cell.mu;
        tlcrf_result* result = nullptr;
        check(tlcrf_fuse(in.raster.get(), in.regions.get(), in.pixel_probs.get(), in.region_probs.get(), &p, &result),
              "fusion");
        Result owned(result);
        for (int layer = 0; layer < 2; ++layer) {
          tlcrf_labels* labels = nullptr;
          check(layer == 0 ? tlcrf_result_pixel_labels(result, &labels) : tlcrf_result_region_labels(result, &labels),
                "labels");
          Labels pred(labels);
          tlcrf_confusion* cm = nullptr;
          check(tlcrf_confusion_compute(ref.get(), pred.get(), 0, &cm), "evaluation");
          Confusion owned_cm(cm);
          check(tlcrf_confusion_scores(cm, layer == 0 ? &cell.pixel : &cell.region), "evaluation");
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& cell : cells) {
    if (!cell.error.empty()) throw Failure(cell.error);
  }

  std::ostringstream csv;
  csv << "lambda,mu,layer,oa,aa,kappa,kappa_2dp\n";
  std::size_t best = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    csv << c.lambda << ',' << c.mu << ",pixel," << score_cells(c.pixel) << '\n';
    csv << c.lambda << ',' << c.mu << ",region," << score_cells(c.region) << '\n';
    if (c.pixel.oa > cells[best].pixel.oa) best = i;
  }
  std::ofstream out(out_csv);
  if (!out) throw Failure("cannot open " + out_csv);
  out << csv.str();
  if (!out) throw Failure("write failed: " + out_csv);

  const auto& b = cells[best];
  std::cout << "lambda=" << b.lambda << " mu=" << b.mu << " pixel_oa=" << fmt(b.pixel.oa, 4)
            << " region_oa=" << fmt(b.region.oa, 4) << '\n';
  return 0;
}

int run_synth(const tlcrf_synth_params& p, const std::string& out_image, const std::string& out_truth,
              const std::string& out_probs) {
  tlcrf_raster* image = nullptr;
  tlcrf_labels* truth = nullptr;
  tlcrf_probs* probs = nullptr;
  check(tlcrf_synth(&p, &image, &truth, &probs), "synthesis");
  Raster owned_image(image);
  Labels owned_truth(truth);
  Probs owned_probs(probs);
  check(tlcrf_raster_write_ppm(image, out_image.c_str()), "writing " + out_image);
  write_labels(truth, out_truth);
  check(tlcrf_probs_write(probs, out_probs.c_str()), "writing " + out_probs);
  return 0;
}

// Keys outside any [section] belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(std::string name) : name_(std::move(name)) {}
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    auto items = CLI::ConfigINI::from_config(in);
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents = {name_};
    }
    return items;
  }

 private:
  std::string name_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer CRF decision fusion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tlcrf_version()));

  app.set_config("--config", "", "Flat 'key = value' file for the subcommand; flags override it");
  app.config_formatter(std::make_shared<SubcommandConfig>(argc > 1 ? argv[1] : ""));
  auto with_config = [](CLI::App* cmd) {
    cmd->fallthrough();
    return cmd;
  };

  // segment
  std::string seg_image, seg_out;
  std::size_t seg_width = 0, seg_min_size = 20;
  double seg_k = 300.0;
  int seg_conn = 8;
  auto* seg = with_config(app.add_subcommand("segment", "Graph-based segmentation into regions"));
  seg->add_option("--image", seg_image, "Feature raster (PPM or PRB1)")->required();
  seg->add_option("--width", seg_width, "Raster width, needed for PRB1 rasters");
  seg->add_option("--k", seg_k, "Scale parameter")->check(CLI::NonNegativeNumber);
  seg->add_option("--min-size", seg_min_size, "Minimum region size");
  seg->add_option("--connectivity", seg_conn, "Grid connectivity")->check(CLI::IsMember({4, 8}));
  seg->add_option("--out-regions", seg_out, "Output region map (PGM)")->required();

  // pool
  std::string pool_probs, pool_regions, pool_out;
  auto* pool = with_config(app.add_subcommand("pool", "Average pixel posteriors within regions"));
  pool->add_option("--pixel-probs", pool_probs, "Pixel posteriors (PRB1)")->required();
  pool->add_option("--regions", pool_regions, "Region map (PGM)")->required();
  pool->add_option("--out-region-probs", pool_out, "Output region posteriors (PRB1)")->required();

  // fuse
  InferenceArgs fuse_args;
  std::string fuse_pixel, fuse_region, fuse_trace, fuse_graph;
  auto* fuse = with_config(app.add_subcommand("fuse", "Two-layer CRF fusion"));
  add_inference_options(fuse, fuse_args, true);
  fuse->add_option("--out-pixel-labels", fuse_pixel, "Pixel-layer labels (PGM)")->required();
  fuse->add_option("--out-region-labels", fuse_region, "Region-layer labels at pixel resolution (PGM)")->required();
  fuse->add_option("--trace", fuse_trace, "Per-sweep solver trace (CSV)");
  fuse->add_option("--graph-csv", fuse_graph, "Flattened graph edge list (CSV)");

  // baseline
  InferenceArgs base_args;
  std::string base_layer = "pixel", base_out, base_trace;
  auto* base = with_config(app.add_subcommand("baseline", "Single-layer CRF"));
  add_inference_options(base, base_args, true);
  base->add_option("--layer", base_layer, "Layer to solve")->check(CLI::IsMember({"pixel", "region"}));
  base->add_option("--out-labels", base_out, "Labels at pixel resolution (PGM)")->required();
  base->add_option("--trace", base_trace, "Per-sweep solver trace (CSV)");

  // eval
  std::vector<std::string> eval_pred, eval_ref;
  std::string eval_list, eval_out, eval_layer = "pixel", eval_method = "2lcrf";
  std::size_t eval_classes = 0;
  auto* eval = with_config(app.add_subcommand("eval", "Confusion-matrix metrics"));
  eval->add_option("--pred", eval_pred, "Predicted label maps (PGM)");
  eval->add_option("--ref", eval_ref, "Reference label maps (PGM), paired with --pred");
  eval->add_option("--tile-list", eval_list, "CSV lines 'tile,pred,ref' instead of --pred/--ref");
  eval->add_option("--out-csv", eval_out, "Output report")->required();
  eval->add_option("--layer", eval_layer, "Layer name for the report");
  eval->add_option("--method", eval_method, "Method name for the report");
  eval->add_option("--classes", eval_classes, "Class count (default: inferred)");

  // sweep
  InferenceArgs sweep_args;
  std::vector<std::string> sweep_grid;
  std::string sweep_ref, sweep_out;
  std::size_t sweep_jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = with_config(app.add_subcommand("sweep", "Evaluate a lambda/mu grid"));
  add_inference_options(sweep, sweep_args, true);
  sweep->add_option("--grid", sweep_grid, "lambda=a,b,... mu=c,d,...")->required();
  sweep->add_option("--val-ref", sweep_ref, "Validation reference labels (PGM)")->required();
  sweep->add_option("--out-csv", sweep_out, "Output grid report")->required();
  sweep->add_option("--jobs", sweep_jobs, "Concurrent cells")->check(CLI::PositiveNumber);

  // synth
  tlcrf_synth_params synth_params;
  tlcrf_synth_params_init(&synth_params);
  std::string synth_image, synth_truth, synth_probs;
  auto* synth = with_config(app.add_subcommand("synth", "Generate a synthetic instance"));
  synth->add_option("--height", synth_params.height, "Rows")->check(CLI::PositiveNumber);
  synth->add_option("--width", synth_params.width, "Columns")->check(CLI::PositiveNumber);
  synth->add_option("--classes", synth_params.classes, "Class count")->check(CLI::Range(2, 65534));
  synth->add_option("--noise", synth_params.noise, "Label noise rate")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", synth_params.seed, "Random seed");
  synth->add_option("--sites", synth_params.sites, "Voronoi sites (0: automatic)");
  synth->add_option("--confidence", synth_params.confidence, "Posterior sharpness")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--out-image", synth_image, "Feature raster (PPM)")->required();
  synth->add_option("--out-truth", synth_truth, "Ground truth (PGM)")->required();
  synth->add_option("--out-pixel-probs", synth_probs, "Pixel posteriors (PRB1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*seg) return run_segment(seg_image, seg_width, seg_k, seg_min_size, seg_conn, seg_out);
    if (*pool) return run_pool(pool_probs, pool_regions, pool_out);
    if (*fuse) return run_fuse(fuse_args, fuse, fuse_pixel, fuse_region, fuse_trace, fuse_graph);
    if (*base) return run_baseline(base_args, base, base_layer, base_out, base_trace);
    if (*eval) return run_eval(eval_pred, eval_ref, eval_list, eval_out, eval_layer, eval_method, eval_classes);
    if (*sweep) return run_sweep(sweep_args, sweep, sweep_grid, sweep_ref, sweep_out, sweep_jobs);
    if (*synth) return run_synth(synth_params, synth_image, synth_truth, synth_probs);
  } catch (const CLI::Error& e) {
    std::cerr << "tlcrf: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tlcrf: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
