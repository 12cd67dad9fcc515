// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boxeval/annotations.hpp"
#include "boxeval/box.hpp"
#include "boxeval/cluster.hpp"
#include "boxeval/gradcheck.hpp"
#include "boxeval/losses.hpp"
#include "boxeval/metrics.hpp"
#include "boxeval/pairfile.hpp"
#include "boxeval/simulate.hpp"
#include "boxeval/text.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string out;
  bool quiet = false;
};

void write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  f << content;
}

void status(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto f : boxeval::split_fields(s)) {
    const auto t = boxeval::trim(f);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

// ---------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string pairs;
  std::string metrics = "iou,giou,cdiou";
  std::string losses;
  double lambda = 0.001;
  std::string cdiou_base = "iou_linear";
};

int cmd_eval(const EvalArgs& a, const GlobalOpts& g) {
  const boxeval::PairFile file = boxeval::load_pair_file(a.pairs);

  std::vector<std::pair<std::string, boxeval::MetricKind>> metric_cols;
  for (const std::string& name : split_list(a.metrics)) {
    metric_cols.emplace_back(
        name, boxeval::MetricKind(boxeval::parse_metric(name), a.lambda));
  }
  const boxeval::Loss base = boxeval::parse_loss(a.cdiou_base).loss;
  std::vector<std::pair<std::string, boxeval::LossKind>> loss_cols;
  for (const std::string& name : split_list(a.losses)) {
    loss_cols.emplace_back(name, boxeval::parse_loss(name, base));
  }

  std::ostringstream os;
  os << "rp_x1,rp_y1,rp_x2,rp_y2,gt_x1,gt_y1,gt_x2,gt_y2,canonicalized";
  for (const auto& [name, kind] : metric_cols) os << ',' << name;
  for (const auto& [name, kind] : loss_cols) os << ",loss_" << name;
  os << '\n';

  for (const boxeval::PairRecord& row : file.rows) {
    const auto emit_box = [&](const boxeval::Box& b) {
      os << boxeval::format_fixed(b.x1) << ',' << boxeval::format_fixed(b.y1)
         << ',' << boxeval::format_fixed(b.x2) << ','
         << boxeval::format_fixed(b.y2);
    };
    emit_box(row.rp);
    os << ',';
    emit_box(row.gt);
    os << ',' << (row.canonicalized ? 1 : 0);
    try {
      for (const auto& [name, kind] : metric_cols) {
        os << ',' << boxeval::format_fixed(
                         boxeval::metric_value(row.rp, row.gt, kind));
      }
      for (const auto& [name, kind] : loss_cols) {
        os << ','
           << boxeval::format_fixed(boxeval::loss(row.rp, row.gt, kind));
      }
    } catch (const std::domain_error& e) {
      throw std::domain_error(a.pairs + ":" + std::to_string(row.line) +
                              ": " + e.what());
    }
    os << '\n';
  }
  write_text(g.out, os.str());
  status(g, "evaluated " + std::to_string(file.rows.size()) + " pairs");
  return 0;
}

// ---------------------------------------------------------------- rank ----

struct RankArgs {
  std::string pairs;
  std::string metric = "cdiou";
  double lambda = 0.001;
};

int cmd_rank(const RankArgs& a, const GlobalOpts& g) {
  const boxeval::PairFile file = boxeval::load_pair_file(a.pairs);
  if (file.rows.empty()) {
    throw std::domain_error(a.pairs + ": no proposals to rank");
  }
  const boxeval::Box gt = file.rows.front().gt;
  std::vector<boxeval::Box> rps;
  for (const boxeval::PairRecord& row : file.rows) {
    if (!(row.gt == gt)) {
      throw std::domain_error(
          a.pairs + ": rank expects every row to share one ground truth");
    }
    rps.push_back(row.rp);
  }
  const boxeval::MetricKind kind(boxeval::parse_metric(a.metric), a.lambda);
  const auto order = boxeval::rank_proposals(rps, gt, kind);

  std::ostringstream os;
  os << "rank,index," << a.metric << '\n';
  for (std::size_t r = 0; r < order.size(); ++r) {
    os << r << ',' << order[r] << ','
       << boxeval::format_fixed(
              boxeval::metric_value(rps[order[r]], gt, kind))
       << '\n';
  }
  write_text(g.out, os.str());
  return 0;
}

// ---------------------------------------------------------------- grad ----

struct GradArgs {
  std::string kinds = "all";
  std::size_t n = 1000;
  double h = 1e-5;
  double rel_tolerance = 1e-4;
};

json box_json(const boxeval::Box& b) {
  return json::array({b.x1, b.y1, b.x2, b.y2});
}

int cmd_grad(const GradArgs& a, const GlobalOpts& g) {
  std::vector<boxeval::LossKind> kinds;
  if (a.kinds == "all") {
    kinds = boxeval::all_loss_kinds();
  } else {
    for (const std::string& name : split_list(a.kinds)) {
      kinds.push_back(boxeval::parse_loss(name));
    }
  }
  const auto reports = boxeval::sweep(kinds, a.n, g.seed, a.h,
                                      a.rel_tolerance);

  json doc;
  doc["h"] = a.h;
  doc["n_pairs"] = a.n;
  doc["seed"] = g.seed;
  doc["tolerance"] = {{"relative", a.rel_tolerance}, {"floor", 1e-7}};
  bool all_pass = true;
  doc["kinds"] = json::array();
  for (const boxeval::GradCheckReport& rep : reports) {
    static const char* coord_names[4] = {"x1", "y1", "x2", "y2"};
    json coords = json::array();
    for (int i = 0; i < 4; ++i) {
      coords.push_back({{"coord", coord_names[i]},
                        {"analytic", rep.worst[i].analytic},
                        {"numeric", rep.worst[i].numeric},
                        {"abs_error", rep.worst[i].abs_error},
                        {"rel_error", rep.worst[i].rel_error}});
    }
    doc["kinds"].push_back({{"kind", boxeval::loss_name(rep.kind)},
                            {"pairs_checked", rep.pairs_checked},
                            {"pairs_rejected", rep.pairs_rejected},
                            {"max_rel_error", rep.max_rel_error},
                            {"mean_rel_error", rep.mean_rel_error},
                            {"pass", rep.pass},
                            {"worst",
                             {{"rp", box_json(rep.worst_rp)},
                              {"gt", box_json(rep.worst_gt)},
                              {"coords", coords}}}});
    all_pass = all_pass && rep.pass;
    status(g, (rep.pass ? "pass " : "FAIL ") + boxeval::loss_name(rep.kind) +
                  "  max rel error " +
                  boxeval::format_full(rep.max_rel_error));
  }
  doc["pass"] = all_pass;
  write_text(g.out, doc.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- sim ----

struct SimArgs {
  std::string config;
  std::string curves = "curves.csv";
  std::string summary = "summary.json";
  std::string out_dir = ".";
};

boxeval::SimulationConfig parse_sim_config(const std::string& path) {
  boxeval::SimulationConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  const auto get = [&](const char* key, auto& slot) {
    if (doc.contains(key)) slot = doc.at(key).template get<std::decay_t<decltype(slot)>>();
  };
  if (doc.contains("losses")) {
    cfg.losses.clear();
    for (const auto& name : doc.at("losses")) {
      cfg.losses.push_back(boxeval::parse_loss(name.get<std::string>()));
    }
  }
  get("iterations", cfg.iterations);
  get("learning_rate", cfg.learning_rate);
  get("lr_grid", cfg.lr_grid);
  if (doc.contains("policy")) {
    cfg.policy = boxeval::parse_lr_policy(doc.at("policy").get<std::string>());
  }
  get("window", cfg.window);
  get("factor", cfg.factor);
  get("literal_stagnation_rule", cfg.literal_stagnation_rule);
  get("error_threshold", cfg.error_threshold);
  get("seed", cfg.seed);
  if (doc.contains("grid")) {
    const json& gr = doc.at("grid");
    const auto getg = [&](const char* key, auto& slot) {
      if (gr.contains(key)) slot = gr.at(key).template get<std::decay_t<decltype(slot)>>();
    };
    getg("target_aspect_ratios", cfg.grid.target_aspect_ratios);
    getg("target_areas", cfg.grid.target_areas);
    getg("anchor_aspect_ratios", cfg.grid.anchor_aspect_ratios);
    getg("anchor_scales", cfg.grid.anchor_scales);
    getg("offset_radii", cfg.grid.offset_radii);
    getg("angles", cfg.grid.angles);
  }
  return cfg;
}

int cmd_sim(const SimArgs& a, const GlobalOpts& g) {
  boxeval::SimulationConfig cfg = parse_sim_config(a.config);
  const boxeval::SimulationReport report = boxeval::run(cfg);

  namespace fs = std::filesystem;
  const fs::path dir(a.out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  const std::string curves_path = (dir / a.curves).string();
  const std::string summary_path = (dir / a.summary).string();

  std::ostringstream cs;
  boxeval::write_curves_csv(report, cs);
  write_text(curves_path, cs.str());

  json doc;
  doc["scenarios"] = report.scenario_count;
  doc["iterations"] = report.iterations;
  doc["policy"] = boxeval::lr_policy_name(report.policy);
  doc["error_threshold"] = report.error_threshold;
  doc["losses"] = json::array();
  for (const boxeval::LossCurve& c : report.curves) {
    json entry = {{"kind", boxeval::loss_name(c.kind)},
                  {"learning_rate", c.learning_rate},
                  {"final_mean_loss", c.mean_loss.back()},
                  {"final_mean_corner_error", c.mean_corner_error.back()},
                  {"final_mean_normalized_error",
                   c.mean_normalized_error.back()},
                  {"aborted_scenarios", c.aborted_scenarios}};
    if (c.iterations_to_threshold >= 0) {
      entry["iterations_to_threshold"] = c.iterations_to_threshold;
    } else {
      entry["iterations_to_threshold"] = nullptr;
    }
    doc["losses"].push_back(entry);
    status(g, boxeval::loss_name(c.kind) + "  lr " +
                  boxeval::format_full(c.learning_rate) + "  final error " +
                  boxeval::format_full(c.mean_corner_error.back()));
  }
  write_text(summary_path, doc.dump(2) + "\n");
  status(g, "wrote " + curves_path + " and " + summary_path);
  return 0;
}

// ------------------------------------------------------------- cluster ----

struct ClusterArgs {
  std::string annotations;
  std::string format = "csv";
  std::string method = "auto";
  std::string k_range = "2..8";
  std::size_t k = 3;
  bool k_given = false;
  std::string distance = "euclidean";
  double eps = 0.0;
  std::size_t min_pts = 4;
  double bandwidth = 0.0;
  bool normalize = false;
};

json scheme_json(const boxeval::ClusterScheme& s, bool with_assignment) {
  json centers = json::array();
  for (const auto& c : s.centers) centers.push_back({c[0], c[1]});
  json out = {{"method", s.method},
              {"k", s.k},
              {"centers", centers},
              {"anchor_sizes", s.anchor_sizes},
              {"aspect_ratios", s.aspect_ratios},
              {"sse", s.indices.sse},
              {"noise", s.noise_count}};
  out["silhouette"] =
      s.indices.silhouette ? json(*s.indices.silhouette) : json(nullptr);
  out["calinski_harabasz"] = s.indices.calinski_harabasz
                                 ? json(*s.indices.calinski_harabasz)
                                 : json(nullptr);
  if (with_assignment) out["assignment"] = s.assignment;
  return out;
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& s) {
  const auto pos = s.find("..");
  std::size_t a = 0, b = 0;
  try {
    if (pos == std::string::npos) {
      a = b = std::stoul(s);
    } else {
      a = std::stoul(s.substr(0, pos));
      b = std::stoul(s.substr(pos + 2));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad --k-range, expected a..b: " + s);
  }
  return {a, b};
}

int cmd_cluster(const ClusterArgs& a, const GlobalOpts& g) {
  const boxeval::AnnotationSet set = boxeval::load_annotations(
      a.annotations, boxeval::parse_annotation_format(a.format), a.normalize);

  boxeval::ClusterParams params;
  params.k = a.k;
  params.distance = a.distance == "one_minus_iou"
                        ? boxeval::SizeDistance::OneMinusIoU
                        : boxeval::SizeDistance::Euclidean;
  if (a.distance != "euclidean" && a.distance != "one_minus_iou") {
    throw std::invalid_argument("unknown distance: " + a.distance);
  }
  params.eps = a.eps;
  params.min_pts = a.min_pts;
  params.bandwidth = a.bandwidth;
  params.seed = g.seed;

  json doc;
  doc["source"] = set.source;
  doc["boxes"] = set.sizes.size();
  doc["dropped"] = set.dropped;
  doc["images"] = set.image_count;
  doc["normalized"] = set.normalized;
  doc["seed"] = g.seed;

  if (a.method == "auto") {
    boxeval::RecommendOptions opts;
    std::tie(opts.k_min, opts.k_max) = parse_k_range(a.k_range);
    opts.params = params;
    const boxeval::RecommendReport report =
        boxeval::recommend_report(set, opts);
    doc["candidates"] = json::array();
    for (const auto& s : report.ranked) {
      doc["candidates"].push_back(scheme_json(s, false));
    }
    doc["failures"] = json::array();
    for (const auto& f : report.failures) {
      doc["failures"].push_back({{"candidate", f.method},
                                 {"reason", f.reason}});
    }
    doc["recommended"] = json::array(
        {scheme_json(report.ranked[0], true), scheme_json(report.ranked[1], true)});
    status(g, "recommended k=" + std::to_string(report.ranked[0].k) + " (" +
                  report.ranked[0].method + ") and k=" +
                  std::to_string(report.ranked[1].k) + " (" +
                  report.ranked[1].method + ")");
  } else {
    const boxeval::ClusterMethod method =
        boxeval::parse_cluster_method(a.method);
    const boxeval::ClusterScheme scheme =
        boxeval::cluster(set, method, params);
    doc["scheme"] = scheme_json(scheme, true);
    status(g, a.method + " found k=" + std::to_string(scheme.k));
  }
  write_text(g.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounding-box overlap metrics, regression losses and anchor "
               "clustering toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed for seeded commands");
  app.add_option("--out", g.out, "output path (default: stdout)");
  app.add_flag("--quiet", g.quiet, "suppress progress messages");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate metrics and losses over a pair file");
  eval->fallthrough();
  eval->add_option("--pairs", eval_args.pairs, "pair CSV file")->required();
  eval->add_option("--metrics", eval_args.metrics,
                   "comma list of iou,giou,cdiou");
  eval->add_option("--losses", eval_args.losses,
                   "comma list of l1,l2,smooth_l1,iou_log,iou_linear,giou,"
                   "diou,ciou,cdiou");
  eval->add_option("--lambda", eval_args.lambda, "cdiou weight");
  eval->add_option("--base", eval_args.cdiou_base, "cdiou loss base");

  RankArgs rank_args;
  CLI::App* rank = app.add_subcommand(
      "rank", "order proposals sharing one ground truth");
  rank->fallthrough();
  rank->add_option("--pairs", rank_args.pairs, "pair CSV file")->required();
  rank->add_option("--metric", rank_args.metric, "iou, giou or cdiou");
  rank->add_option("--lambda", rank_args.lambda, "cdiou weight");

  GradArgs grad_args;
  CLI::App* grad = app.add_subcommand(
      "grad", "finite-difference check of every analytic gradient");
  grad->fallthrough();
  grad->add_option("--kinds", grad_args.kinds, "all or a comma list");
  grad->add_option("--n", grad_args.n, "pairs per kind");
  grad->add_option("--step", grad_args.h, "central-difference step");
  grad->add_option("--rel-tolerance", grad_args.rel_tolerance,
                   "relative error tolerance");

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "sim", "gradient-descent convergence benchmark");
  sim->fallthrough();
  sim->add_option("--config", sim_args.config, "JSON config file");
  sim->add_option("--out-dir", sim_args.out_dir, "output directory");
  sim->add_option("--curves", sim_args.curves, "curves CSV filename");
  sim->add_option("--summary", sim_args.summary, "summary JSON filename");

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand(
      "cluster", "cluster ground-truth sizes into anchor schemes");
  cluster->fallthrough();
  cluster->add_option("--annotations", cluster_args.annotations,
                      "annotation file")->required();
  cluster->add_option("--format", cluster_args.format, "coco_json or csv");
  cluster->add_option("--method", cluster_args.method,
                      "auto, kmeans, agglomerative, dbscan or meanshift");
  cluster->add_option("--k-range", cluster_args.k_range,
                      "k search range a..b for auto");
  cluster->add_option("--k", cluster_args.k, "cluster count for one method");
  cluster->add_option("--distance", cluster_args.distance,
                      "kmeans distance: euclidean or one_minus_iou");
  cluster->add_option("--eps", cluster_args.eps, "dbscan radius (0: auto)");
  cluster->add_option("--min-pts", cluster_args.min_pts, "dbscan core size");
  cluster->add_option("--bandwidth", cluster_args.bandwidth,
                      "meanshift bandwidth (0: auto)");
  cluster->add_flag("--normalize", cluster_args.normalize,
                    "divide coco boxes by their image size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_args, g);
    if (rank->parsed()) return cmd_rank(rank_args, g);
    if (grad->parsed()) return cmd_grad(grad_args, g);
    if (sim->parsed()) return cmd_sim(sim_args, g);
    if (cluster->parsed()) return cmd_cluster(cluster_args, g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
