#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "dgm/driver.hpp"
#include "dgm/eval.hpp"
#include "dgm/io.hpp"
#include "dgm/preprocess.hpp"
#include "dgm/synth.hpp"
#include "dgm/types.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

dgm::CameraGraph pooled_graph(const dgm::CameraGraph& graph,
                              dgm::Index window) {
  if (window <= 1) return graph;
  std::vector<dgm::Tracklet> pooled;
  pooled.reserve(graph.tracklets().size());
  for (const dgm::Tracklet& t : graph.tracklets()) {
    pooled.push_back(dgm::max_pool(t, window));
  }
  return dgm::CameraGraph(std::move(pooled));
}

int run_synth(const dgm::SynthConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const dgm::Benchmark bench = dgm::generate_benchmark(cfg);
  dgm::write_bundle(bench.camera_a, out_dir / "camera_a.dgmf");
  dgm::write_bundle(bench.camera_b, out_dir / "camera_b.dgmf");
  dgm::write_truth(bench.truth, out_dir / "truth.csv");
  std::cout << "wrote " << (out_dir / "camera_a.dgmf").string() << " ("
            << bench.camera_a.size() << " tracklets), "
            << (out_dir / "camera_b.dgmf").string() << " ("
            << bench.camera_b.size() << " tracklets)\n";
  return kExitOk;
}

int run_estimate(const fs::path& camera_a, const fs::path& camera_b,
                 const dgm::DgmConfig& config, const fs::path& out_dir) {
  config.validate();
  fs::create_directories(out_dir);
  const dgm::CameraGraph a =
      pooled_graph(dgm::read_bundle(camera_a), config.pool_window);
  const dgm::CameraGraph b =
      pooled_graph(dgm::read_bundle(camera_b), config.pool_window);

  const dgm::DgmResult result = dgm::dgm_run(a, b, config);

  dgm::write_metric(result.metric, out_dir / "metric.dgmm");
  dgm::write_labels(out_dir / "labels.csv", result.final_costs,
                    result.assignment, result.labels, result.final_dummy_cost);
  nlohmann::json report{
      {"config", dgm::config_json(config)},
      {"history", dgm::history_json(result.history)},
  };
  dgm::write_report(report, out_dir / "report.json");

  const auto& last = result.history.back();
  std::cout << "finished after " << last.iter << " iterations: G=" << last.G
            << " F=" << last.F << " dummies=" << last.num_dummy << '\n';
  return kExitOk;
}

// Eval-style commands add their scores to an existing report when the
// target file already holds one, so a single report can accumulate the
// config echo, the history, and every eval score.
nlohmann::json load_report_or_empty(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return nlohmann::json::object();
  nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
  return parsed.is_object() ? parsed : nlohmann::json::object();
}

int run_eval(const fs::path& labels_path, const fs::path& truth_path,
             const fs::path& report_path) {
  const dgm::LabelFile labels = dgm::read_labels(labels_path);
  const dgm::TruthPairing truth = dgm::read_truth(truth_path);
  const dgm::PrfScores scores = dgm::label_prf(labels.assignment, truth);
  nlohmann::json report = load_report_or_empty(report_path);
  report["eval"]["precision"] = scores.precision;
  report["eval"]["recall"] = scores.recall;
  report["eval"]["f_score"] = scores.f_score;
  dgm::write_report(report, report_path);
  std::cout << "precision=" << scores.precision << " recall=" << scores.recall
            << " f_score=" << scores.f_score << '\n';
  return kExitOk;
}

int run_reid(const fs::path& metric_path, const fs::path& query_path,
             const fs::path& gallery_path, const std::string& mode_text,
             double alpha, const fs::path& report_path) {
  const dgm::Metric metric = dgm::read_metric(metric_path);
  const dgm::CameraGraph query = dgm::read_bundle(query_path);
  const dgm::CameraGraph gallery = dgm::read_bundle(gallery_path);

  dgm::SetDistanceMode mode = dgm::SetDistanceMode::Mean;
  if (mode_text == "mean") {
    mode = dgm::SetDistanceMode::Mean;
  } else if (mode_text == "min_regularized") {
    mode = dgm::SetDistanceMode::MinRegularized;
  } else {
    dgm::raise(dgm::ErrorCode::ConfigInvalid,
               "mode must be mean or min_regularized, got " + mode_text);
  }

  dgm::Matrix dist(query.size(), gallery.size());
  for (dgm::Index q = 0; q < query.size(); ++q) {
    for (dgm::Index g = 0; g < gallery.size(); ++g) {
      dist(q, g) = dgm::test_set_distance(metric, query.tracklet(q),
                                          gallery.tracklet(g), mode, alpha);
    }
  }

  std::vector<dgm::Index> truth_col;
  std::vector<std::vector<dgm::Index>> relevant;
  for (dgm::Index q = 0; q < query.size(); ++q) {
    const auto& id = query.tracklet(q).person_id();
    if (!id) {
      dgm::raise(dgm::ErrorCode::ConfigInvalid,
                 "query tracklet " + std::to_string(q) + " has no person id");
    }
    std::vector<dgm::Index> rel;
    for (dgm::Index g = 0; g < gallery.size(); ++g) {
      if (gallery.tracklet(g).person_id() == id) rel.push_back(g);
    }
    if (rel.empty()) {
      dgm::raise(dgm::ErrorCode::ConfigInvalid,
                 "query person " + std::to_string(*id) +
                     " is absent from the gallery");
    }
    truth_col.push_back(rel.front());
    relevant.push_back(std::move(rel));
  }

  const dgm::Vector curve = dgm::cmc(dist, truth_col);
  const double map = dgm::mean_ap(dist, relevant);
  nlohmann::json cmc_json = nlohmann::json::array();
  for (dgm::Index r = 0; r < curve.size(); ++r) cmc_json.push_back(curve(r));
  nlohmann::json report = load_report_or_empty(report_path);
  report["eval"]["cmc"] = cmc_json;
  report["eval"]["map"] = map;
  dgm::write_report(report, report_path);
  std::cout << "rank-1=" << curve(0) << " mAP=" << map << '\n';
  return kExitOk;
}

int run_pca(const std::vector<fs::path>& inputs,
            const std::vector<fs::path>& outputs, dgm::Index dim) {
  if (inputs.size() != outputs.size()) {
    dgm::raise(dgm::ErrorCode::ConfigInvalid,
               "need one --out per --in bundle");
  }
  std::vector<dgm::CameraGraph> graphs;
  graphs.reserve(inputs.size());
  dgm::Index total_frames = 0;
  for (const fs::path& p : inputs) {
    graphs.push_back(dgm::read_bundle(p));
    for (const dgm::Tracklet& t : graphs.back().tracklets()) {
      total_frames += t.num_frames();
    }
  }
  const dgm::Index d_raw = graphs.front().dim();
  dgm::Matrix stacked(total_frames, d_raw);
  dgm::Index at = 0;
  for (const dgm::CameraGraph& g : graphs) {
    if (g.dim() != d_raw) {
      dgm::raise(dgm::ErrorCode::DimensionMismatch,
                 "input bundles have different dimensions");
    }
    for (const dgm::Tracklet& t : g.tracklets()) {
      stacked.middleRows(at, t.num_frames()) = t.frames();
      at += t.num_frames();
    }
  }

  const dgm::PcaModel model = dgm::pca_fit(stacked, dim);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::vector<dgm::Tracklet> projected;
    projected.reserve(graphs[i].tracklets().size());
    for (const dgm::Tracklet& t : graphs[i].tracklets()) {
      projected.push_back(dgm::pca_apply(model, t));
    }
    dgm::write_bundle(dgm::CameraGraph(std::move(projected)), outputs[i]);
    std::cout << "wrote " << outputs[i].string() << " (dim " << dim << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgm — cross-camera tracklet label estimation"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark");
  dgm::SynthConfig synth_cfg;
  std::string synth_out;
  synth->add_option("--identities", synth_cfg.num_identities,
                    "shared identities across the cameras");
  synth->add_option("--dim", synth_cfg.feature_dim, "feature dimension");
  synth->add_option("--latent", synth_cfg.latent_dim, "latent dimension");
  synth->add_option("--noise", synth_cfg.camera_noise, "frame noise sigma");
  synth->add_option("--camera-shift", synth_cfg.camera_shift,
                    "camera transform strength");
  synth->add_option("--distractors", synth_cfg.distractor_frac,
                    "distractor fraction per camera");
  synth->add_option("--segments", synth_cfg.segment_frac,
                    "fraction of identities split into two tracklets");
  synth->add_option("--frames-min", synth_cfg.frames_min, "min frames");
  synth->add_option("--frames-max", synth_cfg.frames_max, "max frames");
  synth->add_option("--seed", synth_cfg.rng_seed, "rng seed");
  synth->add_option("--out", synth_out, "output directory")->required();

  // estimate
  auto* estimate =
      app.add_subcommand("estimate", "run the label estimation pipeline");
  std::string est_a, est_b, est_out, est_dummy = "mean";
  dgm::DgmConfig est_cfg;
  estimate->add_option("--camera-a", est_a, "camera A bundle")->required();
  estimate->add_option("--camera-b", est_b, "camera B bundle")->required();
  estimate->add_option("--lambda", est_cfg.lambda, "neighborhood weight");
  estimate->add_option("--k", est_cfg.k, "neighborhood size");
  estimate->add_option("--max-iter", est_cfg.max_iter, "iteration cap");
  estimate->add_option("--dummy-cost", est_dummy,
                       "mean, fixed:V, or percentile:P");
  estimate->add_option("--pool-window", est_cfg.pool_window,
                       "max-pooling window applied to input frames");
  estimate->add_option("--apg-steps", est_cfg.apg_max_steps,
                       "inner optimizer step cap");
  estimate->add_option("--apg-tol", est_cfg.apg_tol,
                       "inner optimizer loss tolerance");
  estimate->add_option("--seed", est_cfg.rng_seed, "rng seed (echoed)");
  estimate->add_option("--out", est_out, "output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "score estimated labels");
  std::string eval_labels, eval_truth, eval_report;
  eval->add_option("--labels", eval_labels, "labels CSV")->required();
  eval->add_option("--truth", eval_truth, "truth CSV")->required();
  eval->add_option("--report", eval_report, "report JSON path")->required();

  // reid
  auto* reid = app.add_subcommand("reid", "retrieval evaluation");
  std::string reid_metric, reid_query, reid_gallery, reid_report;
  std::string reid_mode = "mean";
  double reid_alpha = 0.5;
  reid->add_option("--metric", reid_metric, "metric file")->required();
  reid->add_option("--query", reid_query, "query bundle")->required();
  reid->add_option("--gallery", reid_gallery, "gallery bundle")->required();
  reid->add_option("--mode", reid_mode, "mean or min_regularized");
  reid->add_option("--alpha", reid_alpha, "min_regularized weight");
  reid->add_option("--report", reid_report, "report JSON path")->required();

  // pca
  auto* pca = app.add_subcommand("pca", "fit and apply a PCA reduction");
  std::vector<std::string> pca_in, pca_out;
  dgm::Index pca_dim = 600;
  pca->add_option("--in", pca_in, "input bundle (repeatable; basis is fit on all)")
      ->required();
  pca->add_option("--out", pca_out, "output bundle (one per --in)")->required();
  pca->add_option("--dim", pca_dim, "target dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (synth->parsed()) return run_synth(synth_cfg, synth_out);
    if (estimate->parsed()) {
      est_cfg.dummy_cost_mode = dgm::parse_dummy_cost_mode(est_dummy);
      return run_estimate(est_a, est_b, est_cfg, est_out);
    }
    if (eval->parsed()) return run_eval(eval_labels, eval_truth, eval_report);
    if (reid->parsed()) {
      return run_reid(reid_metric, reid_query, reid_gallery, reid_mode,
                      reid_alpha, reid_report);
    }
    if (pca->parsed()) {
      std::vector<fs::path> ins(pca_in.begin(), pca_in.end());
      std::vector<fs::path> outs(pca_out.begin(), pca_out.end());
      return run_pca(ins, outs, pca_dim);
    }
  } catch (const dgm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
