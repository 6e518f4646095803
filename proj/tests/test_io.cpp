#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dgm/io.hpp"
#include "dgm/reweight.hpp"
#include "dgm/synth.hpp"
#include "test_support.hpp"

using namespace dgm;
namespace ts = dgm::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "dgm_io_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("bundle round-trip is exact") {
  SynthConfig cfg;
  cfg.num_identities = 8;
  cfg.latent_dim = 3;
  cfg.feature_dim = 6;
  cfg.frames_min = 2;
  cfg.frames_max = 5;
  cfg.distractor_frac = 0.25;
  cfg.rng_seed = 42;
  const Benchmark bench = generate_benchmark(cfg);

  const fs::path path = scratch_dir() / "roundtrip.dgmf";
  write_bundle(bench.camera_a, path);
  const CameraGraph loaded = read_bundle(path);

  REQUIRE(loaded.size() == bench.camera_a.size());
  CHECK(loaded.dim() == bench.camera_a.dim());
  for (Index i = 0; i < loaded.size(); ++i) {
    CHECK(loaded.tracklet(i).frames() ==
          bench.camera_a.tracklet(i).frames());
    CHECK(loaded.tracklet(i).person_id() ==
          bench.camera_a.tracklet(i).person_id());
  }

  // Writing the loaded graph again reproduces the file byte for byte.
  const fs::path again = scratch_dir() / "roundtrip2.dgmf";
  write_bundle(loaded, again);
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("unknown person ids survive the round-trip") {
  std::vector<Tracklet> list;
  list.emplace_back(Matrix::Constant(2, 3, 1.5), std::nullopt);
  list.emplace_back(Matrix::Constant(1, 3, -2.0), 17u);
  const fs::path path = scratch_dir() / "ids.dgmf";
  write_bundle(CameraGraph(std::move(list)), path);
  const CameraGraph loaded = read_bundle(path);
  CHECK_FALSE(loaded.tracklet(0).person_id().has_value());
  CHECK(loaded.tracklet(1).person_id() == 17u);
}

TEST_CASE("bundle format errors") {
  const fs::path dir = scratch_dir();
  const fs::path good_path = dir / "good.dgmf";
  std::vector<Tracklet> list;
  for (int i = 0; i < 4; ++i) {
    list.emplace_back(Matrix::Constant(2, 3, static_cast<double>(i)));
  }
  write_bundle(CameraGraph(std::move(list)), good_path);
  const std::string good = slurp(good_path);

  // Wrong magic.
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  spit(dir / "bad_magic.dgmf", bad_magic);
  CHECK_THROWS_WITH_AS(static_cast<void>(read_bundle(dir / "bad_magic.dgmf")),
                       doctest::Contains("magic"), Error);

  // Unsupported version.
  std::string bad_version = good;
  bad_version[4] = 9;
  spit(dir / "bad_version.dgmf", bad_version);
  CHECK_THROWS_WITH_AS(
      static_cast<void>(read_bundle(dir / "bad_version.dgmf")),
      doctest::Contains("version"), Error);

  // Header promises five tracklets but the data holds four.
  std::string five = good;
  five[8] = 5;
  spit(dir / "five.dgmf", five);
  CHECK_THROWS_AS(static_cast<void>(read_bundle(dir / "five.dgmf")), Error);

  // Truncated frame payload.
  spit(dir / "cut.dgmf", good.substr(0, good.size() - 7));
  CHECK_THROWS_WITH_AS(static_cast<void>(read_bundle(dir / "cut.dgmf")),
                       doctest::Contains("early"), Error);

  CHECK_THROWS_AS(static_cast<void>(read_bundle(dir / "does_not_exist.dgmf")),
                  Error);
}

TEST_CASE("metric round-trip is bit-exact") {
  ts::Rng rng(71);
  const Metric m(ts::random_spd(rng, 5));
  const fs::path path = scratch_dir() / "metric.dgmm";
  write_metric(m, path);
  const Metric loaded = read_metric(path);
  CHECK((loaded.matrix() - m.matrix()).cwiseAbs().maxCoeff() == 0.0);

  std::string bytes = slurp(path);
  bytes[1] = 'X';
  spit(scratch_dir() / "metric_bad.dgmm", bytes);
  CHECK_THROWS_AS(static_cast<void>(read_metric(scratch_dir() / "metric_bad.dgmm")),
                  Error);
}

TEST_CASE("labels file carries the 2x2 fixture exactly") {
  const CostMatrix costs(ts::rows({{0.1, 0.3}, {6.0, 5.0}}));
  const Assignment y({0, 1}, 2);
  const SoftLabelMatrix labels = reweight_labels(costs, y);

  const fs::path path = scratch_dir() / "labels.csv";
  write_labels(path, costs, y, labels, costs.mean_cost());

  const std::string text = slurp(path);
  CHECK(text.find("i,j,y,cost,soft_label\n") == 0);
  // Four cell rows, no dummy rows.
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.find("0,0,1,") != std::string::npos);
  CHECK(text.find("0,1,0,") != std::string::npos);

  const LabelFile file = read_labels(path);
  CHECK(file.costs == costs.values());
  CHECK(file.soft == labels.labels());
  CHECK(file.assignment == y);
  CHECK(std::isnan(file.dummy_cost));
}

TEST_CASE("labels round-trip with dummy rows") {
  const CostMatrix costs(ts::rows({{0.2, 0.4}, {0.6, 0.8}, {1.0, 1.2}}));
  const Assignment y({1, Assignment::kDummy, 0}, 2);
  const SoftLabelMatrix labels = soft_label_partition(costs, y);
  const fs::path path = scratch_dir() / "labels_dummy.csv";
  write_labels(path, costs, y, labels, 0.77);
  const LabelFile file = read_labels(path);
  CHECK(file.assignment == y);
  CHECK(file.dummy_cost == 0.77);
  CHECK(file.costs == costs.values());
  CHECK(file.soft == labels.labels());

  CHECK_THROWS_AS(static_cast<void>(read_labels(scratch_dir() / "missing.csv")),
                  Error);
}

TEST_CASE("truth round-trip") {
  const TruthPairing truth{2, kNoMatch, 0, 5};
  const fs::path path = scratch_dir() / "truth.csv";
  write_truth(truth, path);
  CHECK(read_truth(path) == truth);

  spit(scratch_dir() / "truth_bad.csv", "x,y\n0,1\n");
  CHECK_THROWS_AS(static_cast<void>(read_truth(scratch_dir() / "truth_bad.csv")),
                  Error);
}

TEST_CASE("dummy cost mode strings round-trip") {
  for (const DummyCostMode& mode :
       {DummyCostMode::mean(), DummyCostMode::fixed(2.5),
        DummyCostMode::percentile(75.0)}) {
    CHECK(parse_dummy_cost_mode(dummy_cost_mode_string(mode)) == mode);
  }
  CHECK_THROWS_AS(static_cast<void>(parse_dummy_cost_mode("median")), Error);
  CHECK_THROWS_AS(static_cast<void>(parse_dummy_cost_mode("fixed:abc")), Error);
}

TEST_CASE("report serialization is deterministic") {
  DgmConfig config;
  config.rng_seed = 123;
  std::vector<IterationRecord> history(2);
  history[0].iter = 0;
  history[0].G = 1.5;
  history[0].F = 0.25;
  history[1].iter = 1;
  history[1].G = 1.25;
  history[1].F = 0.125;
  history[1].accepted = false;
  history[1].num_positive = 7;
  history[1].num_dummy = 2;

  nlohmann::json report{{"config", config_json(config)},
                        {"history", history_json(history)}};
  const fs::path p1 = scratch_dir() / "report1.json";
  const fs::path p2 = scratch_dir() / "report2.json";
  write_report(report, p1);
  write_report(report, p2);
  CHECK(slurp(p1) == slurp(p2));

  const nlohmann::json parsed = nlohmann::json::parse(slurp(p1));
  CHECK(parsed["config"]["rng_seed"] == 123);
  CHECK(parsed["history"][1]["accepted"] == false);
  CHECK(parsed["history"][1]["num_positive"] == 7);
  CHECK(parsed["history"][1]["G"] == 1.25);
}
