#include "dgm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <utility>
#include <vector>

namespace dgm {

namespace {

constexpr std::uint32_t kBundleVersion = 1;
constexpr std::uint32_t kMetricVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in, const char* what) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) {
    raise(ErrorCode::TruncatedFile, std::string("unexpected EOF reading ") + what);
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

void check_magic(std::istream& in, const char expected[4],
                 const std::filesystem::path& path) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, expected, 4) != 0) {
    raise(ErrorCode::BadMagic,
          path.string() + ": expected magic " + std::string(expected, 4));
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_bundle(const CameraGraph& graph, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out.write("DGMF", 4);
  write_u32(out, kBundleVersion);
  write_u32(out, static_cast<std::uint32_t>(graph.size()));
  write_u32(out, static_cast<std::uint32_t>(graph.dim()));
  std::vector<float> row(static_cast<std::size_t>(graph.dim()));
  for (const Tracklet& t : graph.tracklets()) {
    write_u32(out, t.person_id().value_or(kUnknownPersonId));
    write_u32(out, static_cast<std::uint32_t>(t.num_frames()));
    for (Index f = 0; f < t.num_frames(); ++f) {
      for (Index c = 0; c < t.dim(); ++c) {
        row[static_cast<std::size_t>(c)] = static_cast<float>(t.frames()(f, c));
      }
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

CameraGraph read_bundle(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  check_magic(in, "DGMF", path);
  const std::uint32_t version = read_u32(in, "version");
  if (version != kBundleVersion) {
    raise(ErrorCode::VersionUnsupported,
          path.string() + ": bundle version " + std::to_string(version));
  }
  const std::uint32_t num_tracklets = read_u32(in, "num_tracklets");
  const std::uint32_t dim = read_u32(in, "dim");
  if (num_tracklets == 0 || dim == 0) {
    raise(ErrorCode::EmptyGraph, path.string() + ": empty bundle");
  }
  std::vector<Tracklet> tracklets;
  tracklets.reserve(num_tracklets);
  std::vector<float> row(dim);
  for (std::uint32_t t = 0; t < num_tracklets; ++t) {
    const std::uint32_t person_id = read_u32(in, "person_id");
    const std::uint32_t num_frames = read_u32(in, "num_frames");
    if (num_frames == 0) {
      raise(ErrorCode::TruncatedFile,
            path.string() + ": tracklet with zero frames");
    }
    Matrix frames(static_cast<Index>(num_frames), static_cast<Index>(dim));
    for (std::uint32_t f = 0; f < num_frames; ++f) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
      if (!in) {
        raise(ErrorCode::TruncatedFile,
              path.string() + ": frame data ends early in tracklet " +
                  std::to_string(t));
      }
      for (std::uint32_t c = 0; c < dim; ++c) {
        frames(static_cast<Index>(f), static_cast<Index>(c)) =
            static_cast<double>(row[c]);
      }
    }
    tracklets.emplace_back(std::move(frames),
                           person_id == kUnknownPersonId
                               ? std::nullopt
                               : std::optional<std::uint32_t>(person_id));
  }
  return CameraGraph(std::move(tracklets));
}

void write_metric(const Metric& metric, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out.write("DGMM", 4);
  write_u32(out, kMetricVersion);
  write_u32(out, static_cast<std::uint32_t>(metric.dim()));
  for (Index i = 0; i < metric.dim(); ++i) {
    for (Index j = 0; j < metric.dim(); ++j) {
      const double v = metric.matrix()(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

Metric read_metric(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  check_magic(in, "DGMM", path);
  const std::uint32_t version = read_u32(in, "version");
  if (version != kMetricVersion) {
    raise(ErrorCode::VersionUnsupported,
          path.string() + ": metric version " + std::to_string(version));
  }
  const std::uint32_t dim = read_u32(in, "dim");
  if (dim == 0) raise(ErrorCode::TruncatedFile, path.string() + ": dim 0");
  Matrix m(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      if (!in) {
        raise(ErrorCode::TruncatedFile,
              path.string() + ": metric data ends early");
      }
      m(static_cast<Index>(i), static_cast<Index>(j)) = v;
    }
  }
  return Metric(std::move(m));
}

void write_labels(const std::filesystem::path& path, const CostMatrix& costs,
                  const Assignment& assignment, const SoftLabelMatrix& labels,
                  double dummy_cost) {
  if (labels.rows() != costs.rows() || labels.cols() != costs.cols() ||
      assignment.rows() != costs.rows()) {
    raise(ErrorCode::DimensionMismatch, "labels/costs/assignment disagree");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path.string());
  out << "i,j,y,cost,soft_label\n";
  for (Index i = 0; i < costs.rows(); ++i) {
    for (Index j = 0; j < costs.cols(); ++j) {
      const int y = assignment.target(i) == j ? 1 : 0;
      out << i << ',' << j << ',' << y << ',' << format_double(costs(i, j))
          << ',' << format_double(labels(i, j)) << '\n';
    }
    if (assignment.is_dummy(i)) {
      out << i << ",-1,1," << format_double(dummy_cost) << ",0\n";
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

LabelFile read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "i,j,y,cost,soft_label") {
    raise(ErrorCode::BadMagic, path.string() + ": bad labels header");
  }
  struct Row {
    Index i, j;
    int y;
    double cost, soft;
  };
  std::vector<Row> rows;
  Index max_i = -1;
  Index max_j = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    long long li = 0;
    long long lj = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld,%d,%lf,%lf", &li, &lj, &r.y,
                    &r.cost, &r.soft) != 5) {
      raise(ErrorCode::TruncatedFile, path.string() + ": bad row: " + line);
    }
    r.i = static_cast<Index>(li);
    r.j = static_cast<Index>(lj);
    if (r.i < 0 || r.j < -1) {
      raise(ErrorCode::TruncatedFile, path.string() + ": bad indices: " + line);
    }
    max_i = std::max(max_i, r.i);
    max_j = std::max(max_j, r.j);
    rows.push_back(r);
  }
  if (max_i < 0 || max_j < 0) {
    raise(ErrorCode::TruncatedFile, path.string() + ": no label cells");
  }
  const Index m = max_i + 1;
  const Index n = max_j + 1;
  LabelFile file{Matrix::Constant(m, n, std::numeric_limits<double>::quiet_NaN()),
                 Matrix::Zero(m, n),
                 Assignment(std::vector<Index>(static_cast<std::size_t>(m),
                                               Assignment::kDummy),
                            n),
                 std::numeric_limits<double>::quiet_NaN()};
  std::vector<Index> targets(static_cast<std::size_t>(m), Assignment::kDummy);
  for (const Row& r : rows) {
    if (r.i >= m) continue;
    if (r.j == -1) {
      if (r.y != 1) {
        raise(ErrorCode::TruncatedFile,
              path.string() + ": dummy row must have y=1");
      }
      file.dummy_cost = r.cost;
      continue;
    }
    if (r.j >= n) continue;
    file.costs(r.i, r.j) = r.cost;
    file.soft(r.i, r.j) = r.soft;
    if (r.y == 1) targets[static_cast<std::size_t>(r.i)] = r.j;
  }
  if (file.costs.hasNaN()) {
    raise(ErrorCode::TruncatedFile,
          path.string() + ": label grid has missing cells");
  }
  file.assignment = Assignment(std::move(targets), n);
  return file;
}

void write_truth(const TruthPairing& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path.string());
  out << "i,j\n";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out << i << ',' << truth[i] << '\n';
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

TruthPairing read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "i,j") {
    raise(ErrorCode::BadMagic, path.string() + ": bad truth header");
  }
  TruthPairing truth;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long i = 0;
    long long j = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld", &i, &j) != 2) {
      raise(ErrorCode::TruncatedFile, path.string() + ": bad row: " + line);
    }
    if (i != static_cast<long long>(truth.size())) {
      raise(ErrorCode::TruncatedFile,
            path.string() + ": rows must be consecutive from 0");
    }
    truth.push_back(static_cast<Index>(j));
  }
  return truth;
}

std::string dummy_cost_mode_string(const DummyCostMode& mode) {
  switch (mode.kind) {
    case DummyCostMode::Kind::Mean:
      return "mean";
    case DummyCostMode::Kind::Fixed:
      return "fixed:" + format_double(mode.value);
    case DummyCostMode::Kind::Percentile:
      return "percentile:" + format_double(mode.value);
  }
  raise(ErrorCode::ConfigInvalid, "unknown dummy cost mode");
}

DummyCostMode parse_dummy_cost_mode(const std::string& text) {
  if (text == "mean") return DummyCostMode::mean();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    char* end = nullptr;
    const std::string value_text = text.substr(colon + 1);
    const double value = std::strtod(value_text.c_str(), &end);
    if (end != value_text.c_str() + value_text.size() || value_text.empty()) {
      raise(ErrorCode::ConfigInvalid, "bad dummy cost value: " + text);
    }
    if (kind == "fixed") return DummyCostMode::fixed(value);
    if (kind == "percentile") return DummyCostMode::percentile(value);
  }
  raise(ErrorCode::ConfigInvalid,
        "dummy cost mode must be mean, fixed:V, or percentile:P, got " + text);
}

nlohmann::json config_json(const DgmConfig& config) {
  return nlohmann::json{
      {"lambda", config.lambda},
      {"k", config.k},
      {"max_iter", config.max_iter},
      {"pca_dim", config.pca_dim},
      {"pool_window", config.pool_window},
      {"dummy_cost_mode", dummy_cost_mode_string(config.dummy_cost_mode)},
      {"rng_seed", config.rng_seed},
      {"apg_max_steps", config.apg_max_steps},
      {"apg_tol", config.apg_tol},
  };
}

nlohmann::json history_json(const std::vector<IterationRecord>& history) {
  nlohmann::json arr = nlohmann::json::array();
  for (const IterationRecord& rec : history) {
    arr.push_back({
        {"iter", rec.iter},
        {"G", rec.G},
        {"F", rec.F},
        {"accepted", rec.accepted},
        {"num_positive", rec.num_positive},
        {"num_dummy", rec.num_dummy},
    });
  }
  return arr;
}

void write_report(const nlohmann::json& report,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path.string());
  out << report.dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace dgm
