#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgm/driver.hpp"
#include "dgm/eval.hpp"
#include "dgm/types.hpp"

namespace dgm {

// Feature bundle, binary little-endian:
//   magic "DGMF", u32 version=1, u32 num_tracklets, u32 dim,
//   then per tracklet: u32 person_id (0xFFFFFFFF = unknown), u32 num_frames,
//   num_frames x dim f32 row-major.
CameraGraph read_bundle(const std::filesystem::path& path);
void write_bundle(const CameraGraph& graph, const std::filesystem::path& path);

// Metric file: magic "DGMM", u32 version=1, u32 dim, dim x dim f64 row-major.
Metric read_metric(const std::filesystem::path& path);
void write_metric(const Metric& metric, const std::filesystem::path& path);

/// Decoded labels CSV: one row per cost cell plus one row per dummy-assigned
/// tracklet (j = -1).
struct LabelFile {
  Matrix costs;
  Matrix soft;
  Assignment assignment;
  double dummy_cost;  // NaN when no row was dummy-assigned
};

void write_labels(const std::filesystem::path& path, const CostMatrix& costs,
                  const Assignment& assignment, const SoftLabelMatrix& labels,
                  double dummy_cost);
LabelFile read_labels(const std::filesystem::path& path);

// Truth pairing CSV with header "i,j"; j = -1 marks no correspondence.
void write_truth(const TruthPairing& truth, const std::filesystem::path& path);
TruthPairing read_truth(const std::filesystem::path& path);

std::string dummy_cost_mode_string(const DummyCostMode& mode);
DummyCostMode parse_dummy_cost_mode(const std::string& text);

nlohmann::json config_json(const DgmConfig& config);
nlohmann::json history_json(const std::vector<IterationRecord>& history);

/// Serializes a report with stable key order and trailing newline, so equal
/// inputs produce byte-identical files.
void write_report(const nlohmann::json& report,
                  const std::filesystem::path& path);

}  // namespace dgm
