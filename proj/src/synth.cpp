#include "dgm/synth.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace dgm {

namespace {

using Rng = std::mt19937_64;

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Per-camera observation model: full-rank linear map plus bias.
struct CameraModel {
  Matrix transform;  // d x d
  Vector bias;       // d
};

CameraModel draw_camera_model(Rng& rng, Index d, double shift, Index rank) {
  // Deviation from identity is a rank-`rank` factor product, normalized so
  // the expected perturbation magnitude matches the full-rank case. The
  // resulting transform itself stays full rank.
  const double scale =
      shift / std::sqrt(static_cast<double>(d) * static_cast<double>(rank));
  for (int attempt = 0; attempt < 100; ++attempt) {
    CameraModel model;
    model.transform = Matrix::Identity(d, d) +
                      scale * (gaussian_matrix(rng, d, rank) *
                               gaussian_matrix(rng, rank, d));
    model.bias = (shift / std::sqrt(static_cast<double>(d))) *
                 gaussian_matrix(rng, d, 1);
    Eigen::JacobiSVD<Matrix> svd(model.transform);
    if (svd.singularValues().minCoeff() > 1e-10) return model;
  }
  raise(ErrorCode::ConfigInvalid,
        "could not draw a full-rank camera transform");
}

double quantize(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

void SynthConfig::validate() const {
  if (num_identities < 2) {
    raise(ErrorCode::ConfigInvalid, "need at least 2 identities");
  }
  if (latent_dim < 1 || feature_dim < latent_dim) {
    raise(ErrorCode::ConfigInvalid,
          "require 1 <= latent_dim <= feature_dim");
  }
  if (frames_min < 1 || frames_max < frames_min) {
    raise(ErrorCode::ConfigInvalid, "require 1 <= frames_min <= frames_max");
  }
  if (!(camera_noise >= 0.0) || !(camera_shift >= 0.0)) {
    raise(ErrorCode::ConfigInvalid, "noise and shift must be >= 0");
  }
  if (!(feature_scale > 0.0)) {
    raise(ErrorCode::ConfigInvalid, "feature_scale must be positive");
  }
  if (shift_rank < 1 || shift_rank > feature_dim) {
    raise(ErrorCode::ConfigInvalid,
          "require 1 <= shift_rank <= feature_dim");
  }
  if (distractor_frac < 0.0 || distractor_frac > 1.0 || segment_frac < 0.0 ||
      segment_frac > 1.0) {
    raise(ErrorCode::ConfigInvalid, "fractions must lie in [0, 1]");
  }
  if (segment_frac > 0.0 && frames_min < 2) {
    raise(ErrorCode::ConfigInvalid,
          "segment splitting needs frames_min >= 2");
  }
}

Benchmark generate_benchmark(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  const Index d = cfg.feature_dim;
  const Index n_shared = cfg.num_identities;
  const Index n_distract = static_cast<Index>(
      std::llround(cfg.distractor_frac * static_cast<double>(n_shared)));
  const Index n_segment = static_cast<Index>(
      std::llround(cfg.segment_frac * static_cast<double>(n_shared)));

  const CameraModel cam_a =
      draw_camera_model(rng, d, cfg.camera_shift, cfg.shift_rank);
  const CameraModel cam_b =
      draw_camera_model(rng, d, cfg.camera_shift, cfg.shift_rank);

  // Latents: shared identities first, then per-camera distractors, drawn at
  // unit expected norm so representative distances stay O(1) — the regime
  // where the cost mean splits positives from negatives. The latent is
  // zero-padded into feature space before the camera map applies.
  const Matrix latents =
      gaussian_matrix(rng, n_shared + 2 * n_distract, cfg.latent_dim) /
      std::sqrt(static_cast<double>(cfg.latent_dim));
  auto embedded = [&](Index identity) {
    Vector x = Vector::Zero(d);
    x.head(cfg.latent_dim) = latents.row(identity).transpose();
    return x;
  };

  // Which shared identities get split into two tracklets per camera.
  std::vector<Index> ids(static_cast<std::size_t>(n_shared));
  std::iota(ids.begin(), ids.end(), Index{0});
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<bool> split(static_cast<std::size_t>(n_shared), false);
  for (Index s = 0; s < n_segment; ++s) {
    split[static_cast<std::size_t>(ids[static_cast<std::size_t>(s)])] = true;
  }

  std::uniform_int_distribution<Index> frame_count(cfg.frames_min,
                                                   cfg.frames_max);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Entry {
    Index identity = 0;
    Index half = 0;  // 0 = whole tracklet or first half, 1 = second half
    Tracklet tracklet;
  };

  auto observe = [&](const CameraModel& cam, Index identity, Index frames) {
    const Vector center = cam.transform * embedded(identity) + cam.bias;
    Matrix out(frames, d);
    for (Index f = 0; f < frames; ++f) {
      for (Index c = 0; c < d; ++c) {
        out(f, c) = quantize(cfg.feature_scale *
                             (center(c) + cfg.camera_noise * normal(rng)));
      }
    }
    return out;
  };

  auto build_camera = [&](const CameraModel& cam, Index distract_base) {
    std::vector<Entry> entries;
    for (Index id = 0; id < n_shared; ++id) {
      const Index frames = frame_count(rng);
      Matrix all = observe(cam, id, frames);
      const auto tag = static_cast<std::uint32_t>(id);
      if (split[static_cast<std::size_t>(id)]) {
        const Index first = (frames + 1) / 2;
        entries.push_back(
            {id, 0, Tracklet(all.topRows(first), tag)});
        entries.push_back(
            {id, 1, Tracklet(all.bottomRows(frames - first), tag)});
      } else {
        entries.push_back({id, 0, Tracklet(std::move(all), tag)});
      }
    }
    for (Index dix = 0; dix < n_distract; ++dix) {
      const Index identity = distract_base + dix;
      const Index frames = frame_count(rng);
      entries.push_back({identity, 0,
                         Tracklet(observe(cam, identity, frames),
                                  static_cast<std::uint32_t>(identity))});
    }
    std::shuffle(entries.begin(), entries.end(), rng);
    return entries;
  };

  const std::vector<Entry> entries_a = build_camera(cam_a, n_shared);
  const std::vector<Entry> entries_b =
      build_camera(cam_b, n_shared + n_distract);

  // Map (identity, half) to camera-B position for the truth pairing.
  std::vector<std::array<Index, 2>> b_position(
      static_cast<std::size_t>(n_shared), {kNoMatch, kNoMatch});
  for (std::size_t pos = 0; pos < entries_b.size(); ++pos) {
    const Entry& e = entries_b[pos];
    if (e.identity < n_shared) {
      b_position[static_cast<std::size_t>(e.identity)]
                [static_cast<std::size_t>(e.half)] = static_cast<Index>(pos);
    }
  }

  TruthPairing truth(entries_a.size(), kNoMatch);
  std::vector<Tracklet> tracklets_a;
  tracklets_a.reserve(entries_a.size());
  for (std::size_t pos = 0; pos < entries_a.size(); ++pos) {
    const Entry& e = entries_a[pos];
    if (e.identity < n_shared) {
      truth[pos] = b_position[static_cast<std::size_t>(e.identity)]
                             [static_cast<std::size_t>(e.half)];
    }
    tracklets_a.push_back(e.tracklet);
  }
  std::vector<Tracklet> tracklets_b;
  tracklets_b.reserve(entries_b.size());
  for (const Entry& e : entries_b) tracklets_b.push_back(e.tracklet);

  return Benchmark{CameraGraph(std::move(tracklets_a)),
                   CameraGraph(std::move(tracklets_b)), std::move(truth)};
}

}  // namespace dgm
