#pragma once

#include <cstdint>

#include "dgm/eval.hpp"
#include "dgm/types.hpp"

namespace dgm {

/// Two-camera benchmark recipe. Each identity draws a latent vector; a
/// camera observes it through that camera's full-rank linear map plus bias,
/// with isotropic Gaussian noise per frame. Distractor identities appear in
/// exactly one camera; segment-split identities contribute two tracklets
/// per camera.
struct SynthConfig {
  Index num_identities = 50;
  Index latent_dim = 10;
  Index feature_dim = 20;
  Index frames_min = 8;
  Index frames_max = 12;
  double camera_noise = 0.12;  // per-coordinate frame noise sigma
  double camera_shift = 0.9;   // strength of the per-camera map and bias
  // Rank of each camera map's deviation from identity. Real camera
  // discrepancies are a few global photometric and viewpoint factors;
  // a concentrated deviation keeps them compensable by a learned metric.
  Index shift_rank = 3;
  // Global multiplier on all features. Tracklet distances scale with its
  // square; the default keeps assignment costs in the band where the mean
  // cost separates positive from negative pairs.
  double feature_scale = 0.3;
  double distractor_frac = 0.0;
  double segment_frac = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const;  // throws ConfigInvalid
};

struct Benchmark {
  CameraGraph camera_a;
  CameraGraph camera_b;
  TruthPairing truth;  // camera-A index -> camera-B index or kNoMatch
};

/// Deterministic benchmark generation; identical seeds give byte-identical
/// feature bundles. Features are quantized to f32 storage precision so the
/// on-disk bundle round-trips exactly.
Benchmark generate_benchmark(const SynthConfig& cfg);

}  // namespace dgm
