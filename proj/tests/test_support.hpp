#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "dgm/types.hpp"

namespace dgm::test {

using Rng = std::mt19937_64;

inline Matrix rows(std::initializer_list<std::initializer_list<double>> data) {
  const auto r = static_cast<Index>(data.size());
  const auto c = static_cast<Index>(data.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : data) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> data) {
  Vector v(static_cast<Index>(data.size()));
  Index i = 0;
  for (double x : data) v(i++) = x;
  return v;
}

inline Tracklet tracklet(std::initializer_list<std::initializer_list<double>> frames) {
  return Tracklet(rows(frames));
}

inline Matrix random_matrix(Rng& rng, Index r, Index c, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Matrix random_spd(Rng& rng, Index d, double ridge = 0.1) {
  const Matrix a = random_matrix(rng, d, d);
  return a * a.transpose() + ridge * Matrix::Identity(d, d);
}

inline Tracklet random_tracklet(Rng& rng, Index frames, Index dim) {
  return Tracklet(random_matrix(rng, frames, dim));
}

inline CameraGraph random_graph(Rng& rng, Index tracklets, Index dim,
                                Index max_frames = 4) {
  std::uniform_int_distribution<Index> frames(1, max_frames);
  std::vector<Tracklet> ts;
  ts.reserve(static_cast<std::size_t>(tracklets));
  for (Index i = 0; i < tracklets; ++i) {
    ts.push_back(random_tracklet(rng, frames(rng), dim));
  }
  return CameraGraph(std::move(ts));
}

}  // namespace dgm::test
