// Copyright 2026 The ftmesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file clements.hpp
 * Two-mode beam splitters and the rectangular (Clements) mesh decomposition.
 *
 * A mesh on n channels (n even) is the ordered product
 *
 *     U = D · E_1 · O_1 · E_2 · O_2 · ... · E_{n/2} · O_{n/2}
 *
 * where O_i is an "odd" layer of n/2 splitters on channel pairs
 * (0,1), (2,3), ..., and E_i an "even" layer of n/2 − 1 splitters on
 * (1,2), (3,4), .... The rightmost factor acts first on a column vector.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ftmesh/matcore.hpp"

namespace ftmesh {

class NonUnitaryError : public std::domain_error {
 public:
  NonUnitaryError(const std::string& what, double defect)
      : std::domain_error(what), defect_(defect) {}
  /** Max-norm of U†U − I of the offending input. */
  double defect() const { return defect_; }

 private:
  double defect_;
};

/** T(θ, φ) acting on channels (top_channel, top_channel + 1). */
struct BeamSplitterParams {
  double theta = 0.0;
  double phi = 0.0;
  std::size_t top_channel = 0;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/** [[e^{iφ}cosθ, −sinθ], [e^{iφ}sinθ, cosθ]] */
inline Matrix2 beamsplitter_block(double theta, double phi) {
  const Complex e = std::polar(1.0, phi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {{{e * c, Complex(-s)}, {e * s, Complex(c)}}};
}

/** Embeds a 2×2 block on channels (a, b) of an n×n identity. */
inline ComplexMatrix embed_two_mode(std::size_t n, std::size_t a, std::size_t b, const Matrix2& block) {
  if (a >= n || b >= n || a == b) throw std::out_of_range("embed_two_mode: bad channel pair");
  ComplexMatrix m = ComplexMatrix::identity(n);
  m(a, a) = block[0][0];
  m(a, b) = block[0][1];
  m(b, a) = block[1][0];
  m(b, b) = block[1][1];
  return m;
}

inline ComplexMatrix beamsplitter_matrix(std::size_t n, const BeamSplitterParams& p) {
  if (n < 2) throw std::invalid_argument("beamsplitter_matrix: n must be >= 2");
  if (p.top_channel + 1 >= n) throw std::out_of_range("beamsplitter_matrix: channel index out of range");
  return embed_two_mode(n, p.top_channel, p.top_channel + 1, beamsplitter_block(p.theta, p.phi));
}

/**
 * Phase-mask factorization of a single splitter through 50-50 splitters X:
 *
 *     T(θ, φ) = diag(left) · X · diag(inner) · X · diag(outer)
 *
 * with left = diag(1, −i), inner = diag(e^{2iθ}, 1) and
 * outer = diag(e^{i(φ−θ)}, i·e^{−iθ}).
 */
struct BeamSplitterFactors {
  PhaseMask left;
  PhaseMask inner;
  PhaseMask outer;
};

inline BeamSplitterFactors bs_factorization(double theta, double phi) {
  return {PhaseMask({0.0, -kPi / 2}),
          PhaseMask({2.0 * theta, 0.0}),
          PhaseMask({phi - theta, kPi / 2 - theta})};
}

inline ComplexMatrix evaluate_bs_factors(const BeamSplitterFactors& f) {
  const ComplexMatrix x = block_x_matrix(2);
  return ComplexMatrix::diagonal(f.left) * x * ComplexMatrix::diagonal(f.inner) * x *
         ComplexMatrix::diagonal(f.outer);
}

// ---------------------------------------------------------------------------
// Mesh

enum class LayerKind { Even, Odd };

struct ClementsMesh {
  std::size_t n = 0;
  /** n layers, left to right as in the product above: E_1, O_1, E_2, O_2, ... */
  std::vector<std::vector<BeamSplitterParams>> layers;
  PhaseMask final_diagonal;

  static LayerKind kind_of(std::size_t layer_index) {
    return layer_index % 2 == 0 ? LayerKind::Even : LayerKind::Odd;
  }

  std::size_t splitter_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers) count += layer.size();
    return count;
  }

  /** Real parameters carried by the mesh: two per splitter plus the diagonal. */
  std::size_t parameter_count() const { return 2 * splitter_count() + final_diagonal.size(); }

  /** Throws std::invalid_argument unless the layer structure matches n. */
  void validate() const {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("ClementsMesh: n must be even and >= 2");
    if (layers.size() != n) throw std::invalid_argument("ClementsMesh: expected n layers");
    if (final_diagonal.size() != n) throw std::invalid_argument("ClementsMesh: diagonal length must be n");
    for (std::size_t l = 0; l < n; ++l) {
      const bool even = kind_of(l) == LayerKind::Even;
      const std::size_t expected = even ? n / 2 - 1 : n / 2;
      if (layers[l].size() != expected) {
        throw std::invalid_argument("ClementsMesh: layer " + std::to_string(l) + " has wrong splitter count");
      }
      for (std::size_t j = 0; j < expected; ++j) {
        const std::size_t top = even ? 2 * j + 1 : 2 * j;
        if (layers[l][j].top_channel != top) {
          throw std::invalid_argument("ClementsMesh: layer " + std::to_string(l) + " has misplaced splitter");
        }
      }
    }
  }

  /** Mesh of identity splitters and a zero-phase diagonal. */
  static ClementsMesh identity(std::size_t n) {
    ClementsMesh mesh;
    mesh.n = n;
    mesh.final_diagonal = PhaseMask(n);
    for (std::size_t l = 0; l < n; ++l) {
      const bool even = kind_of(l) == LayerKind::Even;
      std::vector<BeamSplitterParams> layer;
      for (std::size_t j = 0; j < (even ? n / 2 - 1 : n / 2); ++j) {
        layer.push_back({0.0, 0.0, even ? 2 * j + 1 : 2 * j});
      }
      mesh.layers.push_back(std::move(layer));
    }
    return mesh;
  }
};

/** Product of the splitters of one layer. */
inline ComplexMatrix layer_matrix(std::size_t n, const std::vector<BeamSplitterParams>& layer) {
  ComplexMatrix m = ComplexMatrix::identity(n);
  for (const auto& p : layer) m = m * beamsplitter_matrix(n, p);
  return m;
}

inline ComplexMatrix reconstruct_mesh(const ClementsMesh& mesh) {
  mesh.validate();
  ComplexMatrix m = ComplexMatrix::diagonal(mesh.final_diagonal);
  for (const auto& layer : mesh.layers) m = m * layer_matrix(mesh.n, layer);
  return m;
}

namespace detail {

inline constexpr double kPivotEpsilon = 1e-14;

// Right-multiplied rotations act on columns (c, c+1) of u; left-multiplied on rows.
inline void apply_right(ComplexMatrix& u, std::size_t c, const Matrix2& b) {
  for (std::size_t r = 0; r < u.rows(); ++r) {
    const Complex x = u(r, c);
    const Complex y = u(r, c + 1);
    u(r, c) = x * b[0][0] + y * b[1][0];
    u(r, c + 1) = x * b[0][1] + y * b[1][1];
  }
}

inline void apply_left(ComplexMatrix& u, std::size_t r, const Matrix2& b) {
  for (std::size_t c = 0; c < u.cols(); ++c) {
    const Complex x = u(r, c);
    const Complex y = u(r + 1, c);
    u(r, c) = b[0][0] * x + b[0][1] * y;
    u(r + 1, c) = b[1][0] * x + b[1][1] * y;
  }
}

inline Matrix2 dagger2(const Matrix2& m) {
  return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

/**
 * Splits a 2×2 unitary v as diag(a, b) · T(θ, φ).
 */
struct LeftDiagSplit {
  Complex a;
  Complex b;
  double theta;
  double phi;
};

inline LeftDiagSplit split_left_diagonal(const Matrix2& v) {
  const double c = std::abs(v[1][1]);
  const double s = std::abs(v[0][1]);
  LeftDiagSplit out{};
  out.theta = std::atan2(s, c);
  if (c < kPivotEpsilon) {
    // T(π/2, 0) = [[0, −1], [1, 0]]
    out.a = -v[0][1];
    out.b = v[1][0];
    out.phi = 0.0;
  } else if (s < kPivotEpsilon) {
    out.a = v[0][0];
    out.b = v[1][1];
    out.phi = 0.0;
  } else {
    out.a = -v[0][1] / s;
    out.b = v[1][1] / c;
    out.phi = std::arg(v[0][0] / (out.a * c));
  }
  return out;
}

struct PlacedSplitter {
  std::size_t top;
  double theta;
  double phi;
};

}  // namespace detail

/**
 * Rectangular mesh decomposition by alternating nulling of the
 * off-diagonal elements along anti-diagonals: even-numbered diagonals are
 * nulled by T⁻¹ from the right (acting on columns), odd-numbered ones by
 * T from the left (acting on rows). The left rotations are then commuted
 * through the residual diagonal, T⁻¹·D = D'·T', and every splitter is
 * placed in its layer.
 */
inline ClementsMesh decompose_clements(const ComplexMatrix& u, const Tolerance& tol = {}) {
  tol.validate();
  if (!u.is_square()) throw ShapeError("decompose_clements: matrix is not square");
  const std::size_t n = u.rows();
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("decompose_clements: dimension must be even and >= 2");
  }
  const double defect = unitarity_defect(u);
  if (!(defect <= tol.absolute)) {
    throw NonUnitaryError("decompose_clements: input is not unitary (max |U†U − I| = " +
                              std::to_string(defect) + ")",
                          defect);
  }

  using detail::kPivotEpsilon;
  ComplexMatrix w = u;
  std::vector<detail::PlacedSplitter> from_left;
  std::vector<detail::PlacedSplitter> from_right;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (std::size_t j = 0; j <= i; ++j) {
        const std::size_t r = n - 1 - j;
        const std::size_t c = i - j;
        const Complex x = w(r, c);
        const Complex y = w(r, c + 1);
        // x·e^{−iφ}·cosθ = y·sinθ
        const double theta = std::atan2(std::abs(x), std::abs(y));
        const double phi = (std::abs(x) < kPivotEpsilon || std::abs(y) < kPivotEpsilon)
                               ? 0.0
                               : std::arg(x) - std::arg(y);
        detail::apply_right(w, c, detail::dagger2(beamsplitter_block(theta, phi)));
        w(r, c) = 0.0;
        from_right.push_back({c, theta, phi});
      }
    } else {
      for (std::size_t j = 1; j <= i + 1; ++j) {
        const std::size_t r = n + j - i - 2;
        const std::size_t c = j - 1;
        const Complex x = w(r - 1, c);
        const Complex y = w(r, c);
        // e^{iφ}·sinθ·x = −cosθ·y
        const double theta = std::atan2(std::abs(y), std::abs(x));
        const double phi = (std::abs(x) < kPivotEpsilon || std::abs(y) < kPivotEpsilon)
                               ? 0.0
                               : kPi + std::arg(y) - std::arg(x);
        detail::apply_left(w, r - 1, beamsplitter_block(theta, phi));
        w(r, c) = 0.0;
        from_left.push_back({r - 1, theta, phi});
      }
    }
  }

  // w = L_k···L_1 · u · R_1⁻¹···R_m⁻¹ is diagonal, so
  // u = L_1⁻¹···L_k⁻¹ · D · R_m···R_1.
  ComplexVector d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = w(j, j);

  // Sequence of splitters in product order (left to right) after D.
  std::vector<detail::PlacedSplitter> sequence;
  sequence.reserve(from_left.size() + from_right.size());
  for (auto it = from_left.rbegin(); it != from_left.rend(); ++it) {
    const Matrix2 inv = detail::dagger2(beamsplitter_block(it->theta, it->phi));
    const std::size_t m = it->top;
    const Matrix2 v{{{inv[0][0] * d[m], inv[0][1] * d[m + 1]}, {inv[1][0] * d[m], inv[1][1] * d[m + 1]}}};
    const auto split = detail::split_left_diagonal(v);
    d[m] = split.a;
    d[m + 1] = split.b;
    sequence.insert(sequence.begin(), {m, split.theta, split.phi});
  }
  for (auto it = from_right.rbegin(); it != from_right.rend(); ++it) sequence.push_back(*it);

  // Greedy layering from the input side: layer 0 is the rightmost (odd) layer.
  std::vector<long> last(n, -1);
  std::map<std::pair<std::size_t, std::size_t>, detail::PlacedSplitter> grid;
  for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
    const std::size_t m = it->top;
    long layer = std::max(last[m], last[m + 1]) + 1;
    if (static_cast<std::size_t>(layer) % 2 != m % 2) ++layer;
    if (static_cast<std::size_t>(layer) >= n || grid.count({static_cast<std::size_t>(layer), m}) != 0) {
      throw std::logic_error("decompose_clements: splitter does not fit the rectangular mesh");
    }
    last[m] = last[m + 1] = layer;
    grid[{static_cast<std::size_t>(layer), m}] = *it;
  }

  ClementsMesh mesh = ClementsMesh::identity(n);
  mesh.final_diagonal = PhaseMask::from_diagonal(d);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t layer_from_input = n - 1 - idx;
    for (auto& bs : mesh.layers[idx]) {
      const auto found = grid.find({layer_from_input, bs.top_channel});
      if (found == grid.end()) continue;
      bs.theta = canonical_phase(found->second.theta);
      bs.phi = canonical_phase(found->second.phi);
    }
  }
  return mesh;
}

}  // namespace ftmesh
