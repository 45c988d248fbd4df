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
 * @file program.hpp
 * Phase-mask programs U = D⁽⁰⁾ · F·D⁽¹⁾ · F·D⁽²⁾ ··· F·D⁽ᴸ⁾, where F is either
 * the ideal DFT or the MMI transfer matrix S. D⁽ᴸ⁾ acts first on a vector.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftmesh/fft.hpp"
#include "ftmesh/matcore.hpp"
#include "ftmesh/mmi.hpp"

namespace ftmesh {

enum class TransformKind { IdealDFT, MMI };

struct PhaseMaskProgram {
  std::size_t n = 0;
  /** D⁽⁰⁾ … D⁽ᴸ⁾ */
  std::vector<PhaseMask> masks;
  TransformKind transform = TransformKind::IdealDFT;
  /** Global phase of S; only meaningful for MMI programs. */
  double zeta0 = 0.0;

  /** Number of fixed transforms L. */
  std::size_t length() const { return masks.empty() ? 0 : masks.size() - 1; }

  void validate() const {
    if (n == 0) throw std::invalid_argument("PhaseMaskProgram: n must be positive");
    if (transform == TransformKind::MMI && n % 2 != 0) {
      throw std::invalid_argument("PhaseMaskProgram: MMI programs need even n");
    }
    if (masks.empty()) throw std::invalid_argument("PhaseMaskProgram: needs at least one mask");
    for (const auto& m : masks) {
      if (m.size() != n) throw ShapeError("PhaseMaskProgram: mask length differs from n");
      for (double a : m.phases()) {
        if (!std::isfinite(a)) throw std::invalid_argument("PhaseMaskProgram: non-finite phase");
      }
    }
  }
};

/** The fixed matrix between consecutive masks. */
inline ComplexMatrix transform_matrix(const PhaseMaskProgram& p) {
  return p.transform == TransformKind::IdealDFT ? dft_matrix(p.n) : mmi_smatrix(p.n, p.zeta0);
}

/** Dense evaluation of the program. */
inline ComplexMatrix program_matrix(const PhaseMaskProgram& p) {
  p.validate();
  const ComplexMatrix t = transform_matrix(p);
  ComplexMatrix m = ComplexMatrix::diagonal(p.masks[0]);
  for (std::size_t i = 1; i < p.masks.size(); ++i) {
    const auto d = p.masks[i].diagonal();
    m = scale_cols(m * t, d);
  }
  return m;
}

/** Frobenius distance between the program's matrix and u. */
inline double verify_program(const PhaseMaskProgram& p, const ComplexMatrix& u) {
  if (u.rows() != p.n || u.cols() != p.n) throw ShapeError("verify_program: dimension mismatch");
  return frobenius_distance(program_matrix(p), u);
}

/**
 * Applies a program to vectors in O(L·n·log n). An MMI transform is applied
 * as S·v = Rᵀ·Θ·F·Θ·R·v.
 */
class ProgramApplier {
 public:
  explicit ProgramApplier(const PhaseMaskProgram& p) : n_(p.n), kind_(p.transform), fft_(p.n) {
    p.validate();
    for (const auto& m : p.masks) diagonals_.push_back(m.diagonal());
    if (kind_ == TransformKind::MMI) {
      rho_ = mmi_rho(n_);
      theta_ = mmi_theta(n_, p.zeta0).diagonal();
      scratch_size_ = n_;
    }
  }

  std::size_t size() const { return n_; }

  void apply_in_place(std::span<Complex> v) const {
    if (v.size() != n_) throw ShapeError("ProgramApplier: vector length mismatch");
    std::vector<Complex> scratch(scratch_size_);
    for (std::size_t i = diagonals_.size(); i-- > 0;) {
      const auto& d = diagonals_[i];
      for (std::size_t j = 0; j < n_; ++j) v[j] *= d[j];
      if (i > 0) apply_transform(v, scratch);
    }
  }

  ComplexVector apply(std::span<const Complex> v) const {
    ComplexVector out(v.begin(), v.end());
    apply_in_place(out);
    return out;
  }

 private:
  void apply_transform(std::span<Complex> v, std::vector<Complex>& scratch) const {
    if (kind_ == TransformKind::IdealDFT) {
      fft_.apply(v);
      return;
    }
    // w = Θ·R·v, (R·v)[rho[j]] = v[j]
    for (std::size_t j = 0; j < n_; ++j) scratch[rho_[j]] = v[j];
    for (std::size_t a = 0; a < n_; ++a) scratch[a] *= theta_[a];
    fft_.apply(scratch);
    for (std::size_t a = 0; a < n_; ++a) scratch[a] *= theta_[a];
    // (Rᵀ·w)[j] = w[rho[j]]
    for (std::size_t j = 0; j < n_; ++j) v[j] = scratch[rho_[j]];
  }

  std::size_t n_;
  TransformKind kind_;
  FourierTransform fft_;
  std::vector<ComplexVector> diagonals_;
  std::vector<std::size_t> rho_;
  ComplexVector theta_;
  std::size_t scratch_size_ = 0;
};

inline ComplexVector fast_apply(const PhaseMaskProgram& p, std::span<const Complex> v) {
  if (v.size() != p.n) throw ShapeError("fast_apply: vector length mismatch");
  return ProgramApplier(p).apply(v);
}

/** Layer-by-layer application with the dense transform matrix, O(L·n²). */
inline ComplexVector dense_apply(const PhaseMaskProgram& p, std::span<const Complex> v) {
  p.validate();
  if (v.size() != p.n) throw ShapeError("dense_apply: vector length mismatch");
  const ComplexMatrix t = transform_matrix(p);
  ComplexVector w(v.begin(), v.end());
  for (std::size_t i = p.masks.size(); i-- > 0;) {
    for (std::size_t j = 0; j < p.n; ++j) w[j] *= p.masks[i].factor(j);
    if (i > 0) w = matvec(t, w);
  }
  return w;
}

}  // namespace ftmesh
