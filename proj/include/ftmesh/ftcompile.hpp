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
 * @file ftcompile.hpp
 * Compiles a unitary into 6n+1 phase masks separated by 6n DFTs.
 *
 * Channels are first relabeled (2m → m, 2m+1 → n/2+m) so that every
 * splitter of a rectangular mesh couples a top-half channel with a
 * bottom-half one. Each relabeled splitter layer is then a product of six
 * (F · mask) factors, up to the fixed permutations Π and P and the sign
 * mask G², which cancel between neighbouring layers:
 *
 *     {A masks}_F = Π · P · L_A          (odd layer, n/2 splitters)
 *     {B masks}_F = G² · L_B · Pᵀ · Π    (even layer, n/2 − 1 splitters)
 *
 * where {D1, ..., Dk}_F = F·D1 · F·D2 ··· F·Dk.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftmesh/clements.hpp"
#include "ftmesh/matcore.hpp"
#include "ftmesh/program.hpp"

namespace ftmesh {

/** The compiler produced a program that does not reproduce its input. */
class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// ---------------------------------------------------------------------------
// Relabeling

struct RelabelPermutation {
  /** map[k] is the new label of channel k. */
  std::vector<std::size_t> map;
  /** Q with Q(map[k], k) = 1. */
  ComplexMatrix matrix;
};

inline std::vector<std::size_t> relabel_map(std::size_t n) {
  detail::require_even(n, "relabel_map");
  std::vector<std::size_t> map(n);
  for (std::size_t k = 0; k < n; ++k) map[k] = k % 2 == 0 ? k / 2 : n / 2 + k / 2;
  return map;
}

inline RelabelPermutation relabel_permutation(std::size_t n) {
  RelabelPermutation r{relabel_map(n), {}};
  r.matrix = permutation_matrix(r.map);
  return r;
}

// ---------------------------------------------------------------------------
// Masks

struct FixedMasks {
  PhaseMask e;
  PhaseMask h;
  PhaseMask g;
  PhaseMask pg;
};

inline FixedMasks fixed_masks(std::size_t n) {
  detail::require_even(n, "fixed_masks");
  std::vector<double> e(n), h(n), g(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = j % 2 == 0 ? -kPi / 4 : kPi / 4;
    h[j] = j % 2 == 0 ? kTwoPi * static_cast<double>(j) / static_cast<double>(n) : 0.0;
    g[j] = j < n / 2 ? 0.0 : kPi / 2;
  }
  FixedMasks m{PhaseMask(std::move(e)), PhaseMask(std::move(h)), PhaseMask(std::move(g)), {}};
  m.pg = pi_conjugate(m.g);
  return m;
}

/** G² = diag(I, −I). */
inline PhaseMask g_squared_mask(std::size_t n) {
  const auto g = fixed_masks(n).g;
  return g * g;
}

/**
 * Γ(v): e^{i·v_j} for j < active, i elsewhere. v has length n/2; the
 * default active = n/2 is the threshold that reproduces the splitter layers.
 */
inline PhaseMask gamma_mask(std::span<const double> v, std::size_t n, std::size_t active) {
  detail::require_even(n, "gamma_mask");
  if (v.size() != n / 2) throw ShapeError("gamma_mask: v must have length n/2");
  if (active > n / 2) throw std::invalid_argument("gamma_mask: active count exceeds n/2");
  std::vector<double> out(n, kPi / 2);
  for (std::size_t j = 0; j < active; ++j) out[j] = v[j];
  return PhaseMask(std::move(out));
}

inline PhaseMask gamma_mask(std::span<const double> v, std::size_t n) { return gamma_mask(v, n, n / 2); }

using LayerMasks = std::array<PhaseMask, 6>;

/**
 * Masks of an odd layer with splitters T(theta[m], phi[m]) on relabeled
 * pairs (m, n/2 + m).
 */
inline LayerMasks layer_factor_A(std::span<const double> theta, std::span<const double> phi, std::size_t n) {
  detail::require_even(n, "layer_factor_A");
  const std::size_t half = n / 2;
  if (theta.size() != half || phi.size() != half) throw ShapeError("layer_factor_A: expected n/2 angles");
  const auto fm = fixed_masks(n);
  std::vector<double> two_theta(half);
  std::vector<double> last(n);
  for (std::size_t m = 0; m < half; ++m) {
    two_theta[m] = 2.0 * theta[m];
    last[m] = phi[m] - theta[m];
    last[half + m] = kPi - theta[m];
  }
  return {fm.e, fm.g, fm.h, pi_conjugate(gamma_mask(two_theta, n)), fm.e, PhaseMask(std::move(last))};
}

/**
 * Masks of an even layer with splitters T(chi[m], eta[m]) on relabeled
 * pairs (n/2 + m, m + 1), m < n/2 − 1.
 */
inline LayerMasks layer_factor_B(std::span<const double> chi, std::span<const double> eta, std::size_t n) {
  detail::require_even(n, "layer_factor_B");
  const std::size_t half = n / 2;
  if (chi.size() != half - 1 || eta.size() != half - 1) {
    throw ShapeError("layer_factor_B: expected n/2 - 1 angles");
  }
  const auto fm = fixed_masks(n);
  // the unused slot n/2 − 1 carries an identity splitter
  std::vector<double> two_chi(half, 0.0);
  std::vector<double> last(n, 0.0);
  for (std::size_t m = 0; m + 1 < half; ++m) {
    two_chi[m] = 2.0 * chi[m];
    last[m] = -chi[m];
    last[half + m] = eta[m] - chi[m];
  }
  return {fm.e, fm.pg, fm.h, gamma_mask(two_chi, n), fm.e, pi_conjugate(PhaseMask(std::move(last)))};
}

/** {D1, ..., Dk}_F = F·D1 · F·D2 ··· F·Dk. */
inline ComplexMatrix evaluate_masks(std::span<const PhaseMask> masks, std::size_t n) {
  detail::require_positive(n, "evaluate_masks");
  const ComplexMatrix f = dft_matrix(n);
  ComplexMatrix m = ComplexMatrix::identity(n);
  for (const auto& d : masks) {
    if (d.size() != n) throw ShapeError("evaluate_masks: mask length mismatch");
    m = scale_cols(m * f, d.diagonal());
  }
  return m;
}

inline double verify_layer(std::span<const PhaseMask> masks, const ComplexMatrix& target, std::size_t n) {
  return frobenius_distance(evaluate_masks(masks, n), target);
}

// ---------------------------------------------------------------------------
// Layer targets

/** Q · ∏_m T(theta[m], phi[m])_{2m} · Qᵀ. */
inline ComplexMatrix odd_layer_relabeled(std::span<const double> theta, std::span<const double> phi, std::size_t n) {
  detail::require_even(n, "odd_layer_relabeled");
  if (theta.size() != n / 2 || phi.size() != n / 2) throw ShapeError("odd_layer_relabeled: expected n/2 angles");
  std::vector<BeamSplitterParams> layer;
  for (std::size_t m = 0; m < n / 2; ++m) layer.push_back({theta[m], phi[m], 2 * m});
  return permute_rows_cols(layer_matrix(n, layer), relabel_map(n));
}

/** Q · ∏_m T(chi[m], eta[m])_{2m+1} · Qᵀ. */
inline ComplexMatrix even_layer_relabeled(std::span<const double> chi, std::span<const double> eta, std::size_t n) {
  detail::require_even(n, "even_layer_relabeled");
  if (chi.size() != n / 2 - 1 || eta.size() != n / 2 - 1) {
    throw ShapeError("even_layer_relabeled: expected n/2 - 1 angles");
  }
  std::vector<BeamSplitterParams> layer;
  for (std::size_t m = 0; m + 1 < n / 2; ++m) layer.push_back({chi[m], eta[m], 2 * m + 1});
  return permute_rows_cols(layer_matrix(n, layer), relabel_map(n));
}

/** Π · P · L_A */
inline ComplexMatrix layer_target_A(std::span<const double> theta, std::span<const double> phi, std::size_t n) {
  return pi_matrix(n) * clements_perm_matrix(n) * odd_layer_relabeled(theta, phi, n);
}

/** G² · L_B · Pᵀ · Π */
inline ComplexMatrix layer_target_B(std::span<const double> chi, std::span<const double> eta, std::size_t n) {
  const auto g2 = g_squared_mask(n).diagonal();
  return scale_rows(g2, even_layer_relabeled(chi, eta, n)) * transpose(clements_perm_matrix(n)) * pi_matrix(n);
}

// ---------------------------------------------------------------------------
// Compilation

/**
 * Flat program for Q · reconstruct_mesh(mesh) · Qᵀ, Q the relabeling.
 * Always 6n + 1 masks.
 */
inline PhaseMaskProgram program_from_mesh(const ClementsMesh& mesh) {
  mesh.validate();
  const std::size_t n = mesh.n;
  const std::size_t half = n / 2;
  const auto map = relabel_map(n);
  const PhaseMask g2 = g_squared_mask(n);

  PhaseMaskProgram p;
  p.n = n;
  p.transform = TransformKind::IdealDFT;
  p.masks.reserve(6 * n + 1);

  std::vector<double> d0(n);
  for (std::size_t k = 0; k < n; ++k) d0[map[k]] = mesh.final_diagonal[k];
  p.masks.push_back(PhaseMask(std::move(d0)) * g2);

  for (std::size_t i = 0; i < half; ++i) {
    const auto& even = mesh.layers[2 * i];
    const auto& odd = mesh.layers[2 * i + 1];
    std::vector<double> chi, eta, theta, phi;
    for (const auto& bs : even) {
      chi.push_back(bs.theta);
      eta.push_back(bs.phi);
    }
    for (const auto& bs : odd) {
      theta.push_back(bs.theta);
      phi.push_back(bs.phi);
    }
    const auto b = layer_factor_B(chi, eta, n);
    auto a = layer_factor_A(theta, phi, n);
    // the G² opening the next B block is cancelled here
    if (i + 1 < half) a[5] = a[5] * g2;
    p.masks.insert(p.masks.end(), b.begin(), b.end());
    p.masks.insert(p.masks.end(), a.begin(), a.end());
  }
  return p;
}

struct CompileResult {
  PhaseMaskProgram program;
  /** Mesh of the relabeled matrix Qᵀ·U·Q. */
  ClementsMesh mesh;
  double residual = 0.0;
};

/** Largest n verified densely; above it random probe vectors are used. */
inline constexpr std::size_t kDenseVerifyLimit = 64;

/**
 * Residual of p against u. Dense Frobenius distance for n <= 64; above,
 * the Frobenius norm estimated from a few seeded Gaussian probes.
 */
inline double program_residual(const PhaseMaskProgram& p, const ComplexMatrix& u, std::size_t probes = 4) {
  if (p.n <= kDenseVerifyLimit) return verify_program(p, u);
  std::mt19937_64 rng(0x5eedULL + p.n);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  const ProgramApplier applier(p);
  double acc = 0.0;
  for (std::size_t s = 0; s < probes; ++s) {
    ComplexVector v(p.n);
    for (auto& z : v) z = Complex(normal(rng), normal(rng));
    const auto expected = matvec(u, v);
    const auto got = applier.apply(v);
    const double d = vector_distance(got, expected);
    acc += d * d;
  }
  // E|Δv|² = ‖Δ‖_F² for unit-variance complex Gaussian v
  return std::sqrt(acc / static_cast<double>(probes));
}

/**
 * Compiles u. tol.absolute gates input unitarity; the program is accepted
 * only if its residual is at most 1e-9·n.
 */
inline CompileResult compile_detailed(const ComplexMatrix& u, const Tolerance& tol = {}) {
  tol.validate();
  if (!u.is_square()) throw ShapeError("compile: matrix is not square");
  const std::size_t n = u.rows();
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("compile: dimension must be even and >= 2");

  // V(i, j) = U(map[i], map[j]) = (Qᵀ·U·Q)(i, j)
  const auto map = relabel_map(n);
  ComplexMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = u(map[i], map[j]);

  CompileResult out;
  out.mesh = decompose_clements(v, tol);
  out.program = program_from_mesh(out.mesh);
  out.residual = program_residual(out.program, u);
  const double limit = 1e-9 * static_cast<double>(n);
  if (!(out.residual <= limit)) {
    throw VerificationError("compile: reconstruction residual " + std::to_string(out.residual) +
                                " exceeds " + std::to_string(limit),
                            out.residual);
  }
  return out;
}

inline PhaseMaskProgram compile(const ComplexMatrix& u, const Tolerance& tol = {}) {
  return compile_detailed(u, tol).program;
}

}  // namespace ftmesh
