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
 * @file mmi.hpp
 * Transfer matrix of an N×N multimode-interference (MMI) coupler at the
 * N-fold self-imaging length, and its relation to the DFT:
 *
 *     S = Rᵀ · Θ · F · Θ · R
 *
 * with R a fixed permutation and Θ a diagonal phase mask.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftmesh/matcore.hpp"

namespace ftmesh {

struct MMIParams {
  double refractive_index = 1.0;
  double vacuum_wavenumber = 1.0;  // rad/m
  double width = 1.0;              // m
  std::size_t modes = 2;
  double zeta0 = 0.0;

  void validate() const {
    if (!(refractive_index > 0.0) || !(vacuum_wavenumber > 0.0) || !(width > 0.0) ||
        !std::isfinite(refractive_index) || !std::isfinite(vacuum_wavenumber) || !std::isfinite(width)) {
      throw std::invalid_argument("MMIParams: physical parameters must be positive and finite");
    }
    if (modes == 0 || modes % 2 != 0) throw std::invalid_argument("MMIParams: mode count must be even");
  }
};

/** z_N = 2·n·k0·w² / (π·N) */
inline double self_imaging_length(const MMIParams& p) {
  p.validate();
  return 2.0 * p.refractive_index * p.vacuum_wavenumber * p.width * p.width /
         (kPi * static_cast<double>(p.modes));
}

/** Global phase of S for the physical device: ζ₀ = −k0·z_N − π/4. */
inline double physical_zeta0(const MMIParams& p) {
  return -p.vacuum_wavenumber * self_imaging_length(p) - kPi / 4.0;
}

/** Centres of the input and output wavepackets across the guide width. */
struct ModePositions {
  std::vector<double> input;
  std::vector<double> output;
};

inline ModePositions mmi_mode_positions(const MMIParams& p) {
  p.validate();
  const auto n = static_cast<double>(p.modes);
  ModePositions pos;
  for (std::size_t j = 0; j < p.modes; ++j) {
    const auto jd = static_cast<double>(j);
    pos.input.push_back((jd + 0.5) * p.width / n);
    pos.output.push_back((n - jd - 0.5) * p.width / n);
  }
  return pos;
}

namespace detail {
inline void require_even_modes(std::size_t n, const char* what) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument(std::string(what) + ": n must be even and >= 2");
}

inline std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace detail

/**
 * S_jk = e^{iζ₀}/√n · e^{iπ/(4n)·(k−j)(2n−k+j)}      for j+k even,
 *        e^{iζ₀}/√n · e^{iπ/(4n)·(k+j+1)(2n−k−j−1)}  for j+k odd.
 */
inline ComplexMatrix mmi_smatrix(std::size_t n, double zeta0) {
  detail::require_even_modes(n, "mmi_smatrix");
  const auto nn = static_cast<std::int64_t>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix s(n, n);
  for (std::int64_t j = 0; j < nn; ++j) {
    for (std::int64_t k = 0; k < nn; ++k) {
      const std::int64_t m = (j + k) % 2 == 0 ? (k - j) * (2 * nn - k + j) : (k + j + 1) * (2 * nn - k - j - 1);
      // π/(4n)·m is periodic in m with period 8n
      const double angle = kPi * static_cast<double>(detail::positive_mod(m, 8 * nn)) / (4.0 * static_cast<double>(n));
      s(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = std::polar(scale, angle + zeta0);
    }
  }
  return s;
}

/**
 * Index map of R: R(rho[j], j) = 1. Even modes 2a go to DFT index a, odd
 * modes 2b+1 to n−1−b.
 */
inline std::vector<std::size_t> mmi_rho(std::size_t n) {
  detail::require_even_modes(n, "mmi_rho");
  std::vector<std::size_t> rho(n);
  for (std::size_t j = 0; j < n; ++j) rho[j] = j % 2 == 0 ? j / 2 : n - 1 - j / 2;
  return rho;
}

enum class IndexBase { Zero, One };

/**
 * R from its index conditions
 *   R_jk = 1 iff (j <= n/2 and 2j − k − 1 = 0) or (j > n/2 and 2j + k − 2n − 2 = 0),
 * with j, k counted from 0 or from 1. Only the one-based reading is a
 * permutation; the zero-based candidate is exposed for comparison.
 */
inline ComplexMatrix mmi_R_candidate(std::size_t n, IndexBase base) {
  detail::require_even_modes(n, "mmi_R");
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t off = base == IndexBase::One ? 1 : 0;
  ComplexMatrix r(n, n);
  for (std::int64_t j0 = 0; j0 < nn; ++j0) {
    for (std::int64_t k0 = 0; k0 < nn; ++k0) {
      const std::int64_t j = j0 + off;
      const std::int64_t k = k0 + off;
      const bool hit = (2 * j <= nn && 2 * j - k - 1 == 0) || (2 * j > nn && 2 * j + k - 2 * nn - 2 == 0);
      if (hit) r(static_cast<std::size_t>(j0), static_cast<std::size_t>(k0)) = 1.0;
    }
  }
  return r;
}

inline ComplexMatrix mmi_R(std::size_t n) { return mmi_R_candidate(n, IndexBase::One); }

/**
 * Θ on the DFT index a: Θ_aa = exp(iπa − iπa²/n + iζ₀/2).
 */
inline PhaseMask mmi_theta(std::size_t n, double zeta0) {
  detail::require_even_modes(n, "mmi_theta");
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<double> phases(n);
  for (std::int64_t a = 0; a < nn; ++a) {
    // πa − πa²/n = π·a(n − a)/n, periodic in a(n − a) with period 2n
    const std::int64_t m = detail::positive_mod(a * (nn - a), 2 * nn);
    phases[static_cast<std::size_t>(a)] = kPi * static_cast<double>(m) / static_cast<double>(n) + zeta0 / 2.0;
  }
  return PhaseMask(std::move(phases));
}

struct IdentityResidual {
  double strict = 0.0;
  /** Residual after removing the best global phase. */
  double modulo_global_phase = 0.0;
};

inline IdentityResidual compare_up_to_phase(const ComplexMatrix& target, const ComplexMatrix& candidate) {
  IdentityResidual out;
  out.strict = frobenius_distance(target, candidate);
  Complex overlap{};
  const auto t = target.data();
  const auto c = candidate.data();
  for (std::size_t j = 0; j < t.size(); ++j) overlap += std::conj(c[j]) * t[j];
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  out.modulo_global_phase = frobenius_distance(target, scaled(candidate, phase));
  return out;
}

/** Residuals of S(n, ζ₀) against Rᵀ·Θ·F·Θ·R for arbitrary R and Θ. */
inline IdentityResidual dft_opt_residuals(const ComplexMatrix& r, const PhaseMask& theta, std::size_t n,
                                          double zeta0) {
  const ComplexMatrix t = ComplexMatrix::diagonal(theta);
  const ComplexMatrix rhs = transpose(r) * t * dft_matrix(n) * t * r;
  return compare_up_to_phase(mmi_smatrix(n, zeta0), rhs);
}

inline double verify_dft_opt_identity(std::size_t n, double zeta0) {
  return dft_opt_residuals(mmi_R(n), mmi_theta(n, zeta0), n, zeta0).strict;
}

}  // namespace ftmesh
