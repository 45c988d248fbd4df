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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftmesh/ftcompile.hpp"
#include "ftmesh/mmi.hpp"
#include "ftmesh/program.hpp"

namespace ftmesh {

/**
 * Rewrites a DFT program for V as an MMI program for Rᵀ·V·R. Substituting
 * F = R·S·Rᵀ conjugated by Θ* gives, with Θ' = Rᵀ·Θ·R,
 *
 *     D̃⁽⁰⁾ = Rᵀ·D⁽⁰⁾·R · Θ'*,   D̃⁽ⁱ⁾ = Θ'* · Rᵀ·D⁽ⁱ⁾·R · Θ'*,   D̃⁽ᴸ⁾ = Θ'* · Rᵀ·D⁽ᴸ⁾·R.
 */
inline PhaseMaskProgram retarget_to_mmi(const PhaseMaskProgram& p, double zeta0) {
  p.validate();
  if (p.transform != TransformKind::IdealDFT) {
    throw std::invalid_argument("retarget_to_mmi: program must target the ideal DFT");
  }
  const std::size_t n = p.n;
  const auto rho = mmi_rho(n);
  const PhaseMask theta = mmi_theta(n, zeta0);
  const std::size_t last = p.masks.size() - 1;

  PhaseMaskProgram out;
  out.n = n;
  out.transform = TransformKind::MMI;
  out.zeta0 = zeta0;
  out.masks.reserve(p.masks.size());
  for (std::size_t i = 0; i <= last; ++i) {
    // one Θ* per neighbouring transform
    const double weight = (i == 0 ? 0.0 : 1.0) + (i == last ? 0.0 : 1.0);
    std::vector<double> phases(n);
    for (std::size_t j = 0; j < n; ++j) phases[j] = p.masks[i][rho[j]] - weight * theta[rho[j]];
    out.masks.emplace_back(std::move(phases));
  }
  return out;
}

/** Compiles u for MMI hardware: compile R·u·Rᵀ, then retarget. */
inline CompileResult compile_for_mmi(const ComplexMatrix& u, double zeta0, const Tolerance& tol = {}) {
  if (!u.is_square()) throw ShapeError("compile_for_mmi: matrix is not square");
  const std::size_t n = u.rows();
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("compile_for_mmi: dimension must be even and >= 2");
  // (R·u·Rᵀ)(rho[i], rho[j]) = u(i, j)
  const ComplexMatrix ur = permute_rows_cols(u, mmi_rho(n));
  CompileResult out = compile_detailed(ur, tol);
  out.program = retarget_to_mmi(out.program, zeta0);
  out.residual = program_residual(out.program, u);
  const double limit = 1e-9 * static_cast<double>(n);
  if (!(out.residual <= limit)) {
    throw VerificationError("compile_for_mmi: reconstruction residual " + std::to_string(out.residual) +
                                " exceeds " + std::to_string(limit),
                            out.residual);
  }
  return out;
}

}  // namespace ftmesh
