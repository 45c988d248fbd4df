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

// Verb implementations for the ftmesh command-line tool. Each command
// builds its whole output in memory and writes it only on success.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ftmesh/ftmesh.hpp"

namespace ftmesh::cli {

enum ExitCode : int {
  kOk = 0,
  kResidualTooLarge = 1,
  kParseError = 2,
  kNonUnitary = 3,
  kVerificationFailed = 4,
  kDimensionMismatch = 5,
};

inline constexpr double kDefaultUnitarityTol = 1e-10;

inline double default_residual_tol(std::size_t n) { return 1e-9 * static_cast<double>(n); }

/** Physical description of the MMI device; all three must be set to use it. */
struct PhysicalMMI {
  std::optional<double> refractive_index;
  std::optional<double> wavenumber;
  std::optional<double> width;

  bool any() const { return refractive_index || wavenumber || width; }
  bool complete() const { return refractive_index && wavenumber && width; }
};

/** Nearest unitary in Frobenius norm: W·Vᴴ from the SVD M = W·Σ·Vᴴ. */
inline ComplexMatrix polar_project(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXcd q = svd.matrixU() * svd.matrixV().adjoint();
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = q(i, j);
  return out;
}

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ' ';
    out += ftmesh::detail::format_double(xs[i]);
  }
  return out;
}

/** Resolves ζ₀ and the MMI metadata. Returns false (with a message) on bad input. */
inline bool resolve_mmi(std::size_t n, double zeta0, const PhysicalMMI& phys, double& zeta_out,
                        std::map<std::string, std::string>& md, std::ostream& err) {
  zeta_out = zeta0;
  if (!phys.any()) return true;
  if (!phys.complete()) {
    err << "error: --refractive-index, --wavenumber and --width must be given together\n";
    return false;
  }
  MMIParams p{*phys.refractive_index, *phys.wavenumber, *phys.width, n, 0.0};
  try {
    p.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return false;
  }
  zeta_out = physical_zeta0(p);
  const auto pos = mmi_mode_positions(p);
  md["mmi_self_imaging_length_m"] = ftmesh::detail::format_double(self_imaging_length(p));
  md["mmi_input_positions_m"] = join_doubles(pos.input);
  md["mmi_output_positions_m"] = join_doubles(pos.output);
  return true;
}

inline bool read_matrix(const std::string& path, ComplexMatrix& m, std::ostream& err) {
  try {
    m = parse_matrix(read_text_file(path));
    return true;
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return false;
  }
}

inline bool read_program(const std::string& path, ProgramFile& f, std::ostream& err) {
  try {
    f = parse_program(read_text_file(path));
    return true;
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return false;
  }
}

inline bool write_output(const std::string& path, const std::string& content, std::ostream& out,
                         std::ostream& err) {
  if (path.empty() || path == "-") {
    out << content;
    return true;
  }
  try {
    write_text_file(path, content);
    return true;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return false;
  }
}

inline int check_square_even(const ComplexMatrix& u, std::ostream& err) {
  if (!u.is_square()) {
    err << "error: matrix is " << u.rows() << "x" << u.cols() << ", expected square\n";
    return kDimensionMismatch;
  }
  if (u.rows() < 2 || u.rows() % 2 != 0) {
    err << "error: dimension " << u.rows() << " is not even\n";
    return kDimensionMismatch;
  }
  return kOk;
}

/**
 * Compiles u for the requested target and renders the ProgramFile. Returns an
 * exit code; on kOk `text` and `residual` are set.
 */
inline int compile_to_text(const ComplexMatrix& u, bool mmi, double zeta0, double unitarity_tol,
                           std::map<std::string, std::string> md, std::string& text, double& residual,
                           std::ostream& err) {
  try {
    const Tolerance tol{unitarity_tol, 0.0};
    CompileResult r = mmi ? compile_for_mmi(u, zeta0, tol) : compile_detailed(u, tol);
    // re-verify what is actually written
    const ProgramFile file{std::move(r.program), std::move(md)};
    text = serialize_program(file);
    residual = verify_program(parse_program(text).program, u);
    return kOk;
  } catch (const NonUnitaryError& e) {
    err << "error: " << e.what() << "\n";
    return kNonUnitary;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct CompileOptions {
  std::string input;
  std::string output;
  std::string target = "dft";
  double zeta0 = 0.0;
  PhysicalMMI physical;
  bool project_unitary = false;
  std::optional<double> tol;
  double unitarity_tol = kDefaultUnitarityTol;
};

inline int cmd_compile(const CompileOptions& o, std::ostream& out, std::ostream& err) {
  ComplexMatrix u;
  if (!detail::read_matrix(o.input, u, err)) return kParseError;
  if (const int rc = detail::check_square_even(u, err); rc != kOk) return rc;
  const std::size_t n = u.rows();
  const bool mmi = o.target == "mmi";
  if (!mmi && o.target != "dft") {
    err << "error: --target must be dft or mmi\n";
    return kParseError;
  }

  const ComplexMatrix source = u;
  if (o.project_unitary) {
    const double before = unitarity_defect(u);
    u = polar_project(u);
    err << "warning: input projected to the nearest unitary (max |U†U - I| was " << detail::sci(before)
        << ", moved by Frobenius distance " << detail::sci(frobenius_distance(u, source)) << ")\n";
  }

  auto md = default_metadata(&source);
  double zeta0 = o.zeta0;
  if (mmi && !detail::resolve_mmi(n, o.zeta0, o.physical, zeta0, md, err)) return kParseError;
  if (o.project_unitary) md["projected_unitary"] = "true";

  std::string text;
  double residual = 0.0;
  if (const int rc = detail::compile_to_text(u, mmi, zeta0, o.unitarity_tol, md, text, residual, err); rc != kOk) {
    return rc;
  }
  const double tol = o.tol.value_or(default_residual_tol(n));
  out << "residual " << detail::sci(residual) << "\n";
  if (!(residual <= tol)) {
    err << "error: residual " << detail::sci(residual) << " exceeds tolerance " << detail::sci(tol) << "\n";
    return kVerificationFailed;
  }
  return detail::write_output(o.output, text, out, err) ? kOk : kParseError;
}

struct VerifyOptions {
  std::string program;
  std::string matrix;
  std::optional<double> tol;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  ProgramFile f;
  ComplexMatrix u;
  if (!detail::read_program(o.program, f, err)) return kParseError;
  if (!detail::read_matrix(o.matrix, u, err)) return kParseError;
  if (u.rows() != f.program.n || u.cols() != f.program.n) {
    err << "error: program is " << f.program.n << "x" << f.program.n << ", matrix is " << u.rows() << "x"
        << u.cols() << "\n";
    return kDimensionMismatch;
  }
  const double residual = verify_program(f.program, u);
  const double tol = o.tol.value_or(default_residual_tol(u.rows()));
  out << "residual " << detail::sci(residual) << "\n";
  return residual <= tol ? kOk : kResidualTooLarge;
}

struct ApplyOptions {
  std::string program;
  std::string vector;
  std::string output;
  bool dense = false;
};

inline int cmd_apply(const ApplyOptions& o, std::ostream& out, std::ostream& err) {
  ProgramFile f;
  if (!detail::read_program(o.program, f, err)) return kParseError;
  ComplexVector v;
  try {
    v = parse_vector(read_text_file(o.vector));
  } catch (const std::exception& e) {
    err << "error: " << o.vector << ": " << e.what() << "\n";
    return kParseError;
  }
  if (v.size() != f.program.n) {
    err << "error: vector has length " << v.size() << ", program acts on " << f.program.n << " modes\n";
    return kDimensionMismatch;
  }
  const ComplexVector w = o.dense ? dense_apply(f.program, v) : fast_apply(f.program, v);
  return detail::write_output(o.output, format_vector(w), out, err) ? kOk : kParseError;
}

struct RandomOptions {
  std::size_t n = 4;
  std::uint64_t seed = 0;
  std::string output;
};

inline int cmd_random(const RandomOptions& o, std::ostream& out, std::ostream& err) {
  if (o.n == 0) {
    err << "error: n must be positive\n";
    return kParseError;
  }
  if (o.n % 2 != 0) err << "warning: n = " << o.n << " is odd; compile needs an even dimension\n";
  const std::string text = format_matrix(haar_random_unitary(o.n, o.seed));
  return detail::write_output(o.output, text, out, err) ? kOk : kParseError;
}

struct RetargetOptions {
  std::string input;
  std::string output;
  double zeta0 = 0.0;
  PhysicalMMI physical;
  double unitarity_tol = kDefaultUnitarityTol;
};

/**
 * DFT program → MMI program for the same unitary. The masks of the DFT
 * program are not enough to derive MMI masks directly (those need a program
 * for R·U·Rᵀ), so the unitary is evaluated densely and recompiled.
 */
inline int cmd_retarget(const RetargetOptions& o, std::ostream& out, std::ostream& err) {
  ProgramFile f;
  if (!detail::read_program(o.input, f, err)) return kParseError;
  if (f.program.transform != TransformKind::IdealDFT) {
    err << "error: input program already targets mmi\n";
    return kParseError;
  }
  const std::size_t n = f.program.n;
  const ComplexMatrix u = program_matrix(f.program);
  auto md = default_metadata(&u);
  md["retargeted_from"] = "dft";
  if (const auto it = f.metadata.find("source_checksum"); it != f.metadata.end()) md["source_checksum"] = it->second;
  double zeta0 = o.zeta0;
  if (!detail::resolve_mmi(n, o.zeta0, o.physical, zeta0, md, err)) return kParseError;

  std::string text;
  double residual = 0.0;
  if (const int rc = detail::compile_to_text(u, true, zeta0, o.unitarity_tol, md, text, residual, err); rc != kOk) {
    return rc;
  }
  out << "residual " << detail::sci(residual) << "\n";
  if (!(residual <= default_residual_tol(n))) return kVerificationFailed;
  return detail::write_output(o.output, text, out, err) ? kOk : kParseError;
}

// ---------------------------------------------------------------------------
// Benchmark

struct BenchOptions {
  std::vector<std::size_t> sizes{4, 8, 16, 32, 64};
  std::size_t repeats = 3;
  std::string output;
  bool apply_only = false;
  std::uint64_t seed = 0;
};

inline constexpr const char* kBenchHeader = "n,compile_s,dense_apply_s,fast_apply_s,residual";

namespace detail {

template <class F>
double best_seconds(std::size_t repeats, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

inline PhaseMaskProgram random_program(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  PhaseMaskProgram p;
  p.n = n;
  for (std::size_t i = 0; i < 6 * n + 1; ++i) {
    std::vector<double> m(n);
    for (auto& a : m) a = phase(rng);
    p.masks.emplace_back(std::move(m));
  }
  return p;
}

inline ComplexVector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) z = Complex(normal(rng), normal(rng));
  return v;
}

inline std::string csv_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace detail

/**
 * One CSV row per size. Compile mode times compile() on a Haar unitary and
 * reports its residual. Apply-only mode uses a random 6n+1 mask program,
 * leaves compile_s empty and reports the relative fast/dense difference.
 * A failing size is recorded with the error text in the residual column.
 */
inline int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  std::string csv = std::string(kBenchHeader) + "\n";
  for (const std::size_t n : o.sizes) {
    std::string row = std::to_string(n) + ",";
    try {
      if (n < 2 || n % 2 != 0) throw std::invalid_argument("size must be even and >= 2");
      PhaseMaskProgram p;
      double residual = 0.0;
      if (o.apply_only) {
        p = detail::random_program(n, o.seed + n);
        row += ",";
      } else {
        const ComplexMatrix u = haar_random_unitary(n, o.seed + n);
        CompileResult r;
        const double t = detail::best_seconds(o.repeats, [&] { r = compile_detailed(u); });
        p = r.program;
        residual = r.residual;
        row += detail::csv_double(t) + ",";
      }
      const ComplexVector v = detail::random_vector(n, o.seed + 7 * n + 1);
      ComplexVector dense, fast;
      const double td = detail::best_seconds(o.repeats, [&] { dense = dense_apply(p, v); });
      const ProgramApplier applier(p);
      const double tf = detail::best_seconds(o.repeats, [&] { fast = applier.apply(v); });
      if (o.apply_only) residual = vector_distance(dense, fast) / vector_norm(dense);
      row += detail::csv_double(td) + "," + detail::csv_double(tf) + "," + detail::csv_double(residual);
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '"', '\'');
      row = std::to_string(n) + ",,,,\"error: " + msg + "\"";
    }
    csv += row + "\n";
  }
  return detail::write_output(o.output, csv, out, err) ? kOk : kParseError;
}

}  // namespace ftmesh::cli
