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
 * @file matcore.hpp
 * Dense complex matrices, phase masks and the fixed matrices used by the
 * Fourier-mesh compiler (DFT, index reversal, half-block splitter, ...).
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ftmesh {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/** Raised when a matrix or mask has the wrong shape for an operation. */
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Comparison tolerance; only the absolute part is used by the predicates. */
struct Tolerance {
  double absolute = 1e-10;
  double relative = 0.0;

  void validate() const {
    if (!std::isfinite(absolute) || !std::isfinite(relative) ||
        absolute < 0.0 || relative < 0.0) {
      throw std::invalid_argument("Tolerance: components must be finite and >= 0");
    }
    if (absolute == 0.0 && relative == 0.0) {
      throw std::invalid_argument("Tolerance: one component must be positive");
    }
  }
};

/** Reduce an angle to [0, 2π). */
inline double canonical_phase(double alpha) {
  double r = std::fmod(alpha, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round back up to 2π
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/**
 * Diagonal unitary diag(e^{iα_0}, ..., e^{iα_{n-1}}) stored by its phases.
 * Phases are kept raw; canonical() reduces them to [0, 2π).
 */
class PhaseMask {
 public:
  PhaseMask() = default;
  explicit PhaseMask(std::size_t n) : phases_(n, 0.0) {}
  explicit PhaseMask(std::vector<double> phases) : phases_(std::move(phases)) {}

  /** Phases of a unit-modulus diagonal given by its complex entries. */
  static PhaseMask from_diagonal(std::span<const Complex> diag) {
    std::vector<double> phases(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) phases[j] = std::arg(diag[j]);
    return PhaseMask(std::move(phases));
  }

  std::size_t size() const { return phases_.size(); }
  double operator[](std::size_t j) const { return phases_[j]; }
  double& operator[](std::size_t j) { return phases_[j]; }
  std::span<const double> phases() const { return phases_; }

  Complex factor(std::size_t j) const { return std::polar(1.0, phases_[j]); }

  ComplexVector diagonal() const {
    ComplexVector d(phases_.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = factor(j);
    return d;
  }

  PhaseMask canonical() const {
    std::vector<double> out(phases_.size());
    std::transform(phases_.begin(), phases_.end(), out.begin(), canonical_phase);
    return PhaseMask(std::move(out));
  }

  /** Product of two diagonal masks. */
  friend PhaseMask operator*(const PhaseMask& a, const PhaseMask& b) {
    if (a.size() != b.size()) throw ShapeError("PhaseMask product: length mismatch");
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] + b[j];
    return PhaseMask(std::move(out));
  }

  PhaseMask conj() const {
    std::vector<double> out(phases_.size());
    std::transform(phases_.begin(), phases_.end(), out.begin(), [](double a) { return -a; });
    return PhaseMask(std::move(out));
  }

  friend bool operator==(const PhaseMask&, const PhaseMask&) = default;

 private:
  std::vector<double> phases_;
};

/**
 * p(D) = Π·D·Π for a diagonal D: keeps entry 0 and reverses the rest.
 */
inline PhaseMask pi_conjugate(const PhaseMask& d) {
  std::vector<double> out(d.size());
  if (!out.empty()) out[0] = d[0];
  for (std::size_t j = 1; j < out.size(); ++j) out[j] = d[d.size() - j];
  return PhaseMask(std::move(out));
}

/** Dense row-major complex matrix. */
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("ComplexMatrix: entry count does not match shape");
    }
    if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) m(j, j) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t j = 0; j < d.size(); ++j) m(j, j) = d[j];
    return m;
  }

  static ComplexMatrix diagonal(const PhaseMask& mask) {
    const auto d = mask.diagonal();
    return diagonal(std::span<const Complex>(d));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }
  std::span<const Complex> row(std::size_t r) const {
    return std::span<const Complex>(data_).subspan(r * cols_, cols_);
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// Basic algebra

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

inline ComplexVector matvec(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) throw ShapeError("matvec: vector length does not match columns");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc{};
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

inline ComplexMatrix scaled(const ComplexMatrix& m, Complex s) {
  ComplexMatrix out = m;
  for (auto& z : out.data()) z *= s;
  return out;
}

/** diag(d)·m */
inline ComplexMatrix scale_rows(std::span<const Complex> d, const ComplexMatrix& m) {
  if (d.size() != m.rows()) throw ShapeError("scale_rows: length mismatch");
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= d[i];
  return out;
}

/** m·diag(d) */
inline ComplexMatrix scale_cols(const ComplexMatrix& m, std::span<const Complex> d) {
  if (d.size() != m.cols()) throw ShapeError("scale_cols: length mismatch");
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= d[j];
  return out;
}

/**
 * Permutation matrix Q with Q(map[k], k) = 1, so (Q·v)[map[k]] = v[k].
 */
inline ComplexMatrix permutation_matrix(std::span<const std::size_t> map) {
  const std::size_t n = map.size();
  ComplexMatrix q(n, n);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (map[k] >= n || seen[map[k]]) throw std::invalid_argument("permutation_matrix: not a bijection");
    seen[map[k]] = true;
    q(map[k], k) = 1.0;
  }
  return q;
}

/**
 * Q·m·Qᵀ for the permutation matrix of `map`: result(map[i], map[j]) = m(i, j).
 */
inline ComplexMatrix permute_rows_cols(const ComplexMatrix& m, std::span<const std::size_t> map) {
  if (!m.is_square() || map.size() != m.rows()) throw ShapeError("permute_rows_cols: shape mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("frobenius_distance: shape mismatch");
  }
  double acc = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t j = 0; j < da.size(); ++j) acc += std::norm(da[j] - db[j]);
  return std::sqrt(acc);
}

inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_difference: shape mismatch");
  }
  double worst = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t j = 0; j < da.size(); ++j) worst = std::max(worst, std::abs(da[j] - db[j]));
  return worst;
}

/** Max-norm of M†M − I. */
inline double unitarity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw ShapeError("unitarity_defect: matrix is not square");
  return max_abs_difference(dagger(m) * m, ComplexMatrix::identity(m.rows()));
}

inline bool is_unitary(const ComplexMatrix& m, const Tolerance& tol) {
  return unitarity_defect(m) <= tol.absolute;
}

inline bool is_diagonal(const ComplexMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

inline double vector_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

inline double vector_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("vector_distance: length mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a[j] - b[j]);
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Fixed matrices

namespace detail {
inline void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": dimension must be positive");
}
inline void require_even(std::size_t n, const char* what) {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": dimension must be even and positive");
  }
}
}  // namespace detail

/** Unitary DFT, F_jk = e^{+i2πjk/n}/√n. */
inline ComplexMatrix dft_matrix(std::size_t n) {
  detail::require_positive(n, "dft_matrix");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // reduce jk mod n first so the angle stays accurate for large n
      const auto jk = static_cast<double>((j * k) % n);
      f(j, k) = std::polar(scale, kTwoPi * jk / static_cast<double>(n));
    }
  }
  return f;
}

/** Index reversal fixing 0; F† = Π·F = F·Π. */
inline ComplexMatrix pi_matrix(std::size_t n) {
  detail::require_positive(n, "pi_matrix");
  ComplexMatrix p(n, n);
  p(0, 0) = 1.0;
  for (std::size_t k = 1; k < n; ++k) p(n - k, k) = 1.0;
  return p;
}

/** Cyclic shift C with C_{j, j+1 mod n} = 1. */
inline ComplexMatrix cyclic_shift_matrix(std::size_t n) {
  detail::require_positive(n, "cyclic_shift_matrix");
  ComplexMatrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) c(j, (j + 1) % n) = 1.0;
  return c;
}

/**
 * Cyclic shift of the top half of the channels, identity on the bottom half:
 * P_jk = 1 iff (j < n/2 and k = j+1 mod n/2) or (j >= n/2 and k = j).
 */
inline ComplexMatrix clements_perm_matrix(std::size_t n) {
  detail::require_even(n, "clements_perm_matrix");
  const std::size_t half = n / 2;
  ComplexMatrix p(n, n);
  for (std::size_t j = 0; j < half; ++j) p(j, (j + 1) % half) = 1.0;
  for (std::size_t j = half; j < n; ++j) p(j, j) = 1.0;
  return p;
}

/** (1/√2)·[[I, I], [I, −I]] with n/2 × n/2 blocks: 50-50 splitters on (j, j+n/2). */
inline ComplexMatrix block_x_matrix(std::size_t n) {
  detail::require_even(n, "block_x_matrix");
  const std::size_t half = n / 2;
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix x(n, n);
  for (std::size_t j = 0; j < half; ++j) {
    x(j, j) = s;
    x(j, j + half) = s;
    x(j + half, j) = s;
    x(j + half, j + half) = -s;
  }
  return x;
}

/** Circulant (1/√2)·[[I, −iI], [−iI, I]]; X = G·Y·G. */
inline ComplexMatrix y_matrix(std::size_t n) {
  detail::require_even(n, "y_matrix");
  const std::size_t half = n / 2;
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix y(n, n);
  for (std::size_t j = 0; j < half; ++j) {
    y(j, j) = s;
    y(j, j + half) = -kI * s;
    y(j + half, j) = -kI * s;
    y(j + half, j + half) = s;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Random unitaries

/**
 * Haar-distributed unitary, deterministic in `seed`.
 *
 * Columns of a complex Gaussian matrix are orthonormalized by modified
 * Gram-Schmidt (two passes). Gram-Schmidt produces the QR factor with a
 * positive real diagonal in R, which is the phase normalization that makes
 * the distribution Haar.
 */
inline ComplexMatrix haar_random_unitary(std::size_t n, std::uint64_t seed) {
  detail::require_positive(n, "haar_random_unitary");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));

  // column-major working copy: cols[k] is column k
  std::vector<ComplexVector> cols(n, ComplexVector(n));
  for (auto& col : cols)
    for (auto& z : col) z = Complex(normal(rng), normal(rng));

  for (std::size_t k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < k; ++q) {
        Complex proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(cols[q][i]) * cols[k][i];
        for (std::size_t i = 0; i < n; ++i) cols[k][i] -= proj * cols[q][i];
      }
    }
    const double norm = vector_norm(cols[k]);
    for (auto& z : cols[k]) z /= norm;
  }

  ComplexMatrix u(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) u(i, k) = cols[k][i];
  return u;
}

}  // namespace ftmesh
