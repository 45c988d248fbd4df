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

#include <catch2/catch_amalgamated.hpp>

#include "ftmesh/clements.hpp"
#include "oracles.hpp"

using namespace ftmesh;

namespace {

/** Mesh product with every splitter expanded to a full matrix. */
ComplexMatrix mesh_product(const ClementsMesh& mesh) {
  ComplexMatrix m(mesh.n, mesh.n);
  for (std::size_t j = 0; j < mesh.n; ++j) m(j, j) = std::exp(Complex(0.0, mesh.final_diagonal[j]));
  for (const auto& layer : mesh.layers) {
    for (const auto& bs : layer) {
      ComplexMatrix t = ComplexMatrix::identity(mesh.n);
      const auto b = oracle::splitter(bs.theta, bs.phi);
      t(bs.top_channel, bs.top_channel) = b[0][0];
      t(bs.top_channel, bs.top_channel + 1) = b[0][1];
      t(bs.top_channel + 1, bs.top_channel) = b[1][0];
      t(bs.top_channel + 1, bs.top_channel + 1) = b[1][1];
      m = oracle::naive_matmul(m, t);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("beamsplitter_matrix examples", "[clements]") {
  CHECK(beamsplitter_matrix(2, {0.0, 0.0, 0}) == ComplexMatrix::identity(2));
  const auto cross = beamsplitter_matrix(2, {kPi / 2, 0.0, 0});
  CHECK(std::abs(cross(0, 0)) < 1e-16);
  CHECK(cross(0, 1) == Complex(-1.0));
  CHECK(cross(1, 0) == Complex(1.0));
  CHECK(std::abs(cross(1, 1)) < 1e-16);

  const auto t = beamsplitter_matrix(4, {0.3, 1.1, 1});
  CHECK(unitarity_defect(t) < 1e-14);
  CHECK(t(0, 0) == Complex(1.0));
  CHECK(t(3, 3) == Complex(1.0));
  for (std::size_t j : {1, 2}) {
    CHECK(t(0, j) == Complex(0.0));
    CHECK(t(3, j) == Complex(0.0));
  }
  CHECK_THROWS_AS(beamsplitter_matrix(4, {0.0, 0.0, 3}), std::out_of_range);
  CHECK_THROWS_AS(beamsplitter_matrix(1, {0.0, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("embedded splitters are unitary", "[clements][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0.0, kTwoPi);
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 2 + 2 * (s % 4);
    const std::size_t top = static_cast<std::size_t>(s) % (n - 1);
    CHECK(unitarity_defect(beamsplitter_matrix(n, {a(rng), a(rng), top})) < 1e-14);
  }
}

TEST_CASE("splitter factorization through 50-50 splitters", "[clements]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(0.0, kTwoPi);
  for (int s = 0; s < 1000; ++s) {
    const double theta = a(rng), phi = a(rng);
    const auto f = bs_factorization(theta, phi);
    const auto m = evaluate_bs_factors(f);
    const auto t = oracle::splitter(theta, phi);
    double err = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) err = std::max(err, std::abs(m(i, j) - t[i][j]));
    REQUIRE(err < 1e-12);
  }
}

TEST_CASE("four-factor splitter form is not a splitter", "[clements][defect]") {
  // X·diag(e^{iθ},1)·X·diag(e^{iφ},1) has U10/U00 = U01/U11, the splitter has
  // U10/U00 = −U01/U11 (tan θ both), so the two cannot agree away from sin θ = 0.
  CHECK(oracle::dist2(oracle::four_factor_splitter(0.0, 0.0), oracle::splitter(0.0, 0.0)) < 1e-15);
  CHECK(oracle::dist2(oracle::four_factor_splitter(0.7, 0.3), oracle::splitter(0.7, 0.3)) > 0.1);
  const auto pi_case = oracle::four_factor_splitter(kPi, 0.0);
  const auto cross = oracle::mul2(oracle::x2(), oracle::mul2(oracle::diag2(-1.0, 1.0), oracle::x2()));
  CHECK(oracle::dist2(pi_case, cross) < 1e-15);
  CHECK(oracle::dist2(pi_case, oracle::splitter(kPi, 0.0)) > 0.5);
}

TEST_CASE("decompose identity", "[clements]") {
  const auto mesh = decompose_clements(ComplexMatrix::identity(4));
  for (const auto& layer : mesh.layers)
    for (const auto& bs : layer) CHECK(std::abs(std::sin(bs.theta)) < 1e-12);
  CHECK(frobenius_distance(reconstruct_mesh(mesh), ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("decompose a single splitter", "[clements]") {
  const auto u = beamsplitter_matrix(4, {0.7, 0.2, 0});
  CHECK(frobenius_distance(reconstruct_mesh(decompose_clements(u)), u) < 1e-12);
}

TEST_CASE("decompose DFT and Haar examples", "[clements]") {
  const auto f4 = dft_matrix(4);
  CHECK(frobenius_distance(reconstruct_mesh(decompose_clements(f4)), f4) < 1e-11);
  const auto h8 = haar_random_unitary(8, 3);
  CHECK(frobenius_distance(reconstruct_mesh(decompose_clements(h8)), h8) < 1e-10);
  const auto h6 = haar_random_unitary(6, 0);
  CHECK(frobenius_distance(reconstruct_mesh(decompose_clements(h6)), h6) < 1e-10);
}

TEST_CASE("identity mesh reconstructs identity", "[clements]") {
  for (std::size_t n : {2, 4, 8}) CHECK(reconstruct_mesh(ClementsMesh::identity(n)) == ComplexMatrix::identity(n));
}

TEST_CASE("decompose round trip over Haar seeds", "[clements][property]") {
  for (std::size_t n : {2, 4, 6, 8, 12, 16}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto u = haar_random_unitary(n, seed);
      const auto mesh = decompose_clements(u);
      INFO("n = " << n << ", seed = " << seed);
      REQUIRE_NOTHROW(mesh.validate());
      REQUIRE(frobenius_distance(reconstruct_mesh(mesh), u) <= 1e-10 * static_cast<double>(n));
      REQUIRE(mesh.splitter_count() == n * (n - 1) / 2);
      REQUIRE(mesh.parameter_count() == n * n);
      for (const auto& layer : mesh.layers)
        for (const auto& bs : layer) {
          REQUIRE((bs.theta >= 0.0 && bs.theta < kTwoPi));
          REQUIRE((bs.phi >= 0.0 && bs.phi < kTwoPi));
        }
    }
  }
}

TEST_CASE("reconstruction order matches the expanded product", "[clements][oracle]") {
  for (std::size_t n : {2, 4, 6}) {
    const auto mesh = decompose_clements(haar_random_unitary(n, 21));
    CHECK(max_abs_difference(reconstruct_mesh(mesh), mesh_product(mesh)) < 1e-13);
  }
}

TEST_CASE("two-mode mesh by hand", "[clements]") {
  // n = 2: U = diag(d) · T(θ, φ) with a single splitter.
  const double theta = 0.4, phi = 1.9;
  ComplexMatrix u = beamsplitter_matrix(2, {theta, phi, 0});
  u = scale_rows(ComplexVector{std::exp(Complex(0, 0.5)), std::exp(Complex(0, -1.0))}, u);
  const auto mesh = decompose_clements(u);
  REQUIRE(mesh.layers.size() == 2);
  CHECK(mesh.layers[0].empty());
  REQUIRE(mesh.layers[1].size() == 1);
  CHECK(mesh.layers[1][0].theta == Catch::Approx(theta).margin(1e-12));
  CHECK(frobenius_distance(reconstruct_mesh(mesh), u) < 1e-13);
}

TEST_CASE("degenerate pivots", "[clements]") {
  // permutation matrices force exact-zero pivots
  for (std::size_t n : {4, 6, 8}) {
    std::vector<std::size_t> reversal(n), shift(n);
    for (std::size_t k = 0; k < n; ++k) {
      reversal[k] = n - 1 - k;
      shift[k] = (k + 1) % n;
    }
    for (const auto& map : {reversal, shift}) {
      const auto p = permutation_matrix(map);
      CHECK(frobenius_distance(reconstruct_mesh(decompose_clements(p)), p) < 1e-12);
    }
  }
}

TEST_CASE("decompose rejects bad input", "[clements]") {
  CHECK_THROWS_AS(decompose_clements(ComplexMatrix(2, 3)), ShapeError);
  CHECK_THROWS_AS(decompose_clements(dft_matrix(3)), std::invalid_argument);
  CHECK_THROWS_AS(decompose_clements(ComplexMatrix::identity(1)), std::invalid_argument);
  auto bad = ComplexMatrix::identity(4);
  bad(0, 1) = 0.5;
  try {
    decompose_clements(bad);
    FAIL("expected NonUnitaryError");
  } catch (const NonUnitaryError& e) {
    CHECK(e.defect() > 0.1);
  }
  // within tolerance passes
  auto near = ComplexMatrix::identity(4);
  near(0, 0) = Complex(1.0 + 1e-12, 0.0);
  CHECK_NOTHROW(decompose_clements(near));
}

TEST_CASE("malformed mesh is rejected", "[clements]") {
  auto mesh = ClementsMesh::identity(4);
  mesh.layers[1].pop_back();
  CHECK_THROWS_AS(reconstruct_mesh(mesh), std::invalid_argument);
  mesh = ClementsMesh::identity(4);
  mesh.layers[0][0].top_channel = 0;
  CHECK_THROWS_AS(mesh.validate(), std::invalid_argument);
  mesh = ClementsMesh::identity(4);
  mesh.final_diagonal = PhaseMask(3);
  CHECK_THROWS_AS(mesh.validate(), std::invalid_argument);
}
