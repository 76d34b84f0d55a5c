#include <doctest.h>

#include <cstring>

#include "stiffkit/problems.hpp"
#include "test_util.hpp"

using namespace stiffkit;
using namespace stiffkit::testing;

TEST_CASE("identity factorization solves to the identity map") {
  LUFactorization lu(RealMatrix::identity(3));
  const Vec x = lu.solve({5.0, -1.0, 2.5});
  CHECK(x[0] == 5.0);
  CHECK(x[1] == -1.0);
  CHECK(x[2] == 2.5);
}

TEST_CASE("diagonal solve") {
  RealMatrix m(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 4.0;
  LUFactorization lu(m);
  const Vec x = lu.solve({2.0, 4.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unit lower triangular forward substitution") {
  RealMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 1.0;
  const Vec x = LUFactorization(m).solve({1.0, 2.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("random 20x20 solve meets the residual oracle") {
  auto rng = make_rng(1);
  const RealMatrix m = random_well_conditioned(rng, 20);
  const Vec b = random_vec(rng, 20);
  const Vec x = LUFactorization(m).solve(b);
  Vec residual = m.apply(x);
  axpy(-1.0, b, residual);
  CHECK(norm_inf(residual) <= 1e-12 * (1.0 + norm_inf(b)));
}

TEST_CASE("shifted diffusion operator solve meets the residual oracle") {
  // (I - h a D2) is the matrix the steppers actually factor.
  const RealMatrix m = shifted_identity(d2_matrix_periodic4(16), 0.01 * 0.54);
  const Vec b(16, 3.0);
  const Vec x = LUFactorization(m).solve(b);
  Vec residual = m.apply(x);
  axpy(-1.0, b, residual);
  CHECK(norm2(residual) <= 1e-12 * norm2(b));
}

TEST_CASE("residual bound holds over random matrices") {
  auto rng = make_rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const RealMatrix m = random_well_conditioned(rng, n);
    const Vec b = random_vec(rng, n, 10.0);
    const Vec x = LUFactorization(m).solve(b);
    Vec residual = m.apply(x);
    axpy(-1.0, b, residual);
    CHECK(norm_inf(residual) <= 1e-10 * (1.0 + norm_inf(b)));
  }
}

TEST_CASE("singular matrices are reported") {
  CHECK_THROWS_AS(LUFactorization{RealMatrix(3, 3)}, SingularMatrix);
  RealMatrix rankdef(2, 2, 1.0);
  CHECK_THROWS_AS(LUFactorization{rankdef}, SingularMatrix);
}

TEST_CASE("permutation is a bijection") {
  auto rng = make_rng(3);
  const RealMatrix m = random_well_conditioned(rng, 30);
  const LUFactorization lu(m);
  std::vector<bool> seen(30, false);
  for (int p : lu.permutation()) {
    REQUIRE(p >= 0);
    REQUIRE(p < 30);
    CHECK(!seen[p]);
    seen[p] = true;
  }
}

TEST_CASE("factorization reuse is bitwise deterministic") {
  auto rng = make_rng(4);
  const RealMatrix m = random_well_conditioned(rng, 12);
  const Vec b = random_vec(rng, 12);
  const LUFactorization lu(m);
  const Vec x1 = lu.solve(b);
  const Vec x2 = lu.solve(b);
  const Vec x3 = LUFactorization(m).solve(b);
  CHECK(std::memcmp(x1.data(), x2.data(), sizeof(double) * 12) == 0);
  CHECK(std::memcmp(x1.data(), x3.data(), sizeof(double) * 12) == 0);
}

TEST_CASE("dimension mismatches are typed errors") {
  LUFactorization lu(RealMatrix::identity(3));
  CHECK_THROWS_AS(lu.solve({1.0, 2.0}), DimensionMismatch);
  RealMatrix rect(2, 3);
  CHECK_THROWS_AS(LUFactorization{rect}, DimensionMismatch);
}

TEST_CASE("complex identity solve") {
  ComplexMatrix m = ComplexMatrix::identity(2);
  const CVec x = complex_solve(m, {{0.0, 1.0}, {1.0, 0.0}});
  CHECK(std::abs(x[0] - std::complex<double>(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(x[1] - std::complex<double>(1.0, 0.0)) <= 1e-15);
}

TEST_CASE("complex scalar reciprocal") {
  ComplexMatrix m(1, 1);
  m(0, 0) = {1.0, 1.0};
  const CVec x = complex_solve(m, {{2.0, 0.0}});
  CHECK(std::abs(x[0] - std::complex<double>(1.0, -1.0)) <= 1e-14);
}

TEST_CASE("random complex 6x6 solve meets the residual oracle") {
  auto rng = make_rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(i, j) = {u(rng) + (i == j ? 6.0 : 0.0), u(rng)};
  CVec b(6);
  for (auto& v : b) v = {u(rng), u(rng)};
  const CVec x = complex_solve(m, b);
  double worst = 0;
  for (int i = 0; i < 6; ++i) {
    std::complex<double> acc = -b[i];
    for (int j = 0; j < 6; ++j) acc += m(i, j) * x[j];
    worst = std::max(worst, std::abs(acc));
  }
  CHECK(worst <= 1e-12);
}
