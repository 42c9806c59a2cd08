#include "ral/entropy.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ral;
using namespace ral::entropy;
using matspace::kron;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("AlphaParam validates its range and carries the regime") {
  CHECK(AlphaParam(2.0).main_regime());
  CHECK_FALSE(AlphaParam(0.5).main_regime());
  CHECK_THROWS_AS(AlphaParam(1.0), precondition_error);
  CHECK_THROWS_AS(AlphaParam(0.0), precondition_error);
  CHECK_THROWS_AS(AlphaParam(-2.0), precondition_error);
}

TEST_CASE("DensityMatrix rejects malformed input") {
  CHECK_NOTHROW(DensityMatrix(diag2(0.8, 0.2)));
  Matrix skew = diag2(0.5, 0.5);
  skew(0, 1) = Complex(0.0, 1e-3);
  CHECK_THROWS_AS(DensityMatrix{skew}, precondition_error);
  CHECK_THROWS_AS(DensityMatrix(diag2(0.8, 0.3)), precondition_error);
  CHECK_THROWS_AS(DensityMatrix(diag2(1.1, -0.1)), precondition_error);
}

TEST_CASE("renyi_entropy pins") {
  AlphaParam a2(2.0);
  CHECK(renyi_entropy(DensityMatrix(diag2(0.5, 0.5)), a2) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(renyi_entropy(DensityMatrix(diag2(1.0, 0.0)), a2)) <= 1e-12);
  CHECK(renyi_entropy(DensityMatrix(diag2(0.8, 0.2)), a2) ==
        doctest::Approx(-std::log(0.68)).epsilon(1e-12));
}

TEST_CASE("q_alpha and e_alpha pins") {
  AlphaParam a2(2.0);
  CHECK(q_alpha(diag2(1.0, 0.0), a2) == doctest::Approx(1.0).epsilon(1e-12));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(q_alpha(diag2(r, r), a2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(e_alpha(diag2(1.0, 0.0), a2)) <= 1e-12);

  Matrix ent = Matrix::Identity(3, 3) / std::sqrt(3.0);
  CHECK(e_alpha(ent, a2) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("q_alpha is multiplicative and e_alpha additive under tensoring") {
  std::mt19937_64 rng(51);
  for (double av : {1.5, 2.0, 3.0}) {
    AlphaParam alpha(av);
    Matrix x = testutil::unit(testutil::random_matrix(2, 3, rng));
    Matrix y = testutil::unit(testutil::random_matrix(3, 2, rng));
    CHECK(std::abs(q_alpha(kron(x, y), alpha) -
                   q_alpha(x, alpha) * q_alpha(y, alpha)) <= 1e-10);
    CHECK(std::abs(e_alpha(kron(x, y), alpha) - e_alpha(x, alpha) -
                   e_alpha(y, alpha)) <= 1e-10);
  }
}

TEST_CASE("e_alpha is unitarily invariant") {
  std::mt19937_64 rng(52);
  AlphaParam alpha(2.5);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix x = testutil::unit(testutil::random_matrix(3, 4, rng));
    Matrix u = testutil::random_unitary(3, rng);
    Matrix v = testutil::random_unitary(4, rng);
    CHECK(std::abs(e_alpha(u * x * v, alpha) - e_alpha(x, alpha)) <= 1e-10);
  }
}

TEST_CASE("q_alpha decreases with entanglement on the Schmidt-angle family") {
  AlphaParam alpha(2.0);
  double prev = 2.0;
  for (double theta = 0.05; theta < M_PI / 4.0; theta += 0.05) {
    const double q =
        q_alpha(diag2(std::cos(theta), std::sin(theta)), alpha);
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("channel_to_subspace handles the standard small channels") {
  SUBCASE("identity channel") {
    Channel id({Matrix::Identity(2, 2)});
    auto k = channel_to_subspace(id);
    CHECK(k.rows == 2);
    CHECK(k.cols == 1);
    REQUIRE(k.dim() == 2);
    AlphaParam alpha(2.0);
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::Vector2cd c;
      c << testutil::cgauss(rng), testutil::cgauss(rng);
      c.normalize();
      Matrix x = c(0) * k.basis[0] + c(1) * k.basis[1];
      CHECK(std::abs(e_alpha(x, alpha)) <= 1e-10);
    }
  }
  SUBCASE("dephasing channel") {
    Channel deph({diag2(1.0, 0.0), diag2(0.0, 1.0)});
    auto k = channel_to_subspace(deph);
    REQUIRE(k.dim() == 2);
    for (const auto& b : k.basis) {
      CHECK(std::abs(b(0, 1)) <= 1e-12);
      CHECK(std::abs(b(1, 0)) <= 1e-12);
    }
  }
  SUBCASE("unitary channel") {
    std::mt19937_64 rng(54);
    Channel un({testutil::random_unitary(2, rng)});
    auto k = channel_to_subspace(un);
    AlphaParam alpha(3.0);
    for (const auto& b : k.basis) CHECK(std::abs(e_alpha(b, alpha)) <= 1e-10);
  }
  SUBCASE("trace preservation enforced") {
    CHECK_THROWS_AS(Channel({diag2(1.0, 0.5)}), precondition_error);
  }
}

TEST_CASE("subspace members reproduce channel outputs") {
  std::mt19937_64 rng(55);
  AlphaParam alpha(2.0);
  auto kraus = testutil::random_kraus(3, 3, 2, rng);
  Channel ch(kraus);
  auto k = channel_to_subspace(ch);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXcd psi(3);
    for (Index i = 0; i < 3; ++i) psi(i) = testutil::cgauss(rng);
    psi.normalize();
    Matrix x = Matrix::Zero(k.rows, k.cols);
    for (Index j = 0; j < 3; ++j) x += psi(j) * k.basis[j];
    DensityMatrix out(testutil::apply_channel(kraus, psi * psi.adjoint()));
    CHECK(std::abs(renyi_entropy(out, alpha) - e_alpha(x, alpha)) <= 1e-9);
  }
}

TEST_CASE("mixed inputs cannot beat the best pure input") {
  std::mt19937_64 rng(56);
  for (double av : {1.5, 2.0, 3.0}) {
    AlphaParam alpha(av);
    auto kraus = testutil::random_kraus(2, 3, 2, rng);
    RealVector p = testutil::random_spectrum(3, rng);
    Matrix rho = Matrix::Zero(2, 2);
    double best_pure = 1e300;
    for (Index j = 0; j < 3; ++j) {
      Eigen::VectorXcd psi(2);
      psi << testutil::cgauss(rng), testutil::cgauss(rng);
      psi.normalize();
      rho += p(j) * (psi * psi.adjoint());
      DensityMatrix out(testutil::apply_channel(kraus, psi * psi.adjoint()));
      best_pure = std::min(best_pure, renyi_entropy(out, alpha));
    }
    DensityMatrix mixed_out(testutil::apply_channel(kraus, rho));
    CHECK(renyi_entropy(mixed_out, alpha) >= best_pure - 1e-10);
  }
}

TEST_CASE("upb_dimension_bound pins") {
  CHECK(upb_dimension_bound(2, 2) == 1);
  CHECK(upb_dimension_bound(3, 3) == 4);
  CHECK(upb_dimension_bound(1, 7) == 0);
  CHECK_THROWS_AS(upb_dimension_bound(0, 3), precondition_error);
}
