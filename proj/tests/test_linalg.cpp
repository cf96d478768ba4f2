#include <doctest.h>

#include <cmath>

#include "rtdd/linalg.hpp"
#include "rtdd/model.hpp"

using namespace rtdd;

namespace {

cmat low_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, std::uint64_t seed) {
  auto engine = RngStream(seed).engine();
  return complex_gaussian(rows, rank, engine) * complex_gaussian(rank, cols, engine);
}

cmat hermitian_psd(Eigen::Index n, std::uint64_t seed) {
  auto engine = RngStream(seed).engine();
  const cmat a = complex_gaussian(n, n, engine);
  return a * a.adjoint();
}

}  // namespace

TEST_CASE("numerical rank matches the constructed rank") {
  for (Eigen::Index r = 0; r <= 5; ++r) CHECK(numerical_rank(low_rank(5, 7, r, 40 + r)) == r);
  CHECK(numerical_rank(cmat(0, 3)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);
}

TEST_CASE("pseudo-inverse satisfies the Moore-Penrose identities") {
  for (auto [r, c] : {std::pair{3, 5}, std::pair{5, 3}, std::pair{4, 4}}) {
    auto engine = RngStream(static_cast<std::uint64_t>(r * 10 + c)).engine();
    const cmat a = complex_gaussian(r, c, engine);
    const cmat p = pseudo_inverse(a, 1e12, "test");
    CHECK((a * p * a - a).norm() < 1e-10);
    CHECK((p * a * p - p).norm() < 1e-10);
    CHECK(((a * p).adjoint() - a * p).norm() < 1e-10);
    CHECK(((p * a).adjoint() - p * a).norm() < 1e-10);
  }
}

TEST_CASE("pseudo-inverse of a rank-deficient matrix reports the failing system") {
  const cmat a = low_rank(4, 4, 2, 9);
  try {
    (void)pseudo_inverse(a, 1e12, "uplink receive filter");
    FAIL("expected SingularSystemError");
  } catch (const SingularSystemError& e) {
    CHECK(std::string(e.what()).find("uplink receive filter") != std::string::npos);
  }
  CHECK(pseudo_inverse(cmat(0, 3), 1e12, "empty").rows() == 3);
}

TEST_CASE("smallest eigenvectors span the bottom of the spectrum") {
  const cmat h = hermitian_psd(6, 5);
  const Eigen::SelfAdjointEigenSolver<cmat> full(h);
  for (Eigen::Index d = 0; d <= 6; ++d) {
    const cmat v = smallest_eigenvectors(h, d);
    REQUIRE(v.cols() == d);
    CHECK((v.adjoint() * v - cmat::Identity(d, d)).norm() < 1e-12);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double rayleigh = (v.col(j).adjoint() * h * v.col(j)).real()(0);
      CHECK(rayleigh == doctest::Approx(full.eigenvalues()(j)).epsilon(1e-9));
      // never above any eigenvalue that was left out
      if (d < 6) CHECK(rayleigh <= full.eigenvalues()(d) + 1e-9);
      // phase convention: first non-negligible entry real and positive
      Eigen::Index i = 0;
      while (std::abs(v(i, j)) <= 1e-12) ++i;
      CHECK(v(i, j).real() > 0);
      CHECK(std::abs(v(i, j).imag()) < 1e-12);
    }
  }
}

TEST_CASE("smallest eigenvectors rejects non-Hermitian input and bad counts") {
  cmat a = hermitian_psd(3, 1);
  a(0, 1) += cplx(1.0, 0.0);
  CHECK_THROWS_AS(smallest_eigenvectors(a, 1), std::invalid_argument);
  CHECK_THROWS_AS(smallest_eigenvectors(hermitian_psd(3, 1), 4), std::invalid_argument);
}

TEST_CASE("hermitian logdet agrees with the log of the determinant") {
  const cmat h = hermitian_psd(5, 8) + cmat::Identity(5, 5);
  CHECK(hermitian_logdet(h) == doctest::Approx(std::log(h.determinant().real())).epsilon(1e-10));
  CHECK_THROWS_AS(hermitian_logdet(-cmat::Identity(2, 2)), NumericalFailure);
}

TEST_CASE("column normalization") {
  cmat a(2, 2);
  a << cplx(2, 0), cplx(0, 0), cplx(0, 0), cplx(0, 3);
  const cmat n = normalize_columns(a);
  CHECK(n.col(0).norm() == doctest::Approx(1.0));
  CHECK(n.col(1).norm() == doctest::Approx(1.0));
  CHECK(n(1, 1) == cplx(0, 1));
  CHECK((normalize_columns(n) - n).norm() < 1e-15);
  CHECK_THROWS_AS(normalize_columns(cmat::Zero(2, 1)), std::invalid_argument);
}

TEST_CASE("random orthonormal bases are orthonormal") {
  auto engine = RngStream(4).engine();
  for (Eigen::Index d = 0; d <= 5; ++d) {
    const cmat q = random_orthonormal(5, d, engine);
    CHECK((q.adjoint() * q - cmat::Identity(d, d)).norm() < 1e-12);
  }
}
