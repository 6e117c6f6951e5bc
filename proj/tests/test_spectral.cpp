#include <doctest.h>

#include <cmath>

#include "conelap/spectral.hpp"
#include "support.hpp"

using namespace conelap;

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("eigh on pinned small matrices") {
  SUBCASE("1x1 zero") {
    Eigen::MatrixXd m(1, 1);
    m << 0.0;
    const auto d = eigh(m);
    CHECK(d.eigenvalues[0] == doctest::Approx(0.0).epsilon(0.0));
    CHECK(d.eigenvectors(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("2x2 swap") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    const auto d = eigh(m);
    CHECK(d.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("rank-one constant matrix") {
    // (2/sqrt(3)) * ones * ones^T: eigenvalues {0, 0, 2 sqrt(3)}.
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, 2.0 / kSqrt3);
    const auto d = eigh(m);
    CHECK(std::abs(d.eigenvalues[0]) < 1e-14);
    CHECK(std::abs(d.eigenvalues[1]) < 1e-14);
    CHECK(d.eigenvalues[2] == doctest::Approx(2.0 * kSqrt3).epsilon(1e-14));
  }
}

TEST_CASE("signature counts with the default band") {
  SUBCASE("zero matrix") {
    const auto s = signature(Eigen::MatrixXd::Zero(2, 2).eval());
    CHECK(s.positive == 0);
    CHECK(s.zero == 2);
    CHECK(s.negative == 0);
  }
  SUBCASE("rank-one constant matrix") {
    const auto s =
        signature(Eigen::MatrixXd::Constant(3, 3, 2.0 / kSqrt3).eval());
    CHECK(s.positive == 1);
    CHECK(s.zero == 2);
    CHECK(s.negative == 0);
    CHECK(s.tolerance == doctest::Approx(1e-9 * 2.0 * kSqrt3));
  }
  SUBCASE("positive definite circulant") {
    Eigen::MatrixXd m(3, 3);
    m << 2, kSqrt2, kSqrt2, kSqrt2, 2, kSqrt2, kSqrt2, kSqrt2, 2;
    // Circulant eigenvalue formula: 2 + 2 sqrt(2) cos(2 pi k / 3).
    const auto d = eigh(m);
    CHECK(d.eigenvalues[0] == doctest::Approx(2.0 - kSqrt2).epsilon(1e-13));
    CHECK(d.eigenvalues[1] == doctest::Approx(2.0 - kSqrt2).epsilon(1e-13));
    CHECK(d.eigenvalues[2] == doctest::Approx(2.0 + 2.0 * kSqrt2).epsilon(1e-13));
    const auto s = signature(m);
    CHECK(s.positive == 3);
    CHECK(s.zero == 0);
    CHECK(s.negative == 0);
  }
}

TEST_CASE("kernel_basis extraction") {
  SUBCASE("identity has no kernel") {
    CHECK(kernel_basis(Eigen::MatrixXd::Identity(3, 3).eval()).cols() == 0);
  }
  SUBCASE("rank-one constant matrix has the sum-zero plane") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, 2.0 / kSqrt3);
    const auto basis = kernel_basis(m);
    REQUIRE(basis.cols() == 2);
    CHECK((basis.transpose() * basis - Eigen::MatrixXd::Identity(2, 2)).norm() <
          1e-12);
    CHECK((m * basis).norm() < 1e-12);
    CHECK(std::abs(basis.col(0).sum()) < 1e-12);
    CHECK(std::abs(basis.col(1).sum()) < 1e-12);
  }
  SUBCASE("two-point chain kernel is the constant vector") {
    Eigen::MatrixXd m(2, 2);
    const double c = 2.0 / kSqrt3;
    m << -c, c, c, -c;
    const auto basis = kernel_basis(m);
    REQUIRE(basis.cols() == 1);
    CHECK(basis(0, 0) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-13));
    CHECK(basis(1, 0) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-13));
  }
}

TEST_CASE("geneigh on pinned matrices") {
  SUBCASE("identity pair") {
    const auto d = geneigh(Eigen::MatrixXd::Identity(3, 3).eval(),
                           Eigen::VectorXd::Ones(3).eval());
    for (int i = 0; i < 3; ++i)
      CHECK(d.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("diagonal pair") {
    Eigen::MatrixXd m = Eigen::Vector2d(2, 8).asDiagonal();
    const auto d = geneigh(m, Eigen::Vector2d(1, 4).eval());
    CHECK(d.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("rank-one constant matrix against uniform weights") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, 2.0 / kSqrt3);
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 2.0 * kSqrt3);
    const auto d = geneigh(m, w);
    CHECK(std::abs(d.eigenvalues[0]) < 1e-14);
    CHECK(std::abs(d.eigenvalues[1]) < 1e-14);
    CHECK(d.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-13));
    // Eigenvectors come back W-orthonormal.
    const Eigen::MatrixXd gram =
        d.eigenvectors.transpose() * w.asDiagonal() * d.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("matrix overload requires a diagonal W") {
    Eigen::MatrixXd w(2, 2);
    w << 1, 0.5, 0.5, 1;
    CHECK_THROWS_AS(geneigh(Eigen::MatrixXd::Identity(2, 2).eval(), w),
                    std::invalid_argument);
  }
}

TEST_CASE("input validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(eigh(bad), std::invalid_argument);
  Eigen::MatrixXd nan_mat = Eigen::MatrixXd::Zero(2, 2);
  nan_mat(0, 0) = std::nan("");
  nan_mat(1, 1) = std::nan("");
  CHECK_THROWS_AS(eigh(nan_mat), std::invalid_argument);
  CHECK_THROWS_AS(geneigh(Eigen::MatrixXd::Identity(2, 2).eval(),
                          Eigen::Vector2d(1, 0).eval()),
                  std::invalid_argument);
  CHECK_THROWS_AS(geneigh(Eigen::MatrixXd::Identity(2, 2).eval(),
                          Eigen::Vector2d(1, -1).eval()),
                  std::invalid_argument);
}

TEST_CASE("random-matrix invariants") {
  auto rng = testing::make_rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 100);
    const Eigen::MatrixXd m = testing::random_symmetric(rng, n);
    const auto d = eigh(m);

    // Reconstruction.
    const Eigen::MatrixXd rebuilt = d.eigenvectors *
                                    d.eigenvalues.asDiagonal() *
                                    d.eigenvectors.transpose();
    CHECK((rebuilt - m).norm() <= 1e-9 * std::max(1.0, m.norm()));

    // Orthonormality and residuals.
    const Eigen::MatrixXd gram = d.eigenvectors.transpose() * d.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index k = 0; k < n; k += std::max<Eigen::Index>(1, n / 7)) {
      const double resid =
          (m * d.eigenvectors.col(k) - d.eigenvalues[k] * d.eigenvectors.col(k))
              .norm();
      CHECK(resid <= 1e-10 * std::max(1.0, d.spectral_norm()));
    }

    // Counts always add up.
    const auto s = signature(d);
    CHECK(s.total() == n);

    // geneigh with unit weights agrees with eigh.
    const auto g = geneigh(m, Eigen::VectorXd::Ones(n).eval());
    CHECK((g.eigenvalues - d.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);

    // Kernel residual bound.
    const double tol = default_zero_tolerance(d);
    const Eigen::MatrixXd basis = kernel_basis(m, tol);
    for (Eigen::Index k = 0; k < basis.cols(); ++k)
      CHECK((m * basis.col(k)).norm() <= 10 * tol);
  }
}

TEST_CASE("deterministic output and sign convention") {
  auto rng = testing::make_rng(7);
  const Eigen::MatrixXd m = testing::random_symmetric(rng, 12);
  const auto a = eigh(m);
  const auto b = eigh(m);
  CHECK((a.eigenvalues - b.eigenvalues).norm() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
  for (Eigen::Index k = 0; k < a.eigenvectors.cols(); ++k) {
    const auto col = a.eigenvectors.col(k);
    const double big = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > 1e-12 * big) {
        CHECK(col[i] > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("hyperplane basis and projected quadratic form") {
  auto rng = testing::make_rng(99);
  const Eigen::VectorXd w = testing::random_vector(rng, 9);
  const Eigen::MatrixXd basis = hyperplane_basis(w);
  REQUIRE(basis.cols() == 8);
  CHECK((basis.transpose() * w).cwiseAbs().maxCoeff() < 1e-12 * w.norm());
  CHECK((basis.transpose() * basis - Eigen::MatrixXd::Identity(8, 8)).norm() <
        1e-12);

  const Eigen::MatrixXd m = testing::random_symmetric(rng, 9);
  const Eigen::MatrixXd r = project_quadratic(m, basis);
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i) CHECK(r(i, j) == r(j, i));
  CHECK((r - basis.transpose() * m * basis).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar template instantiates beyond double") {
  MatrixX<long double> m(2, 2);
  m << 0.0L, 2.0L, 2.0L, 0.0L;
  const auto d = eigh(m);
  CHECK(std::abs(d.eigenvalues[0] + 2.0L) < 1e-15L);
  CHECK(std::abs(d.eigenvalues[1] - 2.0L) < 1e-15L);
}
