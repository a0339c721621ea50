#include <cmath>

#include "doctest.h"
#include "evflow/spd.hpp"
#include "oracles.hpp"

using evflow::Mat;
using evflow::Vec;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("symmetric eigensolver agrees with a Jacobi reference") {
  evflow::Rng rng(42);
  for (int rep = 0; rep < 4; ++rep) {
    int n = 8 + 7 * rep;
    Mat a = oracle::random_gaussian(n, n, rng);
    a = 0.5 * (a + a.transpose()).eval();
    evflow::EigDecomposition e = evflow::evd(a);
    Vec jv;
    Mat jw;
    oracle::jacobi_eig(a, jv, jw);
    CHECK(max_abs(e.values - jv) < 1e-10);
    for (int i = 0; i + 1 < n; ++i) CHECK(e.values(i) >= e.values(i + 1));
    CHECK(max_abs(e.vectors.transpose() * e.vectors - Mat::Identity(n, n)) <
          1e-10);
    CHECK(max_abs(a * e.vectors - e.vectors * e.values.asDiagonal()) < 1e-9);
  }
}

TEST_CASE("eigenvector sign convention puts the largest entry positive") {
  evflow::Rng rng(7);
  Mat a = oracle::random_spd(9, rng);
  evflow::EigDecomposition e = evflow::evd(a);
  for (int j = 0; j < 9; ++j) {
    int arg = 0;
    e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(e.vectors(arg, j) > 0.0);
  }
}

TEST_CASE("fractional power reproduces roots and identity cases") {
  evflow::Rng rng(11);
  Mat k = oracle::random_spd(10, rng, 0.2, 5.0);
  Mat h = evflow::fractional_power(k, 0.5);
  CHECK(max_abs(h * h - k) < 1e-10);
  CHECK(max_abs(evflow::fractional_power(k, 1.0) - k) < 1e-12);
  CHECK(max_abs(evflow::fractional_power(k, 0.0) - Mat::Identity(10, 10)) <
        1e-12);
}

TEST_CASE("geodesic endpoints, swap symmetry, congruence covariance") {
  evflow::Rng rng(3);
  for (int rep = 0; rep < 6; ++rep) {
    int n = 3 + 2 * rep;
    Mat k1 = oracle::random_spd(n, rng);
    Mat k2 = oracle::random_spd(n, rng);
    CHECK(max_abs(evflow::geodesic_point(k1, k2, 0.0) - k1) < 1e-10);
    CHECK(max_abs(evflow::geodesic_point(k1, k2, 1.0) - k2) < 1e-10);
    for (double t : {0.25, 0.5, 0.75}) {
      Mat g12 = evflow::geodesic_point(k1, k2, t);
      Mat g21 = evflow::geodesic_point(k2, k1, 1.0 - t);
      CHECK(max_abs(g12 - g21) < 1e-9);

      Mat g = oracle::random_gaussian(n, n, rng);
      g += n * Mat::Identity(n, n);  // keep it comfortably invertible
      Mat lhs = evflow::geodesic_point(g * k1 * g.transpose(),
                                       g * k2 * g.transpose(), t);
      Mat rhs = g * g12 * g.transpose();
      CHECK(max_abs(lhs - rhs) < 1e-9 * std::max(1.0, max_abs(rhs)));
    }
  }
}

TEST_CASE("geodesic midpoint equals the arithmetic-harmonic geometric mean") {
  evflow::Rng rng(5);
  for (int n : {4, 9}) {
    Mat k1 = oracle::random_spd(n, rng, 0.5, 4.0);
    Mat k2 = oracle::random_spd(n, rng, 0.5, 4.0);
    Mat mid = evflow::geodesic_point(k1, k2, 0.5);
    Mat ref = oracle::ah_geometric_mean(k1, k2);
    CHECK(max_abs(mid - ref) < 1e-9);
  }
}

TEST_CASE("commuting pair follows the eigenvalue power rule") {
  evflow::Rng rng(13);
  int n = 8;
  Mat q = oracle::random_orthogonal(n, rng);
  Vec l1(n), l2(n);
  for (int i = 0; i < n; ++i) {
    l1(i) = 0.2 + rng.uniform01();
    l2(i) = 0.2 + rng.uniform01();
  }
  Mat k1 = q * l1.asDiagonal() * q.transpose();
  Mat k2 = q * l2.asDiagonal() * q.transpose();
  for (double t : {0.2, 0.5, 0.9}) {
    Mat g = evflow::geodesic_point(k1, k2, t);
    Vec expect(n);
    for (int i = 0; i < n; ++i)
      expect(i) = std::pow(l1(i), 1.0 - t) * std::pow(l2(i), t);
    Mat ref = q * expect.asDiagonal() * q.transpose();
    CHECK(max_abs(g - ref) < 1e-10);
  }
}

TEST_CASE("geodesic equals the similarity form k1 (k1^-1 k2)^t") {
  evflow::Rng rng(17);
  int n = 7;
  Mat k1 = oracle::random_spd(n, rng, 0.3, 3.0);
  Mat k2 = oracle::random_spd(n, rng, 0.3, 3.0);
  Mat m = k1.inverse() * k2;
  Eigen::EigenSolver<Mat> es(m);
  Mat v = es.eigenvectors().real();
  Vec lam = es.eigenvalues().real();
  CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-10);
  for (double t : {0.3, 0.6}) {
    Vec lt = lam.array().pow(t);
    Mat mt = v * lt.asDiagonal() * v.inverse();
    Mat ref = k1 * mt;
    Mat g = evflow::geodesic_point(k1, k2, t);
    CHECK(max_abs(g - ref) < 1e-8);
  }
}

TEST_CASE("affine-invariant distance properties") {
  evflow::Rng rng(19);
  int n = 6;
  Mat k1 = oracle::random_spd(n, rng);
  Mat k2 = oracle::random_spd(n, rng);
  CHECK(evflow::affine_invariant_distance(k1, k1) < 1e-10);
  double d12 = evflow::affine_invariant_distance(k1, k2);
  double d21 = evflow::affine_invariant_distance(k2, k1);
  CHECK(d12 > 0.0);
  CHECK(std::abs(d12 - d21) < 1e-9 * d12);
  Mat g = oracle::random_gaussian(n, n, rng) + n * Mat::Identity(n, n);
  double dg = evflow::affine_invariant_distance(g * k1 * g.transpose(),
                                                g * k2 * g.transpose());
  CHECK(std::abs(dg - d12) < 1e-8 * d12);
}

TEST_CASE("strict mode rejects a floored spectrum, clamp mode lifts it") {
  evflow::Rng rng(23);
  int n = 6;
  Mat q = oracle::random_orthogonal(n, rng);
  Vec lam = Vec::Ones(n);
  lam(n - 1) = 0.0;
  Mat singular = q * lam.asDiagonal() * q.transpose();
  Mat other = oracle::random_spd(n, rng);
  CHECK_THROWS_AS((void)evflow::geodesic_point(singular, other, 0.5),
                  evflow::Error);
  try {
    (void)evflow::geodesic_point(singular, other, 0.5);
  } catch (const evflow::Error& e) {
    CHECK(e.code() == evflow::Err::NotPositiveDefinite);
  }
  Mat lifted = evflow::geodesic_point(singular, other, 0.5, 1e-8);
  CHECK(lifted.allFinite());
  CHECK(max_abs(lifted - lifted.transpose()) < 1e-12);
}

TEST_CASE("geodesic parameter is confined to the unit interval") {
  evflow::Rng rng(29);
  Mat k1 = oracle::random_spd(4, rng);
  Mat k2 = oracle::random_spd(4, rng);
  CHECK_THROWS_AS((void)evflow::geodesic_point(k1, k2, -0.01), evflow::Error);
  CHECK_THROWS_AS((void)evflow::geodesic_point(k1, k2, 1.01), evflow::Error);
}

TEST_CASE("rank truncation keeps an orthonormal range and an SPD core") {
  evflow::Rng rng(31);
  int n = 12, p = 4;
  Mat k = oracle::random_spd(n, rng);
  evflow::SpsdKernel s = evflow::truncate_to_rank(k, p);
  CHECK(s.n() == n);
  CHECK(s.rank() == p);
  CHECK(max_abs(s.U.transpose() * s.U - Mat::Identity(p, p)) < 1e-12);
  evflow::EigDecomposition core = evflow::evd(s.core);
  CHECK(core.values.minCoeff() > 0.0);
  // Best rank-p approximation: residual spectral norm equals eigenvalue p+1.
  evflow::EigDecomposition full = evflow::evd(k);
  Mat resid = k - s.to_dense();
  evflow::EigDecomposition re = evflow::evd(0.5 * (resid + resid.transpose()));
  CHECK(std::abs(re.values(0) - full.values(p)) < 1e-9);
  CHECK_THROWS_AS((void)evflow::truncate_to_rank(k, n + 1), evflow::Error);
}

TEST_CASE("fixed-rank geodesic endpoints and rank preservation") {
  evflow::Rng rng(37);
  int n = 15, p = 5;
  evflow::SpsdKernel a = evflow::truncate_to_rank(oracle::random_spd(n, rng), p);
  evflow::SpsdKernel b = evflow::truncate_to_rank(oracle::random_spd(n, rng), p);
  CHECK(max_abs(evflow::spsd_geodesic_point(a, b, 0.0).to_dense() -
                a.to_dense()) < 1e-8);
  CHECK(max_abs(evflow::spsd_geodesic_point(a, b, 1.0).to_dense() -
                b.to_dense()) < 1e-8);
  for (double t : {0.25, 0.5, 0.75}) {
    evflow::SpsdKernel g = evflow::spsd_geodesic_point(a, b, t);
    CHECK(g.rank() == p);
    CHECK(max_abs(g.U.transpose() * g.U - Mat::Identity(p, p)) < 1e-10);
    evflow::EigDecomposition ce = evflow::evd(g.core);
    CHECK(ce.values.minCoeff() > 0.0);
  }
}

TEST_CASE("shared-range fixed-rank geodesic reduces to the core geodesic") {
  evflow::Rng rng(41);
  int n = 14, p = 4;
  Mat u = oracle::random_orthogonal(n, rng).leftCols(p);
  Mat ca = oracle::random_spd(p, rng, 0.5, 3.0);
  Mat cb = oracle::random_spd(p, rng, 0.5, 3.0);
  evflow::SpsdKernel a{u, ca};
  evflow::SpsdKernel b{u, cb};
  for (double t : {0.2, 0.5, 0.8}) {
    Mat dense = evflow::spsd_geodesic_point(a, b, t).to_dense();
    Mat ref = u * evflow::geodesic_point(ca, cb, t) * u.transpose();
    CHECK(max_abs(dense - ref) < 1e-8);
  }
}

TEST_CASE("fixed-rank geodesic rejects mismatched ranks") {
  evflow::Rng rng(43);
  evflow::SpsdKernel a = evflow::truncate_to_rank(oracle::random_spd(10, rng), 3);
  evflow::SpsdKernel b = evflow::truncate_to_rank(oracle::random_spd(10, rng), 4);
  CHECK_THROWS_AS((void)evflow::spsd_geodesic_point(a, b, 0.5), evflow::Error);
}
