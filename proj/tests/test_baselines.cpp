#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "evflow/baselines.hpp"
#include "evflow/spd.hpp"
#include "evflow/synthetic.hpp"
#include "oracles.hpp"

using evflow::Mat;
using evflow::Vec;

TEST_CASE("linear interpolation endpoints, midpoint, and guards") {
  evflow::Rng rng(501);
  Mat k1 = oracle::random_spd(7, rng);
  Mat k2 = oracle::random_spd(7, rng);
  CHECK((evflow::linear_interpolation_point(k1, k2, 0.0) - k1)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((evflow::linear_interpolation_point(k1, k2, 1.0) - k2)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  Mat mid = evflow::linear_interpolation_point(k1, k2, 0.5);
  CHECK((mid - 0.5 * (k1 + k2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(
      (void)evflow::linear_interpolation_point(k1, k2, 1.5), evflow::Error);
  Mat k3 = oracle::random_spd(5, rng);
  CHECK_THROWS_AS(
      (void)evflow::linear_interpolation_point(k1, k3, 0.5), evflow::Error);
}

TEST_CASE("alternating-diffusion kernel reproduced step by step") {
  evflow::Rng rng(502);
  Mat x1 = oracle::random_gaussian(12, 2, rng);
  Mat x2 = oracle::random_gaussian(12, 2, rng);
  evflow::KernelBundle b1 = evflow::build_kernel(x1, 0.8);
  evflow::KernelBundle b2 = evflow::build_kernel(x2, 0.8);
  evflow::KernelBundle out =
      evflow::alternating_diffusion_kernel(b1, b2, 2, 0.5);

  // Independent reconstruction with explicit loops.
  Mat ad = b2.a.transpose() * b1.a.transpose();
  Mat power = ad * ad;
  Mat w(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      double d2 = (power.col(i) - power.col(j)).squaredNorm();
      w(i, j) = std::exp(-d2 / 0.5);
    }
  Vec dbar = w.rowwise().sum();
  Mat kbar = dbar.cwiseInverse().asDiagonal() * w *
             dbar.cwiseInverse().asDiagonal();
  Vec d = kbar.rowwise().sum();
  Vec inv_sqrt = d.cwiseSqrt().cwiseInverse();
  Mat k_expect = inv_sqrt.asDiagonal() * kbar * inv_sqrt.asDiagonal();
  CHECK((out.k - k_expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.epsilon == 0.5);

  // Leading eigenvalue of the normalized kernel is exactly the stationary 1.
  evflow::EigDecomposition e = evflow::eig_sym(out.k);
  CHECK(e.values(0) == doctest::Approx(1.0).epsilon(1e-12));

  evflow::KernelBundle b3 = evflow::build_kernel(oracle::random_gaussian(9, 2, rng), 0.8);
  CHECK_THROWS_AS(
      (void)evflow::alternating_diffusion_kernel(b1, b3, 1, 0.5),
      evflow::Error);
  CHECK_THROWS_AS(
      (void)evflow::alternating_diffusion_kernel(b1, b2, 0, 0.5),
      evflow::Error);
}

TEST_CASE("product of fractional powers equals the geodesic when kernels commute") {
  evflow::Rng rng(503);
  Mat q = oracle::random_orthogonal(30, rng);
  Vec a(30), b(30);
  for (int i = 0; i < 30; ++i) {
    a(i) = std::exp(rng.uniform(-1.5, 0.5));
    b(i) = std::exp(rng.uniform(-1.5, 0.5));
  }
  Mat k1 = q * a.asDiagonal() * q.transpose();
  Mat k2 = q * b.asDiagonal() * q.transpose();

  int s1 = 3, s2 = 2;
  double t = double(s2) / double(s1 + s2);
  Mat k1t = evflow::fractional_power(k1, 1.0 / double(s1 + s2));
  Mat k2t = evflow::fractional_power(k2, 1.0 / double(s1 + s2));
  Mat prod = Mat::Identity(30, 30);
  for (int s = 0; s < s1; ++s) prod = prod * k1t;
  for (int s = 0; s < s2; ++s) prod = prod * k2t;
  Mat geo = evflow::geodesic_point(k1, k2, t);
  CHECK((prod - geo).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("smoothness score: completeness, monotonicity, eigenvector edges") {
  evflow::Rng rng(504);
  Mat k = oracle::random_spd(15, rng);
  evflow::EigDecomposition e = evflow::eig_sym(k);
  Vec x = oracle::random_gaussian(15, 1, rng).col(0);

  CHECK(evflow::smoothness_score(e.vectors, x) ==
        doctest::Approx(1.0).epsilon(1e-12));
  double prev = 0.0;
  for (int ell = 1; ell <= 15; ++ell) {
    double s = evflow::smoothness_score(e.vectors.leftCols(ell), x);
    CHECK(s >= prev - 1e-14);
    CHECK(s <= 1.0 + 1e-14);
    prev = s;
  }
  // An eigenvector inside the kept block scores 1, outside scores 0.
  CHECK(evflow::smoothness_score(e.vectors.leftCols(4), Vec(e.vectors.col(2))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evflow::smoothness_score(e.vectors.leftCols(4), Vec(e.vectors.col(9))) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK_THROWS_AS(
      (void)evflow::smoothness_score(e.vectors, Vec(Vec::Zero(15))),
      evflow::Error);
}

TEST_CASE("diffusion distances match an explicit operator power") {
  evflow::Rng rng(505);
  Mat x = oracle::random_gaussian(14, 2, rng);
  evflow::KernelBundle b = evflow::build_kernel(x, 1.0);
  std::vector<std::pair<int, int>> pairs{{0, 1}, {2, 13}, {5, 5}};
  Vec got = evflow::kernel_diffusion_distances(b.k, 3, pairs);

  Vec sums = b.k.rowwise().sum();
  Mat a = sums.cwiseInverse().asDiagonal() * b.k;
  Mat at = a * a * a;
  CHECK(got(0) == doctest::Approx((at.row(0) - at.row(1)).norm()).epsilon(1e-12));
  CHECK(got(1) == doctest::Approx((at.row(2) - at.row(13)).norm()).epsilon(1e-12));
  CHECK(got(2) == 0.0);

  CHECK_THROWS_AS(
      (void)evflow::kernel_diffusion_distances(b.k, 0, pairs), evflow::Error);
  CHECK_THROWS_AS((void)evflow::kernel_diffusion_distances(
                      b.k, 1, {{0, 14}}),
                  evflow::Error);
  Mat zero_row = b.k;
  zero_row.row(4).setZero();
  zero_row.col(4).setZero();
  CHECK_THROWS_AS((void)evflow::kernel_diffusion_distances(
                      zero_row, 1, pairs),
                  evflow::Error);
}

TEST_CASE("polynomial correspondence recovers planted coefficients") {
  evflow::Rng rng(506);
  int n = 60;
  Vec dk(n);
  for (int i = 0; i < n; ++i) dk(i) = rng.uniform(0.1, 2.0);
  double scale = dk.cwiseAbs().maxCoeff();
  Vec planted(4);
  planted << 0.3, -1.2, 0.8, 2.0;
  Vec dl(n);
  for (int i = 0; i < n; ++i) {
    double u = dk(i) / scale;
    dl(i) = planted(0) + planted(1) * u + planted(2) * u * u +
            planted(3) * u * u * u;
  }
  evflow::PolyfitResult fit = evflow::polyfit_correspondence(dk, dl, 3);
  CHECK(fit.scale == scale);
  CHECK((fit.coeffs - planted).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(fit.residual < 1e-18);
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      (void)evflow::polyfit_correspondence(dk, dl, 0), evflow::Error);
  CHECK_THROWS_AS(
      (void)evflow::polyfit_correspondence(dk, dl, 6), evflow::Error);
  Vec constant = Vec::Constant(n, 0.7);
  CHECK_THROWS_AS(
      (void)evflow::polyfit_correspondence(constant, dl, 2), evflow::Error);
  CHECK_THROWS_AS(
      (void)evflow::polyfit_correspondence(dk.head(3), dl.head(3), 3),
      evflow::Error);
}

TEST_CASE("alternating diffusion keeps the common coordinate on flat views") {
  int n = 300;
  evflow::SynthPair p = evflow::gen_flat_2d(n, {2.0, 2.0, 8.0, 4.0}, 23);
  evflow::KernelBundle b1 = evflow::build_kernel(p.s1, 0.2);
  evflow::KernelBundle b2 = evflow::build_kernel(p.s2, 0.2);
  evflow::KernelBundle ad = evflow::alternating_diffusion_kernel(b1, b2);
  Mat psi = evflow::diffusion_map_embedding(ad, 1.0, 1);
  double corr = std::abs(oracle::pearson(psi.col(0), p.latent.x));
  CHECK(corr >= 0.8);
}
