#include "evflow/synthetic.hpp"

#include <cmath>

#include "evflow/rng.hpp"
#include "evflow/spd.hpp"

namespace evflow {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

LatentTriple gen_latents(int n, uint64_t seed, double lo, double hi) {
  require(n >= 1, Err::OutOfRange, "sample count must be positive");
  require(hi > lo, Err::OutOfRange, "latent interval is empty");
  LatentTriple t;
  t.x = Vec(n);
  t.y = Vec(n);
  t.z = Vec(n);
  Rng rx(seed, 0), ry(seed, 1), rz(seed, 2);
  for (int i = 0; i < n; ++i) {
    t.x(i) = rx.uniform(lo, hi);
    t.y(i) = ry.uniform(lo, hi);
    t.z(i) = rz.uniform(lo, hi);
  }
  return t;
}

SynthPair gen_flat_2d(int n, const FlatScales& scales, uint64_t seed) {
  require(scales.lx1 > 0 && scales.ly1 > 0 && scales.lx2 > 0 && scales.lz2 > 0,
          Err::NonPositiveScale, "strip lengths must be positive");
  SynthPair p;
  p.latent = gen_latents(n, seed, -0.5, 0.5);
  p.s1 = Mat(n, 2);
  p.s2 = Mat(n, 2);
  p.s1.col(0) = scales.lx1 * p.latent.x;
  p.s1.col(1) = scales.ly1 * p.latent.y;
  p.s2.col(0) = scales.lx2 * p.latent.x;
  p.s2.col(1) = scales.lz2 * p.latent.z;
  return p;
}

double analytic_flat_eigenvalue(double lx, double ly, int kx, int ky) {
  require(lx > 0 && ly > 0, Err::NonPositiveScale,
          "strip lengths must be positive");
  require(kx >= 0 && ky >= 0, Err::OutOfRange,
          "mode counts must be non-negative");
  double a = kx * kPi / lx;
  double b = ky * kPi / ly;
  return a * a + b * b;
}

double continuous_to_discrete_eig(double lambda, double epsilon) {
  require(epsilon > 0.0, Err::NonPositiveScale, "bandwidth must be positive");
  require(lambda >= 0.0, Err::OutOfRange,
          "Laplacian eigenvalue must be non-negative");
  return std::exp(-epsilon * epsilon * lambda / 4.0);
}

SynthPair gen_torus(int n, const TorusRadii& radii, bool common_angle_poloidal,
                    uint64_t seed) {
  require(radii.R1 > 0 && radii.r1 > 0 && radii.R2 > 0 && radii.r2 > 0,
          Err::NonPositiveScale, "torus radii must be positive");
  require(radii.r1 < radii.R1 && radii.r2 < radii.R2, Err::DomainError,
          "tube radius must be smaller than the ring radius");
  SynthPair p;
  p.latent = gen_latents(n, seed, 0.0, 2.0 * kPi);
  p.s1 = Mat(n, 3);
  p.s2 = Mat(n, 3);
  auto embed = [&](double R, double r, double pol, double tor, int i, Mat& s) {
    double ring = R + r * std::cos(pol);
    s(i, 0) = ring * std::cos(tor);
    s(i, 1) = ring * std::sin(tor);
    s(i, 2) = r * std::sin(pol);
  };
  for (int i = 0; i < n; ++i) {
    double x = p.latent.x(i), y = p.latent.y(i), z = p.latent.z(i);
    if (common_angle_poloidal) {
      embed(radii.R1, radii.r1, x, y, i, p.s1);
      embed(radii.R2, radii.r2, x, z, i, p.s2);
    } else {
      embed(radii.R1, radii.r1, y, x, i, p.s1);
      embed(radii.R2, radii.r2, z, x, i, p.s2);
    }
  }
  return p;
}

double analytic_torus_eigenvalue(double R, double r, int j_pol, int j_tor) {
  require(R > 0 && r > 0, Err::NonPositiveScale, "radii must be positive");
  require(j_pol >= 0 && j_tor >= 0, Err::OutOfRange,
          "wave numbers must be non-negative");
  double a = j_pol / r;
  double b = j_tor / R;
  return a * a + b * b;
}

Mat nonlinear_measurement(const Vec& x, const Vec& z, int which, double sa,
                          double sb) {
  require(x.size() == z.size(), Err::DimensionMismatch,
          "latent coordinate vectors differ in length");
  require(which == 1 || which == 2, Err::OutOfRange,
          "measurement map selector must be 1 or 2");
  require(sa > 0 && sb > 0, Err::NonPositiveScale,
          "measurement scales must be positive");
  const Eigen::Index n = x.size();
  Mat s(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (which == 1) {
      require(z(i) >= 0.0, Err::DomainError,
              "latent under square root is negative");
      s(i, 0) = sa * x(i);
      s(i, 1) = sb * (1.0 - std::sqrt(z(i)));
    } else {
      require(x(i) >= 0.0, Err::DomainError,
              "latent under square root is negative");
      s(i, 0) = sa * (1.0 - std::sqrt(x(i)));
      s(i, 1) = sb * z(i);
    }
  }
  return s;
}

Mat convex_hull_point(const Mat& k1, const Mat& k2, const Mat& k3, double t1,
                      double t2, double eig_clamp_rel) {
  Mat mid = geodesic_point(k1, k2, t1, eig_clamp_rel);
  return geodesic_point(mid, k3, t2, eig_clamp_rel);
}

double effective_length(double l1, double l2, double e1, double e2, double t) {
  require(l1 > 0 && l2 > 0, Err::NonPositiveScale,
          "strip lengths must be positive");
  require(e1 > 0 && e2 > 0, Err::NonPositiveScale,
          "bandwidths must be positive");
  require(t >= 0.0 && t <= 1.0, Err::OutOfRange,
          "interpolation parameter must lie in [0, 1]");
  return std::pow(l1 / e1, 1.0 - t) * std::pow(l2 / e2, t);
}

}  // namespace evflow
