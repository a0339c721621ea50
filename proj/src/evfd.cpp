#include "evflow/evfd.hpp"

#include <cmath>

namespace evflow {

Vec linspace01(int n_t) {
  require(n_t >= 2, Err::GridTooCoarse,
          "flow diagram needs at least 2 grid points");
  Vec g(n_t);
  for (int i = 0; i < n_t; ++i) g(i) = double(i) / double(n_t - 1);
  return g;
}

Mat GeodesicCore::gamma(double t) const {
  Vec lt(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) lt(i) = std::pow(lam(i), t);
  return symmetrize(p * lt.asDiagonal() * p.transpose());
}

GeodesicCore geodesic_core(const Mat& k1, const Mat& k2,
                           double eig_clamp_rel) {
  require(k1.rows() == k1.cols() && k2.rows() == k2.cols() &&
              k1.rows() == k2.rows(),
          Err::DimensionMismatch, "kernels must be same-size square matrices");
  check_finite(k1, "first kernel");
  check_finite(k2, "second kernel");

  EigDecomposition e1 = evd(k1);
  double lmax = e1.values(0);
  require(lmax > 0.0, Err::NotPositiveDefinite,
          "first kernel has no positive eigenvalue");
  Vec lam1 = e1.values;
  if (eig_clamp_rel > 0.0) {
    lam1 = lam1.cwiseMax(eig_clamp_rel * lmax);
  } else {
    for (Eigen::Index i = 0; i < lam1.size(); ++i)
      require(lam1(i) > kSpdFloorRel * lmax, Err::NotPositiveDefinite,
              "first kernel eigenvalue at or below positivity floor");
  }
  Vec sqrt1 = lam1.cwiseSqrt();
  Mat half = e1.vectors * sqrt1.asDiagonal() * e1.vectors.transpose();
  Mat inv_half =
      e1.vectors * sqrt1.cwiseInverse().asDiagonal() * e1.vectors.transpose();

  Mat k2_eff = k2;
  if (eig_clamp_rel > 0.0) {
    EigDecomposition e2 = evd(k2);
    require(e2.values(0) > 0.0, Err::NotPositiveDefinite,
            "second kernel has no positive eigenvalue");
    Vec lam2 = e2.values.cwiseMax(eig_clamp_rel * e2.values(0));
    k2_eff =
        symmetrize(e2.vectors * lam2.asDiagonal() * e2.vectors.transpose());
  }
  Mat c = symmetrize(inv_half * k2_eff * inv_half);
  EigDecomposition ec = eig_sym(c);
  double cmax = ec.values(0);
  require(cmax > 0.0, Err::NotPositiveDefinite,
          "whitened matrix has no positive eigenvalue");
  Vec lam = ec.values;
  if (eig_clamp_rel > 0.0) {
    // The clamped endpoints keep this spectrum positive in exact
    // arithmetic; the floor only shields pow() from roundoff.
    lam = lam.cwiseMax(1e-300);
  } else {
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      require(lam(i) > kSpdFloorRel * cmax, Err::NotPositiveDefinite,
              "second kernel eigenvalue at or below positivity floor");
  }

  GeodesicCore core;
  core.p = half * ec.vectors;
  core.lam = lam;
  core.g0 = core.p.transpose() * core.p;
  core.k1_vectors = e1.vectors;
  return core;
}

namespace {

void validate_diagram_args(Eigen::Index n, int n_t, int k) {
  require(n_t >= 2, Err::GridTooCoarse,
          "flow diagram needs at least 2 grid points");
  require(k >= 1, Err::OutOfRange, "slot count must be at least 1");
  require(k + 1 <= n, Err::RankTooHigh,
          "requested more eigenpairs than the kernel size");
}

}  // namespace

FlowDiagram compute_evfd(const GeodesicCore& core, int n_t, int k,
                         bool keep_vectors, const EvfdOptions& opt) {
  const Eigen::Index n = core.p.rows();
  validate_diagram_args(n, n_t, k);
  const int want = k + 1;
  const int block =
      static_cast<int>(std::min<Eigen::Index>(want + 8, n));

  FlowDiagram d;
  d.grid = linspace01(n_t);
  d.eigenvalues = Mat(n_t, want);
  if (keep_vectors) d.vectors.resize(n_t);
  d.n_points = static_cast<int>(n);
  d.geometry = "spd";

  Mat guess = core.k1_vectors.leftCols(block);
  Vec lam_t(n);
  auto apply = [&](const Mat& v, Mat& w) {
    w.noalias() = core.p * (lam_t.asDiagonal() * (core.p.transpose() * v));
  };
  for (int i = 0; i < n_t; ++i) {
    double t = d.grid(i);
    for (Eigen::Index j = 0; j < n; ++j) lam_t(j) = std::pow(core.lam(j), t);
    PartialEig pe =
        partial_eig_sym(apply, static_cast<int>(n), want, block, guess,
                        opt.tol, opt.max_iter);
    d.eigenvalues.row(i) = pe.values.transpose();
    if (keep_vectors) d.vectors[i] = pe.vectors;
    guess = pe.block;
  }
  return d;
}

FlowDiagram compute_evfd(const Mat& k1, const Mat& k2, int n_t, int k,
                         bool keep_vectors, const EvfdOptions& opt) {
  GeodesicCore core = geodesic_core(k1, k2, opt.eig_clamp_rel);
  return compute_evfd(core, n_t, k, keep_vectors, opt);
}

FlowDiagram compute_evfd_spsd(const SpsdKernel& a, const SpsdKernel& b,
                              int n_t, int k, bool keep_vectors) {
  require(a.rank() == b.rank(), Err::RankMismatch,
          "fixed-rank endpoints have different ranks");
  validate_diagram_args(a.rank(), n_t, k);
  const int want = k + 1;

  FlowDiagram d;
  d.grid = linspace01(n_t);
  d.eigenvalues = Mat(n_t, want);
  if (keep_vectors) d.vectors.resize(n_t);
  d.n_points = a.n();
  d.geometry = "spsd";
  d.rank = a.rank();

  for (int i = 0; i < n_t; ++i) {
    SpsdKernel g = spsd_geodesic_point(a, b, d.grid(i));
    EigDecomposition ec = eig_sym(g.core);
    d.eigenvalues.row(i) = ec.values.head(want).transpose();
    if (keep_vectors) {
      Mat v = g.U * ec.vectors.leftCols(want);
      apply_sign_convention(v);
      d.vectors[i] = v;
    }
  }
  return d;
}

}  // namespace evflow
