#include "evflow/cmr.hpp"

#include <cmath>

namespace evflow {

Vec commonality_arclength(const FlowDiagram& diagram,
                          const TrajectorySet& traj) {
  const int n_t = diagram.n_t();
  require(n_t >= 3, Err::TooFewGridPoints,
          "arc-length score needs at least 3 grid points");
  require(traj.n_t() == n_t, Err::DimensionMismatch,
          "trajectory set does not match the diagram grid");
  const int m = traj.n_traj();
  Vec w(m);
  for (int k = 0; k < m; ++k) {
    double arc = 0.0;
    double prev_log = 0.0;
    for (int i = 0; i < n_t; ++i) {
      double mu = traj.values(i, k);
      require(mu > 0.0, Err::NumericalUnderflow,
              "trajectory eigenvalue not positive; log arc length undefined");
      double cur = std::log(mu);
      if (i > 0) {
        double dt = diagram.grid(i) - diagram.grid(i - 1);
        double dl = cur - prev_log;
        arc += std::sqrt(dt * dt + dl * dl);
      }
      prev_log = cur;
    }
    double span_t = diagram.grid(n_t - 1) - diagram.grid(0);
    double span_l =
        std::log(traj.values(n_t - 1, k)) - std::log(traj.values(0, k));
    double chord = std::sqrt(span_t * span_t + span_l * span_l);
    w(k) = (arc - chord) / arc;
    if (w(k) < 0.0) w(k) = 0.0;  // roundoff guard; arc >= chord always
  }
  return w;
}

namespace {

Mat normalized_basis_from_product(Mat gm) {
  EigDecomposition e = eig_sym(symmetrize(gm));
  return e.vectors;
}

}  // namespace

DispersionBasis dispersion_basis(const std::function<Mat(double)>& gamma,
                                 int n_t) {
  Vec grid = linspace01(n_t);
  Mat gm;
  for (int i = 0; i < n_t; ++i) {
    Mat g = gamma(grid(i));
    check_finite(g, "path point");
    gm = (i == 0) ? g : Mat(g * gm);
    double scale = gm.cwiseAbs().maxCoeff();
    require(scale > 0.0, Err::NumericalUnderflow,
            "path product collapsed to zero");
    gm /= scale;
  }
  return DispersionBasis{normalized_basis_from_product(std::move(gm))};
}

DispersionBasis dispersion_basis(const GeodesicCore& core, int n_t) {
  Vec grid = linspace01(n_t);
  const Eigen::Index n = core.p.rows();
  // Accumulate the product in the core representation:
  //   gamma(t_m) ... gamma(t_1) = p (lam^{t_m} g0 lam^{t_{m-1}} ... ) p^T.
  Mat t_core = Mat::Identity(n, n);  // lam^0 at the first grid point
  for (int i = 1; i < n_t; ++i) {
    t_core = core.g0 * t_core;
    double t = grid(i);
    for (Eigen::Index r = 0; r < n; ++r)
      t_core.row(r) *= std::pow(core.lam(r), t);
    double scale = t_core.cwiseAbs().maxCoeff();
    require(scale > 0.0, Err::NumericalUnderflow,
            "path product collapsed to zero");
    t_core /= scale;
  }
  Mat gm = core.p * t_core * core.p.transpose();
  return DispersionBasis{normalized_basis_from_product(std::move(gm))};
}

Vec commonality_dispersion(const Mat& vectors, const DispersionBasis& basis) {
  require(vectors.rows() == basis.u.rows(), Err::DimensionMismatch,
          "vector length does not match the basis");
  const Eigen::Index m = vectors.cols();
  Vec w(m);
  Mat coeff = basis.u.transpose() * vectors;
  for (Eigen::Index k = 0; k < m; ++k) {
    Vec c2 = coeff.col(k).array().square();
    double total = c2.sum();
    require(total > 0.0, Err::ZeroVector,
            "dispersion score of an all-zero vector is undefined");
    c2 /= total;
    double h = 0.0;
    for (Eigen::Index j = 0; j < c2.size(); ++j) {
      double p = std::max(c2(j), 1e-300);
      h -= p * std::log(p);
    }
    w(k) = std::max(h, 0.0);
  }
  return w;
}

Vec commonality_dispersion(const std::function<Mat(double)>& gamma, int n_t,
                           double t0, int n_vectors) {
  require(t0 >= 0.0 && t0 <= 1.0, Err::OutOfRange,
          "evaluation point must lie in [0, 1]");
  DispersionBasis basis = dispersion_basis(gamma, n_t);
  EigDecomposition e = eig_sym(gamma(t0));
  Eigen::Index m = (n_vectors <= 0) ? e.vectors.cols()
                                    : std::min<Eigen::Index>(
                                          n_vectors, e.vectors.cols());
  return commonality_dispersion(e.vectors.leftCols(m), basis);
}

namespace {

struct SoftCurve {
  Vec cmr;
  int argmax;
};

// Soft ratio over non-trivial slots; scores may vary per grid point.
SoftCurve soft_cmr(const Mat& mu, const Mat& w, double bound) {
  const Eigen::Index n_t = mu.rows();
  SoftCurve c;
  c.cmr = Vec(n_t);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < mu.cols(); ++k) {
      num += (bound - w(i, k)) * mu(i, k);
      den += w(i, k) * mu(i, k);
    }
    c.cmr(i) = num / std::max(den, 1e-300);
  }
  c.argmax = 0;
  for (Eigen::Index i = 1; i < n_t; ++i)
    if (c.cmr(i) > c.cmr(c.argmax)) c.argmax = static_cast<int>(i);
  return c;
}

void check_degenerate_scores(const Mat& w, double bound) {
  double lo = w.minCoeff(), hi = w.maxCoeff();
  require(hi > 1e-9 * bound, Err::AllCommon,
          "every component is common; the ratio curve is unbounded and t* "
          "is undefined");
  require(lo < bound * (1.0 - 1e-9), Err::AllNonCommon,
          "no component is common; the ratio curve is identically zero");
}

}  // namespace

CommonalityReport cmr_curve(const FlowDiagram& diagram,
                            const TrajectorySet& traj, const Vec& w,
                            double threshold_frac) {
  const int n_t = diagram.n_t();
  require(traj.n_t() == n_t, Err::DimensionMismatch,
          "trajectory set does not match the diagram grid");
  require(w.size() == traj.n_traj(), Err::DimensionMismatch,
          "one score per trajectory required");
  const int first = diagram.has_trivial ? 1 : 0;
  const int m = traj.n_traj() - first;
  require(m >= 1, Err::OutOfRange, "no non-trivial trajectories");

  Mat mu(n_t, m), ws(n_t, m);
  for (int i = 0; i < n_t; ++i)
    for (int k = 0; k < m; ++k) {
      mu(i, k) = traj.values(i, first + k);
      ws(i, k) = w(first + k);
    }
  check_degenerate_scores(ws, 1.0);
  SoftCurve c = soft_cmr(mu, ws, 1.0);

  CommonalityReport rep;
  rep.estimator = "arclength";
  rep.w = w.segment(first, m);
  rep.w_bound = 1.0;
  rep.threshold = threshold_frac;
  rep.cmr = c.cmr;
  rep.t_star_index = c.argmax;
  rep.t_star = diagram.grid(c.argmax);
  for (int k = 0; k < m; ++k) {
    if (rep.w(k) < threshold_frac * rep.w_bound) {
      rep.common_set.push_back(first + k);
    } else {
      rep.noncommon_set.push_back(first + k);
    }
  }
  return rep;
}

CommonalityReport cmr_curve(const FlowDiagram& diagram, const Mat& w_points,
                            double n_for_bound, double threshold_frac) {
  const int n_t = diagram.n_t();
  require(w_points.rows() == n_t, Err::DimensionMismatch,
          "one score row per grid point required");
  require(w_points.cols() == diagram.n_slots(), Err::DimensionMismatch,
          "one score per slot required");
  require(n_for_bound > 1.0, Err::OutOfRange,
          "entropy bound needs the dataset size");
  const int first = diagram.has_trivial ? 1 : 0;
  const int m = diagram.n_slots() - first;
  require(m >= 1, Err::OutOfRange, "no non-trivial slots");
  const double bound = std::log(n_for_bound);

  Mat mu = diagram.eigenvalues.rightCols(m);
  Mat ws = w_points.rightCols(m);
  check_degenerate_scores(ws, bound);
  SoftCurve c = soft_cmr(mu, ws, bound);

  CommonalityReport rep;
  rep.estimator = "dispersion";
  rep.w = ws.row(c.argmax).transpose();
  rep.w_bound = bound;
  rep.threshold = threshold_frac;
  rep.cmr = c.cmr;
  rep.t_star_index = c.argmax;
  rep.t_star = diagram.grid(c.argmax);
  for (int k = 0; k < m; ++k) {
    if (rep.w(k) < threshold_frac * bound) {
      rep.common_set.push_back(first + k);
    } else {
      rep.noncommon_set.push_back(first + k);
    }
  }
  return rep;
}

double hard_cmr(const Vec& mu_nontrivial, const std::vector<bool>& is_common) {
  require(static_cast<size_t>(mu_nontrivial.size()) == is_common.size(),
          Err::DimensionMismatch, "one flag per eigenvalue required");
  double num = 0.0, den = 0.0;
  int n_common = 0;
  for (Eigen::Index k = 0; k < mu_nontrivial.size(); ++k) {
    if (is_common[k]) {
      num += mu_nontrivial(k);
      ++n_common;
    } else {
      den += mu_nontrivial(k);
    }
  }
  require(n_common > 0, Err::AllNonCommon,
          "hard ratio undefined: the common set is empty");
  require(n_common < static_cast<int>(is_common.size()), Err::AllCommon,
          "hard ratio undefined: the non-common set is empty");
  return num / den;
}

Mat common_embedding(const Mat& vectors_tstar,
                     const CommonalityReport& report, int ell,
                     bool common_only, bool has_trivial) {
  if (common_only) {
    require(!report.common_set.empty(), Err::EmptyCommonSet,
            "no common components; cannot build a common-only embedding");
    Mat out(vectors_tstar.rows(), report.common_set.size());
    for (size_t j = 0; j < report.common_set.size(); ++j) {
      int slot = report.common_set[j];
      require(slot >= 0 && slot < vectors_tstar.cols(), Err::IndexOutOfRange,
              "common set references a slot outside the kept vectors");
      out.col(j) = vectors_tstar.col(slot);
    }
    return out;
  }
  const int first = has_trivial ? 1 : 0;
  require(ell >= 1, Err::OutOfRange, "embedding dimension must be positive");
  require(first + ell <= vectors_tstar.cols(), Err::RankTooHigh,
          "embedding dimension exceeds the kept vectors");
  return vectors_tstar.middleCols(first, ell);
}

}  // namespace evflow
