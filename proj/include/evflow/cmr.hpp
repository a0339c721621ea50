#pragma once

#include "evflow/tracking.hpp"

namespace evflow {

// Arc-length commonality: for each trajectory, how far its log-eigenvalue
// path deviates from the straight chord. 0 means perfectly log-linear
// (common component); values approach 1 for strongly bent paths.
Vec commonality_arclength(const FlowDiagram& diagram,
                          const TrajectorySet& traj);

// Orthonormal eigenbasis of the symmetrized product of path points,
// gamma(t_m) ... gamma(t_1) over a uniform sub-grid, each factor rescaled by
// its largest absolute entry to keep the product representable.
struct DispersionBasis {
  Mat u;
};

DispersionBasis dispersion_basis(const std::function<Mat(double)>& gamma,
                                 int n_t);
DispersionBasis dispersion_basis(const GeodesicCore& core, int n_t);

// Entropy of the squared coefficients of each column of `vectors` in the
// basis. 0 for a basis-aligned vector, up to log(n) for full spread.
Vec commonality_dispersion(const Mat& vectors, const DispersionBasis& basis);

// One-call form: scores for the leading n_vectors eigenvectors of
// gamma(t0), with the basis built from the same path accessor.
Vec commonality_dispersion(const std::function<Mat(double)>& gamma, int n_t,
                           double t0, int n_vectors);

struct CommonalityReport {
  std::string estimator;  // "arclength" or "dispersion"
  Vec w;                  // per non-trivial slot, at the selected point
  double w_bound = 1.0;   // 1 (arclength) or log n (dispersion)
  double threshold = 0.2; // fraction of w_bound separating common slots
  Vec cmr;                // soft common-manifold ratio per grid point
  int t_star_index = 0;
  double t_star = 0.0;
  std::vector<int> common_set;     // diagram slot ids
  std::vector<int> noncommon_set;  // diagram slot ids
};

// Soft ratio curve sum((bound - w) mu) / sum(w mu) over non-trivial slots,
// its maximizer t*, and the hard split of slots at t*. Arclength scores are
// per trajectory and follow the tracked slots; dispersion scores are per
// grid point and slot.
CommonalityReport cmr_curve(const FlowDiagram& diagram,
                            const TrajectorySet& traj, const Vec& w,
                            double threshold_frac = 0.2);
CommonalityReport cmr_curve(const FlowDiagram& diagram, const Mat& w_points,
                            double n_for_bound, double threshold_frac = 0.2);

// Hard ratio sum_{common} mu / sum_{non-common} mu for one spectrum slice.
double hard_cmr(const Vec& mu_nontrivial, const std::vector<bool>& is_common);

// Embedding columns at the selected path point: either the leading ell
// non-trivial eigenvectors or exactly the common set.
Mat common_embedding(const Mat& vectors_tstar, const CommonalityReport& report,
                     int ell, bool common_only, bool has_trivial = true);

}  // namespace evflow
