#pragma once

#include <string>
#include <vector>

#include "evflow/spd.hpp"

namespace evflow {

// Factored form of the whole geodesic: gamma(t) = p diag(lam^t) p^T with
// p = k1^{1/2} q and (lam, q) the eigendecomposition of the whitened matrix
// k1^{-1/2} k2 k1^{-1/2}. One factorization serves every t.
struct GeodesicCore {
  Mat p;
  Vec lam;        // positive, descending
  Mat g0;         // p^T p, cached for operator products
  Mat k1_vectors; // eigenvectors of k1, used to seed iteration at t = 0
  Mat gamma(double t) const;  // dense evaluation
};

GeodesicCore geodesic_core(const Mat& k1, const Mat& k2,
                           double eig_clamp_rel = 0.0);

// Eigenvalue flow diagram: leading k+1 eigenpairs of gamma(t) on a uniform
// grid over [0, 1]. Slot 0 holds the trivial (stationary) eigenvalue of
// normalized kernels; slots 1..k are the informative ones.
struct FlowDiagram {
  Vec grid;                  // n_t entries, 0 to 1 inclusive
  Mat eigenvalues;           // n_t x (k+1), descending within each row
  std::vector<Mat> vectors;  // per grid point n x (k+1); empty when not kept
  bool has_trivial = true;
  std::string geometry = "spd";
  int rank = -1;             // fixed rank for spsd geometry
  int n_points = 0;          // dataset size
  std::vector<std::string> warnings;

  int n_t() const { return static_cast<int>(grid.size()); }
  int n_slots() const { return static_cast<int>(eigenvalues.cols()); }
};

struct EvfdOptions {
  double eig_clamp_rel = 0.0;
  double tol = 1e-12;
  int max_iter = 400;
};

FlowDiagram compute_evfd(const Mat& k1, const Mat& k2, int n_t, int k,
                         bool keep_vectors, const EvfdOptions& opt = {});

// Same diagram computed from a prebuilt core (lets callers reuse the
// factorization for the dispersion score).
FlowDiagram compute_evfd(const GeodesicCore& core, int n_t, int k,
                         bool keep_vectors, const EvfdOptions& opt = {});

// Fixed-rank variant along the structured low-rank curve.
FlowDiagram compute_evfd_spsd(const SpsdKernel& a, const SpsdKernel& b,
                              int n_t, int k, bool keep_vectors);

Vec linspace01(int n_t);

}  // namespace evflow
