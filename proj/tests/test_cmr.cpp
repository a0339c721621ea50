#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "evflow/cmr.hpp"
#include "evflow/kernel.hpp"
#include "evflow/synthetic.hpp"
#include "oracles.hpp"

using evflow::Mat;
using evflow::Vec;

namespace {

// Minimal diagram + identity trajectories holding given per-slot value
// curves; enough structure for the score and ratio functions.
struct Fixture {
  evflow::FlowDiagram d;
  evflow::TrajectorySet traj;
};

Fixture fixture_from_values(const Mat& values, bool has_trivial) {
  Fixture f;
  int n_t = static_cast<int>(values.rows());
  int m = static_cast<int>(values.cols());
  f.d.grid = evflow::linspace01(n_t);
  f.d.eigenvalues = values;
  f.d.has_trivial = has_trivial;
  f.traj.values = values;
  f.traj.slot_of.resize(n_t);
  for (int i = 0; i < n_t; ++i) {
    f.traj.slot_of[i].resize(m);
    for (int k = 0; k < m; ++k) f.traj.slot_of[i][k] = k;
  }
  return f;
}

}  // namespace

TEST_CASE("arc-length score is zero exactly on log-linear paths") {
  int n_t = 9;
  Mat values(n_t, 2);
  Vec grid = evflow::linspace01(n_t);
  for (int i = 0; i < n_t; ++i) {
    values(i, 0) = std::exp(-1.3 * grid(i));
    values(i, 1) = std::exp(0.4 + 0.9 * grid(i));
  }
  Fixture f = fixture_from_values(values, false);
  Vec w = evflow::commonality_arclength(f.d, f.traj);
  CHECK(w(0) == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));
  CHECK(w(1) <= 1e-12);
}

TEST_CASE("arc-length score of a tent path matches the closed form") {
  Mat values(3, 1);
  double a = 0.8;
  values << 1.0, std::exp(a), 1.0;
  Fixture f = fixture_from_values(values, false);
  Vec w = evflow::commonality_arclength(f.d, f.traj);
  double arc = 2.0 * std::sqrt(0.25 + a * a);
  double expected = (arc - 1.0) / arc;
  CHECK(w(0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("arc-length score rejects non-positive eigenvalues") {
  Mat values(3, 1);
  values << 1.0, 0.0, 1.0;
  Fixture f = fixture_from_values(values, false);
  CHECK_THROWS_AS((void)evflow::commonality_arclength(f.d, f.traj),
                  evflow::Error);
}

TEST_CASE("dispersion entropy spans 0 to log n against a fixed basis") {
  evflow::DispersionBasis basis{Mat::Identity(4, 4)};
  Mat vectors(4, 3);
  vectors.col(0) = Vec::Unit(4, 2);                  // aligned: entropy 0
  vectors.col(1) = Vec::Constant(4, 0.5);            // flat: entropy log 4
  vectors.col(2) << M_SQRT1_2, M_SQRT1_2, 0.0, 0.0;  // two-way: log 2
  Vec w = evflow::commonality_dispersion(vectors, basis);
  CHECK(w(0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(w(2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Mat zero = Mat::Zero(4, 1);
  CHECK_THROWS_AS((void)evflow::commonality_dispersion(zero, basis),
                  evflow::Error);
}

TEST_CASE("dispersion basis from the core matches the dense product") {
  evflow::Rng rng(401);
  Mat k1 = oracle::random_spd(10, rng);
  Mat k2 = oracle::random_spd(10, rng);
  evflow::GeodesicCore core = evflow::geodesic_core(k1, k2);
  auto gamma = [&](double t) { return core.gamma(t); };
  evflow::DispersionBasis dense = evflow::dispersion_basis(gamma, 7);
  evflow::DispersionBasis fast = evflow::dispersion_basis(core, 7);
  // Same basis up to roundoff: identical matrices after the shared sign
  // convention, because the two accumulated products differ only by a
  // positive overall scale.
  CHECK((dense.u - fast.u).cwiseAbs().maxCoeff() < 1e-8);

  Mat probe = oracle::random_gaussian(10, 4, rng);
  Vec wd = evflow::commonality_dispersion(probe, dense);
  Vec wf = evflow::commonality_dispersion(probe, fast);
  CHECK((wd - wf).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ratio curve, maximizer, and split on a hand-checked fixture") {
  Mat values(3, 3);
  // trivial slot, then one straight and one strongly bent component
  values.col(0) << 1.0, 1.0, 1.0;
  values.col(1) << 0.9, 0.8, 0.7;
  values.col(2) << 0.8, 0.3, 0.75;
  Fixture f = fixture_from_values(values, true);
  Vec w(3);
  w << 0.0, 0.05, 0.9;
  evflow::CommonalityReport rep = evflow::cmr_curve(f.d, f.traj, w, 0.2);

  CHECK(rep.estimator == "arclength");
  CHECK(rep.w_bound == 1.0);
  for (int i = 0; i < 3; ++i) {
    double mu1 = values(i, 1), mu2 = values(i, 2);
    double expect = (0.95 * mu1 + 0.1 * mu2) / (0.05 * mu1 + 0.9 * mu2);
    CHECK(rep.cmr(i) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(rep.t_star_index == 1);
  CHECK(rep.t_star == 0.5);
  CHECK(rep.common_set == std::vector<int>{1});
  CHECK(rep.noncommon_set == std::vector<int>{2});
}

TEST_CASE("degenerate score layouts raise typed errors") {
  Mat values(3, 2);
  values.col(0) << 1.0, 1.0, 1.0;
  values.col(1) << 0.9, 0.8, 0.7;
  Fixture f = fixture_from_values(values, true);
  Vec all_common(2), all_bent(2);
  all_common << 0.0, 0.0;
  all_bent << 0.0, 1.0;  // slot 0 is trivial; every scored slot maxes out
  CHECK_THROWS_AS((void)evflow::cmr_curve(f.d, f.traj, all_common, 0.2),
                  evflow::Error);
  CHECK_THROWS_AS((void)evflow::cmr_curve(f.d, f.traj, all_bent, 0.2),
                  evflow::Error);
}

TEST_CASE("per-point score matrix drives the dispersion ratio curve") {
  Mat values(4, 3);
  values.col(0) << 1.0, 1.0, 1.0, 1.0;
  values.col(1) << 0.9, 0.85, 0.8, 0.75;
  values.col(2) << 0.7, 0.5, 0.45, 0.6;
  Fixture f = fixture_from_values(values, true);
  double n_data = 50.0;
  double bound = std::log(n_data);
  Mat w_points(4, 3);
  w_points.setConstant(0.5 * bound);
  w_points.col(1).setConstant(0.01 * bound);
  w_points(2, 2) = 0.9 * bound;
  evflow::CommonalityReport rep =
      evflow::cmr_curve(f.d, w_points, n_data, 0.2);
  CHECK(rep.estimator == "dispersion");
  CHECK(rep.w_bound == doctest::Approx(bound));
  for (int i = 0; i < 4; ++i) {
    double num = (bound - w_points(i, 1)) * values(i, 1) +
                 (bound - w_points(i, 2)) * values(i, 2);
    double den = w_points(i, 1) * values(i, 1) +
                 w_points(i, 2) * values(i, 2);
    CHECK(rep.cmr(i) == doctest::Approx(num / den).epsilon(1e-14));
  }
  CHECK(rep.w.size() == 2);
  CHECK(rep.w(0) == w_points(rep.t_star_index, 1));
  CHECK(rep.common_set == std::vector<int>{1});
  CHECK(rep.noncommon_set == std::vector<int>{2});
}

TEST_CASE("hard ratio and its guards") {
  Vec mu(4);
  mu << 0.9, 0.7, 0.4, 0.2;
  CHECK(evflow::hard_cmr(mu, {true, false, true, false}) ==
        doctest::Approx((0.9 + 0.4) / (0.7 + 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS((void)evflow::hard_cmr(mu, {false, false, false, false}),
                  evflow::Error);
  CHECK_THROWS_AS((void)evflow::hard_cmr(mu, {true, true, true, true}),
                  evflow::Error);
  CHECK_THROWS_AS((void)evflow::hard_cmr(mu, {true, false}), evflow::Error);
}

TEST_CASE("embedding selection by common set and by leading block") {
  evflow::Rng rng(402);
  Mat v = oracle::random_gaussian(6, 4, rng);
  evflow::CommonalityReport rep;
  rep.common_set = {1, 3};
  Mat common = evflow::common_embedding(v, rep, 0, true);
  CHECK(common.cols() == 2);
  CHECK((common.col(0) - v.col(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((common.col(1) - v.col(3)).cwiseAbs().maxCoeff() == 0.0);

  Mat lead = evflow::common_embedding(v, rep, 2, false, true);
  CHECK((lead - v.middleCols(1, 2)).cwiseAbs().maxCoeff() == 0.0);
  Mat lead0 = evflow::common_embedding(v, rep, 3, false, false);
  CHECK((lead0 - v.leftCols(3)).cwiseAbs().maxCoeff() == 0.0);

  evflow::CommonalityReport empty;
  CHECK_THROWS_AS((void)evflow::common_embedding(v, empty, 0, true),
                  evflow::Error);
  CHECK_THROWS_AS((void)evflow::common_embedding(v, rep, 0, false),
                  evflow::Error);
  CHECK_THROWS_AS((void)evflow::common_embedding(v, rep, 4, false, true),
                  evflow::Error);
}

TEST_CASE("both estimators isolate the common component on flat views") {
  int n = 400;
  evflow::SynthPair p = evflow::gen_flat_2d(n, {2.0, 2.0, 8.0, 4.0}, 17);
  evflow::KernelBundle b1 = evflow::build_kernel(p.s1, 0.2);
  evflow::KernelBundle b2 = evflow::build_kernel(p.s2, 0.2);
  evflow::GeodesicCore core = evflow::geodesic_core(b1.k, b2.k, 1e-8);
  evflow::FlowDiagram d = evflow::compute_evfd(core, 21, 8, true);
  evflow::TrajectorySet traj = evflow::track_trajectories(d);

  Vec w_arc = evflow::commonality_arclength(d, traj);
  evflow::CommonalityReport arc = evflow::cmr_curve(d, traj, w_arc, 0.2);

  evflow::DispersionBasis basis = evflow::dispersion_basis(core, 33);
  Mat w_points(d.n_t(), d.n_slots());
  for (int i = 0; i < d.n_t(); ++i)
    w_points.row(i) =
        evflow::commonality_dispersion(d.vectors[i], basis).transpose();
  evflow::CommonalityReport dis =
      evflow::cmr_curve(d, w_points, double(n), 0.2);

  // Both estimators must find a nonempty common set and agree that the
  // strongest surviving slot is common while at least one slot is not.
  CHECK(!arc.common_set.empty());
  CHECK(!dis.common_set.empty());
  CHECK(!arc.noncommon_set.empty());
  CHECK(!dis.noncommon_set.empty());
  CHECK(arc.common_set.front() == dis.common_set.front());
  // The ratio curves peak away from the endpoints of the path.
  CHECK(arc.t_star > 0.0);
  CHECK(arc.t_star < 1.0);
  CHECK(dis.t_star > 0.0);
  CHECK(dis.t_star < 1.0);
}
