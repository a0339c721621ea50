#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "evflow/tracking.hpp"

using evflow::Mat;
using evflow::Vec;

namespace {

// Diagram with two analytic eigenvalue curves crossing at 0.06 and 0.88 and
// constant orthogonal eigenvectors, so the true trajectory identities are
// known exactly. Curve A runs above B outside the crossings, below between.
struct CrossingFixture {
  evflow::FlowDiagram d;
  std::vector<double> la, lb;
};

CrossingFixture crossing_fixture(int n_t) {
  CrossingFixture f;
  f.d.grid = evflow::linspace01(n_t);
  f.d.eigenvalues = Mat(n_t, 2);
  f.d.vectors.resize(n_t);
  f.d.has_trivial = false;
  f.d.n_points = 6;
  Vec ua = Vec::Unit(6, 0), ub = Vec::Unit(6, 1);
  for (int i = 0; i < n_t; ++i) {
    double t = f.d.grid(i);
    double gap = 0.6 * (t - 0.06) * (t - 0.88);
    double a = 1.0 + 0.5 * gap;
    double b = 1.0 - 0.5 * gap;
    f.la.push_back(a);
    f.lb.push_back(b);
    f.d.vectors[i] = Mat(6, 2);
    if (a >= b) {
      f.d.eigenvalues(i, 0) = a;
      f.d.eigenvalues(i, 1) = b;
      f.d.vectors[i].col(0) = ua;
      f.d.vectors[i].col(1) = ub;
    } else {
      f.d.eigenvalues(i, 0) = b;
      f.d.eigenvalues(i, 1) = a;
      f.d.vectors[i].col(0) = ub;
      f.d.vectors[i].col(1) = ua;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("swap distance counts transpositions") {
  std::vector<int> id{0, 1, 2, 3};
  CHECK(evflow::swap_distance(id, id) == 0);
  CHECK(evflow::swap_distance(id, {1, 0, 2, 3}) == 1);
  CHECK(evflow::swap_distance(id, {1, 2, 0, 3}) == 2);
  CHECK(evflow::swap_distance(id, {1, 0, 3, 2}) == 2);
  CHECK(evflow::swap_distance({2, 0, 1, 3}, {2, 0, 1, 3}) == 0);
  CHECK_THROWS_AS((void)evflow::swap_distance(id, {0, 1}), evflow::Error);
}

TEST_CASE("constant diagram tracks as the identity") {
  evflow::FlowDiagram d;
  int n_t = 12;
  d.grid = evflow::linspace01(n_t);
  d.eigenvalues = Mat(n_t, 3);
  d.vectors.resize(n_t);
  Mat v(5, 3);
  v.col(0) = Vec::Unit(5, 0);
  v.col(1) = Vec::Unit(5, 2);
  v.col(2) = Vec::Unit(5, 4);
  for (int i = 0; i < n_t; ++i) {
    d.eigenvalues.row(i) << 3.0, 2.0, 1.0;
    d.vectors[i] = v;
  }
  evflow::TrajectorySet ts = evflow::track_trajectories(d);
  CHECK(ts.n_t() == n_t);
  CHECK(ts.n_traj() == 3);
  CHECK(ts.warnings.empty());
  for (int i = 0; i < n_t; ++i) {
    CHECK(ts.slot_of[i] == std::vector<int>{0, 1, 2});
    CHECK(ts.values(i, 0) == 3.0);
    CHECK(ts.values(i, 2) == 1.0);
  }
}

TEST_CASE("crossing curves are followed through both slot exchanges") {
  int n_t = 200;
  CrossingFixture f = crossing_fixture(n_t);
  evflow::TrajectorySet ts = evflow::track_trajectories(f.d);

  // Trajectory 0 starts on curve A (the larger one at t = 0) and must hold
  // onto it through both crossings.
  for (int i = 0; i < n_t; ++i) {
    CHECK(ts.values(i, 0) == doctest::Approx(f.la[i]).epsilon(1e-12));
    CHECK(ts.values(i, 1) == doctest::Approx(f.lb[i]).epsilon(1e-12));
  }

  // The slot exchanges happen within one grid step of the analytic
  // crossing parameters.
  std::vector<double> switch_ts;
  for (int i = 1; i < n_t; ++i)
    if (ts.slot_of[i] != ts.slot_of[i - 1])
      switch_ts.push_back(0.5 * (f.d.grid(i - 1) + f.d.grid(i)));
  REQUIRE(switch_ts.size() == 2);
  double step = 1.0 / double(n_t - 1);
  CHECK(std::abs(switch_ts[0] - 0.06) <= step);
  CHECK(std::abs(switch_ts[1] - 0.88) <= step);
}

TEST_CASE("repeated reference eigenvalue only raises a warning") {
  evflow::FlowDiagram d;
  d.grid = evflow::linspace01(4);
  d.eigenvalues = Mat(4, 2);
  d.vectors.resize(4);
  Mat v(4, 2);
  v.col(0) = Vec::Unit(4, 0);
  v.col(1) = Vec::Unit(4, 1);
  for (int i = 0; i < 4; ++i) {
    d.eigenvalues.row(i) << 2.0, 2.0;
    d.vectors[i] = v;
  }
  evflow::TrajectorySet ts = evflow::track_trajectories(d);
  REQUIRE(ts.warnings.size() == 1);
  CHECK(ts.warnings[0].find("repeated eigenvalue") != std::string::npos);
}

TEST_CASE("orthogonal frames across a step exhaust the beam") {
  evflow::FlowDiagram d;
  d.grid = evflow::linspace01(2);
  d.eigenvalues = Mat(2, 2);
  d.eigenvalues.row(0) << 2.0, 1.0;
  d.eigenvalues.row(1) << 2.0, 1.0;
  d.vectors.resize(2);
  d.vectors[0] = Mat(4, 2);
  d.vectors[0].col(0) = Vec::Unit(4, 0);
  d.vectors[0].col(1) = Vec::Unit(4, 1);
  d.vectors[1] = Mat(4, 2);
  d.vectors[1].col(0) = Vec::Unit(4, 2);
  d.vectors[1].col(1) = Vec::Unit(4, 3);
  CHECK_THROWS_AS((void)evflow::track_trajectories(d), evflow::Error);
}

TEST_CASE("tracking input guards") {
  CrossingFixture f = crossing_fixture(10);

  evflow::FlowDiagram no_vectors = f.d;
  no_vectors.vectors.clear();
  CHECK_THROWS_AS((void)evflow::track_trajectories(no_vectors), evflow::Error);

  evflow::FlowDiagram one_point = f.d;
  one_point.grid = Vec::Zero(1);
  one_point.eigenvalues = f.d.eigenvalues.topRows(1);
  one_point.vectors = {f.d.vectors[0]};
  CHECK_THROWS_AS((void)evflow::track_trajectories(one_point), evflow::Error);

  evflow::TrackingOptions bad;
  bad.window_l = 0;
  CHECK_THROWS_AS((void)evflow::track_trajectories(f.d, bad), evflow::Error);
  bad = {};
  bad.beam_width = 0;
  CHECK_THROWS_AS((void)evflow::track_trajectories(f.d, bad), evflow::Error);
  bad = {};
  bad.p1 = 0.7;
  bad.p2 = 0.4;
  CHECK_THROWS_AS((void)evflow::track_trajectories(f.d, bad), evflow::Error);
}
