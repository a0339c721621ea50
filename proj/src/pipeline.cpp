#include "evflow/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "evflow/io.hpp"
#include "evflow/synthetic.hpp"

namespace evflow {

namespace {

struct GeometryChoice {
  std::string geometry;  // "spd" or "spsd"
  int rank = -1;
};

// Auto mode keeps the strict positive-definite path when both spectra stay
// above the library floor; otherwise it falls back to the shared fixed-rank
// form with the largest safely positive rank.
GeometryChoice resolve_geometry(const RunConfig& cfg, const Mat& k1,
                                const Mat& k2,
                                std::vector<std::string>& notes) {
  if (cfg.geometry == "spd") return {"spd", -1};
  if (cfg.geometry == "spsd") return {"spsd", cfg.rank};

  auto count_positive = [](const Mat& k) {
    EigDecomposition e = evd(k);
    double floor = kSpdFloorRel * e.values(0);
    int cnt = 0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      if (e.values(i) > floor) ++cnt;
    return cnt;
  };
  int p1 = count_positive(k1);
  int p2 = count_positive(k2);
  if (p1 == k1.rows() && p2 == k2.rows()) return {"spd", -1};
  int p = std::min(p1, p2);
  notes.push_back("kernel spectra reach the positivity floor; using the "
                  "fixed-rank geometry with rank " + std::to_string(p));
  return {"spsd", p};
}

}  // namespace

RunReport run_pipeline(const RunConfig& cfg, const std::vector<Mat>& views) {
  validate_config(cfg);
  require(views.size() == 2 || views.size() == 3, Err::DimensionMismatch,
          "pipeline expects two or three views");
  for (size_t i = 1; i < views.size(); ++i)
    require(views[i].rows() == views[0].rows(), Err::RowCountMismatch,
            "views must describe the same points");
  const int n = static_cast<int>(views[0].rows());
  require(cfg.k + 1 <= n, Err::RankTooHigh,
          "k + 1 eigenpairs exceed the dataset size");

  RunReport rep;

  KernelBundle b1 = build_kernel(views[0], cfg.epsilon1);
  KernelBundle b2 = build_kernel(views[1], cfg.epsilon2);
  rep.epsilon1 = b1.epsilon;
  rep.epsilon2 = b2.epsilon;

  if (views.size() == 3) {
    KernelBundle b3 = build_kernel(views[2], cfg.epsilon3);
    rep.epsilon3 = b3.epsilon;
    rep.hull_mode = true;
    rep.diagram.n_points = n;
    rep.hull_grid = linspace01(cfg.hull_grid);
    rep.hull_eigenvalues.reserve(cfg.hull_grid);
    for (int i = 0; i < cfg.hull_grid; ++i) {
      Mat mid = geodesic_point(b1.k, b2.k, rep.hull_grid(i), cfg.eig_clamp);
      GeodesicCore core = geodesic_core(mid, b3.k, cfg.eig_clamp);
      FlowDiagram leg = compute_evfd(core, cfg.hull_grid, cfg.k, false);
      rep.hull_eigenvalues.push_back(leg.eigenvalues);
    }
    return rep;
  }

  GeometryChoice geo = resolve_geometry(cfg, b1.k, b2.k, rep.notes);

  if (geo.geometry == "spd") {
    GeodesicCore core = geodesic_core(b1.k, b2.k, cfg.eig_clamp);
    rep.diagram = compute_evfd(core, cfg.n_t, cfg.k, true);
    rep.traj = track_trajectories(
        rep.diagram, TrackingOptions{cfg.track_window, cfg.track_p1,
                                     cfg.track_p2, cfg.track_beam});
    if (cfg.estimator == "dispersion") {
      DispersionBasis basis = dispersion_basis(core, cfg.dispersion_grid);
      Mat w_points(cfg.n_t, rep.diagram.n_slots());
      for (int i = 0; i < cfg.n_t; ++i)
        w_points.row(i) =
            commonality_dispersion(rep.diagram.vectors[i], basis).transpose();
      rep.commonality =
          cmr_curve(rep.diagram, w_points, double(n), cfg.threshold);
    } else {
      Vec w = commonality_arclength(rep.diagram, rep.traj);
      rep.commonality = cmr_curve(rep.diagram, rep.traj, w, cfg.threshold);
    }
  } else {
    SpsdKernel a = truncate_to_rank(b1.k, geo.rank);
    SpsdKernel b = truncate_to_rank(b2.k, geo.rank);
    rep.diagram = compute_evfd_spsd(a, b, cfg.n_t, cfg.k, true);
    rep.traj = track_trajectories(
        rep.diagram, TrackingOptions{cfg.track_window, cfg.track_p1,
                                     cfg.track_p2, cfg.track_beam});
    if (cfg.estimator == "dispersion") {
      auto gamma = [&](double t) {
        return spsd_geodesic_point(a, b, t).to_dense();
      };
      DispersionBasis basis = dispersion_basis(gamma, cfg.dispersion_grid);
      Mat w_points(cfg.n_t, rep.diagram.n_slots());
      for (int i = 0; i < cfg.n_t; ++i)
        w_points.row(i) =
            commonality_dispersion(rep.diagram.vectors[i], basis).transpose();
      rep.commonality =
          cmr_curve(rep.diagram, w_points, double(n), cfg.threshold);
    } else {
      Vec w = commonality_arclength(rep.diagram, rep.traj);
      rep.commonality = cmr_curve(rep.diagram, rep.traj, w, cfg.threshold);
    }
  }
  for (const std::string& w : rep.diagram.warnings) rep.notes.push_back(w);
  for (const std::string& w : rep.traj.warnings) rep.notes.push_back(w);

  const Mat& v_star = rep.diagram.vectors[rep.commonality.t_star_index];
  if (cfg.embedding == "common" && rep.commonality.common_set.empty()) {
    rep.embedding_empty = true;
    rep.notes.push_back("no common components detected; embedding is empty");
  } else {
    rep.embedding = common_embedding(v_star, rep.commonality, cfg.ell,
                                     cfg.embedding == "common",
                                     rep.diagram.has_trivial);
  }
  return rep;
}

RunReport run_pipeline_files(const RunConfig& cfg) {
  validate_config(cfg);
  std::vector<std::string> paths = {cfg.input1, cfg.input2};
  if (!cfg.input3.empty()) paths.push_back(cfg.input3);
  std::vector<Mat> views = load_aligned_csv(paths);
  RunReport rep = run_pipeline(cfg, views);
  write_report(rep, cfg);
  return rep;
}

std::string diagram_json(const RunReport& rep, const RunConfig& cfg) {
  JsonWriter w;
  w.begin_object();
  if (rep.hull_mode) {
    w.key("grid_t1").value(rep.hull_grid);
    w.key("grid_t2").value(rep.hull_grid);
    w.key("eigenvalues").begin_array();
    for (const Mat& slice : rep.hull_eigenvalues) w.value_rows(slice);
    w.end_array();
  } else {
    w.key("grid").value(rep.diagram.grid);
    w.key("eigenvalues").value_rows(rep.diagram.eigenvalues);
    w.key("trajectories").begin_array();
    for (int i = 0; i < rep.traj.n_t(); ++i) {
      w.begin_array();
      for (int k = 0; k < rep.traj.n_traj(); ++k)
        w.value(rep.traj.slot_of[i][k]);
      w.end_array();
    }
    w.end_array();
    w.key("w").value(rep.commonality.w);
    w.key("cmr").value(rep.commonality.cmr);
    w.key("t_star").value(rep.commonality.t_star);
    w.key("common_set").begin_array();
    for (int s : rep.commonality.common_set) w.value(s);
    w.end_array();
  }
  w.key("meta").begin_object();
  w.key("n").value(rep.diagram.n_points);
  w.key("epsilon1").value(rep.epsilon1);
  w.key("epsilon2").value(rep.epsilon2);
  if (rep.hull_mode) w.key("epsilon3").value(rep.epsilon3);
  if (!rep.hull_mode) {
    w.key("geometry").value(rep.diagram.geometry);
    w.key("rank").value(rep.diagram.rank);
    w.key("estimator").value(rep.commonality.estimator);
    w.key("w_bound").value(rep.commonality.w_bound);
    w.key("threshold").value(rep.commonality.threshold);
    w.key("t_star_index").value(rep.commonality.t_star_index);
    w.key("noncommon_set").begin_array();
    for (int s : rep.commonality.noncommon_set) w.value(s);
    w.end_array();
  }
  w.key("notes").begin_array();
  for (const std::string& s : rep.notes) w.value(s);
  w.end_array();
  w.key("config").begin_object();
  {
    std::istringstream echo(config_echo(cfg));
    std::string line;
    while (std::getline(echo, line)) {
      size_t eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq - 1);
      std::string val = line.substr(eq + 2);
      w.key(key).value(val);
    }
  }
  w.end_object();
  w.end_object();
  w.end_object();
  return w.str();
}

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string diagram_svg(const RunReport& rep) {
  require(!rep.hull_mode, Err::DomainError,
          "hull runs have no two-view diagram to draw");
  const FlowDiagram& d = rep.diagram;
  const double width = 860.0, height = 560.0;
  const double ml = 70.0, mr = 30.0, mt = 30.0, mb = 50.0;
  double mu_max = d.eigenvalues.maxCoeff();
  double mu_min = d.eigenvalues.minCoeff();
  if (mu_max <= mu_min) mu_max = mu_min + 1.0;

  auto sx = [&](double t) { return ml + t * (width - ml - mr); };
  auto sy = [&](double mu) {
    return height - mb - (mu - mu_min) / (mu_max - mu_min) *
                             (height - mt - mb);
  };

  std::vector<bool> common(d.n_slots(), false);
  for (int s : rep.commonality.common_set)
    if (s >= 0 && s < d.n_slots()) common[s] = true;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)width
    << "\" height=\"" << (int)height << "\" viewBox=\"0 0 " << (int)width
    << " " << (int)height << "\">\n";
  o << "<rect width=\"" << (int)width << "\" height=\"" << (int)height
    << "\" fill=\"white\"/>\n";
  o << "<line x1=\"" << fmt3(ml) << "\" y1=\"" << fmt3(height - mb)
    << "\" x2=\"" << fmt3(width - mr) << "\" y2=\"" << fmt3(height - mb)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << fmt3(ml) << "\" y1=\"" << fmt3(mt) << "\" x2=\""
    << fmt3(ml) << "\" y2=\"" << fmt3(height - mb)
    << "\" stroke=\"black\"/>\n";

  // One polyline per trajectory, following the tracked slots.
  for (int k = 0; k < rep.traj.n_traj(); ++k) {
    bool trivial = d.has_trivial && k == 0;
    std::string color = trivial ? "#9aa0a6" : (common[k] ? "#1a66cc" : "#cc3311");
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"" << (trivial ? "1.0" : "1.5")
      << "\" points=\"";
    for (int i = 0; i < d.n_t(); ++i) {
      if (i) o << " ";
      o << fmt3(sx(d.grid(i))) << "," << fmt3(sy(rep.traj.values(i, k)));
    }
    o << "\"/>\n";
  }

  double tx = sx(rep.commonality.t_star);
  o << "<line x1=\"" << fmt3(tx) << "\" y1=\"" << fmt3(mt) << "\" x2=\""
    << fmt3(tx) << "\" y2=\"" << fmt3(height - mb)
    << "\" stroke=\"#2a9d4a\" stroke-dasharray=\"6,4\"/>\n";
  o << "<text x=\"" << fmt3(tx + 4) << "\" y=\"" << fmt3(mt + 14)
    << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#2a9d4a\">t*="
    << fmt3(rep.commonality.t_star) << "</text>\n";
  o << "<text x=\"" << fmt3(width / 2) << "\" y=\"" << fmt3(height - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">t</text>\n";
  o << "<text x=\"18\" y=\"" << fmt3(height / 2)
    << "\" font-family=\"sans-serif\" font-size=\"14\" "
       "transform=\"rotate(-90 18 "
    << fmt3(height / 2) << ")\">eigenvalue</text>\n";
  if (rep.commonality.common_set.empty()) {
    o << "<text x=\"" << fmt3(width / 2) << "\" y=\"" << fmt3(mt + 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" fill=\"#cc3311\">no common components "
         "detected</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_report(const RunReport& rep, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  require(!ec, Err::IoError, "cannot create output directory: " + cfg.out_dir);
  const std::string base = cfg.out_dir + "/";

  write_text_file(base + "diagram.json", diagram_json(rep, cfg));
  write_text_file(base + "config_echo.cfg", config_echo(cfg));
  if (!rep.hull_mode) {
    write_csv(base + "eigenvalues.csv", rep.diagram.eigenvalues);
    if (!rep.embedding_empty && rep.embedding.size() > 0)
      write_csv(base + "embedding.csv", rep.embedding);
    if (cfg.svg) write_text_file(base + "diagram.svg", diagram_svg(rep));
  }
}

}  // namespace evflow
