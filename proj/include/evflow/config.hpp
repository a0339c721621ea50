#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evflow {

// Flat key=value run description. Unknown keys are rejected so typos fail
// loudly instead of silently running defaults.
struct RunConfig {
  std::string input1;
  std::string input2;
  std::string input3;        // optional third view; switches to hull mode
  std::string out_dir;

  double epsilon1 = 0.0;     // <= 0 selects the median heuristic
  double epsilon2 = 0.0;
  double epsilon3 = 0.0;

  int n_t = 200;
  int k = 10;

  std::string estimator = "dispersion";  // or "arclength"
  double threshold = 0.2;
  int dispersion_grid = 33;

  int track_window = 3;
  double track_p1 = 0.05;
  double track_p2 = 0.01;
  int track_beam = 64;

  std::string geometry = "auto";  // auto | spd | spsd
  int rank = 0;                   // fixed rank for spsd geometry
  double eig_clamp = 1e-8;        // spectrum lift for spd geometry

  int ell = 2;
  std::string embedding = "common";  // common | top

  int hull_grid = 11;

  uint64_t seed = 0;
  int threads = 1;  // accepted for interface stability; single-threaded
  bool svg = true;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& name);

// The exact key=value text that reproduces this config; parsing it yields
// the same struct. Keys are emitted in a fixed order.
std::string config_echo(const RunConfig& cfg);

// Field validation shared by the parser and the pipeline entry point.
void validate_config(const RunConfig& cfg);

}  // namespace evflow
