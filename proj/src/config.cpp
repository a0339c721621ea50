#include "evflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evflow/errors.hpp"
#include "evflow/io.hpp"

namespace evflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    fail(Err::ParseError, "line " + std::to_string(line) + ": value of '" +
                              key + "' is not a number: '" + v + "'");
  }
}

long long parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    fail(Err::ParseError, "line " + std::to_string(line) + ": value of '" +
                              key + "' is not an integer: '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  fail(Err::ParseError, "line " + std::to_string(line) + ": value of '" +
                            key + "' is not a boolean (0/1/true/false)");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    require(eq != std::string::npos, Err::ParseError,
            name + " line " + std::to_string(line_no) +
                ": expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    require(!key.empty(), Err::ParseError,
            name + " line " + std::to_string(line_no) + ": empty key");

    if (key == "input1") {
      cfg.input1 = val;
    } else if (key == "input2") {
      cfg.input2 = val;
    } else if (key == "input3") {
      cfg.input3 = val;
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "epsilon1") {
      cfg.epsilon1 = parse_double(val, key, line_no);
    } else if (key == "epsilon2") {
      cfg.epsilon2 = parse_double(val, key, line_no);
    } else if (key == "epsilon3") {
      cfg.epsilon3 = parse_double(val, key, line_no);
    } else if (key == "n_t") {
      cfg.n_t = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "k") {
      cfg.k = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "estimator") {
      cfg.estimator = val;
    } else if (key == "threshold") {
      cfg.threshold = parse_double(val, key, line_no);
    } else if (key == "dispersion_grid") {
      cfg.dispersion_grid = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "track_window") {
      cfg.track_window = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "track_p1") {
      cfg.track_p1 = parse_double(val, key, line_no);
    } else if (key == "track_p2") {
      cfg.track_p2 = parse_double(val, key, line_no);
    } else if (key == "track_beam") {
      cfg.track_beam = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "geometry") {
      cfg.geometry = val;
    } else if (key == "rank") {
      cfg.rank = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "eig_clamp") {
      cfg.eig_clamp = parse_double(val, key, line_no);
    } else if (key == "ell") {
      cfg.ell = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "embedding") {
      cfg.embedding = val;
    } else if (key == "hull_grid") {
      cfg.hull_grid = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "seed") {
      cfg.seed = static_cast<uint64_t>(parse_int(val, key, line_no));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_int(val, key, line_no));
    } else if (key == "svg") {
      cfg.svg = parse_bool(val, key, line_no);
    } else {
      fail(Err::ParseError, name + " line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), Err::IoError, "cannot open config file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream o;
  o << "input1 = " << cfg.input1 << "\n";
  o << "input2 = " << cfg.input2 << "\n";
  if (!cfg.input3.empty()) o << "input3 = " << cfg.input3 << "\n";
  o << "out_dir = " << cfg.out_dir << "\n";
  o << "epsilon1 = " << format_g17(cfg.epsilon1) << "\n";
  o << "epsilon2 = " << format_g17(cfg.epsilon2) << "\n";
  if (!cfg.input3.empty())
    o << "epsilon3 = " << format_g17(cfg.epsilon3) << "\n";
  o << "n_t = " << cfg.n_t << "\n";
  o << "k = " << cfg.k << "\n";
  o << "estimator = " << cfg.estimator << "\n";
  o << "threshold = " << format_g17(cfg.threshold) << "\n";
  o << "dispersion_grid = " << cfg.dispersion_grid << "\n";
  o << "track_window = " << cfg.track_window << "\n";
  o << "track_p1 = " << format_g17(cfg.track_p1) << "\n";
  o << "track_p2 = " << format_g17(cfg.track_p2) << "\n";
  o << "track_beam = " << cfg.track_beam << "\n";
  o << "geometry = " << cfg.geometry << "\n";
  o << "rank = " << cfg.rank << "\n";
  o << "eig_clamp = " << format_g17(cfg.eig_clamp) << "\n";
  o << "ell = " << cfg.ell << "\n";
  o << "embedding = " << cfg.embedding << "\n";
  o << "hull_grid = " << cfg.hull_grid << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "threads = " << cfg.threads << "\n";
  o << "svg = " << (cfg.svg ? 1 : 0) << "\n";
  return o.str();
}

void validate_config(const RunConfig& cfg) {
  require(!cfg.input1.empty() && !cfg.input2.empty(), Err::ParseError,
          "config needs input1 and input2");
  require(!cfg.out_dir.empty(), Err::ParseError, "config needs out_dir");
  require(cfg.n_t >= 2, Err::GridTooCoarse,
          "n_t must be at least 2");
  require(cfg.k >= 1, Err::OutOfRange, "k must be at least 1");
  require(cfg.estimator == "dispersion" || cfg.estimator == "arclength",
          Err::ParseError,
          "estimator must be 'dispersion' or 'arclength'");
  require(cfg.threshold > 0.0 && cfg.threshold < 1.0, Err::OutOfRange,
          "threshold must lie in (0, 1)");
  require(cfg.dispersion_grid >= 2, Err::GridTooCoarse,
          "dispersion_grid must be at least 2");
  require(cfg.track_window >= 1, Err::OutOfRange,
          "track_window must be at least 1");
  require(cfg.track_p1 >= 0.0 && cfg.track_p2 >= 0.0 &&
              cfg.track_p1 + cfg.track_p2 < 1.0,
          Err::OutOfRange, "track_p1 + track_p2 must stay below 1");
  require(cfg.track_beam >= 1, Err::OutOfRange,
          "track_beam must be at least 1");
  require(cfg.geometry == "auto" || cfg.geometry == "spd" ||
              cfg.geometry == "spsd",
          Err::ParseError, "geometry must be auto, spd, or spsd");
  if (cfg.geometry == "spsd")
    require(cfg.rank >= 1, Err::OutOfRange,
            "spsd geometry needs rank >= 1");
  require(cfg.eig_clamp >= 0.0, Err::OutOfRange,
          "eig_clamp must be non-negative");
  require(cfg.ell >= 1, Err::OutOfRange, "ell must be at least 1");
  require(cfg.embedding == "common" || cfg.embedding == "top",
          Err::ParseError, "embedding must be 'common' or 'top'");
  require(cfg.hull_grid >= 2, Err::GridTooCoarse,
          "hull_grid must be at least 2");
  require(cfg.threads >= 1, Err::OutOfRange, "threads must be at least 1");
}

}  // namespace evflow
