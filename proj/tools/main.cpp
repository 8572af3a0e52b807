// skewlab command line: one subcommand per module, JSON or CSV out.
//
// Every run is a pure function of (config, seed): outputs are
// byte-identical across invocations, there is no environment or clock
// input, and every emitted file carries the tool version, the full
// config echo, and the error budgets the numbers were computed under.
// Exit codes: 0 success, 1 usage or domain or resource errors, 2 when an
// independent verification contradicts a claimed result.

#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "skewlab/covertower.hpp"
#include "skewlab/dyadic.hpp"
#include "skewlab/dynamics.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/iter_count.hpp"
#include "skewlab/measures.hpp"
#include "skewlab/series.hpp"
#include "skewlab/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using skewlab::DyadicAngle;
using skewlab::IterCount;
using skewlab::TorusPoint;

struct RunConfig {
  int K = 3;
  std::uint64_t seed = 0;
  std::int64_t precision_bits = 128;
  std::string emit = "json";
  std::string output;
};

// Angles accept both the bit-exact hex-float form ("0x1.8p-3") and a
// decimal literal, which is converted through its exact double value.
DyadicAngle parse_angle(const std::string& text) {
  if (text.find('x') != std::string::npos ||
      text.find('X') != std::string::npos) {
    return DyadicAngle::parse_hex(text);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw skewlab::domain_error("trailing junk in angle: " + text);
    }
    return DyadicAngle::from_double_exact(v);
  } catch (const std::invalid_argument&) {
    throw skewlab::domain_error("cannot parse angle: " + text);
  } catch (const std::out_of_range&) {
    throw skewlab::domain_error("angle out of range: " + text);
  }
}

TorusPoint parse_point(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
    throw skewlab::domain_error("points are written theta1,theta2: " + text);
  }
  return TorusPoint{parse_angle(text.substr(0, comma)),
                    parse_angle(text.substr(comma + 1))};
}

json angle_json(const DyadicAngle& a) {
  return json{{"hex", a.to_hex()}, {"f64", a.to_double()}};
}

json point_json(const TorusPoint& p) {
  return json{{"theta1", angle_json(p.theta1)}, {"theta2", angle_json(p.theta2)}};
}

// Iterate counts print as decimal when they fit a plain integer and fall
// back to the structured power-of-two description for tower-scale counts
// whose decimal expansion would be astronomically long.
std::string count_string(const IterCount& n) {
  return n.is_plain() ? n.to_decimal() : n.describe();
}

const std::map<std::string, skewlab::TestFn>& fn_by_name() {
  static const std::map<std::string, skewlab::TestFn> m{
      {"const1", skewlab::TestFn::CONST_1},
      {"zeta1", skewlab::TestFn::ZETA1},
      {"zeta2", skewlab::TestFn::ZETA2},
      {"zeta1zeta2", skewlab::TestFn::ZETA1_ZETA2},
      {"zeta1bar2", skewlab::TestFn::ZETA1_BAR2},
      {"zeta1sq", skewlab::TestFn::ZETA1_SQ},
      {"zeta2sq", skewlab::TestFn::ZETA2_SQ},
      {"ref", skewlab::TestFn::RE_F},
      {"ftrunc", skewlab::TestFn::F_TRUNC},
  };
  return m;
}

skewlab::TestFn parse_fn(const std::string& name) {
  const auto it = fn_by_name().find(name);
  if (it == fn_by_name().end()) {
    throw skewlab::domain_error("unknown test function: " + name);
  }
  return it->second;
}

std::string fn_name(skewlab::TestFn fn) {
  for (const auto& [name, value] : fn_by_name()) {
    if (value == fn) {
      return name;
    }
  }
  return "?";
}

std::string f64(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json config_json(const RunConfig& cfg) {
  return json{{"K", cfg.K},
              {"seed", cfg.seed},
              {"precision_bits", cfg.precision_bits},
              {"emit", cfg.emit}};
}

// The JSON envelope every report lives in. budgets names the error terms
// that bound the numbers in the payload (series tails, rounding sizes),
// so downstream consumers never have to guess the tolerance.
json envelope(const RunConfig& cfg, const std::string& subcommand,
              json budgets, json result) {
  json out;
  out["tool"] = skewlab::kToolName;
  out["version"] = skewlab::kToolVersion;
  out["subcommand"] = subcommand;
  out["config"] = config_json(cfg);
  out["budgets"] = std::move(budgets);
  out["result"] = std::move(result);
  return out;
}

// CSV carries the same envelope as comment lines above the header row.
std::string csv_preamble(const RunConfig& cfg, const std::string& subcommand,
                         const std::string& budgets) {
  std::ostringstream out;
  out << "# " << skewlab::kToolName << " " << skewlab::kToolVersion << " "
      << subcommand << "\n";
  out << "# K=" << cfg.K << " seed=" << cfg.seed
      << " precision_bits=" << cfg.precision_bits << "\n";
  out << "# budgets: " << budgets << "\n";
  return out.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) {
    throw skewlab::resource_error("cannot open output file: " + cfg.output);
  }
  file << text;
}

void emit_json(const RunConfig& cfg, const json& doc) {
  write_output(cfg, doc.dump(2) + "\n");
}

void require_json_emit(const RunConfig& cfg, const std::string& subcommand) {
  if (cfg.emit != "json") {
    throw skewlab::domain_error(subcommand + " emits JSON only");
  }
}

// ---- constants ---------------------------------------------------------

int run_constants(const RunConfig& cfg) {
  require_json_emit(cfg, "constants");
  skewlab::VSeq v = skewlab::v_seq(cfg.K);
  json vlist = json::array();
  for (int k = 1; k <= v.K(); ++k) {
    vlist.push_back(v.values[static_cast<std::size_t>(k)].get_str());
  }

  // The dense dyadic realization stops at v3; deeper alpha terms are
  // symbolic tails, so the alpha fields are reported at cutoff min(K, 3).
  const int cutoff = std::min(cfg.K, 3);
  skewlab::AlphaPartial alpha = skewlab::alpha_partial(cutoff);

  json fracs = json::array();
  for (int k = 1; k <= cutoff; ++k) {
    skewlab::FracNAlpha fr = skewlab::frac_n_alpha(k, cutoff);
    json row;
    row["k"] = k;
    row["hex"] = fr.value.to_hex();
    row["f64"] = fr.value.to_double();
    row["bound_checkable"] = fr.bound_checkable;
    row["bound_holds"] = fr.bound_holds;
    if (fr.bound_checkable) {
      row["bound_exponent"] = fr.bound_exponent;
    }
    row["cutoff_tail"] = fr.cutoff_tail.to_string();
    fracs.push_back(std::move(row));
  }

  json result;
  result["v"] = std::move(vlist);
  result["alpha_cutoff"] = cutoff;
  result["alpha_hex"] = alpha.value.to_hex();
  result["alpha_f64"] = alpha.value.to_double();
  result["alpha_tail"] = alpha.tail.to_string();
  result["frac_n_alpha"] = std::move(fracs);

  json budgets{{"alpha_tail", alpha.tail.to_string()}};
  emit_json(cfg, envelope(cfg, "constants", budgets, result));
  return 0;
}

// ---- series ------------------------------------------------------------

int run_series(const RunConfig& cfg, const std::string& kind,
               const std::string& theta_text) {
  require_json_emit(cfg, "series");
  const DyadicAngle theta = parse_angle(theta_text);
  skewlab::SeriesEval eval;
  if (kind == "h") {
    eval = skewlab::eval_h(theta, cfg.K);
  } else if (kind == "g") {
    eval = skewlab::eval_g(theta, cfg.K);
  } else if (kind == "H") {
    eval = skewlab::eval_H_trunc(theta, cfg.K);
  } else if (kind == "R") {
    eval = skewlab::eval_R_trunc(theta, cfg.K);
  } else {
    throw skewlab::domain_error("series kind must be h, g, H, or R, got " +
                                kind);
  }

  json result;
  result["kind"] = kind;
  result["theta_hex"] = theta.to_hex();
  result["value_re"] = eval.value.real();
  result["value_im"] = eval.value.imag();
  result["tail_bound"] = eval.tail_bound;
  result["tail_log2"] = eval.tail_log2.to_string();
  result["formal"] = eval.formal;
  result["effective_K"] = eval.effective_K;
  result["dropped_terms"] = eval.dropped_terms;

  json budgets{{"series_tail", eval.tail_log2.to_string()}};
  emit_json(cfg, envelope(cfg, "series", budgets, result));
  return 0;
}

// ---- orbit -------------------------------------------------------------

int run_orbit(const RunConfig& cfg, const std::string& start_text,
              std::int64_t n) {
  if (n < 0 || n > (1 << 20)) {
    throw skewlab::resource_error(
        "orbit is stepwise; use steer or density for long blocks (n <= 2^20)");
  }
  TorusPoint p = parse_point(start_text);
  const std::string budget_note =
      "theta2_rounding=2^-" + std::to_string(cfg.precision_bits) +
      " theta1=exact";

  std::vector<TorusPoint> rows;
  rows.reserve(static_cast<std::size_t>(n) + 1);
  rows.push_back(p);
  for (std::int64_t i = 0; i < n; ++i) {
    p = skewlab::step(p, cfg.K, cfg.precision_bits);
    rows.push_back(p);
  }

  if (cfg.emit == "csv") {
    std::ostringstream out;
    out << csv_preamble(cfg, "orbit", budget_note);
    out << "step,theta1_hex,theta2_hex,theta1_f64,theta2_f64\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << i << "," << rows[i].theta1.to_hex() << ","
          << rows[i].theta2.to_hex() << "," << f64(rows[i].theta1.to_double())
          << "," << f64(rows[i].theta2.to_double()) << "\n";
    }
    write_output(cfg, out.str());
    return 0;
  }

  json jrows = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json row;
    row["step"] = i;
    row["theta1_hex"] = rows[i].theta1.to_hex();
    row["theta2_hex"] = rows[i].theta2.to_hex();
    row["theta1_f64"] = rows[i].theta1.to_double();
    row["theta2_f64"] = rows[i].theta2.to_double();
    jrows.push_back(std::move(row));
  }
  json result{{"start", point_json(rows.front())}, {"n", n},
              {"rows", std::move(jrows)}};
  json budgets{{"theta2_rounding",
                "2^-" + std::to_string(cfg.precision_bits)},
               {"theta1", "exact"}};
  emit_json(cfg, envelope(cfg, "orbit", budgets, result));
  return 0;
}

// ---- steer -------------------------------------------------------------

int run_steer(const RunConfig& cfg, int s, const std::string& start_text) {
  require_json_emit(cfg, "steer");
  TorusPoint p = parse_point(start_text);
  skewlab::SteerResult r =
      skewlab::steer_block(p, s, cfg.K, cfg.precision_bits);

  json result;
  result["s"] = s;
  result["block_length"] = count_string(r.block_length);
  result["u_re"] = r.u.real();
  result["u_im"] = r.u.imag();
  result["theta1_drift_hex"] = r.theta1_drift.to_hex();
  result["theta1_drift_f64"] = r.theta1_drift.to_double();
  result["drift_dust"] = r.drift_dust.to_string();
  result["bound_applicable"] = r.bound_applicable;
  result["bound_holds"] = r.bound_holds;
  result["window_lo"] = r.window_lo;
  result["window_hi"] = r.window_hi;
  result["point"] = point_json(r.point);

  json budgets{{"drift_dust", r.drift_dust.to_string()},
               {"theta2_rounding",
                "2^-" + std::to_string(cfg.precision_bits)}};
  emit_json(cfg, envelope(cfg, "steer", budgets, result));
  return 0;
}

// ---- density -----------------------------------------------------------

int run_density(const RunConfig& cfg, const std::string& start_text,
                const std::string& target_text, double eps) {
  require_json_emit(cfg, "density");
  TorusPoint start = parse_point(start_text);
  TorusPoint target = parse_point(target_text);
  skewlab::DensityCertificate cert =
      skewlab::density_certificate(start, target, eps, cfg.K);
  skewlab::VerifyReport verify = skewlab::verify_certificate(cert, cfg.K);

  json result;
  result["base_point"] = point_json(cert.base_point);
  result["target"] = point_json(cert.target);
  result["epsilon"] = cert.epsilon;
  result["method"] = cert.method;
  result["rotation_steps"] = count_string(cert.rotation_steps);
  result["block_list"] = cert.block_list;
  result["total_steps"] = count_string(cert.total_steps);
  result["achieved_distance"] = cert.achieved_distance;
  result["verify"] = json{{"ok", verify.ok},
                          {"achieved_distance", verify.achieved_distance},
                          {"totals_consistent", verify.totals_consistent}};

  json budgets{{"torus_distance", "exact dyadic angles, double chords"}};
  emit_json(cfg, envelope(cfg, "density", budgets, result));
  if (!verify.ok) {
    std::fprintf(stderr, "density: certificate failed re-verification\n");
    return 2;
  }
  return 0;
}

// ---- measure -----------------------------------------------------------

int run_measure_cut(const RunConfig& cfg, double s0_turns, double delta,
                    std::uint64_t n) {
  const std::complex<double> s0 = std::polar(1.0, 2.0 * M_PI * s0_turns);
  skewlab::CutMeasure cut = skewlab::mu_s0_delta(s0, delta, cfg.K, n, cfg.seed);

  if (cfg.emit == "csv") {
    std::ostringstream out;
    out << csv_preamble(cfg, "measure",
                        "acceptance_sigma=" +
                            f64(std::sqrt(delta * (1.0 - delta) /
                                          static_cast<double>(cut.attempted))));
    out << "index,theta1_hex,theta2_hex\n";
    for (std::size_t i = 0; i < cut.measure.samples.size(); ++i) {
      const TorusPoint& p = cut.measure.samples[i].point;
      out << i << "," << p.theta1.to_hex() << "," << p.theta2.to_hex() << "\n";
    }
    write_output(cfg, out.str());
    return 0;
  }

  const double sigma =
      std::sqrt(delta * (1.0 - delta) / static_cast<double>(cut.attempted));
  json result;
  result["mode"] = "cut";
  result["s0_turns"] = s0_turns;
  result["delta"] = delta;
  result["attempted"] = cut.attempted;
  result["accepted"] = cut.accepted;
  result["acceptance_fraction"] = cut.acceptance_fraction;
  result["expected_fraction"] = delta;
  result["fraction_sigma"] = sigma;

  json budgets{{"acceptance_sigma", sigma},
               {"band_test", "exact 128-bit fractional arithmetic"}};
  emit_json(cfg, envelope(cfg, "measure", budgets, result));
  return 0;
}

int run_measure_graph(const RunConfig& cfg, double s0_turns, int grid_bits) {
  require_json_emit(cfg, "measure");
  skewlab::GraphMeasure gm;
  gm.s0 = std::polar(1.0, 2.0 * M_PI * s0_turns);
  gm.K = cfg.K;
  gm.grid_bits = grid_bits;

  json rows = json::array();
  std::vector<skewlab::TestFn> fns = skewlab::trig_battery();
  fns.push_back(skewlab::TestFn::RE_F);
  fns.push_back(skewlab::TestFn::F_TRUNC);
  for (skewlab::TestFn fn : fns) {
    const std::complex<double> v = skewlab::graph_integrate(gm, fn);
    rows.push_back(json{{"fn", fn_name(fn)}, {"re", v.real()}, {"im", v.imag()}});
  }

  json result{{"mode", "graph"},
              {"s0_turns", s0_turns},
              {"grid_bits", grid_bits},
              {"integrals", std::move(rows)}};
  json budgets{{"quadrature", "uniform dyadic grid, 2^" +
                                  std::to_string(grid_bits) + " points"}};
  emit_json(cfg, envelope(cfg, "measure", budgets, result));
  return 0;
}

int run_measure_birkhoff(const RunConfig& cfg, const std::string& start_text,
                         const std::string& fn_text, std::uint64_t n) {
  TorusPoint p = parse_point(start_text);
  skewlab::TestFn fn = parse_fn(fn_text);
  std::vector<skewlab::BirkhoffRow> rows = skewlab::birkhoff(p, fn, n, cfg.K);

  if (cfg.emit == "csv") {
    std::ostringstream out;
    out << csv_preamble(cfg, "measure", "theta2_rounding=2^-128");
    out << "n,avg_re,avg_im\n";
    for (const skewlab::BirkhoffRow& row : rows) {
      out << row.n << "," << f64(row.average.real()) << ","
          << f64(row.average.imag()) << "\n";
    }
    write_output(cfg, out.str());
    return 0;
  }

  json jrows = json::array();
  for (const skewlab::BirkhoffRow& row : rows) {
    jrows.push_back(json{
        {"n", row.n}, {"re", row.average.real()}, {"im", row.average.imag()}});
  }
  json result{{"mode", "birkhoff"},
              {"start", point_json(p)},
              {"fn", fn_text},
              {"rows", std::move(jrows)}};
  json budgets{{"theta2_rounding", "2^-128"}};
  emit_json(cfg, envelope(cfg, "measure", budgets, result));
  return 0;
}

int run_measure_kb(const RunConfig& cfg, const std::string& maps_text,
                   const std::string& start_text, double angle_turns,
                   double beta, std::uint64_t horizon, int cloud) {
  require_json_emit(cfg, "measure");
  std::vector<skewlab::FiberMap> maps;
  std::stringstream names(maps_text);
  std::string name;
  while (std::getline(names, name, ',')) {
    if (name == "rotation") {
      maps.push_back(skewlab::rotation_map(
          DyadicAngle::from_double_exact(angle_turns)));
    } else if (name == "furstenberg") {
      maps.push_back(skewlab::furstenberg_map(cfg.K));
    } else if (name == "attractor") {
      maps.push_back(skewlab::attractor_map(beta));
    } else {
      throw skewlab::domain_error(
          "map must be rotation, furstenberg, or attractor, got " + name);
    }
  }

  skewlab::KbOptions opt;
  opt.horizon = horizon;
  opt.seed = cfg.seed;
  opt.cloud = cloud;
  opt.K = cfg.K;
  if (!start_text.empty()) {
    opt.start = parse_point(start_text);
  }
  skewlab::KbReport report = skewlab::krylov_bogolyubov(maps, opt);

  json result;
  result["mode"] = "kb";
  result["maps"] = maps_text;
  result["horizon"] = horizon;
  result["cloud"] = cloud;
  result["checkpoints"] = report.checkpoints;
  result["defects"] = report.defects;
  result["final_defect"] = report.final_defect;
  result["nonconvergent"] = report.nonconvergent;
  result["w1_theta1"] = report.w1_theta1;
  result["samples_kept"] = report.measure.samples.size();

  json budgets{{"defect_battery", "6 trigonometric monomials"},
               {"nonconvergence_floor", 1e-9}};
  emit_json(cfg, envelope(cfg, "measure", budgets, result));
  return 0;
}

// ---- tower -------------------------------------------------------------

std::string cocycle_string(const skewlab::Cocycle& c) {
  std::string out(c.size(), '0');
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] & 1) {
      out[i] = '1';
    }
  }
  return out;
}

skewlab::Cocycle parse_cocycle(const std::string& text) {
  skewlab::Cocycle c(text.size(), 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw skewlab::domain_error("cocycles are 0/1 strings, got " + text);
    }
    c[i] = static_cast<std::uint8_t>(text[i] - '0');
  }
  return c;
}

// All nontrivial reduced words up to max_len over the genus-g alphabet,
// the tower's standard test universe.
std::vector<skewlab::Word> word_universe(const skewlab::Presentation& G,
                                         int max_len) {
  std::vector<int> letters;
  for (int i = 1; i <= G.n_generators; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::vector<skewlab::Word> out;
  std::vector<skewlab::Word> frontier{skewlab::Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<skewlab::Word> next;
    for (const skewlab::Word& w : frontier) {
      for (int c : letters) {
        if (!w.empty() && w.back() == -c) {
          continue;
        }
        skewlab::Word grown = w;
        grown.push_back(c);
        if (!skewlab::reduce(G, grown).trivial) {
          out.push_back(grown);
        }
        next.push_back(std::move(grown));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

int run_tower(const RunConfig& cfg, int genus, int max_word_len, int depth) {
  require_json_emit(cfg, "tower");
  skewlab::Presentation G = skewlab::surface_group(genus);
  std::vector<skewlab::Word> words = word_universe(G, max_word_len);
  skewlab::CoverTower tower = skewlab::open_all(G, words, depth);
  skewlab::TowerVerifyReport verify = skewlab::verify_tower(tower);

  std::map<int, int> histogram;
  bool all_open = true;
  json entries = json::array();
  for (std::size_t i = 0; i < tower.entries.size(); ++i) {
    const skewlab::WordTowerEntry& e = tower.entries[i];
    all_open = all_open && e.open;
    if (e.open) {
      ++histogram[e.open_level];
    }
    json row;
    row["word"] = e.word;
    row["open"] = e.open;
    row["open_level"] = e.open_level;
    json path = json::array();
    for (const skewlab::Cocycle& c : e.path) {
      path.push_back(cocycle_string(c));
    }
    row["path"] = std::move(path);
    row["verified"] = verify.words[i].ok;
    entries.push_back(std::move(row));
  }

  json hist;
  for (const auto& [level, count] : histogram) {
    hist[std::to_string(level)] = count;
  }

  json result;
  result["genus"] = genus;
  result["max_word_len"] = max_word_len;
  result["depth"] = depth;
  result["word_count"] = words.size();
  result["histogram"] = std::move(hist);
  result["all_open"] = all_open;
  result["verified"] = verify.all_ok;
  result["covers_built"] = tower.steps.size();
  result["entries"] = std::move(entries);

  json budgets{{"verification", "independent streaming coset walk"}};
  emit_json(cfg, envelope(cfg, "tower", budgets, result));
  if (!all_open || !verify.all_ok) {
    std::fprintf(stderr, "tower: %s\n",
                 !all_open ? "some words did not open within the depth budget"
                           : "verification rejected a claimed certificate");
    return 2;
  }
  return 0;
}

int run_tower_verify(const RunConfig& cfg, const std::string& path) {
  require_json_emit(cfg, "tower");
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw skewlab::resource_error("cannot open tower file: " + path);
  }
  json doc;
  try {
    file >> doc;
  } catch (const json::exception& ex) {
    throw skewlab::domain_error(std::string("malformed tower file: ") +
                                ex.what());
  }

  skewlab::CoverTower tower;
  try {
    const json& result = doc.at("result");
    tower.base = skewlab::surface_group(result.at("genus").get<int>());
    tower.max_depth = result.at("depth").get<int>();
    for (const json& row : result.at("entries")) {
      skewlab::WordTowerEntry e;
      e.word = row.at("word").get<skewlab::Word>();
      e.open = row.at("open").get<bool>();
      e.open_level = row.at("open_level").get<int>();
      for (const json& c : row.at("path")) {
        e.path.push_back(parse_cocycle(c.get<std::string>()));
      }
      tower.entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw skewlab::domain_error(std::string("tower file missing fields: ") +
                                ex.what());
  }

  skewlab::TowerVerifyReport verify = skewlab::verify_tower(tower);
  json words = json::array();
  for (const skewlab::VerifyWordReport& wr : verify.words) {
    words.push_back(json{{"checked", wr.checked},
                         {"ok", wr.ok},
                         {"parities", wr.parities},
                         {"note", wr.note}});
  }
  json result{{"file", path},
              {"entries", tower.entries.size()},
              {"verified", verify.all_ok},
              {"words", std::move(words)}};
  json budgets{{"verification", "independent streaming coset walk"}};
  emit_json(cfg, envelope(cfg, "tower verify", budgets, result));
  if (!verify.all_ok) {
    std::fprintf(stderr, "tower verify: certificate check failed\n");
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  CLI::App app{"desk-scale laboratory for a minimal, non-uniquely ergodic "
               "skew product and its covering towers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(skewlab::kToolName) + " " +
                                        skewlab::kToolVersion);
  app.set_config("--config", "", "key=value configuration file; flags win");

  app.add_option("--K", cfg.K, "series cutoff")->capture_default_str();
  app.add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  app.add_option("--precision-bits", cfg.precision_bits,
                 "theta2 fractional bits")
      ->capture_default_str();
  app.add_option("--emit", cfg.emit, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "output file (default stdout)");

  CLI::App* cmd_constants =
      app.add_subcommand("constants", "tower heights and alpha");

  std::string series_kind = "h";
  std::string series_theta = "0x0p+0";
  CLI::App* cmd_series =
      app.add_subcommand("series", "evaluate a truncated series");
  cmd_series->add_option("--kind", series_kind, "h, g, H, or R")
      ->capture_default_str();
  cmd_series->add_option("--theta", series_theta, "angle (hex or decimal)")
      ->capture_default_str();

  std::string orbit_start = "0x0p+0,0x0p+0";
  std::int64_t orbit_n = 100;
  CLI::App* cmd_orbit = app.add_subcommand("orbit", "stepwise orbit table");
  cmd_orbit->add_option("--start", orbit_start, "theta1,theta2")
      ->capture_default_str();
  cmd_orbit->add_option("--n", orbit_n, "number of steps")
      ->capture_default_str();

  int steer_s = 2;
  std::string steer_start = "0x0p+0,0x0p+0";
  CLI::App* cmd_steer =
      app.add_subcommand("steer", "one closed-form steering block");
  cmd_steer->add_option("--s", steer_s, "block scale (2 or 3)")
      ->capture_default_str();
  cmd_steer->add_option("--start", steer_start, "theta1,theta2")
      ->capture_default_str();

  std::string density_start = "0x0p+0,0x0p+0";
  std::string density_target;
  double density_eps = 0.05;
  CLI::App* cmd_density =
      app.add_subcommand("density", "constructive density certificate");
  cmd_density->add_option("--start", density_start, "theta1,theta2")
      ->capture_default_str();
  cmd_density->add_option("--target", density_target, "theta1,theta2")
      ->required();
  cmd_density->add_option("--eps", density_eps, "target distance")
      ->capture_default_str();

  std::string measure_mode = "cut";
  double measure_s0_turns = 0.0;
  double measure_delta = 0.1;
  std::uint64_t measure_n = 100000;
  int measure_grid_bits = 14;
  std::string measure_start = "0x0p+0,0x0p+0";
  std::string measure_fn = "ftrunc";
  std::string measure_maps = "rotation";
  double measure_angle = 0.6180339887498949;
  double measure_beta = 0.1;
  std::uint64_t measure_horizon = 100000;
  int measure_cloud = 16;
  std::string measure_kb_start;
  CLI::App* cmd_measure =
      app.add_subcommand("measure", "invariant measure experiments");
  cmd_measure->add_option("--mode", measure_mode, "cut, graph, birkhoff, kb")
      ->check(CLI::IsMember({"cut", "graph", "birkhoff", "kb"}))
      ->capture_default_str();
  cmd_measure->add_option("--s0-turns", measure_s0_turns,
                          "arg(s0) in turns (cut, graph)")
      ->capture_default_str();
  cmd_measure->add_option("--delta", measure_delta, "band width (cut)")
      ->capture_default_str();
  cmd_measure->add_option("--n", measure_n, "sample or step count")
      ->capture_default_str();
  cmd_measure->add_option("--grid-bits", measure_grid_bits,
                          "log2 quadrature points (graph)")
      ->capture_default_str();
  cmd_measure->add_option("--start", measure_start, "orbit start (birkhoff)")
      ->capture_default_str();
  cmd_measure->add_option("--fn", measure_fn, "test function (birkhoff)")
      ->capture_default_str();
  cmd_measure->add_option("--maps", measure_maps,
                          "comma list: rotation, furstenberg, attractor (kb)")
      ->capture_default_str();
  cmd_measure->add_option("--angle-turns", measure_angle,
                          "rotation angle in turns (kb)")
      ->capture_default_str();
  cmd_measure->add_option("--beta", measure_beta, "attractor strength (kb)")
      ->capture_default_str();
  cmd_measure->add_option("--horizon", measure_horizon, "Cesaro horizon (kb)")
      ->capture_default_str();
  cmd_measure->add_option("--cloud", measure_cloud, "start cloud size (kb)")
      ->capture_default_str();
  cmd_measure->add_option("--kb-start", measure_kb_start,
                          "single start point (kb; default Haar cloud)");

  int tower_genus = 2;
  int tower_max_word_len = 4;
  int tower_depth = 3;
  std::string tower_verify_file;
  CLI::App* cmd_tower =
      app.add_subcommand("tower", "open words along double covers");
  cmd_tower->add_option("--genus", tower_genus, "base surface genus")
      ->capture_default_str();
  cmd_tower->add_option("--max-word-len", tower_max_word_len,
                        "word universe length cap")
      ->capture_default_str();
  cmd_tower->add_option("--depth", tower_depth, "maximum tower depth")
      ->capture_default_str();
  CLI::App* cmd_tower_verify =
      cmd_tower->add_subcommand("verify", "re-check an emitted tower file");
  cmd_tower_verify->add_option("file", tower_verify_file, "tower JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_constants->parsed()) {
      return run_constants(cfg);
    }
    if (cmd_series->parsed()) {
      return run_series(cfg, series_kind, series_theta);
    }
    if (cmd_orbit->parsed()) {
      return run_orbit(cfg, orbit_start, orbit_n);
    }
    if (cmd_steer->parsed()) {
      return run_steer(cfg, steer_s, steer_start);
    }
    if (cmd_density->parsed()) {
      return run_density(cfg, density_start, density_target, density_eps);
    }
    if (cmd_measure->parsed()) {
      if (measure_mode == "cut") {
        return run_measure_cut(cfg, measure_s0_turns, measure_delta,
                               measure_n);
      }
      if (measure_mode == "graph") {
        return run_measure_graph(cfg, measure_s0_turns, measure_grid_bits);
      }
      if (measure_mode == "birkhoff") {
        return run_measure_birkhoff(cfg, measure_start, measure_fn,
                                    measure_n);
      }
      return run_measure_kb(cfg, measure_maps, measure_kb_start,
                            measure_angle, measure_beta, measure_horizon,
                            measure_cloud);
    }
    if (cmd_tower->parsed()) {
      if (cmd_tower_verify->parsed()) {
        return run_tower_verify(cfg, tower_verify_file);
      }
      return run_tower(cfg, tower_genus, tower_max_word_len, tower_depth);
    }
  } catch (const skewlab::verify_error& ex) {
    std::fprintf(stderr, "verification failure: %s\n", ex.what());
    return 2;
  } catch (const skewlab::domain_error& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  } catch (const skewlab::resource_error& ex) {
    std::fprintf(stderr, "resource error: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 1;
}
