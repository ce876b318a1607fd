#include "hotv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hotv/cantor.hpp"
#include "hotv/errors.hpp"
#include "hotv/ext_real.hpp"
#include "hotv/hot.hpp"
#include "hotv/io_util.hpp"
#include "hotv/json_writer.hpp"
#include "hotv/relaxed_energy.hpp"
#include "hotv/rof.hpp"
#include "hotv/signals.hpp"
#include "hotv/weights.hpp"

namespace hotv {

namespace {

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

// Every record carries the schema version, the subcommand, and the full
// resolved configuration, so a result file is self-describing.
JsonValue make_envelope(const std::string& subcommand, JsonValue config, JsonValue result) {
  JsonValue doc = JsonValue::object();
  doc.set("schema", 1);
  doc.set("subcommand", subcommand);
  doc.set("config", std::move(config));
  doc.set("result", std::move(result));
  return doc;
}

void emit_json(const std::string& out_path, const JsonValue& doc) {
  const std::string text = doc.dump(2);
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_atomic(out_path, text);
  }
}

JsonValue jump_to_json(const JumpRecord& r) {
  JsonValue j = JsonValue::object();
  j.set("x", r.x);
  j.set("jump", r.jump);
  j.set("nu", r.nu);
  j.set("left_slope", JsonValue(r.left_slope));
  j.set("right_slope", JsonValue(r.right_slope));
  return j;
}

JsonValue breakdown_to_json(const EnergyBreakdown& e) {
  JsonValue j = JsonValue::object();
  j.set("tv_term", e.tv_term);
  j.set("diffuse_term", e.diffuse_term);
  j.set("jump_term", e.jump_term);
  j.set("total", JsonValue(e.total));
  return j;
}

JsonValue membership_to_json(const MembershipReport& m) {
  JsonValue j = JsonValue::object();
  j.set("transform_variation", m.transform_variation);
  j.set("transform_sobolev", m.transform_sobolev);
  JsonValue kinks = JsonValue::array();
  for (double x : m.kink_positions) kinks.push_back(x);
  j.set("kink_positions", std::move(kinks));
  JsonValue checks = JsonValue::array();
  for (const auto& c : m.jump_checks) {
    JsonValue jc = JsonValue::object();
    jc.set("x", c.x);
    jc.set("sign_slope_compatible", c.sign_slope_compatible);
    jc.set("divergence_consistent", c.divergence_consistent);
    checks.push_back(std::move(jc));
  }
  j.set("jump_checks", std::move(checks));
  j.set("cantor_atoms_present", m.cantor_atoms_present);
  j.set("in_domain", m.in_domain);
  return j;
}

// ---------------------------------------------------------------------------
// Piecewise-function JSON input (for energy-eval)
// ---------------------------------------------------------------------------

ExtReal ext_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return ExtReal(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return ExtReal::pos_inf();
    if (s == "-inf") return ExtReal::neg_inf();
  }
  throw ValidationError(std::string(what) +
                        ": expected a number or \"inf\"/\"-inf\"");
}

double number_at(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValidationError(std::string("piecewise input: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

PiecewiseBVFunction piecewise_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("piecewise input: not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("pieces") || !j["pieces"].is_array()) {
    throw ValidationError("piecewise input: top-level object with a 'pieces' array required");
  }

  PiecewiseBVFunction f;
  f.a = number_at(j, "a");
  f.b = number_at(j, "b");
  for (const auto& pj : j["pieces"]) {
    Piece piece;
    piece.x0 = number_at(pj, "x0");
    piece.x1 = number_at(pj, "x1");
    piece.left_value = pj.contains("left_value") ? number_at(pj, "left_value") : 0.0;
    if (!pj.contains("slopes") || !pj["slopes"].is_array() || pj["slopes"].empty()) {
      throw ValidationError("piecewise input: each piece needs a non-empty 'slopes' array");
    }
    piece.slope_samples.resize(static_cast<Eigen::Index>(pj["slopes"].size()));
    Eigen::Index i = 0;
    for (const auto& sj : pj["slopes"]) {
      if (!sj.is_number()) throw ValidationError("piecewise input: slopes must be numbers");
      piece.slope_samples[i++] = sj.get<double>();
    }
    f.pieces.push_back(std::move(piece));
  }
  if (j.contains("jumps")) {
    for (const auto& jj : j["jumps"]) {
      f.jumps.emplace_back(number_at(jj, "x"), number_at(jj, "jump"),
                           jj.contains("left_slope") ? ext_from_json(jj["left_slope"], "left_slope")
                                                     : ExtReal(0.0),
                           jj.contains("right_slope")
                               ? ext_from_json(jj["right_slope"], "right_slope")
                               : ExtReal(0.0));
    }
  }
  if (j.contains("atoms")) {
    for (const auto& aj : j["atoms"]) {
      f.cantor_atoms.push_back({number_at(aj, "x"), number_at(aj, "mass")});
    }
  }
  f.validate();
  return f;
}

// ---------------------------------------------------------------------------
// Subcommand option blocks
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string out;          // JSON destination; empty = stdout
  std::string csv;          // optional CSV destination
  std::string config_path;  // flat key=value file applied where flags were absent
  long seed = 0;            // echoed into the record; no subcommand draws randomness yet
};

void add_common(CLI::App* sub, CommonOpts& o, bool with_csv) {
  sub->add_option("--out", o.out, "write the JSON record here (default: stdout)");
  if (with_csv) {
    sub->add_option("--csv", o.csv, "also write a CSV dump here");
  }
  sub->add_option("--seed", o.seed, "seed echoed into the record for provenance")
      ->capture_default_str();
  sub->add_option("--config", o.config_path,
                  "flat key=value file; explicit flags take precedence");
}

void set_common_config(JsonValue& cfg, const CommonOpts& o) {
  cfg.set("out", o.out);
  cfg.set("csv", o.csv);
  cfg.set("config_file", o.config_path);
  cfg.set("seed", o.seed);
}

// Applies a flat key=value config file to a parsed subcommand.  The library's
// own config reader only runs for the app that drives the parse, never for a
// subcommand, so the file is applied by hand: each key fills the matching
// option only when it was absent from the command line, which keeps explicit
// flags authoritative.  Errors (missing file, unknown key, malformed line,
// unconvertible value) are usage errors.
void apply_config_file(CLI::App* sub, const std::string& path) {
  const auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const std::string at = path + ":" + std::to_string(lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(at + ": expected key=value, got '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ValidationError(at + ": unknown key '" + key + "' for subcommand " + sub->get_name());
    }
    if (opt->count() > 0) continue;  // explicit flags take precedence
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw ValidationError(at + ": bad value '" + value + "' for key '" + key + "': " + e.what());
    }
  }
}

// Config-file values must be able to satisfy mandatory options, so the parser
// cannot enforce them (it checks before the file is read).  This runs after
// the file is applied and reports anything still missing.
void finish_options(CLI::App* sub, const CommonOpts& common,
                    std::initializer_list<const char*> required) {
  if (!common.config_path.empty()) apply_config_file(sub, common.config_path);
  for (const char* name : required) {
    if (sub->get_option_no_throw(name)->count() == 0) {
      throw ValidationError(sub->get_name() + ": " + name +
                            " is required (pass the flag or set it in --config)");
    }
  }
}

struct RofExactOpts {
  CommonOpts common;
  double lambda = 9.0;
  std::string datum = "ramp";
  int n = 10;
  int cells = 1000;
};

struct RofStaircaseOpts {
  CommonOpts common;
  double lambda = 9.0;
  int n = 10;
  int cells = 0;  // 0 = 20 * n
};

struct HotDenoiseOpts {
  CommonOpts common;
  double lambda = 9.0;
  double p = 1.0;
  double alpha = 2.0;
  int n = 10;
  std::string noise = "staircase";
  double amplitude = 0.1;
  int cells = 0;  // 0 = 20 * n
  double eps_abs = 0.0;
  int max_iters = 5000;
  double grad_tol = 1e-8;
  double kappa = 10.0;
  bool cold_start = false;
};

struct EnergyEvalOpts {
  CommonOpts common;
  std::string input;
  std::string format = "auto";
  double p = 1.0;
  double alpha = 2.0;
};

struct CantorOpts {
  CommonOpts common;
  double delta = 1.0 / 16.0;
  int depth = 6;
  double s = 2.0;
  double alpha = 2.0;
  bool skip_variation = false;
};

struct CompareOpts {
  CommonOpts common;
  std::vector<double> lambdas = {9.0};
  std::vector<int> n_list = {10, 50, 100, 200};
  double p = 1.0;
  double alpha = 2.0;
  double eps_abs = 0.0;
  int max_iters = 5000;
  double grad_tol = 1e-8;
  double kappa = 10.0;
  int grid_mult = 20;
  int jobs = 1;
};

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_rof_exact(const RofExactOpts& o) {
  const MonotoneDatum datum =
      o.datum == "ramp" ? make_ramp_datum() : make_staircase_datum(o.n);
  const RofSolution sol = rof_monotone_minimizer(datum, o.lambda);

  JsonValue cfg = JsonValue::object();
  cfg.set("lambda", o.lambda);
  cfg.set("datum", o.datum);
  cfg.set("n", o.n);
  cfg.set("cells", o.cells);
  set_common_config(cfg, o.common);

  JsonValue res = JsonValue::object();
  res.set("lambda", o.lambda);
  res.set("c1", sol.c1);
  res.set("c2", sol.c2);
  res.set("x_low", sol.x_low);
  res.set("x_high", sol.x_high);

  emit_json(o.common.out, make_envelope("rof-exact", std::move(cfg), std::move(res)));
  if (!o.common.csv.empty()) {
    write_signal_csv(o.common.csv, sol.sample(Grid(0.0, 1.0, o.cells)));
  }
  return 0;
}

int cmd_rof_staircase(const RofStaircaseOpts& o) {
  const StaircaseReport rep = staircase_experiment(o.n, o.lambda);
  const int cells = o.cells > 0 ? o.cells : 20 * o.n;

  JsonValue cfg = JsonValue::object();
  cfg.set("lambda", o.lambda);
  cfg.set("n", o.n);
  cfg.set("cells", cells);
  set_common_config(cfg, o.common);

  JsonValue res = JsonValue::object();
  res.set("lambda", rep.lambda);
  res.set("n", rep.n);
  res.set("c1", rep.c1);
  res.set("c2", rep.c2);
  res.set("a_n", rep.a_n);
  res.set("b_n", rep.b_n);
  res.set("err_a", rep.err_a);
  res.set("err_b", rep.err_b);
  res.set("max_dev", rep.max_dev);
  res.set("outer_dev", rep.outer_dev);
  res.set("plateau_low", rep.plateau_low);
  res.set("plateau_high", rep.plateau_high);

  emit_json(o.common.out, make_envelope("rof-staircase", std::move(cfg), std::move(res)));
  if (!o.common.csv.empty()) {
    const RofSolution sol = rof_monotone_minimizer(make_staircase_datum(o.n), o.lambda);
    write_signal_csv(o.common.csv, sol.sample(Grid(0.0, 1.0, cells)));
  }
  return 0;
}

DiscreteSignal build_degraded_signal(const std::string& noise, int n, int cells,
                                     double amplitude) {
  const Grid grid(0.0, 1.0, cells);
  DiscreteSignal g = sample_function(grid, [](double x) { return x; });
  if (noise == "staircase") {
    g.values += noise_family(grid, NoiseKind::StaircaseResidual, n).values;
  } else if (noise == "square") {
    g.values += noise_family(grid, NoiseKind::SquareWave, n, amplitude).values;
  }
  return g;
}

int cmd_hot_denoise(const HotDenoiseOpts& o) {
  const int cells = o.cells > 0 ? o.cells : 20 * o.n;
  const DiscreteSignal g = build_degraded_signal(o.noise, o.n, cells, o.amplitude);

  HotConfig cfg;
  cfg.lambda = o.lambda;
  cfg.weight = make_builtin_weight(o.alpha, o.p);
  cfg.eps_abs = o.eps_abs;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.kappa = o.kappa;

  const HotResult result = o.cold_start ? minimize_hot(g, cfg) : continuation_solve(g, cfg);

  JsonValue jc = JsonValue::object();
  jc.set("lambda", o.lambda);
  jc.set("p", o.p);
  jc.set("alpha", o.alpha);
  jc.set("n", o.n);
  jc.set("noise", o.noise);
  jc.set("amplitude", o.amplitude);
  jc.set("cells", cells);
  jc.set("eps_abs", o.eps_abs);
  jc.set("max_iters", o.max_iters);
  jc.set("grad_tol", o.grad_tol);
  jc.set("kappa", o.kappa);
  jc.set("cold_start", o.cold_start);
  set_common_config(jc, o.common);

  JsonValue res = JsonValue::object();
  res.set("converged", result.converged);
  res.set("energy", result.energy);
  res.set("iterations", result.iterations);
  res.set("grad_norm_final", result.grad_norm_final);
  res.set("max_abs_slope", result.max_abs_slope);
  res.set("jump_count", result.jump_records.size());
  JsonValue jumps = JsonValue::array();
  for (const auto& r : result.jump_records) jumps.push_back(jump_to_json(r));
  res.set("jump_records", std::move(jumps));

  emit_json(o.common.out, make_envelope("hot-denoise", std::move(jc), std::move(res)));
  if (!o.common.csv.empty()) {
    write_signal_csv(o.common.csv, result.minimizer);
  }
  // Outputs are written either way; a non-converged solve is still reported
  // as a numerical failure through the exit code.
  return result.converged ? 0 : 2;
}

int cmd_energy_eval(const EnergyEvalOpts& o) {
  if (o.input.empty()) throw ValidationError("energy-eval: --input is required");
  std::string format = o.format;
  if (format == "auto") {
    const auto dot = o.input.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : o.input.substr(dot + 1);
    format = ext == "json" ? "json" : "csv";
  }
  const WeightFunction w = make_builtin_weight(o.alpha, o.p);

  JsonValue cfg = JsonValue::object();
  cfg.set("input", o.input);
  cfg.set("format", format);
  cfg.set("p", o.p);
  cfg.set("alpha", o.alpha);
  set_common_config(cfg, o.common);

  JsonValue res = JsonValue::object();
  if (format == "csv") {
    const DiscreteSignal u = read_signal_csv(o.input);
    const double energy = o.p == 1.0 ? energy_F1_discrete(u, w) : energy_Fp_discrete(u, w);
    const double tv = total_variation(u);
    EnergyBreakdown b;
    b.tv_term = tv;
    b.diffuse_term = energy - tv;  // the curvature penalty h*sum psi(u')*|u''|^p
    b.jump_term = 0.0;
    b.total = ExtReal(energy);
    res.set("kind", "discrete");
    res.set("breakdown", breakdown_to_json(b));
  } else if (format == "json") {
    const PiecewiseBVFunction f = piecewise_from_json_text(read_text_file(o.input));
    const EnergyBreakdown b =
        o.p == 1.0 ? energy_F1_relaxed(f, w) : energy_Fp_relaxed(f, w);
    res.set("kind", "relaxed");
    res.set("breakdown", breakdown_to_json(b));
    res.set("membership", membership_to_json(membership_diagnostics(f, w)));
  } else {
    throw ValidationError("energy-eval: --format must be auto, csv, or json");
  }

  emit_json(o.common.out, make_envelope("energy-eval", std::move(cfg), std::move(res)));
  return 0;
}

int cmd_cantor(const CantorOpts& o) {
  const CantorFixture fix = build_cantor_intervals(o.delta, o.depth, o.s);

  JsonValue cfg = JsonValue::object();
  cfg.set("delta", o.delta);
  cfg.set("depth", o.depth);
  cfg.set("s", o.s);
  cfg.set("alpha", o.alpha);
  cfg.set("skip_variation", o.skip_variation);
  set_common_config(cfg, o.common);

  JsonValue res = JsonValue::object();
  res.set("c0", fix.c0);
  res.set("removed_count", fix.removed.size());
  res.set("remaining_measure", fix.remaining_measure());
  res.set("integral_w", integral_w(fix));
  if (!o.skip_variation) {
    const WeightFunction w = make_builtin_weight(o.alpha, 1.0);
    const VariationReport rep = variation_bound_check(fix, w);
    JsonValue levels = JsonValue::array();
    for (const auto& lv : rep.levels) {
      JsonValue j = JsonValue::object();
      j.set("level", lv.level);
      j.set("count", lv.count);
      j.set("interval_length", lv.interval_length);
      j.set("var_per_interval", lv.var_per_interval);
      j.set("var_closed_form", lv.var_closed_form);
      levels.push_back(std::move(j));
    }
    JsonValue vj = JsonValue::object();
    vj.set("levels", std::move(levels));
    vj.set("total_variation", rep.total_variation);
    vj.set("series_bound", rep.series_bound);
    vj.set("within_bound", rep.within_bound);
    res.set("variation", std::move(vj));
  }

  emit_json(o.common.out, make_envelope("cantor-fixture", std::move(cfg), std::move(res)));
  if (!o.common.csv.empty()) {
    std::string csv = "level,index,left,right,length\n";
    for (const auto& iv : fix.removed) {
      csv += std::to_string(iv.level);
      csv += ',';
      csv += std::to_string(iv.index);
      csv += ',';
      csv += format_double17(iv.left);
      csv += ',';
      csv += format_double17(iv.right);
      csv += ',';
      csv += format_double17(iv.length());
      csv += '\n';
    }
    write_text_atomic(o.common.csv, csv);
  }
  return 0;
}

int cmd_compare(const CompareOpts& o) {
  if (o.jobs < 1) throw ValidationError("compare: --jobs must be >= 1");
  if (o.lambdas.empty() || o.n_list.empty()) {
    throw ValidationError("compare: --lambda and --n lists must be non-empty");
  }

  HotConfig base;
  base.weight = make_builtin_weight(o.alpha, o.p);
  base.eps_abs = o.eps_abs;
  base.max_iters = o.max_iters;
  base.grad_tol = o.grad_tol;
  base.kappa = o.kappa;

  struct Task {
    int n;
    double lambda;
  };
  std::vector<Task> tasks;
  for (int n : o.n_list) {
    for (double lambda : o.lambdas) tasks.push_back({n, lambda});
  }

  // Fan the independent solves over a small worker pool; results land in
  // pre-assigned slots and are sorted afterwards, so the output does not
  // depend on scheduling.
  std::vector<AntiStaircaseRow> rows(tasks.size());
  std::vector<double> row_lambda(tasks.size(), 0.0);
  std::vector<std::exception_ptr> failures(tasks.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(o.jobs), tasks.size());
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      try {
        rows[i] = anti_staircase_single(tasks[i].lambda, tasks[i].n, base, o.grid_mult);
        row_lambda[i] = tasks[i].lambda;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
    if (tasks[u].n != tasks[v].n) return tasks[u].n < tasks[v].n;
    return tasks[u].lambda < tasks[v].lambda;
  });

  JsonValue cfg = JsonValue::object();
  JsonValue lams = JsonValue::array();
  for (double l : o.lambdas) lams.push_back(l);
  cfg.set("lambda", std::move(lams));
  JsonValue ns = JsonValue::array();
  for (int n : o.n_list) ns.push_back(n);
  cfg.set("n", std::move(ns));
  cfg.set("p", o.p);
  cfg.set("alpha", o.alpha);
  cfg.set("eps_abs", o.eps_abs);
  cfg.set("max_iters", o.max_iters);
  cfg.set("grad_tol", o.grad_tol);
  cfg.set("kappa", o.kappa);
  cfg.set("grid_mult", o.grid_mult);
  cfg.set("jobs", o.jobs);
  set_common_config(cfg, o.common);

  bool all_converged = true;
  bool all_jump_free = true;
  JsonValue rows_json = JsonValue::array();
  for (std::size_t i : order) {
    const AntiStaircaseRow& r = rows[i];
    all_converged = all_converged && r.converged;
    all_jump_free = all_jump_free && r.jump_count == 0;

    JsonValue row = JsonValue::object();
    row.set("n", r.n);
    row.set("lambda", row_lambda[i]);
    row.set("grid_cells", r.grid_cells);
    JsonValue hot = JsonValue::object();
    hot.set("converged", r.converged);
    hot.set("iterations", r.iterations);
    hot.set("energy", r.energy);
    hot.set("max_abs_slope", r.max_abs_slope);
    hot.set("jump_count", r.jump_count);
    hot.set("sup_dev_from_clean", r.sup_dev_from_clean);
    hot.set("max_abs_slope_clean", r.max_abs_slope_clean);
    hot.set("slope_ratio", r.slope_ratio);
    hot.set("c1_proxy_vs_ramp", r.c1_proxy_vs_ramp);
    row.set("hot", std::move(hot));
    JsonValue rof = JsonValue::object();
    rof.set("plateau_breaks", r.rof_plateau_breaks);
    rof.set("detected_jumps", r.rof_detected_jumps);
    rof.set("window_a", r.window_a);
    rof.set("window_b", r.window_b);
    row.set("rof", std::move(rof));
    rows_json.push_back(std::move(row));
  }

  JsonValue res = JsonValue::object();
  res.set("rows", std::move(rows_json));
  res.set("all_converged", all_converged);
  res.set("all_jump_free", all_jump_free);

  emit_json(o.common.out, make_envelope("compare", std::move(cfg), std::move(res)));
  return all_converged ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"1-D total-variation and higher-order restoration experiments"};
  app.name("hotv");
  app.require_subcommand(1);

  RofExactOpts re;
  auto* sub_re = app.add_subcommand(
      "rof-exact", "closed-form TV minimizer for monotone data (plateau levels c1, c2)");
  sub_re->add_option("--lambda", re.lambda, "fidelity weight (required)");
  sub_re->add_option("--datum", re.datum, "data family")
      ->transform(CLI::IsMember({"ramp", "staircase"}))
      ->capture_default_str();
  sub_re->add_option("--n", re.n, "staircase step count (used when --datum staircase)")
      ->capture_default_str();
  sub_re->add_option("--cells", re.cells, "sampling grid cells for the CSV dump")
      ->capture_default_str();
  add_common(sub_re, re.common, true);

  RofStaircaseOpts rs;
  auto* sub_rs = app.add_subcommand(
      "rof-staircase", "staircase reconstruction window report (requires lambda > 4)");
  sub_rs->add_option("--lambda", rs.lambda, "fidelity weight, must exceed 4 (required)");
  sub_rs->add_option("--n", rs.n, "staircase step count (required)");
  sub_rs->add_option("--cells", rs.cells, "CSV sampling cells (0 = 20*n)")
      ->capture_default_str();
  add_common(sub_rs, rs.common, true);

  HotDenoiseOpts hd;
  auto* sub_hd = app.add_subcommand(
      "hot-denoise", "higher-order smoothed restoration of a perturbed ramp");
  sub_hd->add_option("--lambda", hd.lambda, "fidelity weight (required)");
  sub_hd->add_option("--p", hd.p, "curvature exponent (>= 1)")->capture_default_str();
  sub_hd->add_option("--alpha", hd.alpha, "weight tail exponent (> p)")->capture_default_str();
  sub_hd->add_option("--n", hd.n, "perturbation frequency parameter (required)");
  sub_hd->add_option("--noise", hd.noise, "perturbation family")
      ->transform(CLI::IsMember({"none", "staircase", "square"}))
      ->capture_default_str();
  sub_hd->add_option("--amplitude", hd.amplitude, "square-wave amplitude")
      ->capture_default_str();
  sub_hd->add_option("--cells", hd.cells, "grid cells (0 = 20*n)")->capture_default_str();
  sub_hd->add_option("--eps-abs", hd.eps_abs, "smoothing width (0 = data-driven default)")
      ->capture_default_str();
  sub_hd->add_option("--max-iters", hd.max_iters, "iteration cap per stage")
      ->capture_default_str();
  sub_hd->add_option("--grad-tol", hd.grad_tol, "gradient-norm stopping tolerance")
      ->capture_default_str();
  sub_hd->add_option("--kappa", hd.kappa, "jump-detector threshold factor")
      ->capture_default_str();
  sub_hd->add_flag("--cold-start", hd.cold_start,
                   "skip the smoothing continuation and solve at eps-abs directly");
  add_common(sub_hd, hd.common, true);

  EnergyEvalOpts ee;
  auto* sub_ee = app.add_subcommand(
      "energy-eval", "evaluate the higher-order energy on a CSV signal or piecewise JSON");
  sub_ee->add_option("--input", ee.input, "signal CSV or piecewise-function JSON (required)");
  sub_ee->add_option("--format", ee.format, "input interpretation")
      ->transform(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  sub_ee->add_option("--p", ee.p, "curvature exponent (>= 1)")->capture_default_str();
  sub_ee->add_option("--alpha", ee.alpha, "weight tail exponent (> p)")->capture_default_str();
  add_common(sub_ee, ee.common, false);

  CantorOpts cf;
  auto* sub_cf = app.add_subcommand(
      "cantor-fixture", "removed-interval fixture, singular weight, and variation bound");
  sub_cf->add_option("--delta", cf.delta, "end fraction kept at each split, in (0, 1/2) (required)");
  sub_cf->add_option("--depth", cf.depth, "removal generations (required)");
  sub_cf->add_option("--s", cf.s, "plateau growth exponent")->capture_default_str();
  sub_cf->add_option("--alpha", cf.alpha, "paired weight tail exponent")->capture_default_str();
  sub_cf->add_flag("--skip-variation", cf.skip_variation,
                   "emit only the fixture (no paired-weight variation report)");
  add_common(sub_cf, cf.common, true);

  CompareOpts cp;
  auto* sub_cp = app.add_subcommand(
      "compare", "side-by-side sweep: smoothed higher-order vs pure TV restoration");
  sub_cp->add_option("--lambda", cp.lambdas, "fidelity weights (comma-separated or repeated)")
      ->delimiter(',')
      ->capture_default_str();
  sub_cp->add_option("--n", cp.n_list, "staircase step counts (comma-separated or repeated)")
      ->delimiter(',')
      ->capture_default_str();
  sub_cp->add_option("--p", cp.p, "curvature exponent (>= 1)")->capture_default_str();
  sub_cp->add_option("--alpha", cp.alpha, "weight tail exponent (> p)")->capture_default_str();
  sub_cp->add_option("--eps-abs", cp.eps_abs, "smoothing width (0 = data-driven default)")
      ->capture_default_str();
  sub_cp->add_option("--max-iters", cp.max_iters, "iteration cap per stage")
      ->capture_default_str();
  sub_cp->add_option("--grad-tol", cp.grad_tol, "gradient-norm stopping tolerance")
      ->capture_default_str();
  sub_cp->add_option("--kappa", cp.kappa, "jump-detector threshold factor")
      ->capture_default_str();
  sub_cp->add_option("--grid-mult", cp.grid_mult, "grid cells per staircase step")
      ->capture_default_str();
  sub_cp->add_option("--jobs", cp.jobs, "worker threads for independent solves")
      ->capture_default_str();
  add_common(sub_cp, cp.common, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Delegates help/version printing and error messages to the parser, then
    // flattens its exit-code family: anything that is not a help request is a
    // usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sub_re->parsed()) {
      finish_options(sub_re, re.common, {"--lambda"});
      return cmd_rof_exact(re);
    }
    if (sub_rs->parsed()) {
      finish_options(sub_rs, rs.common, {"--lambda", "--n"});
      return cmd_rof_staircase(rs);
    }
    if (sub_hd->parsed()) {
      finish_options(sub_hd, hd.common, {"--lambda", "--n"});
      return cmd_hot_denoise(hd);
    }
    if (sub_ee->parsed()) {
      finish_options(sub_ee, ee.common, {"--input"});
      return cmd_energy_eval(ee);
    }
    if (sub_cf->parsed()) {
      finish_options(sub_cf, cf.common, {"--delta", "--depth"});
      return cmd_cantor(cf);
    }
    if (sub_cp->parsed()) {
      finish_options(sub_cp, cp.common, {});
      return cmd_compare(cp);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;  // unreachable with require_subcommand(1)
}

}  // namespace hotv
