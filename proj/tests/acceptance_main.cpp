// Acceptance harness: eight end-to-end checks, one PASS/FAIL line each.
// Exit status 0 iff every criterion passes. Tolerances and runtime caps are
// pinned in the criterion bodies.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hotv/cantor.hpp"
#include "hotv/ext_real.hpp"
#include "hotv/hot.hpp"
#include "hotv/relaxed_energy.hpp"
#include "hotv/rof.hpp"
#include "hotv/signals.hpp"
#include "hotv/weights.hpp"

using namespace hotv;

namespace {

struct Checker {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      detail += "\n      - ";
      detail += msg;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --- 1: staircase reproduction window ---------------------------------------
void criterion_staircase(Checker& c) {
  const auto [c1, c2] = solve_c1_c2(make_ramp_datum(), 9.0);
  c.expect(std::abs(c1 - 1.0 / 3.0) <= 1e-10, "ramp c1 != 1/3: " + fmt(c1));
  c.expect(std::abs(c2 - 2.0 / 3.0) <= 1e-10, "ramp c2 != 2/3: " + fmt(c2));
  for (int n : {10, 100, 1000}) {
    const StaircaseReport rep = staircase_experiment(n, 9.0);
    c.expect(std::abs(rep.a_n - 1.0 / 3.0) <= 1.0 / n + 1e-9,
             "n=" + std::to_string(n) + ": |a_n - 1/3| too large: " + fmt(rep.a_n));
    c.expect(rep.max_dev <= 1e-12,
             "n=" + std::to_string(n) + ": window deviation " + fmt(rep.max_dev));
    c.expect(rep.outer_dev <= 1e-12,
             "n=" + std::to_string(n) + ": outer plateaus not constant: " + fmt(rep.outer_dev));
  }
}

// --- 2: discrete vs exact oracle + invariants --------------------------------
void criterion_taut_string(Checker& c) {
  const Grid grid(0.0, 1.0, 2000);
  const DiscreteSignal g = sample_function(grid, [](double x) { return x; });
  const DiscreteSignal u = rof_discrete_minimizer(g, 9.0);
  const RofSolution exact = rof_monotone_minimizer(make_ramp_datum(), 9.0);
  double linf = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    linf = std::max(linf, std::abs(u.values[i] - exact.evaluate(grid.node(i))));
  c.expect(linf <= 5e-3, "ramp n=2000: taut string vs closed form L_inf = " + fmt(linf));

  std::mt19937 rng(20240815);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> inc(1e-3, 2e-2);
  std::uniform_real_distribution<double> lam(0.5, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid sg(0.0, 1.0, 150);
    Eigen::VectorXd vals(sg.n_nodes());
    vals[0] = unif(rng);
    for (int i = 1; i < sg.n_nodes(); ++i)
      vals[i] = vals[i - 1] + (unif(rng) < 0.6 ? 0.0 : inc(rng));
    const DiscreteSignal data(sg, vals);
    const DiscreteSignal w = rof_discrete_minimizer(data, lam(rng));
    const double lo = vals.minCoeff(), hi = vals.maxCoeff();
    bool contained = true, monotone = true;
    for (int i = 0; i < sg.n_nodes(); ++i) {
      if (w.values[i] < lo || w.values[i] > hi) contained = false;
      if (i > 0 && w.values[i] < w.values[i - 1]) monotone = false;
    }
    c.expect(contained, "trial " + std::to_string(trial) + ": maximum principle violated");
    c.expect(monotone, "trial " + std::to_string(trial) + ": monotonicity violated");
    if (!contained || !monotone) break;
  }
}

// --- 3: transform identities --------------------------------------------------
void criterion_transform(Checker& c) {
  for (auto [alpha, p] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}}) {
    const WeightFunction w = make_builtin_weight(alpha, p);
    for (double t = -50.0; t <= 50.0; t += 0.25) {
      const ExtReal back = psi_inverse(w, psi_transform(w, ExtReal(t)));
      if (!back.is_finite()) {
        c.expect(false, "roundtrip left the finite range at t=" + fmt(t));
        break;
      }
      if (std::abs(back.value() - t) > 1e-9 * std::max(1.0, std::abs(t))) {
        c.expect(false, "roundtrip error at alpha=" + fmt(alpha) + ", t=" + fmt(t) + ": " +
                            fmt(std::abs(back.value() - t)));
        break;
      }
    }
  }

  const WeightFunction w1 = make_builtin_weight(2.0, 1.0);
  const double M = w1.total_mass;
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> unif(-8.0, 8.0);
  for (int k = 0; k < 100; ++k) {
    const ExtReal t1(unif(rng)), t2(unif(rng));
    for (int nu : {1, -1}) {
      const double phi = jump_penalty(w1, nu, t1, t2);
      const double via_psi = nu == 1
                                 ? 2.0 * M - psi_transform(w1, t1) - psi_transform(w1, t2)
                                 : psi_transform(w1, t1) + psi_transform(w1, t2);
      const double reduced = std::abs(psi_transform(w1, t2) - psi_transform(w1, t1)) +
                             jump_penalty_hat(w1, nu, t1, t2);
      if (std::abs(phi - via_psi) > 1e-12) {
        c.expect(false, "penalty != transform identity at sample " + std::to_string(k));
        return;
      }
      if (std::abs(phi - reduced) > 1e-12) {
        c.expect(false, "penalty != |dPsi| + reduced penalty at sample " + std::to_string(k));
        return;
      }
    }
  }
}

// --- 4: energy values ----------------------------------------------------------
void criterion_energy(Checker& c) {
  const double pi = std::acos(-1.0);
  const Grid gsin(0.0, pi, 4000);
  const double f1 =
      energy_F1_discrete(sample_function(gsin, [](double x) { return std::sin(x); }),
                         make_builtin_weight(2.0, 1.0));
  c.expect(std::abs(f1 - 4.0) <= 2e-3, "F1(sin) = " + fmt(f1) + ", want 4");

  const Grid gsq(0.0, 1.0, 4000);
  const double f2 = energy_Fp_discrete(sample_function(gsq, [](double x) { return x * x; }),
                                       make_builtin_weight(3.0, 2.0));
  c.expect(std::abs(f2 - 3.75) <= 2e-3, "F2(x^2) = " + fmt(f2) + ", want 3.75");

  PiecewiseBVFunction v;
  v.a = 0.0;
  v.b = 1.0;
  Piece left{0.0, 0.5, 0.0, Eigen::VectorXd::Zero(4)};
  Piece right{0.5, 1.0, 1.0, Eigen::VectorXd::Zero(4)};
  v.pieces = {left, right};
  v.jumps.emplace_back(0.5, 1.0, ExtReal(0.0), ExtReal(0.0));
  const EnergyBreakdown bd = energy_F1_relaxed(v, make_builtin_weight(2.0, 1.0));
  c.expect(bd.total.is_finite() && bd.total.value() == 5.0,
           "relaxed unit jump != 5 exactly: " + fmt(bd.total.value()));
}

// --- 5: gradient check -----------------------------------------------------------
void criterion_gradient(Checker& c) {
  const Grid grid(0.0, 1.0, 200);
  std::mt19937 rng(20240815);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd uv(grid.n_nodes()), gv(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    uv[i] = unif(rng);
    gv[i] = unif(rng);
  }
  const DiscreteSignal u(grid, uv), g(grid, gv);
  HotConfig cfg;
  cfg.lambda = 3.0;
  cfg.weight = make_builtin_weight(2.0, 1.0);
  cfg.eps_abs = 1e-3;
  const Eigen::VectorXd grad = objective_gradient(u, g, cfg);
  const double step = 1e-6;
  std::uniform_int_distribution<int> pick(0, grid.n_nodes() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = pick(rng);
    DiscreteSignal up = u, um = u;
    up.values[k] += step;
    um.values[k] -= step;
    const double fd =
        (smoothed_objective(up, g, cfg) - smoothed_objective(um, g, cfg)) / (2.0 * step);
    const double rel = std::abs(fd - grad[k]) / std::max(1.0, std::abs(grad[k]));
    if (rel > 1e-5) {
      c.expect(false, "node " + std::to_string(k) + ": relative FD error " + fmt(rel));
      return;
    }
  }
}

// --- 6: anti-staircase sweep -------------------------------------------------------
void criterion_sweep(Checker& c) {
  const std::vector<int> n_list = {10, 50, 100, 200};
  for (auto [alpha, p] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}}) {
    HotConfig cfg;
    cfg.weight = make_builtin_weight(alpha, p);
    const AntiStaircaseReport rep = anti_staircase_experiment(9.0, n_list, cfg, 20);
    const std::string tag = "p=" + fmt(p) + ": ";
    c.expect(rep.all_converged, tag + "a solve failed to converge");
    for (const AntiStaircaseRow& row : rep.rows) {
      const std::string rtag = tag + "n=" + std::to_string(row.n) + ": ";
      c.expect(row.jump_count == 0,
               rtag + std::to_string(row.jump_count) + " detected jumps in the smoothed minimizer");
      c.expect(row.max_abs_slope <= 1.2 * row.max_abs_slope_clean,
               rtag + "slope " + fmt(row.max_abs_slope) + " > 1.2 * clean slope " +
                   fmt(row.max_abs_slope_clean));
      c.expect(row.rof_plateau_breaks >= row.n / 2,
               rtag + "only " + std::to_string(row.rof_plateau_breaks) +
                   " TV plateau breaks in the window");
    }
  }
}

// --- 7: Cantor fixtures ---------------------------------------------------------------
void criterion_cantor(Checker& c) {
  const WeightFunction w = make_builtin_weight(2.0, 1.0);
  for (int m = 1; m <= 8; ++m) {
    const CantorFixture fix = build_cantor_intervals(1.0 / 16.0, m, 2.0);
    double removed = 0.0;
    for (const RemovedInterval& iv : fix.removed) removed += iv.length();
    const std::string tag = "m=" + std::to_string(m) + ": ";
    c.expect(std::abs(fix.remaining_measure() - std::pow(0.125, m)) <= 1e-14 &&
                 std::abs((1.0 - removed) - fix.remaining_measure()) <= 1e-14,
             tag + "remaining measure mismatch");
    const VariationReport rep = variation_bound_check(fix, w);
    for (const LevelVariation& lv : rep.levels) {
      c.expect(std::abs(lv.var_per_interval - lv.var_closed_form) <= 1e-10,
               tag + "level " + std::to_string(lv.level) + ": per-interval variation " +
                   fmt(lv.var_per_interval) + " vs closed form " + fmt(lv.var_closed_form));
    }
    c.expect(rep.total_variation <= rep.series_bound + 1e-12,
             tag + "total variation " + fmt(rep.total_variation) + " exceeds the bound " +
                 fmt(rep.series_bound));
  }
}

// --- 8: relaxed-domain gate --------------------------------------------------------------
void criterion_domain_gate(Checker& c) {
  std::vector<PiecewiseBVFunction> cases;
  {
    PiecewiseBVFunction v;
    v.pieces = {Piece{0.0, 0.5, 0.0, Eigen::VectorXd::Zero(3)},
                Piece{0.5, 1.0, 1.0, Eigen::VectorXd::Zero(3)}};
    v.jumps.emplace_back(0.5, 1.0, ExtReal(0.0), ExtReal(0.0));
    cases.push_back(v);
  }
  {
    PiecewiseBVFunction v;
    v.pieces = {Piece{0.0, 0.25, 0.2, Eigen::VectorXd::Zero(2)},
                Piece{0.25, 0.7, -0.3, Eigen::VectorXd::Zero(2)},
                Piece{0.7, 1.0, 0.4, Eigen::VectorXd::Zero(2)}};
    v.jumps.emplace_back(0.25, -0.5, ExtReal(0.0), ExtReal(0.0));
    v.jumps.emplace_back(0.7, 0.7, ExtReal(0.0), ExtReal(0.0));
    cases.push_back(v);
  }
  int idx = 0;
  for (const PiecewiseBVFunction& v : cases) {
    const std::string tag = "case " + std::to_string(idx++) + ": ";
    const EnergyBreakdown infp = energy_Fp_relaxed(v, make_builtin_weight(3.0, 2.0));
    c.expect(infp.total.is_pos_inf(), tag + "p=2 energy should be +inf");
    const EnergyBreakdown fin = energy_F1_relaxed(v, make_builtin_weight(2.0, 1.0));
    c.expect(fin.total.is_finite(), tag + "p=1 energy should be finite");
  }
}

struct Criterion {
  int id;
  std::string label;
  double time_cap_s;  // <= 0: no cap
  std::function<void(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "staircase reproduction window (exact TV solver)", 1.0, criterion_staircase},
      {2, "taut string vs closed form + exact invariants", 5.0, criterion_taut_string},
      {3, "slope-transform identities and inverse roundtrip", 0.0, criterion_transform},
      {4, "energy values: smooth closed forms and unit-jump cost", 0.0, criterion_energy},
      {5, "analytic gradient vs central differences", 0.0, criterion_gradient},
      {6, "anti-staircase sweep vs TV staircasing", 60.0, criterion_sweep},
      {7, "Cantor fixture measures and variation bound", 1.0, criterion_cantor},
      {8, "relaxed-domain gate at p > 1", 0.0, criterion_domain_gate},
  };

  bool all_ok = true;
  for (const Criterion& cr : criteria) {
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.time_cap_s > 0.0 && secs > cr.time_cap_s) {
      c.expect(false, "runtime " + fmt(secs) + " s exceeds the " + fmt(cr.time_cap_s) + " s cap");
    }
    std::printf("%s  criterion %d: %s (%.2f s)%s\n", c.ok ? "PASS" : "FAIL", cr.id,
                cr.label.c_str(), secs, c.detail.c_str());
    all_ok = all_ok && c.ok;
  }
  return all_ok ? 0 : 1;
}
