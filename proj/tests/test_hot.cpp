#include <doctest.h>

#include <cmath>
#include <random>

#include "hotv/errors.hpp"
#include "hotv/hot.hpp"
#include "hotv/relaxed_energy.hpp"
#include "hotv/rof.hpp"
#include "hotv/signals.hpp"
#include "hotv/weights.hpp"

using namespace hotv;

namespace {

HotConfig config_p1(double lambda) {
  HotConfig cfg;
  cfg.lambda = lambda;
  cfg.weight = make_builtin_weight(2.0, 1.0);
  return cfg;
}

DiscreteSignal staircase_data(int n, int cells) {
  const Grid grid(0.0, 1.0, cells);
  const DiscreteSignal ramp = sample_function(grid, [](double x) { return x; });
  const DiscreteSignal res = noise_family(grid, NoiseKind::StaircaseResidual, n);
  return DiscreteSignal(grid, ramp.values + res.values);
}

}  // namespace

TEST_CASE("smoothed objective: u = g constant costs exactly zero") {
  const Grid grid(0.0, 1.0, 50);
  const DiscreteSignal g = sample_function(grid, [](double) { return 0.4; });
  HotConfig cfg = config_p1(7.0);
  cfg.eps_abs = 1e-3;
  CHECK(smoothed_objective(g, g, cfg) == 0.0);  // s(0) = 0 by the -eps offset
  const Eigen::VectorXd grad = objective_gradient(g, g, cfg);
  CHECK(grad.norm() == 0.0);
}

TEST_CASE("smoothed objective: eps -> 0 recovers the discrete energy plus fidelity") {
  const double pi = std::acos(-1.0);
  const Grid grid(0.0, pi, 400);
  const DiscreteSignal u = sample_function(grid, [](double x) { return std::sin(x); });
  const DiscreteSignal g = sample_function(grid, [](double) { return 0.0; });
  HotConfig cfg = config_p1(2.0);
  cfg.eps_abs = 1e-8;
  const double exact = energy_F1_discrete(u, cfg.weight) +
                       cfg.lambda * grid.h() * (u.values - g.values).squaredNorm();
  CHECK(std::abs(smoothed_objective(u, g, cfg) - exact) <= 1e-6);
}

TEST_CASE("smoothed objective: strictly increasing in lambda when u != g") {
  const Grid grid(0.0, 1.0, 30);
  const DiscreteSignal g = sample_function(grid, [](double x) { return x; });
  const DiscreteSignal u(grid, g.values.array() + 0.2);
  HotConfig lo = config_p1(1.0);
  HotConfig hi = config_p1(2.5);
  CHECK(smoothed_objective(u, g, hi) > smoothed_objective(u, g, lo));
  // The gap is exactly the fidelity difference.
  const double gap = smoothed_objective(u, g, hi) - smoothed_objective(u, g, lo);
  const double fid = 1.5 * grid.h() * (u.values - g.values).squaredNorm();
  CHECK(gap == doctest::Approx(fid).epsilon(1e-12));
}

TEST_CASE("objective gradient matches central finite differences") {
  const int cells = 200;
  const Grid grid(0.0, 1.0, cells);
  std::mt19937 rng(20240813);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd uv(grid.n_nodes()), gv(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    uv[i] = unif(rng);
    gv[i] = unif(rng);
  }
  DiscreteSignal u(grid, uv), g(grid, gv);
  HotConfig cfg = config_p1(3.0);
  cfg.eps_abs = 1e-3;  // keep the smoothing scale well above the FD step

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
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("minimize_hot: constant data is already optimal") {
  const Grid grid(0.0, 1.0, 40);
  const DiscreteSignal g = sample_function(grid, [](double) { return 1.5; });
  const HotResult res = minimize_hot(g, config_p1(9.0));
  CHECK(res.converged);
  CHECK(res.iterations <= 1);
  CHECK((res.minimizer.values - g.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.energy == 0.0);
}

TEST_CASE("minimize_hot: energy never exceeds the energy of the starting datum") {
  const DiscreteSignal g = staircase_data(8, 120);
  HotConfig cfg = config_p1(9.0);
  const double at_start = smoothed_objective(g, g, cfg);
  const HotResult res = minimize_hot(g, cfg);
  CHECK(res.energy <= at_start + 1e-12);
  CHECK(res.energy == doctest::Approx(smoothed_objective(res.minimizer, g, cfg)).epsilon(1e-12));
}

TEST_CASE("minimize_hot: clean ramp stays Lipschitz-flat with no detected jumps") {
  const Grid grid(0.0, 1.0, 400);
  const DiscreteSignal g = sample_function(grid, [](double x) { return x; });
  HotConfig cfg = config_p1(9.0);
  const HotResult res = continuation_solve(g, cfg);
  CHECK(res.converged);
  CHECK(res.max_abs_slope <= 2.0);
  CHECK(res.jump_records.empty());
}

TEST_CASE("minimize_hot: range containment (empirical max-principle proxy)") {
  const DiscreteSignal g = staircase_data(10, 150);
  HotConfig cfg = config_p1(9.0);
  const HotResult res = continuation_solve(g, cfg);
  CHECK(res.converged);
  const double lo = g.values.minCoeff() - 1e-6;
  const double hi = g.values.maxCoeff() + 1e-6;
  CHECK(res.minimizer.values.minCoeff() >= lo);
  CHECK(res.minimizer.values.maxCoeff() <= hi);
}

TEST_CASE("minimize_hot: halving the smoothing width barely moves the converged energy") {
  const DiscreteSignal g = staircase_data(10, 100);
  HotConfig coarse = config_p1(9.0);
  coarse.eps_abs = 2e-4;
  HotConfig fine = coarse;
  fine.eps_abs = 1e-4;
  const HotResult a = continuation_solve(g, coarse);
  const HotResult b = continuation_solve(g, fine);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.energy - b.energy) <= 10.0 * coarse.eps_abs);
}

TEST_CASE("noise family: staircase residual has sup-norm exactly 1/n and is nonnegative") {
  const Grid grid(0.0, 1.0, 200);
  const DiscreteSignal res = noise_family(grid, NoiseKind::StaircaseResidual, 10);
  CHECK(res.values.maxCoeff() == 0.1);
  CHECK(res.values.minCoeff() >= 0.0);  // (floor(nx)+1)/n >= x everywhere
}

TEST_CASE("noise family: ramp plus staircase residual reproduces the staircase datum") {
  const Grid grid(0.0, 1.0, 200);
  const DiscreteSignal ramp = sample_function(grid, [](double x) { return x; });
  const DiscreteSignal res = noise_family(grid, NoiseKind::StaircaseResidual, 10);
  const MonotoneDatum stairs = make_staircase_datum(10);
  for (int i = 0; i < grid.n_nodes(); ++i)
    CHECK(ramp.values[i] + res.values[i] == stairs.eval(grid.node(i)));
}

TEST_CASE("noise family: square wave alternates +/- amplitude and integrates to zero") {
  const Grid grid(0.0, 1.0, 200);
  const int n = 8;  // even, and n divides the cell count
  const double amp = 0.1;
  const DiscreteSignal sq = noise_family(grid, NoiseKind::SquareWave, n, amp);
  CHECK(sq.values.maxCoeff() == amp);
  CHECK(sq.values.minCoeff() == -amp);
  // Left Riemann sum over the cells: equal-width bands cancel exactly.
  double integral = 0.0;
  for (int i = 0; i < grid.cells; ++i) integral += sq.values[i] * grid.h();
  CHECK(std::abs(integral) <= 1e-12);
}

TEST_CASE("noise family: rejections") {
  const Grid off_domain(0.0, 2.0, 10);
  CHECK_THROWS_AS((void)noise_family(off_domain, NoiseKind::StaircaseResidual, 10), ValidationError);
  const Grid grid(0.0, 1.0, 10);
  CHECK_THROWS_AS((void)noise_family(grid, NoiseKind::SquareWave, 4, 0.0), ValidationError);
  CHECK_THROWS_AS((void)noise_family(grid, NoiseKind::SquareWave, 0, 0.1), ValidationError);
}

TEST_CASE("anti-staircase single row: smoothed solver ignores the steps the TV solver keeps") {
  HotConfig cfg = config_p1(9.0);
  const AntiStaircaseRow row = anti_staircase_single(9.0, 10, cfg, 20);
  CHECK(row.converged);
  CHECK(row.grid_cells == 200);
  CHECK(row.jump_count == 0);
  CHECK(row.max_abs_slope <= 1.2 * row.max_abs_slope_clean);
  CHECK(row.window_a == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(row.window_b == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(row.rof_plateau_breaks >= 5);  // >= n/2 plateau-break events inside the window
  CHECK(row.rof_detected_jumps >= 1);
  CHECK(row.c1_proxy_vs_ramp >= 0.0);
}

TEST_CASE("anti-staircase experiment: report is sorted and aggregates convergence") {
  HotConfig cfg = config_p1(9.0);
  const AntiStaircaseReport rep = anti_staircase_experiment(9.0, {25, 10}, cfg, 12);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].n == 10);
  CHECK(rep.rows[1].n == 25);
  CHECK(rep.lambda == 9.0);
  CHECK(rep.p == 1.0);
  CHECK(rep.all_converged);
  CHECK(rep.all_jump_free);
  for (const AntiStaircaseRow& row : rep.rows) {
    CHECK(row.jump_count == 0);
    CHECK(row.rof_plateau_breaks >= row.n / 2);
  }
}

TEST_CASE("anti-staircase p=2: the C1 proxy against the clean ramp shrinks as lambda grows") {
  HotConfig cfg;
  cfg.weight = make_builtin_weight(3.0, 2.0);
  std::vector<double> proxies;
  for (double lambda : {9.0, 36.0, 144.0}) {
    const AntiStaircaseRow row = anti_staircase_single(lambda, 100, cfg, 10);
    CHECK(row.converged);
    proxies.push_back(row.c1_proxy_vs_ramp);
  }
  CHECK(proxies[1] < proxies[0]);
  CHECK(proxies[2] < proxies[1]);
}

TEST_CASE("anti-staircase rejects degenerate setups") {
  HotConfig cfg = config_p1(9.0);
  CHECK_THROWS_AS((void)anti_staircase_single(9.0, 1, cfg, 20), ValidationError);
  CHECK_THROWS_AS((void)anti_staircase_single(9.0, 10, cfg, 1), ValidationError);
  CHECK_THROWS_AS((void)anti_staircase_experiment(9.0, {}, cfg, 20), ValidationError);
}
