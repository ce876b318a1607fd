#pragma once

// Smoothed higher-order restoration. On a node signal u over a uniform grid
// the solver minimizes
//
//   E(u) = h * sum_i s(d_i)  +  h * sum_j psi(m_j) * s(c_j)^p
//        + lambda * h * sum_k (u_k - g_k)^2,
//
// where d are the forward-difference slopes (cell midpoints), c the central
// second differences (interior nodes), m_j = (d_{j-1} + d_j)/2 the slope
// averaged to the node carrying c_j, and s(t) = sqrt(t^2 + eps^2) - eps the
// C^infinity substitute for |t| (s(0) = 0, |s - abs| <= eps). The objective
// is nonconvex through psi: descent reaches stationary points, not certified
// global minima, and non-convergence is reported through a flag, never an
// exception.

#include <vector>

#include "hotv/signals.hpp"
#include "hotv/weights.hpp"

namespace hotv {

struct HotConfig {
  double lambda = 1.0;
  WeightFunction weight;        // eval required; eval_deriv required for gradients
  double eps_abs = 0.0;         // smoothing width; 0 selects the data-driven default
  int max_iters = 5000;
  double grad_tol = 1e-8;       // 2-norm of the gradient
  double energy_rel_tol = 1e-12;  // relative per-step decrease treated as a stall
  double kappa = 10.0;          // detector threshold for the result's jump records
};

struct HotResult {
  DiscreteSignal minimizer;
  double energy = 0.0;
  int iterations = 0;
  double grad_norm_final = 0.0;
  double max_abs_slope = 0.0;
  std::vector<JumpRecord> jump_records;
  bool converged = false;
};

// Default smoothing width 1e-4 * (value range) / (b - a), floored at 1e-12
// for constant data.
double default_smoothing_width(const DiscreteSignal& g);

double smoothed_objective(const DiscreteSignal& u, const DiscreteSignal& g, const HotConfig& cfg);

// Analytic gradient of smoothed_objective with respect to the node values.
// The weight's derivative takes its left-limit branch at the kinks |t| = 1.
Eigen::VectorXd objective_gradient(const DiscreteSignal& u, const DiscreteSignal& g,
                                   const HotConfig& cfg);

// Damped Newton descent: the objective couples each node only to its two
// neighbours, so the exact Hessian is pentadiagonal and a sparse LDLT step
// costs O(n). A Levenberg shift mu*I is escalated whenever the factored
// direction fails to point downhill (the objective is nonconvex through
// psi), with a steepest-descent fallback, and every step passes an Armijo
// backtracking test, so the energy decreases monotonically from the initial
// iterate (default: the data g). Convergence means the gradient norm fell
// below grad_tol or the energy decrease stalled below energy_rel_tol for
// three consecutive accepted steps; exhausting max_iters leaves
// converged = false.
HotResult minimize_hot(const DiscreteSignal& g, const HotConfig& cfg,
                       const DiscreteSignal* u0 = nullptr);

// Warm-started smoothing continuation: minimize at progressively smaller
// smoothing widths (1e-2, 1e-3, then the configured eps_abs, skipping rungs
// at or below it), each stage starting from the previous minimizer. The
// first stage starts from whichever of {g, flat mean of g} has the lower
// smoothed energy: high-frequency data can itself be a stationary trap of
// the nonconvex objective, and descent from a flat signal reaches the smooth
// reconstruction instead. Iteration counts accumulate across stages.
HotResult continuation_solve(const DiscreteSignal& g, const HotConfig& cfg);

enum class NoiseKind {
  StaircaseResidual,  // (floor(n x) + 1)/n - x: the n-step staircase minus the ramp
  SquareWave,         // +/- amplitude alternating on cells of width 1/n
};

// Sample a parametric perturbation on the grid (domain must be [0, 1]).
// StaircaseResidual has sup-norm exactly 1/n by construction and ignores
// `amplitude`; SquareWave integrates to zero over [0, 1] for even n.
DiscreteSignal noise_family(const Grid& grid, NoiseKind kind, int n, double amplitude = 0.0);

// One row of the anti-staircase sweep: smoothed restoration of the n-step
// staircase data g_n = ramp + staircase residual, side by side with the
// total-variation-only reconstruction of identical data.
struct AntiStaircaseRow {
  int n = 0;
  int grid_cells = 0;
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double max_abs_slope = 0.0;        // of the smoothed minimizer
  int jump_count = 0;                // detector hits on the smoothed minimizer
  double sup_dev_from_clean = 0.0;   // ||u_n - u_clean||_inf, same grid and lambda
  double max_abs_slope_clean = 0.0;  // clean-ramp run on the same grid
  double slope_ratio = 0.0;          // max_abs_slope / max_abs_slope_clean
  double c1_proxy_vs_ramp = 0.0;     // ||u - x||_inf + ||u' - 1||_inf
  int rof_plateau_breaks = 0;        // plateau-break events of the TV minimizer in [a_n, b_n]
  int rof_detected_jumps = 0;        // detector hits on the TV minimizer
  double window_a = 0.0;             // a_n of the exact staircase reconstruction
  double window_b = 0.0;             // b_n
};

struct AntiStaircaseReport {
  double lambda = 0.0;
  double p = 1.0;
  int grid_mult = 0;
  std::vector<AntiStaircaseRow> rows;  // sorted by n
  bool all_converged = false;
  bool all_jump_free = false;
};

// Single-n worker (grid of grid_mult * n cells on [0, 1]); the sweep maps it
// over n_list and sorts. Each solve warm-starts through a short smoothing
// continuation (eps shrinking to the configured value) before the final
// solve, which keeps the stiff small-eps regime well-conditioned.
AntiStaircaseRow anti_staircase_single(double lambda, int n, const HotConfig& cfg, int grid_mult);
AntiStaircaseReport anti_staircase_experiment(double lambda, const std::vector<int>& n_list,
                                              const HotConfig& cfg, int grid_mult = 20);

}  // namespace hotv
