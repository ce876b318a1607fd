#include "hotv/hot.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "hotv/errors.hpp"
#include "hotv/numerics.hpp"
#include "hotv/rof.hpp"

namespace hotv {

namespace {

double resolved_eps(const DiscreteSignal& g, const HotConfig& cfg) {
  if (cfg.eps_abs < 0.0) throw ValidationError("HotConfig: eps_abs must be nonnegative");
  return cfg.eps_abs > 0.0 ? cfg.eps_abs : default_smoothing_width(g);
}

void require_same_grid(const DiscreteSignal& u, const DiscreteSignal& g) {
  if (!u.grid.same_as(g.grid))
    throw ValidationError("smoothed objective: iterate and data must share the grid");
}

// psi and psi' with an inlined fast path for the built-in family (the solver
// evaluates them O(grid) times per iteration).
struct WeightEval {
  explicit WeightEval(const WeightFunction& w) : w_(w) {
    builtin_ = w.kind == WeightFunction::Kind::Builtin && w.alpha.has_value();
    alpha_ = builtin_ ? *w.alpha : 0.0;
  }
  double psi(double t) const { return builtin_ ? builtin_psi(alpha_, t) : w_.eval(t); }
  double dpsi(double t) const {
    if (builtin_) return builtin_psi_deriv(alpha_, t);
    if (!w_.eval_deriv)
      throw ValidationError("objective gradient: weight needs a derivative (eval_deriv)");
    return w_.eval_deriv(t);
  }
  // Second derivative, used only to assemble the Newton model. Branches at
  // |t| = 1 mirror dpsi's left-limit convention; custom weights fall back to
  // a central difference of their first derivative (an inexact Hessian only
  // slows the line search, it cannot bias the minimizer).
  double ddpsi(double t) const {
    if (builtin_) {
      if (t > -1.0 && t <= 1.0) return 0.0;
      const double at = t < 0 ? -t : t;
      return alpha_ * (alpha_ + 1.0) * std::pow(at, -alpha_ - 2.0);
    }
    const double step = 1e-6 * std::max(1.0, std::abs(t));
    return (dpsi(t + step) - dpsi(t - step)) / (2.0 * step);
  }

 private:
  const WeightFunction& w_;
  bool builtin_ = false;
  double alpha_ = 0.0;
};

double objective_impl(const Eigen::VectorXd& u, const Eigen::VectorXd& g, double h,
                      double lambda, double p, double eps, const WeightEval& we) {
  const Eigen::Index n = u.size() - 1;  // cells
  double tv = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) tv += smoothed_abs((u[i + 1] - u[i]) / h, eps);
  double curv = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    const double m = 0.5 * ((u[j] - u[j - 1]) / h + (u[j + 1] - u[j]) / h);
    const double c = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    const double sc = smoothed_abs(c, eps);
    curv += we.psi(m) * (p == 1.0 ? sc : std::pow(sc, p));
  }
  const double fid = (u - g).squaredNorm();
  return h * tv + h * curv + lambda * h * fid;
}

Eigen::VectorXd gradient_impl(const Eigen::VectorXd& u, const Eigen::VectorXd& g, double h,
                              double lambda, double p, double eps, const WeightEval& we) {
  const Eigen::Index n = u.size() - 1;
  Eigen::VectorXd grad = 2.0 * lambda * h * (u - g);

  // d/du of h * sum s(d_i): each cell contributes s'(d_i) to its right node
  // and -s'(d_i) to its left node.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sp = smoothed_abs_deriv((u[i + 1] - u[i]) / h, eps);
    grad[i] -= sp;
    grad[i + 1] += sp;
  }

  // Curvature block: with A_j = psi'(m_j) s(c_j)^p and
  // B_j = p * psi(m_j) s(c_j)^{p-1} s'(c_j), node k collects
  //   (A_{k-1} - A_{k+1}) / 2  +  (B_{k-1} - 2 B_k + B_{k+1}) / h.
  for (Eigen::Index j = 1; j < n; ++j) {
    const double dl = (u[j] - u[j - 1]) / h;
    const double dr = (u[j + 1] - u[j]) / h;
    const double m = 0.5 * (dl + dr);
    const double c = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    const double sc = smoothed_abs(c, eps);
    const double spc = smoothed_abs_deriv(c, eps);
    const double scp = p == 1.0 ? sc : std::pow(sc, p);
    const double scpm1 = p == 1.0 ? 1.0 : std::pow(sc, p - 1.0);
    const double A = we.dpsi(m) * scp;
    const double B = p * we.psi(m) * scpm1 * spc;
    grad[j + 1] += 0.5 * A + B / h;
    grad[j - 1] += -0.5 * A + B / h;
    grad[j] += -2.0 * B / h;
  }
  return grad;
}

// Exact Hessian of the smoothed objective. Every term couples at most the
// nodes {j-1, j, j+1}, so the matrix is pentadiagonal; assembling it sparse
// and factoring with LDLT costs O(n) per Newton step.
Eigen::SparseMatrix<double> hessian_impl(const Eigen::VectorXd& u, double h, double lambda,
                                         double p, double eps, const WeightEval& we) {
  const Eigen::Index N = u.size();
  const Eigen::Index n = N - 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(13 * N));

  for (Eigen::Index k = 0; k < N; ++k) trips.emplace_back(k, k, 2.0 * lambda * h);

  // h * s(d_i) contributes s''(d_i)/h on the 2x2 block of nodes {i, i+1}.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w2 = smoothed_abs_second((u[i + 1] - u[i]) / h, eps) / h;
    trips.emplace_back(i, i, w2);
    trips.emplace_back(i + 1, i + 1, w2);
    trips.emplace_back(i, i + 1, -w2);
    trips.emplace_back(i + 1, i, -w2);
  }

  // h * psi(m_j) * sigma(c_j) with sigma(c) = s(c)^p: a 3x3 block over
  // {j-1, j, j+1} built from the outer products of grad m and grad c.
  for (Eigen::Index j = 1; j < n; ++j) {
    const double dl = (u[j] - u[j - 1]) / h;
    const double dr = (u[j + 1] - u[j]) / h;
    const double m = 0.5 * (dl + dr);
    const double c = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    const double sc = smoothed_abs(c, eps);
    const double spc = smoothed_abs_deriv(c, eps);
    const double sppc = smoothed_abs_second(c, eps);

    double sigma, sigma_p, sigma_pp;
    if (p == 1.0) {
      sigma = sc;
      sigma_p = spc;
      sigma_pp = sppc;
    } else if (p == 2.0) {
      sigma = sc * sc;
      sigma_p = 2.0 * sc * spc;
      sigma_pp = 2.0 * (spc * spc + sc * sppc);
    } else {
      sigma = std::pow(sc, p);
      const double scpm1 = std::pow(sc, p - 1.0);
      sigma_p = p * scpm1 * spc;
      sigma_pp = p * scpm1 * sppc;
      if (sc > 0.0) sigma_pp += p * (p - 1.0) * std::pow(sc, p - 2.0) * spc * spc;
    }

    const double ca = h * we.ddpsi(m) * sigma;    // grad m (x) grad m
    const double cb = h * we.dpsi(m) * sigma_p;   // symmetrized cross term
    const double cc = h * we.psi(m) * sigma_pp;   // grad c (x) grad c
    const double gm[3] = {-0.5 / h, 0.0, 0.5 / h};
    const double gc[3] = {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col)
        trips.emplace_back(j - 1 + r, j - 1 + col,
                           ca * gm[r] * gm[col] + cb * (gm[r] * gc[col] + gc[r] * gm[col]) +
                               cc * gc[r] * gc[col]);
  }

  Eigen::SparseMatrix<double> H(N, N);
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

}  // namespace

double default_smoothing_width(const DiscreteSignal& g) {
  const double range = g.values.maxCoeff() - g.values.minCoeff();
  const double eps = 1e-4 * range / (g.grid.b - g.grid.a);
  return std::max(eps, 1e-12);
}

double smoothed_objective(const DiscreteSignal& u, const DiscreteSignal& g, const HotConfig& cfg) {
  require_same_grid(u, g);
  if (!(cfg.lambda > 0.0)) throw ValidationError("HotConfig: lambda must be positive");
  const WeightEval we(cfg.weight);
  return objective_impl(u.values, g.values, u.grid.h(), cfg.lambda, cfg.weight.p,
                        resolved_eps(g, cfg), we);
}

Eigen::VectorXd objective_gradient(const DiscreteSignal& u, const DiscreteSignal& g,
                                   const HotConfig& cfg) {
  require_same_grid(u, g);
  if (!(cfg.lambda > 0.0)) throw ValidationError("HotConfig: lambda must be positive");
  const WeightEval we(cfg.weight);
  return gradient_impl(u.values, g.values, u.grid.h(), cfg.lambda, cfg.weight.p,
                       resolved_eps(g, cfg), we);
}

HotResult minimize_hot(const DiscreteSignal& g, const HotConfig& cfg, const DiscreteSignal* u0) {
  if (!(cfg.lambda > 0.0)) throw ValidationError("HotConfig: lambda must be positive");
  if (cfg.max_iters < 1) throw ValidationError("HotConfig: max_iters must be at least 1");
  if (u0 != nullptr) require_same_grid(*u0, g);
  const double eps = resolved_eps(g, cfg);
  const double h = g.grid.h();
  const double p = cfg.weight.p;
  const WeightEval we(cfg.weight);

  auto f = [&](const Eigen::VectorXd& x) {
    return objective_impl(x, g.values, h, cfg.lambda, p, eps, we);
  };
  auto df = [&](const Eigen::VectorXd& x) {
    return gradient_impl(x, g.values, h, cfg.lambda, p, eps, we);
  };

  Eigen::VectorXd u = u0 != nullptr ? u0->values : g.values;
  double E = f(u);
  Eigen::VectorXd grad = df(u);

  Eigen::SparseMatrix<double> identity(u.size(), u.size());
  identity.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool pattern_analyzed = false;

  HotResult res{DiscreteSignal(g.grid, u), E, 0, grad.norm(), 0.0, {}, false};
  double E_ref = E;     // best energy that still counted as progress
  int iter_ref = 0;     // iteration that achieved it
  double mu = 0.0;      // Levenberg shift carried across iterations
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const double gnorm = grad.norm();
    if (gnorm <= cfg.grad_tol) {
      res.converged = true;
      break;
    }

    // Direction: Newton step on H + mu I. The objective is nonconvex through
    // psi, so H can be indefinite away from the minimizer; escalate mu until
    // the factored step points downhill, falling back to steepest descent if
    // even heavy damping fails.
    const Eigen::SparseMatrix<double> H = hessian_impl(u, h, cfg.lambda, p, eps, we);
    const double diag_scale = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1.0);
    Eigen::VectorXd dir;
    double slope = 0.0;
    bool have_dir = false;
    for (int attempt = 0; attempt < 40 && !have_dir; ++attempt) {
      Eigen::SparseMatrix<double> Hmu = H;
      if (mu > 0.0) Hmu += mu * identity;
      if (!pattern_analyzed) {
        ldlt.analyzePattern(Hmu);
        pattern_analyzed = true;
      }
      ldlt.factorize(Hmu);
      if (ldlt.info() == Eigen::Success) {
        dir = ldlt.solve(-grad);
        slope = grad.dot(dir);
        if (slope < -1e-12 * gnorm * dir.norm() && dir.allFinite()) {
          have_dir = true;
          break;
        }
      }
      mu = mu == 0.0 ? 1e-10 * diag_scale : 10.0 * mu;
    }
    if (have_dir && mu == 0.0 && dir.norm() <= 1e-12 * std::max(1.0, u.norm())) {
      // The undamped Newton model places the stationary point within machine
      // distance of the iterate. The second differences inside the gradient
      // carry rounding noise of order |u|/h^2 * 1e-16 amplified by s'' <=
      // 1/eps, so the gradient norm can floor far above grad_tol; the step
      // length is the evaluation-precision-honest stationarity signal.
      res.converged = true;
      break;
    }
    if (!have_dir) {
      dir = -grad;
      slope = -gnorm * gnorm;
    }

    double t = 1.0;
    Eigen::VectorXd u_new;
    double E_new = E;
    bool accepted = false;
    while (t >= 1e-20) {
      u_new = u + t * dir;
      E_new = f(u_new);
      if (E_new <= E + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No decrease representable in double precision along a descent
      // direction: the iterate is stationary at machine scale.
      res.converged = true;
      break;
    }
    // Progress bookkeeping for the plateau test below: only decreases beyond
    // energy_rel_tol move the reference; ten iterations without one mean the
    // representable descent is exhausted (large grids floor the gradient norm
    // on rounding noise long before it can reach grad_tol).
    if (E_new < E_ref - cfg.energy_rel_tol * std::max(1.0, std::abs(E_ref))) {
      E_ref = E_new;
      iter_ref = iter;
    }

    // The line search owns the step length; mu only guards against
    // indefiniteness, so it relaxes after full steps and is never grown on a
    // merely backtracked accepted step.
    if (t == 1.0) mu *= 0.1;
    if (mu < 1e-14 * diag_scale) mu = 0.0;
    u = std::move(u_new);
    E = E_new;
    grad = df(u);
    ++res.iterations;
    if (iter - iter_ref >= 10) {
      res.converged = true;
      break;
    }
  }

  res.minimizer = DiscreteSignal(g.grid, u);
  res.energy = E;
  res.grad_norm_final = grad.norm();
  res.max_abs_slope = derivative_samples(res.minimizer).cwiseAbs().maxCoeff();
  res.jump_records = jump_detector(res.minimizer, cfg.kappa);
  return res;
}

DiscreteSignal noise_family(const Grid& grid, NoiseKind kind, int n, double amplitude) {
  if (std::abs(grid.a) > 1e-12 || std::abs(grid.b - 1.0) > 1e-12)
    throw ValidationError("noise_family: perturbations are defined on the domain [0, 1]");
  Eigen::VectorXd v(grid.n_nodes());
  switch (kind) {
    case NoiseKind::StaircaseResidual: {
      const MonotoneDatum stairs = make_staircase_datum(n);
      for (int i = 0; i < grid.n_nodes(); ++i) {
        const double x = grid.node(i);
        v[i] = stairs.eval(x) - x;
      }
      break;
    }
    case NoiseKind::SquareWave: {
      if (n < 1) throw ValidationError("noise_family: square wave needs n >= 1");
      if (!(amplitude > 0.0)) throw ValidationError("noise_family: square wave needs amplitude > 0");
      for (int i = 0; i < grid.n_nodes(); ++i) {
        const double x = grid.node(i);
        // Same exact band classification as the staircase datum: correct the
        // floor when n*x rounded across an integer.
        double k = std::floor(n * x);
        if (std::fma(static_cast<double>(n), x, -k) < 0.0)
          k -= 1.0;
        else if (std::fma(static_cast<double>(n), x, -(k + 1.0)) >= 0.0)
          k += 1.0;
        int idx = x >= 1.0 ? n - 1 : static_cast<int>(k);
        idx = std::clamp(idx, 0, n - 1);
        v[i] = (idx % 2 == 0) ? amplitude : -amplitude;
      }
      break;
    }
  }
  return DiscreteSignal(grid, std::move(v));
}

HotResult continuation_solve(const DiscreteSignal& g, const HotConfig& cfg) {
  const double eps_final = cfg.eps_abs > 0.0 ? cfg.eps_abs : default_smoothing_width(g);
  std::vector<double> ladder;
  for (double e : {1e-2, 1e-3})
    if (e > eps_final * 1.5) ladder.push_back(e);
  ladder.push_back(eps_final);

  // Start from the lower-energy of the data and its flat mean. High-frequency
  // data is a stationary trap of the nonconvex objective (single-cell steps
  // sit where the curvature weight is nearly free), while descent from a flat
  // signal builds the reconstruction without ever forming such steps; taking
  // the cheaper of the two keeps the final energy <= the energy of the data.
  DiscreteSignal flat(g.grid, Eigen::VectorXd::Constant(g.values.size(), g.values.mean()));
  HotConfig first = cfg;
  first.eps_abs = ladder.front();
  DiscreteSignal u =
      smoothed_objective(flat, g, first) < smoothed_objective(g, g, first) ? flat : g;

  HotResult res{u, 0.0, 0, 0.0, 0.0, {}, false};
  int total_iters = 0;
  for (double e : ladder) {
    HotConfig stage = cfg;
    stage.eps_abs = e;
    res = minimize_hot(g, stage, &u);
    u = res.minimizer;
    total_iters += res.iterations;
  }
  res.iterations = total_iters;
  return res;
}

AntiStaircaseRow anti_staircase_single(double lambda, int n, const HotConfig& cfg, int grid_mult) {
  if (n < 2) throw ValidationError("anti_staircase: staircase step count must be >= 2");
  if (grid_mult < 2) throw ValidationError("anti_staircase: grid multiplier must be >= 2");
  const Grid grid(0.0, 1.0, grid_mult * n);
  const DiscreteSignal ramp = sample_function(grid, [](double x) { return x; });
  const DiscreteSignal residual = noise_family(grid, NoiseKind::StaircaseResidual, n);
  const DiscreteSignal g_noisy(grid, ramp.values + residual.values);

  HotConfig run = cfg;
  run.lambda = lambda;
  const HotResult noisy = continuation_solve(g_noisy, run);
  const HotResult clean = continuation_solve(ramp, run);

  AntiStaircaseRow row;
  row.n = n;
  row.grid_cells = grid.cells;
  row.converged = noisy.converged && clean.converged;
  row.iterations = noisy.iterations;
  row.energy = noisy.energy;
  row.max_abs_slope = noisy.max_abs_slope;
  row.jump_count = static_cast<int>(noisy.jump_records.size());
  row.sup_dev_from_clean =
      (noisy.minimizer.values - clean.minimizer.values).cwiseAbs().maxCoeff();
  row.max_abs_slope_clean = clean.max_abs_slope;
  row.slope_ratio = row.max_abs_slope / std::max(row.max_abs_slope_clean, 1e-300);
  const Eigen::VectorXd d = derivative_samples(noisy.minimizer);
  row.c1_proxy_vs_ramp = (noisy.minimizer.values - ramp.values).cwiseAbs().maxCoeff() +
                         (d.array() - 1.0).abs().maxCoeff();

  const StaircaseReport window = staircase_experiment(n, lambda);
  const DiscreteSignal tv_only = rof_discrete_minimizer(g_noisy, lambda);
  row.window_a = window.a_n;
  row.window_b = window.b_n;
  row.rof_plateau_breaks = plateau_break_count(tv_only, window.a_n, window.b_n);
  row.rof_detected_jumps = static_cast<int>(jump_detector(tv_only, cfg.kappa).size());
  return row;
}

AntiStaircaseReport anti_staircase_experiment(double lambda, const std::vector<int>& n_list,
                                              const HotConfig& cfg, int grid_mult) {
  if (n_list.empty()) throw ValidationError("anti_staircase_experiment: empty n list");
  AntiStaircaseReport rep;
  rep.lambda = lambda;
  rep.p = cfg.weight.p;
  rep.grid_mult = grid_mult;
  for (int n : n_list) rep.rows.push_back(anti_staircase_single(lambda, n, cfg, grid_mult));
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const AntiStaircaseRow& a, const AntiStaircaseRow& b) { return a.n < b.n; });
  rep.all_converged = std::all_of(rep.rows.begin(), rep.rows.end(),
                                  [](const AntiStaircaseRow& r) { return r.converged; });
  rep.all_jump_free = std::all_of(rep.rows.begin(), rep.rows.end(),
                                  [](const AntiStaircaseRow& r) { return r.jump_count == 0; });
  return rep;
}

}  // namespace hotv
