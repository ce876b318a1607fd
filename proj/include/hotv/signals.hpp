#pragma once

// 1-D sampling infrastructure: uniform grids, node-sampled signals, jump
// records with one-sided slope estimates, and a piecewise description of BV
// functions (absolutely continuous pieces + jump part + optional atoms of a
// derivative's singular continuous part).

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hotv/ext_real.hpp"

namespace hotv {

// Uniform grid on [a, b] with `cells` cells of width h = (b - a) / cells and
// nodes x_i = a + i h, i = 0..cells.
struct Grid {
  Grid(double a, double b, int cells);

  double a;
  double b;
  int cells;

  double h() const { return (b - a) / cells; }
  int n_nodes() const { return cells + 1; }
  double node(int i) const { return a + i * h(); }
  Eigen::VectorXd nodes() const;

  bool same_as(const Grid& other, double tol = 1e-12) const;
};

// Node values of a scalar function on a grid; values.size() == grid.n_nodes().
struct DiscreteSignal {
  DiscreteSignal(Grid g, Eigen::VectorXd v);

  Grid grid;
  Eigen::VectorXd values;
};

// Sample a function at the grid nodes.
DiscreteSignal sample_function(const Grid& grid, const std::function<double(double)>& f);

// Sum of |u_{i+1} - u_i| over all node gaps.
double total_variation(const DiscreteSignal& u);

// Forward differences (u_{i+1} - u_i) / h, one value per cell (length cells);
// the sample for cell i lives at the cell midpoint.
Eigen::VectorXd derivative_samples(const DiscreteSignal& u);

// Central second differences (u_{i+1} - 2 u_i + u_{i-1}) / h^2 at interior
// nodes (length cells - 1).
Eigen::VectorXd second_derivative_samples(const DiscreteSignal& u);

// A detected or declared jump of size `jump` != 0 at position x, with
// nu = sign(jump) and one-sided slope limits. For detected jumps the slopes
// are finite estimates from the neighboring differences; declared jumps may
// carry infinite one-sided limits.
struct JumpRecord {
  JumpRecord(double x, double jump, ExtReal left_slope, ExtReal right_slope);

  double x;
  double jump;
  int nu;
  ExtReal left_slope;
  ExtReal right_slope;
};

// Flag node gaps with |u_{i+1} - u_i| > kappa * h * (median |slope| + 1),
// where the median runs over all forward-difference slopes. Each flagged gap
// yields one record at the gap midpoint with slopes estimated from the
// adjacent unflagged differences (nearest available difference at the ends).
std::vector<JumpRecord> jump_detector(const DiscreteSignal& u, double kappa);

// Number of plateau-break events of u restricted to [x_lo, x_hi]: consecutive
// node gaps are classified flat (|difference| <= 1e-9 * max |difference|) or
// sloped, and each flat <-> sloped transition between neighboring gaps counts
// one event. A staircase riser embedded in two plateaus therefore counts
// twice: once where the preceding plateau ends and once where the following
// plateau begins. Gaps intersecting [x_lo, x_hi] participate.
int plateau_break_count(const DiscreteSignal& u, double x_lo, double x_hi);

// One absolutely continuous piece of a BV function: values of the derivative
// density sampled at the midpoints of `slope_samples.size()` equal cells of
// [x0, x1], plus the function value at x0 (entering from the right).
struct Piece {
  double x0 = 0.0;
  double x1 = 0.0;
  double left_value = 0.0;
  Eigen::VectorXd slope_samples;
};

// An atom of the singular continuous ("Cantor") part of the derivative.
struct CantorAtom {
  double x = 0.0;
  double mass = 0.0;
};

// Piecewise description of a BV function on [a, b]: contiguous pieces whose
// boundaries partition the interval, jump records located at interior piece
// boundaries, and optional Cantor atoms. The derivative decomposes as
// (density from slope_samples) + (jump part) + (atoms); total_variation_of
// integrates the three parts.
struct PiecewiseBVFunction {
  double a = 0.0;
  double b = 1.0;
  std::vector<Piece> pieces;
  std::vector<JumpRecord> jumps;
  std::vector<CantorAtom> cantor_atoms;

  // Throws ValidationError unless the pieces tile [a, b] in order (boundary
  // mismatch tolerance 1e-12 * (b - a)) and every jump position coincides
  // with an interior piece boundary.
  void validate() const;
};

// |Du|([a, b]) of the described function: midpoint-rule integral of
// |slope density| over the pieces + sum of |jump| + sum of |atom mass|.
double total_variation_of(const PiecewiseBVFunction& v);

// CSV exchange format: header "x,value", one node per line, x strictly
// increasing and uniformly spaced to 1e-9 relative tolerance. Values are
// written with 17 significant digits.
DiscreteSignal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const DiscreteSignal& u);

// Serialize to the CSV format without touching the filesystem.
std::string signal_to_csv(const DiscreteSignal& u);
DiscreteSignal signal_from_csv(const std::string& text);

}  // namespace hotv
