#include "hotv/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hotv/errors.hpp"
#include "hotv/io_util.hpp"
#include "hotv/numerics.hpp"

namespace hotv {

Grid::Grid(double a_, double b_, int cells_) : a(a_), b(b_), cells(cells_) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("Grid: endpoints must be finite");
  if (!(a < b)) throw ValidationError("Grid: requires a < b");
  if (cells < 2) throw ValidationError("Grid: requires at least 2 cells");
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd x(n_nodes());
  for (int i = 0; i < n_nodes(); ++i) x[i] = node(i);
  return x;
}

bool Grid::same_as(const Grid& other, double tol) const {
  return cells == other.cells && std::abs(a - other.a) <= tol && std::abs(b - other.b) <= tol;
}

DiscreteSignal::DiscreteSignal(Grid g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n_nodes())
    throw ValidationError("DiscreteSignal: value count must equal node count");
  if (!values.allFinite()) throw ValidationError("DiscreteSignal: values must be finite");
}

DiscreteSignal sample_function(const Grid& grid, const std::function<double(double)>& f) {
  Eigen::VectorXd v(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) v[i] = f(grid.node(i));
  return DiscreteSignal(grid, std::move(v));
}

double total_variation(const DiscreteSignal& u) {
  const auto& v = u.values;
  return (v.tail(v.size() - 1) - v.head(v.size() - 1)).cwiseAbs().sum();
}

Eigen::VectorXd derivative_samples(const DiscreteSignal& u) {
  const auto& v = u.values;
  return (v.tail(v.size() - 1) - v.head(v.size() - 1)) / u.grid.h();
}

Eigen::VectorXd second_derivative_samples(const DiscreteSignal& u) {
  const auto& v = u.values;
  const Eigen::Index m = v.size() - 2;
  return (v.tail(m) - 2.0 * v.segment(1, m) + v.head(m)) / (u.grid.h() * u.grid.h());
}

JumpRecord::JumpRecord(double x_, double jump_, ExtReal ls, ExtReal rs)
    : x(x_), jump(jump_), nu(jump_ > 0 ? 1 : -1), left_slope(ls), right_slope(rs) {
  if (!std::isfinite(x)) throw ValidationError("JumpRecord: position must be finite");
  if (!(jump != 0.0) || !std::isfinite(jump))
    throw ValidationError("JumpRecord: jump size must be finite and nonzero");
}

std::vector<JumpRecord> jump_detector(const DiscreteSignal& u, double kappa) {
  if (!(kappa > 0.0)) throw ValidationError("jump_detector: kappa must be positive");
  const double h = u.grid.h();
  const Eigen::VectorXd d = derivative_samples(u);
  std::vector<double> abs_slopes(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) abs_slopes[static_cast<std::size_t>(i)] = std::abs(d[i]);
  const double med = median(abs_slopes);
  const double threshold = kappa * h * (med + 1.0);

  std::vector<bool> flagged(static_cast<std::size_t>(d.size()), false);
  for (Eigen::Index i = 0; i < d.size(); ++i)
    flagged[static_cast<std::size_t>(i)] = std::abs(d[i] * h) > threshold;

  // Nearest unflagged difference on the requested side; falls back to the
  // other side and finally to the gap itself when everything is flagged.
  auto side_slope = [&](Eigen::Index gap, int dir) {
    for (Eigen::Index j = gap + dir; j >= 0 && j < d.size(); j += dir)
      if (!flagged[static_cast<std::size_t>(j)]) return d[j];
    for (Eigen::Index j = gap - dir; j >= 0 && j < d.size(); j -= dir)
      if (!flagged[static_cast<std::size_t>(j)]) return d[j];
    return d[gap];
  };

  std::vector<JumpRecord> records;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!flagged[static_cast<std::size_t>(i)]) continue;
    const double x_mid = u.grid.node(static_cast<int>(i)) + 0.5 * h;
    records.emplace_back(x_mid, d[i] * h, ExtReal(side_slope(i, -1)), ExtReal(side_slope(i, +1)));
  }
  return records;
}

int plateau_break_count(const DiscreteSignal& u, double x_lo, double x_hi) {
  if (!(x_lo < x_hi)) throw ValidationError("plateau_break_count: requires x_lo < x_hi");
  const auto& v = u.values;
  const Eigen::Index gaps = v.size() - 1;
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < gaps; ++i) max_abs = std::max(max_abs, std::abs(v[i + 1] - v[i]));
  if (max_abs == 0.0) return 0;
  const double flat_tol = 1e-9 * max_abs;
  const double edge_tol = 1e-12 * (u.grid.b - u.grid.a);

  int breaks = 0;
  bool have_prev = false;
  bool prev_flat = false;
  for (Eigen::Index i = 0; i < gaps; ++i) {
    const double left = u.grid.node(static_cast<int>(i));
    const double right = left + u.grid.h();
    const bool in_window = right >= x_lo - edge_tol && left <= x_hi + edge_tol;
    if (!in_window) {
      have_prev = false;
      continue;
    }
    const bool flat = std::abs(v[i + 1] - v[i]) <= flat_tol;
    if (have_prev && flat != prev_flat) ++breaks;
    prev_flat = flat;
    have_prev = true;
  }
  return breaks;
}

void PiecewiseBVFunction::validate() const {
  if (!(a < b)) throw ValidationError("PiecewiseBVFunction: requires a < b");
  if (pieces.empty()) throw ValidationError("PiecewiseBVFunction: needs at least one piece");
  const double tol = 1e-12 * (b - a);
  double cursor = a;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Piece& piece = pieces[k];
    if (!(piece.x0 < piece.x1))
      throw ValidationError("PiecewiseBVFunction: piece must have positive width");
    if (piece.slope_samples.size() < 1)
      throw ValidationError("PiecewiseBVFunction: piece needs at least one slope sample");
    if (!piece.slope_samples.allFinite())
      throw ValidationError("PiecewiseBVFunction: slope samples must be finite");
    if (std::abs(piece.x0 - cursor) > tol)
      throw ValidationError("PiecewiseBVFunction: pieces must tile the domain contiguously");
    cursor = piece.x1;
  }
  if (std::abs(cursor - b) > tol)
    throw ValidationError("PiecewiseBVFunction: pieces must end at the right endpoint");
  for (const JumpRecord& jr : jumps) {
    bool at_boundary = false;
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k)
      if (std::abs(jr.x - pieces[k].x1) <= tol) {
        at_boundary = true;
        break;
      }
    if (!at_boundary)
      throw ValidationError("PiecewiseBVFunction: jump positions must lie on interior piece boundaries");
  }
}

double total_variation_of(const PiecewiseBVFunction& v) {
  v.validate();
  double tv = 0.0;
  for (const Piece& piece : v.pieces) {
    const double cell = (piece.x1 - piece.x0) / piece.slope_samples.size();
    tv += cell * piece.slope_samples.cwiseAbs().sum();
  }
  for (const JumpRecord& jr : v.jumps) tv += std::abs(jr.jump);
  for (const CantorAtom& atom : v.cantor_atoms) tv += std::abs(atom.mass);
  return tv;
}

std::string signal_to_csv(const DiscreteSignal& u) {
  std::string out = "x,value\n";
  for (int i = 0; i < u.grid.n_nodes(); ++i) {
    out += format_double17(u.grid.node(i));
    out += ',';
    out += format_double17(u.values[i]);
    out += '\n';
  }
  return out;
}

DiscreteSignal signal_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("signal CSV: empty input");
  // Tolerate a UTF-8 BOM and trailing CR before checking the header.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,value") throw ValidationError("signal CSV: first line must be the header 'x,value'");

  std::vector<double> xs, vals;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("signal CSV: line " + std::to_string(lineno) + " has no comma");
    char* end = nullptr;
    const std::string xs_str = line.substr(0, comma);
    const std::string vs_str = line.substr(comma + 1);
    const double x = std::strtod(xs_str.c_str(), &end);
    if (end == xs_str.c_str() || *end != '\0')
      throw ValidationError("signal CSV: bad x on line " + std::to_string(lineno));
    const double val = std::strtod(vs_str.c_str(), &end);
    if (end == vs_str.c_str() || *end != '\0')
      throw ValidationError("signal CSV: bad value on line " + std::to_string(lineno));
    xs.push_back(x);
    vals.push_back(val);
  }
  if (xs.size() < 3) throw ValidationError("signal CSV: need at least 3 rows (2 cells)");
  const int cells = static_cast<int>(xs.size()) - 1;
  const double h0 = (xs.back() - xs.front()) / cells;
  if (!(h0 > 0.0)) throw ValidationError("signal CSV: x must be strictly increasing");
  for (int i = 0; i < cells; ++i) {
    const double hi = xs[static_cast<std::size_t>(i) + 1] - xs[static_cast<std::size_t>(i)];
    if (!(hi > 0.0)) throw ValidationError("signal CSV: x must be strictly increasing");
    if (std::abs(hi / h0 - 1.0) > 1e-9)
      throw ValidationError("signal CSV: x spacing must be uniform to 1e-9 relative tolerance");
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) values[static_cast<Eigen::Index>(i)] = vals[i];
  return DiscreteSignal(Grid(xs.front(), xs.back(), cells), std::move(values));
}

DiscreteSignal read_signal_csv(const std::string& path) {
  return signal_from_csv(read_text_file(path));
}

void write_signal_csv(const std::string& path, const DiscreteSignal& u) {
  write_text_atomic(path, signal_to_csv(u));
}

}  // namespace hotv
