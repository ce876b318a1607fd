#pragma once

// Extended real line R ∪ {-inf, +inf} with the two infinities carried as
// explicit states rather than IEEE values. One-sided derivative limits at
// jumps, weight-transform endpoints, and energy totals all live here; keeping
// the infinities symbolic guarantees that no arithmetic path ever feeds an
// IEEE infinity (or a NaN produced from one) into quadrature or summation.

#include <cmath>
#include <string>

#include "hotv/errors.hpp"

namespace hotv {

class ExtReal {
 public:
  // Finite value. IEEE infinities are accepted and normalized to the
  // corresponding symbolic state; NaN is rejected.
  ExtReal(double v = 0.0) {  // NOLINT(google-explicit-constructor): doubles promote naturally
    if (std::isnan(v)) throw ValidationError("ExtReal: NaN is not a point of the extended real line");
    if (std::isinf(v)) {
      state_ = v > 0 ? State::PosInf : State::NegInf;
      value_ = 0.0;
    } else {
      state_ = State::Finite;
      value_ = v;
    }
  }

  static ExtReal pos_inf() {
    ExtReal r(0.0);
    r.state_ = State::PosInf;
    return r;
  }
  static ExtReal neg_inf() {
    ExtReal r(0.0);
    r.state_ = State::NegInf;
    return r;
  }

  bool is_finite() const { return state_ == State::Finite; }
  bool is_pos_inf() const { return state_ == State::PosInf; }
  bool is_neg_inf() const { return state_ == State::NegInf; }
  bool is_infinite() const { return state_ != State::Finite; }

  // Finite value accessor; calling it on an infinity is a programming error.
  double value() const {
    if (!is_finite()) throw ValidationError("ExtReal: value() called on an infinite element");
    return value_;
  }

  // Total order of the extended real line.
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.state_ == b.state_) return a.is_finite() && a.value_ < b.value_;
    return rank(a.state_) < rank(b.state_);
  }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.state_ == b.state_ && (!a.is_finite() || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }

  friend ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }
  friend ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

  ExtReal operator-() const {
    if (is_pos_inf()) return neg_inf();
    if (is_neg_inf()) return pos_inf();
    return ExtReal(-value_);
  }

  // -1 / 0 / +1, with sign(±inf) = ±1.
  int sign() const {
    if (is_pos_inf()) return 1;
    if (is_neg_inf()) return -1;
    return value_ > 0 ? 1 : (value_ < 0 ? -1 : 0);
  }

  std::string to_string() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    return std::to_string(value_);
  }

 private:
  enum class State { NegInf, Finite, PosInf };
  static int rank(State s) { return s == State::NegInf ? 0 : (s == State::Finite ? 1 : 2); }

  State state_ = State::Finite;
  double value_ = 0.0;
};

}  // namespace hotv
