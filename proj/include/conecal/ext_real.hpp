#pragma once

#include <limits>
#include <stdexcept>

namespace conecal {

// Extended real value in (-inf, +inf].
//
// +inf is a dedicated tag rather than the IEEE infinity, so that arithmetic
// that would leave the codomain (inf - inf, anything producing -inf) throws
// instead of silently propagating a NaN or -inf.
class ExtReal {
 public:
  ExtReal() = default;
  ExtReal(double v) : v_(v) {}  // NOLINT: implicit lift of finite values
  static ExtReal infinity() {
    ExtReal e;
    e.inf_ = true;
    return e;
  }

  bool is_inf() const { return inf_; }
  bool is_finite() const { return !inf_; }

  // Finite payload; throws on +inf.
  double value() const {
    if (inf_) throw std::logic_error("ExtReal: value() called on +inf");
    return v_;
  }

  // Lossy view for printing and float-space comparisons.
  double as_double() const {
    return inf_ ? std::numeric_limits<double>::infinity() : v_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtReal(a.v_ + b.v_);
  }

  // a - b with b = +inf is a program error: it would produce -inf (or inf-inf).
  friend ExtReal operator-(ExtReal a, ExtReal b) {
    if (b.inf_) throw std::logic_error("ExtReal: subtraction of +inf");
    if (a.inf_) return infinity();
    return ExtReal(a.v_ - b.v_);
  }

  // Scaling by a nonnegative factor (used for midpoints/averages).
  // 0 * inf is left undefined on purpose.
  friend ExtReal operator*(double s, ExtReal a) {
    if (a.inf_) {
      if (s <= 0.0) throw std::logic_error("ExtReal: s * inf with s <= 0");
      return infinity();
    }
    return ExtReal(s * a.v_);
  }

  friend bool operator==(ExtReal a, ExtReal b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }
  friend bool operator!=(ExtReal a, ExtReal b) { return !(a == b); }
  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.inf_) return false;         // inf < x never
    if (b.inf_) return true;          // finite < inf
    return a.v_ < b.v_;
  }
  friend bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }

 private:
  double v_ = 0.0;
  bool inf_ = false;
};

}  // namespace conecal
