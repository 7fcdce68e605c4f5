#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "errors.hpp"

namespace quarterwave {

/// Evaluation handle for a real-valued function of 1 to 3 real variables.
///
/// The wrapped callable must produce a finite value for the arguments it is
/// given; a non-finite result is reported as DomainError instead of being
/// returned.  Analytic derivatives can be attached per variable (orders 1
/// and 2); numeric code prefers them over finite differences when present.
class ScalarFn {
 public:
  using Raw = std::function<double(std::span<const double>)>;

  ScalarFn(int arity, Raw raw, std::string name = {})
      : arity_(arity), raw_(std::move(raw)), name_(std::move(name)) {
    if (arity_ < 1 || arity_ > 3)
      throw ArityMismatch("ScalarFn arity must be 1, 2, or 3, got " +
                          std::to_string(arity_));
  }

  static ScalarFn unary(std::function<double(double)> f, std::string name = {}) {
    return ScalarFn(
        1, [f = std::move(f)](std::span<const double> a) { return f(a[0]); },
        std::move(name));
  }

  static ScalarFn binary(std::function<double(double, double)> f,
                         std::string name = {}) {
    return ScalarFn(
        2,
        [f = std::move(f)](std::span<const double> a) { return f(a[0], a[1]); },
        std::move(name));
  }

  static ScalarFn ternary(std::function<double(double, double, double)> f,
                          std::string name = {}) {
    return ScalarFn(
        3,
        [f = std::move(f)](std::span<const double> a) {
          return f(a[0], a[1], a[2]);
        },
        std::move(name));
  }

  static ScalarFn constant(int arity, double value) {
    return ScalarFn(arity,
                    [value](std::span<const double>) { return value; });
  }

  static ScalarFn zero(int arity) { return constant(arity, 0.0); }

  int arity() const noexcept { return arity_; }
  const std::string& name() const noexcept { return name_; }

  double eval(std::span<const double> args) const {
    if (static_cast<int>(args.size()) != arity_)
      throw ArityMismatch("function" + display() + " takes " +
                          std::to_string(arity_) + " argument(s), got " +
                          std::to_string(args.size()));
    const double r = raw_(args);
    if (!std::isfinite(r))
      throw DomainError("function" + display() +
                        " produced a non-finite value");
    return r;
  }

  double operator()(double x) const {
    const double a[1] = {x};
    return eval(a);
  }
  double operator()(double x, double y) const {
    const double a[2] = {x, y};
    return eval(a);
  }
  double operator()(double x, double y, double z) const {
    const double a[3] = {x, y, z};
    return eval(a);
  }

  /// Copy of *this with an analytic derivative attached for variable `var`
  /// (0-based) at `order` (1 or 2).  The derivative must have the same arity.
  ScalarFn with_derivative(int var, int order, ScalarFn d) const {
    if (var < 0 || var >= arity_)
      throw ArityMismatch("derivative variable index " + std::to_string(var) +
                          " out of range for arity " + std::to_string(arity_));
    if (order != 1 && order != 2)
      throw Error("derivative order must be 1 or 2");
    if (d.arity() != arity_)
      throw ArityMismatch("derivative arity mismatch");
    ScalarFn out = *this;
    out.derivs_[slot(var, order)] = std::make_shared<const ScalarFn>(std::move(d));
    return out;
  }

  /// Attached analytic derivative, or nullptr when none was provided.
  const ScalarFn* derivative(int var, int order) const noexcept {
    if (var < 0 || var >= arity_ || (order != 1 && order != 2)) return nullptr;
    return derivs_[slot(var, order)].get();
  }

 private:
  static int slot(int var, int order) { return var * 2 + (order - 1); }

  std::string display() const { return name_.empty() ? "" : " '" + name_ + "'"; }

  int arity_;
  Raw raw_;
  std::string name_;
  std::array<std::shared_ptr<const ScalarFn>, 6> derivs_{};
};

}  // namespace quarterwave
