#ifndef URLLC_TYPES_HPP_
#define URLLC_TYPES_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace urllc {

using Scalar = double;
using Vec = Eigen::VectorX<Scalar>;
using Mat = Eigen::MatrixX<Scalar>;

/// A probability value, guaranteed to lie in [0, 1].
class Probability {
 public:
  Probability() = default;
  explicit Probability(Scalar v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::domain_error("Probability out of [0,1]: " + std::to_string(v));
  }
  /// Clamp into [0,1] instead of throwing (for approximations that can
  /// overshoot the unit interval).
  static Probability clamped(Scalar v) noexcept {
    Probability p;
    p.v_ = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return p;
  }
  Scalar value() const noexcept { return v_; }
  operator Scalar() const noexcept { return v_; }

 private:
  Scalar v_ = 0.0;
};

/// Raised by the co-design solvers when no feasible operating point exists.
/// what() carries the limiting constraint.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& limiting_constraint)
      : std::runtime_error(limiting_constraint) {}
};

}  // namespace urllc

#endif  // URLLC_TYPES_HPP_
