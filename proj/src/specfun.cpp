#include "urllc/specfun.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace urllc::specfun {

namespace {

constexpr Scalar kSqrt2 = 1.4142135623730950488;

// Acklam's rational approximation of the inverse normal CDF. Accurate to
// ~1e-9; used as the starting point for Halley refinement below.
Scalar inverse_normal_cdf_estimate(Scalar p) {
  static const Scalar a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const Scalar b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const Scalar c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const Scalar d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const Scalar p_low = 0.02425;
  if (p < p_low) {
    const Scalar q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const Scalar q = p - 0.5;
    const Scalar r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const Scalar q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

Scalar normal_pdf(Scalar x) {
  return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

// Generalized Gauss-Laguerre rule for weight x^alpha e^{-x}, with weights
// normalized by Gamma(alpha+1) so they sum to 1 (probability quadrature for
// the Erlang(alpha+1, 1) density). Nodes/weights via Golub-Welsch on the
// symmetric tridiagonal Jacobi matrix.
struct QuadRule {
  Vec nodes;
  Vec weights;  // normalized: sum == 1
};

QuadRule make_laguerre_rule(int n, Scalar alpha) {
  Vec diag(n), subdiag(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k)
    subdiag[k - 1] = std::sqrt(k * (k + alpha));
  Eigen::SelfAdjointEigenSolver<Mat> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  QuadRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  rule.weights /= rule.weights.sum();
  return rule;
}

const QuadRule& cached_rule(int n, int n_antennas) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, n_antennas);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, make_laguerre_rule(n, n_antennas - 1.0)).first;
  return it->second;
}

Scalar apply_rule(const QuadRule& rule,
                  const std::function<Scalar(Scalar)>& f) {
  Scalar acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

// Adaptive Simpson on the density-weighted integrand, used as fallback when
// the two fixed rules disagree.
Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a,
                        Scalar b, Scalar fa, Scalar fm, Scalar fb, Scalar tol,
                        int depth, int force) {
  const Scalar m = 0.5 * (a + b);
  const Scalar lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Scalar flm = f(lm), frm = f(rm);
  const Scalar whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Scalar left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Scalar right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Scalar delta = left + right - whole;
  // The first `force` levels subdivide unconditionally so a peaked integrand
  // sampled at three near-zero points is not mistaken for zero.
  if (force <= 0 && (depth <= 0 || std::abs(delta) <= 15.0 * tol))
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1,
                          force - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1,
                          force - 1);
}

Scalar adaptive_expectation(const std::function<Scalar(Scalar)>& integrand,
                            int n_antennas) {
  const Scalar alpha = n_antennas - 1.0;
  const Scalar lg = std::lgamma(static_cast<Scalar>(n_antennas));
  auto weighted = [&](Scalar x) -> Scalar {
    if (x <= 0.0) return 0.0;
    return integrand(x) * std::exp(alpha * std::log(x) - x - lg);
  };
  const Scalar hi = n_antennas + 40.0 * std::sqrt(Scalar(n_antennas)) + 120.0;
  const Scalar mid = 0.5 * hi;
  return adaptive_simpson(weighted, 0.0, hi, weighted(0.0), weighted(mid),
                          weighted(hi), 1e-12, 48, 8);
}

}  // namespace

Probability std_normal_cdf(Scalar x) {
  if (!std::isfinite(x))
    throw std::domain_error("std_normal_cdf: non-finite argument");
  return Probability::clamped(0.5 * std::erfc(-x / kSqrt2));
}

Probability std_normal_q(Scalar x) {
  if (!std::isfinite(x))
    throw std::domain_error("std_normal_q: non-finite argument");
  return Probability::clamped(0.5 * std::erfc(x / kSqrt2));
}

Scalar q_inverse(Probability p) {
  const Scalar pv = p.value();
  if (pv <= 0.0 || pv >= 1.0)
    throw std::domain_error("q_inverse: p must lie strictly inside (0,1)");
  // Q(x) = p  <=>  CDF(-x) = p.
  Scalar x = -inverse_normal_cdf_estimate(pv);
  // Halley refinement on f(x) = Q(x) - p; f' = -pdf, f'' = x*pdf.
  for (int it = 0; it < 3; ++it) {
    const Scalar f = std_normal_q(x).value() - pv;
    const Scalar fp = -normal_pdf(x);
    if (fp == 0.0) break;
    const Scalar r = f / fp;
    x -= r / (1.0 - 0.5 * r * x);
  }
  return x;
}

Scalar lambert_w_m1(Scalar x) {
  const Scalar kMinusInvE = -std::exp(-1.0);
  if (!(x >= kMinusInvE && x < 0.0))
    throw std::domain_error("lambert_w_m1: argument outside [-1/e, 0)");
  if (x == kMinusInvE) return -1.0;

  Scalar w;
  if (x > -0.25) {
    // Asymptotic guess for x -> 0^-: w0 = ln(-x) - ln(-ln(-x)), plus the
    // next series term.
    const Scalar l1 = std::log(-x);
    const Scalar l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else {
    // Series around the branch point in p = -sqrt(2(1 + e x)).
    const Scalar p = -std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
  }
  if (w > -1.0) w = -1.0 - 1e-12;

  // Halley iterations on f(w) = w e^w - x, safeguarded by a bisection
  // bracket [w_lo, -1] with f(w_lo) > 0 > f(-1) (f decreases on w < -1).
  Scalar w_lo = w;
  while (w_lo * std::exp(w_lo) - x <= 0.0 && w_lo > -746.0) w_lo *= 2.0;
  Scalar w_hi = -1.0;
  for (int it = 0; it < 64; ++it) {
    const Scalar ew = std::exp(w);
    const Scalar f = w * ew - x;
    if (std::abs(f) <= 1e-14 * std::abs(x)) break;
    // f decreases on w < -1: positive residual means w lies below the root.
    if (f > 0.0)
      w_lo = std::max(w_lo, w);
    else
      w_hi = std::min(w_hi, w);
    const Scalar fp = (w + 1.0) * ew;
    const Scalar fpp = (w + 2.0) * ew;
    Scalar step = f / (fp - 0.5 * f * fpp / fp);
    Scalar w_next = w - step;
    if (!(w_next < w_hi && w_next > w_lo) || !std::isfinite(w_next))
      w_next = 0.5 * (w_lo + w_hi);
    if (w_next == w) break;
    w = w_next;
  }
  return std::min(w, -1.0);
}

Scalar fading_expectation(const std::function<Scalar(Scalar)>& integrand,
                          int n_antennas) {
  if (n_antennas < 1)
    throw std::domain_error("fading_expectation: antenna count must be >= 1");
  const Scalar primary = apply_rule(cached_rule(200, n_antennas), integrand);
  const Scalar check = apply_rule(cached_rule(160, n_antennas), integrand);
  if (std::abs(primary - check) <= std::max(1e-12, 1e-6 * std::abs(primary)))
    return primary;
  return adaptive_expectation(integrand, n_antennas);
}

}  // namespace urllc::specfun
