#ifndef URLLC_SPECFUN_HPP_
#define URLLC_SPECFUN_HPP_

#include <functional>

#include "urllc/types.hpp"

namespace urllc::specfun {

/// CDF of the standard normal distribution, psi(x). Evaluated through the
/// complementary error function so the lower tail keeps relative accuracy
/// down to ~1e-300.
Probability std_normal_cdf(Scalar x);

/// Upper-tail probability Q(x) = 1 - psi(x), tail-accurate for large x.
Probability std_normal_q(Scalar x);

/// Inverse of the Q-function: returns x with Q(x) = p, for p in (0,1).
Scalar q_inverse(Probability p);

/// Lower real branch W_{-1} of the Lambert W function on [-1/e, 0).
/// Result w <= -1 satisfies w*exp(w) = x with |w e^w - x| < 1e-12 |x|.
Scalar lambert_w_m1(Scalar x);

/// Expectation of `integrand` over the post-combining channel gain of an
/// n_antennas-branch Rayleigh SIMO link, i.e. against the Erlang(n,1)
/// density x^{n-1} e^{-x} / (n-1)!.
///
/// Uses a fixed 200-node generalized Gauss-Laguerre rule; when two rules of
/// different order disagree beyond 1e-9 the result is recomputed by adaptive
/// Simpson quadrature. Target accuracy 1e-8 absolute for integrands bounded
/// by 1.
Scalar fading_expectation(const std::function<Scalar(Scalar)>& integrand,
                          int n_antennas);

}  // namespace urllc::specfun

#endif  // URLLC_SPECFUN_HPP_
