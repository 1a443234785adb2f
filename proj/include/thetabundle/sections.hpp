#ifndef THETABUNDLE_SECTIONS_HPP
#define THETABUNDLE_SECTIONS_HPP

// The generalized theta function on the total space,
//
//     theta_M(x,y,s,t) = theta11(s + omega(x) t, omega(x)) * theta11(x + iy, i),
//
// its automorphy multipliers under the Gamma generators, the degree-k section
// basis of L_k, shifted actions and constrained products, and the k = 1
// Kirwin-Uribe cross-check.
//
// Closed-form generator multipliers (e_g(u) = theta_M(g.u) / theta_M(u)):
//   e_c = -1
//   e_d = -exp(-2*pi*i*(s + omega t) - pi*i*omega)
//   e_b = -exp(-2*pi*i*(x + iy) + pi)        (B =  I)
//   e_b = +exp(-2*pi*i*(x + iy) + pi)        (B = -I, acting on (x,y+1,-s,-t))
//   e_a = zeta * (-gamma*omega + delta)^{1/2}
//            * exp(-pi*i*gamma*(s + omega t)^2 / (-gamma*omega + delta))
// with zeta estimated once per bundle through the classical modular law and
// cached (principal square root; the branch constant is absorbed into zeta).

#include <complex>
#include <vector>

#include "thetabundle/bundle.hpp"
#include "thetabundle/theta.hpp"

namespace thetabundle {

enum class Gen { a, b, c, d };

std::string to_string(Gen g);
GroupElement to_element(Gen g);

struct ShiftPair {
    cplx lambda{}; // fibre shift
    cplx mu{};     // base shift
};

struct SectionIndex {
    int k = 1;
    int p = 0, q = 0; // 0 <= p, q < k
};

ThetaEvaluation theta_m(const Bundle& bundle, const TotalPoint& p,
                        const TruncationPolicy& policy);

// (zeta . theta_M)(u) = theta11(s + omega t + lambda, omega) * theta11(x + iy + mu, i).
ThetaEvaluation shifted_theta_m(const Bundle& bundle, const ShiftPair& shift,
                                const TotalPoint& p, const TruncationPolicy& policy);

// Cached constant of the a-multiplier; estimated from the modular ratio at a
// fixed sample set and reused for every evaluation on this bundle.
cplx multiplier_zeta(const Bundle& bundle, const TruncationPolicy& policy);

cplx multiplier(const Bundle& bundle, Gen gen, const TotalPoint& p,
                const TruncationPolicy& policy);

// Multiplier of an arbitrary normal-form element, telescoped letter by letter
// through the cocycle identity e_{gh}(u) = e_g(h.u) e_h(u).
cplx element_multiplier(const Bundle& bundle, const GroupElement& g,
                        const TotalPoint& p, const TruncationPolicy& policy);

// |theta_M(g.p) - e_g(p) theta_M(p)| / |theta_M(p)|.
double verify_multiplier(const Bundle& bundle, Gen gen, const TotalPoint& p,
                         const TruncationPolicy& policy);

// |e_{g1}(g2.p) e_{g2}(p) - e_{g1 g2}(p)| / max(1, |e_{g1 g2}(p)|).
double cocycle_check(const Bundle& bundle, const GroupElement& g1,
                     const GroupElement& g2, const TotalPoint& p,
                     const TruncationPolicy& policy);

// gamma_s, delta_s with alpha + beta + gamma_s + delta_s = 0 and
// alpha^2 + beta^2 + gamma_s^2 + delta_s^2 = 0, via the quadratic
// x^2 + (alpha+beta) x + ((alpha+beta)^2 + alpha^2 + beta^2)/2 = 0.
std::pair<cplx, cplx> solve_shift_constraints(cplx alpha, cplx beta);

// Product of shifted theta_M factors.  Requires sum(lambda) = sum(mu) = 0 and,
// when the bundle's gamma is nonzero, sum(lambda^2) = 0; throws
// ConstraintViolated naming the failing sum otherwise.  The degree-k
// transformation law is the testable contract, not a side effect of this call.
ThetaEvaluation product_section(const Bundle& bundle, const std::vector<ShiftPair>& shifts,
                                const TotalPoint& p, const TruncationPolicy& policy);

// theta_k^p(s + omega(x) t, omega(x)) * theta_k^q(x + iy, i); the k^2 of these
// span L_k.
ThetaEvaluation basis_section(const Bundle& bundle, const SectionIndex& idx,
                              const TotalPoint& p, const TruncationPolicy& policy);

// Kirwin-Uribe double series with Gaussian f(x,t) = exp(-2*pi*x^2 - 2*pi*t^2);
// the third coordinate of p plays the role of the KU variable z.
ThetaEvaluation ku_theta(int k, int m, int n, const TotalPoint& p,
                         const TruncationPolicy& policy);

// Relative residual of the factorization of ku_theta (k=1, m=n=0) into two
// characteristic-[0,0] theta functions times an explicit exponential.
double ku_cross_check(const TotalPoint& p, const TruncationPolicy& policy);

} // namespace thetabundle

#endif
