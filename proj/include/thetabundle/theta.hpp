#ifndef THETABUNDLE_THETA_HPP
#define THETABUNDLE_THETA_HPP

// Classical Jacobi theta machinery: the odd theta function theta11, its
// z-derivatives, the characteristic-[0,0] series, and the degree-k basis.
//
// Everything is evaluated through one kernel,
//
//     theta_sum(a, Z, T) = sum_n exp(pi*i*T*(n+a)^2 + 2*pi*i*(n+a)*Z),
//
// summed symmetrically around the index of largest term magnitude until a
// geometric bound on the Gaussian tail drops below the requested target.
// Specializations:
//
//     theta11(z, tau)        = theta_sum(1/2, z + 1/2, tau)
//     theta00(z, tau)        = theta_sum(0,   z,       tau)
//     theta_k^p(z, tau)      = theta_sum(1/2 + p/k, k*z + k/2, k*tau)
//
// theta11 is Mumford's theta_{11}: odd in z, zero exactly on Z + tau*Z, and
// it satisfies
//     theta(z+1,   tau) = -theta(z, tau)
//     theta(z+tau, tau) = -exp(-2*pi*i*z - pi*i*tau) * theta(z, tau)
//     d theta / d tau   = (1 / 4*pi*i) * d^2 theta / d z^2.

#include <complex>
#include <vector>

#include "thetabundle/errors.hpp"

namespace thetabundle {

using cplx = std::complex<double>;

struct Tau {
    cplx value;
    explicit Tau(cplx v) : value(v) {
        if (!(v.imag() > 0.0))
            throw InvalidTau("Im(tau) must be strictly positive");
    }
};

struct TruncationPolicy {
    double target_abs_error = 1e-14;
    int max_terms = 4000;
    // Deliberately corrupts the series term coefficients; used only by the
    // CLI negative control to prove the identity suite detects a broken
    // implementation.
    bool tamper_series_sign = false;
};

struct ThetaEvaluation {
    cplx value{};
    int terms_used = 0;
    double tail_bound = 0.0;
};

struct ModularMatrix {
    long long a, b, c, d;
    ModularMatrix(long long a_, long long b_, long long c_, long long d_)
        : a(a_), b(b_), c(c_), d(d_) {
        if (a * d - b * c != 1)
            throw std::invalid_argument("ModularMatrix requires ad - bc = 1");
    }
};

// Raw kernel; deriv_order differentiates term-wise with respect to Z.
ThetaEvaluation theta_sum(double char_a, cplx zeff, cplx tau_eff,
                          int deriv_order, const TruncationPolicy& policy);

ThetaEvaluation theta11(cplx z, const Tau& tau, const TruncationPolicy& policy);
ThetaEvaluation theta11_deriv(cplx z, const Tau& tau, int order,
                              const TruncationPolicy& policy);
// Characteristic-[0,0] series, used by the Kirwin-Uribe cross-check.
ThetaEvaluation theta00(cplx z, const Tau& tau, const TruncationPolicy& policy);

// Degree-k basis function, 0 <= p < k.  Satisfies the degree-k laws
//   theta_k(z+1)   = (-1)^k theta_k(z)
//   theta_k(z+tau) = (-1)^k exp((-2*pi*i*z - pi*i*tau)*k) theta_k(z)
// and reduces to theta11 at k = 1, p = 0.
ThetaEvaluation theta_degree_basis(int k, int p, cplx z, const Tau& tau,
                                   const TruncationPolicy& policy);
// z-derivative of theta_k^p (chain rule factor k per order).
ThetaEvaluation theta_degree_basis_deriv(int k, int p, cplx z, const Tau& tau,
                                         int order, const TruncationPolicy& policy);

struct ModularCheckResult {
    cplx zeta_estimate{};
    double max_residual = 0.0;
};

// Ratio r(z) = theta(z/(c*tau+d), M.tau) /
//              [ (c*tau+d)^{1/2} exp(pi*i*c*z^2/(c*tau+d)) theta(z,tau) ]
// over the samples; returns the mean and the max deviation from the mean.
// The square root is the principal branch; the branch constant is absorbed
// into zeta_estimate.
ModularCheckResult modular_transform_check(const std::vector<cplx>& z_samples,
                                           const Tau& tau, const ModularMatrix& m,
                                           const TruncationPolicy& policy);

// | d theta/d tau - (1/4*pi*i) d^2 theta/d z^2 |, with the tau-derivative by
// a central difference of step fd_step and the z-derivative term-wise.
double heat_equation_residual(cplx z, const Tau& tau, double fd_step,
                              const TruncationPolicy& policy);

// Argument-principle winding count of theta11(., tau) around the fundamental
// parallelogram with vertices offset - (1+tau)/2 + {0, 1, 1+tau, tau}; the
// default offset centres the lattice zero.
int count_zeros_fundamental_domain(const Tau& tau, const TruncationPolicy& policy,
                                   cplx offset = cplx(0.0, 0.0));

} // namespace thetabundle

#endif
