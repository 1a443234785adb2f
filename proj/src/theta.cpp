#include "thetabundle/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace thetabundle {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
const cplx kI(0.0, 1.0);

// log |term(n)| for the kernel below, including the derivative prefactor.
double log_term_magnitude(long long n, double a_quad, double a_lin, double y,
                          double v, int deriv_order) {
    const double u = static_cast<double>(n) + a_quad;
    const double ul = static_cast<double>(n) + a_lin;
    double lm = -kPi * y * u * u - 2.0 * kPi * v * ul;
    if (deriv_order > 0) {
        const double mag = std::abs(2.0 * kPi * ul);
        if (mag == 0.0) return -std::numeric_limits<double>::infinity();
        lm += deriv_order * std::log(mag);
    }
    return lm;
}

// Geometric bound on the one-sided tail starting at index n_next, stepping by
// +/-1.  Sums three explicit magnitudes, then closes with a geometric series
// once the ratio between consecutive magnitudes has fallen below 0.7.
// Returns +inf when the ratio is still too large (caller keeps summing).
double side_tail_bound(long long n_next, int step, double a_quad, double a_lin,
                       double y, double v, int deriv_order) {
    double total = 0.0;
    long long n = n_next;
    for (int j = 0; j < 3; ++j) {
        total += std::exp(log_term_magnitude(n, a_quad, a_lin, y, v, deriv_order));
        n += step;
    }
    const double lm0 = log_term_magnitude(n, a_quad, a_lin, y, v, deriv_order);
    const double lm1 = log_term_magnitude(n + step, a_quad, a_lin, y, v, deriv_order);
    const double ratio = std::exp(lm1 - lm0);
    if (!(ratio < 0.7)) return std::numeric_limits<double>::infinity();
    total += std::exp(lm0) / (1.0 - ratio);
    return total;
}

} // namespace

ThetaEvaluation theta_sum(double char_a, cplx zeff, cplx tau_eff,
                          int deriv_order, const TruncationPolicy& policy) {
    if (!(policy.target_abs_error > 0.0))
        throw std::invalid_argument("target_abs_error must be positive");
    if (policy.max_terms < 1)
        throw std::invalid_argument("max_terms must be at least 1");
    const double y = tau_eff.imag();
    if (!(y > 0.0)) throw InvalidTau("Im(tau) must be strictly positive");

    const double a_quad = char_a;
    const double a_lin = char_a + (policy.tamper_series_sign ? 0.05 : 0.0);
    const double v = zeff.imag();

    auto term = [&](long long n) -> cplx {
        const double u = static_cast<double>(n) + a_quad;
        const double ul = static_cast<double>(n) + a_lin;
        cplx ex = kI * kPi * tau_eff * (u * u) + kI * (2.0 * kPi * ul) * zeff;
        cplx t = std::exp(ex);
        for (int j = 0; j < deriv_order; ++j) t *= kI * (2.0 * kPi * ul);
        return t;
    };

    // Largest magnitude near n + a = -v/y.
    const long long n0 = std::llround(-v / y - char_a);

    ThetaEvaluation out;
    out.value = term(n0);
    out.terms_used = 1;
    for (long long j = 1;; ++j) {
        out.value += term(n0 + j);
        out.value += term(n0 - j);
        out.terms_used += 2;
        const double up =
            side_tail_bound(n0 + j + 1, +1, a_quad, a_lin, y, v, deriv_order);
        const double down =
            side_tail_bound(n0 - j - 1, -1, a_quad, a_lin, y, v, deriv_order);
        const double tail = up + down;
        if (tail <= policy.target_abs_error) {
            out.tail_bound = tail;
            return out;
        }
        if (out.terms_used + 2 > policy.max_terms)
            throw NonConvergent("theta series: max_terms reached before the tail "
                                "bound met target_abs_error");
    }
}

ThetaEvaluation theta11(cplx z, const Tau& tau, const TruncationPolicy& policy) {
    return theta_sum(0.5, z + 0.5, tau.value, 0, policy);
}

ThetaEvaluation theta11_deriv(cplx z, const Tau& tau, int order,
                              const TruncationPolicy& policy) {
    if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
    return theta_sum(0.5, z + 0.5, tau.value, order, policy);
}

ThetaEvaluation theta00(cplx z, const Tau& tau, const TruncationPolicy& policy) {
    return theta_sum(0.0, z, tau.value, 0, policy);
}

ThetaEvaluation theta_degree_basis(int k, int p, cplx z, const Tau& tau,
                                   const TruncationPolicy& policy) {
    if (k < 1) throw std::invalid_argument("degree k must be >= 1");
    if (p < 0 || p >= k) throw std::invalid_argument("basis index p must satisfy 0 <= p < k");
    const double kk = static_cast<double>(k);
    return theta_sum(0.5 + static_cast<double>(p) / kk, kk * z + kk * 0.5,
                     kk * tau.value, 0, policy);
}

ThetaEvaluation theta_degree_basis_deriv(int k, int p, cplx z, const Tau& tau,
                                         int order, const TruncationPolicy& policy) {
    if (k < 1) throw std::invalid_argument("degree k must be >= 1");
    if (p < 0 || p >= k) throw std::invalid_argument("basis index p must satisfy 0 <= p < k");
    const double kk = static_cast<double>(k);
    ThetaEvaluation ev = theta_sum(0.5 + static_cast<double>(p) / kk,
                                   kk * z + kk * 0.5, kk * tau.value, order, policy);
    const double chain = std::pow(kk, order);
    ev.value *= chain;
    ev.tail_bound *= chain;
    return ev;
}

ModularCheckResult modular_transform_check(const std::vector<cplx>& z_samples,
                                           const Tau& tau, const ModularMatrix& m,
                                           const TruncationPolicy& policy) {
    if (z_samples.empty())
        throw std::invalid_argument("modular_transform_check needs at least one sample");
    const cplx t = tau.value;
    const cplx denom = static_cast<double>(m.c) * t + static_cast<double>(m.d);
    if (std::abs(denom) == 0.0)
        throw std::invalid_argument("c*tau + d must be nonzero");
    const Tau tau_prime(((static_cast<double>(m.a) * t + static_cast<double>(m.b)) / denom));

    std::vector<cplx> ratios;
    ratios.reserve(z_samples.size());
    for (cplx z : z_samples) {
        const cplx base = theta11(z, tau, policy).value;
        if (std::abs(base) < 1e-12)
            throw SampleAtZero("modular_transform_check: sample at a zero of theta");
        const cplx lhs = theta11(z / denom, tau_prime, policy).value;
        const cplx factor =
            std::sqrt(denom) *
            std::exp(kI * kPi * static_cast<double>(m.c) * z * z / denom);
        ratios.push_back(lhs / (factor * base));
    }
    cplx mean(0.0, 0.0);
    for (cplx r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double max_res = 0.0;
    for (cplx r : ratios) max_res = std::max(max_res, std::abs(r - mean));
    return {mean, max_res};
}

double heat_equation_residual(cplx z, const Tau& tau, double fd_step,
                              const TruncationPolicy& policy) {
    if (!(tau.value.imag() > fd_step))
        throw std::invalid_argument("heat_equation_residual requires Im(tau) > fd_step");
    const Tau tp(tau.value + fd_step);
    const Tau tm(tau.value - fd_step);
    const cplx dtau =
        (theta11(z, tp, policy).value - theta11(z, tm, policy).value) / (2.0 * fd_step);
    const cplx dzz = theta11_deriv(z, tau, 2, policy).value;
    return std::abs(dtau - dzz / (4.0 * kPi * kI));
}

namespace {

// Winding of theta11 along [z1, z2], values th1/th2 already computed.
// Subdivides until the phase step is below 1 radian.
double segment_winding(cplx z1, cplx th1, cplx z2, cplx th2, const Tau& tau,
                       const TruncationPolicy& policy, int depth) {
    const double d = std::arg(th2 / th1);
    if (std::abs(d) <= 1.0 || depth >= 40) return d;
    const cplx zm = 0.5 * (z1 + z2);
    const cplx thm = theta11(zm, tau, policy).value;
    if (std::abs(thm) < 1e-10)
        throw ContourThroughZero("count_zeros: contour passes through a zero");
    return segment_winding(z1, th1, zm, thm, tau, policy, depth + 1) +
           segment_winding(zm, thm, z2, th2, tau, policy, depth + 1);
}

} // namespace

int count_zeros_fundamental_domain(const Tau& tau, const TruncationPolicy& policy,
                                   cplx offset) {
    const cplx t = tau.value;
    const cplx base = offset - 0.5 * (1.0 + t);
    const cplx corners[5] = {base, base + 1.0, base + 1.0 + t, base + t, base};

    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const int samples = 16;
        cplx zprev = corners[e];
        cplx thprev = theta11(zprev, tau, policy).value;
        if (std::abs(thprev) < 1e-10)
            throw ContourThroughZero("count_zeros: contour passes through a zero");
        for (int j = 1; j <= samples; ++j) {
            const cplx z = corners[e] + (corners[e + 1] - corners[e]) *
                                            (static_cast<double>(j) / samples);
            const cplx th = theta11(z, tau, policy).value;
            if (std::abs(th) < 1e-10)
                throw ContourThroughZero("count_zeros: contour passes through a zero");
            total += segment_winding(zprev, thprev, z, th, tau, policy, 0);
            zprev = z;
            thprev = th;
        }
    }
    return static_cast<int>(std::llround(total / (2.0 * kPi)));
}

} // namespace thetabundle
