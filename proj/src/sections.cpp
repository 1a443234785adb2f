#include "thetabundle/sections.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace thetabundle {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
const cplx kI(0.0, 1.0);

ThetaEvaluation product_eval(const ThetaEvaluation& f, const ThetaEvaluation& g) {
    ThetaEvaluation out;
    out.value = f.value * g.value;
    out.terms_used = f.terms_used + g.terms_used;
    out.tail_bound = std::abs(f.value) * g.tail_bound +
                     std::abs(g.value) * f.tail_bound + f.tail_bound * g.tail_bound;
    return out;
}

} // namespace

std::string to_string(Gen g) {
    switch (g) {
        case Gen::a: return "a";
        case Gen::b: return "b";
        case Gen::c: return "c";
        case Gen::d: return "d";
    }
    return "?";
}

GroupElement to_element(Gen g) {
    switch (g) {
        case Gen::a: return GroupElement::gen_a();
        case Gen::b: return GroupElement::gen_b();
        case Gen::c: return GroupElement::gen_c();
        case Gen::d: return GroupElement::gen_d();
    }
    return GroupElement::identity();
}

ThetaEvaluation theta_m(const Bundle& bundle, const TotalPoint& p,
                        const TruncationPolicy& policy) {
    return shifted_theta_m(bundle, ShiftPair{}, p, policy);
}

ThetaEvaluation shifted_theta_m(const Bundle& bundle, const ShiftPair& shift,
                                const TotalPoint& p, const TruncationPolicy& policy) {
    const cplx w = omega(bundle, p.x);
    const Tau fibre_tau(w);
    static const Tau base_tau(cplx(0.0, 1.0));
    const ThetaEvaluation fibre =
        theta11(p.s + w * p.t + shift.lambda, fibre_tau, policy);
    const ThetaEvaluation base =
        theta11(cplx(p.x, p.y) + shift.mu, base_tau, policy);
    return product_eval(fibre, base);
}

cplx multiplier_zeta(const Bundle& bundle, const TruncationPolicy& policy) {
    ZetaCache& cache = bundle.zeta_cache();
    std::call_once(cache.once, [&] {
        const ModularMatrix m(bundle.alpha(), -bundle.beta(), -bundle.gamma(),
                              bundle.delta());
        const Tau tau0(omega(bundle, 0.0));
        // Fixed sample set; shifted wholesale if a sample lands on a zero.
        for (int attempt = 0; attempt < 6; ++attempt) {
            std::vector<cplx> samples;
            const cplx shift = 0.037 * attempt * cplx(1.0, 1.0);
            for (int j = 0; j < 8; ++j)
                samples.push_back(cplx(0.13 + 0.11 * j, 0.07 + 0.05 * j) + shift);
            try {
                const ModularCheckResult r =
                    modular_transform_check(samples, tau0, m, policy);
                // -1 from the base factor theta11(x+1+iy, i) = -theta11(x+iy, i)
                cache.value = -r.zeta_estimate;
                return;
            } catch (const SampleAtZero&) {
                continue;
            }
        }
        throw SampleAtZero("multiplier_zeta: could not find zero-free samples");
    });
    return cache.value;
}

cplx multiplier(const Bundle& bundle, Gen gen, const TotalPoint& p,
                const TruncationPolicy& policy) {
    const cplx w = omega(bundle, p.x);
    const cplx z = p.s + w * p.t;
    switch (gen) {
        case Gen::c:
            return cplx(-1.0, 0.0);
        case Gen::d:
            return -std::exp(-2.0 * kPi * kI * z - kPi * kI * w);
        case Gen::b: {
            const cplx e = std::exp(-2.0 * kPi * kI * cplx(p.x, p.y) + kPi);
            return bundle.b_is_minus() ? e : -e;
        }
        case Gen::a: {
            const double ga = static_cast<double>(bundle.gamma());
            const double de = static_cast<double>(bundle.delta());
            const cplx c1 = -ga * w + de;
            return multiplier_zeta(bundle, policy) * std::sqrt(c1) *
                   std::exp(-kPi * kI * ga * z * z / c1);
        }
    }
    throw std::invalid_argument("unknown generator");
}

cplx element_multiplier(const Bundle& bundle, const GroupElement& g,
                        const TotalPoint& p, const TruncationPolicy& policy) {
    // Letters of a^{na} b^{nb} c^{nc} d^{nd} processed right to left.
    struct Block {
        Gen gen;
        long long count;
    };
    const Block blocks[4] = {{Gen::a, g.na}, {Gen::b, g.nb}, {Gen::c, g.nc}, {Gen::d, g.nd}};

    cplx result(1.0, 0.0);
    TotalPoint q = p;
    for (int bi = 3; bi >= 0; --bi) {
        const Gen gen = blocks[bi].gen;
        const long long count = blocks[bi].count;
        const GroupElement fwd = to_element(gen);
        const GroupElement bwd = inverse(bundle, fwd);
        for (long long j = 0; j < std::llabs(count); ++j) {
            if (count > 0) {
                result *= multiplier(bundle, gen, q, policy);
                q = gamma_action(bundle, fwd, q);
            } else {
                // e_{g^{-1}}(q) = 1 / e_g(g^{-1}.q)
                q = gamma_action(bundle, bwd, q);
                result /= multiplier(bundle, gen, q, policy);
            }
        }
    }
    return result;
}

double verify_multiplier(const Bundle& bundle, Gen gen, const TotalPoint& p,
                         const TruncationPolicy& policy) {
    const cplx base = theta_m(bundle, p, policy).value;
    if (std::abs(base) < 1e-10)
        throw NearZeroBase("verify_multiplier: |theta_M(p)| < 1e-10");
    const TotalPoint q = gamma_action(bundle, to_element(gen), p);
    const cplx moved = theta_m(bundle, q, policy).value;
    return std::abs(moved - multiplier(bundle, gen, p, policy) * base) / std::abs(base);
}

double cocycle_check(const Bundle& bundle, const GroupElement& g1,
                     const GroupElement& g2, const TotalPoint& p,
                     const TruncationPolicy& policy) {
    const cplx lhs = element_multiplier(bundle, g1, gamma_action(bundle, g2, p), policy) *
                     element_multiplier(bundle, g2, p, policy);
    const cplx rhs = element_multiplier(bundle, compose(bundle, g1, g2), p, policy);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

std::pair<cplx, cplx> solve_shift_constraints(cplx alpha, cplx beta) {
    const cplx s = alpha + beta;
    const cplx prod = (s * s + alpha * alpha + beta * beta) / 2.0;
    const cplx disc = s * s - 4.0 * prod;
    const cplx root = std::sqrt(disc);
    return {(-s + root) / 2.0, (-s - root) / 2.0};
}

ThetaEvaluation product_section(const Bundle& bundle, const std::vector<ShiftPair>& shifts,
                                const TotalPoint& p, const TruncationPolicy& policy) {
    if (shifts.empty())
        throw std::invalid_argument("product_section needs at least one shift");
    cplx sum_lambda{}, sum_mu{}, sum_lambda_sq{};
    for (const ShiftPair& sh : shifts) {
        sum_lambda += sh.lambda;
        sum_mu += sh.mu;
        sum_lambda_sq += sh.lambda * sh.lambda;
    }
    const double tol = 1e-9;
    if (std::abs(sum_lambda) > tol)
        throw ConstraintViolated("sum of fibre shifts is " + std::to_string(std::abs(sum_lambda)) +
                                 ", expected 0");
    if (std::abs(sum_mu) > tol)
        throw ConstraintViolated("sum of base shifts is " + std::to_string(std::abs(sum_mu)) +
                                 ", expected 0");
    if (bundle.gamma() != 0 && std::abs(sum_lambda_sq) > tol)
        throw ConstraintViolated("sum of squared fibre shifts is " +
                                 std::to_string(std::abs(sum_lambda_sq)) +
                                 ", expected 0 (gamma != 0)");
    ThetaEvaluation out = shifted_theta_m(bundle, shifts[0], p, policy);
    for (std::size_t i = 1; i < shifts.size(); ++i)
        out = product_eval(out, shifted_theta_m(bundle, shifts[i], p, policy));
    return out;
}

ThetaEvaluation basis_section(const Bundle& bundle, const SectionIndex& idx,
                              const TotalPoint& p, const TruncationPolicy& policy) {
    const cplx w = omega(bundle, p.x);
    const Tau fibre_tau(w);
    static const Tau base_tau(cplx(0.0, 1.0));
    const ThetaEvaluation fibre =
        theta_degree_basis(idx.k, idx.p, p.s + w * p.t, fibre_tau, policy);
    const ThetaEvaluation base =
        theta_degree_basis(idx.k, idx.q, cplx(p.x, p.y), base_tau, policy);
    return product_eval(fibre, base);
}

namespace {

// 1D Gaussian tail sum_{j >= 0} exp(-2*pi*(r0 + j)^2) for r0 > 0, bounded by a
// geometric series.
double gaussian_tail(double r0) {
    if (r0 < 0.0) r0 = 0.0;
    const double first = std::exp(-2.0 * kPi * r0 * r0);
    const double ratio = std::exp(-2.0 * kPi * (2.0 * r0 + 1.0));
    return first / (1.0 - std::min(ratio, 0.5));
}

} // namespace

ThetaEvaluation ku_theta(int k, int m, int n, const TotalPoint& p,
                         const TruncationPolicy& policy) {
    if (k < 1) throw std::invalid_argument("ku_theta requires k >= 1");
    const double x = p.x, y = p.y, z = p.s, t = p.t;

    // Window radius: the Gaussian factor exp(-2*pi*r^2) must drop below the
    // target with margin.
    const double target = std::max(policy.target_abs_error, 1e-300);
    const double radius = std::sqrt((-std::log(target) + 8.0) / (2.0 * kPi)) + 1.0;
    const long long a_lo = std::llround(std::floor(-x - radius));
    const long long a_hi = std::llround(std::ceil(-x + radius));
    const long long b_lo = std::llround(std::floor(-t - radius));
    const long long b_hi = std::llround(std::ceil(-t + radius));
    const long long total_terms = (a_hi - a_lo + 1) * (b_hi - b_lo + 1);
    if (total_terms > policy.max_terms)
        throw NonConvergent("ku_theta: window exceeds max_terms");

    // Sign note: the displayed prefactor carries exp(-4*pi*i*k*z*x), but that
    // variant fails the displayed pseudo-periodicity laws (the z+1 law then
    // produces exp(-4*pi*i*k*x)); the + sign satisfies all four.
    const cplx prefactor = std::exp(
        -2.0 * kPi * kI * (static_cast<double>(m) * y - static_cast<double>(n) * (z + x * y)) +
        4.0 * kPi * kI * static_cast<double>(k) * z * x);

    cplx sum{};
    double abs_sum_a = 0.0, abs_sum_b = 0.0;
    for (long long a = a_lo; a <= a_hi; ++a) {
        const double xa = x + static_cast<double>(a);
        abs_sum_a += std::exp(-2.0 * kPi * xa * xa);
        for (long long b = b_lo; b <= b_hi; ++b) {
            const double tb = t + static_cast<double>(b);
            if (a == a_lo) abs_sum_b += std::exp(-2.0 * kPi * tb * tb);
            const cplx phase =
                2.0 * kPi * kI * static_cast<double>(n) * y * static_cast<double>(a) -
                4.0 * kPi * kI * static_cast<double>(k) *
                    (static_cast<double>(b) * y - z * static_cast<double>(a) -
                     y * xa * xa / 2.0);
            sum += std::exp(phase - 2.0 * kPi * (xa * xa + tb * tb));
        }
    }

    // Distances from the window edges to the Gaussian centres -x and -t; the
    // excluded indices start one unit beyond them.
    const double ra = std::min(std::abs(x + static_cast<double>(a_lo)),
                               std::abs(x + static_cast<double>(a_hi)));
    const double rb = std::min(std::abs(t + static_cast<double>(b_lo)),
                               std::abs(t + static_cast<double>(b_hi)));
    const double ta = 2.0 * gaussian_tail(ra + 1.0);
    const double tb = 2.0 * gaussian_tail(rb + 1.0);
    const double tail = ta * (abs_sum_b + tb) + tb * abs_sum_a;

    ThetaEvaluation out;
    out.value = prefactor * sum;
    out.terms_used = static_cast<int>(total_terms);
    out.tail_bound = tail;
    if (tail > policy.target_abs_error)
        throw NonConvergent("ku_theta: tail bound above target");
    return out;
}

double ku_cross_check(const TotalPoint& p, const TruncationPolicy& policy) {
    const double x = p.x, y = p.y, z = p.s, t = p.t;
    const cplx lhs = ku_theta(1, 0, 0, p, policy).value;

    // Factorized form; the exponential prefactor is the one forced by the
    // corrected series (see ku_theta).
    const cplx pre = std::exp(4.0 * kPi * kI * z * x + 2.0 * kPi * kI * y * x * x -
                              2.0 * kPi * x * x - 2.0 * kPi * t * t);
    const Tau tau1(cplx(2.0 * y, 2.0));
    const Tau tau2(cplx(0.0, 2.0));
    const cplx th1 = theta00(2.0 * (z + cplx(y, 1.0) * x), tau1, policy).value;
    const cplx th2 = theta00(2.0 * cplx(-y, t), tau2, policy).value;
    const cplx rhs = pre * th1 * th2;

    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

} // namespace thetabundle
