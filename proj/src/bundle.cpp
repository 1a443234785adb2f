#include "thetabundle/bundle.hpp"

#include <cmath>

namespace thetabundle {

namespace {

const cplx kI(0.0, 1.0);

// Fixed point in the upper half-plane of the Moebius action
// w -> (alpha*w - beta)/(-gamma*w + delta) must match the table's omega for
// the elliptic rows; used to reject conjugates that would need a different
// period function.
bool fixes_table_omega(const Mat2i& A, cplx w) {
    const double al = static_cast<double>(A.a), be = static_cast<double>(A.b);
    const double ga = static_cast<double>(A.c), de = static_cast<double>(A.d);
    return std::abs(ga * w * w + (al - de) * w - be) < 1e-9;
}

bool is_upper_unipotent(const Mat2i& A, int sign) {
    return A.a == sign && A.d == sign && A.c == 0 && A.b != 0;
}

} // namespace

Mat2i Mat2i::pow(long long n) const {
    Mat2i base = n >= 0 ? *this : inv();
    long long e = n >= 0 ? n : -n;
    Mat2i out = identity();
    while (e > 0) {
        if (e & 1) out = out.mul(base);
        base = base.mul(base);
        e >>= 1;
    }
    return out;
}

std::string to_string(BundleTag tag) {
    switch (tag) {
        case BundleTag::A: return "A";
        case BundleTag::B1: return "B1";
        case BundleTag::B2: return "B2";
        case BundleTag::B3: return "B3";
        case BundleTag::B4: return "B4";
        case BundleTag::C: return "C";
        case BundleTag::D: return "D";
        case BundleTag::E: return "E";
        case BundleTag::F: return "F";
        case BundleTag::G: return "G";
    }
    return "?";
}

HyperbolicData make_hyperbolic_data(const Mat2i& A) {
    const long long tr = A.trace();
    if (tr <= 2)
        throw NonRealPower("hyperbolic eigen-data requires tr A > 2");
    const double trd = static_cast<double>(tr);
    const double root = std::sqrt(trd * trd - 4.0);
    const double lambda = (trd + root) / 2.0;
    const double lambda_inv = (trd - root) / 2.0;

    // Left eigenvectors of A: (A^T - mu)(u,v)^T = 0 with A^T = (a c; b d).
    // gamma = A.c is nonzero for every integral hyperbolic A, so (c, mu - a)
    // never degenerates.
    const double a = static_cast<double>(A.a);
    const double c = static_cast<double>(A.c);
    double up = c, vp = lambda - a;
    double um = c, vm = lambda_inv - a;
    const double det0 = up * vm - um * vp;
    um /= det0;
    vm /= det0;
    return {lambda, up, vp, um, vm};
}

BundleType classify(const MonodromyPair& pair) {
    const Mat2i& A = pair.A;
    const Mat2i& B = pair.B;
    const Mat2i I = Mat2i::identity();
    const Mat2i mI = Mat2i::minus_identity();

    if (B == I) {
        if (A == I) return {BundleTag::A, 0};
        if (A == mI) return {BundleTag::B4, 0};
        const long long tr = A.trace();
        if (tr == -1 || tr == 1) {
            const cplx w(-0.5, std::sqrt(3.0) / 2.0);
            if (!fixes_table_omega(A, w))
                throw Unclassified("elliptic pair is not in the table's normal form");
            return {tr == -1 ? BundleTag::B1 : BundleTag::B3, 0};
        }
        if (tr == 0) {
            if (!fixes_table_omega(A, kI))
                throw Unclassified("elliptic pair is not in the table's normal form");
            return {BundleTag::B2, 0};
        }
        if (is_upper_unipotent(A, 1)) return {BundleTag::C, static_cast<int>(A.b)};
        if (is_upper_unipotent(A, -1)) return {BundleTag::D, static_cast<int>(A.b)};
        if (std::llabs(tr) > 2) return {BundleTag::F, 0};
        throw Unclassified("pair {A, I} matches no table row");
    }
    if (B == mI) {
        if (is_upper_unipotent(A, 1)) return {BundleTag::E, static_cast<int>(A.b)};
        if (A.trace() > 2) return {BundleTag::G, 0};
        throw Unclassified("pair {A, -I} matches no table row");
    }
    throw Unclassified("B must be I or -I");
}

Bundle::Bundle(BundleType type, Mat2i A, Mat2i B)
    : type_(type), A_(A), B_(B), zeta_(std::make_shared<ZetaCache>()) {
    if ((type_.tag == BundleTag::F || type_.tag == BundleTag::G) && A_.trace() > 2)
        hyp_ = make_hyperbolic_data(A_);
}

Bundle Bundle::from_pair(const MonodromyPair& pair) {
    return Bundle(classify(pair), pair.A, pair.B);
}

Bundle Bundle::from_tag(BundleTag tag, int k) {
    const Mat2i I = Mat2i::identity();
    const Mat2i mI = Mat2i::minus_identity();
    switch (tag) {
        case BundleTag::A: return from_pair({I, I});
        case BundleTag::B1: return from_pair({{0, -1, 1, -1}, I});
        case BundleTag::B2: return from_pair({{0, -1, 1, 0}, I});
        case BundleTag::B3: return from_pair({{1, -1, 1, 0}, I});
        case BundleTag::B4: return from_pair({mI, I});
        case BundleTag::C: return from_pair({{1, k, 0, 1}, I});
        case BundleTag::D: return from_pair({{-1, k, 0, -1}, I});
        case BundleTag::E: return from_pair({{1, k, 0, 1}, mI});
        case BundleTag::F: return from_pair({{2, 1, 1, 1}, I});
        case BundleTag::G: return from_pair({{2, 1, 1, 1}, mI});
    }
    throw std::invalid_argument("unknown bundle tag");
}

std::string Bundle::name() const {
    std::string n = to_string(type_.tag);
    if (type_.k != 0) n += ":" + std::to_string(type_.k);
    return n;
}

GroupElement compose(const Bundle& bundle, const GroupElement& g, const GroupElement& h) {
    const Mat2i m = bundle.A().pow(-h.na).mul(bundle.B().pow(-h.nb));
    return {g.na + h.na, g.nb + h.nb,
            m.a * g.nc + m.b * g.nd + h.nc,
            m.c * g.nc + m.d * g.nd + h.nd};
}

GroupElement inverse(const Bundle& bundle, const GroupElement& g) {
    const Mat2i m = bundle.A().pow(g.na).mul(bundle.B().pow(g.nb));
    return {-g.na, -g.nb, -(m.a * g.nc + m.b * g.nd), -(m.c * g.nc + m.d * g.nd)};
}

TotalPoint gamma_action(const Bundle& bundle, const GroupElement& g, const TotalPoint& p) {
    const Mat2i m = bundle.A().pow(g.na).mul(bundle.B().pow(g.nb));
    const auto st = m.apply(p.s + static_cast<double>(g.nc), p.t + static_cast<double>(g.nd));
    return {p.x + static_cast<double>(g.na), p.y + static_cast<double>(g.nb), st[0], st[1]};
}

cplx omega(const Bundle& bundle, double x) {
    switch (bundle.tag()) {
        case BundleTag::A: return kI; // no table entry; classical product case
        case BundleTag::B1:
        case BundleTag::B3: return cplx(-0.5, std::sqrt(3.0) / 2.0);
        case BundleTag::B2:
        case BundleTag::B4: return kI;
        case BundleTag::C:
        case BundleTag::E: return cplx(-static_cast<double>(bundle.param_k()) * x, 1.0);
        case BundleTag::D: return cplx(static_cast<double>(bundle.param_k()) * x, 1.0);
        case BundleTag::F:
        case BundleTag::G: {
            if (!bundle.hyperbolic())
                throw NonRealPower("omega for hyperbolic bundles requires tr A > 2");
            const HyperbolicData& h = *bundle.hyperbolic();
            const double lp = std::pow(h.lambda, -x);
            const double lm = std::pow(h.lambda, x);
            return (lp * h.v_plus + kI * lm * h.v_minus) /
                   (lp * h.u_plus + kI * lm * h.u_minus);
        }
    }
    throw std::invalid_argument("unknown bundle tag");
}

OmegaTransformResult omega_transform_check(const Bundle& bundle, const TotalPoint& p) {
    const cplx w = omega(bundle, p.x);
    const cplx w1 = omega(bundle, p.x + 1.0);
    const double al = static_cast<double>(bundle.alpha());
    const double be = static_cast<double>(bundle.beta());
    const double ga = static_cast<double>(bundle.gamma());
    const double de = static_cast<double>(bundle.delta());
    const cplx denom = -ga * w + de;
    const double r_omega = std::abs(w1 - (al * w - be) / denom);
    const auto st = bundle.A().apply(p.s, p.t);
    const double r_z = std::abs((st[0] + w1 * st[1]) - (p.s + w * p.t) / denom);
    return {r_omega, r_z};
}

namespace {

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

Mat2d real_inverse_power(const Bundle& bundle, const Mat2i& M, double x) {
    // M^{-x} for the cases with a real one-parameter subgroup.
    if (M == Mat2i::identity())
        return {{{1.0, 0.0}, {0.0, 1.0}}};
    if (M.trace() == 2 && M.a == 1 && M.d == 1) {
        // unipotent: (I + N)^{-x} = I - x N exactly
        return {{{1.0, -x * static_cast<double>(M.b)},
                 {-x * static_cast<double>(M.c), 1.0}}};
    }
    if (M.trace() > 2) {
        if (!bundle.hyperbolic()) throw NonRealPower("missing hyperbolic data");
        const HyperbolicData& h = *bundle.hyperbolic();
        // A = U^{-1} diag(lambda, 1/lambda) U with U rows the left eigenvectors.
        const double lp = std::pow(h.lambda, -x);
        const double lm = std::pow(h.lambda, x);
        const double u00 = h.v_minus, u01 = -h.v_plus, u10 = -h.u_minus, u11 = h.u_plus;
        return {{{u00 * lp * h.u_plus + u01 * lm * h.u_minus,
                  u00 * lp * h.v_plus + u01 * lm * h.v_minus},
                 {u10 * lp * h.u_plus + u11 * lm * h.u_minus,
                  u10 * lp * h.v_plus + u11 * lm * h.v_minus}}};
    }
    if (is_integer(x)) {
        const Mat2i P = M.pow(-static_cast<long long>(std::llround(x)));
        return {{{static_cast<double>(P.a), static_cast<double>(P.b)},
                 {static_cast<double>(P.c), static_cast<double>(P.d)}}};
    }
    throw NonRealPower("non-integer power of an elliptic or negative-eigenvalue matrix");
}

Mat2d mat2d_mul(const Mat2d& l, const Mat2d& r) {
    return {{{l[0][0] * r[0][0] + l[0][1] * r[1][0], l[0][0] * r[0][1] + l[0][1] * r[1][1]},
             {l[1][0] * r[0][0] + l[1][1] * r[1][0], l[1][0] * r[0][1] + l[1][1] * r[1][1]}}};
}

} // namespace

Mat2d left_invariant_coframe(const Bundle& bundle, double x, double y) {
    const Mat2d ax = real_inverse_power(bundle, bundle.A(), x);
    Mat2d by;
    if (bundle.B() == Mat2i::identity()) {
        by = {{{1.0, 0.0}, {0.0, 1.0}}};
    } else if (is_integer(y)) {
        const double sgn = (std::llround(y) % 2 == 0) ? 1.0 : -1.0;
        by = {{{sgn, 0.0}, {0.0, sgn}}};
    } else {
        throw NonRealPower("non-integer power of B = -I");
    }
    return mat2d_mul(ax, by);
}

} // namespace thetabundle
