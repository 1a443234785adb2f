#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "oracles.hpp"
#include "thetabundle/sections.hpp"

using namespace thetabundle;
using oracles::pi;

namespace {
const TruncationPolicy pol{};
const cplx I(0.0, 1.0);

TotalPoint rand_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng), y = u(rng), s = u(rng), t = u(rng);
    return {x, y, s, t};
}
} // namespace

TEST_CASE("theta_m vanishes at the double zero") {
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    CHECK(std::abs(theta_m(b2, {0, 0, 0, 0}, pol).value) < 1e-20);
}

TEST_CASE("theta_m is the product of its two factors") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.3, 0.2, 0.4, 0.1};
    const cplx w(-0.3, 1.0); // omega(0.3) for C with k = 1
    const cplx expect = oracles::theta11_direct(0.4 + w * 0.1, w) *
                        oracles::theta11_direct(cplx(0.3, 0.2), I);
    CHECK(std::abs(theta_m(kt, p, pol).value - expect) < 1e-12);
}

TEST_CASE("theta_m flips sign under c") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.3, 0.2, 0.4, 0.1};
    const cplx v = theta_m(kt, p, pol).value;
    const cplx vc = theta_m(kt, gamma_action(kt, GroupElement::gen_c(), p), pol).value;
    CHECK(std::abs(vc / v + 1.0) < 1e-10);
}

TEST_CASE("closed-form multiplier constants") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    CHECK(multiplier(kt, Gen::c, {0.9, 0.1, 0.5, 0.7}, pol) == cplx(-1.0, 0.0));
    // b at x = y = 0: -exp(pi)
    const cplx mb = multiplier(kt, Gen::b, {0.0, 0.0, 0.3, 0.9}, pol);
    CHECK(mb.real() == doctest::Approx(-std::exp(pi)).epsilon(1e-8));
    CHECK(std::abs(mb.imag()) < 1e-8);
    // d at s = t = 0 on B2 (omega = i): -exp(-pi i * i) = -exp(pi)
    const cplx md = multiplier(b2, Gen::d, {0.4, 0.8, 0.0, 0.0}, pol);
    CHECK(md.real() == doctest::Approx(-std::exp(pi)).epsilon(1e-8));
    CHECK(std::abs(md.imag()) < 1e-8);
}

TEST_CASE("multiplier law against direct evaluation") {
    std::mt19937_64 rng(3);
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    for (int i = 0; i < 10; ++i)
        CHECK(verify_multiplier(kt, Gen::d, rand_point(rng), pol) < 1e-9);
    // the gamma != 0 modular multiplier on B2
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    for (int i = 0; i < 50; ++i)
        CHECK(verify_multiplier(b2, Gen::a, rand_point(rng), pol) < 1e-7);
    // B = -I flips the fibre sign inside the b law
    const Bundle e = Bundle::from_tag(BundleTag::E, 1);
    for (int i = 0; i < 10; ++i)
        CHECK(verify_multiplier(e, Gen::b, rand_point(rng), pol) < 1e-9);
}

TEST_CASE("multiplier grid across every bundle type") {
    // acceptance runs the full 5^4 grid; this covers a 3^4 grid per type
    for (BundleTag tg : {BundleTag::A, BundleTag::B1, BundleTag::B2, BundleTag::B3,
                         BundleTag::B4, BundleTag::C, BundleTag::D, BundleTag::E, BundleTag::F,
                         BundleTag::G}) {
        const Bundle b = Bundle::from_tag(tg, 1);
        double worst = 0.0;
        for (int ix = 0; ix < 3; ++ix)
            for (int iy = 0; iy < 3; ++iy)
                for (int is = 0; is < 3; ++is)
                    for (int it = 0; it < 3; ++it) {
                        const TotalPoint p{(ix + 0.37) / 3, (iy + 0.37) / 3, (is + 0.37) / 3,
                                           (it + 0.37) / 3};
                        for (Gen g : {Gen::a, Gen::b, Gen::c, Gen::d})
                            worst = std::max(worst, verify_multiplier(b, g, p, pol));
                    }
        CAPTURE(to_string(tg));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("near-zero base point is reported") {
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    CHECK_THROWS_AS(verify_multiplier(b2, Gen::c, {0, 0, 0, 0}, pol), NearZeroBase);
}

TEST_CASE("cocycle identity") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.17, 0.23, 0.31, 0.41};
    CHECK(cocycle_check(kt, GroupElement::identity(), GroupElement::identity(), p, pol) ==
          0.0);
    // relator [a,c] for type C collapses to the identity element
    const GroupElement iac = compose(kt, inverse(kt, GroupElement::gen_a()),
                                     inverse(kt, GroupElement::gen_c()));
    const GroupElement ac = compose(kt, GroupElement::gen_a(), GroupElement::gen_c());
    CHECK(cocycle_check(kt, iac, ac, p, pol) < 1e-9);
    // random pairs on B2, including the (a, d) pattern
    std::mt19937_64 rng(17);
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    CHECK(cocycle_check(b2, GroupElement::gen_a(), GroupElement::gen_d(), rand_point(rng),
                        pol) < 1e-7);
    std::uniform_int_distribution<int> u(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const GroupElement g1{u(rng), u(rng), u(rng), u(rng)};
        const GroupElement g2{u(rng), u(rng), u(rng), u(rng)};
        CHECK(cocycle_check(b2, g1, g2, rand_point(rng), pol) < 1e-7);
    }
}

TEST_CASE("shifted action") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.37, 0.11, 0.59, 0.23};
    CHECK(std::abs(shifted_theta_m(kt, {}, p, pol).value - theta_m(kt, p, pol).value) == 0.0);
    // lambda = 1 hits the fibre period law theta(z+1) = -theta(z)
    const cplx v1 = shifted_theta_m(kt, {cplx(1.0, 0.0), cplx(0.0, 0.0)}, p, pol).value;
    CHECK(std::abs(v1 / theta_m(kt, p, pol).value + 1.0) < 1e-10);
    // generic shift factors into independent evaluations
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    const ShiftPair sh{cplx(0.2, 0.1), cplx(-0.3, 0.0)};
    const cplx got = shifted_theta_m(b2, sh, p, pol).value;
    const cplx expect = oracles::theta11_direct(p.s + I * p.t + sh.lambda, I) *
                        oracles::theta11_direct(cplx(p.x, p.y) + sh.mu, I);
    CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("shift constraint solver") {
    {
        const auto [g, d] = solve_shift_constraints(cplx(1.0, 0.0), cplx(-1.0, 0.0));
        CHECK(std::abs(g - I) < 1e-12);
        CHECK(std::abs(d + I) < 1e-12);
    }
    {
        const auto [g, d] = solve_shift_constraints(cplx(0.0, 0.0), cplx(0.0, 0.0));
        CHECK(std::abs(g) == 0.0);
        CHECK(std::abs(d) == 0.0);
    }
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        const auto [g, d] = solve_shift_constraints(a, b);
        CHECK(std::abs(a + b + g + d) < 1e-12);
        CHECK(std::abs(a * a + b * b + g * g + d * d) < 1e-12);
    }
}

TEST_CASE("product sections transform with the degree-k multiplier") {
    std::mt19937_64 rng(31);
    const TotalPoint p{0.13, 0.71, 0.37, 0.29};

    // single zero shift is theta_m itself
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    CHECK(std::abs(product_section(kt, {ShiftPair{}}, p, pol).value -
                   theta_m(kt, p, pol).value) == 0.0);

    // type C, three shifts with zero sums: degree-3 law under d
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::vector<ShiftPair> shifts(3);
    for (int i = 0; i < 2; ++i) shifts[i] = {cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    shifts[2] = {-shifts[0].lambda - shifts[1].lambda, -shifts[0].mu - shifts[1].mu};
    auto law_residual = [&](const Bundle& b, const std::vector<ShiftPair>& sh, Gen g,
                            const TotalPoint& q0) {
        auto prod = [&](const TotalPoint& q) {
            cplx v(1.0, 0.0);
            for (const auto& s : sh) v *= shifted_theta_m(b, s, q, pol).value;
            return v;
        };
        const cplx e = multiplier(b, g, q0, pol);
        cplx ek(1.0, 0.0);
        for (std::size_t i = 0; i < sh.size(); ++i) ek *= e;
        const cplx lhs = prod(gamma_action(b, to_element(g), q0));
        const cplx rhs = ek * prod(q0);
        return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    };
    CHECK(law_residual(kt, shifts, Gen::d, p) < 1e-9);

    // B2: four fibre shifts from the constraint solver, zero-sum base shifts,
    // degree-4 law under a
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    const cplx lam(0.23, 0.11);
    const auto [gs, ds] = solve_shift_constraints(lam, -lam);
    const std::vector<ShiftPair> quad = {{lam, cplx(0.1, 0.0)},
                                         {-lam, cplx(-0.1, 0.0)},
                                         {gs, cplx(0.0, 0.2)},
                                         {ds, cplx(0.0, -0.2)}};
    CHECK(law_residual(b2, quad, Gen::a, p) < 1e-7);
    for (Gen g : {Gen::b, Gen::c, Gen::d}) CHECK(law_residual(b2, quad, g, p) < 1e-7);
    CHECK_NOTHROW(product_section(b2, quad, p, pol));
}

TEST_CASE("product constraint gate") {
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    const TotalPoint p{0.2, 0.3, 0.1, 0.4};
    // sum lambda != 0
    CHECK_THROWS_WITH_AS(
        product_section(b2, {{cplx(0.5, 0.0), cplx(0.0, 0.0)}}, p, pol).value,
        doctest::Contains("fibre"), ConstraintViolated);
    // sum mu != 0
    CHECK_THROWS_WITH_AS(
        product_section(b2, {{cplx(0.0, 0.0), cplx(0.2, 0.0)}}, p, pol).value,
        doctest::Contains("base"), ConstraintViolated);
    // sum lambda^2 != 0 on a gamma != 0 bundle
    const std::vector<ShiftPair> bad = {{cplx(0.3, 0.0), {}}, {cplx(-0.3, 0.0), {}}};
    CHECK_THROWS_WITH_AS(product_section(b2, bad, p, pol).value,
                         doctest::Contains("squared"), ConstraintViolated);
    // the same tuple is fine when gamma = 0
    CHECK_NOTHROW(product_section(Bundle::from_tag(BundleTag::C, 1), bad, p, pol));
}

TEST_CASE("violated shift constraint visibly breaks the degree-k law") {
    const Bundle b2 = Bundle::from_tag(BundleTag::B2);
    const std::vector<ShiftPair> bad = {{cplx(0.3, 0.0), cplx(0.1, 0.0)},
                                        {cplx(-0.3, 0.0), cplx(-0.1, 0.0)},
                                        {cplx(0.0, 0.2), cplx(0.0, 0.2)},
                                        {cplx(0.0, -0.2), cplx(0.0, -0.2)}};
    auto prod = [&](const TotalPoint& q) {
        cplx v(1.0, 0.0);
        for (const auto& s : bad) v *= shifted_theta_m(b2, s, q, pol).value;
        return v;
    };
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const TotalPoint p{0.1 + 0.2 * i, 0.23, 0.37, 0.51};
        const cplx e = multiplier(b2, Gen::a, p, pol);
        const cplx lhs = prod(gamma_action(b2, GroupElement::gen_a(), p));
        const cplx rhs = e * e * e * e * prod(p);
        worst = std::max(worst,
                         std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
    CHECK(worst > 1e-2);
}

TEST_CASE("basis sections") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.41, 0.13, 0.27, 0.61};
    // k = 1 reduces to theta_m
    CHECK(std::abs(basis_section(kt, {1, 0, 0}, p, pol).value - theta_m(kt, p, pol).value) <
          1e-12);
    // degree-3 law under c
    const cplx v = basis_section(kt, {3, 1, 2}, p, pol).value;
    const cplx vc =
        basis_section(kt, {3, 1, 2}, gamma_action(kt, GroupElement::gen_c(), p), pol).value;
    CHECK(std::abs(vc / v + 1.0) < 1e-10);
}

TEST_CASE("the k^2 basis sections are independent by sampling") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    std::mt19937_64 rng(37);
    for (int k : {1, 2, 3}) {
        const int dim = k * k;
        const int samples = 4 * dim;
        Eigen::MatrixXcd m(samples, dim);
        for (int r = 0; r < samples; ++r) {
            const TotalPoint p = rand_point(rng);
            int col = 0;
            for (int pp = 0; pp < k; ++pp)
                for (int q = 0; q < k; ++q)
                    m(r, col++) = basis_section(kt, {k, pp, q}, p, pol).value;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        CAPTURE(k);
        CHECK(svd.singularValues()(dim - 1) > 1e-8);
    }
}

TEST_CASE("Kirwin-Uribe series pseudo-periodicity") {
    const TotalPoint p{0.1, 0.2, 0.3, 0.4}; // third slot is the KU z
    const cplx v = ku_theta(1, 0, 0, p, pol).value;
    // first slot: invariant
    CHECK(std::abs(ku_theta(1, 0, 0, {1.1, 0.2, 0.3, 0.4}, pol).value / v - 1.0) < 1e-9);
    // third slot: e^{4 pi i k x}
    const cplx vz = ku_theta(1, 0, 0, {0.1, 0.2, 1.3, 0.4}, pol).value;
    CHECK(std::abs(vz / v - std::exp(4.0 * pi * I * 0.1)) < 1e-9);
    // fourth slot: e^{4 pi i k y}
    const cplx vt = ku_theta(1, 0, 0, {0.1, 0.2, 0.3, 1.4}, pol).value;
    CHECK(std::abs(vt / v - std::exp(4.0 * pi * I * 0.2)) < 1e-9);
    // second slot carries the shear: (x, y+1, z-x, t) -> e^{-2 pi i k x^2}
    const cplx vy = ku_theta(1, 0, 0, {0.1, 1.2, 0.3 - 0.1, 0.4}, pol).value;
    CHECK(std::abs(vy / v - std::exp(-2.0 * pi * I * 0.1 * 0.1)) < 1e-9);
    // and for k = 2, m = 1, n = 1 as well
    const cplx w = ku_theta(2, 1, 1, p, pol).value;
    const cplx wz = ku_theta(2, 1, 1, {0.1, 0.2, 1.3, 0.4}, pol).value;
    CHECK(std::abs(wz / w - std::exp(8.0 * pi * I * 0.1)) < 1e-9);
}

TEST_CASE("Kirwin-Uribe series against the fixed-window oracle") {
    const TotalPoint p{0.1, 0.2, 0.3, 0.4};
    const cplx mine = ku_theta(1, 0, 0, p, pol).value;
    const cplx ref = oracles::ku_direct(1, 0, 0, 0.1, 0.2, 0.3, 0.4);
    CHECK(std::abs(mine - ref) / std::abs(ref) < 1e-10);
}

TEST_CASE("Kirwin-Uribe factorization identity") {
    CHECK(ku_cross_check({0, 0, 0, 0}, pol) < 1e-9);
    CHECK(ku_cross_check({0.1, 0.2, 0.3, 0.4}, pol) < 1e-8);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) CHECK(ku_cross_check(rand_point(rng), pol) < 1e-8);
    TruncationPolicy stress = pol;
    stress.max_terms = 40000;
    CHECK(ku_cross_check({0.1, 0.2, 0.3, 5.0}, stress) < 1e-6);
}
