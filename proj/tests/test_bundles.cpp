#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "thetabundle/bundle.hpp"
#include "thetabundle/bundle_io.hpp"

using namespace thetabundle;

namespace {
const Mat2i I2 = Mat2i::identity();
const Mat2i mI2 = Mat2i::minus_identity();
} // namespace

TEST_CASE("monodromy pair validation") {
    CHECK_THROWS_AS(MonodromyPair({2, 0, 0, 1}, I2), std::invalid_argument);
    CHECK_THROWS_AS(MonodromyPair({1, 1, 0, 1}, {0, -1, 1, 0}), std::invalid_argument);
    CHECK_NOTHROW(MonodromyPair({1, 1, 0, 1}, mI2));
}

TEST_CASE("classification of the table rows") {
    CHECK(classify({I2, I2}).tag == BundleTag::A);
    CHECK(classify({{0, -1, 1, -1}, I2}).tag == BundleTag::B1);
    CHECK(classify({{0, -1, 1, 0}, I2}).tag == BundleTag::B2);
    CHECK(classify({{1, -1, 1, 0}, I2}).tag == BundleTag::B3);
    CHECK(classify({mI2, I2}).tag == BundleTag::B4);
    const BundleType c = classify({{1, 1, 0, 1}, I2});
    CHECK(c.tag == BundleTag::C);
    CHECK(c.k == 1);
    const BundleType d = classify({{-1, 3, 0, -1}, I2});
    CHECK(d.tag == BundleTag::D);
    CHECK(d.k == 3);
    CHECK(classify({{1, 2, 0, 1}, mI2}).tag == BundleTag::E);
    CHECK(classify({{2, 1, 1, 1}, I2}).tag == BundleTag::F);
    CHECK(classify({{2, 1, 1, 1}, mI2}).tag == BundleTag::G);
}

TEST_CASE("classification rejects pairs outside the table") {
    // commuting pair with B not +-I
    const Mat2i a{2, 1, 1, 1};
    CHECK_THROWS_AS(classify({a, a}), Unclassified);
    // elliptic conjugate whose fixed point differs from the table omega
    const Mat2i conj{1, -2, 1, -1}; // trace 0, fixes (1+i)/... not i
    CHECK(conj.det() == 1);
    CHECK_THROWS_AS(classify({conj, I2}), Unclassified);
}

TEST_CASE("gamma action on generators") {
    const Bundle kt = Bundle::from_tag(BundleTag::C, 1);
    const TotalPoint p{0.1, 0.2, 0.3, 0.4};
    const TotalPoint pid = gamma_action(kt, GroupElement::identity(), p);
    CHECK(pid.x == p.x);
    CHECK(pid.s == p.s);
    const TotalPoint pc = gamma_action(kt, GroupElement::gen_c(), p);
    CHECK(pc.s == doctest::Approx(p.s + 1.0));
    CHECK(pc.t == doctest::Approx(p.t));
    // Kodaira-Thurston a: (s, t) -> (s + k t, t)
    const TotalPoint pa = gamma_action(kt, GroupElement::gen_a(), {0.0, 0.0, 0.2, 0.5});
    CHECK(pa.x == doctest::Approx(1.0));
    CHECK(pa.s == doctest::Approx(0.7));
    CHECK(pa.t == doctest::Approx(0.5));
    // B = -I flips the fibre under b
    const Bundle e = Bundle::from_tag(BundleTag::E, 1);
    const TotalPoint pb = gamma_action(e, GroupElement::gen_b(), p);
    CHECK(pb.y == doctest::Approx(p.y + 1.0));
    CHECK(pb.s == doctest::Approx(-p.s));
    CHECK(pb.t == doctest::Approx(-p.t));
}

TEST_CASE("group law round trips and relations") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(-3, 3);
    for (BundleTag tg : {BundleTag::C, BundleTag::B2, BundleTag::F, BundleTag::G}) {
        const Bundle b = Bundle::from_tag(tg, 1);
        for (int i = 0; i < 20; ++i) {
            const GroupElement g{u(rng), u(rng), u(rng), u(rng)};
            const GroupElement gi = inverse(b, g);
            const GroupElement e = compose(b, g, gi);
            CHECK(e.is_identity());
            // action of the composition equals composed actions
            const TotalPoint p{0.3, 0.7, 0.21, 0.43};
            const GroupElement h{u(rng), u(rng), u(rng), u(rng)};
            const TotalPoint lhs = gamma_action(b, compose(b, g, h), p);
            const TotalPoint rhs = gamma_action(b, g, gamma_action(b, h, p));
            CHECK(lhs.x == doctest::Approx(rhs.x).epsilon(1e-12));
            CHECK(lhs.y == doctest::Approx(rhs.y).epsilon(1e-12));
            CHECK(lhs.s == doctest::Approx(rhs.s).epsilon(1e-12));
            CHECK(lhs.t == doctest::Approx(rhs.t).epsilon(1e-12));
        }
    }
}

TEST_CASE("relator words act trivially") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (BundleTag tg : {BundleTag::A, BundleTag::B1, BundleTag::B2, BundleTag::B3,
                         BundleTag::B4, BundleTag::C, BundleTag::D, BundleTag::E, BundleTag::F,
                         BundleTag::G}) {
        const Bundle b = Bundle::from_tag(tg, 1);
        const GroupElement a = GroupElement::gen_a(), c = GroupElement::gen_c(),
                           d = GroupElement::gen_d();
        // [a,c] = c^{1-delta} d^{gamma} and [a,d] = c^{beta} d^{1-alpha}
        const GroupElement ac =
            compose(b, compose(b, compose(b, inverse(b, a), inverse(b, c)), a), c);
        const GroupElement ad =
            compose(b, compose(b, compose(b, inverse(b, a), inverse(b, d)), a), d);
        CHECK(ac.nc == 1 - b.delta());
        CHECK(ac.nd == b.gamma());
        CHECK(ad.nc == b.beta());
        CHECK(ad.nd == 1 - b.alpha());
        const GroupElement r1 =
            compose(b, ac, inverse(b, GroupElement{0, 0, 1 - b.delta(), b.gamma()}));
        const GroupElement r2 =
            compose(b, ad, inverse(b, GroupElement{0, 0, b.beta(), 1 - b.alpha()}));
        for (const GroupElement& r : {r1, r2}) {
            CHECK(r.is_identity());
            const double x = u(rng), y = u(rng), s = u(rng), t = u(rng);
            const TotalPoint q = gamma_action(b, r, {x, y, s, t});
            CHECK(q.x == x);
            CHECK(q.y == y);
            CHECK(q.s == s);
            CHECK(q.t == t);
        }
    }
}

TEST_CASE("omega table values") {
    CHECK(omega(Bundle::from_tag(BundleTag::B2), 0.77) == cplx(0.0, 1.0));
    CHECK(omega(Bundle::from_tag(BundleTag::B4), -0.3) == cplx(0.0, 1.0));
    const cplx b1 = omega(Bundle::from_tag(BundleTag::B1), 0.2);
    CHECK(b1.real() == doctest::Approx(-0.5));
    CHECK(b1.imag() == doctest::Approx(std::sqrt(3.0) / 2.0));
    const cplx c2 = omega(Bundle::from_tag(BundleTag::C, 2), 0.5);
    CHECK(c2.real() == doctest::Approx(-1.0));
    CHECK(c2.imag() == doctest::Approx(1.0));
    const cplx d2 = omega(Bundle::from_tag(BundleTag::D, 2), 0.5);
    CHECK(d2.real() == doctest::Approx(1.0));
}

TEST_CASE("hyperbolic omega against an eigensolver oracle") {
    const Bundle f = Bundle::from_tag(BundleTag::F);
    REQUIRE(f.hyperbolic().has_value());
    const HyperbolicData& h = *f.hyperbolic();
    // normalization and the eigen equations of A^T
    CHECK(h.u_plus * h.v_minus - h.u_minus * h.v_plus == doctest::Approx(1.0));
    Eigen::Matrix2d at;
    at << 2, 1, 1, 1;
    Eigen::EigenSolver<Eigen::Matrix2d> es(at.transpose());
    const double lambda_ref = std::max(es.eigenvalues()(0).real(), es.eigenvalues()(1).real());
    CHECK(h.lambda == doctest::Approx(lambda_ref).epsilon(1e-12));
    CHECK(2.0 * h.u_plus + 1.0 * h.v_plus == doctest::Approx(h.lambda * h.u_plus));
    CHECK(1.0 * h.u_plus + 1.0 * h.v_plus == doctest::Approx(h.lambda * h.v_plus));

    for (double x : {-1.3, 0.0, 0.3, 2.1}) {
        const cplx w = omega(f, x);
        const double lp = std::pow(h.lambda, -x), lm = std::pow(h.lambda, x);
        // Im omega = (u+ v- - u- v+) / ((lambda^{-x} u+)^2 + (lambda^x u-)^2)
        const double expected =
            1.0 / (lp * h.u_plus * lp * h.u_plus + lm * h.u_minus * lm * h.u_minus);
        CHECK(w.imag() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(w.imag() > 0.0);
    }
}

TEST_CASE("Im omega is positive across bundles") {
    for (BundleTag tg : {BundleTag::A, BundleTag::B1, BundleTag::B2, BundleTag::B3,
                         BundleTag::B4, BundleTag::C, BundleTag::D, BundleTag::E, BundleTag::F,
                         BundleTag::G}) {
        const Bundle b = Bundle::from_tag(tg, 1);
        for (int i = 0; i <= 1000; ++i)
            CHECK(omega(b, -2.0 + 4.0 * i / 1000.0).imag() > 0.0);
    }
}

TEST_CASE("Lemma 2 transformation residuals") {
    const auto rc = omega_transform_check(Bundle::from_tag(BundleTag::C, 1),
                                          {0.3, 0.0, 0.2, 0.5});
    CHECK(rc.residual_omega < 1e-12);
    CHECK(rc.residual_z < 1e-12);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Bundle f = Bundle::from_tag(BundleTag::F);
    for (int i = 0; i < 20; ++i) {
        const double x0 = u(rng), y0 = u(rng), s0 = u(rng), t0 = u(rng);
        const auto r = omega_transform_check(f, {x0, y0, s0, t0});
        CHECK(r.residual_omega < 1e-10);
        CHECK(r.residual_z < 1e-10);
    }
    const auto rb = omega_transform_check(Bundle::from_tag(BundleTag::B2),
                                          {0.0, 0.0, 0.1, 0.7});
    CHECK(rb.residual_omega < 1e-12);
    CHECK(rb.residual_z < 1e-12);
}

TEST_CASE("left-invariant coframe") {
    for (BundleTag tg : {BundleTag::A, BundleTag::B2, BundleTag::C, BundleTag::F}) {
        const Mat2d m = left_invariant_coframe(Bundle::from_tag(tg, 1), 0.0, 0.0);
        CHECK(m[0][0] == doctest::Approx(1.0));
        CHECK(m[0][1] == doctest::Approx(0.0));
        CHECK(m[1][0] == doctest::Approx(0.0));
        CHECK(m[1][1] == doctest::Approx(1.0));
    }
    // unipotent: M = (1, -x k; 0, 1)
    const Mat2d mc = left_invariant_coframe(Bundle::from_tag(BundleTag::C, 2), 0.4, 0.0);
    CHECK(mc[0][1] == doctest::Approx(-0.8));
    CHECK(mc[0][0] == doctest::Approx(1.0));
    CHECK(mc[1][0] == doctest::Approx(0.0));
    // hyperbolic at an integer power equals the exact matrix inverse
    const Bundle f = Bundle::from_tag(BundleTag::F);
    const Mat2d mf = left_invariant_coframe(f, 1.0, 0.0);
    const Mat2i ainv = f.A().inv();
    CHECK(mf[0][0] == doctest::Approx(static_cast<double>(ainv.a)).epsilon(1e-12));
    CHECK(mf[0][1] == doctest::Approx(static_cast<double>(ainv.b)).epsilon(1e-12));
    CHECK(mf[1][0] == doctest::Approx(static_cast<double>(ainv.c)).epsilon(1e-12));
    CHECK(mf[1][1] == doctest::Approx(static_cast<double>(ainv.d)).epsilon(1e-12));
}

TEST_CASE("coframe real-power domain") {
    CHECK_THROWS_AS(left_invariant_coframe(Bundle::from_tag(BundleTag::B2), 0.5, 0.0),
                    NonRealPower);
    CHECK_THROWS_AS(left_invariant_coframe(Bundle::from_tag(BundleTag::B4), 0.5, 0.0),
                    NonRealPower);
    CHECK_THROWS_AS(left_invariant_coframe(Bundle::from_tag(BundleTag::D, 1), 0.5, 0.0),
                    NonRealPower);
    CHECK_THROWS_AS(left_invariant_coframe(Bundle::from_tag(BundleTag::G), 0.3, 0.5),
                    NonRealPower);
    // E's A is unipotent, so non-integer x is fine; non-integer y is not
    CHECK_NOTHROW(left_invariant_coframe(Bundle::from_tag(BundleTag::E, 1), 0.5, 1.0));
    CHECK_THROWS_AS(left_invariant_coframe(Bundle::from_tag(BundleTag::E, 1), 0.5, 0.5),
                    NonRealPower);
    // integer powers remain available for elliptic types
    CHECK_NOTHROW(left_invariant_coframe(Bundle::from_tag(BundleTag::B2), 3.0, 0.0));
}

TEST_CASE("coframe cocycle M(x+1, y) = A^{-1} M(x, y)") {
    const Bundle f = Bundle::from_tag(BundleTag::F);
    const Mat2i ai = f.A().inv();
    for (double x : {-0.8, 0.1, 0.6}) {
        const Mat2d m0 = left_invariant_coframe(f, x, 0.0);
        const Mat2d m1 = left_invariant_coframe(f, x + 1.0, 0.0);
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx) {
                const double want = static_cast<double>(r == 0 ? ai.a : ai.c) * m0[0][cidx] +
                                    static_cast<double>(r == 0 ? ai.b : ai.d) * m0[1][cidx];
                CHECK(m1[r][cidx] == doctest::Approx(want).epsilon(1e-10));
            }
    }
}

TEST_CASE("bundle JSON loading") {
    const Bundle b1 = bundle_from_json_text("{\"type\": \"C\", \"k\": 1}");
    CHECK(b1.tag() == BundleTag::C);
    const Bundle b2 = bundle_from_json_text("{\"A\": [[1,2],[0,1]], \"B\": [[1,0],[0,1]]}");
    CHECK(b2.tag() == BundleTag::C);
    CHECK(b2.param_k() == 2);
    CHECK_THROWS(bundle_from_json_text("{\"A\": [[1,2],[0,2]]}"));
    CHECK_THROWS_AS(bundle_from_json_text("{\"type\": \"C\", \"k\": 0}"),
                    std::invalid_argument);
    CHECK(bundle_from_spec("B3").tag() == BundleTag::B3);
    CHECK(bundle_from_spec("E:2").param_k() == 2);
}
