#include "thetabundle/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "thetabundle/bundle.hpp"
#include "thetabundle/bundle_io.hpp"
#include "thetabundle/embedding.hpp"
#include "thetabundle/sections.hpp"
#include "thetabundle/symplectic.hpp"

namespace thetabundle {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
const cplx kI(0.0, 1.0);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult below(const std::string& name, double value, double tol,
                  const std::string& details = "") {
    return {name, value < tol, value, tol, details};
}

// negative controls pass when the measured value EXCEEDS the threshold
CheckResult above(const std::string& name, double value, double tol,
                  const std::string& details = "") {
    return {name, value > tol, value, tol, details};
}

TotalPoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng), y = u(rng), s = u(rng), t = u(rng);
    return {x, y, s, t};
}

cplx random_cplx(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    const double re = u(rng), im = u(rng);
    return {re, im};
}

const std::vector<BundleTag> kAllTags = {BundleTag::A,  BundleTag::B1, BundleTag::B2,
                                         BundleTag::B3, BundleTag::B4, BundleTag::C,
                                         BundleTag::D,  BundleTag::E,  BundleTag::F,
                                         BundleTag::G};

// Runs one check body; an exception becomes a failed check instead of
// aborting the suite (a tampered series can push evaluations off the rails).
template <class F>
void guarded(SuiteReport& rep, const std::string& name, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        rep.checks.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
    }
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> defaults = {
        {"quasi", 1e-10},         {"oddness", 1e-10},
        {"modular", 1e-9},        {"heat", 1e-6},
        {"multiplier", 1e-7},     {"cocycle", 1e-7},
        {"product", 1e-7},        {"negative_control", 1e-2},
        {"ku", 1e-8},             {"ku_stress", 1e-6},
        {"ku_pseudo", 1e-9},      {"rank", 1e-6},
        {"collision", 1e-6},      {"equivariance", 1e-9},
        {"stability", 1e-9},      {"pfaffian", 1e-6},
        {"closedness", 1e-4},     {"period", 1e-4},
        {"chern", 1e-9},          {"lemma", 1e-10},
        {"relations", 1e-12},     {"consistency", 1e-3},
    };
    return defaults;
}

double RunConfig::tolerance(const std::string& name) const {
    const auto it = tol.find(name);
    if (it != tol.end()) return it->second;
    const auto& d = default_tolerances();
    const auto dit = d.find(name);
    if (dit == d.end()) throw std::invalid_argument("unknown tolerance name: " + name);
    return dit->second;
}

// ---------------------------------------------------------------- theta ----

SuiteReport run_theta_suite(const RunConfig& cfg) {
    SuiteReport rep{"theta", {}};
    const TruncationPolicy& pol = cfg.policy;
    const Tau tau(cfg.tau);

    guarded(rep, "quasi_periodicity", [&] {
        // quasi-periodicity over 100 random (z, tau') with Im tau' in [0.3, 3]
        std::mt19937_64 rng(cfg.seed + 1);
        std::uniform_real_distribution<double> ur(-1.5, 1.5), ui(-0.8, 0.8), uy(0.3, 3.0);
        double worst1 = 0.0, worst2 = 0.0, worst_odd = 0.0;
        for (int i = 0; i < 100; ++i) {
            const cplx z(ur(rng), ui(rng));
            const Tau tt(cplx(ur(rng) * 0.5, uy(rng)));
            const cplx v = theta11(z, tt, pol).value;
            const double scale = std::max(1.0, std::abs(v));
            worst1 = std::max(worst1,
                              std::abs(theta11(z + 1.0, tt, pol).value + v) / scale);
            const cplx law = -std::exp(-2.0 * kPi * kI * z - kPi * kI * tt.value) * v;
            worst2 = std::max(worst2, std::abs(theta11(z + tt.value, tt, pol).value - law) /
                                          std::max(1.0, std::abs(law)));
            worst_odd = std::max(worst_odd,
                                 std::abs(theta11(-z, tt, pol).value + v) / scale);
        }
        rep.checks.push_back(below("quasi_periodicity_z_plus_1", worst1, cfg.tolerance("quasi"),
                                   "max scaled |theta(z+1)+theta(z)| over 100 samples"));
        rep.checks.push_back(below("quasi_periodicity_z_plus_tau", worst2, cfg.tolerance("quasi"),
                                   "max scaled residual of the z+tau law"));
        rep.checks.push_back(below("oddness", worst_odd, cfg.tolerance("quasi"),
                                   "max scaled |theta(-z)+theta(z)|"));
    });
    guarded(rep, "modular_constancy", [&] {
        // modular-ratio constancy for 5 matrices, 20 samples each
        std::mt19937_64 rng(cfg.seed + 2);
        const std::vector<ModularMatrix> mats = {{1, 0, 0, 1},
                                                 {0, -1, 1, 0},
                                                 {1, 1, 0, 1},
                                                 {2, 1, 1, 1},
                                                 {1, 0, 1, 1}};
        double worst = 0.0;
        for (const auto& m : mats) {
            std::vector<cplx> samples;
            while (samples.size() < 20) {
                const cplx z = random_cplx(rng, 0.7) + cplx(0.05, 0.03);
                if (std::abs(theta11(z, tau, pol).value) > 1e-3) samples.push_back(z);
            }
            const auto r = modular_transform_check(samples, tau, m, pol);
            worst = std::max(worst, r.max_residual);
        }
        rep.checks.push_back(below("modular_constancy", worst, cfg.tolerance("modular"),
                                   "max residual over 5 matrices x 20 samples"));
        const auto rid = modular_transform_check({cplx(0.3, 0.2)}, tau,
                                                 ModularMatrix(1, 0, 0, 1), pol);
        rep.checks.push_back(below("modular_identity_is_one",
                                   std::abs(rid.zeta_estimate - cplx(1.0, 0.0)),
                                   cfg.tolerance("modular"), "zeta(I) = 1"));
    });
    guarded(rep, "heat_equation", [&] {
        const double r1 = heat_equation_residual(cplx(0.2, 0.1), tau, 1e-4, pol);
        const double r0 = heat_equation_residual(cplx(0.0, 0.0), tau, 1e-4, pol);
        rep.checks.push_back(below("heat_equation", std::max(r1, r0), cfg.tolerance("heat"),
                                   "residual at z=0.2+0.1i and at the zero z=0, step 1e-4"));
    });
    guarded(rep, "zero_count", [&] {
        const std::vector<cplx> taus = {cplx(0.0, 1.0), cplx(0.0, 2.0),
                                        cplx(0.5, std::sqrt(3.0) / 2.0), cplx(0.3, 0.8),
                                        cplx(-0.4, 1.2)};
        int bad = 0;
        for (const cplx& tv : taus)
            if (count_zeros_fundamental_domain(Tau(tv), pol) != 1) ++bad;
        rep.checks.push_back({"zero_count", bad == 0, static_cast<double>(bad), 0.5,
                              "winding count = 1 for 5 values of tau"});
    });
    return rep;
}

// --------------------------------------------------------------- bundles ---

SuiteReport run_bundle_suite(const RunConfig& cfg) {
    SuiteReport rep{"bundle", {}};

    {
        int bad = 0;
        std::string detail;
        for (BundleTag tg : kAllTags) {
            const Bundle b = Bundle::from_tag(tg, 1);
            const BundleType ty = classify(MonodromyPair(b.A(), b.B()));
            if (ty.tag != tg) {
                ++bad;
                detail += to_string(tg) + " ";
            }
        }
        rep.checks.push_back({"classify_roundtrip", bad == 0, static_cast<double>(bad), 0.5,
                              bad ? "misclassified: " + detail : "10 table rows"});
    }
    {
        double min_im = 1e300;
        for (BundleTag tg : kAllTags) {
            const Bundle b = Bundle::from_tag(tg, 1);
            for (int i = 0; i <= 1000; ++i) {
                const double x = -2.0 + 4.0 * i / 1000.0;
                min_im = std::min(min_im, omega(b, x).imag());
            }
        }
        rep.checks.push_back(above("lemma1_im_omega_positive", min_im, 0.0,
                                   "min Im omega over 10 bundles, x in [-2,2]"));
    }
    {
        std::mt19937_64 rng(cfg.seed + 11);
        double worst = 0.0;
        for (BundleTag tg : kAllTags) {
            const Bundle b = Bundle::from_tag(tg, 1);
            for (int i = 0; i < 20; ++i) {
                const auto r = omega_transform_check(b, random_point(rng));
                worst = std::max(worst, std::max(r.residual_omega, r.residual_z));
            }
        }
        rep.checks.push_back(below("lemma2_omega_transform", worst, cfg.tolerance("lemma"),
                                   "max residual over 10 bundles x 20 points"));
    }
    {
        // relator words act trivially: [a,c] (c^{1-delta} d^gamma)^{-1} and
        // [a,d] (c^beta d^{1-alpha})^{-1}
        std::mt19937_64 rng(cfg.seed + 12);
        double worst = 0.0;
        for (BundleTag tg : kAllTags) {
            const Bundle b = Bundle::from_tag(tg, 1);
            const GroupElement a = GroupElement::gen_a(), c = GroupElement::gen_c(),
                               d = GroupElement::gen_d();
            const GroupElement ac = compose(
                b, compose(b, compose(b, inverse(b, a), inverse(b, c)), a), c);
            const GroupElement ad = compose(
                b, compose(b, compose(b, inverse(b, a), inverse(b, d)), a), d);
            const GroupElement r1 = compose(
                b, ac, inverse(b, GroupElement{0, 0, 1 - b.delta(), b.gamma()}));
            const GroupElement r2 = compose(
                b, ad, inverse(b, GroupElement{0, 0, b.beta(), 1 - b.alpha()}));
            for (const GroupElement& r : {r1, r2})
                for (int i = 0; i < 10; ++i) {
                    const TotalPoint p = random_point(rng);
                    const TotalPoint q = gamma_action(b, r, p);
                    worst = std::max({worst, std::abs(q.x - p.x), std::abs(q.y - p.y),
                                      std::abs(q.s - p.s), std::abs(q.t - p.t)});
                }
        }
        rep.checks.push_back(below("group_relations", worst, cfg.tolerance("relations"),
                                   "relator words fix 10 points per bundle"));
    }
    {
        // coframe cocycle M(x+1, y) = A^{-1} M(x, y) where real powers exist
        double worst = 0.0;
        for (BundleTag tg : {BundleTag::A, BundleTag::C, BundleTag::E, BundleTag::F}) {
            const Bundle b = Bundle::from_tag(tg, 1);
            const Mat2i ainv = b.A().inv();
            for (double x : {-0.7, 0.0, 0.4, 1.3})
                for (double y : {0.0, 1.0}) {
                    const Mat2d m0 = left_invariant_coframe(b, x, y);
                    const Mat2d m1 = left_invariant_coframe(b, x + 1.0, y);
                    const double e00 = static_cast<double>(ainv.a) * m0[0][0] +
                                       static_cast<double>(ainv.b) * m0[1][0];
                    const double e01 = static_cast<double>(ainv.a) * m0[0][1] +
                                       static_cast<double>(ainv.b) * m0[1][1];
                    const double e10 = static_cast<double>(ainv.c) * m0[0][0] +
                                       static_cast<double>(ainv.d) * m0[1][0];
                    const double e11 = static_cast<double>(ainv.c) * m0[0][1] +
                                       static_cast<double>(ainv.d) * m0[1][1];
                    worst = std::max({worst, std::abs(m1[0][0] - e00), std::abs(m1[0][1] - e01),
                                      std::abs(m1[1][0] - e10), std::abs(m1[1][1] - e11)});
                }
        }
        rep.checks.push_back(below("coframe_cocycle", worst, 1e-10,
                                   "M(x+1,y) = A^{-1} M(x,y) for A, C, E, F"));
    }
    {
        bool threw = false;
        try {
            left_invariant_coframe(Bundle::from_tag(BundleTag::B2), 0.5, 0.0);
        } catch (const NonRealPower&) {
            threw = true;
        }
        rep.checks.push_back({"coframe_rejects_elliptic_real_power", threw, threw ? 1.0 : 0.0,
                              0.5, "B2 at x = 0.5 raises NonRealPower"});
    }
    return rep;
}

// -------------------------------------------------------------- sections ---

namespace {

// Shift tuple satisfying every constraint the bundle imposes on degree-k
// products: the stated sum constraints, invariance of the multiset under the
// fibre reindexing lambda -> (-gamma*omega + delta) lambda entering through
// the a-action, and closure under negation for the B = -I b-action.
struct ProductPlan {
    std::vector<ShiftPair> shifts;
    bool test_a = true;
    std::string note;
};

ProductPlan product_plan(const Bundle& bundle, std::mt19937_64& rng) {
    ProductPlan plan;
    const cplx l = random_cplx(rng, 0.3) + cplx(0.15, 0.1);
    const cplx mu = random_cplx(rng, 0.2) + cplx(0.1, 0.05);

    switch (bundle.tag()) {
        case BundleTag::A:
        case BundleTag::C:
        case BundleTag::F: {
            // -gamma*omega + delta is 1 for A and C; for F it varies with x
            // and no fixed tuple is invariant, so the a-law is skipped there.
            plan.shifts = {{l, mu},
                           {random_cplx(rng, 0.3), random_cplx(rng, 0.2)},
                           {}};
            plan.shifts[2].lambda = -plan.shifts[0].lambda - plan.shifts[1].lambda;
            plan.shifts[2].mu = -plan.shifts[0].mu - plan.shifts[1].mu;
            plan.note = "generic zero-sum 3-tuple";
            if (bundle.tag() == BundleTag::F) {
                plan.test_a = false;
                plan.note += "; a-law skipped: x-dependent -gamma*omega+delta admits no "
                             "invariant shift tuple";
            }
            return plan;
        }
        case BundleTag::E:
        case BundleTag::G:
        case BundleTag::D:
        case BundleTag::B4: {
            // negation-symmetric pair: invariant under lambda -> -lambda
            // (D, B4) and under the (s,t) -> (-s,-t) of the B = -I b-action
            plan.shifts = {{l, mu}, {-l, -mu}};
            plan.note = "negation-symmetric 2-tuple";
            if (bundle.tag() == BundleTag::G) {
                plan.test_a = false;
                plan.note += "; a-law skipped: x-dependent -gamma*omega+delta admits no "
                             "invariant shift tuple";
            }
            return plan;
        }
        case BundleTag::B1:
        case BundleTag::B2:
        case BundleTag::B3: {
            // orbit tuple {lambda c1^j}: both shift constraints hold and the
            // multiset is c1-invariant (c1 is a root of unity here)
            const cplx w = omega(bundle, 0.0);
            const cplx c1 = -static_cast<double>(bundle.gamma()) * w +
                            static_cast<double>(bundle.delta());
            int order = 0;
            cplx pw(1.0, 0.0);
            for (int m = 1; m <= 6; ++m) {
                pw *= c1;
                if (std::abs(pw - cplx(1.0, 0.0)) < 1e-9) {
                    order = m;
                    break;
                }
            }
            std::vector<cplx> mus(static_cast<std::size_t>(order));
            cplx musum{};
            for (int j = 0; j + 1 < order; ++j) {
                mus[static_cast<std::size_t>(j)] = random_cplx(rng, 0.15);
                musum += mus[static_cast<std::size_t>(j)];
            }
            mus[static_cast<std::size_t>(order - 1)] = -musum;
            cplx cur = l;
            for (int j = 0; j < order; ++j) {
                plan.shifts.push_back({cur, mus[static_cast<std::size_t>(j)]});
                cur *= c1;
            }
            plan.note = "orbit tuple of order " + std::to_string(order);
            return plan;
        }
    }
    throw std::invalid_argument("unknown bundle tag");
}

double product_law_residual(const Bundle& bundle, const std::vector<ShiftPair>& shifts,
                            Gen gen, const TotalPoint& p, const TruncationPolicy& pol) {
    auto prod = [&](const TotalPoint& q) {
        cplx v(1.0, 0.0);
        for (const auto& sh : shifts) v *= shifted_theta_m(bundle, sh, q, pol).value;
        return v;
    };
    const TotalPoint q = gamma_action(bundle, to_element(gen), p);
    cplx ek(1.0, 0.0);
    const cplx e = multiplier(bundle, gen, p, pol);
    for (std::size_t i = 0; i < shifts.size(); ++i) ek *= e;
    const cplx lhs = prod(q);
    const cplx rhs = ek * prod(p);
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

} // namespace

SuiteReport run_section_suite(const RunConfig& cfg) {
    SuiteReport rep{"sections", {}};
    const TruncationPolicy& pol = cfg.policy;
    const Bundle bundle = bundle_from_spec(cfg.bundle_spec);

    {
        // multiplier law on an offset grid x all four generators
        double worst = 0.0;
        const int n = cfg.grid;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int is = 0; is < n; ++is)
                    for (int it = 0; it < n; ++it) {
                        TotalPoint p{(ix + 0.37) / n, (iy + 0.37) / n, (is + 0.37) / n,
                                     (it + 0.37) / n};
                        for (Gen g : {Gen::a, Gen::b, Gen::c, Gen::d}) {
                            for (int retry = 0;; ++retry) {
                                try {
                                    worst = std::max(worst,
                                                     verify_multiplier(bundle, g, p, pol));
                                    break;
                                } catch (const NearZeroBase&) {
                                    if (retry >= 3) throw;
                                    p.x += 0.013;
                                    p.s += 0.017;
                                }
                            }
                        }
                    }
        rep.checks.push_back(below("multiplier_grid_" + bundle.name(), worst,
                                   cfg.tolerance("multiplier"),
                                   "all four generators on a " + std::to_string(n) + "^4 grid"));
    }
    {
        // cocycle identity on random (g1, g2, p) triples
        std::mt19937_64 rng(cfg.seed + 21);
        std::uniform_int_distribution<int> ui(-2, 2);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const GroupElement g1{ui(rng), ui(rng), ui(rng), ui(rng)};
            const GroupElement g2{ui(rng), ui(rng), ui(rng), ui(rng)};
            worst = std::max(worst, cocycle_check(bundle, g1, g2, random_point(rng), pol));
        }
        rep.checks.push_back(below("cocycle_random_" + bundle.name(), worst,
                                   cfg.tolerance("cocycle"), "50 random (g1, g2, p) triples"));
    }
    {
        // relator identities through the cocycle: (a^-1 c^-1)(a c), (a^-1 d^-1)(a d)
        std::mt19937_64 rng(cfg.seed + 22);
        double worst = 0.0;
        const GroupElement a = GroupElement::gen_a(), c = GroupElement::gen_c(),
                           d = GroupElement::gen_d();
        const GroupElement iac = compose(bundle, inverse(bundle, a), inverse(bundle, c));
        const GroupElement ac = compose(bundle, a, c);
        const GroupElement iad = compose(bundle, inverse(bundle, a), inverse(bundle, d));
        const GroupElement ad = compose(bundle, a, d);
        for (int i = 0; i < 10; ++i) {
            const TotalPoint p = random_point(rng);
            worst = std::max(worst, cocycle_check(bundle, iac, ac, p, pol));
            worst = std::max(worst, cocycle_check(bundle, iad, ad, p, pol));
        }
        rep.checks.push_back(below("relator_identities_" + bundle.name(), worst,
                                   cfg.tolerance("cocycle"),
                                   "[a,c] and [a,d] relators via the cocycle"));
    }
    {
        // constrained products transform with the degree-k multiplier
        std::mt19937_64 rng(cfg.seed + 23);
        const ProductPlan plan = product_plan(bundle, rng);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
            const TotalPoint p = random_point(rng);
            for (Gen g : {Gen::a, Gen::b, Gen::c, Gen::d}) {
                if (g == Gen::a && !plan.test_a) continue;
                worst = std::max(worst, product_law_residual(bundle, plan.shifts, g, p, pol));
            }
        }
        rep.checks.push_back(below("product_degree_k_" + bundle.name(), worst,
                                   cfg.tolerance("product"),
                                   plan.note + ", k = " + std::to_string(plan.shifts.size())));
        bool ok = true;
        try {
            product_section(bundle, plan.shifts, TotalPoint{0.2, 0.3, 0.1, 0.4}, pol);
        } catch (const ConstraintViolated&) {
            ok = false;
        }
        rep.checks.push_back({"product_constraint_gate_" + bundle.name(), ok, ok ? 1.0 : 0.0,
                              0.5, "product_section accepts the constraint-true tuple"});
    }
    if (bundle.gamma() != 0) {
        // negative control: violate sum lambda^2 = 0 on a gamma != 0 bundle
        std::mt19937_64 rng(cfg.seed + 24);
        const std::vector<ShiftPair> bad = {{cplx(0.3, 0.0), cplx(0.1, 0.0)},
                                            {cplx(-0.3, 0.0), cplx(-0.1, 0.0)},
                                            {cplx(0.0, 0.2), cplx(0.0, 0.2)},
                                            {cplx(0.0, -0.2), cplx(0.0, -0.2)}};
        double worst = 0.0;
        for (int i = 0; i < 6; ++i)
            worst = std::max(worst,
                             product_law_residual(bundle, bad, Gen::a, random_point(rng), pol));
        rep.checks.push_back(above("product_negative_control_" + bundle.name(), worst,
                                   cfg.tolerance("negative_control"),
                                   "sum lambda^2 != 0 must break the degree-k a-law"));
        bool threw = false;
        try {
            product_section(bundle, bad, TotalPoint{0.2, 0.3, 0.1, 0.4}, pol);
        } catch (const ConstraintViolated&) {
            threw = true;
        }
        rep.checks.push_back({"product_rejects_violated_constraint_" + bundle.name(), threw,
                              threw ? 1.0 : 0.0, 0.5,
                              "product_section raises ConstraintViolated"});
    }
    {
        // Kirwin-Uribe pseudo-periodicity and factorization identity
        std::mt19937_64 rng(cfg.seed + 25);
        double worst_pp = 0.0;
        for (int i = 0; i < 5; ++i) {
            const TotalPoint p = random_point(rng);
            const cplx v = ku_theta(1, 0, 0, p, pol).value;
            const cplx vx = ku_theta(1, 0, 0, {p.x + 1.0, p.y, p.s, p.t}, pol).value;
            worst_pp = std::max(worst_pp, std::abs(vx / v - 1.0));
            const cplx vz = ku_theta(1, 0, 0, {p.x, p.y, p.s + 1.0, p.t}, pol).value;
            worst_pp = std::max(worst_pp,
                                std::abs(vz / v - std::exp(4.0 * kPi * kI * p.x)));
            const cplx vt = ku_theta(1, 0, 0, {p.x, p.y, p.s, p.t + 1.0}, pol).value;
            worst_pp = std::max(worst_pp,
                                std::abs(vt / v - std::exp(4.0 * kPi * kI * p.y)));
        }
        rep.checks.push_back(below("ku_pseudo_periodicity", worst_pp,
                                   cfg.tolerance("ku_pseudo"),
                                   "slots 1, 3, 4 at 5 random points"));

        double worst = 0.0;
        for (int i = 0; i < 20; ++i)
            worst = std::max(worst, ku_cross_check(random_point(rng), pol));
        rep.checks.push_back(below("ku_cross_check", worst, cfg.tolerance("ku"),
                                   "relative residual at 20 random points"));

        TruncationPolicy stress = pol;
        stress.max_terms = std::max(stress.max_terms, 40000);
        rep.checks.push_back(below("ku_cross_check_deep_tail",
                                   ku_cross_check({0.1, 0.2, 0.3, 5.0}, stress),
                                   cfg.tolerance("ku_stress"), "t = 5 with enlarged window"));
    }
    return rep;
}

// ------------------------------------------------------------- embedding ---

SuiteReport run_embed_suite(const RunConfig& cfg) {
    SuiteReport rep{"embed", {}};
    const TruncationPolicy& pol = cfg.policy;
    const Bundle bundle = bundle_from_spec(cfg.bundle_spec);
    const int k = cfg.k;

    {
        std::mt19937_64 rng(cfg.seed + 31);
        double min_sv = 1e300;
        int not_rank4 = 0;
        for (int i = 0; i < cfg.rank_points; ++i) {
            const TotalPoint p = random_point(rng);
            const RankReport r =
                rank_check(bundle, k, p, cfg.tolerance("rank"), pol, cfg.fd_step);
            min_sv = std::min(min_sv, r.singular_values[3]);
            if (r.rank_at_tol != 4) ++not_rank4;
        }
        if (k == 1) {
            rep.checks.push_back({"rank_grid", not_rank4 == cfg.rank_points, 0.0, 0.0,
                                  "CP^0 target: rank 0 at every point"});
        } else {
            rep.checks.push_back(above("rank_grid", min_sv, cfg.tolerance("rank"),
                                       "min 4th singular value over " +
                                           std::to_string(cfg.rank_points) + " points"));
        }
    }
    {
        const ScanResult sc = injectivity_scan(bundle, k, cfg.scan_grid, pol,
                                               cfg.scan_interior, cfg.tolerance("collision"));
        if (k >= 3) {
            rep.checks.push_back({"injectivity_scan", sc.collisions.empty(),
                                  sc.min_offdiagonal_fs_distance, cfg.tolerance("collision"),
                                  std::to_string(sc.collisions.size()) + " collisions on a " +
                                      std::to_string(cfg.scan_grid) + "^4 grid; min FS distance " +
                                      fmt(sc.min_offdiagonal_fs_distance)});
        } else {
            rep.checks.push_back({"injectivity_scan_report", true,
                                  static_cast<double>(sc.collisions.size()), 0.0,
                                  "informational (no guarantee below k = 3): " +
                                      std::to_string(sc.collisions.size()) + " collisions"});
        }
    }
    {
        const EquivarianceReport ec = equivariance_check(bundle, k, Gen::c, {3, 0.23}, pol,
                                                         cfg.tolerance("equivariance"));
        const double expect = (k % 2 == 0) ? 1.0 : -1.0;
        double ratio_err = 0.0;
        for (const cplx& r : ec.induced_ratios)
            ratio_err = std::max(ratio_err, std::abs(r - expect));
        rep.checks.push_back(below("equivariance_c", std::max(ec.spread, ratio_err),
                                   cfg.tolerance("equivariance"),
                                   "c acts by the scalar (-1)^k"));
        const EquivarianceReport ea = equivariance_check(bundle, k, Gen::a, {2, 0.23}, pol,
                                                         cfg.tolerance("equivariance"));
        rep.checks.push_back({"equivariance_a_report", true, ea.spread, 0.0,
                              std::string("descriptive: a-action is ") +
                                  (ea.is_projectively_scalar ? "projectively scalar"
                                                             : "a nonscalar projective map")});
    }
    {
        // squaring the tail target forces a strictly wider summation window;
        // a converged series moves the projective point only at roundoff level
        std::mt19937_64 rng(cfg.seed + 32);
        TruncationPolicy tight = pol;
        tight.target_abs_error =
            std::max(pol.target_abs_error * pol.target_abs_error, 1e-30);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const TotalPoint p = random_point(rng);
            worst = std::max(worst, fs_distance(phi_k(bundle, k, p, pol),
                                                phi_k(bundle, k, p, tight)));
        }
        rep.checks.push_back(below("truncation_stability", worst, cfg.tolerance("stability"),
                                   "FS motion under squared truncation target at 5 points"));
    }
    return rep;
}

// ------------------------------------------------------------ symplectic ---

SuiteReport run_symplectic_suite(const RunConfig& cfg) {
    SuiteReport rep{"symplectic", {}};
    const TruncationPolicy& pol = cfg.policy;
    const Bundle bundle = bundle_from_spec(cfg.bundle_spec);
    const int k = cfg.k;

    {
        // antisymmetry and scale-relative Pfaffian over the grid
        const int n = cfg.grid;
        double min_pf = 1e300, max_entry = 0.0, worst_asym = 0.0;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int is = 0; is < n; ++is)
                    for (int it = 0; it < n; ++it) {
                        const TotalPoint p{(ix + 0.37) / n, (iy + 0.37) / n, (is + 0.37) / n,
                                           (it + 0.37) / n};
                        const TwoFormMatrix f = fs_pullback(bundle, k, p, cfg.fd_step, pol);
                        for (int i = 0; i < 4; ++i)
                            for (int j = 0; j < 4; ++j) {
                                worst_asym = std::max(worst_asym,
                                                      std::abs(f.m[i][j] + f.m[j][i]));
                                max_entry = std::max(max_entry, std::abs(f.m[i][j]));
                            }
                        min_pf = std::min(min_pf, std::abs(nondegeneracy_check(f)));
                    }
        rep.checks.push_back(below("pullback_antisymmetry", worst_asym, 1e-12,
                                   "max |M + M^T| entry over the grid"));
        rep.checks.push_back(above("pfaffian_grid", min_pf / std::max(1.0, max_entry),
                                   cfg.tolerance("pfaffian"),
                                   "scale-relative min |Pf| over a " + std::to_string(n) +
                                       "^4 grid"));
    }
    {
        std::mt19937_64 rng(cfg.seed + 41);
        double worst = 0.0, worst_half = 0.0;
        for (int i = 0; i < 3; ++i) {
            const TotalPoint p = random_point(rng);
            worst = std::max(worst,
                             closedness_residual(bundle, k, p, cfg.closedness_step, pol));
            worst_half = std::max(
                worst_half, closedness_residual(bundle, k, p, cfg.closedness_step / 2.0, pol));
        }
        rep.checks.push_back(below("closedness", worst, cfg.tolerance("closedness"),
                                   "max scaled residual at 3 random points, step " +
                                       fmt(cfg.closedness_step)));
        // second-order convergence, or both residuals at the noise floor
        const bool converges = worst_half <= worst / 3.0 || worst < 1e-8;
        rep.checks.push_back({"closedness_convergence", converges,
                              worst_half > 0 ? worst / worst_half : 0.0, 4.0,
                              "residual(h) / residual(h/2) with h = " +
                                  fmt(cfg.closedness_step)});
    }
    {
        const CohomologyReport co =
            cohomology_class_report(bundle, k, cfg.resolution, pol, cfg.tolerance("period"));
        for (const auto& [name, period] : co.periods) {
            const double expected = co.expected.at(name);
            rep.checks.push_back(below("period_" + name, std::abs(period - expected),
                                       cfg.tolerance("period"),
                                       "integral " + fmt(period) + ", expected " +
                                           fmt(expected) + " = k * c1"));
        }
    }
    {
        std::mt19937_64 rng(cfg.seed + 42);
        std::vector<std::pair<std::string, CycleSpec>> cycles = {
            {"ab", {Gen::a, Gen::b, {}}}, {"cd", {Gen::c, Gen::d, {}}}};
        if (bundle.tag() == BundleTag::C) {
            cycles.push_back({"bd", {Gen::b, Gen::d, {}}});
            cycles.push_back({"ac", {Gen::a, Gen::c, {}}});
        }
        const std::map<std::string, long long> expected = {
            {"ab", 1}, {"cd", 1}, {"bd", 0}, {"ac", 0}};
        for (const auto& [name, cyc] : cycles) {
            double worst = 0.0;
            bool integer_ok = true;
            for (int i = 0; i < 10; ++i) {
                const ChernEvaluation ev = chern_pairing(bundle, cyc, random_point(rng), pol);
                worst = std::max(worst, ev.deviation);
                if (ev.nearest_integer != expected.at(name)) integer_ok = false;
            }
            rep.checks.push_back({"chern_" + name, integer_ok && worst < cfg.tolerance("chern"),
                                  worst, cfg.tolerance("chern"),
                                  "value " + std::to_string(expected.at(name)) +
                                      " at 10 base points"});
        }
    }
    {
        const CycleSpec tcd{Gen::c, Gen::d, {0.3, 0.7, 0.0, 0.0}};
        const double period = period_integral(bundle, k, tcd, cfg.resolution, pol);
        const ChernEvaluation ch = chern_pairing(bundle, tcd, {0.1, 0.2, 0.3, 0.4}, pol);
        rep.checks.push_back(
            below("period_chern_consistency",
                  std::abs(period - k * static_cast<double>(ch.nearest_integer)),
                  cfg.tolerance("consistency"), "period over T_cd vs k * c1(T_cd)"));
    }
    return rep;
}

} // namespace thetabundle
