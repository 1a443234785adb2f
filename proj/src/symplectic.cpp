#include "thetabundle/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thetabundle/parallel.hpp"

namespace thetabundle {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
const cplx kI(0.0, 1.0);

TotalPoint shifted(const TotalPoint& p, int dir, double h) {
    TotalPoint q = p;
    switch (dir) {
        case 0: q.x += h; break;
        case 1: q.y += h; break;
        case 2: q.s += h; break;
        case 3: q.t += h; break;
    }
    return q;
}

enum class Factor { fibre, base };

bool factor_depends(Factor f, int dir) {
    // fibre: theta_k^p(s + omega(x) t, omega(x)) -> x, s, t
    // base:  theta_k^q(x + iy, i)                -> x, y
    if (f == Factor::fibre) return dir == 0 || dir == 2 || dir == 3;
    return dir == 0 || dir == 1;
}

std::vector<cplx> factor_coords(const Bundle& bundle, int k, Factor f,
                                const TotalPoint& p, const TruncationPolicy& policy) {
    std::vector<cplx> out(static_cast<std::size_t>(k));
    if (f == Factor::fibre) {
        const cplx w = omega(bundle, p.x);
        const Tau tau(w);
        for (int j = 0; j < k; ++j)
            out[static_cast<std::size_t>(j)] =
                theta_degree_basis(k, j, p.s + w * p.t, tau, policy).value;
    } else {
        static const Tau tau_i(cplx(0.0, 1.0));
        for (int j = 0; j < k; ++j)
            out[static_cast<std::size_t>(j)] =
                theta_degree_basis(k, j, cplx(p.x, p.y), tau_i, policy).value;
    }
    return out;
}

// Chart coordinates relative to a frozen pivot.
std::vector<cplx> chart(const std::vector<cplx>& coords, std::size_t pivot) {
    std::vector<cplx> w;
    w.reserve(coords.size() - 1);
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (i != pivot) w.push_back(coords[i] / coords[pivot]);
    return w;
}

// One factor's contribution to the entries Omega(e_i, e_j) for the requested
// direction pairs.  Directions the factor does not depend on contribute zero
// and are skipped.
void accumulate_factor(const Bundle& bundle, int k, Factor f, const TotalPoint& p,
                       double h, const TruncationPolicy& policy,
                       const std::vector<std::pair<int, int>>& pairs,
                       std::map<std::pair<int, int>, double>& acc) {
    if (k < 2) return; // CP^0 factor: the map is constant

    std::vector<int> dirs;
    for (const auto& pr : pairs) {
        if (!factor_depends(f, pr.first) || !factor_depends(f, pr.second)) continue;
        for (int d : {pr.first, pr.second})
            if (std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dirs.push_back(d);
    }
    if (dirs.empty()) return;

    const std::vector<cplx> centre = factor_coords(bundle, k, f, p, policy);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < centre.size(); ++i)
        if (std::abs(centre[i]) > std::abs(centre[pivot])) pivot = i;
    if (std::abs(centre[pivot]) < 1e-10)
        throw ChartDegenerate("fs_pullback: every factor coordinate is below 1e-10");

    const std::vector<cplx> w0 = chart(centre, pivot);
    const std::size_t dim = w0.size();

    std::map<int, std::vector<cplx>> dw;
    for (int d : dirs) {
        const std::vector<cplx> wp =
            chart(factor_coords(bundle, k, f, shifted(p, d, h), policy), pivot);
        const std::vector<cplx> wm =
            chart(factor_coords(bundle, k, f, shifted(p, d, -h), policy), pivot);
        std::vector<cplx> der(dim);
        for (std::size_t j = 0; j < dim; ++j) der[j] = (wp[j] - wm[j]) / (2.0 * h);
        dw[d] = std::move(der);
    }

    // FS metric at w0.
    double nw2 = 0.0;
    for (const cplx& c : w0) nw2 += std::norm(c);
    const double denom = (1.0 + nw2) * (1.0 + nw2);

    for (const auto& pr : pairs) {
        if (!factor_depends(f, pr.first) || !factor_depends(f, pr.second)) continue;
        const std::vector<cplx>& da = dw[pr.first];
        const std::vector<cplx>& db = dw[pr.second];
        cplx s{};
        // sum_ij g_ij da_i conj(db_j) with
        // g_ij = ((1+|w|^2) delta_ij - conj(w_i) w_j) / (1+|w|^2)^2
        cplx wa{}, wb{};
        for (std::size_t j = 0; j < dim; ++j) {
            s += (1.0 + nw2) * da[j] * std::conj(db[j]);
            wa += std::conj(w0[j]) * da[j];
            wb += std::conj(w0[j]) * db[j];
        }
        s -= wa * std::conj(wb);
        s /= denom;
        acc[pr] += -(1.0 / kPi) * s.imag();
    }
}

const std::vector<std::pair<int, int>> kAllPairs = {{0, 1}, {0, 2}, {0, 3},
                                                    {1, 2}, {1, 3}, {2, 3}};

} // namespace

TwoFormMatrix reference_form() {
    TwoFormMatrix f;
    f.set(0, 1, 1.0);
    f.set(2, 3, 1.0);
    return f;
}

TwoFormMatrix fs_pullback(const Bundle& bundle, int k, const TotalPoint& p,
                          double fd_step, const TruncationPolicy& policy) {
    std::map<std::pair<int, int>, double> acc;
    accumulate_factor(bundle, k, Factor::fibre, p, fd_step, policy, kAllPairs, acc);
    accumulate_factor(bundle, k, Factor::base, p, fd_step, policy, kAllPairs, acc);
    TwoFormMatrix out;
    for (const auto& pr : kAllPairs) {
        const auto it = acc.find(pr);
        out.set(pr.first, pr.second, it == acc.end() ? 0.0 : it->second);
    }
    return out;
}

double fs_pullback_entry(const Bundle& bundle, int k, const TotalPoint& p,
                         int i, int j, double fd_step, const TruncationPolicy& policy) {
    if (i == j) return 0.0;
    const bool flip = i > j;
    const std::pair<int, int> pr = flip ? std::make_pair(j, i) : std::make_pair(i, j);
    std::map<std::pair<int, int>, double> acc;
    const std::vector<std::pair<int, int>> pairs = {pr};
    accumulate_factor(bundle, k, Factor::fibre, p, fd_step, policy, pairs, acc);
    accumulate_factor(bundle, k, Factor::base, p, fd_step, policy, pairs, acc);
    const double v = acc.count(pr) ? acc[pr] : 0.0;
    return flip ? -v : v;
}

double nondegeneracy_check(const TwoFormMatrix& form) {
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) scale = std::max(scale, std::abs(form.m[i][j]));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(form.m[i][j] + form.m[j][i]) > 1e-12 * std::max(1.0, scale))
                throw std::invalid_argument("nondegeneracy_check: input not antisymmetric");

    const auto& m = form.m;
    const double pf = m[0][1] * m[2][3] - m[0][2] * m[1][3] + m[0][3] * m[1][2];

    // det of an antisymmetric matrix equals Pf^2.
    double a[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = m[i][j];
    double det = 0.0;
    {
        // Laplace expansion along the first row.
        auto minor3 = [&](int c0) {
            int cols[3], ci = 0;
            for (int j = 0; j < 4; ++j)
                if (j != c0) cols[ci++] = j;
            return a[1][cols[0]] * (a[2][cols[1]] * a[3][cols[2]] - a[2][cols[2]] * a[3][cols[1]]) -
                   a[1][cols[1]] * (a[2][cols[0]] * a[3][cols[2]] - a[2][cols[2]] * a[3][cols[0]]) +
                   a[1][cols[2]] * (a[2][cols[0]] * a[3][cols[1]] - a[2][cols[1]] * a[3][cols[0]]);
        };
        double sign = 1.0;
        for (int j = 0; j < 4; ++j) {
            det += sign * a[0][j] * minor3(j);
            sign = -sign;
        }
    }
    const double ref = std::max(1e-30, pf * pf);
    if (std::abs(pf * pf - det) > 1e-8 * std::max(1.0, ref))
        throw std::logic_error("nondegeneracy_check: Pf^2 disagrees with det");
    return pf;
}

double closedness_residual(const Bundle& bundle, int k, const TotalPoint& p,
                           double fd_step, const TruncationPolicy& policy) {
    const double inner = 1e-5; // pullback stencil; kept fixed under outer halving
    auto form_at = [&](const TotalPoint& q) { return fs_pullback(bundle, k, q, inner, policy); };

    std::array<TwoFormMatrix, 4> plus, minus;
    for (int d = 0; d < 4; ++d) {
        plus[d] = form_at(shifted(p, d, fd_step));
        minus[d] = form_at(shifted(p, d, -fd_step));
    }
    auto dpart = [&](int d, int i, int j) {
        return (plus[d].m[i][j] - minus[d].m[i][j]) / (2.0 * fd_step);
    };

    double res = 0.0;
    const int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& tr : triples) {
        const int a = tr[0], b = tr[1], c = tr[2];
        const double comp = dpart(a, b, c) - dpart(b, a, c) + dpart(c, a, b);
        res = std::max(res, std::abs(comp));
    }

    const TwoFormMatrix centre = fs_pullback(bundle, k, p, inner, policy);
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) scale = std::max(scale, std::abs(centre.m[i][j]));
    return res / std::max(1.0, scale);
}

namespace {

int coordinate_of(Gen g) {
    switch (g) {
        case Gen::a: return 0;
        case Gen::b: return 1;
        case Gen::c: return 2;
        case Gen::d: return 3;
    }
    return 0;
}

void require_commuting(const Bundle& bundle, const CycleSpec& cycle) {
    const GroupElement g1 = to_element(cycle.g1);
    const GroupElement g2 = to_element(cycle.g2);
    const GroupElement lhs = compose(bundle, g1, g2);
    const GroupElement rhs = compose(bundle, g2, g1);
    if (lhs.na != rhs.na || lhs.nb != rhs.nb || lhs.nc != rhs.nc || lhs.nd != rhs.nd)
        throw std::invalid_argument("cycle generators do not commute in Gamma");
}

} // namespace

double period_integral(const Bundle& bundle, int k, const CycleSpec& cycle,
                       int resolution, const TruncationPolicy& policy) {
    require_commuting(bundle, cycle);
    const int u = coordinate_of(cycle.g1);
    const int v = coordinate_of(cycle.g2);
    if (u == v) throw std::invalid_argument("cycle generators must differ");

    const std::size_t n = static_cast<std::size_t>(resolution);
    std::vector<double> samples(n * n);
    parallel_for(n * n, [&](std::size_t idx) {
        const std::size_t iu = idx / n;
        const std::size_t iv = idx % n;
        TotalPoint q = cycle.base;
        const double du = static_cast<double>(iu) / resolution;
        const double dv = static_cast<double>(iv) / resolution;
        auto bump = [&](int dir, double val) {
            switch (dir) {
                case 0: q.x += val; break;
                case 1: q.y += val; break;
                case 2: q.s += val; break;
                case 3: q.t += val; break;
            }
        };
        bump(u, du);
        bump(v, dv);
        samples[idx] = fs_pullback_entry(bundle, k, q, u, v, 1e-5, policy);
    });

    // Trapezoid on a periodic integrand = plain average; summed in index
    // order with compensation so reports are bit-stable.
    double sum = 0.0, comp = 0.0;
    for (double s : samples) {
        const double yv = s - comp;
        const double tv = sum + yv;
        comp = (tv - sum) - yv;
        sum = tv;
    }
    return sum / static_cast<double>(n * n);
}

double period_integral_reference(const CycleSpec& cycle, int resolution) {
    (void)resolution; // constant integrand
    const TwoFormMatrix ref = reference_form();
    return ref.entry(coordinate_of(cycle.g1), coordinate_of(cycle.g2));
}

namespace {

// Continuous logarithm branches f_g with e_g = exp(2 pi i f_g).
cplx f_branch(const Bundle& bundle, Gen g, const TotalPoint& p,
              const TruncationPolicy& policy) {
    const cplx w = omega(bundle, p.x);
    const cplx z = p.s + w * p.t;
    switch (g) {
        case Gen::c:
            return cplx(0.5, 0.0);
        case Gen::d:
            return 0.5 - z - w / 2.0;
        case Gen::b:
            return (bundle.b_is_minus() ? cplx(0.0, 0.0) : cplx(0.5, 0.0)) -
                   cplx(p.x, p.y) - kI / 2.0;
        case Gen::a: {
            const double ga = static_cast<double>(bundle.gamma());
            const double de = static_cast<double>(bundle.delta());
            const cplx c1 = -ga * w + de;
            if (ga != 0.0 && std::abs(c1.imag()) < 1e-12 && c1.real() < 0.0)
                throw BranchAmbiguous("f_a: -gamma*omega + delta near the log cut");
            const cplx zeta = multiplier_zeta(bundle, policy);
            return std::log(zeta) / (2.0 * kPi * kI) + std::log(c1) / (4.0 * kPi * kI) -
                   ga * z * z / (2.0 * c1);
        }
    }
    throw std::invalid_argument("unknown generator");
}

} // namespace

ChernEvaluation chern_pairing(const Bundle& bundle, const CycleSpec& cycle,
                              const TotalPoint& p, const TruncationPolicy& policy) {
    require_commuting(bundle, cycle);
    const Gen l = cycle.g1;
    const Gen m = cycle.g2;
    const TotalPoint pl = gamma_action(bundle, to_element(l), p);
    const TotalPoint pm = gamma_action(bundle, to_element(m), p);
    const cplx val = f_branch(bundle, m, p, policy) + f_branch(bundle, l, pm, policy) -
                     f_branch(bundle, l, p, policy) - f_branch(bundle, m, pl, policy);

    ChernEvaluation ev;
    ev.cycle = cycle;
    ev.value = val.real();
    ev.nearest_integer = std::llround(val.real());
    ev.deviation = std::abs(val - cplx(static_cast<double>(ev.nearest_integer), 0.0));
    return ev;
}

CohomologyReport cohomology_class_report(const Bundle& bundle, int k, int resolution,
                                         const TruncationPolicy& policy, double tol) {
    CohomologyReport rep;
    std::vector<std::pair<std::string, CycleSpec>> cycles = {
        {"T_ab", {Gen::a, Gen::b, TotalPoint{0.0, 0.0, 0.0, 0.0}}},
        {"T_cd", {Gen::c, Gen::d, TotalPoint{0.3, 0.7, 0.0, 0.0}}},
    };
    if (bundle.tag() == BundleTag::C) {
        cycles.push_back({"T_bd", {Gen::b, Gen::d, TotalPoint{0.3, 0.0, 0.4, 0.0}}});
        cycles.push_back({"T_ac", {Gen::a, Gen::c, TotalPoint{0.0, 0.3, 0.0, 0.0}}});
    }

    rep.degenerate = k < 2;
    rep.verdict = true;
    for (const auto& [name, cyc] : cycles) {
        const double period = period_integral(bundle, k, cyc, resolution, policy);
        const ChernEvaluation ch =
            chern_pairing(bundle, cyc, TotalPoint{0.11, 0.23, 0.31, 0.17}, policy);
        const double expected = static_cast<double>(k) * static_cast<double>(ch.nearest_integer);
        rep.periods[name] = period;
        rep.chern[name] = ch.nearest_integer;
        rep.expected[name] = expected;
        if (rep.degenerate) continue; // CP^0 factors carry no pullback
        const double err = std::abs(period - expected);
        rep.max_period_error = std::max(rep.max_period_error, err);
        if (err > tol || ch.deviation > 1e-9) rep.verdict = false;
    }
    return rep;
}

} // namespace thetabundle
