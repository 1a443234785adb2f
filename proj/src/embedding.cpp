#include "thetabundle/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "thetabundle/parallel.hpp"

namespace thetabundle {

ProjectivePoint phi_k(const Bundle& bundle, int k, const TotalPoint& p,
                      const TruncationPolicy& policy) {
    if (k < 1) throw std::invalid_argument("phi_k requires k >= 1");
    ProjectivePoint out(static_cast<std::size_t>(k) * k);
    double maxmag = 0.0;
    for (int pp = 0; pp < k; ++pp)
        for (int q = 0; q < k; ++q) {
            const cplx v = basis_section(bundle, {k, pp, q}, p, policy).value;
            out[static_cast<std::size_t>(pp) * k + q] = v;
            maxmag = std::max(maxmag, std::abs(v));
        }
    if (maxmag < 1e-13)
        throw AllSectionsVanish("phi_k: all sections vanish at the point");
    return out;
}

double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("fs_distance: dimension mismatch");
    cplx inner{};
    double np = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        inner += p[i] * std::conj(q[i]);
        np += std::norm(p[i]);
        nq += std::norm(q[i]);
    }
    if (np == 0.0 || nq == 0.0)
        throw std::invalid_argument("fs_distance: zero vector");
    const double c = std::clamp(std::abs(inner) / std::sqrt(np * nq), 0.0, 1.0);
    return std::acos(c);
}

EquivarianceReport equivariance_check(const Bundle& bundle, int k, Gen gen,
                                      const GridSpec& grid, const TruncationPolicy& policy,
                                      double scalar_tol) {
    EquivarianceReport rep;
    rep.generator = gen;
    const GroupElement g = to_element(gen);
    const int n = grid.n;
    double spread = 0.0;
    bool first = true;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int is = 0; is < n; ++is)
                for (int it = 0; it < n; ++it) {
                    const TotalPoint p{(ix + grid.offset) / n, (iy + grid.offset) / n,
                                       (is + grid.offset) / n, (it + grid.offset) / n};
                    const ProjectivePoint v = phi_k(bundle, k, p, policy);
                    const ProjectivePoint w =
                        phi_k(bundle, k, gamma_action(bundle, g, p), policy);
                    double vmax = 0.0;
                    for (const cplx& c : v) vmax = std::max(vmax, std::abs(c));
                    std::vector<cplx> ratios;
                    cplx mean{};
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (std::abs(v[i]) < 1e-8 * vmax) continue;
                        ratios.push_back(w[i] / v[i]);
                        mean += ratios.back();
                    }
                    if (ratios.empty()) continue;
                    mean /= static_cast<double>(ratios.size());
                    for (const cplx& r : ratios)
                        spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
                    if (first) {
                        rep.induced_ratios = ratios;
                        first = false;
                    }
                }
    rep.spread = spread;
    rep.is_projectively_scalar = spread < scalar_tol;
    return rep;
}

namespace {

std::vector<cplx> sections_at(const Bundle& bundle, int k, const TotalPoint& p,
                              const TruncationPolicy& policy) {
    std::vector<cplx> out(static_cast<std::size_t>(k) * k);
    for (int pp = 0; pp < k; ++pp)
        for (int q = 0; q < k; ++q)
            out[static_cast<std::size_t>(pp) * k + q] =
                basis_section(bundle, {k, pp, q}, p, policy).value;
    return out;
}

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

} // namespace

std::vector<std::vector<cplx>> jacobian_tilde(const Bundle& bundle, int k,
                                              const TotalPoint& p, double fd_step,
                                              const TruncationPolicy& policy) {
    const std::size_t n = static_cast<std::size_t>(k) * k;
    const cplx w = omega(bundle, p.x);
    const cplx i_unit(0.0, 1.0);

    std::vector<std::vector<cplx>> rows(5, std::vector<cplx>(n));
    rows[0] = sections_at(bundle, k, p, policy);

    std::array<std::vector<cplx>, 4> partial; // d/dx, d/dy, d/ds, d/dt
    for (int dir = 0; dir < 4; ++dir) {
        const std::vector<cplx> plus = sections_at(bundle, k, shifted(p, dir, fd_step), policy);
        const std::vector<cplx> minus = sections_at(bundle, k, shifted(p, dir, -fd_step), policy);
        partial[dir].resize(n);
        for (std::size_t j = 0; j < n; ++j)
            partial[dir][j] = (plus[j] - minus[j]) / (2.0 * fd_step);
    }
    for (std::size_t j = 0; j < n; ++j) {
        rows[1][j] = partial[0][j] - i_unit * partial[1][j];
        rows[2][j] = partial[2][j] + partial[3][j] / w;
        rows[3][j] = partial[0][j] + i_unit * partial[1][j];
        rows[4][j] = partial[2][j] - partial[3][j] / w;
    }
    return rows;
}

RankReport rank_check(const Bundle& bundle, int k, const TotalPoint& p, double tolerance,
                      const TruncationPolicy& policy, double fd_step) {
    RankReport rep;
    rep.point = p;
    const std::size_t n = static_cast<std::size_t>(k) * k;
    if (n == 1) return rep; // CP^0: the target is a point

    const std::vector<cplx> centre = sections_at(bundle, k, p, policy);
    double norm2 = 0.0;
    for (const cplx& c : centre) norm2 += std::norm(c);
    if (norm2 < 1e-26)
        throw AllSectionsVanish("rank_check: all sections vanish at the point");
    const double nrm = std::sqrt(norm2);

    Eigen::MatrixXd M(2 * static_cast<Eigen::Index>(n), 4);
    for (int dir = 0; dir < 4; ++dir) {
        const std::vector<cplx> plus = sections_at(bundle, k, shifted(p, dir, fd_step), policy);
        const std::vector<cplx> minus = sections_at(bundle, k, shifted(p, dir, -fd_step), policy);
        // u = (I - qq*) d_mu sigma / |sigma|
        cplx overlap{};
        std::vector<cplx> d(n);
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = (plus[j] - minus[j]) / (2.0 * fd_step);
            overlap += std::conj(centre[j]) * d[j];
        }
        overlap /= norm2;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx u = (d[j] - overlap * centre[j]) / nrm;
            M(static_cast<Eigen::Index>(j), dir) = u.real();
            M(static_cast<Eigen::Index>(n + j), dir) = u.imag();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    for (int i = 0; i < 4 && i < sv.size(); ++i) rep.singular_values[i] = sv(i);
    rep.rank_at_tol = 0;
    for (double s : rep.singular_values)
        if (s > tolerance) ++rep.rank_at_tol;
    return rep;
}

namespace {

// Canonical representative of p modulo Gamma with x, y in [0, 1): peel the
// a^na b^nb part, then reduce (s, t) modulo the fibre lattice.
std::array<double, 4> canonical_mod_gamma(const Bundle& bundle, const TotalPoint& p) {
    const double nx = std::floor(p.x + 1e-9);
    const double ny = std::floor(p.y + 1e-9);
    const Mat2i m = bundle.A().pow(-static_cast<long long>(nx))
                        .mul(bundle.B().pow(-static_cast<long long>(ny)));
    const auto st = m.apply(p.s, p.t);
    auto frac = [](double v) {
        double f = v - std::floor(v + 1e-9);
        if (f >= 1.0 - 1e-9) f = 0.0;
        return f;
    };
    return {frac(p.x), frac(p.y), frac(st[0]), frac(st[1])};
}

bool same_canonical(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    for (int i = 0; i < 4; ++i) {
        double d = std::abs(a[i] - b[i]);
        d = std::min(d, 1.0 - d); // coordinates live on the circle
        if (d > 1e-9) return false;
    }
    return true;
}

} // namespace

ScanResult injectivity_scan(const Bundle& bundle, int k, int grid_n,
                            const TruncationPolicy& policy, bool interior,
                            double collision_tol) {
    const double offset = interior ? 0.5 : 0.0;
    std::vector<TotalPoint> points;
    points.reserve(static_cast<std::size_t>(grid_n) * grid_n * grid_n * grid_n);
    for (int ix = 0; ix < grid_n; ++ix)
        for (int iy = 0; iy < grid_n; ++iy)
            for (int is = 0; is < grid_n; ++is)
                for (int it = 0; it < grid_n; ++it)
                    points.push_back({(ix + offset) / grid_n, (iy + offset) / grid_n,
                                      (is + offset) / grid_n, (it + offset) / grid_n});

    const std::size_t np = points.size();
    std::vector<ProjectivePoint> images(np);
    std::vector<std::array<double, 4>> canon(np);
    parallel_for(np, [&](std::size_t i) {
        canon[i] = canonical_mod_gamma(bundle, points[i]);
        try {
            ProjectivePoint v = phi_k(bundle, k, points[i], policy);
            double nrm = 0.0;
            for (const cplx& c : v) nrm += std::norm(c);
            nrm = std::sqrt(nrm);
            for (cplx& c : v) c /= nrm;
            images[i] = std::move(v);
        } catch (const AllSectionsVanish&) {
            // base-point of the system (possible only at k = 1); excluded
        }
    });

    // Pairwise distances; the reduction is serial and index-ordered so the
    // report does not depend on the thread count.
    const std::size_t dim = static_cast<std::size_t>(k) * k;
    std::vector<double> row_min(np, 4.0);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> row_coll(np);
    parallel_for(np, [&](std::size_t i) {
        if (images[i].empty()) return;
        for (std::size_t j = i + 1; j < np; ++j) {
            if (images[j].empty()) continue;
            if (same_canonical(canon[i], canon[j])) continue;
            cplx inner{};
            for (std::size_t q = 0; q < dim; ++q) inner += images[i][q] * std::conj(images[j][q]);
            const double dist = std::acos(std::clamp(std::abs(inner), 0.0, 1.0));
            row_min[i] = std::min(row_min[i], dist);
            if (dist < collision_tol) row_coll[i].emplace_back(i, j);
        }
    });

    ScanResult out;
    out.min_offdiagonal_fs_distance = 4.0;
    for (std::size_t i = 0; i < np; ++i) {
        out.min_offdiagonal_fs_distance = std::min(out.min_offdiagonal_fs_distance, row_min[i]);
        for (const auto& pr : row_coll[i]) out.collisions.push_back(pr);
    }
    if (out.min_offdiagonal_fs_distance > 3.0) out.min_offdiagonal_fs_distance = 0.0;
    return out;
}

} // namespace thetabundle
