#ifndef THETABUNDLE_EMBEDDING_HPP
#define THETABUNDLE_EMBEDDING_HPP

// The projective map phi_k : M -> CP^{k^2-1} assembled from the degree-k
// basis sections in (p,q) lexicographic order, with numerical rank
// certification, equivariance reporting and injectivity scans.

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "thetabundle/bundle.hpp"
#include "thetabundle/sections.hpp"

namespace thetabundle {

using ProjectivePoint = std::vector<cplx>; // homogeneous, not all zero

struct RankReport {
    TotalPoint point;
    std::array<double, 4> singular_values{}; // descending
    int rank_at_tol = 0;
};

struct EquivarianceReport {
    Gen generator = Gen::c;
    std::vector<cplx> induced_ratios; // coordinatewise ratios at the first grid point
    bool is_projectively_scalar = false;
    double spread = 0.0;
};

struct GridSpec {
    int n = 3;           // points per dimension
    double offset = 0.2; // coordinate j -> (j + offset) / n
};

struct ScanResult {
    double min_offdiagonal_fs_distance = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> collisions;
};

ProjectivePoint phi_k(const Bundle& bundle, int k, const TotalPoint& p,
                      const TruncationPolicy& policy);

// Fubini-Study distance arccos(|<P,Q>| / (|P| |Q|)) in [0, pi/2].
double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q);

// Descriptive: whether the generator action induces a common scalar on the
// phi_k coordinates over the grid.  Near-zero denominators are skipped.
EquivarianceReport equivariance_check(const Bundle& bundle, int k, Gen gen,
                                      const GridSpec& grid, const TruncationPolicy& policy,
                                      double scalar_tol = 1e-7);

// 5 x k^2 matrix: row 0 section values, rows 1-4 the combinations
// (dx - i dy), (ds + dt/omega), (dx + i dy), (ds - dt/omega) by central
// differences; the last row vanishes identically.
std::vector<std::vector<cplx>> jacobian_tilde(const Bundle& bundle, int k,
                                              const TotalPoint& p, double fd_step,
                                              const TruncationPolicy& policy);

// Singular values of the Fubini-Study differential of phi_k, computed from
// the real 2k^2 x 4 matrix of projected coordinate derivatives
// (I - qq*) d_mu sigma / |sigma|.  These equal the singular values of the
// affine-chart Jacobian measured in the FS metric and do not depend on the
// pivot; rank_at_tol counts values above the absolute tolerance.
RankReport rank_check(const Bundle& bundle, int k, const TotalPoint& p, double tolerance,
                      const TruncationPolicy& policy, double fd_step = 1e-5);

// Pairwise FS distances between phi_k images of a grid_n^4 grid on the
// fundamental cube. interior = true uses offsets (j + 1/2)/n.  Pairs whose
// base points agree modulo the Gamma identification are excluded; pairs below
// collision_tol are reported, not thrown.
ScanResult injectivity_scan(const Bundle& bundle, int k, int grid_n,
                            const TruncationPolicy& policy, bool interior = false,
                            double collision_tol = 1e-6);

} // namespace thetabundle

#endif
