#ifndef THETABUNDLE_SYMPLECTIC_HPP
#define THETABUNDLE_SYMPLECTIC_HPP

// Theorem 2 apparatus: pull the Fubini-Study forms back through the factor
// maps
//     psi'_k(x,s,t) = [theta_k^0(s + omega t, omega) : ... ],
//     psi''_k(x,y)  = [theta_k^0(x + iy, i) : ... ],
// certify non-degeneracy (Pfaffian) and closedness, integrate periods over
// the coordinate 2-tori, and evaluate the first Chern class through the
// four-term multiplier-logarithm pairing.
//
// The FS form is normalized so that a projective line has area 1.  In an
// affine chart w with metric g_{ij} = ((1+|w|^2) delta_ij - conj(w_i) w_j)
// / (1+|w|^2)^2 the pullback evaluates as
//     Omega(e_a, e_b) = -(1/pi) Im sum_ij g_{ij} (d_a w_i) conj(d_b w_j),
// the sign fixed by positivity of the periods over the holomorphic factors.

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "thetabundle/bundle.hpp"
#include "thetabundle/sections.hpp"

namespace thetabundle {

// Antisymmetric 4x4 matrix of a 2-form at a point, coordinate order (x,y,s,t).
struct TwoFormMatrix {
    std::array<std::array<double, 4>, 4> m{};
    double entry(int i, int j) const { return m[i][j]; }
    void set(int i, int j, double v) {
        m[i][j] = v;
        m[j][i] = -v;
    }
};

// The reference symplectic form omega_M = dx^dy + ds^dt.
TwoFormMatrix reference_form();

struct CycleSpec {
    Gen g1 = Gen::c;
    Gen g2 = Gen::d;
    TotalPoint base{};
};

struct ChernEvaluation {
    CycleSpec cycle;
    double value = 0.0;
    long long nearest_integer = 0;
    double deviation = 0.0;
};

// Pullback psi_k^*(Omega' + Omega'') at p, partials by central differences of
// step fd_step (the chart pivot per factor is frozen across the stencil).
TwoFormMatrix fs_pullback(const Bundle& bundle, int k, const TotalPoint& p,
                          double fd_step, const TruncationPolicy& policy);

// Single entry Omega(e_i, e_j); cheaper than the full matrix when only one
// component is integrated.
double fs_pullback_entry(const Bundle& bundle, int k, const TotalPoint& p,
                         int i, int j, double fd_step, const TruncationPolicy& policy);

// Pfaffian M01 M23 - M02 M13 + M03 M12; nonzero iff the form is
// non-degenerate.  Validates antisymmetry and the identity Pf^2 = det.
double nondegeneracy_check(const TwoFormMatrix& form);

// max over the four components of d(pullback) by central differences of step
// fd_step, divided by max(1, largest pullback entry at p).
double closedness_residual(const Bundle& bundle, int k, const TotalPoint& p,
                           double fd_step, const TruncationPolicy& policy);

// Trapezoidal integral of the pullback over the coordinate 2-torus spanned by
// the cycle's generators (a<->x, b<->y, c<->s, d<->t) through the base point.
// Expected value: k times the reference period.
double period_integral(const Bundle& bundle, int k, const CycleSpec& cycle,
                       int resolution, const TruncationPolicy& policy);

// Same integral for the reference form omega_M (exact up to quadrature).
double period_integral_reference(const CycleSpec& cycle, int resolution);

// c1([T_{g1 g2}]) = f_{g2}(u) + f_{g1}(g2.u) - f_{g1}(u) - f_{g2}(g1.u), with
// f_g the continuous logarithm branches of the closed-form multipliers:
//   f_c = 1/2
//   f_d = 1/2 - (s + omega t) - omega/2
//   f_b = [1/2 if B = I] - (x + iy) - i/2
//   f_a = Log(zeta)/(2 pi i) + Log(-gamma omega + delta)/(4 pi i)
//         - gamma (s + omega t)^2 / (2 (-gamma omega + delta))
// The generators must commute in Gamma for the given bundle.
ChernEvaluation chern_pairing(const Bundle& bundle, const CycleSpec& cycle,
                              const TotalPoint& p, const TruncationPolicy& policy);

struct CohomologyReport {
    std::map<std::string, double> periods;       // per cycle, pullback
    std::map<std::string, long long> chern;      // per cycle, integer pairing
    std::map<std::string, double> expected;      // k * chern
    bool verdict = false;
    bool degenerate = false; // k = 1: both factors land in CP^0
    double max_period_error = 0.0;
};

// Aggregates period integrals and Chern pairings over T_ab, T_cd (plus T_bd,
// T_ac for the Kodaira-Thurston type C) and compares them within tol.
CohomologyReport cohomology_class_report(const Bundle& bundle, int k, int resolution,
                                         const TruncationPolicy& policy,
                                         double tol = 1e-4);

} // namespace thetabundle

#endif
