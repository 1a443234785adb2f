#ifndef THETABUNDLE_CHECKS_HPP
#define THETABUNDLE_CHECKS_HPP

// Named verification suites shared by the CLI driver and the acceptance
// harness.  Every check is deterministic given the config and seed.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thetabundle/theta.hpp"

namespace thetabundle {

struct RunConfig {
    std::string bundle_spec = "C:1";
    int k = 3;
    TruncationPolicy policy{};
    cplx tau{0.0, 1.0};      // theta suite
    double fd_step = 1e-5;   // first-order stencils
    double closedness_step = 1e-3;
    int grid = 5;            // per-dimension grid (multiplier / pfaffian suites)
    int scan_grid = 6;       // injectivity scan
    bool scan_interior = false;
    int rank_points = 100;
    int resolution = 200;    // period quadrature
    std::uint64_t seed = 12345;
    double tau_im_floor = 0.05;
    std::map<std::string, double> tol; // overrides of the named defaults

    double tolerance(const std::string& name) const;
};

// Named tolerance defaults (quasi, modular, heat, multiplier, cocycle,
// product, negative_control, ku, ku_stress, rank, collision, equivariance,
// stability, pfaffian, closedness, period, chern, lemma, relations).
const std::map<std::string, double>& default_tolerances();

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;     // measured quantity
    double tolerance = 0.0; // threshold it was compared against
    std::string details;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

SuiteReport run_theta_suite(const RunConfig& cfg);
SuiteReport run_bundle_suite(const RunConfig& cfg);
SuiteReport run_section_suite(const RunConfig& cfg);
SuiteReport run_embed_suite(const RunConfig& cfg);
SuiteReport run_symplectic_suite(const RunConfig& cfg);

} // namespace thetabundle

#endif
