#ifndef THETABUNDLE_ERRORS_HPP
#define THETABUNDLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thetabundle {

struct InvalidTau : std::domain_error {
    explicit InvalidTau(const std::string& what) : std::domain_error(what) {}
};

struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct SampleAtZero : std::runtime_error {
    explicit SampleAtZero(const std::string& what) : std::runtime_error(what) {}
};

struct ContourThroughZero : std::runtime_error {
    explicit ContourThroughZero(const std::string& what) : std::runtime_error(what) {}
};

struct Unclassified : std::domain_error {
    explicit Unclassified(const std::string& what) : std::domain_error(what) {}
};

struct NonRealPower : std::domain_error {
    explicit NonRealPower(const std::string& what) : std::domain_error(what) {}
};

struct NearZeroBase : std::runtime_error {
    explicit NearZeroBase(const std::string& what) : std::runtime_error(what) {}
};

struct ConstraintViolated : std::domain_error {
    explicit ConstraintViolated(const std::string& what) : std::domain_error(what) {}
};

struct AllSectionsVanish : std::runtime_error {
    explicit AllSectionsVanish(const std::string& what) : std::runtime_error(what) {}
};

struct ChartDegenerate : std::runtime_error {
    explicit ChartDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct BranchAmbiguous : std::runtime_error {
    explicit BranchAmbiguous(const std::string& what) : std::runtime_error(what) {}
};

} // namespace thetabundle

#endif
