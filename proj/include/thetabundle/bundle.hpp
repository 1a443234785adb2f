#ifndef THETABUNDLE_BUNDLE_HPP
#define THETABUNDLE_BUNDLE_HPP

// T^2-bundles over T^2 with zero Euler class: the classified monodromy pairs
// {A, B}, the lattice Gamma acting on the universal cover R^4, the fibre
// period omega(x), and the left-invariant coframe A^{-x} B^{-y} (ds, dt).
//
// Gamma is generated by (B = I case)
//   a: (x+1, y, alpha*s + beta*t, gamma*s + delta*t)
//   b: (x, y+1, s, t)            (or (x, y+1, -s, -t) when B = -I)
//   c: (x, y, s+1, t)
//   d: (x, y, s, t+1)
// with relations [a,c] = c^{1-delta} d^{gamma}, [a,d] = c^{beta} d^{1-alpha}.

#include <array>
#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "thetabundle/errors.hpp"
#include "thetabundle/theta.hpp"

namespace thetabundle {

struct Mat2i {
    long long a = 1, b = 0, c = 0, d = 1; // row major: (a b; c d)

    long long det() const { return a * d - b * c; }
    long long trace() const { return a + d; }
    Mat2i mul(const Mat2i& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2i inv() const { return {d, -b, -c, a}; } // valid for det = 1
    Mat2i pow(long long n) const;
    bool operator==(const Mat2i& o) const = default;
    std::array<double, 2> apply(double s, double t) const {
        return {static_cast<double>(a) * s + static_cast<double>(b) * t,
                static_cast<double>(c) * s + static_cast<double>(d) * t};
    }
    static Mat2i identity() { return {1, 0, 0, 1}; }
    static Mat2i minus_identity() { return {-1, 0, 0, -1}; }
};

struct MonodromyPair {
    Mat2i A, B;
    MonodromyPair(Mat2i a_, Mat2i b_) : A(a_), B(b_) {
        if (A.det() != 1 || B.det() != 1)
            throw std::invalid_argument("monodromy matrices must lie in SL(2,Z)");
        if (!(A.mul(B) == B.mul(A)))
            throw std::invalid_argument("monodromy matrices must commute");
    }
};

enum class BundleTag { A, B1, B2, B3, B4, C, D, E, F, G };

std::string to_string(BundleTag tag);

struct BundleType {
    BundleTag tag;
    int k = 0; // parameter for C, D, E; 0 otherwise
};

// Eigen-data of A^T for hyperbolic A with tr A > 2, normalized so that
// u_plus*v_minus - u_minus*v_plus = 1 (this makes Im omega > 0).
struct HyperbolicData {
    double lambda; // > 1
    double u_plus, v_plus, u_minus, v_minus;
};

HyperbolicData make_hyperbolic_data(const Mat2i& A);

struct TotalPoint {
    double x = 0, y = 0, s = 0, t = 0;
};

// Element of Gamma in the normal form a^{na} b^{nb} c^{nc} d^{nd}.
struct GroupElement {
    long long na = 0, nb = 0, nc = 0, nd = 0;
    bool is_identity() const { return na == 0 && nb == 0 && nc == 0 && nd == 0; }
    static GroupElement identity() { return {}; }
    static GroupElement gen_a(long long n = 1) { return {n, 0, 0, 0}; }
    static GroupElement gen_b(long long n = 1) { return {0, n, 0, 0}; }
    static GroupElement gen_c(long long n = 1) { return {0, 0, n, 0}; }
    static GroupElement gen_d(long long n = 1) { return {0, 0, 0, n}; }
};

BundleType classify(const MonodromyPair& pair);

// Classified bundle together with its working data.  Copies share the
// write-once cache used by the section multipliers.
struct ZetaCache {
    std::once_flag once;
    cplx value{};
};

class Bundle {
  public:
    static Bundle from_pair(const MonodromyPair& pair);
    // Canonical table representative; k used by C/D/E (must be nonzero there).
    // F and G use A = (2,1;1,1).
    static Bundle from_tag(BundleTag tag, int k = 1);

    BundleTag tag() const { return type_.tag; }
    BundleType type() const { return type_; }
    int param_k() const { return type_.k; }
    const Mat2i& A() const { return A_; }
    const Mat2i& B() const { return B_; }
    bool b_is_minus() const { return B_ == Mat2i::minus_identity(); }
    // A = (alpha beta; gamma delta)
    long long alpha() const { return A_.a; }
    long long beta() const { return A_.b; }
    long long gamma() const { return A_.c; }
    long long delta() const { return A_.d; }
    const std::optional<HyperbolicData>& hyperbolic() const { return hyp_; }
    ZetaCache& zeta_cache() const { return *zeta_; }
    std::string name() const;

  private:
    Bundle(BundleType type, Mat2i A, Mat2i B);
    BundleType type_;
    Mat2i A_, B_;
    std::optional<HyperbolicData> hyp_;
    std::shared_ptr<ZetaCache> zeta_;
};

// Group law in normal form:
// (g h) has exponents (na+ma, nb+mb, A^{-ma} B^{-mb} (nc,nd) + (mc,md)).
GroupElement compose(const Bundle& bundle, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const Bundle& bundle, const GroupElement& g);

// g . p = (x + na, y + nb, A^{na} B^{nb} (s + nc, t + nd)).
TotalPoint gamma_action(const Bundle& bundle, const GroupElement& g, const TotalPoint& p);

// Fibre period omega(x); Im omega > 0 for every bundle (Lemma 1).
// Table: A -> i (convention), B1/B3 -> (-1+sqrt(3)i)/2, B2/B4 -> i,
// C/E -> -k*x + i, D -> k*x + i,
// F/G -> (lambda^{-x} v+ + i lambda^{x} v-) / (lambda^{-x} u+ + i lambda^{x} u-).
cplx omega(const Bundle& bundle, double x);

struct OmegaTransformResult {
    double residual_omega;
    double residual_z;
};

// Lemma 2: omega(x+1) = (alpha*omega - beta)/(-gamma*omega + delta) and
// s' + omega(x+1) t' = (s + omega t)/(-gamma*omega + delta) for (s',t') = A(s,t).
OmegaTransformResult omega_transform_check(const Bundle& bundle, const TotalPoint& p);

using Mat2d = std::array<std::array<double, 2>, 2>;

// M(x,y) = A^{-x} B^{-y} with (omega_1, omega_2)^T = M (ds, dt)^T.
// Real powers exist for unipotent A (exact, I - x(A - I)) and hyperbolic A
// with tr A > 2 (via HyperbolicData); elsewhere integer exponents only.
Mat2d left_invariant_coframe(const Bundle& bundle, double x, double y);

} // namespace thetabundle

#endif
