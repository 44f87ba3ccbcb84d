#pragma once

// Cut locus, polar divisor, conjugate locus and Schubert conditions for the
// origin plane O = span(e_1, ..., e_n) of G_n(C^{n+m}).

#include <optional>
#include <vector>

#include "grassgeo/grassmann.hpp"

namespace grassgeo {

inline constexpr double kDefaultLocusTol = 1e-9;
inline constexpr double kDefaultAngleTol = 1e-6;
inline constexpr double kDefaultConjugateTol = 1e-3;

// ---------------------------------------------------------------------------
// Cut locus / polar divisor

/// True iff the plane of F lies on the polar divisor of O, which is also the
/// cut locus of O. Evaluates both |det(F_O^H F)| < tol and cos(theta_max) < tol
/// (largest principal angle within ~tol of pi/2); throws Consistency if they
/// disagree.
bool cut_locus_test(const Frame& F, double tol = kDefaultLocusTol);

struct DecompositionResult {
    enum class Branch { Chart, PolarDivisor, NearDivisor };
    Branch branch;
    double det_modulus;   // |det(F_O^H F)|
    double min_singular;  // cos of the largest principal angle with O
    std::optional<ChartPoint> chart;
};

/// Places F in exactly one piece of M = V_0 u Sigma_0. Determinants in
/// [tol, 10 tol) are reported as NearDivisor with both measurements.
DecompositionResult disjoint_union_check(const Frame& F, double tol = kDefaultLocusTol);

// ---------------------------------------------------------------------------
// Tangent conjugate locus

/// Unit direction in the maximal flat, r = min(n, m) components.
class CartanVector {
public:
    explicit CartanVector(std::vector<double> h);
    static CartanVector normalized(std::vector<double> raw);

    const std::vector<double>& values() const { return h_; }
    std::size_t size() const { return h_.size(); }

private:
    std::vector<double> h_;
};

enum class ConjugateFamily { T1, T2, T3 };

struct ConjugateSource {
    ConjugateFamily family;
    int p;          // 0-based
    int q;          // 0-based, T1 only (-1 otherwise)
    int sign;       // +1 for |h_p + h_q|, -1 for |h_p - h_q|; 0 for T2/T3
    int lambda;
    int multiplicity;
};

/// A predicted conjugate parameter; coincident predictions are merged and
/// their multiplicities summed.
struct ConjugateTime {
    double t;
    int multiplicity;
    std::vector<ConjugateSource> sources;

    ConjugateFamily family() const { return sources.front().family; }
};

/// Conjugate parameters along Exp(t H), t <= t_max:
///   T1 = lambda pi / |h_p +- h_q| (mult 2), T2 = lambda pi / (2 |h_p|) (mult 1),
///   T3 = lambda pi / |h_p| (mult 2|m - n|, only when n != m).
/// Vanishing denominators contribute nothing. The noncompact dual has no
/// conjugate points, so the list is empty there.
std::vector<ConjugateTime> tangent_conjugate_times(const GrassmannSpace& space, const CartanVector& h,
                                                   double t_max);

/// n x m matrix with B_ii = h_i.
TangentVector cartan_to_tangent(const GrassmannSpace& space, const CartanVector& h);

/// Smallest singular value of the real Jacobian of B' -> P(Exp_o(B')) at
/// B' = tB, divided by the largest singular value. P is the (J-)projection
/// F F^H (J), so the measurement is independent of frame gauge and chart.
/// Central differences with step fd_step in [1e-7, 1e-3].
double dexp_min_singular(const TangentVector& B, double t, double fd_step = 1e-5);

/// dexp_min_singular(B, t) < tol. Throws Precondition for B = 0.
bool is_conjugate(const TangentVector& B, double t, double tol = kDefaultConjugateTol, double fd_step = 1e-5);

struct ScanPoint {
    double t;
    double min_singular_normalized;
    bool predicted;  // within `window` of a predicted conjugate time
};

/// Samples dexp_min_singular along cartan_to_tangent(h) at t_k = k t_max / points,
/// k = 1..points.
std::vector<ScanPoint> conjugate_scan(const GrassmannSpace& space, const CartanVector& h, double t_max,
                                      int points, double fd_step = 1e-5, double window = 1e-2);

// ---------------------------------------------------------------------------
// Schubert conditions

/// Orthonormal basis of C^{n+m}; C^p is the span of the first p columns.
class Flag {
public:
    explicit Flag(ComplexMatrix basis);

    /// C^p = span(e_1, ..., e_p); in particular C^n = O.
    static Flag standard(const GrassmannSpace& space);
    /// e_{n+1}, ..., e_{n+m}, e_1, ..., e_n; in particular C^m = O^perp.
    static Flag complement_first(const GrassmannSpace& space);

    const ComplexMatrix& basis() const { return basis_; }
    ComplexMatrix subspace(int p) const { return basis_.leftCols(p); }

private:
    ComplexMatrix basis_;
};

class SchubertSymbol {
public:
    /// omega: n nondecreasing integers in [0, m].
    SchubertSymbol(std::vector<int> omega, int m);

    const std::vector<int>& omega() const { return omega_; }
    int n() const { return static_cast<int>(omega_.size()); }
    int m() const { return m_; }
    /// sigma(i) = omega(i) + i, 1-based i.
    std::vector<int> sigma() const;
    /// Jump positions i_1 < ... < i_l = n (1-based): omega(i_h) < omega(i_h + 1).
    std::vector<int> jumps() const;
    /// Complex dimension of the cell, sum of omega.
    int dimension() const;

    friend bool operator==(const SchubertSymbol&, const SchubertSymbol&) = default;

private:
    std::vector<int> omega_;
    int m_;
};

/// omega^p_l = (p - l, ..., p - l [l times], m, ..., m [n - l times]).
SchubertSymbol wong_symbol(int p, int l, int n, int m);

/// dim(X cap C^p) for p = 1..n+m, via n + p - rank([F | C^p]).
std::vector<int> schubert_dims(const Frame& F, const Flag& flag, double tol = kDefaultRankTol);

struct SchubertMembership {
    bool in_Z;     // dim(X cap C^{sigma(i)}) >= i for all i
    bool generic;  // equality at every jump
};

SchubertMembership schubert_membership(const Frame& F, const SchubertSymbol& symbol, const Flag& flag,
                                       double tol = kDefaultRankTol);

// ---------------------------------------------------------------------------
// Conjugate-locus strata and isoclinic planes

/// Angle reading of C^W_0: more than max(0, n - m) zero angles with O, or at
/// least one right angle.
bool conjugate_stratum_W(const Frame& F, double tol = kDefaultAngleTol);

/// At least two principal angles with O coincide. A necessary condition for
/// C^I_0, not a full membership test.
bool conjugate_stratum_I(const Frame& F, double tol = kDefaultAngleTol);

/// All principal angles between the two planes are equal.
bool isoclinic_test(const Frame& a, const Frame& b, double tol = kDefaultAngleTol);

}  // namespace grassgeo
