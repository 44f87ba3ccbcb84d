#pragma once

// Coherent-state overlaps for the determinant representation of the
// Grassmannian: reproducing kernel, Cayley distance, Calabi diastasis,
// Plucker coordinates, and the Berezin energy function of a diagonal
// Hamiltonian together with its critical points.

#include <vector>

#include "grassgeo/grassmann.hpp"

namespace grassgeo {

struct OverlapValue {
    Complex raw;         // K(Z1, Z2)
    Complex normalized;  // K(Z1, Z2) / sqrt(K(Z1, Z1) K(Z2, Z2))
};

/// Diagonal Hamiltonian weights, one per ambient coordinate.
class EnergySpec {
public:
    explicit EnergySpec(std::vector<double> eps);

    const std::vector<double>& eps() const { return eps_; }
    std::size_t size() const { return eps_.size(); }

    /// True when every pair differs by at least 1e-6 * max(1, max |eps|).
    bool distinct() const;

private:
    std::vector<double> eps_;
};

struct PluckerVector {
    int n = 0;
    int ambient = 0;
    std::vector<std::vector<int>> subsets;  // lexicographic, 0-based
    std::vector<Complex> components;

    /// Hermitian product, antilinear in *this.
    Complex inner(const PluckerVector& other) const;
    double norm() const;
    /// Component for a subset (0-based, ascending); throws when absent.
    Complex at(const std::vector<int>& subset) const;
};

/// All k-element subsets of {0, ..., total-1} in lexicographic order.
std::vector<std::vector<int>> index_subsets(int total, int k);

/// Compact: det(I + Z1 Z2^H). Noncompact: det(I - Z1 Z2^H)^{-1}.
Complex kernel(const ChartPoint& a, const ChartPoint& b);

OverlapValue normalized_overlap(const ChartPoint& a, const ChartPoint& b);

/// arccos |normalized overlap|. Compact spaces only.
double cayley_distance(const ChartPoint& a, const ChartPoint& b);
/// Same distance between orthonormal frames, arccos |det(F1^H F2)|; defined on
/// the polar divisor too.
double cayley_distance(const Frame& a, const Frame& b);

/// D = -2 log |normalized overlap|; throws DiastasisUndefined when the overlap
/// vanishes (b on the polar divisor of a).
double diastasis(const ChartPoint& a, const ChartPoint& b);

/// Minors of the rows of F (lexicographic subsets, ascending row order).
PluckerVector plucker_minors(const ComplexMatrix& F, int n);
PluckerVector plucker_embed(const Frame& F);

/// <P(F1), P(F2)> / (|P(F1)| |P(F2)|), evaluated from explicit minors.
Complex plucker_overlap_oracle(const Frame& a, const Frame& b);

/// Frame of the coordinate plane spanned by e_i, i in `subset` (0-based).
Frame coordinate_plane(const GrassmannSpace& space, const std::vector<int>& subset);

/// trace(diag(eps) F F^H).
double energy(const EnergySpec& spec, const Frame& F);

/// Real gradient of Z -> trace(A P(Z)) in chart coordinates, packed as
/// G_ij = df/dRe Z_ij + i df/dIm Z_ij. A must be Hermitian (n+m) x (n+m).
ComplexMatrix energy_gradient(const ComplexMatrix& A, const ChartPoint& p);
ComplexMatrix energy_gradient(const EnergySpec& spec, const ChartPoint& p);

struct CriticalPoint {
    std::vector<int> subset;
    Frame frame;
    double value;
    double gradient_norm;  // measured in a generic rotated chart
};

/// The C(n+m, n) coordinate planes, each confirmed critical (gradient norm
/// below 1e-8 in a chart where the plane is not the chart origin).
std::vector<CriticalPoint> critical_points(const GrassmannSpace& space, const EnergySpec& spec);

}  // namespace grassgeo
