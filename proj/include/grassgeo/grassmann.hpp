#pragma once

// Charts, frames and geodesics on the complex Grassmannian G_n(C^{n+m}) and its
// noncompact dual, the bounded domain of n x m matrices with ||Z||_2 < 1.
//
// Conventions used throughout:
//   * a chart point Z (n x m) is the plane spanned by the columns of [I_n ; Z^H];
//   * a tangent vector B (n x m) is in normal coordinates at the origin plane
//     O = span(e_1, ..., e_n);
//   * J = diag(I_n, -I_m); noncompact frames satisfy F^H J F = I_n.

#include <span>
#include <vector>

#include "grassgeo/numeric.hpp"

namespace grassgeo {

enum class Curvature { Compact = 1, Noncompact = -1 };

struct GrassmannSpace {
    GrassmannSpace(int n, int m, Curvature curvature = Curvature::Compact);

    int n;
    int m;
    Curvature curvature;

    int ambient_dim() const { return n + m; }
    int rank() const { return n < m ? n : m; }
    bool compact() const { return curvature == Curvature::Compact; }
    double epsilon() const { return compact() ? 1.0 : -1.0; }

    friend bool operator==(const GrassmannSpace&, const GrassmannSpace&) = default;
};

class ChartPoint {
public:
    ChartPoint(GrassmannSpace space, ComplexMatrix Z);

    const GrassmannSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return Z_; }

private:
    GrassmannSpace space_;
    ComplexMatrix Z_;
};

class TangentVector {
public:
    TangentVector(GrassmannSpace space, ComplexMatrix B);

    const GrassmannSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return B_; }
    double norm() const { return B_.norm(); }

    TangentVector scaled(double t) const { return TangentVector(space_, B_ * t); }

private:
    GrassmannSpace space_;
    ComplexMatrix B_;
};

/// (n+m) x n basis of a plane: orthonormal columns in the compact case,
/// J-orthonormal columns in the noncompact case (checked to 1e-10, relative).
class Frame {
public:
    Frame(GrassmannSpace space, ComplexMatrix F);

    /// Normalizes an arbitrary full-rank basis without changing its span
    /// (polar factor; J-polar factor for the noncompact dual).
    static Frame orthonormalized(const GrassmannSpace& space, const ComplexMatrix& raw);

    const GrassmannSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return F_; }

    /// Orthogonal projection F F^H (compact) or J-projection F F^H J (noncompact).
    ComplexMatrix projection() const;

private:
    GrassmannSpace space_;
    ComplexMatrix F_;
};

ComplexMatrix signature_matrix(const GrassmannSpace& space);
Frame origin_frame(const GrassmannSpace& space);
ChartPoint origin_point(const GrassmannSpace& space);

/// Principal angles between two compact frames, nondecreasing in [0, pi/2].
std::vector<double> principal_angles(const Frame& a, const Frame& b);

/// Hyperbolic stationary angles of two noncompact frames: the singular values
/// of the chart image of `b` after transporting `a` to the origin, mapped by artanh.
std::vector<double> hyperbolic_angles(const Frame& a, const Frame& b);

Frame frame_of_chart(const ChartPoint& p);

/// Inverse chart map, Z^H = F_bottom F_top^{-1}. Throws OnPolarDivisor when the
/// top block is singular (smallest singular value below 1e-12).
ChartPoint chart_of_frame(const Frame& F);

/// Z = B ta(sqrt(B^H B)) / sqrt(B^H B), ta = tan (compact) or tanh (noncompact).
/// Throws ConjugateToChart when a singular value of B sits at pi/2 mod pi;
/// exp0_frame is defined there.
ChartPoint exp0(const TangentVector& B);

/// Chart-free exponential [co sqrt(BB^H) ; si(sqrt(B^H B))/sqrt(B^H B) B^H].
Frame exp0_frame(const TangentVector& B);

/// Principal-branch logarithm: arctan (compact) or artanh (noncompact) applied
/// spectrally. Compact results have every singular value in [0, pi/2).
TangentVector log0(const ChartPoint& p);

/// Integrates Z'' - 2 eps Z' Z^H (I + eps Z Z^H)^{-1} Z' = 0 with Z(0) = 0,
/// Z'(0) = B, using `steps` classical RK4 steps on [0, t].
ChartPoint geodesic_ode(const TangentVector& B, double t, int steps);

/// A unitary (compact) or J-unitary (noncompact) (n+m) x (n+m) matrix.
class Isometry {
public:
    Isometry(GrassmannSpace space, ComplexMatrix g);

    const GrassmannSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return g_; }

    Frame apply(const Frame& F) const;

private:
    GrassmannSpace space_;
    ComplexMatrix g_;
};

/// Isometry taking the plane of p to O.
Isometry transport_to_origin(const ChartPoint& p);

/// Geodesic distance. Chart points are transported so p1 sits at the origin
/// and the norm of log0 of the image is returned; compact images on the polar
/// divisor fall back to the principal-angle formula.
double distance(const ChartPoint& p1, const ChartPoint& p2);
double distance(const Frame& a, const Frame& b);

/// Coordinates of the plane of F in the chart centred at the coordinate plane
/// spanned by `rows` (0-based, n distinct indices). Compact only.
ChartPoint chart_transition(const Frame& F, std::span<const int> rows);

/// Inverse of chart_transition: orthonormal frame of the point with
/// coordinates p in the chart centred at `rows`.
Frame frame_of_chart_at(const ChartPoint& p, std::span<const int> rows);

}  // namespace grassgeo
