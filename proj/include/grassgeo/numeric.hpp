#pragma once

// Dense complex linear algebra shared by the geometry modules: thin SVD,
// tolerant rank, matrix functions evaluated through singular values, and
// principal angles between subspaces.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace grassgeo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr double kOrthonormalTol = 1e-8;

struct SvdResult {
    ComplexMatrix U;             // rows x k, orthonormal columns
    RealVector singular_values;  // k = min(rows, cols), nonincreasing
    ComplexMatrix V;             // cols x k, orthonormal columns
};

/// Thin SVD, M = U diag(s) V^H.
SvdResult svd(const ComplexMatrix& M);

/// Evaluates U f(S) V^H for B = U S V^H.
///
/// This is the matrix B f(sqrt(B^H B)) / sqrt(B^H B) whenever f(0) = 0, which
/// is how every tan/tanh/sin/sinh/arctan/artanh map in the library is applied.
/// Zero singular values contribute f(0) times a rank-one term, so callers pass
/// odd functions. Throws Singularity when f is not finite at some singular value.
ComplexMatrix apply_spectral(const ComplexMatrix& B, const std::function<double(double)>& f);

/// g(sqrt(B B^H)) as an rows x rows Hermitian matrix. The orthogonal complement
/// of the column space of B is scaled by g(0).
ComplexMatrix left_gram_function(const ComplexMatrix& B, const std::function<double(double)>& g);

/// g(sqrt(B^H B)) as a cols x cols Hermitian matrix.
ComplexMatrix right_gram_function(const ComplexMatrix& B, const std::function<double(double)>& g);

/// Number of singular values above tol * max(1, largest singular value).
int rank_tol(const ComplexMatrix& M, double tol = kDefaultRankTol);

/// Largest entry of |F^H F - I|.
double gram_deviation(const ComplexMatrix& F);

bool all_finite(const ComplexMatrix& M);

/// Jordan's stationary angles between the column spans of F1 and F2, both with
/// orthonormal columns. Sorted nondecreasing, each in [0, pi/2].
///
/// Cosines come from sigma(F1^H F2) and sines from sigma((I - F1 F1^H) F2); the
/// pair is combined with atan2 so angles near 0 keep full precision.
std::vector<double> principal_angles(const ComplexMatrix& F1, const ComplexMatrix& F2);

}  // namespace grassgeo
