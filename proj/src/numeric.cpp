#include "grassgeo/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grassgeo/errors.hpp"

namespace grassgeo {

namespace {

std::string dims(const ComplexMatrix& M) {
    std::ostringstream os;
    os << M.rows() << "x" << M.cols();
    return os.str();
}

}  // namespace

bool all_finite(const ComplexMatrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag())) return false;
        }
    }
    return true;
}

SvdResult svd(const ComplexMatrix& M) {
    if (!all_finite(M)) {
        throw Error(ErrorKind::Precondition, "svd: non-finite entry in " + dims(M) + " matrix");
    }
    Eigen::JacobiSVD<ComplexMatrix> solver(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    if (!all_finite(out.U) || !all_finite(out.V) || !out.singular_values.allFinite()) {
        throw Error(ErrorKind::NumericalFailure, "svd did not converge for " + dims(M) + " matrix");
    }
    return out;
}

ComplexMatrix apply_spectral(const ComplexMatrix& B, const std::function<double(double)>& f) {
    const SvdResult d = svd(B);
    const Eigen::Index k = d.singular_values.size();
    RealVector fs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double s = d.singular_values(i);
        const double v = f(s);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os.precision(17);
            os << "apply_spectral: function undefined at singular value " << s;
            throw Error(ErrorKind::Singularity, os.str(), s);
        }
        fs(i) = v;
    }
    return d.U * fs.asDiagonal() * d.V.adjoint();
}

namespace {

ComplexMatrix gram_function(const ComplexMatrix& basis, const RealVector& s,
                            const std::function<double(double)>& g) {
    const double g0 = g(0.0);
    RealVector delta(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) delta(i) = g(s(i)) - g0;
    ComplexMatrix out = basis * delta.asDiagonal() * basis.adjoint();
    out.diagonal().array() += g0;
    if (!all_finite(out)) {
        throw Error(ErrorKind::Singularity, "gram function not finite on the spectrum");
    }
    return (out + out.adjoint()) * 0.5;
}

}  // namespace

ComplexMatrix left_gram_function(const ComplexMatrix& B, const std::function<double(double)>& g) {
    const SvdResult d = svd(B);
    return gram_function(d.U, d.singular_values, g);
}

ComplexMatrix right_gram_function(const ComplexMatrix& B, const std::function<double(double)>& g) {
    const SvdResult d = svd(B);
    return gram_function(d.V, d.singular_values, g);
}

int rank_tol(const ComplexMatrix& M, double tol) {
    if (!(tol > 0)) throw Error(ErrorKind::Precondition, "rank_tol: tolerance must be positive");
    if (M.size() == 0) return 0;
    const RealVector s = svd(M).singular_values;
    const double threshold = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    return static_cast<int>((s.array() > threshold).count());
}

double gram_deviation(const ComplexMatrix& F) {
    const ComplexMatrix G = F.adjoint() * F - ComplexMatrix::Identity(F.cols(), F.cols());
    return G.cwiseAbs().maxCoeff();
}

std::vector<double> principal_angles(const ComplexMatrix& F1, const ComplexMatrix& F2) {
    if (F1.rows() != F2.rows() || F1.cols() != F2.cols()) {
        throw Error(ErrorKind::Precondition, "principal_angles: frames " + dims(F1) + " and " + dims(F2) +
                                                 " differ in shape");
    }
    for (const ComplexMatrix* F : {&F1, &F2}) {
        const double dev = gram_deviation(*F);
        if (dev > kOrthonormalTol) {
            throw Error(ErrorKind::Precondition, "principal_angles: columns not orthonormal", dev);
        }
    }
    const Eigen::Index n = F1.cols();
    const RealVector cosines = svd(F1.adjoint() * F2).singular_values;
    const ComplexMatrix residual = F2 - F1 * (F1.adjoint() * F2);
    const RealVector sines = svd(residual).singular_values;

    std::vector<double> angles(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double c = std::clamp(cosines(i), -1.0, 1.0);
        const double s = std::clamp(sines(n - 1 - i), -1.0, 1.0);
        angles[static_cast<std::size_t>(i)] = std::clamp(std::atan2(s, c), 0.0, M_PI / 2);
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

}  // namespace grassgeo
