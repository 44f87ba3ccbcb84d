#include "grassgeo/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grassgeo/errors.hpp"

namespace grassgeo {

namespace {

constexpr double kGramTol = 1e-10;
constexpr double kPolarTol = 1e-12;
constexpr double kBlowUp = 1e8;

void require_shape(const ComplexMatrix& M, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (M.rows() != rows || M.cols() != cols) {
        std::ostringstream os;
        os << what << ": expected " << rows << "x" << cols << " matrix, got " << M.rows() << "x" << M.cols();
        throw Error(ErrorKind::Precondition, os.str());
    }
    if (!all_finite(M)) throw Error(ErrorKind::Precondition, std::string(what) + ": non-finite entry");
}

void require_same_space(const GrassmannSpace& a, const GrassmannSpace& b, const char* what) {
    if (!(a == b)) throw Error(ErrorKind::Precondition, std::string(what) + ": arguments live in different spaces");
}

ComplexMatrix top_block(const GrassmannSpace& s, const ComplexMatrix& F) { return F.topRows(s.n); }
ComplexMatrix bottom_block(const GrassmannSpace& s, const ComplexMatrix& F) { return F.bottomRows(s.m); }

double max_singular(const ComplexMatrix& M) {
    const RealVector s = svd(M).singular_values;
    return s.size() ? s(0) : 0.0;
}

double min_singular(const ComplexMatrix& M) {
    const RealVector s = svd(M).singular_values;
    return s.size() ? s(s.size() - 1) : 0.0;
}

// Stacks rows: `selected` rows take `head`, the remaining rows take `tail`.
ComplexMatrix scatter_rows(int total, std::span<const int> selected, const ComplexMatrix& head,
                           const ComplexMatrix& tail) {
    std::vector<bool> used(static_cast<std::size_t>(total), false);
    ComplexMatrix out(total, head.cols());
    for (std::size_t k = 0; k < selected.size(); ++k) {
        out.row(selected[k]) = head.row(static_cast<Eigen::Index>(k));
        used[static_cast<std::size_t>(selected[k])] = true;
    }
    Eigen::Index r = 0;
    for (int i = 0; i < total; ++i) {
        if (!used[static_cast<std::size_t>(i)]) out.row(i) = tail.row(r++);
    }
    return out;
}

std::vector<int> checked_selection(const GrassmannSpace& s, std::span<const int> rows) {
    std::vector<int> sel(rows.begin(), rows.end());
    if (static_cast<int>(sel.size()) != s.n) {
        throw Error(ErrorKind::Precondition, "row selection must contain exactly n indices");
    }
    std::vector<int> sorted = sel;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
        sorted.back() >= s.ambient_dim()) {
        throw Error(ErrorKind::Precondition, "row selection must be distinct indices in [0, n+m)");
    }
    return sel;
}

}  // namespace

GrassmannSpace::GrassmannSpace(int n_, int m_, Curvature c) : n(n_), m(m_), curvature(c) {
    if (n < 1 || m < 1) throw Error(ErrorKind::Precondition, "GrassmannSpace requires n >= 1 and m >= 1");
}

ChartPoint::ChartPoint(GrassmannSpace space, ComplexMatrix Z) : space_(space), Z_(std::move(Z)) {
    require_shape(Z_, space_.n, space_.m, "ChartPoint");
    if (!space_.compact()) {
        const double s = max_singular(Z_);
        if (s >= 1.0) {
            std::ostringstream os;
            os.precision(17);
            os << "chart point outside the bounded domain: largest singular value " << s << " >= 1";
            throw Error(ErrorKind::Domain, os.str(), s);
        }
    }
}

TangentVector::TangentVector(GrassmannSpace space, ComplexMatrix B) : space_(space), B_(std::move(B)) {
    require_shape(B_, space_.n, space_.m, "TangentVector");
}

Frame::Frame(GrassmannSpace space, ComplexMatrix F) : space_(space), F_(std::move(F)) {
    require_shape(F_, space_.ambient_dim(), space_.n, "Frame");
    const ComplexMatrix I = ComplexMatrix::Identity(space_.n, space_.n);
    const ComplexMatrix gram =
        space_.compact() ? ComplexMatrix(F_.adjoint() * F_) : ComplexMatrix(F_.adjoint() * signature_matrix(space_) * F_);
    const double scale = std::max(1.0, F_.cwiseAbs2().maxCoeff());
    const double dev = (gram - I).cwiseAbs().maxCoeff();
    if (dev > kGramTol * scale) {
        throw Error(ErrorKind::Precondition,
                    space_.compact() ? "Frame columns are not orthonormal" : "Frame columns are not J-orthonormal",
                    dev);
    }
}

Frame Frame::orthonormalized(const GrassmannSpace& space, const ComplexMatrix& raw) {
    require_shape(raw, space.ambient_dim(), space.n, "Frame::orthonormalized");
    if (space.compact()) {
        const SvdResult d = svd(raw);
        if (d.singular_values(d.singular_values.size() - 1) < kPolarTol * std::max(1.0, d.singular_values(0))) {
            throw Error(ErrorKind::Precondition, "Frame::orthonormalized: basis is rank deficient");
        }
        return Frame(space, d.U * d.V.adjoint());
    }
    const ComplexMatrix gram = raw.adjoint() * signature_matrix(space) * raw;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig((gram + gram.adjoint()) * 0.5);
    if (eig.eigenvalues().minCoeff() <= kPolarTol * std::max(1.0, eig.eigenvalues().maxCoeff())) {
        throw Error(ErrorKind::Domain, "Frame::orthonormalized: J-Gram matrix is not positive definite");
    }
    const RealVector inv_sqrt = eig.eigenvalues().array().rsqrt();
    return Frame(space, raw * eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint());
}

ComplexMatrix Frame::projection() const {
    if (space_.compact()) return F_ * F_.adjoint();
    return F_ * F_.adjoint() * signature_matrix(space_);
}

ComplexMatrix signature_matrix(const GrassmannSpace& space) {
    ComplexMatrix J = ComplexMatrix::Identity(space.ambient_dim(), space.ambient_dim());
    if (!space.compact()) J.bottomRightCorner(space.m, space.m) *= -1.0;
    return J;
}

Frame origin_frame(const GrassmannSpace& space) {
    return Frame(space, ComplexMatrix::Identity(space.ambient_dim(), space.n));
}

ChartPoint origin_point(const GrassmannSpace& space) {
    return ChartPoint(space, ComplexMatrix::Zero(space.n, space.m));
}

std::vector<double> principal_angles(const Frame& a, const Frame& b) {
    require_same_space(a.space(), b.space(), "principal_angles");
    if (!a.space().compact()) {
        throw Error(ErrorKind::UnsupportedSpace, "principal_angles needs compact frames; use hyperbolic_angles");
    }
    return principal_angles(a.matrix(), b.matrix());
}

std::vector<double> hyperbolic_angles(const Frame& a, const Frame& b) {
    require_same_space(a.space(), b.space(), "hyperbolic_angles");
    if (a.space().compact()) {
        throw Error(ErrorKind::UnsupportedSpace, "hyperbolic_angles needs noncompact frames");
    }
    const Isometry g = transport_to_origin(chart_of_frame(a));
    const ChartPoint image = chart_of_frame(g.apply(b));
    const RealVector s = svd(image.matrix()).singular_values;
    std::vector<double> out;
    for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(std::atanh(std::min(s(i), 1.0)));
    // rank() singular values exist; pad with zeros up to n.
    out.resize(static_cast<std::size_t>(a.space().n), 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

Frame frame_of_chart(const ChartPoint& p) {
    const GrassmannSpace& s = p.space();
    const ComplexMatrix& Z = p.matrix();
    ComplexMatrix raw(s.ambient_dim(), s.n);
    raw.topRows(s.n).setIdentity();
    raw.bottomRows(s.m) = Z.adjoint();
    const ComplexMatrix norm = s.compact()
                                   ? left_gram_function(Z, [](double x) { return 1.0 / std::sqrt(1.0 + x * x); })
                                   : left_gram_function(Z, [](double x) { return 1.0 / std::sqrt(1.0 - x * x); });
    return Frame(s, raw * norm);
}

ChartPoint chart_of_frame(const Frame& F) {
    const GrassmannSpace& s = F.space();
    const ComplexMatrix top = top_block(s, F.matrix());
    const double smin = min_singular(top);
    if (smin < kPolarTol) {
        throw Error(ErrorKind::OnPolarDivisor,
                    "plane lies on the polar divisor of the chart origin (top block singular)", smin);
    }
    const ComplexMatrix bottom = bottom_block(s, F.matrix());
    // Z = top^{-H} bottom^H
    ComplexMatrix Z = top.adjoint().partialPivLu().solve(bottom.adjoint());
    return ChartPoint(s, std::move(Z));
}

ChartPoint exp0(const TangentVector& B) {
    const GrassmannSpace& s = B.space();
    if (s.compact()) {
        const RealVector sv = svd(B.matrix()).singular_values;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (std::abs(std::cos(sv(i))) < 1e-12) {
                std::ostringstream os;
                os.precision(17);
                os << "exp0: singular value " << sv(i)
                   << " is pi/2 mod pi, the image leaves the chart; use exp0_frame";
                throw Error(ErrorKind::ConjugateToChart, os.str(), sv(i));
            }
        }
        return ChartPoint(s, apply_spectral(B.matrix(), [](double x) { return std::tan(x); }));
    }
    return ChartPoint(s, apply_spectral(B.matrix(), [](double x) { return std::tanh(x); }));
}

Frame exp0_frame(const TangentVector& B) {
    const GrassmannSpace& s = B.space();
    ComplexMatrix F(s.ambient_dim(), s.n);
    if (s.compact()) {
        F.topRows(s.n) = left_gram_function(B.matrix(), [](double x) { return std::cos(x); });
        F.bottomRows(s.m) = apply_spectral(B.matrix().adjoint(), [](double x) { return std::sin(x); });
    } else {
        F.topRows(s.n) = left_gram_function(B.matrix(), [](double x) { return std::cosh(x); });
        F.bottomRows(s.m) = apply_spectral(B.matrix().adjoint(), [](double x) { return std::sinh(x); });
    }
    return Frame(s, std::move(F));
}

TangentVector log0(const ChartPoint& p) {
    const GrassmannSpace& s = p.space();
    if (s.compact()) {
        return TangentVector(s, apply_spectral(p.matrix(), [](double x) { return std::atan(x); }));
    }
    return TangentVector(s, apply_spectral(p.matrix(), [](double x) { return std::atanh(x); }));
}

namespace {

// Z'' = 2 eps Z' Z^H (I + eps Z Z^H)^{-1} Z', integrated with classical RK4.
// The matrix I + eps Z Z^H is positive definite on both charts, so a Cholesky
// solve suffices. Mat is either a dynamic matrix or one with a fixed maximum
// size, which keeps every buffer on the stack for small spaces.
template <class Mat>
ComplexMatrix integrate_geodesic(const ComplexMatrix& B, double eps, double t, int steps) {
    const Eigen::Index n = B.rows(), m = B.cols();
    Mat M(n, n), WZh(n, n), solved(n, m);
    Eigen::LLT<Mat> llt(n);
    auto accel = [&](const Mat& Z, const Mat& W, Mat& out) {
        M.setIdentity();
        M.noalias() += eps * Z.lazyProduct(Z.adjoint());
        llt.compute(M);
        solved = llt.solve(W);
        WZh.noalias() = W.lazyProduct(Z.adjoint());
        out.noalias() = (2.0 * eps) * WZh.lazyProduct(solved);
    };

    Mat Z = Mat::Zero(n, m);
    Mat W = B;
    Mat k1w(n, m), k2w(n, m), k3w(n, m), k4w(n, m);
    Mat z2(n, m), w2(n, m), z3(n, m), w3(n, m), z4(n, m), w4(n, m);
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        // The position slopes are the velocities W, w2, w3, w4.
        accel(Z, W, k1w);
        z2 = Z + (0.5 * h) * W;
        w2 = W + (0.5 * h) * k1w;
        accel(z2, w2, k2w);
        z3 = Z + (0.5 * h) * w2;
        w3 = W + (0.5 * h) * k2w;
        accel(z3, w3, k3w);
        z4 = Z + h * w3;
        w4 = W + h * k3w;
        accel(z4, w4, k4w);
        Z += (h / 6.0) * (W + 2.0 * w2 + 2.0 * w3 + w4);
        W += (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (!Z.allFinite() || !W.allFinite() || Z.cwiseAbs().maxCoeff() > kBlowUp) {
            std::ostringstream os;
            os << "geodesic_ode: trajectory left the chart at step " << k + 1 << " (t = " << (k + 1) * h << ")";
            throw Error(ErrorKind::LeftChart, os.str(), (k + 1) * h);
        }
    }
    return Z;
}

constexpr int kStackLimit = 4;
using StackMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kStackLimit, kStackLimit>;

}  // namespace

ChartPoint geodesic_ode(const TangentVector& B, double t, int steps) {
    if (steps < 100) throw Error(ErrorKind::Precondition, "geodesic_ode: steps must be >= 100");
    if (!std::isfinite(t)) throw Error(ErrorKind::Precondition, "geodesic_ode: t must be finite");
    const GrassmannSpace& s = B.space();
    ComplexMatrix Z = s.n <= kStackLimit && s.m <= kStackLimit
                          ? integrate_geodesic<StackMatrix>(B.matrix(), s.epsilon(), t, steps)
                          : integrate_geodesic<ComplexMatrix>(B.matrix(), s.epsilon(), t, steps);
    return ChartPoint(s, std::move(Z));
}

Isometry::Isometry(GrassmannSpace space, ComplexMatrix g) : space_(space), g_(std::move(g)) {
    const int N = space_.ambient_dim();
    require_shape(g_, N, N, "Isometry");
    const ComplexMatrix J = signature_matrix(space_);
    const double dev = (g_.adjoint() * J * g_ - J).cwiseAbs().maxCoeff();
    if (dev > 1e-9 * std::max(1.0, g_.cwiseAbs2().maxCoeff())) {
        throw Error(ErrorKind::Precondition, "Isometry: matrix does not preserve the hermitian form", dev);
    }
}

Frame Isometry::apply(const Frame& F) const {
    require_same_space(space_, F.space(), "Isometry::apply");
    return Frame(space_, g_ * F.matrix());
}

Isometry transport_to_origin(const ChartPoint& p) {
    const GrassmannSpace& s = p.space();
    const ComplexMatrix& Z = p.matrix();
    const int N = s.ambient_dim();
    ComplexMatrix G(N, N);
    G.leftCols(s.n) = frame_of_chart(p).matrix();

    // Completion E with F^H J E = 0 and E^H J E = +-I_m.
    ComplexMatrix raw(N, s.m);
    if (s.compact()) {
        raw.topRows(s.n) = -Z;
        raw.bottomRows(s.m).setIdentity();
        G.rightCols(s.m) = raw * right_gram_function(Z, [](double x) { return 1.0 / std::sqrt(1.0 + x * x); });
        return Isometry(s, G.adjoint());
    }
    raw.topRows(s.n) = Z;
    raw.bottomRows(s.m).setIdentity();
    G.rightCols(s.m) = raw * right_gram_function(Z, [](double x) { return 1.0 / std::sqrt(1.0 - x * x); });
    const ComplexMatrix J = signature_matrix(s);
    return Isometry(s, J * G.adjoint() * J);
}

double distance(const ChartPoint& p1, const ChartPoint& p2) {
    require_same_space(p1.space(), p2.space(), "distance");
    const Frame image = transport_to_origin(p1).apply(frame_of_chart(p2));
    try {
        return log0(chart_of_frame(image)).norm();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::OnPolarDivisor || !p1.space().compact()) throw;
    }
    const std::vector<double> angles = principal_angles(origin_frame(p1.space()), image);
    return std::sqrt(std::inner_product(angles.begin(), angles.end(), angles.begin(), 0.0));
}

double distance(const Frame& a, const Frame& b) {
    require_same_space(a.space(), b.space(), "distance");
    const std::vector<double> angles = a.space().compact() ? principal_angles(a, b) : hyperbolic_angles(a, b);
    return std::sqrt(std::inner_product(angles.begin(), angles.end(), angles.begin(), 0.0));
}

ChartPoint chart_transition(const Frame& F, std::span<const int> rows) {
    const GrassmannSpace& s = F.space();
    if (!s.compact()) throw Error(ErrorKind::UnsupportedSpace, "chart_transition is defined for compact spaces");
    const std::vector<int> sel = checked_selection(s, rows);
    std::vector<bool> used(static_cast<std::size_t>(s.ambient_dim()), false);
    ComplexMatrix head(s.n, s.n), tail(s.m, s.n);
    for (int k = 0; k < s.n; ++k) {
        head.row(k) = F.matrix().row(sel[static_cast<std::size_t>(k)]);
        used[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])] = true;
    }
    Eigen::Index r = 0;
    for (int i = 0; i < s.ambient_dim(); ++i) {
        if (!used[static_cast<std::size_t>(i)]) tail.row(r++) = F.matrix().row(i);
    }
    const double smin = min_singular(head);
    if (smin < kPolarTol) {
        throw Error(ErrorKind::WrongChart, "plane is not in the chart of the selected coordinate plane", smin);
    }
    return ChartPoint(s, head.adjoint().partialPivLu().solve(tail.adjoint()));
}

Frame frame_of_chart_at(const ChartPoint& p, std::span<const int> rows) {
    const GrassmannSpace& s = p.space();
    if (!s.compact()) throw Error(ErrorKind::UnsupportedSpace, "frame_of_chart_at is defined for compact spaces");
    const std::vector<int> sel = checked_selection(s, rows);
    const ComplexMatrix F = frame_of_chart(p).matrix();
    return Frame(s, scatter_rows(s.ambient_dim(), sel, F.topRows(s.n), F.bottomRows(s.m)));
}

}  // namespace grassgeo
