#include "grassgeo/loci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grassgeo/errors.hpp"

namespace grassgeo {

namespace {

void require_compact(const GrassmannSpace& s, const char* what) {
    if (!s.compact()) {
        throw Error(ErrorKind::UnsupportedSpace, std::string(what) + " is defined on the compact Grassmannian only");
    }
}

void require_positive(double tol, const char* what) {
    if (!(tol > 0)) throw Error(ErrorKind::Precondition, std::string(what) + ": tolerance must be positive");
}

std::vector<double> angles_with_origin(const Frame& F) { return principal_angles(origin_frame(F.space()), F); }

// Real vector of a complex matrix: real parts then imaginary parts.
Eigen::VectorXd realify(const ComplexMatrix& M) {
    Eigen::VectorXd v(2 * M.size());
    v.head(M.size()) = M.real().reshaped();
    v.tail(M.size()) = M.imag().reshaped();
    return v;
}

}  // namespace

bool cut_locus_test(const Frame& F, double tol) {
    require_compact(F.space(), "cut_locus_test");
    require_positive(tol, "cut_locus_test");
    const ComplexMatrix top = F.matrix().topRows(F.space().n);
    const double det = std::abs(top.determinant());
    const RealVector s = svd(top).singular_values;
    const double cos_max = s(s.size() - 1);
    const bool by_det = det < tol;
    const bool by_angle = cos_max < tol;
    if (by_det != by_angle) {
        std::ostringstream os;
        os.precision(17);
        os << "cut_locus_test: determinant criterion (|det| = " << det << ") and angle criterion (cos theta_max = "
           << cos_max << ") disagree at tolerance " << tol;
        throw Error(ErrorKind::Consistency, os.str(), det);
    }
    return by_det;
}

DecompositionResult disjoint_union_check(const Frame& F, double tol) {
    require_compact(F.space(), "disjoint_union_check");
    require_positive(tol, "disjoint_union_check");
    const ComplexMatrix top = F.matrix().topRows(F.space().n);
    const double det = std::abs(top.determinant());
    const RealVector s = svd(top).singular_values;
    const double smin = s(s.size() - 1);
    if (det < tol) return {DecompositionResult::Branch::PolarDivisor, det, smin, std::nullopt};
    if (det < 10 * tol) return {DecompositionResult::Branch::NearDivisor, det, smin, std::nullopt};
    return {DecompositionResult::Branch::Chart, det, smin, chart_of_frame(F)};
}

CartanVector::CartanVector(std::vector<double> h) : h_(std::move(h)) {
    if (h_.empty()) throw Error(ErrorKind::Precondition, "CartanVector needs at least one component");
    double sq = 0;
    for (double x : h_) {
        if (!std::isfinite(x)) throw Error(ErrorKind::Precondition, "CartanVector components must be finite");
        sq += x * x;
    }
    if (std::abs(sq - 1.0) > 1e-12) {
        throw Error(ErrorKind::Precondition, "CartanVector must satisfy sum h_i^2 = 1", sq);
    }
}

CartanVector CartanVector::normalized(std::vector<double> raw) {
    double sq = 0;
    for (double x : raw) sq += x * x;
    if (!(sq > 0) || !std::isfinite(sq)) throw Error(ErrorKind::Precondition, "cannot normalize a zero Cartan vector");
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : raw) x *= inv;
    return CartanVector(std::move(raw));
}

std::vector<ConjugateTime> tangent_conjugate_times(const GrassmannSpace& space, const CartanVector& h,
                                                   double t_max) {
    if (!(t_max > 0)) throw Error(ErrorKind::Precondition, "tangent_conjugate_times: t_max must be positive");
    if (static_cast<int>(h.size()) != space.rank()) {
        throw Error(ErrorKind::Precondition, "tangent_conjugate_times: Cartan vector must have min(n, m) entries");
    }
    if (!space.compact()) return {};

    constexpr double kZero = 1e-14;
    struct Candidate {
        double t;
        ConjugateSource src;
    };
    std::vector<Candidate> found;
    auto emit = [&](double denom, ConjugateSource base) {
        if (denom < kZero) return;
        for (int lambda = 1;; ++lambda) {
            const double t = lambda * M_PI / denom;
            if (t > t_max) break;
            base.lambda = lambda;
            found.push_back({t, base});
        }
    };

    const auto& hv = h.values();
    const int r = static_cast<int>(hv.size());
    for (int p = 0; p < r; ++p) {
        for (int q = p + 1; q < r; ++q) {
            emit(std::abs(hv[p] + hv[q]), {ConjugateFamily::T1, p, q, +1, 0, 2});
            emit(std::abs(hv[p] - hv[q]), {ConjugateFamily::T1, p, q, -1, 0, 2});
        }
    }
    for (int p = 0; p < r; ++p) emit(2.0 * std::abs(hv[p]), {ConjugateFamily::T2, p, -1, 0, 0, 1});
    if (space.n != space.m) {
        const int mult = 2 * std::abs(space.m - space.n);
        for (int p = 0; p < r; ++p) emit(std::abs(hv[p]), {ConjugateFamily::T3, p, -1, 0, 0, mult});
    }

    std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    std::vector<ConjugateTime> out;
    for (const Candidate& c : found) {
        if (!out.empty() && std::abs(out.back().t - c.t) <= 1e-12 * std::max(1.0, c.t)) {
            out.back().multiplicity += c.src.multiplicity;
            out.back().sources.push_back(c.src);
        } else {
            out.push_back({c.t, c.src.multiplicity, {c.src}});
        }
    }
    return out;
}

TangentVector cartan_to_tangent(const GrassmannSpace& space, const CartanVector& h) {
    if (static_cast<int>(h.size()) != space.rank()) {
        throw Error(ErrorKind::Precondition, "cartan_to_tangent: Cartan vector must have min(n, m) entries");
    }
    ComplexMatrix B = ComplexMatrix::Zero(space.n, space.m);
    for (int i = 0; i < space.rank(); ++i) B(i, i) = h.values()[static_cast<std::size_t>(i)];
    return TangentVector(space, std::move(B));
}

double dexp_min_singular(const TangentVector& B, double t, double fd_step) {
    if (!(fd_step >= 1e-7 && fd_step <= 1e-3)) {
        throw Error(ErrorKind::Precondition, "dexp_min_singular: fd_step must lie in [1e-7, 1e-3]", fd_step);
    }
    const GrassmannSpace& s = B.space();
    const ComplexMatrix base = t * B.matrix();
    const Eigen::Index N = s.ambient_dim();
    const Eigen::Index coords = 2 * base.size();
    Eigen::MatrixXd jac(2 * N * N, coords);

    auto projection_at = [&](const ComplexMatrix& X) { return exp0_frame(TangentVector(s, X)).projection(); };
    for (Eigen::Index k = 0; k < coords; ++k) {
        const Eigen::Index entry = k % base.size();
        const Complex dir = k < base.size() ? Complex(1, 0) : Complex(0, 1);
        ComplexMatrix plus = base, minus = base;
        plus(entry % s.n, entry / s.n) += fd_step * dir;
        minus(entry % s.n, entry / s.n) -= fd_step * dir;
        jac.col(k) = realify((projection_at(plus) - projection_at(minus)) / (2.0 * fd_step));
    }

    // Sorted in decreasing order. The largest value belongs to the radial
    // direction, whose speed stays fixed along the geodesic; the median would
    // vanish along with the minimum once the degeneracy covers half the
    // directions (CP^2 at t = pi, for one).
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues();
    const double largest = sv(0);
    if (!(largest > 0)) throw Error(ErrorKind::NumericalFailure, "dexp_min_singular: Jacobian vanished");
    return sv(sv.size() - 1) / largest;
}

bool is_conjugate(const TangentVector& B, double t, double tol, double fd_step) {
    if (B.norm() == 0.0) throw Error(ErrorKind::Precondition, "is_conjugate: direction B must be nonzero");
    return dexp_min_singular(B, t, fd_step) < tol;
}

std::vector<ScanPoint> conjugate_scan(const GrassmannSpace& space, const CartanVector& h, double t_max,
                                      int points, double fd_step, double window) {
    if (points < 1) throw Error(ErrorKind::Precondition, "conjugate_scan: points must be >= 1");
    const TangentVector B = cartan_to_tangent(space, h);
    const std::vector<ConjugateTime> predicted = tangent_conjugate_times(space, h, t_max + window);
    std::vector<ScanPoint> out(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k) {
        const double t = t_max * k / points;
        const bool near = std::any_of(predicted.begin(), predicted.end(),
                                      [&](const ConjugateTime& c) { return std::abs(c.t - t) <= window; });
        out[static_cast<std::size_t>(k - 1)] = {t, dexp_min_singular(B, t, fd_step), near};
    }
    return out;
}

Flag::Flag(ComplexMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0) {
        throw Error(ErrorKind::Precondition, "Flag basis must be a square matrix");
    }
    if (gram_deviation(basis_) > kOrthonormalTol) {
        throw Error(ErrorKind::Precondition, "Flag basis must be orthonormal");
    }
}

Flag Flag::standard(const GrassmannSpace& space) {
    return Flag(ComplexMatrix::Identity(space.ambient_dim(), space.ambient_dim()));
}

Flag Flag::complement_first(const GrassmannSpace& space) {
    const int N = space.ambient_dim();
    ComplexMatrix basis = ComplexMatrix::Zero(N, N);
    for (int k = 0; k < space.m; ++k) basis(space.n + k, k) = 1.0;
    for (int k = 0; k < space.n; ++k) basis(k, space.m + k) = 1.0;
    return Flag(std::move(basis));
}

SchubertSymbol::SchubertSymbol(std::vector<int> omega, int m) : omega_(std::move(omega)), m_(m) {
    if (omega_.empty() || m_ < 1) throw Error(ErrorKind::Precondition, "SchubertSymbol needs n >= 1 and m >= 1");
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (omega_[i] < 0 || omega_[i] > m_ || (i > 0 && omega_[i] < omega_[i - 1])) {
            throw Error(ErrorKind::Precondition, "SchubertSymbol must satisfy 0 <= omega(1) <= ... <= omega(n) <= m");
        }
    }
}

std::vector<int> SchubertSymbol::sigma() const {
    std::vector<int> s(omega_.size());
    for (std::size_t i = 0; i < omega_.size(); ++i) s[i] = omega_[i] + static_cast<int>(i) + 1;
    return s;
}

std::vector<int> SchubertSymbol::jumps() const {
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < omega_.size(); ++i) {
        if (omega_[i] < omega_[i + 1]) out.push_back(static_cast<int>(i) + 1);
    }
    out.push_back(n());
    return out;
}

int SchubertSymbol::dimension() const { return std::accumulate(omega_.begin(), omega_.end(), 0); }

SchubertSymbol wong_symbol(int p, int l, int n, int m) {
    if (l < 0 || l > n) throw Error(ErrorKind::Precondition, "wong_symbol: need 0 <= l <= n");
    std::vector<int> omega(static_cast<std::size_t>(n), m);
    for (int i = 0; i < l; ++i) omega[static_cast<std::size_t>(i)] = p - l;
    return SchubertSymbol(std::move(omega), m);
}

std::vector<int> schubert_dims(const Frame& F, const Flag& flag, double tol) {
    const int n = F.space().n;
    const int N = F.space().ambient_dim();
    if (flag.basis().rows() != N) throw Error(ErrorKind::Precondition, "schubert_dims: flag has wrong ambient dimension");
    std::vector<int> dims(static_cast<std::size_t>(N));
    ComplexMatrix joined(N, n + N);
    joined.leftCols(n) = F.matrix();
    for (int p = 1; p <= N; ++p) {
        joined.col(n + p - 1) = flag.basis().col(p - 1);
        dims[static_cast<std::size_t>(p - 1)] = n + p - rank_tol(joined.leftCols(n + p), tol);
    }
    return dims;
}

SchubertMembership schubert_membership(const Frame& F, const SchubertSymbol& symbol, const Flag& flag, double tol) {
    if (symbol.n() != F.space().n || symbol.m() != F.space().m) {
        throw Error(ErrorKind::Precondition, "schubert_membership: symbol does not match the space");
    }
    const std::vector<int> dims = schubert_dims(F, flag, tol);
    const std::vector<int> sigma = symbol.sigma();
    bool in_Z = true;
    for (int i = 1; i <= symbol.n(); ++i) {
        if (dims[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i - 1)] - 1)] < i) in_Z = false;
    }
    bool generic = in_Z;
    for (int ih : symbol.jumps()) {
        if (dims[static_cast<std::size_t>(sigma[static_cast<std::size_t>(ih - 1)] - 1)] != ih) generic = false;
    }
    return {in_Z, generic};
}

bool conjugate_stratum_W(const Frame& F, double tol) {
    require_compact(F.space(), "conjugate_stratum_W");
    const std::vector<double> angles = angles_with_origin(F);
    const long zeros = std::count_if(angles.begin(), angles.end(), [&](double a) { return a < tol; });
    const long rights = std::count_if(angles.begin(), angles.end(), [&](double a) { return a > M_PI / 2 - tol; });
    return zeros > std::max(0, F.space().n - F.space().m) || rights >= 1;
}

bool conjugate_stratum_I(const Frame& F, double tol) {
    require_compact(F.space(), "conjugate_stratum_I");
    const std::vector<double> angles = angles_with_origin(F);
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        if (angles[i + 1] - angles[i] < tol) return true;
    }
    return false;
}

bool isoclinic_test(const Frame& a, const Frame& b, double tol) {
    const std::vector<double> angles = principal_angles(a, b);
    return angles.back() - angles.front() < tol;
}

}  // namespace grassgeo
