#include "grassgeo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grassgeo/errors.hpp"
#include "grassgeo/random.hpp"

namespace grassgeo {

namespace {

constexpr double kCriticalTol = 1e-8;
constexpr std::uint64_t kCriticalChartSeed = 0x6772617373676571ULL;

void require_compact(const GrassmannSpace& s, const char* what) {
    if (!s.compact()) {
        throw Error(ErrorKind::UnsupportedSpace, std::string(what) + " is defined on the compact Grassmannian only");
    }
}

void require_same(const GrassmannSpace& a, const GrassmannSpace& b, const char* what) {
    if (!(a == b)) throw Error(ErrorKind::Precondition, std::string(what) + ": arguments live in different spaces");
}

void require_spec_size(const GrassmannSpace& s, const EnergySpec& spec) {
    if (static_cast<int>(spec.size()) != s.ambient_dim()) {
        std::ostringstream os;
        os << "energy spec has " << spec.size() << " weights, expected n+m = " << s.ambient_dim();
        throw Error(ErrorKind::Precondition, os.str());
    }
}

ComplexMatrix diagonal_hamiltonian(const EnergySpec& spec) {
    const Eigen::Index N = static_cast<Eigen::Index>(spec.size());
    ComplexMatrix A = ComplexMatrix::Zero(N, N);
    for (Eigen::Index i = 0; i < N; ++i) A(i, i) = spec.eps()[static_cast<std::size_t>(i)];
    return A;
}

}  // namespace

EnergySpec::EnergySpec(std::vector<double> eps) : eps_(std::move(eps)) {
    if (eps_.empty()) throw Error(ErrorKind::Precondition, "EnergySpec needs at least one weight");
    for (double e : eps_) {
        if (!std::isfinite(e)) throw Error(ErrorKind::Precondition, "EnergySpec weights must be finite");
    }
}

bool EnergySpec::distinct() const {
    double scale = 1.0;
    for (double e : eps_) scale = std::max(scale, std::abs(e));
    for (std::size_t i = 0; i < eps_.size(); ++i) {
        for (std::size_t j = i + 1; j < eps_.size(); ++j) {
            if (std::abs(eps_[i] - eps_[j]) < 1e-6 * scale) return false;
        }
    }
    return true;
}

Complex PluckerVector::inner(const PluckerVector& other) const {
    if (components.size() != other.components.size()) {
        throw Error(ErrorKind::Precondition, "Plucker vectors of different length");
    }
    Complex acc = 0;
    for (std::size_t k = 0; k < components.size(); ++k) acc += std::conj(components[k]) * other.components[k];
    return acc;
}

double PluckerVector::norm() const {
    double acc = 0;
    for (const Complex& c : components) acc += std::norm(c);
    return std::sqrt(acc);
}

Complex PluckerVector::at(const std::vector<int>& subset) const {
    const auto it = std::find(subsets.begin(), subsets.end(), subset);
    if (it == subsets.end()) throw Error(ErrorKind::Precondition, "no Plucker component for that subset");
    return components[static_cast<std::size_t>(it - subsets.begin())];
}

std::vector<std::vector<int>> index_subsets(int total, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > total) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == total - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

Complex kernel(const ChartPoint& a, const ChartPoint& b) {
    require_same(a.space(), b.space(), "kernel");
    const GrassmannSpace& s = a.space();
    const ComplexMatrix I = ComplexMatrix::Identity(s.n, s.n);
    const ComplexMatrix cross = a.matrix() * b.matrix().adjoint();
    if (s.compact()) return (I + cross).determinant();
    return 1.0 / (I - cross).determinant();
}

OverlapValue normalized_overlap(const ChartPoint& a, const ChartPoint& b) {
    const Complex raw = kernel(a, b);
    const double kaa = kernel(a, a).real();
    const double kbb = kernel(b, b).real();
    return {raw, raw / std::sqrt(kaa * kbb)};
}

double cayley_distance(const ChartPoint& a, const ChartPoint& b) {
    require_compact(a.space(), "cayley_distance");
    const double c = std::abs(normalized_overlap(a, b).normalized);
    return std::acos(std::clamp(c, 0.0, 1.0));
}

double cayley_distance(const Frame& a, const Frame& b) {
    require_same(a.space(), b.space(), "cayley_distance");
    require_compact(a.space(), "cayley_distance");
    const double c = std::abs((a.matrix().adjoint() * b.matrix()).determinant());
    return std::acos(std::clamp(c, 0.0, 1.0));
}

double diastasis(const ChartPoint& a, const ChartPoint& b) {
    const double c = std::abs(normalized_overlap(a, b).normalized);
    const double D = -2.0 * std::log(std::min(c, 1.0));
    if (c == 0.0 || !std::isfinite(D)) {
        throw Error(ErrorKind::DiastasisUndefined,
                    "diastasis undefined: overlap vanishes, second point lies on the polar divisor of the first", c);
    }
    return D;
}

PluckerVector plucker_minors(const ComplexMatrix& F, int n) {
    PluckerVector out;
    out.n = n;
    out.ambient = static_cast<int>(F.rows());
    out.subsets = index_subsets(out.ambient, n);
    out.components.reserve(out.subsets.size());
    ComplexMatrix block(n, n);
    for (const auto& S : out.subsets) {
        for (int r = 0; r < n; ++r) block.row(r) = F.row(S[static_cast<std::size_t>(r)]);
        out.components.push_back(block.determinant());
    }
    return out;
}

PluckerVector plucker_embed(const Frame& F) {
    require_compact(F.space(), "plucker_embed");
    return plucker_minors(F.matrix(), F.space().n);
}

Complex plucker_overlap_oracle(const Frame& a, const Frame& b) {
    require_same(a.space(), b.space(), "plucker_overlap_oracle");
    const PluckerVector pa = plucker_embed(a);
    const PluckerVector pb = plucker_embed(b);
    return pa.inner(pb) / (pa.norm() * pb.norm());
}

Frame coordinate_plane(const GrassmannSpace& space, const std::vector<int>& subset) {
    if (static_cast<int>(subset.size()) != space.n) {
        throw Error(ErrorKind::Precondition, "coordinate plane needs exactly n indices");
    }
    ComplexMatrix F = ComplexMatrix::Zero(space.ambient_dim(), space.n);
    for (int k = 0; k < space.n; ++k) {
        const int row = subset[static_cast<std::size_t>(k)];
        if (row < 0 || row >= space.ambient_dim()) throw Error(ErrorKind::Precondition, "index out of range");
        F(row, k) = 1.0;
    }
    return Frame(space, std::move(F));
}

double energy(const EnergySpec& spec, const Frame& F) {
    require_compact(F.space(), "energy");
    require_spec_size(F.space(), spec);
    double acc = 0;
    for (Eigen::Index i = 0; i < F.matrix().rows(); ++i) {
        acc += spec.eps()[static_cast<std::size_t>(i)] * F.matrix().row(i).squaredNorm();
    }
    return acc;
}

// f(Z) = tr(M^{-1} N), M = I + Z Z^H, N = [I, Z] A [I; Z^H].
// df = 2 Re tr(dZ C) with C = (A21 + A22 Z^H) M^{-1} - Z^H W, W = M^{-1} N M^{-1},
// so the packed gradient is 2 C^H = 2 (M^{-1} (A12 + Z A22) - W Z).
ComplexMatrix energy_gradient(const ComplexMatrix& A, const ChartPoint& p) {
    const GrassmannSpace& s = p.space();
    require_compact(s, "energy_gradient");
    if (A.rows() != s.ambient_dim() || A.cols() != s.ambient_dim()) {
        throw Error(ErrorKind::Precondition, "energy_gradient: Hamiltonian has wrong size");
    }
    const ComplexMatrix& Z = p.matrix();
    const ComplexMatrix A11 = A.topLeftCorner(s.n, s.n);
    const ComplexMatrix A12 = A.topRightCorner(s.n, s.m);
    const ComplexMatrix A21 = A.bottomLeftCorner(s.m, s.n);
    const ComplexMatrix A22 = A.bottomRightCorner(s.m, s.m);
    const ComplexMatrix M = ComplexMatrix::Identity(s.n, s.n) + Z * Z.adjoint();
    const ComplexMatrix N = A11 + A12 * Z.adjoint() + Z * A21 + Z * A22 * Z.adjoint();
    const Eigen::PartialPivLU<ComplexMatrix> lu(M);
    const ComplexMatrix Minv = lu.inverse();
    const ComplexMatrix W = Minv * N * Minv;
    return 2.0 * (Minv * (A12 + Z * A22) - W * Z);
}

ComplexMatrix energy_gradient(const EnergySpec& spec, const ChartPoint& p) {
    require_spec_size(p.space(), spec);
    return energy_gradient(diagonal_hamiltonian(spec), p);
}

std::vector<CriticalPoint> critical_points(const GrassmannSpace& space, const EnergySpec& spec) {
    require_compact(space, "critical_points");
    require_spec_size(space, spec);
    if (!spec.distinct()) {
        throw Error(ErrorKind::DegenerateSpec, "critical_points: energy weights must be pairwise distinct");
    }
    const ComplexMatrix A = diagonal_hamiltonian(spec);

    // Every coordinate plane except one lies off the origin chart; check
    // criticality in a generic rotated chart instead, where none of them is
    // the chart origin.
    SplitMix64 rng(kCriticalChartSeed);
    const ComplexMatrix Q = random_unitary(rng, space.ambient_dim());
    const ComplexMatrix A_rot = Q.adjoint() * A * Q;

    std::vector<CriticalPoint> out;
    for (const auto& S : index_subsets(space.ambient_dim(), space.n)) {
        Frame F = coordinate_plane(space, S);
        double value = 0;
        for (int i : S) value += spec.eps()[static_cast<std::size_t>(i)];
        const ChartPoint z = chart_of_frame(Frame(space, Q.adjoint() * F.matrix()));
        const double gnorm = energy_gradient(A_rot, z).norm();
        if (gnorm >= kCriticalTol) {
            std::ostringstream os;
            os << "coordinate plane failed the criticality check, gradient norm " << gnorm;
            throw Error(ErrorKind::Consistency, os.str(), gnorm);
        }
        out.push_back(CriticalPoint{S, std::move(F), value, gnorm});
    }
    return out;
}

}  // namespace grassgeo
