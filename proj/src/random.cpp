#include "grassgeo/random.hpp"

#include <cmath>

namespace grassgeo {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 a(seed);
    SplitMix64 b(a.next() ^ (index * 0xd1b54a32d192ed03ULL));
    return b.next();
}

ComplexMatrix gaussian_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix M(rows, cols);
    const double scale = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            M(i, j) = Complex(re * scale, im * scale);
        }
    }
    return M;
}

ComplexMatrix random_unitary(SplitMix64& rng, Eigen::Index size) {
    const ComplexMatrix A = gaussian_matrix(rng, size, size);
    Eigen::HouseholderQR<ComplexMatrix> qr(A);
    ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(size, size);
    const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < size; ++k) {
        const Complex d = R(k, k);
        if (std::abs(d) > 0) Q.col(k) *= d / std::abs(d);
    }
    return Q;
}

Frame random_plane(const GrassmannSpace& space, std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng(stream_seed(seed, index));
    if (space.compact()) {
        const ComplexMatrix A = gaussian_matrix(rng, space.ambient_dim(), space.n);
        Eigen::HouseholderQR<ComplexMatrix> qr(A);
        ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(space.ambient_dim(), space.n);
        return Frame::orthonormalized(space, Q);
    }
    return exp0_frame(TangentVector(space, gaussian_matrix(rng, space.n, space.m)));
}

TangentVector random_tangent(const GrassmannSpace& space, SplitMix64& rng, double max_norm) {
    ComplexMatrix B = gaussian_matrix(rng, space.n, space.m);
    const double target = max_norm * (1.0 - rng.uniform());
    B *= target / B.norm();
    return TangentVector(space, std::move(B));
}

ChartPoint random_chart_point(const GrassmannSpace& space, SplitMix64& rng) {
    const ComplexMatrix G = gaussian_matrix(rng, space.n, space.m);
    if (space.compact()) return ChartPoint(space, G);
    return ChartPoint(space, apply_spectral(G, [](double x) { return std::tanh(x); }));
}

}  // namespace grassgeo
