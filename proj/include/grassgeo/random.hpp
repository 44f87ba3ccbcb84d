#pragma once

// Reproducible random inputs. SplitMix64 (Steele, Lea & Flood 2014) is used
// as the bit source because its output is fixed by its definition on every
// platform; normals come from Box-Muller on 53-bit uniforms, so the whole
// pipeline from seed to matrix is platform independent.

#include <cstdint>

#include "grassgeo/grassmann.hpp"

namespace grassgeo {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller (one value per call).
    double normal();

private:
    std::uint64_t state_;
};

/// Independent stream seed for entry `index` of the stream started by `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Entries (x + i y) / sqrt(2) with x, y standard normal.
ComplexMatrix gaussian_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed unitary (QR of a Gaussian matrix with the phase of R's
/// diagonal removed).
ComplexMatrix random_unitary(SplitMix64& rng, Eigen::Index size);

/// Deterministic random plane for (seed, index). Compact: Haar via
/// orthonormalization of a Gaussian (n+m) x n matrix. Noncompact: exp0_frame
/// of a Gaussian tangent vector.
Frame random_plane(const GrassmannSpace& space, std::uint64_t seed, std::uint64_t index = 0);

/// Gaussian direction rescaled to a Frobenius norm drawn uniformly from (0, max_norm].
TangentVector random_tangent(const GrassmannSpace& space, SplitMix64& rng, double max_norm);

/// Chart point from a Gaussian matrix (compact) or from tanh of a Gaussian
/// tangent (noncompact, so it stays inside the unit ball).
ChartPoint random_chart_point(const GrassmannSpace& space, SplitMix64& rng);

}  // namespace grassgeo
