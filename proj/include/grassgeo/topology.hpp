#pragma once

// Exact combinatorial invariants of G_n(C^{n+m}).

#include <cstdint>
#include <vector>

#include "grassgeo/kernel.hpp"
#include "grassgeo/loci.hpp"

namespace grassgeo {

/// C(total, k) with overflow detection.
std::uint64_t binomial(int total, int k);

/// chi = |W_G| / |W_H| = (n+m)! / (n! m!), evaluated from prime exponents of
/// the factorials (Legendre) so no factorial is ever formed.
std::uint64_t euler_characteristic(int n, int m);

/// Coefficients c_k of the Poincare polynomial sum_k c_k q^k (q = t^2), the
/// Gaussian binomial [n+m choose n]_q built by the q-Pascal rule.
std::vector<std::uint64_t> poincare_polynomial(int n, int m);

/// Every Schubert symbol (Borel-Morse cell) in lexicographic order of omega.
/// Throws Size when there would be more than 10^6 cells.
std::vector<SchubertSymbol> schubert_cells(int n, int m);

/// The seven quantities that coincide on a flag manifold.
struct CharacteristicReport {
    std::uint64_t euler;                    // Poincare polynomial at t = -1
    std::uint64_t weyl_ratio;               // |W_G| / |W_H| via prime exponents
    std::uint64_t cell_count;               // enumerated Schubert cells
    std::uint64_t fundamental_rep_dim;      // dim Lambda^n C^{n+m}, multiplicative binomial
    std::uint64_t kodaira_N;                // length of the Plucker vector
    std::uint64_t critical_count;           // numerical critical points of f_H
    std::uint64_t max_orthogonal_coherent;  // pairwise orthogonal coordinate states

    bool all_equal() const;
};

/// Builds the report and throws Consistency unless all seven agree.
CharacteristicReport characteristic_report(int n, int m, const EnergySpec& eps);

}  // namespace grassgeo
