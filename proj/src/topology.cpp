#include "grassgeo/topology.hpp"

#include <numeric>
#include <sstream>

#include "grassgeo/errors.hpp"

namespace grassgeo {

namespace {

constexpr std::uint64_t kMaxCells = 1'000'000;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "integer result exceeds 64 bits");
    return out;
}

void require_dims(int n, int m) {
    if (n < 1 || m < 1) throw Error(ErrorKind::Precondition, "need n >= 1 and m >= 1");
}

int legendre(int k, int p) {
    int e = 0;
    for (long long q = p; q <= k; q *= p) e += static_cast<int>(k / q);
    return e;
}

}  // namespace

std::uint64_t binomial(int total, int k) {
    if (k < 0 || k > total) return 0;
    k = std::min(k, total - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (total - k + i) / i, reduced first so the product stays small.
        std::uint64_t num = static_cast<std::uint64_t>(total - k + i);
        std::uint64_t den = static_cast<std::uint64_t>(i);
        const std::uint64_t g1 = std::gcd(result, den);
        result /= g1;
        den /= g1;
        const std::uint64_t g2 = std::gcd(num, den);
        num /= g2;
        den /= g2;
        result = checked_mul(result, num) / den;
    }
    return result;
}

std::uint64_t euler_characteristic(int n, int m) {
    require_dims(n, m);
    const int N = n + m;
    std::vector<bool> composite(static_cast<std::size_t>(N) + 1, false);
    std::uint64_t result = 1;
    for (int p = 2; p <= N; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        for (long long q = static_cast<long long>(p) * p; q <= N; q += p) composite[static_cast<std::size_t>(q)] = true;
        const int e = legendre(N, p) - legendre(n, p) - legendre(m, p);
        for (int i = 0; i < e; ++i) result = checked_mul(result, static_cast<std::uint64_t>(p));
    }
    return result;
}

std::vector<std::uint64_t> poincare_polynomial(int n, int m) {
    require_dims(n, m);
    // G(a, b) = G(a-1, b) + q^a G(a, b-1), G(0, b) = G(a, 0) = 1, indexed by
    // a = planes of dimension, b = codimension.
    using Poly = std::vector<std::uint64_t>;
    auto add_shifted = [](const Poly& x, const Poly& y, int shift) {
        Poly out(std::max(x.size(), y.size() + static_cast<std::size_t>(shift)), 0);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (__builtin_add_overflow(out[i + static_cast<std::size_t>(shift)], y[i],
                                       &out[i + static_cast<std::size_t>(shift)])) {
                throw Error(ErrorKind::Overflow, "integer result exceeds 64 bits");
            }
        }
        return out;
    };
    std::vector<std::vector<Poly>> table(static_cast<std::size_t>(n) + 1,
                                         std::vector<Poly>(static_cast<std::size_t>(m) + 1, Poly{1}));
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= m; ++b) {
            table[a][b] = add_shifted(table[a - 1][b], table[a][b - 1], a);
        }
    }
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

std::vector<SchubertSymbol> schubert_cells(int n, int m) {
    require_dims(n, m);
    std::uint64_t count = 0;
    try {
        count = binomial(n + m, n);
    } catch (const Error&) {
        throw Error(ErrorKind::Size, "schubert_cells: enumeration too large");
    }
    if (count > kMaxCells) {
        std::ostringstream os;
        os << "schubert_cells: " << count << " cells exceeds the enumeration limit of " << kMaxCells;
        throw Error(ErrorKind::Size, os.str(), static_cast<double>(count));
    }
    std::vector<SchubertSymbol> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> omega(static_cast<std::size_t>(n), 0);
    while (true) {
        out.emplace_back(omega, m);
        int i = n - 1;
        while (i >= 0 && omega[static_cast<std::size_t>(i)] == m) --i;
        if (i < 0) break;
        const int v = omega[static_cast<std::size_t>(i)] + 1;
        for (int j = i; j < n; ++j) omega[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

bool CharacteristicReport::all_equal() const {
    return euler == weyl_ratio && euler == cell_count && euler == fundamental_rep_dim && euler == kodaira_N &&
           euler == critical_count && euler == max_orthogonal_coherent;
}

CharacteristicReport characteristic_report(int n, int m, const EnergySpec& eps) {
    require_dims(n, m);
    const GrassmannSpace space(n, m, Curvature::Compact);
    CharacteristicReport r{};
    // Only even-dimensional cells, so chi is the Poincare polynomial at q = 1.
    for (std::uint64_t c : poincare_polynomial(n, m)) r.euler += c;
    r.weyl_ratio = euler_characteristic(n, m);
    r.cell_count = schubert_cells(n, m).size();
    r.fundamental_rep_dim = binomial(n + m, n);
    r.kodaira_N = plucker_embed(origin_frame(space)).components.size();
    r.critical_count = critical_points(space, eps).size();

    std::vector<Frame> states;
    for (const auto& S : index_subsets(n + m, n)) states.push_back(coordinate_plane(space, S));
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const double overlap = std::abs(plucker_overlap_oracle(states[i], states[j]));
            if (overlap >= 1e-14) {
                throw Error(ErrorKind::Consistency, "coordinate coherent states are not pairwise orthogonal", overlap);
            }
        }
    }
    r.max_orthogonal_coherent = states.size();

    if (!r.all_equal()) {
        std::ostringstream os;
        os << "characteristic numbers disagree: euler=" << r.euler << " weyl_ratio=" << r.weyl_ratio
           << " cells=" << r.cell_count << " rep_dim=" << r.fundamental_rep_dim << " kodaira_N=" << r.kodaira_N
           << " critical=" << r.critical_count << " orthogonal=" << r.max_orthogonal_coherent;
        throw Error(ErrorKind::Consistency, os.str());
    }
    return r;
}

}  // namespace grassgeo
