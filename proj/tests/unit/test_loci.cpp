#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "grassgeo/errors.hpp"
#include "grassgeo/kernel.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/random.hpp"
#include "support/oracles.hpp"

using namespace grassgeo;
using grassgeo::testing::frame_containing_complement_vector;

namespace {

TangentVector diagonal_tangent(const GrassmannSpace& s, const std::vector<double>& d) {
    ComplexMatrix B = ComplexMatrix::Zero(s.n, s.m);
    for (std::size_t i = 0; i < d.size(); ++i) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return TangentVector(s, B);
}

Frame diagonal_plane(const GrassmannSpace& s, const std::vector<double>& angles) {
    return exp0_frame(diagonal_tangent(s, angles));
}

std::vector<double> times_of(const std::vector<ConjugateTime>& ts) {
    std::vector<double> out;
    for (const auto& c : ts) out.push_back(c.t);
    return out;
}

}  // namespace

TEST_CASE("cut_locus_test examples") {
    const GrassmannSpace s(2, 3);
    CHECK_FALSE(cut_locus_test(origin_frame(s)));
    // span(e_{n+1}, e_2)
    CHECK(cut_locus_test(coordinate_plane(s, {1, 2})));
    // CP^2: the hyperplane z_0 = 0
    const GrassmannSpace cp2(1, 2);
    CHECK(cut_locus_test(coordinate_plane(cp2, {1})));
    ComplexMatrix v = ComplexMatrix::Ones(3, 1);
    v(0, 0) = 0.0;
    CHECK(cut_locus_test(Frame::orthonormalized(cp2, v)));
    CHECK_THROWS_AS(cut_locus_test(origin_frame(GrassmannSpace(1, 1, Curvature::Noncompact))), Error);
}

TEST_CASE("cut locus agrees with the Plucker overlap and a right angle") {
    SplitMix64 rng(40);
    for (int trial = 0; trial < 100; ++trial) {
        const GrassmannSpace s(1 + trial % 3, 1 + (trial / 3) % 3);
        const Frame F = frame_containing_complement_vector(s, rng);
        CHECK(cut_locus_test(F));
        CHECK(std::abs(plucker_overlap_oracle(origin_frame(s), F)) < 1e-10);
        CHECK(principal_angles(origin_frame(s), F).back() > M_PI / 2 - 1e-5);
    }
    for (int trial = 0; trial < 200; ++trial) {
        const GrassmannSpace s(1 + trial % 3, 1 + (trial / 3) % 3);
        const Frame F = random_plane(s, 41, static_cast<std::uint64_t>(trial));
        CHECK_FALSE(cut_locus_test(F));
        CHECK(std::abs(plucker_overlap_oracle(origin_frame(s), F)) > 1e-6);
    }
}

TEST_CASE("disjoint_union_check") {
    const GrassmannSpace s(2, 2);
    const auto o = disjoint_union_check(origin_frame(s));
    CHECK(o.branch == DecompositionResult::Branch::Chart);
    REQUIRE(o.chart.has_value());
    CHECK(o.chart->matrix().norm() == 0.0);
    CHECK(disjoint_union_check(coordinate_plane(s, {2, 3})).branch == DecompositionResult::Branch::PolarDivisor);

    // cos of the angle set to 5e-9 puts |det| inside [tol, 10 tol)
    const Frame near = diagonal_plane(s, {M_PI / 2 - 5e-9, 0.0});
    const auto r = disjoint_union_check(near);
    CHECK(r.branch == DecompositionResult::Branch::NearDivisor);
    CHECK(r.det_modulus == doctest::Approx(5e-9).epsilon(1e-6));

    for (int trial = 0; trial < 300; ++trial) {
        const Frame F = random_plane(s, 42, static_cast<std::uint64_t>(trial));
        const auto d = disjoint_union_check(F);
        CHECK(d.branch == DecompositionResult::Branch::Chart);
        CHECK(d.chart.has_value() != cut_locus_test(F));
    }
}

TEST_CASE("CartanVector normalization") {
    CHECK_NOTHROW(CartanVector({0.8, 0.6}));
    CHECK_THROWS_AS(CartanVector({1.0, 1.0}), Error);
    const CartanVector h = CartanVector::normalized({3.0, 4.0});
    CHECK(h.values()[0] == doctest::Approx(0.6));
    CHECK_THROWS_AS(CartanVector::normalized({0.0, 0.0}), Error);
}

TEST_CASE("tangent_conjugate_times on CP^1") {
    const auto ts = tangent_conjugate_times(GrassmannSpace(1, 1), CartanVector({1.0}), 4.0);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].t == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(ts[0].family() == ConjugateFamily::T2);
    CHECK(ts[0].multiplicity == 1);
    CHECK(ts[1].t == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(ts[1].multiplicity == 1);
    CHECK(ts[1].sources.front().lambda == 2);
}

TEST_CASE("tangent_conjugate_times on CP^2 coalesces at pi") {
    const auto ts = tangent_conjugate_times(GrassmannSpace(1, 2), CartanVector({1.0}), 3.5);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].t == doctest::Approx(M_PI / 2));
    CHECK(ts[0].multiplicity == 1);
    CHECK(ts[1].t == doctest::Approx(M_PI));
    // T2 with lambda = 2 and T3 with lambda = 1 share pi: 1 + 2|m - n|
    CHECK(ts[1].multiplicity == 3);
    bool has_t3 = false;
    for (const auto& src : ts[1].sources) has_t3 |= src.family == ConjugateFamily::T3 && src.multiplicity == 2;
    CHECK(has_t3);
}

TEST_CASE("tangent_conjugate_times on G_2(C^4)") {
    const auto ts = tangent_conjugate_times(GrassmannSpace(2, 2), CartanVector({0.8, 0.6}), 3.0);
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].t == doctest::Approx(M_PI / 1.6).epsilon(1e-14));
    CHECK(ts[0].family() == ConjugateFamily::T2);
    CHECK(ts[0].sources.front().p == 0);
    CHECK(ts[1].t == doctest::Approx(M_PI / 1.4).epsilon(1e-14));
    CHECK(ts[1].family() == ConjugateFamily::T1);
    CHECK(ts[1].sources.front().sign == 1);
    CHECK(ts[1].multiplicity == 2);
    CHECK(ts[2].t == doctest::Approx(M_PI / 1.2).epsilon(1e-14));
    CHECK(ts[2].sources.front().p == 1);
    CHECK(std::is_sorted(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.t < b.t; }));
}

TEST_CASE("tangent_conjugate_times skips vanishing denominators") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto ts = tangent_conjugate_times(GrassmannSpace(2, 2), CartanVector({r, r}), 10.0);
    for (const auto& c : ts) {
        for (const auto& src : c.sources) CHECK_FALSE((src.family == ConjugateFamily::T1 && src.sign == -1));
    }
    const auto zero = tangent_conjugate_times(GrassmannSpace(2, 3), CartanVector({1.0, 0.0}), 10.0);
    for (const auto& c : zero) {
        for (const auto& src : c.sources) {
            if (src.family != ConjugateFamily::T1) CHECK(src.p == 0);
        }
    }
    CHECK(tangent_conjugate_times(GrassmannSpace(1, 2, Curvature::Noncompact), CartanVector({1.0}), 10.0).empty());
}

TEST_CASE("cartan_to_tangent") {
    const TangentVector B = cartan_to_tangent(GrassmannSpace(1, 3), CartanVector({1.0}));
    CHECK(B.matrix()(0, 0) == Complex(1.0));
    CHECK(B.matrix().norm() == 1.0);
    const TangentVector C = cartan_to_tangent(GrassmannSpace(2, 3), CartanVector({0.8, 0.6}));
    CHECK(C.matrix()(1, 1) == Complex(0.6));
    CHECK(C.norm() == doctest::Approx(1.0));
    const auto angles = principal_angles(origin_frame(C.space()), exp0_frame(C.scaled(0.5)));
    CHECK(angles[0] == doctest::Approx(0.3));
    CHECK(angles[1] == doctest::Approx(0.4));
}

TEST_CASE("dexp_min_singular examples") {
    const GrassmannSpace cp1(1, 1);
    const TangentVector one = cartan_to_tangent(cp1, CartanVector({1.0}));
    CHECK(dexp_min_singular(one, 0.1) > 0.1);
    CHECK(dexp_min_singular(one, M_PI / 2) < 1e-3);
    CHECK(is_conjugate(one, M_PI / 2));
    CHECK_FALSE(is_conjugate(one, M_PI / 4));

    const GrassmannSpace g24(2, 2);
    const TangentVector h = cartan_to_tangent(g24, CartanVector({0.8, 0.6}));
    CHECK(dexp_min_singular(h, 0.5 * (M_PI / 1.6 + M_PI / 1.4)) > 1e-2);
    CHECK(is_conjugate(h, M_PI / 1.6));
    CHECK(is_conjugate(h, M_PI / 1.4));
    CHECK_FALSE(is_conjugate(h, M_PI / 3.2));

    CHECK_THROWS_AS(dexp_min_singular(one, 1.0, 1e-2), Error);
    CHECK_THROWS_AS(is_conjugate(TangentVector(cp1, ComplexMatrix::Zero(1, 1)), 1.0), Error);
}

TEST_CASE("dexp_min_singular does not depend on the frame gauge") {
    // a random rotation of the direction by U(n) x U(m) preserves the spectrum
    SplitMix64 rng(43);
    const GrassmannSpace s(2, 3);
    const TangentVector B = cartan_to_tangent(s, CartanVector({0.8, 0.6}));
    const ComplexMatrix U = random_unitary(rng, 2), V = random_unitary(rng, 3);
    const TangentVector B2(s, U * B.matrix() * V);
    for (double t : {0.7, 1.9, M_PI / 1.6}) {
        CHECK(std::abs(dexp_min_singular(B, t) - dexp_min_singular(B2, t)) < 1e-6);
    }
}

TEST_CASE("conjugate_scan marks predicted windows") {
    const GrassmannSpace cp1(1, 1);
    const auto scan = conjugate_scan(cp1, CartanVector({1.0}), 3.0, 300);
    REQUIRE(scan.size() == 300);
    CHECK(scan.back().t == doctest::Approx(3.0));
    for (const auto& p : scan) {
        CHECK(p.predicted == (std::abs(p.t - M_PI / 2) < 1e-2));
        if (p.predicted) {
            CHECK(p.min_singular_normalized < 1e-1);
        }
    }
    CHECK_THROWS_AS(conjugate_scan(cp1, CartanVector({1.0}), 3.0, 0), Error);
}

TEST_CASE("SchubertSymbol") {
    const SchubertSymbol w({0, 2, 2, 3}, 3);
    CHECK(w.sigma() == std::vector<int>{1, 4, 5, 7});
    CHECK(w.jumps() == std::vector<int>{1, 3, 4});
    CHECK(w.dimension() == 7);
    CHECK_THROWS_AS(SchubertSymbol({2, 1}, 3), Error);
    CHECK_THROWS_AS(SchubertSymbol({0, 4}, 3), Error);
    CHECK(wong_symbol(3, 1, 2, 3) == SchubertSymbol({2, 3}, 3));
}

TEST_CASE("schubert_dims") {
    const GrassmannSpace s(2, 3);
    const auto o = schubert_dims(origin_frame(s), Flag::standard(s));
    CHECK(o == std::vector<int>{1, 2, 2, 2, 2});
    const auto g = schubert_dims(random_plane(s, 44, 0), Flag::standard(s));
    CHECK(g == std::vector<int>{0, 0, 0, 1, 2});

    SplitMix64 rng(45);
    ComplexMatrix raw = gaussian_matrix(rng, 5, 2);
    raw.col(0).setZero();
    raw(0, 0) = 1.0;
    CHECK(schubert_dims(Frame::orthonormalized(s, raw), Flag::standard(s)).front() == 1);
}

TEST_CASE("schubert_membership") {
    const GrassmannSpace s(2, 3);
    const SchubertSymbol top({3, 3}, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto r = schubert_membership(random_plane(s, 46, static_cast<std::uint64_t>(trial)), top,
                                           Flag::standard(s));
        CHECK(r.in_Z);
        CHECK(r.generic);
    }
    // X = O is in V^n_1 for the flag with C^n = O
    CHECK(schubert_membership(origin_frame(s), wong_symbol(2, 1, 2, 3), Flag::standard(s)).in_Z);
    CHECK_FALSE(schubert_membership(random_plane(s, 46, 99), wong_symbol(2, 1, 2, 3), Flag::standard(s)).in_Z);
}

TEST_CASE("V^m_1 membership coincides with the cut locus") {
    SplitMix64 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
        const GrassmannSpace s(1 + trial % 3, 1 + (trial / 3) % 3);
        const SchubertSymbol v = wong_symbol(s.m, 1, s.n, s.m);
        const Flag flag = Flag::complement_first(s);
        const Frame on = frame_containing_complement_vector(s, rng);
        const Frame off = random_plane(s, 48, static_cast<std::uint64_t>(trial));
        CHECK(schubert_membership(on, v, flag).in_Z == cut_locus_test(on));
        CHECK(schubert_membership(off, v, flag).in_Z == cut_locus_test(off));
        CHECK(schubert_membership(on, v, flag).in_Z);
    }
}

TEST_CASE("conjugate strata") {
    const GrassmannSpace s(2, 2);
    CHECK(conjugate_stratum_W(origin_frame(s)));
    CHECK_FALSE(conjugate_stratum_W(random_plane(s, 49, 0)));
    // at t = pi / 1.6 the first angle reaches pi/2
    CHECK(conjugate_stratum_W(exp0_frame(cartan_to_tangent(s, CartanVector({0.8, 0.6})).scaled(M_PI / 1.6))));

    CHECK(conjugate_stratum_I(origin_frame(s)));
    CHECK(conjugate_stratum_I(diagonal_plane(s, {0.7, 0.7})));
    CHECK_FALSE(conjugate_stratum_I(diagonal_plane(s, {0.3, 0.9})));
    // at t = pi / 1.4 the angles 0.8t and pi - 0.6t coincide
    CHECK(conjugate_stratum_I(exp0_frame(cartan_to_tangent(s, CartanVector({0.8, 0.6})).scaled(M_PI / 1.4))));
}

TEST_CASE("predicted conjugate points land in a stratum") {
    for (auto [n, m, h] : std::vector<std::tuple<int, int, std::vector<double>>>{
             {1, 1, {1.0}}, {1, 2, {1.0}}, {2, 1, {1.0}}, {2, 2, {0.8, 0.6}}, {2, 3, {0.28, 0.96}}}) {
        const GrassmannSpace s(n, m);
        const CartanVector cv(h);
        const TangentVector B = cartan_to_tangent(s, cv);
        for (const auto& c : tangent_conjugate_times(s, cv, 6.0)) {
            const Frame F = exp0_frame(B.scaled(c.t));
            CHECK((conjugate_stratum_W(F, 1e-6) || conjugate_stratum_I(F, 1e-6)));
        }
    }
}

TEST_CASE("isoclinic_test") {
    const GrassmannSpace s(2, 2);
    const Frame F = random_plane(s, 50, 0);
    CHECK(isoclinic_test(F, F));
    CHECK(isoclinic_test(random_plane(GrassmannSpace(1, 3), 50, 1), random_plane(GrassmannSpace(1, 3), 50, 2)));
    CHECK(isoclinic_test(origin_frame(s), diagonal_plane(s, {0.4, 0.4})));
    CHECK_FALSE(isoclinic_test(origin_frame(s), diagonal_plane(s, {0.4, 0.8})));
}
