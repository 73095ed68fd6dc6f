#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "dualdec/pmf.hpp"
#include "oracles.hpp"

using namespace dualdec;

TEST_CASE("convolution") {
    Field gf4 = Field::gf(4);
    CHECK(convolve(Pmf::delta(gf4, 2), Pmf::delta(gf4, 3)) == Pmf::delta(gf4, 1));

    std::mt19937_64 rng(7);
    Pmf Q = oracle::random_pmf(gf4, rng);
    Pmf u = convolve(Pmf::uniform(gf4), Q);
    for (int j = 0; j < 4; ++j) CHECK(u[static_cast<Symbol>(j)] == Catch::Approx(0.25).margin(1e-14));

    Pmf a(gf4, {0.5, 0.5, 0.0, 0.0});
    Pmf b(gf4, {0.5, 0.0, 0.5, 0.0});
    Pmf c = convolve(a, b);
    for (int j = 0; j < 4; ++j) CHECK(c[static_cast<Symbol>(j)] == Catch::Approx(0.25).margin(1e-14));

    CHECK_THROWS_AS(convolve(Pmf::uniform(gf4), Pmf::uniform(Field::gf(8))), FieldMismatchError);

    // delta_0 is the identity.
    for (int q : {4, 5, 9}) {
        Field f = Field::gf(q);
        Pmf p = oracle::random_pmf(f, rng);
        Pmf r = convolve(Pmf::delta(f, 0), p);
        CHECK(oracle::max_abs_diff(r.mass(), p.mass()) < 1e-15);
    }

    // Prime fields: group convolution is cyclic convolution mod q.
    for (int q : {3, 5, 7, 11}) {
        Field f = Field::gf(q);
        for (int trial = 0; trial < 20; ++trial) {
            Pmf p1 = oracle::random_pmf(f, rng), p2 = oracle::random_pmf(f, rng);
            CHECK(oracle::max_abs_diff(convolve(p1, p2).mass(), oracle::cyclic_convolve(p1, p2).mass()) < 1e-14);
        }
    }
}

TEST_CASE("tap permutation of a pmf") {
    Field gf4 = Field::gf(4);
    Pmf p(gf4, {0.1, 0.2, 0.3, 0.4});
    Pmf p2 = permute(p, 2);
    CHECK(p2.mass() == std::vector<double>{0.1, 0.4, 0.2, 0.3});  // (p0, p3, p1, p2)
    CHECK(permute(p, 1) == p);
    CHECK_THROWS_AS(permute(p, 0), ZeroScalarError);

    std::mt19937_64 rng(13);
    for (int q : {4, 5, 9, 16}) {
        Field f = Field::gf(q);
        Pmf r = oracle::random_pmf(f, rng);
        for (int h = 1; h < q; ++h) {
            Pmf round = permute(permute(r, static_cast<Symbol>(h)), f.inv(static_cast<Symbol>(h)));
            CHECK(oracle::max_abs_diff(round.mass(), r.mass()) < 1e-15);
        }
        // h(x+y) = hx + hy: permutation distributes over convolution.
        Pmf s = oracle::random_pmf(f, rng);
        for (int h = 1; h < q; ++h) {
            Pmf lhs = permute(convolve(r, s), static_cast<Symbol>(h));
            Pmf rhs = convolve(permute(r, static_cast<Symbol>(h)), permute(s, static_cast<Symbol>(h)));
            CHECK(oracle::max_abs_diff(lhs.mass(), rhs.mass()) < 1e-14);
        }
    }
}

TEST_CASE("normalize") {
    Field gf4 = Field::gf(4);
    Pmf p(gf4, {2.0, 1.0, 1.0, 0.0});
    p.normalize();
    CHECK(p.mass() == std::vector<double>{0.5, 0.25, 0.25, 0.0});
    Pmf same = p.normalized();
    CHECK(same == p);
    CHECK_THROWS_AS(Pmf(gf4, {0.0, 0.0, 0.0, 0.0}).normalize(), AllZeroMassError);
    CHECK(p.argmax() == 0);
}

TEST_CASE("group character transform") {
    Field gf4 = Field::gf(4);
    GroupTransform t(gf4);

    auto s_uni = t.forward(Pmf::uniform(gf4));
    CHECK(std::abs(s_uni.coeffs[0] - 1.0) < 1e-15);
    for (int j = 1; j < 4; ++j) CHECK(std::abs(s_uni.coeffs[static_cast<std::size_t>(j)]) < 1e-15);

    auto s_d0 = t.forward(Pmf::delta(gf4, 0));
    for (int j = 0; j < 4; ++j) CHECK(std::abs(s_d0.coeffs[static_cast<std::size_t>(j)] - 1.0) < 1e-15);

    std::mt19937_64 rng(17);
    for (int q : {4, 5, 8, 9, 16, 27}) {
        Field f = Field::gf(q);
        GroupTransform plan(f);
        for (int trial = 0; trial < 25; ++trial) {
            Pmf p1 = oracle::random_pmf(f, rng), p2 = oracle::random_pmf(f, rng);
            // Round trip.
            Pmf rt = plan.inverse(plan.forward(p1));
            CHECK(oracle::max_abs_diff(rt.mass(), p1.mass()) < 1e-12);
            // DC coefficient is the total mass.
            CHECK(std::abs(plan.forward(p1).coeffs[0] - 1.0) < 1e-12);
            // Convolution theorem.
            auto s1 = plan.forward(p1), s2 = plan.forward(p2);
            for (int j = 0; j < q; ++j) s1.coeffs[static_cast<std::size_t>(j)] *= s2.coeffs[static_cast<std::size_t>(j)];
            Pmf via_transform = plan.inverse(s1);
            Pmf direct = convolve(p1, p2);
            CHECK(oracle::max_abs_diff(via_transform.mass(), direct.mass()) < 1e-12);
        }
    }
}

TEST_CASE("real WHT fast path matches the complex transform for p=2") {
    std::mt19937_64 rng(19);
    for (int q : {2, 4, 8, 16}) {
        Field f = Field::gf(q);
        GroupTransform plan(f);
        Pmf p = oracle::random_pmf(f, rng);
        std::vector<double> re = p.mass();
        GroupTransform::wht_in_place(re);
        auto cx = plan.forward(p);
        for (int j = 0; j < q; ++j) {
            CHECK(std::abs(cx.coeffs[static_cast<std::size_t>(j)].real() - re[static_cast<std::size_t>(j)]) < 1e-13);
            CHECK(std::abs(cx.coeffs[static_cast<std::size_t>(j)].imag()) < 1e-13);
        }
    }
}

TEST_CASE("spectrum permutation matches pmf permutation") {
    std::mt19937_64 rng(23);
    for (int q : {4, 5, 9, 16, 27}) {
        Field f = Field::gf(q);
        GroupTransform plan(f);
        Pmf p = oracle::random_pmf(f, rng);
        for (int h = 1; h < q; ++h) {
            auto lhs = plan.forward(permute(p, static_cast<Symbol>(h)));
            auto base = plan.forward(p);
            auto map = plan.spectrum_permutation(static_cast<Symbol>(h));
            for (int j = 0; j < q; ++j)
                CHECK(std::abs(lhs.coeffs[static_cast<std::size_t>(j)] - base.coeffs[map[static_cast<std::size_t>(j)]]) < 1e-12);
        }
    }
}
