#include <catch2/catch_amalgamated.hpp>

#include "dualdec/galois.hpp"
#include "oracles.hpp"

using namespace dualdec;

TEST_CASE("field construction") {
    Field gf4(2, 2);
    CHECK(gf4.q() == 4);
    CHECK(gf4.p() == 2);
    CHECK(gf4.irreducible() == std::vector<int>{1, 1, 1});

    Field gf5(5, 1);
    CHECK(gf5.q() == 5);

    CHECK_THROWS_AS(Field(2, 2, {0, 1, 1}), ReduciblePolynomialError);  // x^2 + x = x(x+1)
    CHECK_THROWS_AS(Field(4, 1), NotPrimeError);
    CHECK_THROWS_AS(Field(2, 9), UnsupportedSizeError);
    CHECK_THROWS_AS(Field::gf(6), UnsupportedSizeError);
    CHECK_THROWS_AS(Field::gf(512), UnsupportedSizeError);
}

TEST_CASE("all default irreducibles are valid") {
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 169, 243, 256}) {
        Field f = Field::gf(q);
        CHECK(f.q() == q);
        // Spot-check the group identities on a few elements.
        for (int a : {0, 1, q - 1}) {
            CHECK(f.add(static_cast<Symbol>(a), 0) == a);
            CHECK(f.mul(static_cast<Symbol>(a), 1) == a);
        }
    }
}

TEST_CASE("addition") {
    Field gf4 = Field::gf(4);
    CHECK(gf4.add(2, 3) == 1);
    for (int a = 0; a < 4; ++a) CHECK(gf4.add(static_cast<Symbol>(a), 0) == a);

    Field gf5 = Field::gf(5);
    CHECK(gf5.add(3, 4) == 2);

    for (int q : {4, 5, 8, 9, 25, 27}) {
        Field f = Field::gf(q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                CHECK(f.add(static_cast<Symbol>(a), static_cast<Symbol>(b)) ==
                      oracle::add_digits(f, static_cast<Symbol>(a), static_cast<Symbol>(b)));
    }
}

TEST_CASE("multiplication") {
    Field gf4 = Field::gf(4);
    CHECK(gf4.mul(2, 2) == 3);
    CHECK(gf4.mul(2, 3) == 1);
    for (int a = 0; a < 4; ++a) CHECK(gf4.mul(1, static_cast<Symbol>(a)) == a);

    for (int q : {4, 5, 8, 9, 16, 27}) {
        Field f = Field::gf(q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                CHECK(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) ==
                      oracle::mul_peasant(f, static_cast<Symbol>(a), static_cast<Symbol>(b)));
    }
}

TEST_CASE("multiplicative permutations") {
    Field gf4 = Field::gf(4);
    CHECK(gf4.mul_permutation(2) == std::vector<Symbol>{0, 2, 3, 1});
    CHECK(gf4.mul_permutation(1) == std::vector<Symbol>{0, 1, 2, 3});
    CHECK(gf4.mul_permutation(3) == std::vector<Symbol>{0, 3, 1, 2});
    CHECK_THROWS_AS(gf4.mul_permutation(0), ZeroScalarError);

    for (int q : {4, 5, 9, 16}) {
        Field f = Field::gf(q);
        for (int h = 1; h < q; ++h) {
            auto fwd = f.mul_permutation(static_cast<Symbol>(h));
            auto inv = f.mul_permutation(f.inv(static_cast<Symbol>(h)));
            for (int j = 0; j < q; ++j) CHECK(inv[fwd[static_cast<std::size_t>(j)]] == j);
        }
    }
}

TEST_CASE("field axioms, exhaustive up to GF(16)") {
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) {
        Field f = Field::gf(q);
        // Characteristic: adding an element to itself p times gives 0.
        for (int a = 0; a < q; ++a) {
            Symbol acc = 0;
            for (int i = 0; i < f.p(); ++i) acc = f.add(acc, static_cast<Symbol>(a));
            CHECK(acc == 0);
        }
        // Inverses.
        for (int a = 1; a < q; ++a) CHECK(f.mul(static_cast<Symbol>(a), f.inv(static_cast<Symbol>(a))) == 1);
        CHECK_THROWS_AS(f.inv(0), DivisionByZeroError);
        // Associativity and distributivity over all triples.
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                for (int c = 0; c < q; ++c) {
                    Symbol sa = static_cast<Symbol>(a), sb = static_cast<Symbol>(b), sc = static_cast<Symbol>(c);
                    REQUIRE(f.add(f.add(sa, sb), sc) == f.add(sa, f.add(sb, sc)));
                    REQUIRE(f.mul(f.mul(sa, sb), sc) == f.mul(sa, f.mul(sb, sc)));
                    REQUIRE(f.mul(sa, f.add(sb, sc)) == f.add(f.mul(sa, sb), f.mul(sa, sc)));
                    REQUIRE(f.mul(sa, sb) == f.mul(sb, sa));
                    REQUIRE(f.add(sa, sb) == f.add(sb, sa));
                }
        // Negation.
        for (int a = 0; a < q; ++a) CHECK(f.add(static_cast<Symbol>(a), f.neg(static_cast<Symbol>(a))) == 0);
    }
}

TEST_CASE("field descriptors") {
    CHECK(Field::parse("gf4") == Field(2, 2));
    CHECK(Field::parse("gf2^2:1,1,1") == Field(2, 2));
    CHECK(Field::parse("gf9") == Field(3, 2));
    CHECK(Field::gf(4).descriptor() == "gf4");
    Field custom(2, 3, {1, 0, 1, 1});  // x^3 + x^2 + 1
    CHECK(custom.descriptor() == "gf2^3:1,0,1,1");
    CHECK(Field::parse(custom.descriptor()) == custom);
    CHECK(Field::parse("gf4") != custom);

    CHECK_THROWS_AS(Field::parse("g4"), ParseError);
    CHECK_THROWS_AS(Field::parse("gfx"), ParseError);
    CHECK_THROWS_AS(Field::parse("gf2^2"), ParseError);
}
