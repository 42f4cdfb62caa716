#include <doctest.h>

#include <bit>

#include "fermion_oracle.hpp"
#include "syknqs/basis.hpp"

using namespace syknqs;

TEST_CASE("sector enumeration matches binomial counts") {
    SectorBasis tiny(2, 1);
    REQUIRE(tiny.size() == 2);
    CHECK(tiny.word(0) == 0b01);
    CHECK(tiny.word(1) == 0b10);

    CHECK(SectorBasis(4, 2).size() == 6);
    // Oracle: direct binomial-coefficient computation.
    CHECK(SectorBasis(18, 9).size() == binomial(18, 9));
    CHECK(SectorBasis(18, 9).size() == 48620);
}

TEST_CASE("states are strictly increasing with the right popcount") {
    SectorBasis basis(10, 4);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(std::popcount(basis.word(i)) == 4);
        if (i > 0) CHECK(basis.word(i - 1) < basis.word(i));
        CHECK(basis.rank(basis.word(i)) == i);
    }
}

TEST_CASE("edge sectors") {
    CHECK(SectorBasis(5, 0).size() == 1);
    CHECK(SectorBasis(5, 5).size() == 1);
    CHECK_THROWS_AS(SectorBasis(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(SectorBasis(4, -1), std::invalid_argument);
    CHECK_THROWS_AS(SectorBasis(31, 2), std::invalid_argument);
}

TEST_CASE("apply_two_body on number-operator strings") {
    // n_0 n_1 on its eigenstate (sites 0 and 1 occupied)
    SignedState out = apply_two_body(0b0011, 0, 1, 1, 0, 4);
    REQUIRE(!out.annihilated);
    CHECK(out.word == 0b0011);
    CHECK(out.sign == +1);

    // annihilation on an empty site
    CHECK(apply_two_body(0b1100, 0, 1, 1, 0, 4).annihilated);
    CHECK_THROWS_AS(apply_two_body(0b0011, 0, 1, 1, 9, 4), std::invalid_argument);
}

TEST_CASE("apply_two_body agrees with the symbolic oracle exhaustively for L <= 5") {
    for (int L = 1; L <= 5; ++L) {
        for (Word w = 0; w < (Word{1} << L); ++w) {
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j)
                    for (int k = 0; k < L; ++k)
                        for (int l = 0; l < L; ++l) {
                            SignedState fast = apply_two_body(w, i, j, k, l, L);
                            fermion_oracle::State slow =
                                fermion_oracle::apply_two_body(w, i, j, k, l, L);
                            if (fast.annihilated) {
                                CHECK(slow.empty());
                            } else {
                                REQUIRE(slow.size() == 1);
                                const auto& [sites, coeff] = *slow.begin();
                                CHECK(fermion_oracle::to_word(sites) == fast.word);
                                CHECK(coeff == fast.sign);
                            }
                        }
        }
    }
}

TEST_CASE("particle number is conserved") {
    for (Word w = 0; w < 32; ++w) {
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k)
                    for (int l = 0; l < 5; ++l) {
                        SignedState out = apply_two_body(w, i, j, k, l, 5);
                        if (!out.annihilated) {
                            CHECK(std::popcount(out.word) == std::popcount(w));
                        }
                    }
    }
}

TEST_CASE("adjoint consistency of matrix elements") {
    // <w'| c+i c+j ck cl |w> == conj(<w| c+l c+k cj ci |w'>); elements are
    // real integers here, so conjugation is the identity.
    const int L = 5;
    for (Word w = 0; w < 32; ++w) {
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j)
                for (int k = 0; k < L; ++k)
                    for (int l = 0; l < L; ++l) {
                        SignedState fwd = apply_two_body(w, i, j, k, l, L);
                        if (fwd.annihilated) continue;
                        SignedState back = apply_two_body(fwd.word, l, k, j, i, L);
                        REQUIRE(!back.annihilated);
                        CHECK(back.word == w);
                        CHECK(back.sign == fwd.sign);
                    }
    }
}
