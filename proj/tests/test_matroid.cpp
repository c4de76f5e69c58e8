#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tropmod/error.hpp"
#include "tropmod/matroid.hpp"

using namespace tropmod;

TEST_CASE("rank axioms hold for the basic constructions") {
    CHECK(Matroid::uniform(2, 3).check_rank_axioms());
    CHECK(Matroid::uniform(3, 4).check_rank_axioms());
    CHECK(Matroid::graphic_complete(4).check_rank_axioms());
}

TEST_CASE("uniform closures") {
    Matroid u23 = Matroid::uniform(2, 3);
    CHECK(u23.closure(std::vector<int>{1}) == std::vector<int>{1});
    CHECK(u23.closure(std::vector<int>{1, 2}) == std::vector<int>{1, 2, 3});
}

TEST_CASE("graphic closure of two triangle edges") {
    // edges of K4 in lex order: 12,13,14,23,24,34 -> ids 1..6
    Matroid k4 = Matroid::graphic_complete(4);
    CHECK(k4.rank() == 3);
    // {12,13} spans the triangle {12,13,23}
    CHECK(k4.closure(std::vector<int>{1, 2}) == std::vector<int>{1, 2, 4});
    // one perfect matching {12,34} has rank 2
    CHECK(k4.rank_of(std::vector<int>{1, 6}) == 2);
}

TEST_CASE("flats of U23 and K3") {
    Matroid u23 = Matroid::uniform(2, 3);
    auto flats = u23.flats_by_rank();
    REQUIRE(flats.size() == 3);
    CHECK(flats[0] == std::vector<uint32_t>{0});
    CHECK(flats[1].size() == 3);
    CHECK(flats[2] == std::vector<uint32_t>{7});
    Matroid k3 = Matroid::graphic_complete(3);
    CHECK(k3.flats_by_rank() == flats);
}

TEST_CASE("flats of M(K4)") {
    Matroid k4 = Matroid::graphic_complete(4);
    auto flats = k4.flats_by_rank();
    REQUIRE(flats.size() == 4);
    CHECK(flats[1].size() == 6); // single edges
    CHECK(flats[2].size() == 7); // 4 triangles + 3 disjoint edge pairs
    int triangles = 0, matchings = 0;
    for (uint32_t f : flats[2]) {
        int size = __builtin_popcount(f);
        if (size == 3) ++triangles;
        if (size == 2) ++matchings;
    }
    CHECK(triangles == 4);
    CHECK(matchings == 3);
    // 14 proper flats including the empty one
    CHECK(k4.proper_flats().size() + 1 == 14);
}

TEST_CASE("deletion and contraction of U23") {
    Matroid u23 = Matroid::uniform(2, 3);
    Matroid del = u23.deletion(3);
    CHECK(del.ground_size() == 2);
    CHECK(del.rank() == 2); // free matroid on two elements
    CHECK(del.rank_of(std::vector<int>{1}) == 1);
    Matroid con = u23.contraction(3);
    CHECK(con.ground_size() == 2);
    CHECK(con.rank() == 1); // U(1,2)
    CHECK(con.rank_of(std::vector<int>{1}) == 1);
    CHECK_THROWS_AS((void)u23.deletion(9), Error);
}

TEST_CASE("deletion flats match the quoted formula") {
    Matroid k4 = Matroid::graphic_complete(4);
    int e = 6;
    Matroid del = k4.deletion(e);
    // flats(M\e) = {F \ {e} : F flat of M} as sets
    std::set<uint32_t> expected;
    for (const auto& level : k4.flats_by_rank())
        for (uint32_t f : level) {
            uint32_t cleared = f & ~(1u << (e - 1));
            // renumbering is trivial here because e is the last element
            expected.insert(cleared);
        }
    std::set<uint32_t> got;
    for (const auto& level : del.flats_by_rank())
        for (uint32_t f : level) got.insert(f);
    CHECK(got == expected);
}

TEST_CASE("contraction flats match the quoted formula") {
    Matroid k4 = Matroid::graphic_complete(4);
    int e = 6;
    Matroid con = k4.contraction(e);
    std::set<uint32_t> expected;
    for (const auto& level : k4.flats_by_rank())
        for (uint32_t f : level)
            if (f & (1u << (e - 1))) expected.insert(f & ~(1u << (e - 1)));
    std::set<uint32_t> got;
    for (const auto& level : con.flats_by_rank())
        for (uint32_t f : level) got.insert(f);
    CHECK(got == expected);
}

TEST_CASE("truncation") {
    Matroid u34 = Matroid::uniform(3, 4);
    Matroid t = u34.truncation();
    CHECK(t.rank() == 2);
    CHECK(t.check_rank_axioms());
    // flats of T(M) = low-rank flats of M plus the ground set
    Matroid k4 = Matroid::graphic_complete(4);
    Matroid tk4 = k4.truncation();
    CHECK(tk4.rank() == 2);
    auto flats = tk4.flats_by_rank();
    CHECK(flats[1].size() == 6);
    CHECK(flats[2] == std::vector<uint32_t>{(1u << 6) - 1});
    CHECK_THROWS_AS((void)Matroid::uniform(1, 3).truncation(), Error);
}

TEST_CASE("bergman fan of U23") {
    WeightedComplex b = bergman_fan(Matroid::uniform(2, 3));
    CHECK(b.dim() == 2);
    CHECK(b.maximal_ids().size() == 3);
    for (int i : b.maximal_ids()) CHECK(b.weight(i) == 1);
    REQUIRE(b.lineality().size() == 1);
    CHECK(b.lineality()[0] == ZVec{Int(1), Int(1), Int(1)});
    CHECK(b.is_balanced().ok);
}

TEST_CASE("bergman fan of U1m is the lineality line") {
    WeightedComplex b = bergman_fan(Matroid::uniform(1, 4));
    CHECK(b.dim() == 1);
    CHECK(b.maximal_ids().size() == 1);
    CHECK(b.lineality().size() == 1);
}

TEST_CASE("bergman fan of M(K4)") {
    WeightedComplex b = bergman_fan(Matroid::graphic_complete(4));
    CHECK(b.dim() == 3);
    // complete flags: edge < rank-2 flat; triangles contain 3 edges,
    // matchings contain 2: 4*3 + 3*2 = 18 maximal cones
    CHECK(b.maximal_ids().size() == 18);
    CHECK(b.is_balanced().ok);
}

TEST_CASE("bergman fan rejects loops") {
    Matroid loopy = Matroid::from_oracle(2, "loopy", [](uint32_t s) { return (s & 1u) ? 1 : 0; });
    CHECK_THROWS_AS((void)bergman_fan(loopy), Error);
}

TEST_CASE("circuits through an element") {
    Matroid u23 = Matroid::uniform(2, 3);
    auto c = u23.circuits_through(3);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 0b111u);
    Matroid k4 = Matroid::graphic_complete(4);
    // circuits through edge 34 (id 6): triangles 134 and 234, and two 4-cycles
    auto c6 = k4.circuits_through(6);
    CHECK(c6.size() == 4);
}
