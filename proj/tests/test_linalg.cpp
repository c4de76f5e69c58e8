#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tropmod/linalg.hpp"

using namespace tropmod;

TEST_CASE("rref and rank") {
    QMat a{{rat(1), rat(2)}, {rat(2), rat(4)}, {rat(0), rat(1)}};
    CHECK(rank(a) == 2);
    QMat b{{rat(0), rat(0)}};
    CHECK(rank(b) == 0);
}

TEST_CASE("solve") {
    QMat a{{rat(2), rat(0)}, {rat(0), rat(3)}};
    auto x = solve(a, {rat(4), rat(6)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 2);
    auto none = solve(QMat{{rat(1), rat(1)}, {rat(1), rat(1)}}, {rat(0), rat(1)});
    CHECK(!none.has_value());
}

TEST_CASE("nullspace") {
    QMat a{{rat(1), rat(1), rat(1)}};
    QMat ns = nullspace(a, 3);
    CHECK(ns.size() == 2);
    for (const auto& v : ns) CHECK(dot(a[0], v) == 0);
}

TEST_CASE("span intersection") {
    QMat a{{rat(1), rat(0), rat(0)}, {rat(0), rat(1), rat(0)}};
    QMat b{{rat(0), rat(1), rat(0)}, {rat(0), rat(0), rat(1)}};
    QMat meet = span_intersection(a, b, 3);
    REQUIRE(meet.size() == 1);
    CHECK(meet[0][0] == 0);
    CHECK(meet[0][2] == 0);
}

TEST_CASE("hnf basics") {
    // generators (1,0) and (1,2) span all of Z^2: HNF basis is the identity
    ZMat a{{Int(1), Int(0)}, {Int(1), Int(2)}};
    ZMat h = hnf(a);
    REQUIRE(h.size() == 2);
    CHECK(h[0] == ZVec{Int(1), Int(0)});
    CHECK(h[1] == ZVec{Int(0), Int(2)});
    // saturation recovers the full lattice
    ZMat sat = saturate(a, 2);
    REQUIRE(sat.size() == 2);
    CHECK(sat[0] == ZVec{Int(1), Int(0)});
    CHECK(sat[1] == ZVec{Int(0), Int(1)});
}

TEST_CASE("hnf of ray (2,2)") {
    ZMat h = saturate({{Int(2), Int(2)}}, 2);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == ZVec{Int(1), Int(1)});
}

TEST_CASE("z_kernel is saturated") {
    // kernel of (x,y,z) -> x + y + z contains (1,-1,0),(0,1,-1); saturated rank 2
    ZMat a{{Int(1), Int(1), Int(1)}};
    ZMat k = z_kernel(a, 3);
    REQUIRE(k.size() == 2);
    for (const auto& v : k) CHECK(v[0] + v[1] + v[2] == 0);
    // (1,-1,0) must be an integer combination of the basis
    QMat basis;
    for (const auto& r : k) basis.push_back(to_qvec(r));
    auto c = coordinates_in_basis(basis, QVec{rat(1), rat(-1), rat(0)});
    REQUIRE(c.has_value());
    CHECK(is_integral(*c));
}

TEST_CASE("lattice index") {
    ZMat super{{Int(1), Int(0)}, {Int(0), Int(1)}};
    ZMat sub{{Int(2), Int(0)}, {Int(0), Int(1)}};
    CHECK(lattice_index(super, sub) == 2);
    ZMat sub2{{Int(1), Int(0)}, {Int(1), Int(2)}};
    CHECK(lattice_index(super, sub2) == 2);
    CHECK(lattice_index(super, super) == 1);
}

TEST_CASE("reduce mod lattice") {
    ZMat basis = hnf({{Int(1), Int(0)}});
    ZVec v{Int(5), Int(3)};
    ZVec r = reduce_mod_lattice(v, basis);
    CHECK(r == ZVec{Int(0), Int(3)});
}

TEST_CASE("primitive") {
    CHECK(primitive(QVec{rat(2), rat(2)}) == ZVec{Int(1), Int(1)});
    CHECK(primitive(QVec{rat(1, 2), rat(3)}) == ZVec{Int(1), Int(6)});
    CHECK(primitive(QVec{rat(-2), rat(4)}) == ZVec{Int(-1), Int(2)});
    CHECK(primitive_line(QVec{rat(-2), rat(4)}) == ZVec{Int(1), Int(-2)});
}
