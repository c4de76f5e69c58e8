#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tropmod/polyhedron.hpp"

using namespace tropmod;

namespace {
QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.push_back(rat(x));
    return v;
}
} // namespace

TEST_CASE("segment") {
    Polyhedron p = Polyhedron::from_generators(1, {qv({0}), qv({2})}, {}, {});
    CHECK(p.dim() == 1);
    CHECK(p.points().size() == 2);
    CHECK(p.rays().empty());
    CHECK(p.contains(qv({1})));
    CHECK(!p.contains(qv({3})));
    CHECK(p.contains_in_relative_interior(qv({1})));
    CHECK(!p.contains_in_relative_interior(qv({0})));
    auto f = p.facets();
    CHECK(f.size() == 2);
}

TEST_CASE("simplicial cone in the plane") {
    Polyhedron c = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0}), qv({1, 2})}, {});
    CHECK(c.dim() == 2);
    CHECK(c.is_cone());
    CHECK(c.rays().size() == 2);
    // lattice of a full-dimensional cone is Z^2
    ZMat lat = c.lattice();
    REQUIRE(lat.size() == 2);
    CHECK(lat[0] == ZVec{Int(1), Int(0)});
    CHECK(lat[1] == ZVec{Int(0), Int(1)});
    CHECK(c.contains(qv({2, 1})));
    CHECK(!c.contains(qv({-1, 0})));
}

TEST_CASE("redundant generators collapse") {
    Polyhedron c = Polyhedron::from_generators(
        2, {qv({0, 0})}, {qv({1, 0}), qv({1, 1}), qv({0, 1})}, {});
    CHECK(c.rays().size() == 2); // (1,1) is not extreme
}

TEST_CASE("lineality detected from opposite rays") {
    Polyhedron line = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 1}), qv({-1, -1})}, {});
    CHECK(line.dim() == 1);
    CHECK(line.rays().empty());
    REQUIRE(line.lin().size() == 1);
    CHECK(line.lin()[0] == ZVec{Int(1), Int(1)});
}

TEST_CASE("halfplane") {
    Polyhedron h = Polyhedron::from_hrep(2, {{qv({0, 1}), rat(0), false}});
    CHECK(h.dim() == 2);
    CHECK(h.lin().size() == 1); // x-axis direction
    CHECK(h.rays().size() == 1);
    auto facets = h.facets();
    REQUIRE(facets.size() == 1);
    CHECK(facets[0].dim() == 1);
}

TEST_CASE("empty intersection") {
    Polyhedron a = Polyhedron::from_hrep(1, {{qv({1}), rat(1), false}});   // x >= 1
    Polyhedron b = Polyhedron::from_hrep(1, {{qv({-1}), rat(1), false}}); // x <= -1
    CHECK(a.intersect(b).is_empty());
}

TEST_CASE("square from inequalities") {
    std::vector<Constraint> cons{
        {qv({1, 0}), rat(0), false},
        {qv({-1, 0}), rat(-1), false},
        {qv({0, 1}), rat(0), false},
        {qv({0, -1}), rat(-1), false},
    };
    Polyhedron sq = Polyhedron::from_hrep(2, cons);
    CHECK(sq.dim() == 2);
    CHECK(sq.points().size() == 4);
    CHECK(sq.facets().size() == 4);
    QVec c = sq.relative_interior_point();
    CHECK(sq.contains_in_relative_interior(c));
}

TEST_CASE("chop and sides") {
    Polyhedron line = Polyhedron::from_generators(1, {qv({0})}, {}, {qv({1})});
    auto [pos, neg] = line.strict_sides(qv({1}), rat(0));
    CHECK(pos);
    CHECK(neg);
    Polyhedron hi = line.chop(qv({1}), rat(0), +1);
    CHECK(hi.rays().size() == 1);
    CHECK(hi.lin().empty());
    CHECK(hi.points().size() == 1);
}

TEST_CASE("product and affine image") {
    Polyhedron seg = Polyhedron::from_generators(1, {qv({0}), qv({1})}, {}, {});
    Polyhedron sq = seg.product(seg);
    CHECK(sq.dim() == 2);
    CHECK(sq.points().size() == 4);
    // project the square to the first coordinate
    QMat m{{rat(1), rat(0)}};
    Polyhedron img = sq.affine_image(m, qv({0}));
    CHECK(img.dim() == 1);
    CHECK(img.points().size() == 2);
}

TEST_CASE("contains polyhedron") {
    Polyhedron big = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0}), qv({0, 1})}, {});
    Polyhedron small = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 1})}, {});
    CHECK(big.contains_polyhedron(small));
    CHECK(!small.contains_polyhedron(big));
}

TEST_CASE("canonical keys agree for equal sets") {
    Polyhedron a = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({2, 2}), qv({1, 0})}, {});
    Polyhedron b = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 1}), qv({3, 0}), qv({2, 1})}, {});
    CHECK(a == b);
}
