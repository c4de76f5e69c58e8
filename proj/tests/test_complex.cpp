#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tropmod/complex.hpp"
#include "tropmod/error.hpp"

using namespace tropmod;

namespace {

QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.push_back(rat(x));
    return v;
}

Polyhedron ray_cone(std::initializer_list<long> dir) {
    QVec d;
    int n = 0;
    for (long x : dir) {
        d.push_back(rat(x));
        ++n;
    }
    return Polyhedron::from_generators(n, {zero_qvec(n)}, {d}, {});
}

// the tropical line with rays (1,0), (0,1), (-1,-1)
WeightedComplex tropical_line() {
    return WeightedComplex::from_maximal_cells(
        2, {{ray_cone({1, 0}), 1}, {ray_cone({0, 1}), 1}, {ray_cone({-1, -1}), 1}});
}

} // namespace

TEST_CASE("face lattice of the tropical line") {
    WeightedComplex line = tropical_line();
    CHECK(line.dim() == 1);
    CHECK(line.ncells() == 4); // origin + 3 rays
    CHECK(line.maximal_ids().size() == 3);
    CHECK(line.codim1_ids().size() == 1);
    line.validate();
}

TEST_CASE("balancing of the tropical line") {
    WeightedComplex line = tropical_line();
    BalanceReport rep = line.is_balanced();
    CHECK(rep.ok);
    CHECK(rep.checked == 1);
}

TEST_CASE("unbalanced pair of rays") {
    WeightedComplex bad = WeightedComplex::from_maximal_cells(
        2, {{ray_cone({1, 0}), 1}, {ray_cone({0, 1}), 1}});
    BalanceReport rep = bad.is_balanced();
    CHECK(!rep.ok);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].residual == ZVec{Int(1), Int(1)});
}

TEST_CASE("line in R^1 is balanced") {
    WeightedComplex l = WeightedComplex::from_maximal_cells(
        1, {{ray_cone({1}), 1}, {ray_cone({-1}), 1}});
    CHECK(l.is_balanced().ok);
}

TEST_CASE("normal vector examples") {
    // sigma = cone<(1,0),(1,2)>, tau = ray (1,0): primitive normal is (0,1) mod tau
    Polyhedron sigma =
        Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0}), qv({1, 2})}, {});
    WeightedComplex c = WeightedComplex::from_maximal_cells(2, {{sigma, 1}});
    int tau = -1, sig = -1;
    for (int i = 0; i < c.ncells(); ++i) {
        if (c.cell(i).dim() == 2) sig = i;
        if (c.cell(i).dim() == 1 && c.cell(i).contains(qv({1, 0}))) tau = i;
    }
    REQUIRE(tau >= 0);
    REQUIRE(sig >= 0);
    CHECK(c.normal_vector(tau, sig) == ZVec{Int(0), Int(1)});
}

TEST_CASE("normal vector rejects non-facets") {
    WeightedComplex line = tropical_line();
    int origin = -1, r = -1;
    for (int i = 0; i < line.ncells(); ++i) {
        if (line.cell(i).dim() == 0) origin = i;
        if (line.cell(i).dim() == 1) r = i;
    }
    CHECK_THROWS_AS((void)line.normal_vector(r, origin), Error);
}

TEST_CASE("star of the tropical line") {
    WeightedComplex line = tropical_line();
    // at the vertex the star is the line itself
    WeightedComplex at_vertex = line.star(qv({0, 0}));
    CHECK(at_vertex.equals_as_cycle(line));
    // in the interior of a ray the star is the full line spanned by it
    WeightedComplex at_ray = line.star(qv({2, 0}));
    CHECK(at_ray.dim() == 1);
    CHECK(at_ray.maximal_ids().size() == 1);
    REQUIRE(at_ray.lineality().size() == 1);
    CHECK(at_ray.lineality()[0] == ZVec{Int(1), Int(0)});
    CHECK_THROWS_AS((void)line.star(qv({-5, 3})), Error);
}

TEST_CASE("star of balanced complex is balanced") {
    WeightedComplex line = tropical_line();
    CHECK(line.star(qv({0, 0})).is_balanced().ok);
    CHECK(line.star(qv({0, 2})).is_balanced().ok);
}

TEST_CASE("cross products") {
    WeightedComplex line = tropical_line();
    WeightedComplex r = WeightedComplex::real_line();
    WeightedComplex prod = line.cross(r);
    CHECK(prod.dim() == 2);
    CHECK(prod.ambient() == 3);
    CHECK(prod.maximal_ids().size() == 3);
    for (int i : prod.maximal_ids()) CHECK(prod.weight(i) == 1);
    CHECK(prod.is_balanced().ok);

    WeightedComplex w2 = line.scale(Int(2));
    WeightedComplex w3 = r.scale(Int(3));
    WeightedComplex p = w2.cross(w3);
    for (int i : p.maximal_ids()) CHECK(p.weight(i) == 6);
}

TEST_CASE("sum of horizontal and vertical line") {
    WeightedComplex h = WeightedComplex::from_maximal_cells(
        2, {{Polyhedron::from_generators(2, {qv({0, 0})}, {}, {qv({1, 0})}), 1}});
    WeightedComplex v = WeightedComplex::from_maximal_cells(
        2, {{Polyhedron::from_generators(2, {qv({0, 0})}, {}, {qv({0, 1})}), 1}});
    WeightedComplex x2 = h.sum(v);
    CHECK(x2.dim() == 1);
    CHECK(x2.maximal_ids().size() == 4); // both lines split at the origin
    CHECK(x2.is_balanced().ok);
    x2.validate();
}

TEST_CASE("sum with negation cancels") {
    WeightedComplex line = tropical_line();
    CHECK(line.sum(line.scale(Int(-1))).is_empty());
    CHECK(line.equals_as_cycle(line));
    // X + X has doubled weights
    WeightedComplex dbl = line.sum(line);
    CHECK(dbl.equals_as_cycle(line.scale(Int(2))));
}

TEST_CASE("refinement keeps the cycle") {
    WeightedComplex r = WeightedComplex::real_line();
    WeightedComplex refined = r.refine_along(
        WeightedComplex::single_point(qv({0})));
    CHECK(refined.maximal_ids().size() == 2);
    CHECK(refined.equals_as_cycle(r));
    CHECK(refined.equal_support(r));
}

TEST_CASE("equality modulo refinement") {
    // the same tropical line built with a redundant vertex on a ray
    WeightedComplex line = tropical_line();
    Polyhedron seg = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0})}, {}, {});
    Polyhedron tail = Polyhedron::from_generators(2, {qv({1, 0})}, {qv({1, 0})}, {});
    WeightedComplex line2 = WeightedComplex::from_maximal_cells(
        2, {{seg, 1}, {tail, 1}, {ray_cone({0, 1}), 1}, {ray_cone({-1, -1}), 1}});
    CHECK(line2.equals_as_cycle(line));
    CHECK(!line2.equal_support(tropical_line().scale(Int(1)).sum(
        WeightedComplex::from_maximal_cells(2, {{ray_cone({1, 1}), 1}}))));
}
