#pragma once

#include <optional>
#include <string>

#include "tropmod/linalg.hpp"

namespace tropmod {

// Oriented affine constraint a.x (>= or =) c.
struct Constraint {
    QVec a;
    Rat c;
    bool eq = false;
};

// Unoriented affine hyperplane a.x = c, normalized so the joint vector (a, c)
// is primitive integral with positive leading entry.
struct Hyperplane {
    ZVec a;
    Int c;

    static Hyperplane of(const QVec& normal, const Rat& rhs);
    std::string key() const;
};

struct HRep {
    QMat eq;
    QVec eq_rhs;
    QMat ineq;
    QVec ineq_rhs;
};

// Raw double description on cones: generators of {x : a.x >= 0 (or = 0)}.
// Returns (lineality basis, extreme rays mod lineality), not canonicalized.
std::pair<QMat, QMat> dd_cone(const std::vector<Constraint>& cons, int n);

// A rational polyhedron conv(points) + cone(rays) + span(lin), stored in a
// canonical V-representation. Empty iff it has no points.
class Polyhedron {
public:
    Polyhedron() = default;

    static Polyhedron empty(int ambient);
    static Polyhedron from_generators(int ambient, const std::vector<QVec>& points,
                                      const std::vector<QVec>& rays,
                                      const std::vector<QVec>& lin);
    static Polyhedron from_hrep(int ambient, const std::vector<Constraint>& cons);
    static Polyhedron point(const QVec& p);

    int ambient() const { return ambient_; }
    bool is_empty() const { return points_.empty(); }
    int dim() const;

    const std::vector<QVec>& points() const { return points_; }
    const ZMat& rays() const { return rays_; }
    const ZMat& lin() const { return lin_; }

    const HRep& hrep() const;

    // Saturated lattice of the direction space span(points - p0, rays, lin).
    const ZMat& lattice() const;
    // Direction-space lattice relative to a custom full-rank ambient lattice
    // (rows); empty means the standard lattice Z^n.
    ZMat lattice_in(const ZMat& ambient) const;
    // Rational basis of the direction space.
    QMat direction_span() const;

    QVec relative_interior_point() const;
    bool contains(const QVec& x) const;
    bool contains_in_relative_interior(const QVec& x) const;
    bool contains_polyhedron(const Polyhedron& other) const;

    Polyhedron intersect(const Polyhedron& other) const;
    // Closed halfspace pieces split by a.x = c.
    Polyhedron chop(const QVec& a, const Rat& c, int side) const; // side: +1 / -1
    // (has points with a.x > c, has points with a.x < c)
    std::pair<bool, bool> strict_sides(const QVec& a, const Rat& c) const;

    std::vector<Polyhedron> facets() const;

    // Affine image {m x + t}.
    Polyhedron affine_image(const QMat& m, const QVec& t) const;
    // Product with another polyhedron (coordinates concatenated).
    Polyhedron product(const Polyhedron& other) const;
    // Minkowski sum with a subspace.
    Polyhedron add_lineality(const QMat& extra_lin) const;

    bool is_cone() const; // 0 is a point of the polyhedron and points = {reducible to 0}

    const std::string& key() const;
    bool operator==(const Polyhedron& o) const { return key() == o.key(); }

private:
    int ambient_ = 0;
    std::vector<QVec> points_;
    ZMat rays_;
    ZMat lin_;
    mutable std::optional<HRep> hrep_;
    mutable std::optional<ZMat> lattice_;
    mutable std::optional<std::string> key_;

    void canonicalize_vrep();
    void compute_hrep() const;
};

} // namespace tropmod
