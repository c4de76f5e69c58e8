#pragma once

#include "tropmod/polyhedron.hpp"

namespace tropmod {

// Affine term a.x + c. Covectors are rational; integrality on the relevant
// cell lattices is asserted where the intersection theory requires it.
struct AffineTerm {
    QVec a;
    Rat c;

    Rat value(const QVec& x) const { return dot(a, x) + c; }
};

// Piecewise integer affine linear function built from max/min combinations of
// affine terms. Affine on every cell of a fine enough polyhedral structure;
// tie_hyperplanes() provides the cuts for such a refinement.
class RationalFunction {
public:
    RationalFunction() = default;

    static RationalFunction affine(QVec a, Rat c);
    static RationalFunction linear(QVec a) { return affine(std::move(a), Rat(0)); }
    static RationalFunction constant(int ambient, Rat c) {
        return affine(zero_qvec(ambient), std::move(c));
    }
    static RationalFunction max_of(std::vector<RationalFunction> children);
    static RationalFunction min_of(std::vector<RationalFunction> children);
    static RationalFunction max_terms(std::vector<AffineTerm> terms);
    // max{x_i - c_i}: cuts translated matroid fans down to a point class.
    static RationalFunction shifted_max(const QVec& center);

    int ambient() const { return ambient_; }
    bool is_affine() const { return kind_ == Kind::Affine; }
    const AffineTerm& term() const { return term_; }

    Rat value(const QVec& x) const;
    void collect_terms(std::vector<AffineTerm>& out) const;
    std::vector<Hyperplane> tie_hyperplanes() const;

    // The affine term representing the function on the given cell; throws
    // NotAffineOnCells when no single term dominates across the cell.
    AffineTerm active_term(const Polyhedron& cell) const;

    // Composition with the affine map x -> m x + t. The source dimension is
    // read off m unless given explicitly (needed when m has no rows).
    RationalFunction pullback(const QMat& m, const QVec& t, int source_dim = -1) const;

private:
    enum class Kind { Affine, Max, Min };
    Kind kind_ = Kind::Affine;
    AffineTerm term_;
    std::vector<RationalFunction> children_;
    int ambient_ = 0;
};

} // namespace tropmod
