#pragma once

#include <map>

#include "tropmod/polyhedron.hpp"

namespace tropmod {

struct BalanceEntry {
    int tau = -1;
    bool ok = false;
    ZVec residual; // weighted sum of normal vectors (balanced iff it lies in V_tau)
};

struct BalanceReport {
    bool ok = true;
    std::vector<BalanceEntry> entries; // one per codimension-1 cell
    int checked = 0;
    int failed = 0;
};

// Pure-dimensional weighted rational polyhedral complex. Cells are stored in
// canonical form with full face lattice; weights live on maximal cells.
class WeightedComplex {
public:
    WeightedComplex() = default;

    static WeightedComplex empty(int ambient);
    static WeightedComplex from_maximal_cells(int ambient,
                                              const std::vector<std::pair<Polyhedron, Int>>& cells);
    // The real line R^1 as a one-cell complex of weight 1.
    static WeightedComplex real_line();
    // Full space R^n as a single weighted cell.
    static WeightedComplex full_space(int ambient);
    static WeightedComplex single_point(const QVec& p, const QMat& lineality = {});

    bool is_empty() const { return cells_.empty(); }
    int ambient() const { return ambient_; }
    int dim() const { return dim_; } // -1 when empty

    int ncells() const { return static_cast<int>(cells_.size()); }
    const Polyhedron& cell(int id) const { return cells_[id]; }
    const Int& weight(int id) const { return weights_[id]; }
    const std::vector<int>& facet_ids(int id) const { return covers_[id]; }
    const std::vector<int>& coface_ids(int id) const { return parents_[id]; }
    std::vector<int> cells_of_dim(int d) const;
    std::vector<int> maximal_ids() const;
    std::vector<int> codim1_ids() const;
    std::vector<std::pair<int, int>> face_relations() const; // covering pairs (sub, super)

    // Common lineality of all cells (saturated lattice basis).
    const ZMat& lineality() const { return lineality_; }

    // Ambient lattice (rows of a full-rank basis); empty = standard Z^n.
    // Moduli fans carry the lattice spanned by the split vectors.
    const ZMat& ambient_lattice() const { return ambient_lattice_; }
    WeightedComplex with_ambient_lattice(ZMat basis) const;
    // Quotient modulus: the subspace that is divided out when this complex
    // presents a cycle in a quotient space (Im(phi) for moduli fans). Unlike
    // the lineality, this is empty for honest cycles such as R^n.
    const ZMat& modulus() const { return modulus_; }
    WeightedComplex with_modulus(ZMat rows) const;
    QMat modulus_span() const;
    // Lattice of a cell's direction space inside the ambient lattice.
    const ZMat& cell_lattice(int id) const;

    int find_cell_of_relative_interior(const QVec& p) const; // -1 if none
    bool supports(const QVec& p) const;
    std::vector<int> cells_containing(const QVec& p) const;

    WeightedComplex scale(const Int& c) const;

    // Primitive normal vector of sigma relative to its codim-1 face tau,
    // HNF-reduced modulo the lattice of tau, pointing into sigma.
    ZVec normal_vector(int tau, int sigma) const;

    BalanceReport is_balanced() const;

    WeightedComplex star(const QVec& p) const;
    WeightedComplex cross(const WeightedComplex& other) const;
    WeightedComplex sum(const WeightedComplex& other) const;

    std::vector<Hyperplane> hyperplane_pool() const;
    WeightedComplex refine_along_pool(const std::vector<Hyperplane>& pool) const;
    WeightedComplex refine_along(const WeightedComplex& other) const;

    bool equals_as_cycle(const WeightedComplex& other) const;
    bool equal_support(const WeightedComplex& other) const;
    // Exact test that P lies inside the support of this complex.
    bool support_contains(const Polyhedron& p) const;

    // Checks pairwise intersections of cells are common faces; throws on failure.
    void validate() const;

private:
    int ambient_ = 0;
    int dim_ = -1;
    std::vector<Polyhedron> cells_;
    std::vector<Int> weights_;
    std::vector<std::vector<int>> covers_;  // cell id -> facet ids
    std::vector<std::vector<int>> parents_; // cell id -> cofacet ids
    std::map<std::string, int> index_;
    ZMat lineality_;
    ZMat ambient_lattice_;
    ZMat modulus_;
    mutable std::vector<std::optional<ZMat>> cell_lattice_cache_;
};

// Affine-hull and facet hyperplanes of a family of polyhedra (deduplicated).
std::vector<Hyperplane> pool_of_polyhedra(const std::vector<Polyhedron>& polys);
// Pieces of P after cutting along every hyperplane that properly crosses it.
std::vector<Polyhedron> split_by_pool(const Polyhedron& p, const std::vector<Hyperplane>& pool);

} // namespace tropmod
