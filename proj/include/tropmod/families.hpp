#pragma once

#include "tropmod/fibreprod.hpp"
#include "tropmod/prng.hpp"

namespace tropmod {

// One chart of a tropical marking: a domain descriptor on the base plus one
// section map per mark into the total space.
struct Chart {
    enum class Kind { WholeBase, Sublevel, Preimage };
    Kind kind = Kind::WholeBase;
    Rat alpha;                           // Sublevel / Preimage
    Labels labels;                       // marks of the moduli target
    std::optional<PLMap> membership_map; // Preimage: b in U iff map(b) in U_alpha
    std::vector<PLMap> sections;         // maps B -> ambient of T, one per mark

    bool contains(const QVec& b) const;
};

struct Family {
    PLMap g; // T -> B, with both complexes attached
    int n = 0;
    std::vector<Chart> charts;
    // For markings of the s_i^alpha shape the chart for any alpha in N is
    // reconstructible; fibre computations materialize charts on demand so the
    // whole base is covered, as in the cover {U_alpha}.
    std::function<Chart(const Rat&)> make_chart;

    const WeightedComplex& total() const { return g.source(); }
    const WeightedComplex& base() const { return g.target(); }
    // a chart containing b, materializing one if needed
    const Chart& chart_for(const QVec& b) const;

private:
    mutable std::vector<Chart> materialized_;
};

// Set-theoretic fibre of g over the class of b: the raw slice complex, the
// chart that kills its common lineality, and the resulting metric graph.
struct FibreCurve {
    WeightedComplex raw;
    QMat chart;              // projection to the quotient coordinates
    WeightedComplex reduced; // pointed curve in the quotient
    struct EdgeInfo {
        int a;
        int b;
        ZVec dir;    // primitive direction from a to b in the quotient lattice
        Rat length;  // lattice length
        Split behind_b; // marks behind the b endpoint (filled when marked)
    };
    struct RayInfo {
        int base;
        ZVec dir;
        int mark = 0; // 0 = unmarked
    };
    std::vector<QVec> vertices;
    std::vector<EdgeInfo> edges;
    std::vector<RayInfo> rays;

    QVec to_chart(const QVec& raw_point) const;
    // (kind, index, arc length): kind 0 = vertex, 1 = edge (arc from endpoint
    // a), 2 = ray (arc from the base)
    struct Location {
        int kind = -1;
        int index = -1;
        Rat arc;
    };
    Location locate(const QVec& chart_point) const;
    int mark_of_ray(int ray_index) const { return rays[ray_index].mark; }
    // pairwise lattice distances between the base vertices of the leaf rays
    Rat leaf_distance(int ray_a, int ray_b) const;
    // marks lying behind each endpoint of an edge (requires marked rays)
    std::pair<Split, Split> edge_split(int edge_index) const;
    // partition of the marks by the branches at a vertex
    std::vector<Split> vertex_partition(int vertex) const;
};

FibreCurve fibre_curve(const PLMap& g, const QVec& b);
// additionally locates the marked leaves via the charts of the family
FibreCurve marked_fibre_curve(const Family& fam, const QVec& b);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail_with(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
};

// Prefamily axioms: local surjectivity, smooth rational curve fibres with n
// unbounded edges over one representative point per cell of the base, and
// surjectivity of the lattice maps on every cell of the total space.
CheckReport check_prefamily(const PLMap& g, int n);

// Marking axioms on sampled points: sections are right inverses of g, mark
// each leaf exactly once, and agree across chart overlaps.
CheckReport check_marking(const Family& fam, uint64_t seed = 1);

// The forgetful map with the markings s_i^alpha, one chart per alpha.
Family universal_family(int n, const std::vector<Rat>& alphas);

// Pull-back family X^f = X x_{M_n} M_{n+1} with markings x -> (x, s_i^a(f(x))).
Family pullback_family(const PLMap& f, int n, const std::vector<Rat>& alphas);

// d_g: pairwise leaf distances of the fibre over b.
QVec distance_map(const Family& fam, const QVec& b);

// The classifying map phi_g = q_n o d_g as a per-cell affine map on the base;
// integrality and the pseudo-morphism property are asserted.
PLMap fibre_morphism(const Family& fam, uint64_t seed = 1);

// The fibrewise isometry between two equivalent families over one base.
PLMap equivalence_map(const Family& fam, const Family& fam2, uint64_t seed = 1);

// The induced isomorphism between the total spaces with the redundant
// lineality divided out: psi with its source and target quotients.
struct EquivalenceQuotient {
    WeightedComplex source_quotient;
    WeightedComplex target_quotient;
    PLMap psi;
};
EquivalenceQuotient equivalence_quotient(const Family& fam, const Family& fam2,
                                         uint64_t seed = 1);

// Chart-level transport map between the fibres over b_from (relative interior
// of a cell) and b_to (any point of the same cell).
struct CurveMap {
    std::vector<std::pair<Polyhedron, CellAffine>> pieces; // chart -> chart
    QVec apply(const QVec& chart_point) const;
};
CurveMap fibre_transport(const Family& fam, const QVec& b_from, const QVec& b_to);

} // namespace tropmod
