#pragma once

#include "tropmod/intersection.hpp"
#include "tropmod/matroid.hpp"
#include "tropmod/plmap.hpp"

namespace tropmod {

// Marked leaf labels. Raw moduli coordinates are indexed by label pairs in
// lexicographic order; the fan of n-marked curves lives in R^(n choose 2)
// with the image of phi_n (x -> (x_i + x_j)) as lineality.
struct Labels {
    std::vector<int> labels; // sorted, distinct

    static Labels range(int lo, int hi);
    int n() const { return static_cast<int>(labels.size()); }
    int npairs() const { return n() * (n() - 1) / 2; }
    int pair_index(int a, int b) const;
    std::pair<int, int> pair_at(int idx) const;
    int position(int label) const;
};

// A split: one side of a 2-part partition of the labels, both sides of size
// at least 2. Canonical side = the one not containing the smallest label.
using Split = std::vector<int>;

Split canonical_split(const Labels& l, Split side);
bool splits_compatible(const Split& a, const Split& b, const Labels& l);
std::vector<Split> all_splits(const Labels& l);

QVec split_ray(const Labels& l, const Split& s); // v_I in raw coordinates
QVec phi_generator(const Labels& l, int label);  // pairs containing the label
QMat phi_image_basis(const Labels& l);

// Ambient lattice of the moduli fan: the span of the pair vectors v_{ij} and
// the generators of Im(phi). This is the image of the trop(K_{n-1}) lattice
// under the doubling chart, not the saturated standard lattice.
ZMat moduli_ambient_lattice(const Labels& l);

WeightedComplex moduli_fan(const Labels& l);
WeightedComplex moduli_fan(int n); // labels 1..n

// Split weights of a raw point (quartet isolation indices, invariant under
// the lineality); exact on the support of the moduli fan.
struct ConeCoordinates {
    std::vector<std::pair<Split, Rat>> weights; // positive entries only
    bool in_moduli = false;
    Rat total;
};
ConeCoordinates cone_coordinates(const Labels& l, const QVec& p);

// ---- metric trees ---------------------------------------------------------

struct MarkedTree {
    struct Edge {
        int a;
        int b;
        Rat length;
    };
    int nv = 0;                 // internal vertices 0..nv-1
    std::map<int, int> leaf_at; // label -> vertex
    std::vector<Edge> edges;    // bounded edges, lengths > 0

    static MarkedTree star(const Labels& l);
    static MarkedTree from_splits(const Labels& l,
                                  const std::vector<std::pair<Split, Rat>>& splits);
    std::vector<std::pair<Split, Rat>> split_lengths(const Labels& l) const;
    int valence(int v) const;
    void check_valid(const Labels& l) const;
    MarkedTree forget(int label) const; // drop a leaf and stabilize
};

QVec tree_to_point(const Labels& l, const MarkedTree& t);
MarkedTree point_to_tree(const Labels& l, const QVec& p); // PointNotInModuli on failure

// `((1:0,2:0):3/2,(3:0,4:0):0);` - leaf lengths are ignored, zero-length
// internal edges are contracted.
MarkedTree parse_tree(const std::string& text, Labels& labels_out);
std::string format_tree(const Labels& l, const MarkedTree& t);

// ---- maps of moduli fans --------------------------------------------------

// Forgetful map M_{0,1..n} -> M_{1..n} (drops all pairs containing label 0).
QMat forgetful_matrix(int n);
PLMap forgetful_map(int n);

// Embedded fibre curve of the forgetful map over p in |M_n|: one vertex per
// vertex of the tree of p, bounded edges mirroring its bounded edges and one
// unbounded edge v_{0,i} per leaf; all weights 1.
WeightedComplex forgetful_fibre(int n, const QVec& p);

// trop(K_{n-1})/L -> M_n: doubling map on non-n pairs; chart is its left
// inverse (b_ij - b_in - b_jn)/2. The general form takes the mark set and the
// distinguished mark whose pairs are zeroed; the matroid lives on the
// complete graph over the remaining marks (edges in lexicographic order).
QMat kn_iso_matrix(const Labels& marks, int extra_mark);
QMat kn_chart_matrix(const Labels& marks, int extra_mark);
QMat kn_iso_matrix(int n);
QMat kn_chart_matrix(int n);
PLMap kn_isomorphism(int n);

// dim-many cutting functions for the point class {p} on the moduli fan.
std::vector<RationalFunction> moduli_cutting_functions(const Labels& marks, const QVec& p);
std::vector<RationalFunction> moduli_cutting_functions(int n, const QVec& p);

// ---- split bases and markings ---------------------------------------------

struct SplitBasis {
    int k = 0;
    Split i0;
    std::vector<Split> v_k; // pairs avoiding k
    std::vector<Split> w;   // v_k minus i0
};

Split default_i0(const Labels& l, int k);
SplitBasis split_basis(const Labels& l, int k, const Split& i0);
// expansion of v_I (k notin I) in the basis w per the two-case formula
std::vector<std::pair<Split, int>> expand_in_basis(const Labels& l, const SplitBasis& basis,
                                                   Split i);

// Marking section s_i^alpha: U_alpha -> M_{n+1} as a global affine map
// alpha v_{0,i} + A_i(v); valid on U_alpha only.
CellAffine marking_section(int n, int i, const Rat& alpha);
bool in_u_alpha(const Labels& l, const QVec& p, const Rat& alpha);

} // namespace tropmod
