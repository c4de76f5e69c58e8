#pragma once

#include <optional>

#include "tropmod/numbers.hpp"

namespace tropmod {

// ---- rational linear algebra --------------------------------------------

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(QMat& a);

int rank(QMat a);

// Any solution x of a x = b, or nullopt if inconsistent.
std::optional<QVec> solve(const QMat& a, const QVec& b);

// Rational basis of {x : a x = 0}.
QMat nullspace(const QMat& a, int ncols);

// True iff v lies in the row span of `rows`.
bool in_span(const QMat& rows, const QVec& v);

// Independent subset of the rows, in RREF.
QMat span_basis(const QMat& rows, int ncols);

// Basis of the intersection of two row spans.
QMat span_intersection(const QMat& rows_a, const QMat& rows_b, int ncols);

// Express v in the given (independent) basis rows; nullopt if v outside the span.
std::optional<QVec> coordinates_in_basis(const QMat& basis, const QVec& v);

QVec mat_vec(const QMat& m, const QVec& x);
QMat mat_mul(const QMat& a, const QMat& b);
QMat identity_mat(int n);

// ---- integer lattice routines -------------------------------------------

// Row-style Hermite normal form of the lattice spanned by the rows:
// canonical basis, pivots positive, entries above pivots reduced to [0, pivot).
// Zero rows are dropped.
ZMat hnf(ZMat a);

// Basis of the saturated integer kernel {x in Z^n : a x = 0}.
ZMat z_kernel(const ZMat& a, int ncols);

// Saturation (span_Q(rows) intersect Z^n) of an integer row lattice.
ZMat saturate(const ZMat& rows, int ncols);

// Saturated lattice of the rational row span.
ZMat lattice_of_span(const QMat& rows, int ncols);

// Canonical residue of v modulo the lattice with HNF basis rows.
ZVec reduce_mod_lattice(ZVec v, const ZMat& hnf_basis);

// Index [super : sub] for full-rank sublattice sub of super (rows are bases).
Int lattice_index(const ZMat& super, const ZMat& sub);

} // namespace tropmod
