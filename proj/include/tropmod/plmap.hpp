#pragma once

#include <functional>
#include <optional>

#include "tropmod/complex.hpp"

namespace tropmod {

// Affine map x -> m x + t on one cell.
struct CellAffine {
    QMat m;
    QVec t;

    QVec apply(const QVec& x) const;
    QVec apply_linear(const QVec& d) const;
};

struct PseudoEntry {
    int tau = -1;
    bool ok = false;
    QVec residual; // weighted image sum of normal vectors
};

struct PseudoReport {
    bool ok = true;
    std::vector<PseudoEntry> entries;
};

struct LocalSurjEntry {
    int cell = -1;
    QVec point;
    bool ok = false;
};

struct LocalSurjReport {
    bool ok = true;
    std::vector<LocalSurjEntry> entries;
};

// Piecewise integer affine linear map on a weighted complex. Affine data is
// attached to every cell; the data of a face is the restriction of the data
// of any cell above it.
class PLMap {
public:
    PLMap() = default;

    static PLMap global(const WeightedComplex& source, const QMat& m, const QVec& t);
    static PLMap per_maximal(const WeightedComplex& source,
                             const std::map<std::string, CellAffine>& data_by_key);
    // Interpolates a per-cell affine map from point evaluations and validates
    // it on extra sample points (throws `nonaffine_code` on mismatch).
    static PLMap interpolate(const WeightedComplex& source,
                             const std::function<QVec(const QVec&)>& eval, int target_ambient,
                             uint64_t seed, const std::string& nonaffine_code);

    const WeightedComplex& source() const { return source_; }
    bool has_target() const { return target_.has_value(); }
    const WeightedComplex& target() const;
    void set_target(WeightedComplex t) { target_ = std::move(t); }
    int target_ambient() const { return target_ambient_; }
    // Ambient lattice of the target space (defaults to the target complex's
    // lattice when a target is attached).
    void set_target_lattice(ZMat basis) { target_lattice_ = std::move(basis); }
    ZMat target_lattice() const;

    const CellAffine& on_cell(int id) const { return data_[id]; }
    QVec value(const QVec& x) const;
    bool is_integral() const; // integer linear parts on all cell lattices

    WeightedComplex push_forward() const;

private:
    WeightedComplex source_;
    std::optional<WeightedComplex> target_;
    ZMat target_lattice_;
    int target_ambient_ = 0;
    std::vector<CellAffine> data_; // aligned with source_ cells
    void fill_faces_and_check();
};

PLMap compose(const PLMap& g, const PLMap& f);

// Pseudo-morphism check: the weighted image sum of normal vectors around each
// codimension-1 cell must lie in the span of the image of that cell (plus the
// extra modulus, e.g. the lineality of a quotient target).
PseudoReport is_pseudomorphism(const PLMap& f, const QMat& extra_modulus = {});

// Support surjectivity of the induced star maps at one representative point
// per cell of the source.
LocalSurjReport is_locally_surjective(const PLMap& f);

// Projection of X along a subspace contained in the lineality of every
// maximal cell; returns the quotient complex and the chart matrix.
std::pair<WeightedComplex, QMat> quotient_by_subspace(const WeightedComplex& x, const QMat& l);

// Push both complexes to the common quotient by `l` and compare as cycles.
bool equal_cycles_modulo(const WeightedComplex& a, const WeightedComplex& b, const QMat& l);

} // namespace tropmod
