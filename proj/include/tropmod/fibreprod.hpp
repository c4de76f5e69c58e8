#pragma once

#include "tropmod/moduli.hpp"

namespace tropmod {

// Diagonal of Y inside Y x Y (push-forward along y -> (y, y)).
WeightedComplex diagonal(const WeightedComplex& y);

struct FibreProduct {
    WeightedComplex complex; // cells sigma x_Y sigma' in the product ambient
    PLMap to_first;          // projection to X  (target attached)
    PLMap to_second;         // projection to X' (target attached)
    // source pair (maximal cell of X, maximal cell of X') per maximal cell
    std::map<int, std::pair<int, int>> witness;
};

// X x_Y X' for f: X -> Y, f2: X' -> Y, equalized modulo the lineality of Y.
// Requires f2 locally surjective; all maximal weights are 1, validated by the
// balancing condition (WeightAssignmentFailed if weight 1 does not balance).
FibreProduct fibre_product(const PLMap& f, const PLMap& f2);

struct ModificationReport {
    bool fibre_product_matches_matroid_chart = false;
    bool diagonal_matches_contraction = false;
    bool modification_is_bergman_fan = false;
    bool bergman_fan_is_moduli = false;
    bool ok() const {
        return fibre_product_matches_matroid_chart && diagonal_matches_contraction &&
               modification_is_bergman_fan && bergman_fan_is_moduli;
    }
};

// Mechanical verification that the modification of M_{n+1} x_{M_n} M_{n+1}
// along the diagonal is M_{n+2}, along the deletion/contraction dictionary
// for the edge (0, n) of the complete graph on the marks {0..n}.
ModificationReport verify_moduli_modification(int n);

} // namespace tropmod
