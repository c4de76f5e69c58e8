#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "tropmod/complex.hpp"
#include "tropmod/function.hpp"

namespace tropmod {

// Matroid on the ground set {1..m}, given by a rank oracle. Subsets are
// bitmasks (bit i-1 = element i). Flat enumeration is closure-driven and
// bounded by max_ground_size().
class Matroid {
public:
    static Matroid uniform(int rank, int m);
    // matroid of the complete graph K_n; edges ordered lexicographically
    // (1,2),(1,3),...,(1,n),(2,3),...
    static Matroid graphic_complete(int n);
    static Matroid graphic(int nvertices, std::vector<std::pair<int, int>> edges);
    static Matroid from_flats(int m, const std::vector<std::vector<int>>& flats);
    static Matroid from_oracle(int m, std::string name, std::function<int(uint32_t)> rank);

    static int max_ground_size(); // default 15; override with TROPMOD_MAX_GROUND

    int ground_size() const { return m_; }
    const std::string& name() const { return name_; }
    int rank() const;
    int rank_of(uint32_t subset) const;
    int rank_of(const std::vector<int>& subset) const;
    uint32_t closure(uint32_t subset) const;
    std::vector<int> closure(const std::vector<int>& subset) const;
    bool is_loopfree() const;

    // all flats grouped by rank (flats_by_rank()[r] = flats of rank r),
    // each group sorted by bitmask value
    const std::vector<std::vector<uint32_t>>& flats_by_rank() const;
    std::vector<uint32_t> proper_flats() const; // nonempty, not the ground set

    Matroid deletion(int e) const;    // ground set renumbered to 1..m-1
    Matroid contraction(int e) const; // same renumbering; e must not be a loop
    Matroid truncation() const;

    // circuits containing e (as bitmasks including e)
    std::vector<uint32_t> circuits_through(int e) const;

    // brute-force rank axioms; intended for m <= 8
    bool check_rank_axioms() const;

    static std::vector<int> to_elements(uint32_t mask);
    static uint32_t to_mask(const std::vector<int>& elements);

private:
    int m_ = 0;
    std::string name_;
    std::function<int(uint32_t)> rank_;
    mutable std::shared_ptr<std::map<uint32_t, int>> memo_;
    mutable std::shared_ptr<std::vector<std::vector<uint32_t>>> flats_;
};

// The fine fan structure of the Bergman fan of M in R^m: one cone per chain
// of proper flats, spanned by the vectors V_F = -sum_{i in F} e_i, with the
// line R(1,...,1) as lineality and all maximal weights 1.
WeightedComplex bergman_fan(const Matroid& m);

// V_F in R^m for a flat bitmask.
QVec flat_vector(int m, uint32_t flat);

// Rational function on trop(M\e) cutting out trop(M/e): the minimum over all
// circuits C of M through e of max{x_j : j in C - e}.
RationalFunction deletion_link_function(const Matroid& m, int e);

} // namespace tropmod
