#pragma once

#include "tropmod/function.hpp"
#include "tropmod/plmap.hpp"

namespace tropmod {

// Divisor phi . X: the codimension-1 skeleton weighted by
//   w(tau) = sum_sigma w(sigma) phi_sigma(u_{sigma/tau})
//            - phi_tau(sum_sigma w(sigma) u_{sigma/tau}).
// With auto_refine the complex is first cut along the linearity regions of phi.
WeightedComplex divisor(const RationalFunction& phi, const WeightedComplex& x,
                        bool auto_refine = true);

// Iterated divisor phi^k . X (k = 0 returns X).
WeightedComplex power_divisor(const RationalFunction& phi, int k, const WeightedComplex& x);

// phi on the target composed with a global affine map.
RationalFunction pullback_function(const PLMap& f, const RationalFunction& phi);

// Divisor of the pull-back f*phi on the subcomplex x of f's source.
WeightedComplex divisor_of_pullback(const RationalFunction& phi, const PLMap& f,
                                    const WeightedComplex& x);

// Modification of X along phi: divisor of max{phi o pi, y} on X x R.
WeightedComplex modification(const WeightedComplex& x, const RationalFunction& phi);

// Intersection-theoretic fibre f*(y) = f*phi_1 ... f*phi_r . X for cutting
// functions with phi_1 ... phi_r . Y = {y}. Verifies the cutting property,
// positivity of the fibre weights and |f*(y)| = f^{-1}{y} before returning.
WeightedComplex point_fibre(const PLMap& f, const QVec& y,
                            const std::vector<RationalFunction>& cutting);

} // namespace tropmod
