#include "tropmod/intersection.hpp"

#include <set>

#include "tropmod/error.hpp"

namespace tropmod {

namespace {

WeightedComplex divisor_core(const WeightedComplex& refined,
                             const std::function<AffineTerm(int)>& term_of) {
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (int tau : refined.codim1_ids()) {
        AffineTerm at = term_of(tau);
        QVec usum = zero_qvec(refined.ambient());
        Rat total = 0;
        for (int sigma : refined.coface_ids(tau)) {
            if (refined.weight(sigma) == 0) continue;
            QVec u = to_qvec(refined.normal_vector(tau, sigma));
            AffineTerm as = term_of(sigma);
            total += Rat(refined.weight(sigma)) * dot(as.a, u);
            usum = usum + Rat(refined.weight(sigma)) * u;
        }
        total -= dot(at.a, usum);
        require(is_integral(total), "NonIntegerWeight",
                "divisor weight is not an integer; covector not integral on cell lattices");
        if (total != 0) cells.emplace_back(refined.cell(tau), total.get_num());
    }
    return WeightedComplex::from_maximal_cells(refined.ambient(), cells)
        .with_ambient_lattice(refined.ambient_lattice())
        .with_modulus(refined.modulus());
}

} // namespace

WeightedComplex divisor(const RationalFunction& phi, const WeightedComplex& x, bool auto_refine) {
    if (x.is_empty()) return x;
    require(phi.ambient() == x.ambient(), "DimensionMismatch",
            "function and complex live in different spaces");
    WeightedComplex refined = auto_refine ? x.refine_along_pool(phi.tie_hyperplanes()) : x;
    return divisor_core(refined, [&](int id) { return phi.active_term(refined.cell(id)); });
}

WeightedComplex power_divisor(const RationalFunction& phi, int k, const WeightedComplex& x) {
    require(k >= 0, "InvalidArgument", "negative power");
    WeightedComplex out = x;
    for (int i = 0; i < k; ++i) out = divisor(phi, out);
    return out;
}

RationalFunction pullback_function(const PLMap& f, const RationalFunction& phi) {
    const auto ids = f.source().maximal_ids();
    require(!ids.empty(), "InvalidArgument", "pull-back along a map with empty source");
    const CellAffine& first = f.on_cell(ids.front());
    for (int i : ids) {
        const CellAffine& ca = f.on_cell(i);
        require(ca.m == first.m && ca.t == first.t, "PerCellPullback",
                "function pull-back along a non-global map; use divisor_of_pullback");
    }
    return phi.pullback(first.m, first.t);
}

WeightedComplex divisor_of_pullback(const RationalFunction& phi, const PLMap& f,
                                    const WeightedComplex& x) {
    if (x.is_empty()) return x;
    const WeightedComplex& src = f.source();
    // refine along the pulled-back tie hyperplanes of phi
    std::vector<Hyperplane> pool;
    std::set<std::string> seen;
    std::vector<Hyperplane> ties = phi.tie_hyperplanes();
    for (int i : src.maximal_ids()) {
        const CellAffine& ca = f.on_cell(i);
        for (const auto& h : ties) {
            QVec a(src.ambient(), Rat(0));
            for (size_t r = 0; r < h.a.size(); ++r)
                for (int j = 0; j < src.ambient(); ++j) a[j] += Rat(h.a[r]) * ca.m[r][j];
            if (is_zero(a)) continue;
            Hyperplane ph = Hyperplane::of(a, Rat(h.c) - dot(to_qvec(h.a), ca.t));
            if (seen.insert(ph.key()).second) pool.push_back(ph);
        }
    }
    WeightedComplex refined = x.refine_along_pool(pool);
    std::map<int, AffineTerm> cache;
    auto term_of = [&](int id) {
        auto it = cache.find(id);
        if (it != cache.end()) return it->second;
        QVec p = refined.cell(id).relative_interior_point();
        auto host = src.cells_containing(p);
        require(!host.empty(), "PointNotInSupport", "divisor cell escaped the map's source");
        const CellAffine& ca = f.on_cell(host.front());
        AffineTerm t = phi.pullback(ca.m, ca.t).active_term(refined.cell(id));
        cache.emplace(id, t);
        return t;
    };
    return divisor_core(refined, term_of);
}

WeightedComplex modification(const WeightedComplex& x, const RationalFunction& phi) {
    require(phi.ambient() == x.ambient(), "DimensionMismatch",
            "function and complex live in different spaces");
    WeightedComplex slab = x.cross(WeightedComplex::real_line());
    int n = x.ambient();
    QMat proj(n, QVec(n + 1, Rat(0)));
    for (int i = 0; i < n; ++i) proj[i][i] = 1;
    RationalFunction lifted = phi.pullback(proj, zero_qvec(n), n + 1);
    QVec last = zero_qvec(n + 1);
    last[n] = 1;
    RationalFunction psi = RationalFunction::max_of({lifted, RationalFunction::linear(last)});
    return divisor(psi, slab);
}

WeightedComplex point_fibre(const PLMap& f, const QVec& y,
                            const std::vector<RationalFunction>& cutting) {
    const WeightedComplex& target = f.target();
    // 1. the cutting functions must cut out exactly the point class of y
    WeightedComplex d = target;
    for (const auto& phi : cutting) d = divisor(phi, d);
    QMat ylin = target.modulus_span();
    WeightedComplex ypoint = WeightedComplex::single_point(y, ylin);
    require(d.equals_as_cycle(ypoint), "CuttingFunctionsInvalid",
            "cutting functions do not cut out the given point on the target");

    // 2. pull the product of divisors back along f
    WeightedComplex fibre = f.source();
    for (const auto& phi : cutting) fibre = divisor_of_pullback(phi, f, fibre);

    // 3. positivity
    for (int i : fibre.maximal_ids())
        require(fibre.weight(i) > 0, "NonPositiveFibreWeight",
                "intersection-theoretic fibre has a non-positive weight");

    // 4. support equality with the set-theoretic fibre
    QMat lin_rows = target.modulus_span();
    QMat k = nullspace(lin_rows.empty() ? QMat{QVec(target.ambient(), Rat(0))} : lin_rows,
                       target.ambient());
    const WeightedComplex& src = f.source();
    for (int i : fibre.maximal_ids()) {
        QVec p = fibre.cell(i).relative_interior_point();
        auto host = src.cells_containing(p);
        require(!host.empty(), "InternalError", "fibre cell escaped the source");
        const CellAffine& ca = f.on_cell(host.front());
        const Polyhedron& cell = fibre.cell(i);
        for (const auto& kk : k) {
            Rat rhs = dot(kk, y);
            for (const auto& pt : cell.points())
                require(dot(kk, ca.apply(pt)) == rhs, "FibreSupportMismatch",
                        "fibre support escapes the set-theoretic fibre");
            for (const auto& r : cell.rays())
                require(dot(kk, ca.apply_linear(to_qvec(r))) == 0, "FibreSupportMismatch",
                        "fibre support escapes the set-theoretic fibre");
            for (const auto& l : cell.lin())
                require(dot(kk, ca.apply_linear(to_qvec(l))) == 0, "FibreSupportMismatch",
                        "fibre support escapes the set-theoretic fibre");
        }
    }
    for (int i : src.maximal_ids()) {
        const Polyhedron& sigma = src.cell(i);
        const CellAffine& ca = f.on_cell(i);
        std::vector<Constraint> cons;
        const HRep& h = sigma.hrep();
        for (size_t r = 0; r < h.eq.size(); ++r) cons.push_back({h.eq[r], h.eq_rhs[r], true});
        for (size_t r = 0; r < h.ineq.size(); ++r) cons.push_back({h.ineq[r], h.ineq_rhs[r], false});
        for (const auto& kk : k) {
            QVec a(src.ambient(), Rat(0));
            for (size_t rr = 0; rr < kk.size(); ++rr)
                for (int j = 0; j < src.ambient(); ++j) a[j] += kk[rr] * ca.m[rr][j];
            cons.push_back({a, dot(kk, y) - dot(kk, ca.t), true});
        }
        Polyhedron slice = Polyhedron::from_hrep(src.ambient(), cons);
        if (slice.is_empty()) continue;
        require(fibre.support_contains(slice), "FibreSupportMismatch",
                "set-theoretic fibre not covered by the intersection-theoretic fibre");
    }
    return fibre;
}

} // namespace tropmod
