// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <functional>
#include <set>
#include <iostream>

#include "tropmod/error.hpp"
#include "tropmod/families.hpp"
#include "tropmod/prng.hpp"

using namespace tropmod;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool()>& run) {
    bool ok = false;
    std::string note;
    try {
        ok = run();
    } catch (const std::exception& e) {
        note = std::string(" (") + e.what() + ")";
    }
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << note << std::endl;
    if (!ok) ++failures;
}

// independent enumeration of trivalent trees by leaf insertion
long count_trivalent_trees(int n) {
    // trees with k leaves are built by attaching the next leaf to any of the
    // 2k-3 edges; count = (2n-5)!!, enumerated explicitly
    struct Tree {
        std::vector<std::pair<int, int>> edges;
        std::map<int, int> leaf_at;
        int nv = 0;
    };
    std::vector<Tree> trees;
    Tree t0;
    t0.nv = 1;
    for (int i = 1; i <= 3; ++i) t0.leaf_at[i] = 0;
    trees.push_back(t0);
    for (int k = 4; k <= n; ++k) {
        std::vector<Tree> next;
        for (const Tree& t : trees) {
            for (const auto& [lab, v] : t.leaf_at) {
                Tree s = t;
                int mid = s.nv++;
                s.leaf_at[lab] = mid;
                s.leaf_at[k] = mid;
                s.edges.emplace_back(v, mid);
                next.push_back(s);
            }
            for (size_t e = 0; e < t.edges.size(); ++e) {
                Tree s = t;
                int mid = s.nv++;
                auto [a, b] = s.edges[e];
                s.edges[e] = {a, mid};
                s.edges.emplace_back(mid, b);
                s.leaf_at[k] = mid;
                next.push_back(s);
            }
        }
        trees = std::move(next);
    }
    return static_cast<long>(trees.size());
}

QVec ray_point(const Labels& l, const Split& s, const Rat& scale) {
    return scale * split_ray(l, canonical_split(l, s));
}

} // namespace

int main() {
    // 1. balancing suite
    criterion("1a balancing: Bergman fans with weight 1", [] {
        for (Matroid m : {Matroid::uniform(2, 3), Matroid::uniform(2, 4), Matroid::uniform(3, 4),
                          Matroid::graphic_complete(4), Matroid::graphic_complete(5)}) {
            WeightedComplex fan = bergman_fan(m);
            for (int i : fan.maximal_ids())
                if (fan.weight(i) != 1) return false;
            if (!fan.is_balanced().ok) return false;
        }
        return true;
    });
    criterion("1b balancing: moduli fans modulo Im(phi)", [] {
        for (int n : {4, 5, 6})
            if (!moduli_fan(n).is_balanced().ok) return false;
        return true;
    });

    // 2. iterated max cuts Bergman fans down to the lineality line
    criterion("2 lemma max: max^(rank-1) . trop(M) = L with weight 1", [] {
        for (Matroid m : {Matroid::uniform(2, 3), Matroid::uniform(2, 4), Matroid::uniform(3, 4),
                          Matroid::graphic_complete(4), Matroid::graphic_complete(5)}) {
            WeightedComplex fan = bergman_fan(m);
            RationalFunction phi = RationalFunction::shifted_max(zero_qvec(m.ground_size()));
            WeightedComplex cut = power_divisor(phi, m.rank() - 1, fan);
            if (!cut.equals_as_cycle(bergman_fan(Matroid::uniform(1, m.ground_size()))))
                return false;
        }
        return true;
    });

    // 3. moduli combinatorics against the independent tree enumeration
    criterion("3 moduli ray and cone counts", [] {
        WeightedComplex m5 = moduli_fan(5);
        int rays5 = static_cast<int>(m5.cells_of_dim(m5.dim() - m5.dim() + 1 + 4).size());
        (void)rays5;
        auto count_rays = [](const WeightedComplex& m, int n) {
            // rays = cells of dimension (lineality + 1)
            int lin = static_cast<int>(m.lineality().size());
            (void)n;
            return static_cast<int>(m.cells_of_dim(lin + 1).size());
        };
        if (count_rays(m5, 5) != 10) return false;
        if (static_cast<int>(m5.maximal_ids().size()) != 15) return false;
        if (count_trivalent_trees(5) != 15) return false;
        WeightedComplex m6 = moduli_fan(6);
        if (count_rays(m6, 6) != 25) return false;
        if (static_cast<int>(m6.maximal_ids().size()) != 105) return false;
        if (count_trivalent_trees(6) != 105) return false;
        return true;
    });

    // 4. forgetful fibres over the origin
    criterion("4 forgetful fibre lemma at the origin (n = 3, 4)", [] {
        for (int n : {3, 4}) {
            Labels total = Labels::range(0, n);
            QVec origin = zero_qvec(Labels::range(1, n).npairs());
            WeightedComplex direct = forgetful_fibre(n, origin);
            // edges are exactly the rays R_{>=0} v_{0,i} with weight 1
            std::set<std::string> expected;
            for (int lab = 1; lab <= n; ++lab)
                expected.insert(Polyhedron::from_generators(
                                    total.npairs(), {zero_qvec(total.npairs())},
                                    {split_ray(total, canonical_split(total, {0, lab}))},
                                    phi_image_basis(total))
                                    .key());
            std::set<std::string> got;
            for (int i : direct.maximal_ids()) {
                if (direct.weight(i) != 1) return false;
                got.insert(direct.cell(i).key());
            }
            if (got != expected) return false;
            PLMap ft = forgetful_map(n);
            WeightedComplex via = point_fibre(ft, origin, moduli_cutting_functions(n, origin));
            if (!via.equals_as_cycle(direct)) return false;
        }
        return true;
    });

    // 5. marking axioms
    criterion("5 marking axioms for s_i^alpha (n = 4, 5; alpha = 1, 7/2)", [] {
        for (int n : {4, 5}) {
            Family fam = universal_family(n, {rat(1), rat(7, 2)});
            if (!check_prefamily(fam.g, n).ok) return false;
            if (!check_marking(fam, 20240809).ok) return false;
            // s_i^alpha(0) = alpha v_{0,i} exactly
            Labels base = Labels::range(1, n);
            Labels total = Labels::range(0, n);
            for (const Rat& alpha : {rat(1), rat(7, 2)})
                for (int i = 1; i <= n; ++i) {
                    CellAffine s = marking_section(n, i, alpha);
                    QVec at_zero = s.apply(zero_qvec(base.npairs()));
                    if (at_zero != alpha * split_ray(total, canonical_split(total, {0, i})))
                        return false;
                }
        }
        return true;
    });

    // 6. main theorem round trip
    criterion("6 round trip: fibre morphism of pulled-back families", [] {
        int n = 4;
        Labels l = Labels::range(1, n);
        QMat lin = phi_image_basis(l);
        WeightedComplex m4 = moduli_fan(n);
        std::vector<PLMap> maps;
        {
            PLMap id = PLMap::global(m4, identity_mat(m4.ambient()), zero_qvec(m4.ambient()));
            id.set_target(m4);
            maps.push_back(id);
        }
        maps.push_back(forgetful_map(n));
        {
            // the transposition of marks 1 and 2
            QMat mat(l.npairs(), QVec(l.npairs(), Rat(0)));
            auto swap12 = [](int x) { return x == 1 ? 2 : (x == 2 ? 1 : x); };
            for (int idx = 0; idx < l.npairs(); ++idx) {
                auto [a, b] = l.pair_at(idx);
                mat[l.pair_index(swap12(a), swap12(b))][idx] = 1;
            }
            PLMap perm = PLMap::global(m4, mat, zero_qvec(l.npairs()));
            perm.set_target(m4);
            maps.push_back(perm);
        }
        {
            QVec c = ray_point(l, {1, 2}, rat(1, 2));
            PLMap cst = PLMap::global(m4, QMat(m4.ambient(), QVec(m4.ambient(), Rat(0))), c);
            cst.set_target(m4);
            maps.push_back(cst);
        }
        for (const PLMap& f : maps) {
            Family fam = pullback_family(f, n, {rat(1)});
            PLMap fm = fibre_morphism(fam, 20240809);
            for (int c : fam.base().maximal_ids()) {
                QVec p = fam.base().cell(c).relative_interior_point();
                QVec fp = f.on_cell(fam.base().cells_containing(p).front()).apply(p);
                if (!in_span(lin, fm.value(p) - fp)) return false;
                for (const auto& row : fam.base().cell_lattice(c)) {
                    QVec d = to_qvec(row);
                    QVec lhs = fm.on_cell(c).apply_linear(d);
                    QVec rhs = f.on_cell(fam.base().cells_containing(p).front()).apply_linear(d);
                    if (!in_span(lin, lhs - rhs)) return false;
                }
            }
        }
        return true;
    });

    // 7. integrality of the distance map on lattice differences
    criterion("7 d_g integrality on 100 random lattice pairs", [] {
        int n = 4;
        Family fam = universal_family(n, {rat(1)});
        const WeightedComplex& base = fam.base();
        Prng rng(20240809);
        auto ids = base.maximal_ids();
        int done = 0;
        while (done < 100) {
            int cell = ids[rng.next() % ids.size()];
            const Polyhedron& tau = base.cell(cell);
            QVec b = tau.relative_interior_point();
            // random small lattice vector of the cell keeping b + v inside
            const ZMat& lat = base.cell_lattice(cell);
            QVec v = zero_qvec(base.ambient());
            for (const auto& row : lat)
                v = v + Rat(rng.uniform(0, 1)) * to_qvec(row);
            if (is_zero(v)) continue;
            QVec b2 = b + v;
            if (!tau.contains(b2)) continue;
            QVec diff = distance_map(fam, b2) - distance_map(fam, b);
            if (!is_integral(diff)) return false;
            ++done;
        }
        return true;
    });

    // 8. linearity on the cones of the matroid presentation of the base
    criterion("8 fibre morphisms are additive on flat vectors", [] {
        int n = 4;
        Labels l = Labels::range(1, n);
        QMat lin = phi_image_basis(l);
        QMat iso = kn_iso_matrix(n);
        Matroid km = Matroid::graphic_complete(n - 1);
        WeightedComplex m4 = moduli_fan(n);
        std::vector<PLMap> maps;
        {
            PLMap id = PLMap::global(m4, identity_mat(m4.ambient()), zero_qvec(m4.ambient()));
            id.set_target(m4);
            maps.push_back(id);
        }
        maps.push_back(forgetful_map(n));
        for (const PLMap& f : maps) {
            Family fam = pullback_family(f, n, {rat(1)});
            PLMap fm = fibre_morphism(fam, 7);
            Labels base_marks =
                f.source().ambient() == m4.ambient() ? Labels::range(1, n) : Labels::range(0, n);
            QMat base_iso = f.source().ambient() == m4.ambient()
                                ? iso
                                : kn_iso_matrix(base_marks, base_marks.labels.back());
            Matroid base_matroid = f.source().ambient() == m4.ambient()
                                       ? km
                                       : Matroid::graphic_complete(n);
            int ground = base_matroid.ground_size();
            auto h = [&](const QVec& x) { return fm.value(mat_vec(base_iso, x)); };
            for (uint32_t flat : base_matroid.proper_flats()) {
                QVec lhs = h(flat_vector(ground, flat));
                QVec rhs = zero_qvec(l.npairs());
                for (int e = 0; e < ground; ++e)
                    if (flat & (1u << e)) rhs = rhs + h(flat_vector(ground, 1u << e));
                if (!in_span(lin, lhs - rhs)) return false;
            }
        }
        return true;
    });

    // 9. fibre product theorem for M5 x_{M4} M5
    criterion("9 fibre product: support, weights, projections, point fibres", [] {
        int n = 4;
        PLMap ft = forgetful_map(n);
        FibreProduct u = fibre_product(ft, ft);
        for (int i : u.complex.maximal_ids())
            if (u.complex.weight(i) != 1) return false;
        if (!u.complex.is_balanced().ok) return false;
        if (!is_locally_surjective(u.to_first).ok) return false;
        // the support is the exact equalizer: sampled slices are covered, and
        // every cell satisfies the equalizer equations by construction
        const WeightedComplex& m5 = ft.source();
        Labels marks = Labels::range(0, n);
        // pi_X^*(p) = {p} x ft^*(ft(p)) at ten sample points
        std::vector<QVec> samples{zero_qvec(m5.ambient())};
        Prng rng(9);
        std::vector<Split> splits = all_splits(marks);
        for (int k = 0; static_cast<int>(samples.size()) < 10; ++k)
            samples.push_back((rng.unit_rat() + rat(1)) *
                              split_ray(marks, splits[k % splits.size()]));
        QMat phi5 = phi_image_basis(marks);
        for (const QVec& p : samples) {
            WeightedComplex lhs =
                point_fibre(u.to_first, p, moduli_cutting_functions(marks, p));
            QVec base_point = mat_vec(forgetful_matrix(n), p);
            WeightedComplex curve = forgetful_fibre(n, base_point);
            WeightedComplex rhs = WeightedComplex::single_point(p, phi5).cross(curve);
            if (!lhs.equals_as_cycle(rhs)) return false;
        }
        return true;
    });

    // 10. the modification proposition
    criterion("10a moduli modification at n = 3 (M5)", [] {
        return verify_moduli_modification(3).ok();
    });
    criterion("10b moduli modification at n = 4 (M6)", [] {
        return verify_moduli_modification(4).ok();
    });

    // 11. Bergman fans as modifications along deletions/contractions
    criterion("11 deletion-contraction modifications", [] {
        auto check = [](const Matroid& m, int e) {
            RationalFunction phi = deletion_link_function(m, e);
            WeightedComplex del = bergman_fan(m.deletion(e));
            if (!divisor(phi, del).equals_as_cycle(bergman_fan(m.contraction(e)))) return false;
            WeightedComplex modified = modification(del, phi);
            int total = m.ground_size();
            QMat perm(total, QVec(total, Rat(0)));
            for (int t = 0; t < total; ++t) {
                if (t == e - 1)
                    perm[t][total - 1] = 1;
                else
                    perm[t][t < e - 1 ? t : t - 1] = 1;
            }
            PLMap pm = PLMap::global(modified, perm, zero_qvec(total));
            return pm.push_forward().equals_as_cycle(bergman_fan(m));
        };
        return check(Matroid::uniform(2, 3), 3) && check(Matroid::graphic_complete(4), 6);
    });

    // 12. negative controls
    criterion("12 negative controls fail as expected", [] {
        // pi_1 and pi_2 fail local surjectivity at the quoted point class
        int nl = 3;
        auto l_curve = [](int k) {
            std::vector<std::pair<Polyhedron, Int>> cells;
            for (int i = 0; i < k; ++i) {
                QVec d = zero_qvec(k);
                d[i] = -1;
                cells.emplace_back(Polyhedron::from_generators(k, {zero_qvec(k)}, {d}, {}),
                                   Int(1));
            }
            cells.emplace_back(
                Polyhedron::from_generators(k, {zero_qvec(k)}, {QVec(k, Rat(1))}, {}), Int(1));
            return WeightedComplex::from_maximal_cells(k, cells);
        };
        QVec bad_point = zero_qvec(nl + 2);
        bad_point[nl] = -1;
        for (int variant = 0; variant < 2; ++variant) {
            WeightedComplex factor;
            if (variant == 0) {
                factor = l_curve(2);
            } else {
                WeightedComplex h = WeightedComplex::from_maximal_cells(
                    2, {{Polyhedron::from_generators(2, {zero_qvec(2)}, {},
                                                     {QVec{rat(1), rat(0)}}),
                         1}});
                WeightedComplex v = WeightedComplex::from_maximal_cells(
                    2, {{Polyhedron::from_generators(2, {zero_qvec(2)}, {},
                                                     {QVec{rat(0), rat(1)}}),
                         1}});
                factor = h.sum(v);
            }
            WeightedComplex total = l_curve(nl).cross(factor);
            QMat proj(1, QVec(nl + 2, Rat(0)));
            proj[0][nl + 1] = 1;
            PLMap pi = PLMap::global(total, proj, QVec{rat(0)});
            pi.set_target(WeightedComplex::real_line());
            LocalSurjReport rep = is_locally_surjective(pi);
            if (rep.ok) return false;
            bool at_quoted_point = false;
            for (const auto& e : rep.entries)
                if (!e.ok && total.cell(e.cell).contains(bad_point)) at_quoted_point = true;
            if (!at_quoted_point) return false;
        }
        // an unbalanced complex fails is_balanced
        WeightedComplex bad = WeightedComplex::from_maximal_cells(
            2, {{Polyhedron::from_generators(2, {zero_qvec(2)}, {QVec{rat(1), rat(0)}}, {}), 1},
                {Polyhedron::from_generators(2, {zero_qvec(2)}, {QVec{rat(0), rat(1)}}, {}), 1}});
        if (bad.is_balanced().ok) return false;
        // a broken marking fails condition (2)
        Family fam = universal_family(4, {rat(1)});
        fam.charts[0].sections[1] = fam.charts[0].sections[0];
        CheckReport marks = check_marking(fam);
        if (marks.ok) return false;
        bool duplicate = false;
        for (const auto& f : marks.failures)
            if (f.find("two sections mark one leaf") != std::string::npos) duplicate = true;
        return duplicate;
    });

    // 13. the equivalence theorem instance
    criterion("13 equivalence: pullback of id vs the universal family", [] {
        int n = 4;
        WeightedComplex m4 = moduli_fan(n);
        PLMap id = PLMap::global(m4, identity_mat(m4.ambient()), zero_qvec(m4.ambient()));
        id.set_target(m4);
        Family pulled = pullback_family(id, n, {rat(1)});
        Family universal = universal_family(n, {rat(1)});
        EquivalenceQuotient eq = equivalence_quotient(pulled, universal, 20240809);
        if (!is_pseudomorphism(eq.psi).ok) return false;
        if (!eq.psi.is_integral()) return false;
        if (!eq.psi.push_forward().equals_as_cycle(eq.target_quotient)) return false;
        EquivalenceQuotient back = equivalence_quotient(universal, pulled, 20240809);
        if (!is_pseudomorphism(back.psi).ok) return false;
        if (!back.psi.push_forward().equals_as_cycle(back.target_quotient)) return false;
        for (int c : eq.source_quotient.maximal_ids()) {
            QVec p = eq.source_quotient.cell(c).relative_interior_point();
            if (compare(back.psi.value(eq.psi.value(p)), p) != 0) return false;
        }
        return true;
    });

    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
