#include "tropmod/fibreprod.hpp"

#include "tropmod/error.hpp"

namespace tropmod {

namespace {

ZMat block_lattice(const ZMat& a, int dim_a, const ZMat& b, int dim_b) {
    int n = dim_a + dim_b;
    ZMat rows;
    auto add = [&](const ZMat& lat, int dim, int offset) {
        if (lat.empty()) {
            for (int i = 0; i < dim; ++i) {
                ZVec r(n, Int(0));
                r[offset + i] = 1;
                rows.push_back(std::move(r));
            }
        } else {
            for (const auto& row : lat) {
                ZVec r(n, Int(0));
                for (int i = 0; i < dim; ++i) r[offset + i] = row[i];
                rows.push_back(std::move(r));
            }
        }
    };
    add(a, dim_a, 0);
    add(b, dim_b, dim_a);
    return hnf(rows);
}

} // namespace

WeightedComplex diagonal(const WeightedComplex& y) {
    int n = y.ambient();
    QMat dup(2 * n, QVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        dup[i][i] = 1;
        dup[n + i][i] = 1;
    }
    PLMap embed = PLMap::global(y, dup, zero_qvec(2 * n));
    embed.set_target_lattice(block_lattice(y.ambient_lattice(), n, y.ambient_lattice(), n));
    return embed.push_forward();
}

FibreProduct fibre_product(const PLMap& f, const PLMap& f2) {
    const WeightedComplex& x = f.source();
    const WeightedComplex& x2 = f2.source();
    const WeightedComplex& y = f.target();
    require(f2.has_target() && f2.target().ambient() == y.ambient(), "DimensionMismatch",
            "fibre product needs maps into one target");
    require(is_locally_surjective(f2).ok, "NotLocallySurjective",
            "the second map of a fibre product must be locally surjective");

    QMat lin_rows = y.modulus_span();
    QMat k = nullspace(lin_rows.empty() ? QMat{QVec(y.ambient(), Rat(0))} : lin_rows, y.ambient());

    int n1 = x.ambient(), n2 = x2.ambient();
    int n = n1 + n2;
    struct Piece {
        Polyhedron poly;
        int i, j;
        Int weight;
    };
    std::vector<Piece> pieces;
    int top = -1;
    for (int i : x.maximal_ids()) {
        const CellAffine& ca = f.on_cell(i);
        const HRep& h1 = x.cell(i).hrep();
        for (int j : x2.maximal_ids()) {
            const CellAffine& cb = f2.on_cell(j);
            const HRep& h2 = x2.cell(j).hrep();
            std::vector<Constraint> cons;
            auto extend = [&](const QVec& a, int offset) {
                QVec out(n, Rat(0));
                for (size_t t = 0; t < a.size(); ++t) out[offset + t] = a[t];
                return out;
            };
            for (size_t r = 0; r < h1.eq.size(); ++r)
                cons.push_back({extend(h1.eq[r], 0), h1.eq_rhs[r], true});
            for (size_t r = 0; r < h1.ineq.size(); ++r)
                cons.push_back({extend(h1.ineq[r], 0), h1.ineq_rhs[r], false});
            for (size_t r = 0; r < h2.eq.size(); ++r)
                cons.push_back({extend(h2.eq[r], n1), h2.eq_rhs[r], true});
            for (size_t r = 0; r < h2.ineq.size(); ++r)
                cons.push_back({extend(h2.ineq[r], n1), h2.ineq_rhs[r], false});
            for (const auto& kk : k) {
                // kk . (f(x) - f2(x')) = 0
                QVec a(n, Rat(0));
                for (size_t r = 0; r < kk.size(); ++r) {
                    for (int t = 0; t < n1; ++t) a[t] += kk[r] * ca.m[r][t];
                    for (int t = 0; t < n2; ++t) a[n1 + t] -= kk[r] * cb.m[r][t];
                }
                cons.push_back({a, dot(kk, cb.t) - dot(kk, ca.t), true});
            }
            Polyhedron p = Polyhedron::from_hrep(n, cons);
            if (p.is_empty()) continue;
            top = std::max(top, p.dim());
            pieces.push_back({std::move(p), i, j, x.weight(i) * x2.weight(j)});
        }
    }
    require(top >= 0, "EmptyFibreProduct", "the fibre product has empty support");

    std::vector<std::pair<Polyhedron, Int>> cells;
    for (const auto& piece : pieces) {
        if (piece.poly.dim() != top) continue;
        // weight 1 on every maximal cell (validated below); the input weights
        // of the paper's instances are all 1
        cells.emplace_back(piece.poly, Int(1));
    }
    FibreProduct out;
    ZMat block_modulus;
    for (const auto& row : x.modulus()) {
        ZVec v(n, Int(0));
        for (int i = 0; i < n1; ++i) v[i] = row[i];
        block_modulus.push_back(std::move(v));
    }
    for (const auto& row : x2.modulus()) {
        ZVec v(n, Int(0));
        for (int i = 0; i < n2; ++i) v[n1 + i] = row[i];
        block_modulus.push_back(std::move(v));
    }
    out.complex = WeightedComplex::from_maximal_cells(n, cells)
                      .with_ambient_lattice(
                          block_lattice(x.ambient_lattice(), n1, x2.ambient_lattice(), n2))
                      .with_modulus(std::move(block_modulus));
    BalanceReport balance = out.complex.is_balanced();
    require(balance.ok, "WeightAssignmentFailed",
            "weight 1 on all maximal cells does not satisfy the balancing condition");

    for (int c : out.complex.maximal_ids()) {
        QVec p = out.complex.cell(c).relative_interior_point();
        QVec px(p.begin(), p.begin() + n1), py(p.begin() + n1, p.end());
        int wi = -1, wj = -1;
        for (int i : x.maximal_ids())
            if (x.cell(i).contains(px)) { wi = i; break; }
        for (int j : x2.maximal_ids())
            if (x2.cell(j).contains(py)) { wj = j; break; }
        out.witness.emplace(c, std::make_pair(wi, wj));
    }

    QMat proj1(n1, QVec(n, Rat(0))), proj2(n2, QVec(n, Rat(0)));
    for (int i = 0; i < n1; ++i) proj1[i][i] = 1;
    for (int i = 0; i < n2; ++i) proj2[i][n1 + i] = 1;
    out.to_first = PLMap::global(out.complex, proj1, zero_qvec(n1));
    out.to_first.set_target(x);
    out.to_second = PLMap::global(out.complex, proj2, zero_qvec(n2));
    out.to_second.set_target(x2);
    return out;
}

ModificationReport verify_moduli_modification(int n) {
    ModificationReport report;
    Labels marks = Labels::range(0, n);
    int npairs = marks.npairs(); // = edges of the complete graph on the marks

    // complete graph on the marks, vertices renamed to 1..n+1 internally
    Matroid km = Matroid::graphic_complete(n + 1);
    int e = n; // edge (1, n+1) <-> mark pair (0, n)
    Matroid deleted = km.deletion(e);
    Matroid contracted = km.contraction(e);
    WeightedComplex t0 = bergman_fan(deleted);
    RationalFunction phi = deletion_link_function(km, e);

    // the fibre product of two copies of the forgetful map
    PLMap ft = forgetful_map(n);
    FibreProduct u = fibre_product(ft, ft);

    // chart map F = (iso_drop_n o select_1, iso_drop_0 o select_2)
    auto edge_coordinate = [&](int a, int b) {
        // deletion coordinate of the mark pair {a,b}; pairs are matroid edges
        int id = marks.pair_index(a, b); // lex position = edge id - 1
        require(id != e - 1, "InternalError", "selected the deleted edge");
        return id < e - 1 ? id : id - 1;
    };
    auto factor_rows = [&](int dropped_mark) {
        Labels vertices;
        for (int m : marks.labels)
            if (m != dropped_mark) vertices.labels.push_back(m);
        QMat iso = kn_iso_matrix(marks, dropped_mark); // rows: mark pairs
        QMat rows(npairs, QVec(deleted.ground_size(), Rat(0)));
        // compose with the selection of subgraph coordinates
        for (int r = 0; r < npairs; ++r)
            for (int c = 0; c < vertices.npairs(); ++c) {
                if (iso[r][c] == 0) continue;
                auto [a, b] = vertices.pair_at(c);
                rows[r][edge_coordinate(a, b)] += iso[r][c];
            }
        return rows;
    };
    QMat f_rows = factor_rows(n);
    for (auto& row : factor_rows(0)) f_rows.push_back(row);
    ZMat moduli_lat = moduli_ambient_lattice(marks);
    ZMat block = block_lattice(moduli_lat, npairs, moduli_lat, npairs);
    QMat u_lineality;
    for (const auto& row : u.complex.lineality()) u_lineality.push_back(to_qvec(row));

    {
        PLMap fmap = PLMap::global(t0, f_rows, zero_qvec(2 * npairs));
        fmap.set_target_lattice(block);
        WeightedComplex pushed = fmap.push_forward();
        report.fibre_product_matches_matroid_chart =
            equal_cycles_modulo(pushed, u.complex, u_lineality);
    }

    {
        WeightedComplex cut = divisor(phi, t0);
        bool matroid_side = cut.equals_as_cycle(bergman_fan(contracted));
        PLMap fmap = PLMap::global(cut, f_rows, zero_qvec(2 * npairs));
        fmap.set_target_lattice(block);
        WeightedComplex pushed = fmap.push_forward();
        WeightedComplex diag = diagonal(moduli_fan(marks));
        report.diagonal_matches_contraction =
            matroid_side && equal_cycles_modulo(pushed, diag, u_lineality);
    }

    {
        WeightedComplex gamma = modification(t0, phi);
        // move the new last coordinate into the slot of the deleted edge
        int total = km.ground_size();
        QMat perm(total, QVec(total, Rat(0)));
        for (int t = 0; t < total; ++t) {
            if (t == e - 1)
                perm[t][total - 1] = 1;
            else
                perm[t][t < e - 1 ? t : t - 1] = 1;
        }
        PLMap pm = PLMap::global(gamma, perm, zero_qvec(total));
        report.modification_is_bergman_fan = pm.push_forward().equals_as_cycle(bergman_fan(km));
    }

    {
        PLMap iso = kn_isomorphism(n + 2);
        WeightedComplex image = iso.push_forward();
        Labels big = Labels::range(1, n + 2);
        report.bergman_fan_is_moduli =
            equal_cycles_modulo(image, moduli_fan(n + 2), phi_image_basis(big));
    }
    return report;
}

} // namespace tropmod
