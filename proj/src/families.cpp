#include "tropmod/families.hpp"

#include <algorithm>
#include <memory>
#include <queue>
#include <set>

#include "tropmod/error.hpp"

namespace tropmod {

bool Chart::contains(const QVec& b) const {
    switch (kind) {
        case Kind::WholeBase:
            return true;
        case Kind::Sublevel:
            return in_u_alpha(labels, b, alpha);
        case Kind::Preimage:
            return in_u_alpha(labels, membership_map->value(b), alpha);
    }
    return false;
}

// ---- fibre curves ----------------------------------------------------------

QVec FibreCurve::to_chart(const QVec& raw_point) const { return mat_vec(chart, raw_point); }

FibreCurve::Location FibreCurve::locate(const QVec& chart_point) const {
    Location loc;
    for (size_t v = 0; v < vertices.size(); ++v) {
        if (compare(vertices[v], chart_point) == 0) {
            loc.kind = 0;
            loc.index = static_cast<int>(v);
            loc.arc = 0;
            return loc;
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        QVec diff = chart_point - vertices[edges[e].a];
        // chart_point = a + arc * dir with 0 < arc < length
        QVec dirq = to_qvec(edges[e].dir);
        // find the scalar via the first nonzero coordinate of dir
        size_t p = 0;
        while (p < dirq.size() && dirq[p] == 0) ++p;
        if (p == dirq.size()) continue;
        Rat arc = diff[p] / dirq[p];
        if (arc <= 0 || arc >= edges[e].length) continue;
        if (compare(diff, arc * dirq) != 0) continue;
        loc.kind = 1;
        loc.index = static_cast<int>(e);
        loc.arc = arc;
        return loc;
    }
    for (size_t r = 0; r < rays.size(); ++r) {
        QVec diff = chart_point - vertices[rays[r].base];
        QVec dirq = to_qvec(rays[r].dir);
        size_t p = 0;
        while (p < dirq.size() && dirq[p] == 0) ++p;
        if (p == dirq.size()) continue;
        Rat arc = diff[p] / dirq[p];
        if (arc <= 0) continue;
        if (compare(diff, arc * dirq) != 0) continue;
        loc.kind = 2;
        loc.index = static_cast<int>(r);
        loc.arc = arc;
        return loc;
    }
    return loc; // kind = -1: not on the curve
}

Rat FibreCurve::leaf_distance(int ray_a, int ray_b) const {
    int from = rays[ray_a].base, to = rays[ray_b].base;
    if (from == to) return 0;
    std::vector<Rat> dist(vertices.size(), Rat(-1));
    std::queue<int> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : edges) {
            int other = -1;
            if (e.a == v) other = e.b;
            if (e.b == v) other = e.a;
            if (other < 0 || dist[other] >= 0) continue;
            dist[other] = dist[v] + e.length;
            q.push(other);
        }
    }
    require(dist[to] >= 0, "InvalidFibre", "fibre graph is disconnected");
    return dist[to];
}

std::pair<Split, Split> FibreCurve::edge_split(int edge_index) const {
    // marks reachable from each endpoint without crossing the edge
    auto reach = [&](int start) {
        std::set<int> seen{start};
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (size_t e = 0; e < edges.size(); ++e) {
                if (static_cast<int>(e) == edge_index) continue;
                int other = -1;
                if (edges[e].a == v) other = edges[e].b;
                if (edges[e].b == v) other = edges[e].a;
                if (other >= 0 && !seen.count(other)) {
                    seen.insert(other);
                    q.push(other);
                }
            }
        }
        Split marks;
        for (const auto& r : rays)
            if (r.mark > 0 && seen.count(r.base)) marks.push_back(r.mark);
        std::sort(marks.begin(), marks.end());
        return marks;
    };
    return {reach(edges[edge_index].a), reach(edges[edge_index].b)};
}

std::vector<Split> FibreCurve::vertex_partition(int vertex) const {
    std::vector<Split> out;
    // one branch per incident edge / ray
    for (size_t e = 0; e < edges.size(); ++e) {
        int other = -1;
        if (edges[e].a == vertex) other = edges[e].b;
        if (edges[e].b == vertex) other = edges[e].a;
        if (other < 0) continue;
        auto [behind_a, behind_b] = edge_split(static_cast<int>(e));
        out.push_back(edges[e].a == vertex ? behind_b : behind_a);
    }
    for (const auto& r : rays)
        if (r.base == vertex && r.mark > 0) out.push_back(Split{r.mark});
    std::sort(out.begin(), out.end());
    return out;
}

FibreCurve fibre_curve(const PLMap& g, const QVec& b) {
    const WeightedComplex& t = g.source();
    const WeightedComplex& base = g.target();
    QMat lin_rows = base.modulus_span();
    QMat k = nullspace(lin_rows.empty() ? QMat{QVec(base.ambient(), Rat(0))} : lin_rows,
                       base.ambient());
    std::vector<std::pair<Polyhedron, Int>> slices;
    int top = -1;
    for (int i : t.maximal_ids()) {
        const CellAffine& ca = g.on_cell(i);
        const HRep& h = t.cell(i).hrep();
        std::vector<Constraint> cons;
        for (size_t r = 0; r < h.eq.size(); ++r) cons.push_back({h.eq[r], h.eq_rhs[r], true});
        for (size_t r = 0; r < h.ineq.size(); ++r) cons.push_back({h.ineq[r], h.ineq_rhs[r], false});
        for (const auto& kk : k) {
            QVec a(t.ambient(), Rat(0));
            for (size_t r = 0; r < kk.size(); ++r)
                for (int c = 0; c < t.ambient(); ++c) a[c] += kk[r] * ca.m[r][c];
            cons.push_back({a, dot(kk, b) - dot(kk, ca.t), true});
        }
        Polyhedron p = Polyhedron::from_hrep(t.ambient(), cons);
        if (p.is_empty()) continue;
        top = std::max(top, p.dim());
        slices.emplace_back(std::move(p), t.weight(i));
    }
    require(top >= 0, "PointNotInBase", "empty fibre");
    // a slice may arise from several cells (it is then a shared face); the
    // fibre keeps it once with the common weight
    std::map<std::string, std::pair<Polyhedron, Int>> dedup;
    for (auto& [p, w] : slices) {
        if (p.dim() != top) continue;
        auto it = dedup.find(p.key());
        if (it == dedup.end())
            dedup.emplace(p.key(), std::make_pair(p, w));
        else
            require(it->second.second == w, "InvalidFibre",
                    "one fibre cell inherits two different weights");
    }
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (auto& [key, pw] : dedup) cells.push_back(pw);
    FibreCurve out;
    out.raw = WeightedComplex::from_maximal_cells(t.ambient(), cells)
                  .with_ambient_lattice(t.ambient_lattice());
    QMat quotient_dirs;
    for (const auto& row : out.raw.lineality()) quotient_dirs.push_back(to_qvec(row));
    auto [reduced, chart] = quotient_by_subspace(out.raw, quotient_dirs);
    out.reduced = std::move(reduced);
    out.chart = std::move(chart);
    // graph structure
    std::map<std::string, int> vertex_index;
    for (int c = 0; c < out.reduced.ncells(); ++c) {
        if (out.reduced.cell(c).dim() != 0) continue;
        vertex_index.emplace(out.reduced.cell(c).key(), static_cast<int>(out.vertices.size()));
        out.vertices.push_back(out.reduced.cell(c).points()[0]);
    }
    auto vertex_of = [&](const QVec& p) {
        for (size_t v = 0; v < out.vertices.size(); ++v)
            if (compare(out.vertices[v], p) == 0) return static_cast<int>(v);
        fail("InvalidFibre", "edge endpoint is not a vertex of the fibre");
    };
    for (int c : out.reduced.maximal_ids()) {
        const Polyhedron& cell = out.reduced.cell(c);
        if (cell.dim() != 1) continue;
        if (cell.points().size() == 2) {
            FibreCurve::EdgeInfo e;
            e.a = vertex_of(cell.points()[0]);
            e.b = vertex_of(cell.points()[1]);
            const ZMat& lat = out.reduced.cell_lattice(c);
            require(lat.size() == 1, "InvalidFibre", "edge with lattice rank != 1");
            QVec diff = cell.points()[1] - cell.points()[0];
            QVec dirq = to_qvec(lat[0]);
            size_t p = 0;
            while (p < dirq.size() && dirq[p] == 0) ++p;
            Rat arc = diff[p] / dirq[p];
            if (arc < 0) {
                arc = -arc;
                for (auto& x : dirq) x = -x;
            }
            e.dir = to_zvec(dirq);
            e.length = arc;
            out.edges.push_back(std::move(e));
        } else if (cell.points().size() == 1 && cell.rays().size() == 1) {
            FibreCurve::RayInfo r;
            r.base = vertex_of(cell.points()[0]);
            const ZMat& lat = out.reduced.cell_lattice(c);
            require(lat.size() == 1, "InvalidFibre", "ray with lattice rank != 1");
            QVec dirq = to_qvec(lat[0]);
            // orient along the ray
            QVec ray = to_qvec(cell.rays()[0]);
            size_t p = 0;
            while (p < ray.size() && ray[p] == 0) ++p;
            if (sgn(dirq[p]) != sgn(ray[p]))
                for (auto& x : dirq) x = -x;
            r.dir = to_zvec(dirq);
            out.rays.push_back(std::move(r));
        }
    }
    return out;
}

const Chart& Family::chart_for(const QVec& b) const {
    for (const auto& c : charts)
        if (c.contains(b)) return c;
    for (const auto& c : materialized_)
        if (c.contains(b)) return c;
    require(static_cast<bool>(make_chart), "PointNotInBase",
            "no chart of the marking contains the point");
    for (Rat alpha(2); alpha < 1u << 20; alpha *= 2) {
        Chart c = make_chart(alpha);
        if (c.contains(b)) {
            materialized_.push_back(std::move(c));
            return materialized_.back();
        }
    }
    fail("PointNotInBase", "no chart of the marking contains the point");
}

FibreCurve marked_fibre_curve(const Family& fam, const QVec& b) {
    FibreCurve curve = fibre_curve(fam.g, b);
    const Chart* chart = &fam.chart_for(b);
    for (int i = 1; i <= fam.n; ++i) {
        QVec s = chart->sections[i - 1].value(b);
        FibreCurve::Location loc = curve.locate(curve.to_chart(s));
        require(loc.kind == 2, "MarkOffLeaf", "section does not land in an open leaf");
        require(curve.rays[loc.index].mark == 0, "DuplicateMark", "two sections on one leaf");
        curve.rays[loc.index].mark = i;
    }
    return curve;
}

// ---- checkers --------------------------------------------------------------

namespace {

bool star_is_smooth(const FibreCurve& curve, int vertex, const WeightedComplex& reduced) {
    // directions of all branches at the vertex, primitive in the quotient lattice
    ZMat dirs;
    for (const auto& e : curve.edges) {
        if (e.a == vertex) dirs.push_back(e.dir);
        if (e.b == vertex) {
            ZVec d = e.dir;
            for (auto& x : d) x = -x;
            dirs.push_back(std::move(d));
        }
    }
    for (const auto& r : curve.rays)
        if (r.base == vertex) dirs.push_back(r.dir);
    size_t k = dirs.size();
    if (k < 3) return false;
    QVec sum = zero_qvec(reduced.ambient());
    for (const auto& d : dirs) sum = sum + to_qvec(d);
    if (!is_zero(sum)) return false;
    // any k-1 of the directions must form a lattice basis of their span
    QMat span;
    for (const auto& d : dirs) span.push_back(to_qvec(d));
    Polyhedron hull = Polyhedron::from_generators(reduced.ambient(),
                                                  {zero_qvec(reduced.ambient())}, span, {});
    ZMat sat = hull.lattice_in(reduced.ambient_lattice());
    if (sat.size() != k - 1) return false;
    ZMat sub(dirs.begin(), dirs.end() - 1);
    return lattice_index(sat, hnf(sub)) == 1;
}

} // namespace

CheckReport check_prefamily(const PLMap& g, int n) {
    CheckReport report;
    const WeightedComplex& t = g.source();
    const WeightedComplex& base = g.target();

    LocalSurjReport ls = is_locally_surjective(g);
    if (!ls.ok)
        for (const auto& e : ls.entries)
            if (!e.ok)
                report.fail_with("not locally surjective at cell " + std::to_string(e.cell) +
                                 " of the total space");

    // fibres over one representative point per cell of the base
    for (int c = 0; c < base.ncells(); ++c) {
        QVec b = base.cell(c).relative_interior_point();
        FibreCurve curve;
        try {
            curve = fibre_curve(g, b);
        } catch (const Error& e) {
            report.fail_with(std::string("fibre over cell ") + std::to_string(c) + ": " + e.what());
            continue;
        }
        for (int i : curve.raw.maximal_ids())
            if (curve.raw.weight(i) != 1) {
                report.fail_with("fibre cell of weight != 1 over base cell " + std::to_string(c));
                break;
            }
        if (curve.reduced.dim() != 1) {
            report.fail_with("fibre over base cell " + std::to_string(c) + " is not a curve");
            continue;
        }
        if (static_cast<int>(curve.rays.size()) != n)
            report.fail_with("fibre over base cell " + std::to_string(c) + " has " +
                             std::to_string(curve.rays.size()) + " unbounded edges, expected " +
                             std::to_string(n));
        if (curve.edges.size() + 1 != curve.vertices.size() && !curve.vertices.empty()) {
            if (curve.edges.size() + 1 != curve.vertices.size())
                report.fail_with("fibre over base cell " + std::to_string(c) + " is not a tree");
        }
        for (size_t v = 0; v < curve.vertices.size(); ++v)
            if (!star_is_smooth(curve, static_cast<int>(v), curve.reduced)) {
                report.fail_with("fibre over base cell " + std::to_string(c) +
                                 " is not smooth at a vertex");
                break;
            }
    }

    // lattice surjectivity on every cell of the total space
    QMat base_lattice_basis;
    for (const auto& row : base.ambient_lattice()) base_lattice_basis.push_back(to_qvec(row));
    for (int c = 0; c < t.ncells(); ++c) {
        const CellAffine& ca = g.on_cell(c);
        Polyhedron image = t.cell(c).affine_image(ca.m, ca.t);
        ZMat image_lat = image.lattice_in(base.ambient_lattice());
        // express both lattices in base-lattice coordinates and compare
        ZMat mapped_exact;
        for (const auto& row : t.cell_lattice(c)) {
            QVec v = ca.apply_linear(to_qvec(row));
            if (!base_lattice_basis.empty()) {
                auto coords = coordinates_in_basis(base_lattice_basis, v);
                if (!coords || !is_integral(*coords)) {
                    report.fail_with("cell " + std::to_string(c) +
                                     ": lattice image escapes the base lattice");
                    mapped_exact.clear();
                    break;
                }
                mapped_exact.push_back(to_zvec(*coords));
            } else {
                if (!is_integral(v)) {
                    report.fail_with("cell " + std::to_string(c) + ": lattice image not integral");
                    mapped_exact.clear();
                    break;
                }
                mapped_exact.push_back(to_zvec(v));
            }
        }
        if (mapped_exact.empty() && t.cell_lattice(c).size() > 0) continue;
        ZMat image_exact;
        for (const auto& row : image_lat) {
            if (!base_lattice_basis.empty()) {
                auto coords = coordinates_in_basis(base_lattice_basis, to_qvec(row));
                image_exact.push_back(to_zvec(*coords));
            } else {
                image_exact.push_back(row);
            }
        }
        ZMat mh = hnf(mapped_exact);
        if (mh.size() != image_exact.size() || lattice_index(image_exact, mh) != 1)
            report.fail_with("cell " + std::to_string(c) +
                             ": lattice map to the base is not surjective");
    }
    return report;
}

namespace {

QVec sample_interior(const Polyhedron& cell, Prng& rng) {
    QVec p = cell.relative_interior_point();
    const HRep& h = cell.hrep();
    QMat dirs;
    for (size_t i = 1; i < cell.points().size(); ++i)
        dirs.push_back(cell.points()[i] - cell.points()[0]);
    for (const auto& r : cell.rays()) dirs.push_back(to_qvec(r));
    for (const auto& l : cell.lin()) dirs.push_back(to_qvec(l));
    for (const auto& d : dirs) {
        Rat eps = 1;
        for (size_t i = 0; i < h.ineq.size(); ++i) {
            Rat s = dot(h.ineq[i], d);
            if (s < 0) {
                Rat bound = (dot(h.ineq[i], p) - h.ineq_rhs[i]) / (-s);
                if (bound < eps) eps = bound;
            }
        }
        p = p + (rng.unit_rat() * eps / 2) * d;
    }
    return p;
}

} // namespace

CheckReport check_marking(const Family& fam, uint64_t seed) {
    CheckReport report;
    const WeightedComplex& base = fam.base();
    const WeightedComplex& total = fam.total();
    QMat base_lin = base.modulus_span();
    Prng rng(seed);
    for (int c = 0; c < base.ncells(); ++c) {
        std::vector<QVec> samples{base.cell(c).relative_interior_point()};
        for (int s = 0; s < 2; ++s) samples.push_back(sample_interior(base.cell(c), rng));
        for (const QVec& b : samples) {
            std::vector<int> active;
            for (size_t ci = 0; ci < fam.charts.size(); ++ci)
                if (fam.charts[ci].contains(b)) active.push_back(static_cast<int>(ci));
            if (active.empty()) {
                report.fail_with("no chart contains a sampled base point");
                continue;
            }
            FibreCurve curve = fibre_curve(fam.g, b);
            std::map<int, std::vector<int>> leaf_of; // chart -> mark -> ray
            for (int ci : active) {
                const Chart& chart = fam.charts[ci];
                std::vector<int> marks_on_ray(curve.rays.size(), 0);
                std::vector<int> ray_of_mark(fam.n + 1, -1);
                for (int i = 1; i <= fam.n; ++i) {
                    QVec s = chart.sections[i - 1].value(b);
                    if (!total.supports(s)) {
                        report.fail_with("section image leaves the total space (chart " +
                                         std::to_string(ci) + ", mark " + std::to_string(i) + ")");
                        continue;
                    }
                    // condition (1): g o s = id modulo the lineality of the base
                    QVec gs = fam.g.value(s);
                    if (!in_span(base_lin, gs - b))
                        report.fail_with("g(s_i(b)) != b (chart " + std::to_string(ci) +
                                         ", mark " + std::to_string(i) + ")");
                    // condition (2): the section lands in an open leaf
                    FibreCurve::Location loc = curve.locate(curve.to_chart(s));
                    if (loc.kind != 2) {
                        report.fail_with("section off the open leaves (chart " +
                                         std::to_string(ci) + ", mark " + std::to_string(i) + ")");
                        continue;
                    }
                    if (marks_on_ray[loc.index] != 0)
                        report.fail_with("two sections mark one leaf (chart " +
                                         std::to_string(ci) + ")");
                    marks_on_ray[loc.index] = i;
                    ray_of_mark[i] = loc.index;
                }
                for (size_t r = 0; r < curve.rays.size(); ++r)
                    if (marks_on_ray[r] == 0)
                        report.fail_with("leaf without a mark (chart " + std::to_string(ci) + ")");
                leaf_of.emplace(ci, std::move(ray_of_mark));
            }
            // condition (3): overlapping charts mark the same leaves
            for (size_t a = 0; a + 1 < active.size(); ++a)
                for (size_t b2 = a + 1; b2 < active.size(); ++b2)
                    if (leaf_of[active[a]] != leaf_of[active[b2]])
                        report.fail_with("charts disagree on marked leaves at a sampled point");
        }
    }
    return report;
}

// ---- families ---------------------------------------------------------------

Family universal_family(int n, const std::vector<Rat>& alphas) {
    Family fam;
    fam.g = forgetful_map(n);
    fam.n = n;
    WeightedComplex base = fam.g.target();
    auto build = [n, base](const Rat& alpha) {
        Chart chart;
        chart.kind = Chart::Kind::Sublevel;
        chart.alpha = alpha;
        chart.labels = Labels::range(1, n);
        for (int i = 1; i <= n; ++i) {
            CellAffine s = marking_section(n, i, alpha);
            chart.sections.push_back(PLMap::global(base, s.m, s.t));
        }
        return chart;
    };
    for (const Rat& alpha : alphas) fam.charts.push_back(build(alpha));
    fam.make_chart = build;
    return fam;
}

Family pullback_family(const PLMap& f, int n, const std::vector<Rat>& alphas) {
    require(f.has_target(), "NoTarget", "the classifying map must carry the moduli fan");
    PLMap ft = forgetful_map(n);
    FibreProduct u = fibre_product(f, ft);
    Family fam;
    fam.g = u.to_first;
    fam.n = n;
    int n1 = f.source().ambient();
    int n2 = ft.source().ambient();
    PLMap f_copy = f;
    auto build = [f_copy, n, n1, n2](const Rat& alpha) {
        Chart chart;
        chart.kind = Chart::Kind::Preimage;
        chart.alpha = alpha;
        chart.labels = Labels::range(1, n);
        chart.membership_map = f_copy;
        for (int i = 1; i <= n; ++i) {
            CellAffine s = marking_section(n, i, alpha);
            // t_i(x) = (x, s(f(x))) assembled per cell of the base
            std::map<std::string, CellAffine> data;
            for (int c : f_copy.source().maximal_ids()) {
                const CellAffine& cf = f_copy.on_cell(c);
                CellAffine t;
                t.m.assign(n1 + n2, QVec(n1, Rat(0)));
                t.t = zero_qvec(n1 + n2);
                for (int r = 0; r < n1; ++r) t.m[r][r] = 1;
                QMat lower = mat_mul(s.m, cf.m);
                QVec shift = mat_vec(s.m, cf.t) + s.t;
                for (int r = 0; r < n2; ++r) {
                    t.m[n1 + r] = lower[r];
                    t.t[n1 + r] = shift[r];
                }
                data.emplace(f_copy.source().cell(c).key(), std::move(t));
            }
            chart.sections.push_back(PLMap::per_maximal(f_copy.source(), data));
        }
        return chart;
    };
    for (const Rat& alpha : alphas) fam.charts.push_back(build(alpha));
    fam.make_chart = build;
    return fam;
}

QVec distance_map(const Family& fam, const QVec& b) {
    FibreCurve curve = marked_fibre_curve(fam, b);
    require(static_cast<int>(curve.rays.size()) == fam.n, "InvalidFibre",
            "fibre does not have n leaves");
    std::vector<int> ray_of(fam.n + 1, -1);
    for (size_t r = 0; r < curve.rays.size(); ++r) ray_of[curve.rays[r].mark] = static_cast<int>(r);
    Labels l = Labels::range(1, fam.n);
    QVec out = zero_qvec(l.npairs());
    for (int i = 1; i <= fam.n; ++i)
        for (int j = i + 1; j <= fam.n; ++j)
            out[l.pair_index(i, j)] = curve.leaf_distance(ray_of[i], ray_of[j]);
    return out;
}

PLMap fibre_morphism(const Family& fam, uint64_t seed) {
    Labels l = Labels::range(1, fam.n);
    PLMap fm = PLMap::interpolate(
        fam.base(), [&](const QVec& b) { return distance_map(fam, b); }, l.npairs(), seed,
        "NonAffineFibreLengths");
    fm.set_target(moduli_fan(fam.n));
    require(fm.is_integral(), "NonIntegralFibreMorphism",
            "the classifying map is not integral on the cell lattices");
    PseudoReport pr = is_pseudomorphism(fm, phi_image_basis(l));
    require(pr.ok, "NotPseudomorphism", "the classifying map fails a balancing equation");
    return fm;
}

// ---- equivalence and transport ----------------------------------------------

namespace {

struct CurveMatch {
    // vertex, edge and ray correspondences from one marked curve to another
    std::vector<int> vertex_to;
    std::vector<int> edge_to;  // -1: contracted (transport only)
    std::vector<int> ray_to;
    std::vector<int> edge_target_vertex; // for contracted edges
};

CurveMatch match_curves(const FibreCurve& from, const FibreCurve& to, bool allow_contraction) {
    CurveMatch match;
    require(from.rays.size() == to.rays.size(), "NotEquivalent",
            "fibres have different numbers of leaves");
    match.ray_to.assign(from.rays.size(), -1);
    for (size_t r = 0; r < from.rays.size(); ++r) {
        int mark = from.rays[r].mark;
        require(mark > 0, "NotEquivalent", "unmarked leaf");
        int found = -1;
        for (size_t s = 0; s < to.rays.size(); ++s)
            if (to.rays[s].mark == mark) found = static_cast<int>(s);
        require(found >= 0, "NotEquivalent", "marks do not correspond");
        match.ray_to[r] = found;
    }
    // vertices: match by the partition of marks into branches
    match.vertex_to.assign(from.vertices.size(), -1);
    std::vector<std::vector<Split>> from_parts, to_parts;
    for (size_t v = 0; v < from.vertices.size(); ++v)
        from_parts.push_back(from.vertex_partition(static_cast<int>(v)));
    for (size_t v = 0; v < to.vertices.size(); ++v)
        to_parts.push_back(to.vertex_partition(static_cast<int>(v)));
    for (size_t v = 0; v < from.vertices.size(); ++v) {
        int found = -1;
        for (size_t w = 0; w < to.vertices.size(); ++w)
            if (to_parts[w] == from_parts[v]) found = static_cast<int>(w);
        if (found < 0 && allow_contraction) {
            // contracting edges refines the branch partition at the merged
            // vertex: each source block must be a union of target blocks
            for (size_t w = 0; w < to.vertices.size() && found < 0; ++w) {
                bool refines = true;
                for (const Split& block : from_parts[v]) {
                    std::set<int> members(block.begin(), block.end());
                    std::set<int> covered;
                    for (const Split& tb : to_parts[w]) {
                        bool inside = true;
                        for (int m : tb)
                            if (!members.count(m)) inside = false;
                        if (inside)
                            for (int m : tb) covered.insert(m);
                    }
                    if (covered != members) { refines = false; break; }
                }
                if (refines) found = static_cast<int>(w);
            }
        }
        require(found >= 0, "NotEquivalent", "fibre vertices do not correspond");
        match.vertex_to[v] = found;
    }
    // edges: match by the splits of the marks
    match.edge_to.assign(from.edges.size(), -1);
    match.edge_target_vertex.assign(from.edges.size(), -1);
    for (size_t e = 0; e < from.edges.size(); ++e) {
        auto [behind_a, behind_b] = from.edge_split(static_cast<int>(e));
        int found = -1;
        bool flip = false;
        for (size_t f = 0; f < to.edges.size(); ++f) {
            auto [ta, tb] = to.edge_split(static_cast<int>(f));
            if (ta == behind_a && tb == behind_b) found = static_cast<int>(f);
            else if (ta == behind_b && tb == behind_a) { found = static_cast<int>(f); flip = true; }
            if (found >= 0) break;
        }
        if (found < 0) {
            require(allow_contraction, "NotEquivalent", "edge splits do not correspond");
            match.edge_target_vertex[e] = match.vertex_to[from.edges[e].a];
            require(match.edge_target_vertex[e] == match.vertex_to[from.edges[e].b],
                    "NotEquivalent", "contracted edge with split endpoints");
            continue;
        }
        if (!allow_contraction)
            require(from.edges[e].length == to.edges[found].length, "NotEquivalent",
                    "corresponding edges have different lengths");
        (void)flip;
        match.edge_to[e] = found;
    }
    return match;
}

// y' on the target curve for a chart point y on the source curve (isometry)
QVec transported_point(const FibreCurve& from, const FibreCurve& to, const CurveMatch& match,
                       const FibreCurve::Location& loc) {
    if (loc.kind == 0) return to.vertices[match.vertex_to[loc.index]];
    if (loc.kind == 2) {
        const auto& ray = to.rays[match.ray_to[loc.index]];
        return to.vertices[ray.base] + loc.arc * to_qvec(ray.dir);
    }
    require(loc.kind == 1, "NotEquivalent", "point off the fibre");
    const auto& src = from.edges[loc.index];
    int target_edge = match.edge_to[loc.index];
    if (target_edge < 0) return to.vertices[match.edge_target_vertex[loc.index]];
    const auto& dst = to.edges[target_edge];
    // orient: endpoint a of src corresponds to the endpoint of dst whose
    // vertex match agrees
    Rat scale = dst.length / src.length;
    if (match.vertex_to[src.a] == dst.a)
        return to.vertices[dst.a] + (loc.arc * scale) * to_qvec(dst.dir);
    require(match.vertex_to[src.a] == dst.b, "NotEquivalent", "edge orientation mismatch");
    return to.vertices[dst.b] - (loc.arc * scale) * to_qvec(dst.dir);
}

QMat rational_right_inverse(const QMat& p, int source_dim) {
    // R with P R = I
    QMat r(source_dim, QVec(p.size(), Rat(0)));
    for (size_t col = 0; col < p.size(); ++col) {
        QVec e = zero_qvec(static_cast<int>(p.size()));
        e[col] = 1;
        auto x = solve(p, e);
        require(x.has_value(), "InternalError", "chart matrix is not surjective");
        for (int row = 0; row < source_dim; ++row) r[row][col] = (*x)[row];
    }
    return r;
}

} // namespace

PLMap equivalence_map(const Family& fam, const Family& fam2, uint64_t seed) {
    require(fam.n == fam2.n, "NotEquivalent", "different numbers of marks");
    const WeightedComplex& t1 = fam.total();
    const WeightedComplex& t2 = fam2.total();
    // lineality correspondence: map the quotient kernel of the first total
    // space to the one of the second by the HNF bases
    QVec probe = fam.base().cell(fam.base().maximal_ids().front()).relative_interior_point();
    FibreCurve c1 = marked_fibre_curve(fam, probe);
    FibreCurve c2 = marked_fibre_curve(fam2, probe);
    QMat r2 = rational_right_inverse(c2.chart, t2.ambient());

    std::map<std::string, std::shared_ptr<std::pair<FibreCurve, FibreCurve>>> cache;
    auto eval = [&](const QVec& x) {
        QVec b = fam.g.value(x);
        std::string key;
        for (const auto& v : b) key += v.get_str() + ",";
        auto it = cache.find(key);
        if (it == cache.end()) {
            auto curves = std::make_shared<std::pair<FibreCurve, FibreCurve>>(
                marked_fibre_curve(fam, b), marked_fibre_curve(fam2, b));
            it = cache.emplace(key, std::move(curves)).first;
        }
        const FibreCurve& from = it->second->first;
        const FibreCurve& to = it->second->second;
        CurveMatch match = match_curves(from, to, false);
        QVec y = from.to_chart(x);
        FibreCurve::Location loc = from.locate(y);
        require(loc.kind >= 0, "NotEquivalent", "point off its own fibre");
        QVec y2 = transported_point(from, to, match, loc);
        // canonical lift: the redundant lineality of the source is flattened
        return mat_vec(r2, y2);
    };
    PLMap psi = PLMap::interpolate(t1, eval, t2.ambient(), seed, "NotEquivalent");
    psi.set_target(t2);
    return psi;
}

EquivalenceQuotient equivalence_quotient(const Family& fam, const Family& fam2, uint64_t seed) {
    PLMap raw = equivalence_map(fam, fam2, seed);
    const WeightedComplex& t1 = fam.total();
    const WeightedComplex& t2 = fam2.total();
    // divide out the full lineality of both total spaces
    QMat lin1, lin2;
    for (const auto& row : t1.lineality()) lin1.push_back(to_qvec(row));
    for (const auto& row : t2.lineality()) lin2.push_back(to_qvec(row));
    auto [q1, p1] = quotient_by_subspace(t1, lin1);
    auto [q2, p2] = quotient_by_subspace(t2, lin2);
    QMat r1(t1.ambient(), QVec(p1.size(), Rat(0)));
    for (size_t col = 0; col < p1.size(); ++col) {
        QVec e = zero_qvec(static_cast<int>(p1.size()));
        e[col] = 1;
        auto x = solve(p1, e);
        require(x.has_value(), "InternalError", "quotient chart is not surjective");
        for (int row = 0; row < t1.ambient(); ++row) r1[row][col] = (*x)[row];
    }
    auto eval = [&](const QVec& y) { return mat_vec(p2, raw.value(mat_vec(r1, y))); };
    EquivalenceQuotient out;
    out.psi = PLMap::interpolate(q1, eval, q2.ambient(), seed, "NotEquivalent");
    out.psi.set_target(q2);
    out.source_quotient = std::move(q1);
    out.target_quotient = std::move(q2);
    return out;
}

QVec CurveMap::apply(const QVec& chart_point) const {
    for (const auto& [cell, map] : pieces)
        if (cell.contains(chart_point)) return map.apply(chart_point);
    fail("PointNotInSupport", "point outside the source curve");
}

CurveMap fibre_transport(const Family& fam, const QVec& b_from, const QVec& b_to) {
    const WeightedComplex& base = fam.base();
    int cell = base.find_cell_of_relative_interior(b_from);
    require(cell >= 0, "NotInCommonCell", "b_from must lie in the relative interior of a cell");
    require(base.cell(cell).contains(b_to), "NotInCommonCell",
            "b_to must lie in the cell of b_from");
    FibreCurve from = marked_fibre_curve(fam, b_from);
    FibreCurve to = marked_fibre_curve(fam, b_to);
    CurveMatch match = match_curves(from, to, true);
    CurveMap out;
    int n = from.reduced.ambient();
    auto affine_between = [&](const QVec& p, const QVec& q, const QVec& img_p, const QVec& img_q,
                              const QVec& dir_p) {
        // affine map sending p -> img_p and p + t dir -> img_p + t (img_q - img_p)/|q-p| dir-ish;
        // build m with m . dir = (img_q - img_p) / arc and m = 0 on a complement
        (void)q;
        QMat dirs{dir_p};
        QMat basis = dirs;
        for (const auto& c : nullspace(dirs, n)) basis.push_back(c);
        QMat m(n, QVec(n, Rat(0)));
        QVec img_dir = img_q - img_p;
        for (int k = 0; k < n; ++k) {
            QVec e = zero_qvec(n);
            e[k] = 1;
            auto coords = coordinates_in_basis(basis, e);
            for (int row = 0; row < n; ++row) m[row][k] = (*coords)[0] * img_dir[row];
        }
        CellAffine ca{m, img_p - mat_vec(m, p)};
        return ca;
    };
    for (size_t e = 0; e < from.edges.size(); ++e) {
        const auto& src = from.edges[e];
        QVec p = from.vertices[src.a];
        QVec q = from.vertices[src.b];
        Polyhedron seg = Polyhedron::from_generators(n, {p, q}, {}, {});
        QVec img_p, img_q;
        if (match.edge_to[e] >= 0) {
            img_p = to.vertices[match.vertex_to[src.a]];
            img_q = to.vertices[match.vertex_to[src.b]];
        } else {
            img_p = img_q = to.vertices[match.edge_target_vertex[e]];
        }
        QVec unit = (Rat(1) / src.length) * (q - p);
        out.pieces.emplace_back(seg, affine_between(p, q, img_p, img_q, unit));
    }
    for (size_t r = 0; r < from.rays.size(); ++r) {
        const auto& src = from.rays[r];
        const auto& dst = to.rays[match.ray_to[r]];
        QVec p = from.vertices[src.base];
        QVec img_p = to.vertices[dst.base];
        Polyhedron ray = Polyhedron::from_generators(n, {p}, {to_qvec(src.dir)}, {});
        // leaves transport with slope 1
        out.pieces.emplace_back(
            ray, affine_between(p, p + to_qvec(src.dir), img_p, img_p + to_qvec(dst.dir),
                                to_qvec(src.dir)));
    }
    return out;
}

} // namespace tropmod
