#include "tropmod/plmap.hpp"

#include <set>

#include "tropmod/error.hpp"
#include "tropmod/prng.hpp"

namespace tropmod {

QVec CellAffine::apply(const QVec& x) const { return mat_vec(m, x) + t; }
QVec CellAffine::apply_linear(const QVec& d) const { return mat_vec(m, d); }

namespace {

bool agree_on_cell(const CellAffine& a, const CellAffine& b, const Polyhedron& cell) {
    QVec p = cell.relative_interior_point();
    if (compare(a.apply(p), b.apply(p)) != 0) return false;
    for (const auto& row : cell.lattice()) {
        QVec d = to_qvec(row);
        if (compare(a.apply_linear(d), b.apply_linear(d)) != 0) return false;
    }
    return true;
}

// largest safe step from an interior point along d, halved (at most 1)
Rat safe_step(const Polyhedron& cell, const QVec& p0, const QVec& d) {
    Rat eps = 2;
    const HRep& h = cell.hrep();
    for (size_t i = 0; i < h.ineq.size(); ++i) {
        Rat s = dot(h.ineq[i], d);
        if (s < 0) {
            Rat bound = (dot(h.ineq[i], p0) - h.ineq_rhs[i]) / (-s);
            if (bound < eps) eps = bound;
        }
    }
    return eps / 2;
}

} // namespace

PLMap PLMap::global(const WeightedComplex& source, const QMat& m, const QVec& t) {
    PLMap f;
    f.source_ = source;
    f.target_ambient_ = static_cast<int>(m.size());
    f.data_.assign(source.ncells(), CellAffine{m, t});
    return f;
}

PLMap PLMap::per_maximal(const WeightedComplex& source,
                         const std::map<std::string, CellAffine>& data_by_key) {
    PLMap f;
    f.source_ = source;
    f.data_.resize(source.ncells());
    std::vector<bool> have(source.ncells(), false);
    for (int i : source.maximal_ids()) {
        auto it = data_by_key.find(source.cell(i).key());
        require(it != data_by_key.end(), "MissingCellMap", "no affine data for a maximal cell");
        f.data_[i] = it->second;
        have[i] = true;
        f.target_ambient_ = static_cast<int>(it->second.m.size());
    }
    // propagate to faces (cells are sorted by ascending dimension)
    for (int i = source.ncells() - 1; i >= 0; --i) {
        if (!have[i]) continue;
        for (int sub : source.facet_ids(i)) {
            if (!have[sub]) {
                f.data_[sub] = f.data_[i];
                have[sub] = true;
            } else {
                require(agree_on_cell(f.data_[sub], f.data_[i], source.cell(sub)),
                        "IncompatibleCellMaps", "affine data disagrees on a shared face");
            }
        }
    }
    for (int i = 0; i < source.ncells(); ++i)
        require(have[i], "MissingCellMap", "cell not below any maximal cell");
    return f;
}

PLMap PLMap::interpolate(const WeightedComplex& source,
                         const std::function<QVec(const QVec&)>& eval, int target_ambient,
                         uint64_t seed, const std::string& nonaffine_code) {
    Prng rng(seed);
    std::map<std::string, CellAffine> data;
    int n = source.ambient();
    for (int i : source.maximal_ids()) {
        const Polyhedron& cell = source.cell(i);
        const ZMat& lat = cell.lattice();
        int d = static_cast<int>(lat.size());
        QVec p0 = cell.relative_interior_point();
        QVec v0 = eval(p0);
        require(static_cast<int>(v0.size()) == target_ambient, "InternalError",
                "evaluation dimension mismatch");
        QMat dirs, imgs;
        std::vector<Rat> steps;
        for (const auto& row : lat) {
            QVec dvec = to_qvec(row);
            Rat eps = safe_step(cell, p0, dvec);
            QVec v1 = eval(p0 + eps * dvec);
            dirs.push_back(dvec);
            imgs.push_back((Rat(1) / eps) * (v1 - v0));
            steps.push_back(eps);
        }
        QMat basis = dirs;
        for (const auto& c : nullspace(dirs, n)) basis.push_back(c);
        QMat m(target_ambient, QVec(n, Rat(0)));
        for (int k = 0; k < n; ++k) {
            QVec e = zero_qvec(n);
            e[k] = 1;
            auto coords = coordinates_in_basis(basis, e);
            require(coords.has_value(), "InternalError", "direction basis is not a basis");
            for (int j = 0; j < d; ++j)
                for (int r = 0; r < target_ambient; ++r) m[r][k] += (*coords)[j] * imgs[j][r];
        }
        CellAffine ca{m, v0 - mat_vec(m, p0)};
        // validate on extra interior points
        for (int s = 0; s < 3; ++s) {
            QVec p = p0;
            for (int j = 0; j < d; ++j) {
                Rat gamma = rng.small_rat() / Rat(d > 0 ? d : 1);
                p = p + (gamma * steps[j]) * dirs[j];
            }
            if (compare(eval(p), ca.apply(p)) != 0)
                fail(nonaffine_code, "interpolated map fails validation at a sample point");
        }
        data.emplace(cell.key(), std::move(ca));
    }
    PLMap out;
    try {
        out = per_maximal(source, data);
    } catch (const Error& e) {
        if (e.code() == "IncompatibleCellMaps")
            fail(nonaffine_code, "interpolated map is inconsistent across faces");
        throw;
    }
    out.target_ambient_ = target_ambient;
    return out;
}

const WeightedComplex& PLMap::target() const {
    require(target_.has_value(), "NoTarget", "map carries no target structure");
    return *target_;
}

ZMat PLMap::target_lattice() const {
    if (!target_lattice_.empty()) return target_lattice_;
    if (has_target()) return target_->ambient_lattice();
    return {};
}

QVec PLMap::value(const QVec& x) const {
    for (int i = 0; i < source_.ncells(); ++i)
        if (source_.cell(i).contains(x)) return data_[i].apply(x);
    fail("PointNotInSupport", "evaluation outside the source support");
}

bool PLMap::is_integral() const {
    QMat target_basis;
    if (has_target())
        for (const auto& row : target_->ambient_lattice()) target_basis.push_back(to_qvec(row));
    for (int i : source_.maximal_ids()) {
        for (const auto& row : source_.cell_lattice(i)) {
            QVec img = data_[i].apply_linear(to_qvec(row));
            if (target_basis.empty()) {
                if (!tropmod::is_integral(img)) return false;
            } else {
                auto c = coordinates_in_basis(target_basis, img);
                if (!c || !tropmod::is_integral(*c)) return false;
            }
        }
    }
    return true;
}

WeightedComplex PLMap::push_forward() const {
    if (source_.is_empty()) return WeightedComplex::empty(target_ambient_);
    int d = source_.dim();
    struct Img {
        Polyhedron poly;
        Int weight;
        ZMat lat;
    };
    const ZMat target_lattice = this->target_lattice();
    QMat target_basis;
    for (const auto& row : target_lattice) target_basis.push_back(to_qvec(row));
    std::vector<Img> imgs;
    for (int i : source_.maximal_ids()) {
        const CellAffine& ca = data_[i];
        Polyhedron img = source_.cell(i).affine_image(ca.m, ca.t);
        if (img.dim() != d) continue;
        ZMat mapped; // image lattice in coordinates of the target lattice
        for (const auto& row : source_.cell_lattice(i)) {
            QVec v = ca.apply_linear(to_qvec(row));
            if (target_basis.empty()) {
                require(tropmod::is_integral(v), "NonIntegralMap",
                        "push-forward requires integer images of cell lattices");
                mapped.push_back(to_zvec(v));
            } else {
                auto c = coordinates_in_basis(target_basis, v);
                require(c && tropmod::is_integral(*c), "NonIntegralMap",
                        "push-forward requires lattice images inside the target lattice");
                mapped.push_back(to_zvec(*c));
            }
        }
        imgs.push_back({std::move(img), source_.weight(i), hnf(mapped)});
    }
    if (imgs.empty()) return WeightedComplex::empty(target_ambient_);
    std::vector<Polyhedron> polys;
    for (const auto& im : imgs) polys.push_back(im.poly);
    std::vector<Hyperplane> pool = pool_of_polyhedra(polys);
    std::map<std::string, Polyhedron> pieces;
    for (const auto& im : imgs)
        for (auto& piece : split_by_pool(im.poly, pool)) pieces.emplace(piece.key(), piece);
    std::vector<std::pair<Polyhedron, Int>> weighted;
    for (const auto& [key, piece] : pieces) {
        // the piece lattice expressed in target-lattice coordinates
        ZMat piece_lat;
        if (target_basis.empty()) {
            piece_lat = piece.lattice();
        } else {
            QMat coords;
            for (const auto& row : piece.lattice_in(target_lattice)) {
                auto c = coordinates_in_basis(target_basis, to_qvec(row));
                coords.push_back(*c);
            }
            for (const auto& c : coords) piece_lat.push_back(to_zvec(c));
        }
        Int w = 0;
        for (const auto& im : imgs)
            if (im.poly.contains_polyhedron(piece))
                w += im.weight * lattice_index(piece_lat, im.lat);
        weighted.emplace_back(piece, w);
    }
    WeightedComplex out = WeightedComplex::from_maximal_cells(target_ambient_, weighted);
    if (!target_lattice.empty()) out = out.with_ambient_lattice(target_lattice);
    return out;
}

PLMap compose(const PLMap& g, const PLMap& f) {
    std::vector<Hyperplane> pool;
    std::set<std::string> seen;
    std::vector<Hyperplane> gpool = g.source().hyperplane_pool();
    for (int i : f.source().maximal_ids()) {
        const CellAffine& ca = f.on_cell(i);
        for (const auto& h : gpool) {
            QVec a(f.source().ambient(), Rat(0));
            for (size_t r = 0; r < h.a.size(); ++r)
                for (int j = 0; j < f.source().ambient(); ++j) a[j] += Rat(h.a[r]) * ca.m[r][j];
            if (is_zero(a)) continue;
            Hyperplane ph = Hyperplane::of(a, Rat(h.c) - dot(to_qvec(h.a), ca.t));
            if (seen.insert(ph.key()).second) pool.push_back(ph);
        }
    }
    WeightedComplex refined = f.source().refine_along_pool(pool);
    std::map<std::string, CellAffine> data;
    for (int i : refined.maximal_ids()) {
        QVec p = refined.cell(i).relative_interior_point();
        auto fcells = f.source().cells_containing(p);
        require(!fcells.empty(), "InternalError", "refined cell escaped the source");
        const CellAffine& cf = f.on_cell(fcells.front());
        QVec q = cf.apply(p);
        auto gcells = g.source().cells_containing(q);
        require(!gcells.empty(), "ImageEscapesDomain", "image point outside the second map's source");
        const CellAffine& cg = g.on_cell(gcells.front());
        CellAffine comp;
        comp.m = mat_mul(cg.m, cf.m);
        comp.t = mat_vec(cg.m, cf.t) + cg.t;
        data.emplace(refined.cell(i).key(), std::move(comp));
    }
    PLMap out = PLMap::per_maximal(refined, data);
    if (g.has_target()) out.set_target(g.target());
    return out;
}

PseudoReport is_pseudomorphism(const PLMap& f, const QMat& extra_modulus) {
    PseudoReport report;
    const WeightedComplex& x = f.source();
    for (int tau : x.codim1_ids()) {
        PseudoEntry entry;
        entry.tau = tau;
        QVec sum = zero_qvec(f.target_ambient());
        for (int sigma : x.coface_ids(tau)) {
            if (x.weight(sigma) == 0) continue;
            ZVec u = x.normal_vector(tau, sigma);
            sum = sum + Rat(x.weight(sigma)) * f.on_cell(sigma).apply_linear(to_qvec(u));
        }
        QMat modulus = extra_modulus;
        for (const auto& row : x.cell(tau).lattice())
            modulus.push_back(f.on_cell(tau).apply_linear(to_qvec(row)));
        entry.residual = sum;
        entry.ok = in_span(modulus, sum);
        if (!entry.ok) report.ok = false;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

LocalSurjReport is_locally_surjective(const PLMap& f) {
    LocalSurjReport report;
    const WeightedComplex& x = f.source();
    const WeightedComplex& y = f.target();
    for (int tau = 0; tau < x.ncells(); ++tau) {
        LocalSurjEntry entry;
        entry.cell = tau;
        entry.point = x.cell(tau).relative_interior_point();
        QVec q = f.on_cell(tau).apply(entry.point);
        if (!y.supports(q)) {
            entry.ok = false;
            report.ok = false;
            report.entries.push_back(std::move(entry));
            continue;
        }
        std::vector<Polyhedron> images;
        for (int sigma : x.maximal_ids()) {
            const Polyhedron& s = x.cell(sigma);
            if (!s.contains(entry.point)) continue;
            std::vector<QVec> rays;
            for (const auto& pt : s.points()) {
                QVec d = pt - entry.point;
                if (!is_zero(d)) rays.push_back(d);
            }
            for (const auto& r : s.rays()) rays.push_back(to_qvec(r));
            QMat lin;
            for (const auto& l : s.lin()) lin.push_back(to_qvec(l));
            Polyhedron cone = Polyhedron::from_generators(x.ambient(),
                                                          {zero_qvec(x.ambient())}, rays, lin);
            images.push_back(cone.affine_image(f.on_cell(sigma).m, zero_qvec(f.target_ambient())));
        }
        WeightedComplex target_star = y.star(q);
        std::vector<Hyperplane> pool = pool_of_polyhedra(images);
        entry.ok = true;
        for (int c : target_star.maximal_ids()) {
            for (const auto& piece : split_by_pool(target_star.cell(c), pool)) {
                QVec rp = piece.relative_interior_point();
                bool covered = false;
                for (const auto& img : images)
                    if (img.contains(rp)) { covered = true; break; }
                if (!covered) {
                    entry.ok = false;
                    break;
                }
            }
            if (!entry.ok) break;
        }
        if (!entry.ok) report.ok = false;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::pair<WeightedComplex, QMat> quotient_by_subspace(const WeightedComplex& x, const QMat& l) {
    int n = x.ambient();
    if (l.empty()) return {x, identity_mat(n)};
    for (int i : x.maximal_ids()) {
        QMat lin_span;
        for (const auto& row : x.cell(i).lin()) lin_span.push_back(to_qvec(row));
        for (const auto& row : l)
            require(in_span(lin_span, row), "NotInLineality",
                    "subspace not contained in the lineality of every maximal cell");
    }
    ZMat llat = lattice_of_span(l, n);
    ZMat proj = z_kernel(llat, n);
    QMat p;
    for (const auto& row : proj) p.push_back(to_qvec(row));
    int m = static_cast<int>(p.size());
    QVec zero = zero_qvec(m);
    // the quotient map is a bijective reparameterization on this complex:
    // cells map one-to-one with their weights
    std::vector<std::pair<Polyhedron, Int>> cells;
    std::set<std::string> seen;
    for (int i : x.maximal_ids()) {
        Polyhedron img = x.cell(i).affine_image(p, zero);
        require(seen.insert(img.key()).second, "NotInLineality",
                "cells collide in the quotient; the subspace is not common lineality");
        cells.emplace_back(std::move(img), x.weight(i));
    }
    WeightedComplex out = WeightedComplex::from_maximal_cells(m, cells);
    if (!x.ambient_lattice().empty()) {
        ZMat mapped;
        for (const auto& row : x.ambient_lattice()) {
            ZVec img(proj.size(), Int(0));
            for (size_t i = 0; i < proj.size(); ++i)
                for (size_t j = 0; j < row.size(); ++j) img[i] += proj[i][j] * row[j];
            mapped.push_back(std::move(img));
        }
        out = out.with_ambient_lattice(hnf(mapped));
    }
    return {out, p};
}

bool equal_cycles_modulo(const WeightedComplex& a, const WeightedComplex& b, const QMat& l) {
    if (l.empty()) return a.equals_as_cycle(b);
    int n = a.ambient();
    require(hnf(a.ambient_lattice()) == hnf(b.ambient_lattice()), "LatticeMismatch",
            "cycle comparison across different ambient lattices");
    ZMat llat = lattice_of_span(l, n);
    ZMat proj = z_kernel(llat, n);
    QMat p;
    for (const auto& row : proj) p.push_back(to_qvec(row));
    QVec zero = zero_qvec(static_cast<int>(p.size()));
    ZMat quotient_lattice;
    if (!a.ambient_lattice().empty()) {
        ZMat mapped;
        for (const auto& row : a.ambient_lattice()) {
            ZVec img(proj.size(), Int(0));
            for (size_t i = 0; i < proj.size(); ++i)
                for (size_t j = 0; j < row.size(); ++j) img[i] += proj[i][j] * row[j];
            mapped.push_back(std::move(img));
        }
        quotient_lattice = hnf(mapped);
    }
    PLMap fa = PLMap::global(a, p, zero);
    PLMap fb = PLMap::global(b, p, zero);
    if (!quotient_lattice.empty()) {
        fa.set_target_lattice(quotient_lattice);
        fb.set_target_lattice(quotient_lattice);
    }
    return fa.push_forward().equals_as_cycle(fb.push_forward());
}

} // namespace tropmod
