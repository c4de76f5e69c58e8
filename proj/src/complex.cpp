#include "tropmod/complex.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "tropmod/error.hpp"

namespace tropmod {

WeightedComplex WeightedComplex::empty(int ambient) {
    WeightedComplex c;
    c.ambient_ = ambient;
    return c;
}

WeightedComplex WeightedComplex::real_line() {
    QMat lin{{QVec{Rat(1)}}};
    return single_point(QVec{Rat(0)}, lin);
}

WeightedComplex WeightedComplex::full_space(int ambient) {
    QMat lin;
    for (int i = 0; i < ambient; ++i) {
        QVec e = zero_qvec(ambient);
        e[i] = 1;
        lin.push_back(e);
    }
    return single_point(zero_qvec(ambient), lin);
}

WeightedComplex WeightedComplex::single_point(const QVec& p, const QMat& lineality) {
    Polyhedron cell = Polyhedron::from_generators(static_cast<int>(p.size()), {p}, {}, lineality);
    return from_maximal_cells(static_cast<int>(p.size()), {{cell, Int(1)}});
}

WeightedComplex WeightedComplex::from_maximal_cells(
    int ambient, const std::vector<std::pair<Polyhedron, Int>>& cells) {
    // merge duplicates, drop zero weights and empty cells
    std::map<std::string, size_t> seen;
    std::vector<std::pair<Polyhedron, Int>> maximal;
    for (const auto& [poly, w] : cells) {
        if (poly.is_empty() || w == 0) continue;
        auto it = seen.find(poly.key());
        if (it == seen.end()) {
            seen.emplace(poly.key(), maximal.size());
            maximal.emplace_back(poly, w);
        } else {
            maximal[it->second].second += w;
        }
    }
    maximal.erase(std::remove_if(maximal.begin(), maximal.end(),
                                 [](const auto& cw) { return cw.second == 0; }),
                  maximal.end());

    WeightedComplex out;
    out.ambient_ = ambient;
    if (maximal.empty()) return out;

    int d = maximal[0].first.dim();
    for (const auto& [poly, w] : maximal)
        require(poly.dim() == d, "MixedDimension",
                "maximal cells of a weighted complex must share one dimension");
    out.dim_ = d;

    // face closure
    std::map<std::string, int> index;
    std::vector<Polyhedron> all;
    std::vector<Int> weights;
    std::map<std::string, std::set<std::string>> cover_keys;
    std::queue<int> todo;
    for (const auto& [poly, w] : maximal) {
        index.emplace(poly.key(), static_cast<int>(all.size()));
        todo.push(static_cast<int>(all.size()));
        all.push_back(poly);
        weights.push_back(w);
    }
    while (!todo.empty()) {
        int id = todo.front();
        todo.pop();
        Polyhedron cell = all[id];
        for (const auto& f : cell.facets()) {
            auto it = index.find(f.key());
            int fid;
            if (it == index.end()) {
                fid = static_cast<int>(all.size());
                index.emplace(f.key(), fid);
                all.push_back(f);
                weights.push_back(0);
                todo.push(fid);
            } else {
                fid = it->second;
            }
            cover_keys[cell.key()].insert(all[fid].key());
        }
    }

    // canonical order: by dimension, then key
    std::vector<int> order(all.size());
    for (size_t i = 0; i < all.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (all[a].dim() != all[b].dim()) return all[a].dim() < all[b].dim();
        return all[a].key() < all[b].key();
    });
    std::vector<int> pos(all.size());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);

    out.cells_.resize(all.size());
    out.weights_.resize(all.size());
    out.covers_.resize(all.size());
    out.parents_.resize(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        out.cells_[pos[i]] = all[i];
        out.weights_[pos[i]] = weights[i];
        out.index_.emplace(all[i].key(), pos[i]);
    }
    for (const auto& [super_key, subs] : cover_keys) {
        int super = out.index_.at(super_key);
        for (const auto& sub_key : subs) {
            int sub = out.index_.at(sub_key);
            out.covers_[super].push_back(sub);
            out.parents_[sub].push_back(super);
        }
    }
    for (auto& v : out.covers_) std::sort(v.begin(), v.end());
    for (auto& v : out.parents_) std::sort(v.begin(), v.end());

    // common lineality of all maximal cells
    QMat common;
    bool first = true;
    for (size_t i = 0; i < out.cells_.size(); ++i) {
        if (out.weights_[i] == 0) continue;
        QMat l;
        for (const auto& row : out.cells_[i].lin()) l.push_back(to_qvec(row));
        if (first) {
            common = l;
            first = false;
        } else {
            common = span_intersection(common, l, ambient);
        }
    }
    out.lineality_ = lattice_of_span(common, ambient);
    return out;
}

std::vector<int> WeightedComplex::cells_of_dim(int d) const {
    std::vector<int> out;
    for (int i = 0; i < ncells(); ++i)
        if (cells_[i].dim() == d) out.push_back(i);
    return out;
}

std::vector<int> WeightedComplex::maximal_ids() const {
    std::vector<int> out;
    for (int i = 0; i < ncells(); ++i)
        if (weights_[i] != 0) out.push_back(i);
    return out;
}

std::vector<int> WeightedComplex::codim1_ids() const { return cells_of_dim(dim_ - 1); }

std::vector<std::pair<int, int>> WeightedComplex::face_relations() const {
    std::vector<std::pair<int, int>> out;
    for (int super = 0; super < ncells(); ++super)
        for (int sub : covers_[super]) out.emplace_back(sub, super);
    std::sort(out.begin(), out.end());
    return out;
}

int WeightedComplex::find_cell_of_relative_interior(const QVec& p) const {
    for (int i = 0; i < ncells(); ++i)
        if (cells_[i].contains_in_relative_interior(p)) return i;
    return -1;
}

bool WeightedComplex::supports(const QVec& p) const {
    for (int i : maximal_ids())
        if (cells_[i].contains(p)) return true;
    return false;
}

std::vector<int> WeightedComplex::cells_containing(const QVec& p) const {
    std::vector<int> out;
    for (int i = 0; i < ncells(); ++i)
        if (cells_[i].contains(p)) out.push_back(i);
    return out;
}

WeightedComplex WeightedComplex::scale(const Int& c) const {
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (int i : maximal_ids()) cells.emplace_back(cells_[i], c * weights_[i]);
    return from_maximal_cells(ambient_, cells).with_ambient_lattice(ambient_lattice_).with_modulus(modulus_);
}

WeightedComplex WeightedComplex::with_ambient_lattice(ZMat basis) const {
    WeightedComplex out = *this;
    out.ambient_lattice_ = std::move(basis);
    out.cell_lattice_cache_.assign(out.cells_.size(), std::nullopt);
    return out;
}

WeightedComplex WeightedComplex::with_modulus(ZMat rows) const {
    WeightedComplex out = *this;
    out.modulus_ = std::move(rows);
    return out;
}

QMat WeightedComplex::modulus_span() const {
    QMat out;
    for (const auto& row : modulus_) out.push_back(to_qvec(row));
    return out;
}

const ZMat& WeightedComplex::cell_lattice(int id) const {
    if (cell_lattice_cache_.size() != cells_.size())
        cell_lattice_cache_.assign(cells_.size(), std::nullopt);
    if (!cell_lattice_cache_[id]) cell_lattice_cache_[id] = cells_[id].lattice_in(ambient_lattice_);
    return *cell_lattice_cache_[id];
}

ZVec WeightedComplex::normal_vector(int tau, int sigma) const {
    require(tau >= 0 && tau < ncells() && sigma >= 0 && sigma < ncells(), "NotAFacet",
            "cell id out of range");
    const Polyhedron& t = cells_[tau];
    const Polyhedron& s = cells_[sigma];
    require(t.dim() + 1 == s.dim() && s.contains_polyhedron(t), "NotAFacet",
            "tau is not a codimension-1 face of sigma");
    const ZMat& slat = cell_lattice(sigma);
    const ZMat& tlat = cell_lattice(tau);
    int d = static_cast<int>(slat.size());
    QMat sbasis;
    for (const auto& r : slat) sbasis.push_back(to_qvec(r));
    ZMat t_in_s;
    for (const auto& r : tlat) {
        auto c = coordinates_in_basis(sbasis, to_qvec(r));
        require(c.has_value(), "InternalError", "face lattice not inside cell lattice");
        t_in_s.push_back(to_zvec(*c));
    }
    ZMat kernel = z_kernel(t_in_s, d);
    require(kernel.size() == 1, "InternalError", "codimension-1 quotient not rank 1");
    const ZVec& f = kernel[0];
    // integer u with f.u = 1 via iterated extended gcd
    ZVec u(d, Int(0));
    Int g = 0;
    for (int i = 0; i < d; ++i) {
        if (f[i] == 0) continue;
        if (g == 0) {
            // u[i] * f[i] = |f[i]| so far
            u[i] = sgn(f[i]);
            g = abs(f[i]);
            continue;
        }
        Int s_coef, t_coef, g2;
        mpz_gcdext(g2.get_mpz_t(), s_coef.get_mpz_t(), t_coef.get_mpz_t(), g.get_mpz_t(),
                   f[i].get_mpz_t());
        for (int j = 0; j < i; ++j) u[j] *= s_coef;
        u[i] = t_coef;
        g = g2;
    }
    require(g == 1, "InternalError", "quotient generator is not primitive");
    auto to_ambient = [&](const ZVec& coords) {
        ZVec amb(ambient_, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < ambient_; ++j) amb[j] += coords[i] * slat[i][j];
        return amb;
    };
    // orient into sigma via the facet inequality of sigma supporting tau
    const HRep& h = s.hrep();
    int facet_row = -1;
    for (size_t i = 0; i < h.ineq.size(); ++i) {
        bool tight = true;
        for (const auto& p : t.points())
            if (dot(h.ineq[i], p) != h.ineq_rhs[i]) { tight = false; break; }
        if (tight)
            for (const auto& r : t.rays())
                if (dot(h.ineq[i], to_qvec(r)) != 0) { tight = false; break; }
        if (tight)
            for (const auto& l : t.lin())
                if (dot(h.ineq[i], to_qvec(l)) != 0) { tight = false; break; }
        if (tight) { facet_row = static_cast<int>(i); break; }
    }
    require(facet_row >= 0, "InternalError", "no supporting facet inequality found");
    Rat side = dot(h.ineq[facet_row], to_qvec(to_ambient(u)));
    require(side != 0, "InternalError", "normal vector lies in the facet");
    if (side < 0)
        for (auto& x : u) x = -x;
    // canonical representative modulo the lattice of tau
    ZVec reduced = reduce_mod_lattice(u, hnf(t_in_s));
    // reduction must not cross back over the facet
    return to_ambient(reduced);
}

BalanceReport WeightedComplex::is_balanced() const {
    BalanceReport report;
    if (is_empty()) return report;
    for (int tau : codim1_ids()) {
        BalanceEntry entry;
        entry.tau = tau;
        ZVec sum(ambient_, Int(0));
        for (int sigma : parents_[tau]) {
            if (weights_[sigma] == 0) continue;
            ZVec u = normal_vector(tau, sigma);
            for (int j = 0; j < ambient_; ++j) sum[j] += weights_[sigma] * u[j];
        }
        entry.residual = sum;
        entry.ok = in_span(cells_[tau].direction_span(), to_qvec(sum));
        report.checked += 1;
        if (!entry.ok) {
            report.ok = false;
            report.failed += 1;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

WeightedComplex WeightedComplex::star(const QVec& p) const {
    require(supports(p), "PointNotInSupport", "star of a point outside the support");
    std::vector<std::pair<Polyhedron, Int>> cones;
    for (int i : maximal_ids()) {
        const Polyhedron& s = cells_[i];
        if (!s.contains(p)) continue;
        std::vector<QVec> rays;
        for (const auto& q : s.points()) {
            QVec d = q - p;
            if (!is_zero(d)) rays.push_back(d);
        }
        for (const auto& r : s.rays()) rays.push_back(to_qvec(r));
        QMat lin;
        for (const auto& l : s.lin()) lin.push_back(to_qvec(l));
        cones.emplace_back(Polyhedron::from_generators(ambient_, {zero_qvec(ambient_)}, rays, lin),
                           weights_[i]);
    }
    return from_maximal_cells(ambient_, cones).with_ambient_lattice(ambient_lattice_).with_modulus(modulus_);
}

WeightedComplex WeightedComplex::cross(const WeightedComplex& other) const {
    int n = ambient_ + other.ambient_;
    if (is_empty() || other.is_empty()) return empty(n);
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (int i : maximal_ids())
        for (int j : other.maximal_ids())
            cells.emplace_back(cells_[i].product(other.cells_[j]), weights_[i] * other.weights_[j]);
    WeightedComplex out = from_maximal_cells(n, cells);
    if (!ambient_lattice_.empty() || !other.ambient_lattice_.empty()) {
        auto block = [n](const ZMat& lat, int dim, int offset) {
            ZMat rows;
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
            return rows;
        };
        ZMat lat = block(ambient_lattice_, ambient_, 0);
        for (auto& r : block(other.ambient_lattice_, other.ambient_, ambient_)) lat.push_back(r);
        out = out.with_ambient_lattice(std::move(lat));
    }
    if (!modulus_.empty() || !other.modulus_.empty()) {
        ZMat rows;
        for (const auto& r : modulus_) {
            ZVec v(n, Int(0));
            for (int i = 0; i < ambient_; ++i) v[i] = r[i];
            rows.push_back(std::move(v));
        }
        for (const auto& r : other.modulus_) {
            ZVec v(n, Int(0));
            for (int i = 0; i < other.ambient_; ++i) v[ambient_ + i] = r[i];
            rows.push_back(std::move(v));
        }
        out = out.with_modulus(std::move(rows));
    }
    return out;
}

std::vector<Hyperplane> WeightedComplex::hyperplane_pool() const {
    std::vector<Hyperplane> pool;
    std::set<std::string> seen;
    auto add = [&](const QVec& a, const Rat& c) {
        if (is_zero(a)) return;
        Hyperplane h = Hyperplane::of(a, c);
        if (seen.insert(h.key()).second) pool.push_back(h);
    };
    for (const auto& cell : cells_) {
        const HRep& h = cell.hrep();
        for (size_t i = 0; i < h.eq.size(); ++i) add(h.eq[i], h.eq_rhs[i]);
        for (size_t i = 0; i < h.ineq.size(); ++i) add(h.ineq[i], h.ineq_rhs[i]);
    }
    return pool;
}

std::vector<Polyhedron> split_by_pool(const Polyhedron& p, const std::vector<Hyperplane>& pool) {
    std::vector<Polyhedron> work{p};
    for (const auto& h : pool) {
        QVec a = to_qvec(h.a);
        Rat c(h.c);
        std::vector<Polyhedron> next;
        for (auto& piece : work) {
            auto [pos, neg] = piece.strict_sides(a, c);
            if (pos && neg) {
                next.push_back(piece.chop(a, c, +1));
                next.push_back(piece.chop(a, c, -1));
            } else {
                next.push_back(std::move(piece));
            }
        }
        work = std::move(next);
    }
    return work;
}

std::vector<Hyperplane> pool_of_polyhedra(const std::vector<Polyhedron>& polys) {
    std::vector<Hyperplane> pool;
    std::set<std::string> seen;
    auto add = [&](const QVec& a, const Rat& c) {
        if (is_zero(a)) return;
        Hyperplane h = Hyperplane::of(a, c);
        if (seen.insert(h.key()).second) pool.push_back(h);
    };
    for (const auto& p : polys) {
        if (p.is_empty()) continue;
        const HRep& h = p.hrep();
        for (size_t i = 0; i < h.eq.size(); ++i) add(h.eq[i], h.eq_rhs[i]);
        for (size_t i = 0; i < h.ineq.size(); ++i) add(h.ineq[i], h.ineq_rhs[i]);
    }
    return pool;
}

WeightedComplex WeightedComplex::refine_along_pool(const std::vector<Hyperplane>& pool) const {
    if (is_empty()) return *this;
    std::vector<std::pair<Polyhedron, Int>> pieces;
    for (int i : maximal_ids())
        for (auto& piece : split_by_pool(cells_[i], pool)) pieces.emplace_back(std::move(piece), weights_[i]);
    return from_maximal_cells(ambient_, pieces).with_ambient_lattice(ambient_lattice_).with_modulus(modulus_);
}

bool WeightedComplex::support_contains(const Polyhedron& p) const {
    if (p.is_empty()) return true;
    if (is_empty()) return false;
    for (const auto& piece : split_by_pool(p, hyperplane_pool())) {
        QVec q = piece.relative_interior_point();
        bool covered = false;
        for (int i : maximal_ids())
            if (cells_[i].contains(q)) { covered = true; break; }
        if (!covered) return false;
    }
    return true;
}

WeightedComplex WeightedComplex::refine_along(const WeightedComplex& other) const {
    std::vector<Hyperplane> pool = hyperplane_pool();
    for (const auto& h : other.hyperplane_pool()) pool.push_back(h);
    return refine_along_pool(pool);
}

WeightedComplex WeightedComplex::sum(const WeightedComplex& other) const {
    require(ambient_ == other.ambient_, "DimensionMismatch", "sum in different ambient spaces");
    if (is_empty()) return other;
    if (other.is_empty()) return *this;
    require(dim_ == other.dim_, "DimensionMismatch", "sum of cycles of different dimension");
    std::vector<Hyperplane> pool = hyperplane_pool();
    for (const auto& h : other.hyperplane_pool()) pool.push_back(h);
    WeightedComplex a = refine_along_pool(pool);
    WeightedComplex b = other.refine_along_pool(pool);
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (int i : a.maximal_ids()) cells.emplace_back(a.cells_[i], a.weights_[i]);
    for (int i : b.maximal_ids()) cells.emplace_back(b.cells_[i], b.weights_[i]);
    return from_maximal_cells(ambient_, cells)
        .with_ambient_lattice(ambient_lattice_)
        .with_modulus(modulus_);
}

bool WeightedComplex::equals_as_cycle(const WeightedComplex& other) const {
    if (is_empty() && other.is_empty()) return true;
    if (is_empty() || other.is_empty()) return false;
    if (ambient_ != other.ambient_ || dim_ != other.dim_) return false;
    return sum(other.scale(Int(-1))).is_empty();
}

bool WeightedComplex::equal_support(const WeightedComplex& other) const {
    if (is_empty() || other.is_empty()) return is_empty() == other.is_empty();
    if (ambient_ != other.ambient_ || dim_ != other.dim_) return false;
    std::vector<Hyperplane> pool = hyperplane_pool();
    for (const auto& h : other.hyperplane_pool()) pool.push_back(h);
    WeightedComplex a = refine_along_pool(pool);
    WeightedComplex b = other.refine_along_pool(pool);
    std::set<std::string> ka, kb;
    for (int i : a.maximal_ids()) ka.insert(a.cells_[i].key());
    for (int i : b.maximal_ids()) kb.insert(b.cells_[i].key());
    return ka == kb;
}

void WeightedComplex::validate() const {
    std::vector<std::set<int>> closure(ncells());
    for (int i = 0; i < ncells(); ++i) {
        std::queue<int> q;
        q.push(i);
        while (!q.empty()) {
            int c = q.front();
            q.pop();
            if (!closure[i].insert(c).second) continue;
            for (int f : covers_[c]) q.push(f);
        }
    }
    for (int i = 0; i < ncells(); ++i) {
        for (int j = i + 1; j < ncells(); ++j) {
            Polyhedron meet = cells_[i].intersect(cells_[j]);
            if (meet.is_empty()) continue;
            auto it = index_.find(meet.key());
            require(it != index_.end(), "InvalidComplex",
                    "cells intersect outside the face lattice");
            require(closure[i].count(it->second) && closure[j].count(it->second), "InvalidComplex",
                    "cell intersection is not a common face");
        }
    }
}

} // namespace tropmod
