#include "tropmod/polyhedron.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "tropmod/error.hpp"

namespace tropmod {

Hyperplane Hyperplane::of(const QVec& normal, const Rat& rhs) {
    QVec joint = normal;
    joint.push_back(-rhs);
    ZVec prim = primitive_line(joint);
    Hyperplane h;
    h.c = -prim.back();
    prim.pop_back();
    h.a = prim;
    return h;
}

std::string Hyperplane::key() const {
    std::ostringstream os;
    for (const auto& x : a) os << x.get_str() << ",";
    os << ";" << c.get_str();
    return os.str();
}

namespace {

struct DDRay {
    QVec v;
    std::vector<int> tight; // sorted indices of processed inequalities tight on v
};

void normalize_ray(QVec& v) {
    ZVec p = primitive(v);
    for (size_t i = 0; i < v.size(); ++i) v[i] = Rat(p[i]);
}

bool tight_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> tight_intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

QVec reduce_mod_lin(QVec v, const ZMat& lin_hnf) {
    for (const auto& row : lin_hnf) {
        size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        if (v[p] == 0) continue;
        Rat f = v[p] / Rat(row[p]);
        for (size_t j = 0; j < v.size(); ++j) v[j] -= f * Rat(row[j]);
    }
    return v;
}

} // namespace

std::pair<QMat, QMat> dd_cone(const std::vector<Constraint>& cons, int n) {
    QMat lin;
    for (int i = 0; i < n; ++i) {
        QVec e(n, Rat(0));
        e[i] = 1;
        lin.push_back(e);
    }
    std::vector<DDRay> rays;
    int processed = 0; // number of inequality constraints seen so far

    for (const auto& con : cons) {
        const QVec& a = con.a;
        int pivot = -1;
        Rat d0;
        for (size_t i = 0; i < lin.size(); ++i) {
            Rat d = dot(a, lin[i]);
            if (d != 0) {
                pivot = static_cast<int>(i);
                d0 = d;
                break;
            }
        }
        if (pivot >= 0) {
            QVec l0 = lin[pivot];
            lin.erase(lin.begin() + pivot);
            for (auto& l : lin) {
                Rat d = dot(a, l);
                if (d != 0) l = l - (d / d0) * l0;
            }
            for (auto& r : rays) {
                Rat d = dot(a, r.v);
                if (d != 0) {
                    r.v = r.v - (d / d0) * l0;
                    normalize_ray(r.v);
                }
                if (!con.eq) r.tight.push_back(processed);
            }
            if (!con.eq) {
                DDRay r0;
                r0.v = (d0 > 0) ? l0 : Rat(-1) * l0;
                normalize_ray(r0.v);
                for (int i = 0; i < processed; ++i) r0.tight.push_back(i);
                rays.push_back(std::move(r0));
                ++processed;
            }
            continue;
        }

        // constraint vanishes on the lineality space: split the rays
        std::vector<DDRay> pos, zero, neg;
        for (auto& r : rays) {
            int s = sgn(dot(a, r.v));
            if (s > 0)
                pos.push_back(std::move(r));
            else if (s < 0)
                neg.push_back(std::move(r));
            else
                zero.push_back(std::move(r));
        }
        std::vector<DDRay> combos;
        for (const auto& p : pos) {
            for (const auto& m : neg) {
                std::vector<int> t = tight_intersect(p.tight, m.tight);
                bool adjacent = true;
                auto blocks = [&](const DDRay& r) {
                    return &r != &p && &r != &m && tight_subset(t, r.tight);
                };
                for (const auto& r : pos)
                    if (blocks(r)) { adjacent = false; break; }
                if (adjacent)
                    for (const auto& r : zero)
                        if (blocks(r)) { adjacent = false; break; }
                if (adjacent)
                    for (const auto& r : neg)
                        if (blocks(r)) { adjacent = false; break; }
                if (!adjacent) continue;
                Rat dp = dot(a, p.v), dm = dot(a, m.v);
                DDRay nr;
                nr.v = dp * m.v - dm * p.v;
                normalize_ray(nr.v);
                nr.tight = t;
                if (!con.eq) {
                    nr.tight.push_back(processed);
                    std::sort(nr.tight.begin(), nr.tight.end());
                }
                combos.push_back(std::move(nr));
            }
        }
        std::vector<DDRay> next;
        if (!con.eq) {
            for (auto& z : zero) z.tight.push_back(processed);
            next = std::move(pos);
        }
        for (auto& z : zero) next.push_back(std::move(z));
        for (auto& cmb : combos) next.push_back(std::move(cmb));
        rays = std::move(next);
        if (!con.eq) ++processed;
    }

    QMat out_rays;
    for (auto& r : rays) out_rays.push_back(std::move(r.v));
    return {lin, out_rays};
}

// ---- Polyhedron -----------------------------------------------------------

Polyhedron Polyhedron::empty(int ambient) {
    Polyhedron p;
    p.ambient_ = ambient;
    return p;
}

Polyhedron Polyhedron::point(const QVec& p) {
    return from_generators(static_cast<int>(p.size()), {p}, {}, {});
}

static std::vector<Constraint> polar_constraints(const std::vector<QVec>& gens,
                                                 const std::vector<QVec>& lins) {
    std::vector<Constraint> cons;
    for (const auto& g : gens) cons.push_back({g, Rat(0), false});
    for (const auto& l : lins) cons.push_back({l, Rat(0), true});
    return cons;
}

Polyhedron Polyhedron::from_generators(int ambient, const std::vector<QVec>& points,
                                       const std::vector<QVec>& rays,
                                       const std::vector<QVec>& lin) {
    if (points.empty()) return empty(ambient);
    int nh = ambient + 1;
    std::vector<QVec> gens, lins;
    for (const auto& p : points) {
        QVec h(nh);
        h[0] = 1;
        for (int i = 0; i < ambient; ++i) h[i + 1] = p[i];
        gens.push_back(h);
    }
    for (const auto& r : rays) {
        if (is_zero(r)) continue;
        QVec h(nh, Rat(0));
        for (int i = 0; i < ambient; ++i) h[i + 1] = r[i];
        gens.push_back(h);
    }
    for (const auto& l : lin) {
        if (is_zero(l)) continue;
        QVec h(nh, Rat(0));
        for (int i = 0; i < ambient; ++i) h[i + 1] = l[i];
        lins.push_back(h);
    }

    auto [heq, hineq] = dd_cone(polar_constraints(gens, lins), nh);

    // back-conversion for the canonical minimal generators
    std::vector<Constraint> cons2;
    for (const auto& e : heq) cons2.push_back({e, Rat(0), true});
    for (const auto& i : hineq) cons2.push_back({i, Rat(0), false});
    auto [linc, raysc] = dd_cone(cons2, nh);

    Polyhedron out;
    out.ambient_ = ambient;
    for (const auto& l : linc) {
        require(l[0] == 0, "InternalError", "homogenization coordinate in lineality");
        out.lin_.push_back(primitive(QVec(l.begin() + 1, l.end())));
    }
    for (const auto& r : raysc) {
        require(r[0] >= 0, "InternalError", "negative homogenization coordinate");
        if (r[0] > 0) {
            QVec p(ambient);
            for (int i = 0; i < ambient; ++i) p[i] = r[i + 1] / r[0];
            out.points_.push_back(std::move(p));
        } else {
            out.rays_.push_back(primitive(QVec(r.begin() + 1, r.end())));
        }
    }
    require(!out.points_.empty(), "InternalError", "generator set produced empty polyhedron");

    // cache the H-representation (dehomogenized)
    HRep h;
    for (const auto& e : heq) {
        h.eq.push_back(QVec(e.begin() + 1, e.end()));
        h.eq_rhs.push_back(-e[0]);
    }
    for (const auto& i : hineq) {
        QVec a(i.begin() + 1, i.end());
        if (is_zero(a)) continue; // the trivial facet x0 >= 0
        h.ineq.push_back(a);
        h.ineq_rhs.push_back(-i[0]);
    }
    out.canonicalize_vrep();
    out.hrep_ = std::move(h);
    return out;
}

Polyhedron Polyhedron::from_hrep(int ambient, const std::vector<Constraint>& cons) {
    int nh = ambient + 1;
    std::vector<Constraint> hcons;
    {
        QVec x0(nh, Rat(0));
        x0[0] = 1;
        hcons.push_back({x0, Rat(0), false});
    }
    for (const auto& c : cons) {
        QVec h(nh);
        h[0] = -c.c;
        for (int i = 0; i < ambient; ++i) h[i + 1] = c.a[i];
        hcons.push_back({h, Rat(0), c.eq});
    }
    auto [linc, raysc] = dd_cone(hcons, nh);
    std::vector<QVec> pts, rys, lns;
    for (const auto& l : linc) lns.push_back(QVec(l.begin() + 1, l.end()));
    for (const auto& r : raysc) {
        if (r[0] > 0) {
            QVec p(ambient);
            for (int i = 0; i < ambient; ++i) p[i] = r[i + 1] / r[0];
            pts.push_back(std::move(p));
        } else if (r[0] == 0) {
            rys.push_back(QVec(r.begin() + 1, r.end()));
        }
    }
    if (pts.empty()) return empty(ambient);
    return from_generators(ambient, pts, rys, lns);
}

void Polyhedron::canonicalize_vrep() {
    ZMat zl;
    for (const auto& l : lin_) zl.push_back(l);
    lin_ = saturate(zl, ambient_);
    ZMat new_rays;
    for (const auto& r : rays_) {
        QVec red = reduce_mod_lin(to_qvec(r), lin_);
        new_rays.push_back(primitive(red));
    }
    std::sort(new_rays.begin(), new_rays.end(),
              [](const ZVec& a, const ZVec& b) { return compare(a, b) < 0; });
    new_rays.erase(std::unique(new_rays.begin(), new_rays.end()), new_rays.end());
    rays_ = std::move(new_rays);
    std::vector<QVec> new_pts;
    for (const auto& p : points_) new_pts.push_back(reduce_mod_lin(p, lin_));
    std::sort(new_pts.begin(), new_pts.end(),
              [](const QVec& a, const QVec& b) { return compare(a, b) < 0; });
    new_pts.erase(std::unique(new_pts.begin(), new_pts.end()), new_pts.end());
    points_ = std::move(new_pts);
    key_.reset();
    lattice_.reset();
}

void Polyhedron::compute_hrep() const {
    if (hrep_) return;
    require(!is_empty(), "InternalError", "H-representation of empty polyhedron");
    Polyhedron tmp = from_generators(ambient_, points_, [&] {
        std::vector<QVec> r;
        for (const auto& x : rays_) r.push_back(to_qvec(x));
        return r;
    }(), [&] {
        std::vector<QVec> l;
        for (const auto& x : lin_) l.push_back(to_qvec(x));
        return l;
    }());
    hrep_ = tmp.hrep();
}

const HRep& Polyhedron::hrep() const {
    compute_hrep();
    return *hrep_;
}

int Polyhedron::dim() const {
    if (is_empty()) return -1;
    return ambient_ - static_cast<int>(hrep().eq.size());
}

const ZMat& Polyhedron::lattice() const {
    if (!lattice_) {
        QMat dirs;
        for (size_t i = 1; i < points_.size(); ++i) dirs.push_back(points_[i] - points_[0]);
        for (const auto& r : rays_) dirs.push_back(to_qvec(r));
        for (const auto& l : lin_) dirs.push_back(to_qvec(l));
        lattice_ = lattice_of_span(dirs, ambient_);
    }
    return *lattice_;
}

ZMat Polyhedron::lattice_in(const ZMat& ambient) const {
    if (ambient.empty()) return lattice();
    QMat basis;
    for (const auto& row : ambient) basis.push_back(to_qvec(row));
    QMat dirs;
    for (size_t i = 1; i < points_.size(); ++i) dirs.push_back(points_[i] - points_[0]);
    for (const auto& r : rays_) dirs.push_back(to_qvec(r));
    for (const auto& l : lin_) dirs.push_back(to_qvec(l));
    QMat coords;
    for (const auto& d : dirs) {
        auto c = coordinates_in_basis(basis, d);
        require(c.has_value(), "InternalError", "ambient lattice is not full rank");
        coords.push_back(*c);
    }
    ZMat sat = lattice_of_span(coords, static_cast<int>(ambient.size()));
    ZMat out;
    for (const auto& c : sat) {
        ZVec v(ambient_, Int(0));
        for (size_t i = 0; i < c.size(); ++i)
            for (int j = 0; j < ambient_; ++j) v[j] += c[i] * ambient[i][j];
        out.push_back(std::move(v));
    }
    return out;
}

QMat Polyhedron::direction_span() const {
    QMat out;
    for (const auto& r : lattice()) out.push_back(to_qvec(r));
    return out;
}

QVec Polyhedron::relative_interior_point() const {
    require(!is_empty(), "InternalError", "relative interior of empty polyhedron");
    QVec p = zero_qvec(ambient_);
    for (const auto& q : points_) p = p + q;
    p = Rat(1, static_cast<long>(points_.size())) * p;
    for (const auto& r : rays_) p = p + to_qvec(r);
    return p;
}

bool Polyhedron::contains(const QVec& x) const {
    if (is_empty()) return false;
    const HRep& h = hrep();
    for (size_t i = 0; i < h.eq.size(); ++i)
        if (dot(h.eq[i], x) != h.eq_rhs[i]) return false;
    for (size_t i = 0; i < h.ineq.size(); ++i)
        if (dot(h.ineq[i], x) < h.ineq_rhs[i]) return false;
    return true;
}

bool Polyhedron::contains_in_relative_interior(const QVec& x) const {
    if (is_empty()) return false;
    const HRep& h = hrep();
    for (size_t i = 0; i < h.eq.size(); ++i)
        if (dot(h.eq[i], x) != h.eq_rhs[i]) return false;
    for (size_t i = 0; i < h.ineq.size(); ++i)
        if (dot(h.ineq[i], x) <= h.ineq_rhs[i]) return false;
    return true;
}

bool Polyhedron::contains_polyhedron(const Polyhedron& other) const {
    if (other.is_empty()) return true;
    if (is_empty()) return false;
    const HRep& h = hrep();
    for (const auto& p : other.points_)
        if (!contains(p)) return false;
    auto dir_ok = [&](const QVec& d, bool line) {
        for (const auto& e : h.eq)
            if (dot(e, d) != 0) return false;
        for (const auto& a : h.ineq) {
            Rat v = dot(a, d);
            if (line ? v != 0 : v < 0) return false;
        }
        return true;
    };
    for (const auto& r : other.rays_)
        if (!dir_ok(to_qvec(r), false)) return false;
    for (const auto& l : other.lin_)
        if (!dir_ok(to_qvec(l), true)) return false;
    return true;
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
    if (is_empty() || other.is_empty()) return empty(ambient_);
    std::vector<Constraint> cons;
    auto add = [&cons](const HRep& h) {
        for (size_t i = 0; i < h.eq.size(); ++i) cons.push_back({h.eq[i], h.eq_rhs[i], true});
        for (size_t i = 0; i < h.ineq.size(); ++i) cons.push_back({h.ineq[i], h.ineq_rhs[i], false});
    };
    add(hrep());
    add(other.hrep());
    return from_hrep(ambient_, cons);
}

Polyhedron Polyhedron::chop(const QVec& a, const Rat& c, int side) const {
    if (is_empty()) return *this;
    std::vector<Constraint> cons;
    const HRep& h = hrep();
    for (size_t i = 0; i < h.eq.size(); ++i) cons.push_back({h.eq[i], h.eq_rhs[i], true});
    for (size_t i = 0; i < h.ineq.size(); ++i) cons.push_back({h.ineq[i], h.ineq_rhs[i], false});
    if (side > 0)
        cons.push_back({a, c, false});
    else
        cons.push_back({Rat(-1) * a, -c, false});
    return from_hrep(ambient_, cons);
}

std::pair<bool, bool> Polyhedron::strict_sides(const QVec& a, const Rat& c) const {
    if (is_empty()) return {false, false};
    bool unbounded_up = false, unbounded_down = false;
    for (const auto& r : rays_) {
        int s = sgn(dot(a, to_qvec(r)));
        if (s > 0) unbounded_up = true;
        if (s < 0) unbounded_down = true;
    }
    for (const auto& l : lin_) {
        if (dot(a, to_qvec(l)) != 0) {
            unbounded_up = unbounded_down = true;
            break;
        }
    }
    bool has_pos = unbounded_up, has_neg = unbounded_down;
    for (const auto& p : points_) {
        Rat v = dot(a, p);
        if (v > c) has_pos = true;
        if (v < c) has_neg = true;
    }
    return {has_pos, has_neg};
}

std::vector<Polyhedron> Polyhedron::facets() const {
    std::vector<Polyhedron> out;
    if (is_empty()) return out;
    const HRep& h = hrep();
    for (size_t i = 0; i < h.ineq.size(); ++i) {
        std::vector<QVec> pts, rys, lns;
        for (const auto& p : points_)
            if (dot(h.ineq[i], p) == h.ineq_rhs[i]) pts.push_back(p);
        for (const auto& r : rays_)
            if (dot(h.ineq[i], to_qvec(r)) == 0) rys.push_back(to_qvec(r));
        for (const auto& l : lin_) lns.push_back(to_qvec(l));
        require(!pts.empty(), "InternalError", "facet without minimal face");
        out.push_back(from_generators(ambient_, pts, rys, lns));
    }
    return out;
}

Polyhedron Polyhedron::affine_image(const QMat& m, const QVec& t) const {
    int target = static_cast<int>(m.size());
    if (is_empty()) return empty(target);
    auto apply_lin = [&](const QVec& v) {
        QVec out(target);
        for (int i = 0; i < target; ++i) out[i] = dot(m[i], v);
        return out;
    };
    std::vector<QVec> pts, rys, lns;
    for (const auto& p : points_) pts.push_back(apply_lin(p) + t);
    for (const auto& r : rays_) {
        QVec img = apply_lin(to_qvec(r));
        if (!is_zero(img)) rys.push_back(img);
    }
    for (const auto& l : lin_) {
        QVec img = apply_lin(to_qvec(l));
        if (!is_zero(img)) lns.push_back(img);
    }
    return from_generators(target, pts, rys, lns);
}

Polyhedron Polyhedron::product(const Polyhedron& other) const {
    int n = ambient_ + other.ambient_;
    if (is_empty() || other.is_empty()) return empty(n);
    auto pad_left = [&](const QVec& v) {
        QVec out(n, Rat(0));
        for (int i = 0; i < ambient_; ++i) out[i] = v[i];
        return out;
    };
    auto pad_right = [&](const QVec& v) {
        QVec out(n, Rat(0));
        for (int i = 0; i < other.ambient_; ++i) out[ambient_ + i] = v[i];
        return out;
    };
    std::vector<QVec> pts, rys, lns;
    for (const auto& p : points_)
        for (const auto& q : other.points_) {
            QVec v = pad_left(p);
            for (int i = 0; i < other.ambient_; ++i) v[ambient_ + i] = q[i];
            pts.push_back(v);
        }
    for (const auto& r : rays_) rys.push_back(pad_left(to_qvec(r)));
    for (const auto& r : other.rays_) rys.push_back(pad_right(to_qvec(r)));
    for (const auto& l : lin_) lns.push_back(pad_left(to_qvec(l)));
    for (const auto& l : other.lin_) lns.push_back(pad_right(to_qvec(l)));
    return from_generators(n, pts, rys, lns);
}

Polyhedron Polyhedron::add_lineality(const QMat& extra_lin) const {
    if (is_empty()) return *this;
    std::vector<QVec> lns;
    for (const auto& l : lin_) lns.push_back(to_qvec(l));
    for (const auto& l : extra_lin) lns.push_back(l);
    std::vector<QVec> rys;
    for (const auto& r : rays_) rys.push_back(to_qvec(r));
    return from_generators(ambient_, points_, rys, lns);
}

bool Polyhedron::is_cone() const {
    return points_.size() == 1 && is_zero(points_[0]);
}

const std::string& Polyhedron::key() const {
    if (!key_) {
        std::ostringstream os;
        os << ambient_ << "|L";
        for (const auto& l : lin_) {
            for (const auto& x : l) os << x.get_str() << ",";
            os << ";";
        }
        os << "|R";
        for (const auto& r : rays_) {
            for (const auto& x : r) os << x.get_str() << ",";
            os << ";";
        }
        os << "|P";
        for (const auto& p : points_) {
            for (const auto& x : p) os << x.get_num().get_str() << "/" << x.get_den().get_str() << ",";
            os << ";";
        }
        key_ = os.str();
    }
    return *key_;
}

} // namespace tropmod
