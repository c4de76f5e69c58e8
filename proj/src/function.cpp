#include "tropmod/function.hpp"

#include <set>

#include "tropmod/error.hpp"

namespace tropmod {

RationalFunction RationalFunction::affine(QVec a, Rat c) {
    RationalFunction f;
    f.kind_ = Kind::Affine;
    f.ambient_ = static_cast<int>(a.size());
    f.term_ = {std::move(a), std::move(c)};
    return f;
}

RationalFunction RationalFunction::max_of(std::vector<RationalFunction> children) {
    require(!children.empty(), "InvalidFunction", "max of an empty list");
    if (children.size() == 1) return children[0];
    RationalFunction f;
    f.kind_ = Kind::Max;
    f.ambient_ = children[0].ambient_;
    f.children_ = std::move(children);
    return f;
}

RationalFunction RationalFunction::min_of(std::vector<RationalFunction> children) {
    require(!children.empty(), "InvalidFunction", "min of an empty list");
    if (children.size() == 1) return children[0];
    RationalFunction f;
    f.kind_ = Kind::Min;
    f.ambient_ = children[0].ambient_;
    f.children_ = std::move(children);
    return f;
}

RationalFunction RationalFunction::max_terms(std::vector<AffineTerm> terms) {
    std::vector<RationalFunction> children;
    for (auto& t : terms) children.push_back(affine(std::move(t.a), std::move(t.c)));
    return max_of(std::move(children));
}

RationalFunction RationalFunction::shifted_max(const QVec& center) {
    int n = static_cast<int>(center.size());
    std::vector<AffineTerm> terms;
    for (int i = 0; i < n; ++i) {
        QVec a = zero_qvec(n);
        a[i] = 1;
        terms.push_back({a, -center[i]});
    }
    return max_terms(std::move(terms));
}

Rat RationalFunction::value(const QVec& x) const {
    switch (kind_) {
        case Kind::Affine:
            return term_.value(x);
        case Kind::Max: {
            Rat best = children_[0].value(x);
            for (size_t i = 1; i < children_.size(); ++i) {
                Rat v = children_[i].value(x);
                if (v > best) best = v;
            }
            return best;
        }
        case Kind::Min: {
            Rat best = children_[0].value(x);
            for (size_t i = 1; i < children_.size(); ++i) {
                Rat v = children_[i].value(x);
                if (v < best) best = v;
            }
            return best;
        }
    }
    return Rat(0);
}

void RationalFunction::collect_terms(std::vector<AffineTerm>& out) const {
    if (kind_ == Kind::Affine) {
        out.push_back(term_);
        return;
    }
    for (const auto& c : children_) c.collect_terms(out);
}

std::vector<Hyperplane> RationalFunction::tie_hyperplanes() const {
    std::vector<AffineTerm> terms;
    collect_terms(terms);
    std::vector<Hyperplane> pool;
    std::set<std::string> seen;
    for (size_t i = 0; i < terms.size(); ++i) {
        for (size_t j = i + 1; j < terms.size(); ++j) {
            QVec a = terms[i].a - terms[j].a;
            if (is_zero(a)) continue;
            Hyperplane h = Hyperplane::of(a, terms[j].c - terms[i].c);
            if (seen.insert(h.key()).second) pool.push_back(h);
        }
    }
    return pool;
}

namespace {

// t1 >= t2 everywhere on the cell
bool dominates(const AffineTerm& t1, const AffineTerm& t2, const Polyhedron& cell) {
    for (const auto& p : cell.points())
        if (t1.value(p) < t2.value(p)) return false;
    for (const auto& r : cell.rays())
        if (dot(t1.a, to_qvec(r)) < dot(t2.a, to_qvec(r))) return false;
    for (const auto& l : cell.lin())
        if (dot(t1.a, to_qvec(l)) != dot(t2.a, to_qvec(l))) return false;
    return true;
}

} // namespace

AffineTerm RationalFunction::active_term(const Polyhedron& cell) const {
    if (kind_ == Kind::Affine) return term_;
    std::vector<AffineTerm> cand;
    for (const auto& c : children_) cand.push_back(c.active_term(cell));
    bool want_max = (kind_ == Kind::Max);
    for (size_t i = 0; i < cand.size(); ++i) {
        bool wins = true;
        for (size_t j = 0; j < cand.size(); ++j) {
            if (i == j) continue;
            bool ok = want_max ? dominates(cand[i], cand[j], cell) : dominates(cand[j], cand[i], cell);
            if (!ok) {
                wins = false;
                break;
            }
        }
        if (wins) return cand[i];
    }
    fail("NotAffineOnCells", "function is not affine on a cell; refine the complex first");
}

RationalFunction RationalFunction::pullback(const QMat& m, const QVec& t, int source_dim) const {
    if (source_dim < 0) source_dim = m.empty() ? 0 : static_cast<int>(m[0].size());
    if (kind_ == Kind::Affine) {
        QVec a(source_dim, Rat(0));
        for (size_t i = 0; i < m.size(); ++i)
            for (int j = 0; j < source_dim; ++j) a[j] += term_.a[i] * m[i][j];
        return affine(std::move(a), term_.c + dot(term_.a, t));
    }
    std::vector<RationalFunction> children;
    for (const auto& c : children_) children.push_back(c.pullback(m, t, source_dim));
    return kind_ == Kind::Max ? max_of(std::move(children)) : min_of(std::move(children));
}

} // namespace tropmod
