#include "tropmod/linalg.hpp"

#include <stdexcept>

namespace tropmod {

std::vector<int> rref(QMat& a) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[r], a[p]);
        Rat inv = a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] /= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    a.resize(r); // drop zero rows
    return pivots;
}

int rank(QMat a) { return static_cast<int>(rref(a).size()); }

std::optional<QVec> solve(const QMat& a, const QVec& b) {
    size_t rows = a.size();
    if (rows == 0) return QVec{};
    size_t cols = a[0].size();
    QMat aug(rows, QVec(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<int> pivots = rref(aug);
    for (size_t i = 0; i < pivots.size(); ++i)
        if (pivots[i] == static_cast<int>(cols)) return std::nullopt; // 0 = 1 row
    QVec x(cols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

QMat nullspace(const QMat& a, int ncols) {
    QMat m = a;
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (int p : pivots) is_pivot[p] = true;
    QMat basis;
    for (int c = 0; c < ncols; ++c) {
        if (is_pivot[c]) continue;
        QVec v(ncols, Rat(0));
        v[c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][c];
        basis.push_back(v);
    }
    return basis;
}

bool in_span(const QMat& rows, const QVec& v) {
    if (is_zero(v)) return true;
    QMat m = rows;
    int r0 = rank(m);
    m.push_back(v);
    return rank(m) == r0;
}

QMat span_basis(const QMat& rows, int ncols) {
    (void)ncols;
    QMat m = rows;
    rref(m);
    return m;
}

QMat span_intersection(const QMat& rows_a, const QMat& rows_b, int ncols) {
    // span(a) = {x : y.x = 0 for all y in span(a)-perp}; perp = nullspace of rows.
    QMat eqs = nullspace(rows_a, ncols);
    QMat eq_b = nullspace(rows_b, ncols);
    eqs.insert(eqs.end(), eq_b.begin(), eq_b.end());
    return nullspace(eqs, ncols);
}

std::optional<QVec> coordinates_in_basis(const QMat& basis, const QVec& v) {
    // solve basis^T c = v
    size_t k = basis.size();
    size_t n = v.size();
    if (k == 0) return is_zero(v) ? std::optional<QVec>(QVec{}) : std::nullopt;
    QMat bt(n, QVec(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < n; ++j) bt[j][i] = basis[i][j];
    return solve(bt, v);
}

QVec mat_vec(const QMat& m, const QVec& x) {
    QVec out(m.size(), Rat(0));
    for (size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], x);
    return out;
}

QMat mat_mul(const QMat& a, const QMat& b) {
    size_t rows = a.size();
    size_t mid = b.size();
    size_t cols = mid ? b[0].size() : 0;
    QMat out(rows, QVec(cols, Rat(0)));
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < mid; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

QMat identity_mat(int n) {
    QMat m(n, QVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat hnf(ZMat a) {
    if (a.empty()) return a;
    size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        for (size_t i = r + 1; i < rows; ++i) {
            while (a[i][c] != 0) {
                if (a[r][c] == 0) {
                    std::swap(a[r], a[i]);
                    continue;
                }
                Int q = a[i][c] / a[r][c];
                if (q != 0)
                    for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) std::swap(a[r], a[i]);
            }
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) a[r][j] = -a[r][j];
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

ZMat z_kernel(const ZMat& a, int ncols) {
    // Column-style echelon with unimodular column transform U (A U = H);
    // columns of U over the zero columns of H span the saturated kernel.
    ZMat m = a;
    if (m.empty()) m.push_back(ZVec(ncols, Int(0)));
    size_t mrows = m.size();
    ZMat u(ncols, ZVec(ncols, Int(0))); // u[j] = column j of U
    for (int i = 0; i < ncols; ++i) u[i][i] = 1;
    int lead = 0;
    for (size_t r = 0; r < mrows && lead < ncols; ++r) {
        for (int c = lead + 1; c < ncols; ++c) {
            while (m[r][c] != 0) {
                if (m[r][lead] == 0) {
                    for (size_t i = 0; i < mrows; ++i) std::swap(m[i][lead], m[i][c]);
                    std::swap(u[lead], u[c]);
                    continue;
                }
                Int q = m[r][c] / m[r][lead];
                if (q != 0) {
                    for (size_t i = 0; i < mrows; ++i) m[i][c] -= q * m[i][lead];
                    for (int i = 0; i < ncols; ++i) u[c][i] -= q * u[lead][i];
                }
                if (m[r][c] != 0) {
                    for (size_t i = 0; i < mrows; ++i) std::swap(m[i][lead], m[i][c]);
                    std::swap(u[lead], u[c]);
                }
            }
        }
        if (m[r][lead] != 0) ++lead;
    }
    ZMat kernel;
    for (int c = lead; c < ncols; ++c) kernel.push_back(u[c]);
    return hnf(kernel);
}

ZMat saturate(const ZMat& rows, int ncols) {
    ZMat perp = z_kernel(rows, ncols);
    return z_kernel(perp, ncols);
}

ZMat lattice_of_span(const QMat& rows, int ncols) {
    ZMat zrows;
    for (const auto& r : rows) zrows.push_back(primitive(r));
    return saturate(zrows, ncols);
}

ZVec reduce_mod_lattice(ZVec v, const ZMat& hnf_basis) {
    for (const auto& row : hnf_basis) {
        size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v[p].get_mpz_t(), row[p].get_mpz_t());
        if (q != 0)
            for (size_t j = 0; j < v.size(); ++j) v[j] -= q * row[j];
    }
    return v;
}

Int lattice_index(const ZMat& super, const ZMat& sub) {
    if (super.size() != sub.size())
        throw std::invalid_argument("lattice_index: rank mismatch");
    size_t k = super.size();
    if (k == 0) return 1;
    QMat basis;
    for (const auto& r : super) basis.push_back(to_qvec(r));
    QMat coords;
    for (const auto& r : sub) {
        auto c = coordinates_in_basis(basis, to_qvec(r));
        if (!c) throw std::invalid_argument("lattice_index: sub not inside super span");
        coords.push_back(*c);
    }
    Rat det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t p = c;
        while (p < k && coords[p][c] == 0) ++p;
        if (p == k) return 0;
        if (p != c) {
            std::swap(coords[p], coords[c]);
            det = -det;
        }
        det *= coords[c][c];
        for (size_t i = c + 1; i < k; ++i) {
            Rat f = coords[i][c] / coords[c][c];
            for (size_t j = c; j < k; ++j) coords[i][j] -= f * coords[c][j];
        }
    }
    if (det < 0) det = -det;
    if (!is_integral(det))
        throw std::invalid_argument("lattice_index: sub is not a sublattice of super");
    return det.get_num();
}

} // namespace tropmod
