#include "tropmod/numbers.hpp"

#include <stdexcept>

namespace tropmod {

Rat parse_rat(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    try {
        Rat r(t);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

std::string format_rat(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

QVec to_qvec(const ZVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

ZVec to_zvec(const QVec& v) {
    ZVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].get_den() != 1) throw std::invalid_argument("vector entry not integral");
        out[i] = v[i].get_num();
    }
    return out;
}

bool is_integral(const Rat& r) { return r.get_den() == 1; }

bool is_integral(const QVec& v) {
    for (const auto& x : v)
        if (!is_integral(x)) return false;
    return true;
}

QVec operator+(const QVec& a, const QVec& b) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVec operator-(const QVec& a, const QVec& b) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVec operator*(const Rat& c, const QVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

QVec zero_qvec(int n) { return QVec(static_cast<size_t>(n), Rat(0)); }

ZVec primitive(const QVec& v) {
    Int den = 1;
    for (const auto& x : v) den = lcm(den, x.get_den());
    ZVec w(v.size());
    Int content = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        w[i] = v[i].get_num() * (den / v[i].get_den());
        content = gcd(content, w[i]);
    }
    if (content == 0) return w; // zero vector
    for (auto& x : w) x /= content;
    return w;
}

ZVec primitive_line(const QVec& v) {
    ZVec w = primitive(v);
    for (const auto& x : w) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : w) y = -y;
        break;
    }
    return w;
}

int compare(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

int compare(const ZVec& a, const ZVec& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

} // namespace tropmod
