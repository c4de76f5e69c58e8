#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace tropmod {

using Int = mpz_class;
using Rat = mpq_class;

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;
using QMat = std::vector<QVec>; // row major
using ZMat = std::vector<ZVec>;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p/q", "p", or a plain integer string. Throws std::invalid_argument on garbage.
Rat parse_rat(const std::string& s);
std::string format_rat(const Rat& r); // "p" or "p/q"

QVec to_qvec(const ZVec& v);
ZVec to_zvec(const QVec& v); // requires integral entries

bool is_integral(const Rat& r);
bool is_integral(const QVec& v);

QVec operator+(const QVec& a, const QVec& b);
QVec operator-(const QVec& a, const QVec& b);
QVec operator*(const Rat& c, const QVec& v);
Rat dot(const QVec& a, const QVec& b);
bool is_zero(const QVec& v);
QVec zero_qvec(int n);

// Clears denominators and divides by content. Zero vector maps to itself.
// Keeps the direction (no sign normalization).
ZVec primitive(const QVec& v);
// Same, but flips sign so the first nonzero entry is positive (for lines).
ZVec primitive_line(const QVec& v);

int compare(const QVec& a, const QVec& b);  // lexicographic
int compare(const ZVec& a, const ZVec& b);

} // namespace tropmod
