#pragma once

#include <cstdint>

#include "tropmod/numbers.hpp"

namespace tropmod {

// Deterministic xorshift generator for reproducible sampling in tests and
// checkers. All randomized checks take an explicit seed.
class Prng {
public:
    explicit Prng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t x = state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        state_ = x;
        return x;
    }

    long uniform(long lo, long hi) { // inclusive bounds
        return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    // rational in [-1, 1] with denominator up to 8
    Rat small_rat() {
        long den = uniform(1, 8);
        long num = uniform(-den, den);
        return rat(num, den);
    }

    // rational in (0, 1)
    Rat unit_rat() {
        long den = uniform(2, 16);
        long num = uniform(1, den - 1);
        return rat(num, den);
    }

private:
    uint64_t state_;
};

} // namespace tropmod
