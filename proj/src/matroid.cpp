#include "tropmod/matroid.hpp"

#include <algorithm>
#include <set>
#include <cstdlib>

#include "tropmod/error.hpp"

namespace tropmod {

namespace {
int popcount(uint32_t x) { return __builtin_popcount(x); }
} // namespace

std::vector<int> Matroid::to_elements(uint32_t mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i + 1);
    return out;
}

uint32_t Matroid::to_mask(const std::vector<int>& elements) {
    uint32_t mask = 0;
    for (int e : elements) mask |= (1u << (e - 1));
    return mask;
}

int Matroid::max_ground_size() {
    if (const char* env = std::getenv("TROPMOD_MAX_GROUND")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 15;
}

Matroid Matroid::from_oracle(int m, std::string name, std::function<int(uint32_t)> rank) {
    Matroid out;
    out.m_ = m;
    out.name_ = std::move(name);
    out.rank_ = std::move(rank);
    out.memo_ = std::make_shared<std::map<uint32_t, int>>();
    return out;
}

Matroid Matroid::uniform(int rank, int m) {
    require(rank >= 0 && rank <= m, "InvalidArgument", "uniform matroid needs 0 <= r <= m");
    return from_oracle(m, "U(" + std::to_string(rank) + "," + std::to_string(m) + ")",
                       [rank](uint32_t s) { return std::min(rank, popcount(s)); });
}

Matroid Matroid::graphic(int nvertices, std::vector<std::pair<int, int>> edges) {
    int m = static_cast<int>(edges.size());
    auto rank = [nvertices, edges](uint32_t s) {
        std::vector<int> parent(nvertices + 1);
        for (int i = 0; i <= nvertices; ++i) parent[i] = i;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int merges = 0;
        for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
            if (!(s & (1u << i))) continue;
            int a = find(edges[i].first), b = find(edges[i].second);
            if (a != b) {
                parent[a] = b;
                ++merges;
            }
        }
        return merges;
    };
    return from_oracle(m, "graphic", rank);
}

Matroid Matroid::graphic_complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
    Matroid out = graphic(n, std::move(edges));
    out.name_ = "M(K" + std::to_string(n) + ")";
    return out;
}

Matroid Matroid::from_flats(int m, const std::vector<std::vector<int>>& flats) {
    // rank of A = rank of the smallest flat containing A (the intersection of
    // all flats above A); flat ranks are longest-chain lengths in the lattice.
    std::vector<uint32_t> masks;
    for (const auto& f : flats) masks.push_back(to_mask(f));
    uint32_t ground = m == 32 ? ~0u : ((1u << m) - 1);
    if (std::find(masks.begin(), masks.end(), ground) == masks.end()) masks.push_back(ground);
    std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
        return popcount(a) < popcount(b) || (popcount(a) == popcount(b) && a < b);
    });
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::map<uint32_t, int> flat_rank;
    for (uint32_t f : masks) {
        int r = 0;
        for (uint32_t g : masks)
            if (g != f && (g & f) == g) r = std::max(r, flat_rank.at(g) + 1);
        flat_rank[f] = r;
    }
    auto rank = [masks, flat_rank](uint32_t s) {
        uint32_t meet = ~0u;
        for (uint32_t f : masks)
            if ((s & f) == s) meet &= f;
        return flat_rank.at(meet);
    };
    return from_oracle(m, "flats", rank);
}

int Matroid::rank_of(uint32_t subset) const {
    auto it = memo_->find(subset);
    if (it != memo_->end()) return it->second;
    int r = rank_(subset);
    memo_->emplace(subset, r);
    return r;
}

int Matroid::rank_of(const std::vector<int>& subset) const { return rank_of(to_mask(subset)); }

int Matroid::rank() const {
    uint32_t ground = m_ == 32 ? ~0u : ((1u << m_) - 1);
    return rank_of(ground);
}

uint32_t Matroid::closure(uint32_t subset) const {
    int r = rank_of(subset);
    uint32_t out = subset;
    for (int e = 0; e < m_; ++e) {
        if (out & (1u << e)) continue;
        if (rank_of(subset | (1u << e)) == r) out |= (1u << e);
    }
    return out;
}

std::vector<int> Matroid::closure(const std::vector<int>& subset) const {
    return to_elements(closure(to_mask(subset)));
}

bool Matroid::is_loopfree() const {
    for (int e = 0; e < m_; ++e)
        if (rank_of(1u << e) != 1) return false;
    return true;
}

const std::vector<std::vector<uint32_t>>& Matroid::flats_by_rank() const {
    if (flats_) return *flats_;
    require(m_ <= max_ground_size(), "GroundSetTooLarge",
            "flat enumeration bounded at " + std::to_string(max_ground_size()) +
                " ground elements (override with TROPMOD_MAX_GROUND)");
    auto flats = std::make_shared<std::vector<std::vector<uint32_t>>>();
    int r = rank();
    flats->resize(r + 1);
    (*flats)[0] = {closure(0u)};
    for (int k = 0; k < r; ++k) {
        std::set<uint32_t> next;
        for (uint32_t f : (*flats)[k]) {
            for (int e = 0; e < m_; ++e) {
                if (f & (1u << e)) continue;
                next.insert(closure(f | (1u << e)));
            }
        }
        for (uint32_t f : next)
            if (rank_of(f) == k + 1) (*flats)[k + 1].push_back(f);
        std::sort((*flats)[k + 1].begin(), (*flats)[k + 1].end());
    }
    flats_ = flats;
    return *flats_;
}

std::vector<uint32_t> Matroid::proper_flats() const {
    std::vector<uint32_t> out;
    const auto& by_rank = flats_by_rank();
    uint32_t ground = m_ == 32 ? ~0u : ((1u << m_) - 1);
    for (const auto& level : by_rank)
        for (uint32_t f : level)
            if (f != 0 && f != ground) out.push_back(f);
    return out;
}

namespace {
// renumber a mask on {1..m}\{e} to {1..m-1}
uint32_t lift_mask(uint32_t s, int e_bit) {
    uint32_t low = s & ((1u << e_bit) - 1);
    uint32_t high = (s >> e_bit) << (e_bit + 1);
    return low | high;
}
} // namespace

Matroid Matroid::deletion(int e) const {
    require(e >= 1 && e <= m_, "ElementOutOfRange", "deleted element outside the ground set");
    int bit = e - 1;
    auto base = *this;
    return from_oracle(m_ - 1, name_ + "\\" + std::to_string(e),
                       [base, bit](uint32_t s) { return base.rank_of(lift_mask(s, bit)); });
}

Matroid Matroid::contraction(int e) const {
    require(e >= 1 && e <= m_, "ElementOutOfRange", "contracted element outside the ground set");
    require(rank_of(1u << (e - 1)) == 1, "ElementOutOfRange", "cannot contract a loop");
    int bit = e - 1;
    auto base = *this;
    return from_oracle(m_ - 1, name_ + "/" + std::to_string(e), [base, bit](uint32_t s) {
        return base.rank_of(lift_mask(s, bit) | (1u << bit)) - 1;
    });
}

Matroid Matroid::truncation() const {
    require(rank() >= 2, "RankTooSmall", "truncation needs rank at least 2");
    int cap = rank() - 1;
    auto base = *this;
    return from_oracle(m_, "T(" + name_ + ")",
                       [base, cap](uint32_t s) { return std::min(base.rank_of(s), cap); });
}

std::vector<uint32_t> Matroid::circuits_through(int e) const {
    require(e >= 1 && e <= m_, "ElementOutOfRange", "element outside the ground set");
    uint32_t ebit = 1u << (e - 1);
    std::vector<uint32_t> out;
    uint32_t ground = m_ == 32 ? ~0u : ((1u << m_) - 1);
    for (uint32_t s = 1; s <= ground; ++s) {
        if (!(s & ebit)) continue;
        int p = popcount(s);
        if (rank_of(s) != p - 1) continue;
        bool minimal = true;
        for (int x = 0; x < m_ && minimal; ++x)
            if (s & (1u << x))
                if (rank_of(s & ~(1u << x)) != p - 1) minimal = false;
        if (minimal) out.push_back(s);
    }
    return out;
}

bool Matroid::check_rank_axioms() const {
    uint32_t ground = m_ == 32 ? ~0u : ((1u << m_) - 1);
    if (rank_of(0u) != 0) return false;
    for (uint32_t a = 0; a <= ground; ++a) {
        int ra = rank_of(a);
        if (ra < 0 || ra > popcount(a)) return false;
        for (int e = 0; e < m_; ++e) {
            if (a & (1u << e)) continue;
            int r2 = rank_of(a | (1u << e));
            if (r2 < ra || r2 > ra + 1) return false;
        }
    }
    for (uint32_t a = 0; a <= ground; ++a)
        for (uint32_t b = a; b <= ground; ++b)
            if (rank_of(a | b) + rank_of(a & b) > rank_of(a) + rank_of(b)) return false;
    return true;
}

QVec flat_vector(int m, uint32_t flat) {
    QVec v = zero_qvec(m);
    for (int i = 0; i < m; ++i)
        if (flat & (1u << i)) v[i] = -1;
    return v;
}

WeightedComplex bergman_fan(const Matroid& m) {
    require(m.is_loopfree(), "LoopyMatroid", "Bergman fans are defined for loopfree matroids");
    int n = m.ground_size();
    const auto& by_rank = m.flats_by_rank();
    int r = m.rank();
    // enumerate complete flags of proper flats (one flat per rank 1..r-1)
    std::vector<std::vector<uint32_t>> flags;
    std::vector<uint32_t> current;
    std::function<void(int)> dfs = [&](int level) {
        if (level == r) {
            flags.push_back(current);
            return;
        }
        for (uint32_t f : by_rank[level]) {
            if (!current.empty() && (current.back() & f) != current.back()) continue;
            current.push_back(f);
            dfs(level + 1);
            current.pop_back();
        }
    };
    dfs(1);
    QVec ones(n, Rat(1));
    std::vector<std::pair<Polyhedron, Int>> cones;
    for (const auto& flag : flags) {
        std::vector<QVec> rays;
        for (uint32_t f : flag) rays.push_back(flat_vector(n, f));
        cones.emplace_back(
            Polyhedron::from_generators(n, {zero_qvec(n)}, rays, {ones}), Int(1));
    }
    if (cones.empty()) // rank 1: only the lineality line
        cones.emplace_back(Polyhedron::from_generators(n, {zero_qvec(n)}, {}, {ones}), Int(1));
    return WeightedComplex::from_maximal_cells(n, cones);
}

RationalFunction deletion_link_function(const Matroid& m, int e) {
    std::vector<uint32_t> circuits = m.circuits_through(e);
    require(!circuits.empty(), "InvalidArgument",
            "element is a coloop; the deletion carries no modification function");
    int bit = e - 1;
    std::vector<RationalFunction> maxima;
    for (uint32_t c : circuits) {
        std::vector<AffineTerm> terms;
        for (int i = 0; i < m.ground_size(); ++i) {
            if (i == bit || !(c & (1u << i))) continue;
            int j = i < bit ? i : i - 1; // coordinate index in the deletion
            QVec a = zero_qvec(m.ground_size() - 1);
            a[j] = 1;
            terms.push_back({a, Rat(0)});
        }
        maxima.push_back(RationalFunction::max_terms(std::move(terms)));
    }
    return RationalFunction::min_of(std::move(maxima));
}

} // namespace tropmod
