#include "tropmod/moduli.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "tropmod/error.hpp"

namespace tropmod {

Labels Labels::range(int lo, int hi) {
    Labels l;
    for (int i = lo; i <= hi; ++i) l.labels.push_back(i);
    return l;
}

int Labels::position(int label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    require(it != labels.end() && *it == label, "InvalidArgument", "unknown leaf label");
    return static_cast<int>(it - labels.begin());
}

int Labels::pair_index(int a, int b) const {
    int i = position(a), j = position(b);
    if (i > j) std::swap(i, j);
    require(i != j, "InvalidArgument", "pair of equal labels");
    int m = n();
    // pairs (0,1),(0,2),...,(0,m-1),(1,2),...
    return i * m - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> Labels::pair_at(int idx) const {
    int m = n();
    for (int i = 0; i < m; ++i) {
        int row = m - i - 1;
        if (idx < row) return {labels[i], labels[i + 1 + idx]};
        idx -= row;
    }
    fail("InvalidArgument", "pair index out of range");
}

Split canonical_split(const Labels& l, Split side) {
    std::sort(side.begin(), side.end());
    side.erase(std::unique(side.begin(), side.end()), side.end());
    if (std::binary_search(side.begin(), side.end(), l.labels.front())) {
        Split other;
        for (int x : l.labels)
            if (!std::binary_search(side.begin(), side.end(), x)) other.push_back(x);
        side = std::move(other);
    }
    require(static_cast<int>(side.size()) >= 2 && static_cast<int>(side.size()) <= l.n() - 2,
            "InvalidArgument", "split sides must have at least two labels");
    return side;
}

bool splits_compatible(const Split& a, const Split& b, const Labels& l) {
    // canonical sides avoid the smallest label, so the complements intersect;
    // compatible iff nested or disjoint
    std::vector<int> meet;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(meet));
    if (meet.empty()) return true;
    if (meet.size() == a.size() || meet.size() == b.size()) return true; // nested
    (void)l;
    return false;
}

std::vector<Split> all_splits(const Labels& l) {
    int m = l.n();
    std::vector<Split> out;
    // subsets of labels[1..] (avoiding the smallest label) of size 2..m-2
    std::vector<int> rest(l.labels.begin() + 1, l.labels.end());
    int k = static_cast<int>(rest.size());
    for (uint32_t mask = 1; mask < (1u << k); ++mask) {
        int pc = __builtin_popcount(mask);
        if (pc < 2 || pc > m - 2) continue;
        Split s;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) s.push_back(rest[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

QVec split_ray(const Labels& l, const Split& s) {
    QVec v = zero_qvec(l.npairs());
    for (size_t i = 0; i < l.labels.size(); ++i) {
        for (size_t j = i + 1; j < l.labels.size(); ++j) {
            bool in_i = std::binary_search(s.begin(), s.end(), l.labels[i]);
            bool in_j = std::binary_search(s.begin(), s.end(), l.labels[j]);
            if (in_i != in_j) v[l.pair_index(l.labels[i], l.labels[j])] = 1;
        }
    }
    return v;
}

QVec phi_generator(const Labels& l, int label) {
    QVec v = zero_qvec(l.npairs());
    for (int x : l.labels)
        if (x != label) v[l.pair_index(label, x)] = 1;
    return v;
}

QMat phi_image_basis(const Labels& l) {
    QMat out;
    for (int x : l.labels) out.push_back(phi_generator(l, x));
    return out;
}

ZMat moduli_ambient_lattice(const Labels& l) {
    ZMat rows;
    for (size_t i = 0; i < l.labels.size(); ++i)
        for (size_t j = i + 1; j < l.labels.size(); ++j) {
            Split pair{l.labels[i], l.labels[j]};
            rows.push_back(to_zvec(split_ray(l, pair)));
        }
    for (int k : l.labels) rows.push_back(to_zvec(phi_generator(l, k)));
    ZMat out = hnf(rows);
    require(static_cast<int>(out.size()) == l.npairs(), "InternalError",
            "moduli lattice is not full rank");
    return out;
}

WeightedComplex moduli_fan(const Labels& l) {
    int n = l.n();
    require(n >= 3, "InvalidArgument", "moduli fans need at least three marks");
    std::vector<Split> splits = all_splits(l);
    int want = n - 3;
    QMat lin = phi_image_basis(l);
    std::vector<std::pair<Polyhedron, Int>> cones;
    std::vector<int> current;
    std::function<void(int)> dfs = [&](int start) {
        if (static_cast<int>(current.size()) == want) {
            std::vector<QVec> rays;
            for (int idx : current) rays.push_back(split_ray(l, splits[idx]));
            cones.emplace_back(
                Polyhedron::from_generators(l.npairs(), {zero_qvec(l.npairs())}, rays, lin),
                Int(1));
            return;
        }
        for (int i = start; i < static_cast<int>(splits.size()); ++i) {
            bool ok = true;
            for (int idx : current)
                if (!splits_compatible(splits[idx], splits[i], l)) { ok = false; break; }
            if (!ok) continue;
            current.push_back(i);
            dfs(i + 1);
            current.pop_back();
        }
    };
    dfs(0);
    ZMat modulus;
    for (const auto& row : phi_image_basis(l)) modulus.push_back(to_zvec(row));
    return WeightedComplex::from_maximal_cells(l.npairs(), cones)
        .with_ambient_lattice(moduli_ambient_lattice(l))
        .with_modulus(std::move(modulus));
}

WeightedComplex moduli_fan(int n) { return moduli_fan(Labels::range(1, n)); }

ConeCoordinates cone_coordinates(const Labels& l, const QVec& p) {
    ConeCoordinates out;
    out.total = 0;
    auto d = [&](int a, int b) { return p[l.pair_index(a, b)]; };
    for (const Split& s : all_splits(l)) {
        Split comp;
        for (int x : l.labels)
            if (!std::binary_search(s.begin(), s.end(), x)) comp.push_back(x);
        bool first = true;
        Rat alpha;
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j)
                for (size_t u = 0; u < comp.size(); ++u)
                    for (size_t v = u + 1; v < comp.size(); ++v) {
                        int a = s[i], a2 = s[j], b = comp[u], b2 = comp[v];
                        Rat s1 = d(a, b) + d(a2, b2);
                        Rat s2 = d(a, b2) + d(a2, b);
                        Rat s0 = d(a, a2) + d(b, b2);
                        Rat m = std::max(std::max(s1, s2), s0);
                        Rat beta = (m - s0) / 2;
                        if (first || beta < alpha) {
                            alpha = beta;
                            first = false;
                        }
                    }
        if (alpha > 0) {
            out.weights.emplace_back(s, alpha);
            out.total += alpha;
        }
    }
    // verify: the residual must lie in the image of phi and the splits must be
    // pairwise compatible
    QVec residual = p;
    for (const auto& [s, w] : out.weights) residual = residual - w * split_ray(l, s);
    out.in_moduli = in_span(phi_image_basis(l), residual);
    for (size_t i = 0; i < out.weights.size() && out.in_moduli; ++i)
        for (size_t j = i + 1; j < out.weights.size(); ++j)
            if (!splits_compatible(out.weights[i].first, out.weights[j].first, l)) {
                out.in_moduli = false;
                break;
            }
    return out;
}

// ---- metric trees ---------------------------------------------------------

MarkedTree MarkedTree::star(const Labels& l) {
    MarkedTree t;
    t.nv = 1;
    for (int x : l.labels) t.leaf_at[x] = 0;
    return t;
}

int MarkedTree::valence(int v) const {
    int count = 0;
    for (const auto& e : edges) count += (e.a == v) + (e.b == v);
    for (const auto& [label, vert] : leaf_at) count += (vert == v);
    return count;
}

void MarkedTree::check_valid(const Labels& l) const {
    require(static_cast<int>(leaf_at.size()) == l.n(), "InvalidTree", "wrong number of leaves");
    for (int x : l.labels)
        require(leaf_at.count(x) == 1, "InvalidTree", "missing leaf label");
    for (const auto& e : edges) require(e.length > 0, "InvalidTree", "non-positive edge length");
    require(static_cast<int>(edges.size()) == nv - 1, "InvalidTree", "not a tree");
    for (int v = 0; v < nv; ++v)
        require(valence(v) >= 3, "InvalidTree", "vertex of valence < 3");
}

MarkedTree MarkedTree::from_splits(const Labels& l,
                                   const std::vector<std::pair<Split, Rat>>& splits) {
    // canonical sides avoid the smallest label, so they form a laminar family
    std::vector<std::pair<Split, Rat>> fam;
    for (const auto& [s, w] : splits) {
        require(w > 0, "InvalidTree", "split weights must be positive");
        fam.emplace_back(canonical_split(l, s), w);
    }
    std::sort(fam.begin(), fam.end(), [](const auto& x, const auto& y) {
        return x.first.size() > y.first.size(); // big to small
    });
    MarkedTree t;
    t.nv = 1; // root
    // vertex of each laminar set; parent = smallest strictly containing set
    std::vector<int> vertex_of(fam.size());
    for (size_t i = 0; i < fam.size(); ++i) {
        int parent = 0; // root
        for (size_t j = 0; j < i; ++j) {
            if (std::includes(fam[j].first.begin(), fam[j].first.end(), fam[i].first.begin(),
                              fam[i].first.end())) {
                require(fam[j].first != fam[i].first, "InvalidTree", "duplicate split");
                parent = vertex_of[j];
            }
        }
        vertex_of[i] = t.nv++;
        t.edges.push_back({parent, vertex_of[i], fam[i].second});
    }
    for (int x : l.labels) {
        int v = 0;
        size_t best = fam.size();
        for (size_t i = 0; i < fam.size(); ++i) {
            if (std::binary_search(fam[i].first.begin(), fam[i].first.end(), x)) {
                if (best == fam.size() || fam[i].first.size() < fam[best].first.size()) best = i;
            }
        }
        if (best < fam.size()) v = vertex_of[best];
        t.leaf_at[x] = v;
    }
    t.check_valid(l);
    return t;
}

std::vector<std::pair<Split, Rat>> MarkedTree::split_lengths(const Labels& l) const {
    std::vector<std::pair<Split, Rat>> out;
    for (const auto& e : edges) {
        // labels on the b-side of the edge
        std::vector<std::vector<int>> adj(nv);
        std::vector<bool> visited(nv, false);
        std::queue<int> q;
        q.push(e.b);
        visited[e.a] = true; // block crossing back
        visited[e.b] = true;
        std::set<int> side_vertices{e.b};
        for (const auto& e2 : edges) {
            adj[e2.a].push_back(e2.b);
            adj[e2.b].push_back(e2.a);
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[v])
                if (!visited[u]) {
                    visited[u] = true;
                    side_vertices.insert(u);
                    q.push(u);
                }
        }
        Split side;
        for (const auto& [label, vert] : leaf_at)
            if (side_vertices.count(vert)) side.push_back(label);
        out.emplace_back(canonical_split(l, side), e.length);
    }
    return out;
}

MarkedTree MarkedTree::forget(int label) const {
    MarkedTree t = *this;
    auto it = t.leaf_at.find(label);
    require(it != t.leaf_at.end(), "InvalidArgument", "label not in the tree");
    t.leaf_at.erase(it);
    // suppress 2-valent vertices until stable
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < t.nv; ++v) {
            std::vector<int> eids;
            std::vector<int> leaves;
            for (int i = 0; i < static_cast<int>(t.edges.size()); ++i)
                if (t.edges[i].a == v || t.edges[i].b == v) eids.push_back(i);
            for (const auto& [lab, vert] : t.leaf_at)
                if (vert == v) leaves.push_back(lab);
            int val = static_cast<int>(eids.size() + leaves.size());
            if (val >= 3 || (eids.empty() && leaves.empty())) continue;
            if (eids.size() == 2 && leaves.empty()) {
                // merge both edges
                auto& e1 = t.edges[eids[0]];
                auto& e2 = t.edges[eids[1]];
                int u1 = e1.a == v ? e1.b : e1.a;
                int u2 = e2.a == v ? e2.b : e2.a;
                Rat len = e1.length + e2.length;
                t.edges[eids[0]] = {u1, u2, len};
                t.edges.erase(t.edges.begin() + eids[1]);
                changed = true;
            } else if (eids.size() == 1 && leaves.size() == 1) {
                // unbounded leaf edge absorbs the bounded edge
                auto& e1 = t.edges[eids[0]];
                int u = e1.a == v ? e1.b : e1.a;
                t.leaf_at[leaves[0]] = u;
                t.edges.erase(t.edges.begin() + eids[0]);
                changed = true;
            } else if (eids.empty() && leaves.size() <= 2 && t.nv == 1) {
                break; // degenerate star with two leaves; leave as-is
            }
            if (changed) break;
        }
    }
    // renumber vertices to the used ones
    std::set<int> used;
    for (const auto& e : t.edges) {
        used.insert(e.a);
        used.insert(e.b);
    }
    for (const auto& [lab, v] : t.leaf_at) used.insert(v);
    std::map<int, int> renum;
    for (int v : used) renum.emplace(v, static_cast<int>(renum.size()));
    for (auto& e : t.edges) {
        e.a = renum[e.a];
        e.b = renum[e.b];
    }
    for (auto& [lab, v] : t.leaf_at) v = renum[v];
    t.nv = static_cast<int>(renum.size());
    return t;
}

QVec tree_to_point(const Labels& l, const MarkedTree& t) {
    // distances over bounded edges between attachment vertices
    std::vector<std::vector<std::pair<int, Rat>>> adj(t.nv);
    for (const auto& e : t.edges) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }
    std::map<int, std::vector<Rat>> dist_from;
    for (const auto& [label, v] : t.leaf_at) {
        if (dist_from.count(v)) continue;
        std::vector<Rat> dist(t.nv, Rat(-1));
        dist[v] = 0;
        std::queue<int> q;
        q.push(v);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (const auto& [y, len] : adj[x])
                if (dist[y] < 0) {
                    dist[y] = dist[x] + len;
                    q.push(y);
                }
        }
        dist_from.emplace(v, std::move(dist));
    }
    QVec out = zero_qvec(l.npairs());
    for (size_t i = 0; i < l.labels.size(); ++i)
        for (size_t j = i + 1; j < l.labels.size(); ++j) {
            int a = l.labels[i], b = l.labels[j];
            out[l.pair_index(a, b)] = dist_from.at(t.leaf_at.at(a))[t.leaf_at.at(b)];
        }
    return out;
}

MarkedTree point_to_tree(const Labels& l, const QVec& p) {
    ConeCoordinates cc = cone_coordinates(l, p);
    require(cc.in_moduli, "PointNotInModuli", "point does not represent a marked tree");
    if (cc.weights.empty()) return MarkedTree::star(l);
    return MarkedTree::from_splits(l, cc.weights);
}

// ---- newick-ish format -----------------------------------------------------

namespace {

struct TreeParser {
    const std::string& s;
    size_t pos = 0;

    explicit TreeParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        require(pos < s.size(), "ParseError", "unexpected end of tree literal");
        return s[pos];
    }

    void expect(char c) {
        require(peek() == c, "ParseError", std::string("expected '") + c + "' in tree literal");
        ++pos;
    }

    Rat parse_length() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' ||
                                  s[pos] == '-' || s[pos] == '+'))
            ++pos;
        require(pos > start, "ParseError", "missing edge length");
        return parse_rat(s.substr(start, pos - start));
    }

    int parse_label() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        require(pos > start, "ParseError", "missing leaf label");
        return std::stoi(s.substr(start, pos - start));
    }

    // returns the vertex id of the subtree root; nodes may add vertices
    int parse_node(MarkedTree& t) {
        if (peek() == '(') {
            ++pos;
            int v = t.nv++;
            while (true) {
                int child = parse_node(t);
                expect(':');
                Rat len = parse_length();
                if (child >= 0) { // internal child: a bounded edge
                    if (len > 0)
                        t.edges.push_back({v, child, len});
                    else
                        merge_into(t, child, v);
                } else { // leaf child: the length is ignored (leaf edges are unbounded)
                    t.leaf_at[-child - 1] = v;
                }
                if (peek() == ',') {
                    ++pos;
                    continue;
                }
                expect(')');
                break;
            }
            return v;
        }
        int label = parse_label();
        return -label - 1;
    }

    static void merge_into(MarkedTree& t, int from, int into) {
        for (auto& e : t.edges) {
            if (e.a == from) e.a = into;
            if (e.b == from) e.b = into;
        }
        for (auto& [lab, v] : t.leaf_at)
            if (v == from) v = into;
    }
};

} // namespace

MarkedTree parse_tree(const std::string& text, Labels& labels_out) {
    TreeParser parser(text);
    MarkedTree t;
    int root = parser.parse_node(t);
    if (root < 0) { // single leaf
        t.nv = 1;
        t.leaf_at[-root - 1] = 0;
    }
    parser.skip_ws();
    if (parser.pos < text.size() && text[parser.pos] == ';') ++parser.pos;
    // compact vertex ids
    std::set<int> used;
    for (const auto& e : t.edges) {
        used.insert(e.a);
        used.insert(e.b);
    }
    for (const auto& [lab, v] : t.leaf_at) used.insert(v);
    std::map<int, int> renum;
    for (int v : used) renum.emplace(v, static_cast<int>(renum.size()));
    for (auto& e : t.edges) {
        e.a = renum[e.a];
        e.b = renum[e.b];
    }
    for (auto& [lab, v] : t.leaf_at) v = renum[v];
    t.nv = static_cast<int>(renum.size());
    labels_out.labels.clear();
    for (const auto& [lab, v] : t.leaf_at) labels_out.labels.push_back(lab);
    std::sort(labels_out.labels.begin(), labels_out.labels.end());
    t.check_valid(labels_out);
    return t;
}

std::string format_tree(const Labels& l, const MarkedTree& t) {
    // root at the vertex carrying the smallest label
    int root = t.leaf_at.at(l.labels.front());
    std::vector<std::vector<std::pair<int, Rat>>> adj(t.nv);
    for (const auto& e : t.edges) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }
    std::map<int, std::vector<int>> leaves_at;
    for (const auto& [lab, v] : t.leaf_at) leaves_at[v].push_back(lab);
    std::function<std::string(int, int)> emit = [&](int v, int from) -> std::string {
        std::vector<std::string> parts;
        if (leaves_at.count(v))
            for (int lab : leaves_at[v]) parts.push_back(std::to_string(lab) + ":0");
        for (const auto& [u, len] : adj[v]) {
            if (u == from) continue;
            parts.push_back(emit(u, v) + ":" + format_rat(len));
        }
        std::sort(parts.begin(), parts.end());
        std::string out = "(";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ",";
            out += parts[i];
        }
        return out + ")";
    };
    return emit(root, -1) + ";";
}

// ---- maps -----------------------------------------------------------------

QMat forgetful_matrix(int n) {
    Labels src = Labels::range(0, n);
    Labels dst = Labels::range(1, n);
    QMat m(dst.npairs(), QVec(src.npairs(), Rat(0)));
    for (int idx = 0; idx < dst.npairs(); ++idx) {
        auto [a, b] = dst.pair_at(idx);
        m[idx][src.pair_index(a, b)] = 1;
    }
    return m;
}

PLMap forgetful_map(int n) {
    WeightedComplex source = moduli_fan(Labels::range(0, n));
    PLMap f = PLMap::global(source, forgetful_matrix(n), zero_qvec(Labels::range(1, n).npairs()));
    f.set_target(moduli_fan(n));
    return f;
}

WeightedComplex forgetful_fibre(int n, const QVec& p) {
    Labels base = Labels::range(1, n);
    Labels total = Labels::range(0, n);
    MarkedTree t = point_to_tree(base, p);
    QMat lin = phi_image_basis(total);
    // position of each vertex: sum of far-side split rays weighted by length
    auto splits = t.split_lengths(base);
    // per edge of the tree, the side away from a vertex
    std::vector<QVec> pos(t.nv, zero_qvec(total.npairs()));
    // distances: for each edge, labels on each side (within base labels)
    std::vector<std::vector<std::pair<int, Rat>>> adj(t.nv);
    for (const auto& e : t.edges) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }
    for (int v = 0; v < t.nv; ++v) {
        for (const auto& e : t.edges) {
            // find which endpoint is on v's side
            // BFS from e.a avoiding the edge to find v
            std::vector<bool> visited(t.nv, false);
            std::queue<int> q;
            q.push(e.a);
            visited[e.a] = true;
            visited[e.b] = true;
            std::set<int> a_side{e.a};
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                for (const auto& [y, len] : adj[x])
                    if (!visited[y]) {
                        visited[y] = true;
                        a_side.insert(y);
                        q.push(y);
                    }
            }
            // far side from v: collect labels
            bool v_on_a = a_side.count(v) > 0;
            Split far;
            for (const auto& [lab, vert] : t.leaf_at) {
                bool on_a = a_side.count(vert) > 0;
                if (on_a != v_on_a) far.push_back(lab);
            }
            // far side avoids the attachment of 0 (0 is on v's side)
            std::sort(far.begin(), far.end());
            pos[v] = pos[v] + e.length * split_ray(total, far);
        }
    }
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (const auto& e : t.edges)
        cells.emplace_back(
            Polyhedron::from_generators(total.npairs(), {pos[e.a], pos[e.b]}, {}, lin), Int(1));
    for (const auto& [lab, v] : t.leaf_at) {
        QVec dir = split_ray(total, canonical_split(total, Split{0, lab}));
        cells.emplace_back(
            Polyhedron::from_generators(total.npairs(), {pos[v]}, {dir}, lin), Int(1));
    }
    ZMat modulus;
    for (const auto& row : phi_image_basis(total)) modulus.push_back(to_zvec(row));
    return WeightedComplex::from_maximal_cells(total.npairs(), cells)
        .with_ambient_lattice(moduli_ambient_lattice(total))
        .with_modulus(std::move(modulus));
}

QMat kn_iso_matrix(const Labels& marks, int extra_mark) {
    Labels vertices;
    for (int x : marks.labels)
        if (x != extra_mark) vertices.labels.push_back(x);
    QMat m(marks.npairs(), QVec(vertices.npairs(), Rat(0)));
    for (int idx = 0; idx < marks.npairs(); ++idx) {
        auto [a, b] = marks.pair_at(idx);
        if (a == extra_mark || b == extra_mark) continue;
        m[idx][vertices.pair_index(a, b)] = 2;
    }
    return m;
}

QMat kn_chart_matrix(const Labels& marks, int extra_mark) {
    Labels vertices;
    for (int x : marks.labels)
        if (x != extra_mark) vertices.labels.push_back(x);
    QMat m(vertices.npairs(), QVec(marks.npairs(), Rat(0)));
    for (int idx = 0; idx < vertices.npairs(); ++idx) {
        auto [a, b] = vertices.pair_at(idx);
        m[idx][marks.pair_index(a, b)] = rat(1, 2);
        m[idx][marks.pair_index(a, extra_mark)] = rat(-1, 2);
        m[idx][marks.pair_index(b, extra_mark)] = rat(-1, 2);
    }
    return m;
}

QMat kn_iso_matrix(int n) { return kn_iso_matrix(Labels::range(1, n), n); }

QMat kn_chart_matrix(int n) { return kn_chart_matrix(Labels::range(1, n), n); }

PLMap kn_isomorphism(int n) {
    require(n >= 4, "InvalidArgument", "the matroid chart needs n >= 4");
    WeightedComplex source = bergman_fan(Matroid::graphic_complete(n - 1));
    PLMap f = PLMap::global(source, kn_iso_matrix(n), zero_qvec(Labels::range(1, n).npairs()));
    f.set_target(moduli_fan(n));
    return f;
}

std::vector<RationalFunction> moduli_cutting_functions(const Labels& marks, const QVec& p) {
    QMat chart = kn_chart_matrix(marks, marks.labels.back());
    QVec c = mat_vec(chart, p);
    RationalFunction phi = RationalFunction::shifted_max(c).pullback(chart, zero_qvec(marks.npairs()));
    return std::vector<RationalFunction>(static_cast<size_t>(marks.n() - 3), phi);
}

std::vector<RationalFunction> moduli_cutting_functions(int n, const QVec& p) {
    return moduli_cutting_functions(Labels::range(1, n), p);
}

// ---- split bases and markings ----------------------------------------------

Split default_i0(const Labels& l, int k) {
    for (size_t i = 0; i < l.labels.size(); ++i) {
        if (l.labels[i] == k) continue;
        for (size_t j = i + 1; j < l.labels.size(); ++j) {
            if (l.labels[j] == k) continue;
            return Split{l.labels[i], l.labels[j]};
        }
    }
    fail("InvalidArgument", "no valid pair avoiding the label");
}

SplitBasis split_basis(const Labels& l, int k, const Split& i0) {
    require(i0.size() == 2 && i0[0] != k && i0[1] != k, "InvalidBasisChoice",
            "I0 must be a pair avoiding k");
    SplitBasis out;
    out.k = k;
    out.i0 = i0;
    for (size_t i = 0; i < l.labels.size(); ++i) {
        if (l.labels[i] == k) continue;
        for (size_t j = i + 1; j < l.labels.size(); ++j) {
            if (l.labels[j] == k) continue;
            Split s{l.labels[i], l.labels[j]};
            out.v_k.push_back(s);
            if (s != i0) out.w.push_back(s);
        }
    }
    return out;
}

std::vector<std::pair<Split, int>> expand_in_basis(const Labels& l, const SplitBasis& basis,
                                                   Split i) {
    // use the side of the split avoiding k
    std::sort(i.begin(), i.end());
    if (std::binary_search(i.begin(), i.end(), basis.k)) {
        Split other;
        for (int x : l.labels)
            if (!std::binary_search(i.begin(), i.end(), x)) other.push_back(x);
        i = std::move(other);
    }
    bool i0_inside = std::includes(i.begin(), i.end(), basis.i0.begin(), basis.i0.end());
    std::vector<std::pair<Split, int>> out;
    for (const Split& j : basis.w) {
        bool inside = std::includes(i.begin(), i.end(), j.begin(), j.end());
        if (!i0_inside && inside) out.emplace_back(j, 1);
        if (i0_inside && !inside) out.emplace_back(j, -1);
    }
    return out;
}

CellAffine marking_section(int n, int i, const Rat& alpha) {
    require(alpha > 0, "InvalidArgument", "marking distance must be positive");
    Labels base = Labels::range(1, n);
    Labels total = Labels::range(0, n);
    SplitBasis basis = split_basis(base, i, default_i0(base, i));
    QMat src_rows, dst_rows;
    for (const Split& j : basis.w) {
        src_rows.push_back(split_ray(base, j));
        dst_rows.push_back(split_ray(total, canonical_split(total, j)));
    }
    for (int k : base.labels) {
        src_rows.push_back(phi_generator(base, k));
        dst_rows.push_back(phi_generator(total, k));
    }
    require(static_cast<int>(src_rows.size()) == base.npairs(), "InternalError",
            "marking basis has the wrong size");
    QMat m(total.npairs(), QVec(base.npairs(), Rat(0)));
    for (int col = 0; col < base.npairs(); ++col) {
        QVec e = zero_qvec(base.npairs());
        e[col] = 1;
        auto coords = coordinates_in_basis(src_rows, e);
        require(coords.has_value(), "InternalError", "marking basis is not a basis");
        for (size_t r = 0; r < src_rows.size(); ++r)
            for (int row = 0; row < total.npairs(); ++row) m[row][col] += (*coords)[r] * dst_rows[r][row];
    }
    QVec t = alpha * split_ray(total, canonical_split(total, Split{0, i}));
    return CellAffine{std::move(m), std::move(t)};
}

bool in_u_alpha(const Labels& l, const QVec& p, const Rat& alpha) {
    ConeCoordinates cc = cone_coordinates(l, p);
    return cc.in_moduli && cc.total < alpha;
}

} // namespace tropmod
