#include "tropmod/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <map>
#include <sstream>

#include "tropmod/error.hpp"

namespace tropmod {

using nlohmann::json;

namespace {

json rat_to_json(const Rat& r) { return format_rat(r); }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    fail("ParseError", "expected a rational literal");
}

json qvec_to_json(const QVec& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(rat_to_json(x));
    return out;
}

QVec qvec_from_json(const json& j) {
    QVec out;
    for (const auto& x : j) out.push_back(rat_from_json(x));
    return out;
}

json zvec_to_json(const ZVec& v) {
    json out = json::array();
    for (const auto& x : v) {
        require(x.fits_slong_p(), "SerializationError", "integer entry too large for JSON");
        out.push_back(static_cast<int64_t>(x.get_si()));
    }
    return out;
}

} // namespace

json complex_to_json(const WeightedComplex& complex) {
    json out;
    out["ambient_dim"] = complex.ambient();
    json lin = json::array();
    for (const auto& row : complex.lineality()) lin.push_back(qvec_to_json(to_qvec(row)));
    out["lineality"] = lin;

    std::vector<QVec> vertices;
    std::vector<ZVec> rays;
    std::map<std::string, int> vertex_index, ray_index;
    auto vertex_id = [&](const QVec& p) {
        std::ostringstream key;
        for (const auto& x : p) key << x.get_str() << ",";
        auto it = vertex_index.find(key.str());
        if (it != vertex_index.end()) return it->second;
        int id = static_cast<int>(vertices.size());
        vertices.push_back(p);
        vertex_index.emplace(key.str(), id);
        return id;
    };
    auto ray_id = [&](const ZVec& r) {
        std::ostringstream key;
        for (const auto& x : r) key << x.get_str() << ",";
        auto it = ray_index.find(key.str());
        if (it != ray_index.end()) return it->second;
        int id = static_cast<int>(rays.size());
        rays.push_back(r);
        ray_index.emplace(key.str(), id);
        return id;
    };

    json cells = json::array();
    for (int i = 0; i < complex.ncells(); ++i) {
        const Polyhedron& cell = complex.cell(i);
        json c;
        c["dim"] = cell.dim();
        json vids = json::array();
        for (const auto& p : cell.points()) vids.push_back(vertex_id(p));
        c["vertex_ids"] = vids;
        json rids = json::array();
        for (const auto& r : cell.rays()) rids.push_back(ray_id(r));
        // cell lineality beyond the global one becomes opposite ray pairs
        for (const auto& l : cell.lin()) {
            QMat global;
            for (const auto& row : complex.lineality()) global.push_back(to_qvec(row));
            if (in_span(global, to_qvec(l))) continue;
            rids.push_back(ray_id(l));
            ZVec neg = l;
            for (auto& x : neg) x = -x;
            rids.push_back(ray_id(neg));
        }
        c["ray_ids"] = rids;
        if (complex.weight(i) != 0) {
            require(complex.weight(i).fits_slong_p(), "SerializationError", "weight too large");
            c["weight"] = static_cast<int64_t>(complex.weight(i).get_si());
        } else {
            c["weight"] = nullptr;
        }
        cells.push_back(std::move(c));
    }
    out["cells"] = cells;

    json vs = json::array();
    for (const auto& p : vertices) vs.push_back(qvec_to_json(p));
    out["vertices"] = vs;
    json rs = json::array();
    for (const auto& r : rays) rs.push_back(zvec_to_json(r));
    out["rays"] = rs;

    json faces = json::array();
    for (const auto& [sub, super] : complex.face_relations())
        faces.push_back(json::array({sub, super}));
    out["faces"] = faces;
    return out;
}

WeightedComplex complex_from_json(const json& j) {
    int ambient = j.at("ambient_dim").get<int>();
    std::vector<QVec> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(qvec_from_json(v));
    std::vector<QVec> rays;
    for (const auto& r : j.at("rays")) rays.push_back(qvec_from_json(r));
    QMat lineality;
    for (const auto& l : j.at("lineality")) lineality.push_back(qvec_from_json(l));
    std::vector<std::pair<Polyhedron, Int>> cells;
    for (const auto& c : j.at("cells")) {
        if (c.at("weight").is_null()) continue; // faces are rebuilt
        std::vector<QVec> pts, rys;
        for (const auto& id : c.at("vertex_ids")) pts.push_back(vertices.at(id.get<size_t>()));
        for (const auto& id : c.at("ray_ids")) rys.push_back(rays.at(id.get<size_t>()));
        Int w(c.at("weight").get<int64_t>());
        cells.emplace_back(Polyhedron::from_generators(ambient, pts, rys, lineality), w);
    }
    return WeightedComplex::from_maximal_cells(ambient, cells);
}

json map_to_json(const PLMap& f) {
    auto cell_affine = [](const CellAffine& ca) {
        json out;
        json m = json::array();
        for (const auto& row : ca.m) m.push_back(qvec_to_json(row));
        out["matrix"] = m;
        out["translation"] = qvec_to_json(ca.t);
        return out;
    };
    auto ids = f.source().maximal_ids();
    bool global = true;
    for (int i : ids) {
        if (f.on_cell(i).m != f.on_cell(ids.front()).m ||
            f.on_cell(i).t != f.on_cell(ids.front()).t)
            global = false;
    }
    if (global) return cell_affine(f.on_cell(ids.front()));
    json out;
    json per = json::array();
    for (int i : ids) per.push_back(cell_affine(f.on_cell(i)));
    out["per_cell"] = per;
    return out;
}

PLMap map_from_json(const json& j, const WeightedComplex& source) {
    auto cell_affine = [](const json& c) {
        CellAffine ca;
        for (const auto& row : c.at("matrix")) ca.m.push_back(qvec_from_json(row));
        ca.t = qvec_from_json(c.at("translation"));
        return ca;
    };
    if (j.contains("per_cell")) {
        auto ids = source.maximal_ids();
        const json& per = j.at("per_cell");
        require(per.size() == ids.size(), "ParseError",
                "per_cell map data does not match the number of maximal cells");
        std::map<std::string, CellAffine> data;
        for (size_t i = 0; i < ids.size(); ++i)
            data.emplace(source.cell(ids[i]).key(), cell_affine(per[i]));
        return PLMap::per_maximal(source, data);
    }
    CellAffine ca = cell_affine(j);
    return PLMap::global(source, ca.m, ca.t);
}

// ---- expression parsing ------------------------------------------------------

namespace {

struct ExprParser {
    const std::string& s;
    size_t pos = 0;
    int ambient;

    ExprParser(const std::string& text, int n) : s(text), ambient(n) {}

    void skip_ws() {
        while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool consume(const std::string& word) {
        skip_ws();
        if (s.compare(pos, word.size(), word) == 0) {
            pos += word.size();
            return true;
        }
        return false;
    }

    RationalFunction parse_expr() {
        skip_ws();
        if (consume("max(") || consume("max (")) return parse_list(true);
        if (consume("min(") || consume("min (")) return parse_list(false);
        return parse_affine();
    }

    RationalFunction parse_list(bool is_max) {
        std::vector<RationalFunction> children;
        while (true) {
            children.push_back(parse_expr());
            skip_ws();
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            require(pos < s.size() && s[pos] == ')', "ParseError", "expected ')' in expression");
            ++pos;
            break;
        }
        return is_max ? RationalFunction::max_of(std::move(children))
                      : RationalFunction::min_of(std::move(children));
    }

    Rat parse_number() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
        require(pos > start, "ParseError", "expected a number");
        return parse_rat(s.substr(start, pos - start));
    }

    RationalFunction parse_affine() {
        QVec a = zero_qvec(ambient);
        Rat c = 0;
        bool first = true;
        while (true) {
            skip_ws();
            int sign = 1;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                sign = s[pos] == '-' ? -1 : 1;
                ++pos;
            } else if (!first) {
                break;
            }
            skip_ws();
            Rat coef = 1;
            bool have_coef = false;
            if (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])))) {
                coef = parse_number();
                have_coef = true;
            }
            skip_ws();
            if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
                ++pos;
                size_t start = pos;
                while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                require(pos > start, "ParseError", "expected a coordinate index after 'x'");
                int idx = std::stoi(s.substr(start, pos - start));
                require(idx >= 1 && idx <= ambient, "ParseError",
                        "coordinate index out of range");
                a[idx - 1] += Rat(sign) * coef;
            } else {
                require(have_coef, "ParseError", "expected a term");
                c += Rat(sign) * coef;
            }
            first = false;
            skip_ws();
            if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-')) break;
        }
        return RationalFunction::affine(std::move(a), std::move(c));
    }
};

} // namespace

RationalFunction parse_max_expression(const std::string& text, int ambient) {
    ExprParser parser(text, ambient);
    RationalFunction f = parser.parse_expr();
    parser.skip_ws();
    require(parser.pos == text.size(), "ParseError", "trailing characters in expression");
    return f;
}

Matroid parse_matroid_spec(const std::string& spec) {
    if (spec.rfind("uniform:", 0) == 0) {
        std::string body = spec.substr(8);
        auto comma = body.find(',');
        require(comma != std::string::npos, "ParseError", "uniform:r,m");
        return Matroid::uniform(std::stoi(body.substr(0, comma)),
                                std::stoi(body.substr(comma + 1)));
    }
    if (spec.rfind("graph:K", 0) == 0) return Matroid::graphic_complete(std::stoi(spec.substr(7)));
    if (spec.rfind("flats:", 0) == 0) {
        json j = json::parse(read_file(spec.substr(6)));
        std::vector<std::vector<int>> flats;
        for (const auto& f : j.at("flats")) flats.push_back(f.get<std::vector<int>>());
        return Matroid::from_flats(j.at("ground_size").get<int>(), flats);
    }
    fail("ParseError", "matroid spec must be uniform:r,m, graph:Kn or flats:<path>");
}

QVec parse_vector(const std::string& text) {
    QVec out;
    std::string t;
    for (char c : text)
        if (c != '[' && c != ']' && !isspace(static_cast<unsigned char>(c))) t += c;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rat(item));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "IOError", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), "IOError", "cannot write " + path);
    out << content;
}

} // namespace tropmod
