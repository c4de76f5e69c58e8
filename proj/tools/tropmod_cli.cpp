// tropmod: exact tropical intersection theory on weighted polyhedral
// complexes - Bergman fans, moduli fans of rational curves, divisors,
// modifications, fibre products and families of curves.

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "tropmod/error.hpp"
#include "tropmod/families.hpp"
#include "tropmod/io.hpp"

using namespace tropmod;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

WeightedComplex load_complex(const std::string& path) {
    return complex_from_json(json::parse(read_file(path)));
}

int report_outcome(const std::string& name, bool ok) {
    std::cout << (ok ? "ok: " : "FAIL: ") << name << "\n";
    return ok ? 0 : 1;
}

PLMap classifying_map(const std::string& spec, int n) {
    WeightedComplex m = moduli_fan(n);
    if (spec == "id") {
        PLMap f = PLMap::global(m, identity_mat(m.ambient()), zero_qvec(m.ambient()));
        f.set_target(m);
        return f;
    }
    if (spec == "ft") return forgetful_map(n);
    if (spec.rfind("perm:", 0) == 0) {
        // permutation of the marks, e.g. perm:2,1,3,4
        std::vector<int> image;
        std::stringstream ss(spec.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) image.push_back(std::stoi(item));
        require(static_cast<int>(image.size()) == n, "ParseError",
                "permutation must list all marks");
        Labels l = Labels::range(1, n);
        QMat mat(l.npairs(), QVec(l.npairs(), Rat(0)));
        for (int idx = 0; idx < l.npairs(); ++idx) {
            auto [a, b] = l.pair_at(idx);
            mat[l.pair_index(image[a - 1], image[b - 1])][idx] = 1;
        }
        PLMap f = PLMap::global(m, mat, zero_qvec(l.npairs()));
        f.set_target(m);
        return f;
    }
    if (spec.rfind("const:", 0) == 0) {
        QVec c = parse_vector(spec.substr(6));
        PLMap f = PLMap::global(m, QMat(m.ambient(), QVec(m.ambient(), Rat(0))), c);
        f.set_target(m);
        return f;
    }
    fail("ParseError", "map spec must be id, ft, perm:..., or const:<vector>");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact tropical cycles: Bergman fans, moduli of rational curves, "
                 "divisors, fibre products and families"};
    app.require_subcommand(1);
    bool json_errors = false;
    uint64_t seed = 1;
    app.add_flag("--json", json_errors, "machine-readable error reports");
    app.add_option("--seed", seed, "seed for randomized checks");

    std::string out_path, matroid_spec, phi_text, point_text, map_spec = "id", tree_text;
    std::string path_a, path_b, path_c, path_d;
    int n = 4, power = 1, element = 0;
    std::string alpha_text = "1";
    bool mod_lineality = false;

    auto* bergman = app.add_subcommand("bergman", "Bergman fan of a matroid");
    bergman->add_option("--matroid", matroid_spec)->required();
    bergman->add_flag("--mod-lineality", mod_lineality, "divide out the lineality line");
    bergman->add_option("--out", out_path);

    auto* moduli = app.add_subcommand("moduli", "moduli fan of n-marked rational curves");
    moduli->add_option("--n", n)->required();
    moduli->add_option("--out", out_path);

    auto* balance = app.add_subcommand("balance", "check the balancing condition");
    balance->add_option("file", path_a)->required();

    auto* divisor_cmd = app.add_subcommand("divisor", "divisor of a max expression");
    divisor_cmd->add_option("--phi", phi_text)->required();
    divisor_cmd->add_option("--power", power);
    divisor_cmd->add_option("file", path_a)->required();
    divisor_cmd->add_option("--out", out_path);

    auto* modify = app.add_subcommand("modify", "modification along a max expression");
    modify->add_option("--phi", phi_text)->required();
    modify->add_option("file", path_a)->required();
    modify->add_option("--out", out_path);

    auto* fibre = app.add_subcommand("fibre", "fibre of the forgetful map over a point of M_n");
    fibre->add_option("--n", n)->required();
    fibre->add_option("--point", point_text)->required();
    fibre->add_option("--out", out_path);

    auto* forget = app.add_subcommand("forget", "the forgetful map of moduli fans");
    forget->add_option("--n", n)->required();
    forget->add_option("--point", point_text);
    forget->add_option("--out", out_path);

    auto* tree2point = app.add_subcommand("tree2point", "distance vector of a metric tree");
    tree2point->add_option("tree", tree_text)->required();

    auto* point2tree = app.add_subcommand("point2tree", "metric tree of a moduli point");
    point2tree->add_option("--n", n)->required();
    point2tree->add_option("--point", point_text)->required();

    auto* fibreproduct =
        app.add_subcommand("fibreproduct", "fibre product M_{n+1} x_{M_n} M_{n+1}");
    fibreproduct->add_option("--n", n)->required();
    fibreproduct->add_option("--out", out_path);

    auto* family = app.add_subcommand("family", "families of marked rational curves");
    family->require_subcommand(1);
    auto* fam_check = family->add_subcommand("check", "prefamily and marking axioms");
    fam_check->add_option("total", path_a)->required();
    fam_check->add_option("base", path_b)->required();
    fam_check->add_option("map", path_c)->required();
    fam_check->add_option("marks", path_d)->required();
    fam_check->add_option("--n", n)->required();
    auto* fam_pullback = family->add_subcommand("pullback", "pull back the universal family");
    fam_pullback->add_option("--f", map_spec, "id | ft | perm:... | const:<vec>");
    fam_pullback->add_option("--n", n)->required();
    fam_pullback->add_option("--alpha", alpha_text);
    fam_pullback->add_option("--out", out_path);
    auto* fam_morphism = family->add_subcommand("morphism", "classifying map of a pulled-back family");
    fam_morphism->add_option("--f", map_spec);
    fam_morphism->add_option("--n", n)->required();
    fam_morphism->add_option("--alpha", alpha_text);
    fam_morphism->add_option("--out", out_path);
    auto* fam_equiv = family->add_subcommand("equiv", "equivalence of two pulled-back families");
    fam_equiv->add_option("--f", map_spec);
    fam_equiv->add_option("--n", n)->required();

    auto* verify = app.add_subcommand("verify", "verify named statements on an instance");
    verify->require_subcommand(1);
    auto* v_lemma_max = verify->add_subcommand("lemma-max", "iterated max cuts to the lineality line");
    v_lemma_max->add_option("--matroid", matroid_spec)->required();
    auto* v_roundtrip = verify->add_subcommand("roundtrip", "fibre morphism of a pull-back family");
    v_roundtrip->add_option("--f", map_spec);
    v_roundtrip->add_option("--n", n)->required();
    auto* v_modification = verify->add_subcommand("modification", "moduli modification");
    v_modification->add_option("--n", n)->required();
    auto* v_balancing = verify->add_subcommand("balancing", "balancing of a fan");
    v_balancing->add_option("--matroid", matroid_spec);
    v_balancing->add_option("--moduli", n);
    auto* v_fibre_lemma = verify->add_subcommand("fibre-lemma", "forgetful fibres have weight 1");
    v_fibre_lemma->add_option("--n", n)->required();
    auto* v_delcon = verify->add_subcommand("deletion-contraction",
                                            "Bergman fan as a modification");
    v_delcon->add_option("--matroid", matroid_spec)->required();
    v_delcon->add_option("--element", element)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bergman) {
            Matroid m = parse_matroid_spec(matroid_spec);
            WeightedComplex fan = bergman_fan(m);
            if (mod_lineality) {
                QMat ones{QVec(m.ground_size(), Rat(1))};
                fan = quotient_by_subspace(fan, ones).first;
            }
            emit(complex_to_json(fan), out_path);
        } else if (*moduli) {
            emit(complex_to_json(moduli_fan(n)), out_path);
        } else if (*balance) {
            WeightedComplex x = load_complex(path_a);
            BalanceReport rep = x.is_balanced();
            std::cout << "balanced: " << (rep.checked - rep.failed) << "/" << rep.checked
                      << " codim-1 cells OK\n";
            return rep.ok ? 0 : 1;
        } else if (*divisor_cmd) {
            WeightedComplex x = load_complex(path_a);
            RationalFunction phi = parse_max_expression(phi_text, x.ambient());
            emit(complex_to_json(power_divisor(phi, power, x)), out_path);
        } else if (*modify) {
            WeightedComplex x = load_complex(path_a);
            RationalFunction phi = parse_max_expression(phi_text, x.ambient());
            emit(complex_to_json(modification(x, phi)), out_path);
        } else if (*fibre) {
            QVec p = parse_vector(point_text);
            WeightedComplex curve = forgetful_fibre(n, p);
            emit(complex_to_json(curve), out_path);
        } else if (*forget) {
            if (point_text.empty()) {
                emit(map_to_json(forgetful_map(n)), out_path);
            } else {
                QVec p = parse_vector(point_text);
                QVec img = mat_vec(forgetful_matrix(n), p);
                json j = json::array();
                for (const auto& x : img) j.push_back(format_rat(x));
                emit(j, out_path);
            }
        } else if (*tree2point) {
            Labels labels;
            MarkedTree t = parse_tree(tree_text, labels);
            QVec p = tree_to_point(labels, t);
            json j;
            j["n"] = labels.n();
            json coords = json::array();
            for (const auto& x : p) coords.push_back(format_rat(x));
            j["point"] = coords;
            emit(j, out_path);
        } else if (*point2tree) {
            Labels l = Labels::range(1, n);
            MarkedTree t = point_to_tree(l, parse_vector(point_text));
            std::cout << format_tree(l, t) << "\n";
        } else if (*fibreproduct) {
            PLMap ft = forgetful_map(n);
            FibreProduct u = fibre_product(ft, ft);
            emit(complex_to_json(u.complex), out_path);
        } else if (*fam_check) {
            WeightedComplex total = load_complex(path_a);
            WeightedComplex base = load_complex(path_b);
            PLMap g = map_from_json(json::parse(read_file(path_c)), total);
            g.set_target(base);
            Family fam;
            fam.g = g;
            fam.n = n;
            json marks = json::parse(read_file(path_d));
            for (const auto& cj : marks.at("charts")) {
                Chart chart;
                std::string kind = cj.value("kind", "all");
                if (kind == "alpha") {
                    chart.kind = Chart::Kind::Sublevel;
                    chart.alpha = parse_rat(cj.at("alpha").get<std::string>());
                    chart.labels = Labels::range(1, n);
                } else {
                    chart.kind = Chart::Kind::WholeBase;
                }
                for (const auto& sj : cj.at("sections"))
                    chart.sections.push_back(map_from_json(sj, base));
                fam.charts.push_back(std::move(chart));
            }
            CheckReport pre = check_prefamily(fam.g, n);
            CheckReport marks_report = check_marking(fam, seed);
            for (const auto& f : pre.failures) std::cout << "prefamily: " << f << "\n";
            for (const auto& f : marks_report.failures) std::cout << "marking: " << f << "\n";
            int rc = report_outcome("prefamily axioms", pre.ok);
            rc |= report_outcome("marking axioms", marks_report.ok);
            return rc;
        } else if (*fam_pullback) {
            PLMap f = classifying_map(map_spec, n);
            Family fam = pullback_family(f, n, {parse_rat(alpha_text)});
            emit(complex_to_json(fam.total()), out_path);
        } else if (*fam_morphism) {
            PLMap f = classifying_map(map_spec, n);
            Family fam = pullback_family(f, n, {parse_rat(alpha_text)});
            PLMap fm = fibre_morphism(fam, seed);
            emit(map_to_json(fm), out_path);
        } else if (*fam_equiv) {
            PLMap f = classifying_map(map_spec, n);
            Family pulled = pullback_family(f, n, {parse_rat(alpha_text)});
            Family universal = universal_family(n, {parse_rat(alpha_text)});
            EquivalenceQuotient eq = equivalence_quotient(pulled, universal, seed);
            bool ok = is_pseudomorphism(eq.psi).ok &&
                      eq.psi.push_forward().equals_as_cycle(eq.target_quotient);
            return report_outcome("equivalence with the universal family", ok);
        } else if (*v_lemma_max) {
            Matroid m = parse_matroid_spec(matroid_spec);
            WeightedComplex fan = bergman_fan(m);
            RationalFunction phi = RationalFunction::shifted_max(zero_qvec(m.ground_size()));
            WeightedComplex cut = power_divisor(phi, m.rank() - 1, fan);
            WeightedComplex line = bergman_fan(Matroid::uniform(1, m.ground_size()));
            return report_outcome("lemma max on " + m.name(), cut.equals_as_cycle(line));
        } else if (*v_roundtrip) {
            PLMap f = classifying_map(map_spec, n);
            Family fam = pullback_family(f, n, {Rat(1)});
            PLMap fm = fibre_morphism(fam, seed);
            Labels l = Labels::range(1, n);
            QMat lin = phi_image_basis(l);
            bool ok = true;
            for (int c : fam.base().maximal_ids()) {
                QVec p = fam.base().cell(c).relative_interior_point();
                if (!in_span(lin, fm.value(p) - f.value(p))) ok = false;
                for (const auto& row : fam.base().cell_lattice(c)) {
                    QVec d = to_qvec(row);
                    if (!in_span(lin, fm.on_cell(c).apply_linear(d) -
                                          f.on_cell(fam.base().cells_containing(p).front())
                                              .apply_linear(d)))
                        ok = false;
                }
            }
            return report_outcome("fibre morphism round trip", ok);
        } else if (*v_modification) {
            ModificationReport rep = verify_moduli_modification(n);
            report_outcome("fibre product matches the matroid chart",
                           rep.fibre_product_matches_matroid_chart);
            report_outcome("diagonal matches the contraction", rep.diagonal_matches_contraction);
            report_outcome("modification rebuilds the Bergman fan",
                           rep.modification_is_bergman_fan);
            report_outcome("Bergman fan matches the moduli fan", rep.bergman_fan_is_moduli);
            return rep.ok() ? 0 : 1;
        } else if (*v_balancing) {
            WeightedComplex fan = matroid_spec.empty()
                                      ? moduli_fan(n)
                                      : bergman_fan(parse_matroid_spec(matroid_spec));
            BalanceReport rep = fan.is_balanced();
            std::cout << "balanced: " << (rep.checked - rep.failed) << "/" << rep.checked
                      << " codim-1 cells OK\n";
            return rep.ok ? 0 : 1;
        } else if (*v_fibre_lemma) {
            QVec origin = zero_qvec(Labels::range(1, n).npairs());
            PLMap ft = forgetful_map(n);
            WeightedComplex via = point_fibre(ft, origin, moduli_cutting_functions(n, origin));
            WeightedComplex direct = forgetful_fibre(n, origin);
            bool ok = via.equals_as_cycle(direct);
            for (int i : via.maximal_ids()) ok &= (via.weight(i) == 1);
            return report_outcome("forgetful fibre lemma", ok);
        } else if (*v_delcon) {
            Matroid m = parse_matroid_spec(matroid_spec);
            RationalFunction phi = deletion_link_function(m, element);
            WeightedComplex modified = modification(bergman_fan(m.deletion(element)), phi);
            // move the new coordinate back into the slot of the deleted element
            int total = m.ground_size();
            QMat perm(total, QVec(total, Rat(0)));
            for (int t = 0; t < total; ++t) {
                if (t == element - 1)
                    perm[t][total - 1] = 1;
                else
                    perm[t][t < element - 1 ? t : t - 1] = 1;
            }
            PLMap pm = PLMap::global(modified, perm, zero_qvec(total));
            bool ok = pm.push_forward().equals_as_cycle(bergman_fan(m));
            return report_outcome("deletion-contraction modification", ok);
        }
        return 0;
    } catch (const Error& e) {
        if (json_errors) {
            json j;
            j["error"] = e.code();
            j["message"] = e.what();
            std::cerr << j.dump() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
