#include "tropma/dsl.hpp"
#include "tropma/measure.hpp"
#include "tropma/oracle.hpp"
#include "tropma/slice.hpp"
#include "tropma/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace tropma;
using nlohmann::json;

namespace {

enum class Format { json, csv, text };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Input {
    std::string inline_expr;
    std::string file;
    std::size_t n = 0;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

TropicalExpr load_expr(const Input& in) {
    std::string text;
    if (!in.inline_expr.empty()) {
        text = in.inline_expr;
    } else if (!in.file.empty()) {
        std::ifstream f(in.file);
        if (!f) {
            throw UsageError("cannot open '" + in.file + "'");
        }
        text = read_all(f);
    } else {
        text = read_all(std::cin);
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto e = expr_from_json(json::parse(text));
        if (in.n != 0 && in.n != e.n()) {
            throw DimensionError("--n " + std::to_string(in.n) + " differs from the file's n = " + std::to_string(e.n()));
        }
        return canonicalize(e);
    }
    return parse_expr(text, in.n);
}

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_rational(item));
    }
    return out;
}

// "1,1/16;1/16,1"
std::vector<Point> parse_rows(const std::string& text) {
    std::vector<Point> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        rows.push_back(parse_list(row));
    }
    return rows;
}

std::string decimal(const Rational& q, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << q.get_d();
    return os.str();
}

void emit(const json& j, Format f) {
    if (f == Format::json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : j.items()) {
        const std::string v = value.is_string() ? value.get<std::string>() : value.dump();
        std::cout << key << (f == Format::csv ? "," : ": ") << v << "\n";
    }
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
    if (opt->count() > 0) {
        return flag_value;
    }
    if (const char* env = std::getenv("TROPMA_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("TROPMA_SEED is not an unsigned integer");
        }
    }
    return 7;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact complex Monge-Ampere measures of toric psh functions given as tropical expressions"};
    app.require_subcommand(1);
    app.fallthrough();

    Format format = Format::json;
    const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};
    app.add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    std::uint64_t seed_flag = 7;
    auto* seed_opt = app.add_option("--seed", seed_flag, "Random seed (falls back to TROPMA_SEED, then 7)");

    Input input;
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("expr", input.inline_expr, "Expression in the DSL, e.g. \"max(2*x1, 3*x2)\"");
        sub->add_option("--file", input.file, "Read the expression (DSL or JSON) from a file");
        sub->add_option("--n", input.n, "Number of variables (default: largest index used)");
    };

    auto* mass = app.add_subcommand("mass", "Origin, interior and stratum masses");
    add_input(mass);
    auto* measure = app.add_subcommand("measure", "Full atomic Monge-Ampere measure");
    add_input(measure);

    std::size_t k = 0;
    auto* lelong = app.add_subcommand("lelong", "Lelong number at 0, or the slice profile with --k");
    add_input(lelong);
    lelong->add_option("--k", k, "Split z' = first k variables");

    std::string depths_text = "1,2,4,8,16,32,64,128,256";
    std::string box_text = "2";
    auto* phi = app.add_subcommand("phi", "Limit, constancy and uniform convergence of phi_u");
    add_input(phi);
    phi->add_option("--k", k, "Split z' = first k variables")->required();
    phi->add_option("--depths", depths_text, "Increasing depths s = |log r|, comma separated");
    phi->add_option("--box", box_text, "Log-box bound M > 1");

    std::string t_text = "1";
    auto* eset = app.add_subcommand("eset", "The set E(u, t, 0) of z' with slice Lelong number >= t");
    add_input(eset);
    eset->add_option("--k", k, "Split z' = first k variables")->required();
    eset->add_option("--t", t_text, "Threshold t > 0");

    SuiteOptions suite_opts;
    std::string suite_name;
    auto* check = app.add_subcommand("check", "Run a verification suite (exit 1 on failure)");
    std::vector<std::string> choices = suite_names();
    choices.push_back("all");
    check->add_option("suite", suite_name, "Suite name")->required()->check(CLI::IsMember(choices));
    check->add_option("--pairs", suite_opts.pairs, "Random pairs for the product suite");
    check->add_option("--samples", suite_opts.samples, "Monte-Carlo samples per mass");
    check->add_option("--grid", suite_opts.grid, "Grid resolution for the real Monge-Ampere oracle");
    check->add_option("--corpus", suite_opts.corpus, "Corpus size for the slice suites");

    std::size_t truncate = 10;
    std::size_t n_rows = 2;
    std::string rows_text;
    auto* ex1 = app.add_subcommand("example1", "Mass of a partial sum of maxima against its interval");
    ex1->add_option("--truncate", truncate, "J: number of alternating rows");
    ex1->add_option("--rows", rows_text, "Explicit rows, e.g. \"1,1/16;1/16,1\"");
    ex1->add_option("--n", n_rows, "Row length for the alternating rows (rows are padded with 1)");

    std::size_t ex2_k = 100;
    std::size_t ex2_n = 2;
    auto* ex2 = app.add_subcommand("example2", "Divergent lower bound: sum of per-term interior masses");
    ex2->add_option("--k", ex2_k, "Number of terms");
    ex2->add_option("--n", ex2_n, "Number of variables (>= 2)");

    std::uint64_t samples = 1000000;
    unsigned grid = 512;
    std::string lo_text = "-2";
    std::string hi_text = "-1/2";
    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo covolume and grid Monge-Ampere cross-checks");
    add_input(oracle);
    oracle->add_option("--samples", samples, "Monte-Carlo samples");
    oracle->add_option("--grid", grid, "Grid resolution (0 skips the grid oracle)");
    oracle->add_option("--lo", lo_text, "Lower corner of the log-box (all coordinates)");
    oracle->add_option("--hi", hi_text, "Upper corner of the log-box (all coordinates)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t seed = resolve_seed(seed_opt, seed_flag);
        if (*mass) {
            const auto e = load_expr(input);
            const auto om = origin_mass(e);
            const auto m = total_measure(e);
            const auto report = mass_report(m, e.n());
            if (format == Format::text) {
                std::cout << to_string(om.value) << (om.convenient ? "" : " (not convenient: lower bound)") << "\n";
                return 0;
            }
            json strata = json::object();
            for (const auto& [s, v] : report.strata) {
                std::string key;
                for (auto i : s) {
                    key += (key.empty() ? "" : ",") + std::to_string(i + 1);
                }
                strata[key] = v ? to_string(*v) : "unresolved";
            }
            json j{{"origin", to_string(om.value)},     {"convenient", om.convenient},
                   {"interior", to_string(report.interior)}, {"total", to_string(report.total)},
                   {"strata", strata},                  {"discarded_vertices", m.discarded_vertices}};
            if (!om.convenient) {
                j["origin_lower_bound"] = to_string(om.value);
            }
            emit(j, format);
        } else if (*measure) {
            const auto e = load_expr(input);
            const auto m = total_measure(e);
            if (format == Format::csv) {
                std::cout << to_csv(m, e.n());
            } else if (format == Format::text) {
                for (const auto& a : m.atoms) {
                    std::cout << "(";
                    for (std::size_t i = 0; i < a.location.size(); ++i) {
                        std::cout << (i ? ", " : "") << to_string(a.location[i]);
                    }
                    std::cout << ") mass " << to_string(a.mass) << (a.note.empty() ? "" : "  [" + a.note + "]") << "\n";
                }
                for (const auto& s : m.unresolved_strata) {
                    std::cout << "unresolved stratum {";
                    for (std::size_t i = 0; i < s.size(); ++i) {
                        std::cout << (i ? "," : "") << s[i] + 1;
                    }
                    std::cout << "}\n";
                }
            } else {
                auto j = to_json(m);
                j["discarded_vertices"] = m.discarded_vertices;
                std::cout << j.dump(2) << "\n";
            }
        } else if (*lelong) {
            const auto e = load_expr(input);
            if (k == 0) {
                const auto nu = lelong_at_origin(e);
                format == Format::text ? void(std::cout << to_string(nu) << "\n")
                                       : emit(json{{"lelong", to_string(nu)}}, format);
            } else {
                const auto p = slice_lelong_profile(e, k);
                if (format == Format::text) {
                    std::cout << "generic " << to_string(p.generic_value) << "\n";
                    for (const auto& s : p.strata) {
                        std::cout << "S={";
                        for (std::size_t i = 0; i < s.coordinates.size(); ++i) {
                            std::cout << (i ? "," : "") << s.coordinates[i] + 1;
                        }
                        std::cout << "} nu " << (s.nu ? to_string(*s.nu) : "inf") << "\n";
                    }
                } else {
                    std::cout << to_json(p).dump(2) << "\n";
                }
            }
        } else if (*phi) {
            const auto e = load_expr(input);
            const PhiFunction f(e, k);
            std::vector<Point> grid_pts;
            for (const Rational v : {Rational(-1, 3), Rational(-1), Rational(-5, 2)}) {
                grid_pts.push_back(Point(k, v));
            }
            const auto profile = capacity_convergence_profile(e, k, parse_list(depths_text), parse_rational(box_text));
            json steps = json::array();
            for (const auto& s : profile) {
                steps.push_back({{"depth", to_string(s.depth)}, {"sup_error", to_string(s.sup_error)}});
            }
            json j{{"limit", to_string(f.limit_value())},
                   {"constant", phi_constancy_check(e, k, grid_pts)},
                   {"classE_phi_zero", classE_phi_zero(e, k)},
                   {"convergence", steps}};
            std::cout << (format == Format::json ? j.dump(2) : j.dump()) << "\n";
        } else if (*eset) {
            const auto e = load_expr(input);
            const auto set = E_set(e, k, parse_rational(t_text));
            std::cout << to_json(set).dump(format == Format::json ? 2 : -1) << "\n";
        } else if (*check) {
            suite_opts.seed = seed;
            const auto names = suite_name == "all" ? suite_names() : std::vector<std::string>{suite_name};
            bool all_passed = true;
            json results = json::array();
            for (const auto& name : names) {
                const auto r = run_suite(name, suite_opts);
                all_passed = all_passed && r.passed;
                if (format == Format::json) {
                    results.push_back(to_json(r));
                } else {
                    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, "
                              << r.failures << " failures)\n";
                    for (const auto& m : r.messages) {
                        std::cout << "  " << m << "\n";
                    }
                }
            }
            if (format == Format::json) {
                std::cout << json{{"passed", all_passed}, {"seed", seed}, {"suites", results}}.dump(2) << "\n";
            }
            return all_passed ? 0 : 1;
        } else if (*ex1) {
            std::vector<Point> rows;
            if (!rows_text.empty()) {
                rows = parse_rows(rows_text);
                n_rows = rows.front().size();
            } else {
                for (auto row : alternating_rows(truncate)) {
                    row.resize(n_rows, Rational(1));
                    rows.push_back(std::move(row));
                }
            }
            const auto iv = example1_mass_interval(rows, n_rows);
            const auto slice1 = substitute_slice(iv.expr, {{0, ExtRational::neg_inf()}});
            json j{{"expr", to_dsl(iv.expr)},
                   {"mass", to_string(iv.mass)},
                   {"lower", to_string(iv.lower)},
                   {"upper", {iv.upper.lo, iv.upper.hi}},
                   {"inside", iv.inside},
                   {"slice_x1_neg_inf", std::holds_alternative<IdenticallyNegInf>(slice1)
                                            ? std::string("-inf")
                                            : to_dsl(std::get<TropicalExpr>(slice1))}};
            if (format == Format::text) {
                std::cout << "mass " << to_string(iv.mass) << " in [" << to_string(iv.lower) << ", " << iv.upper.hi
                          << "]: " << (iv.inside ? "inside" : "OUTSIDE") << "\n";
            } else {
                emit(j, format);
            }
        } else if (*ex2) {
            const auto h = example2_lower_bound(ex2_k, ex2_n);
            if (format == Format::json) {
                emit(json{{"k", ex2_k}, {"lower_bound", to_string(h)}, {"decimal", decimal(h)}}, format);
            } else {
                std::cout << "H_" << ex2_k << " = " << to_string(h) << " ~ " << decimal(h, 3) << "\n";
            }
        } else if (*oracle) {
            const auto e = load_expr(input);
            json reports = json::array();
            bool all_pass = true;
            NewtonDiagram diagram([&] {
                std::vector<Point> g;
                for (const auto& t : e.terms()) {
                    g.push_back(t.exponent);
                }
                return g;
            }());
            if (diagram.convenient()) {
                const auto r = mc_covolume(diagram, samples, seed);
                all_pass = all_pass && r.pass;
                reports.push_back(to_json(r));
            }
            if (grid > 0 && (e.n() == 2 || e.n() == 3)) {
                const LogBox box{Point(e.n(), parse_rational(lo_text)), Point(e.n(), parse_rational(hi_text))};
                const auto r = grid_real_ma(e, box, grid);
                all_pass = all_pass && r.pass;
                reports.push_back(to_json(r));
            }
            std::cout << reports.dump(format == Format::json ? 2 : -1) << "\n";
            return all_pass ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
