#include "tropma/measure.hpp"

#include "tropma/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tropma {

namespace {

bool location_less(const MAAtom& a, const MAAtom& b) {
    return std::lexicographical_compare(a.location.begin(), a.location.end(), b.location.begin(),
                                        b.location.end());
}

std::string annotate(const ExtPoint& loc, const std::vector<MobiusTag>& tags) {
    std::string note;
    for (const auto& tag : tags) {
        if (!note.empty()) {
            note += "; ";
        }
        const auto var = std::to_string(tag.variable + 1);
        const auto b = to_string(tag.center);
        if (loc[tag.variable].is_neg_inf()) {
            note += "z" + var + " = " + b;
        } else {
            note += "torus around Mobius center " + b + ": |(z" + var + " - " + b + ")/(1 - " + b + " z" + var +
                    ")| = exp(" + to_string(loc[tag.variable].value()) + ")";
        }
    }
    return note;
}

bool term_killed(const Term& t, const Stratum& s) {
    return std::any_of(s.begin(), s.end(), [&](std::size_t i) { return sgn(t.exponent[i]) > 0; });
}

std::vector<Stratum> proper_strata(std::size_t n) {
    std::vector<Stratum> out;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        Stratum s;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                s.push_back(i);
            }
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

// Variable blocks linked by shared term support; empty when some term is a
// pure constant or some variable appears in no term.
std::vector<std::vector<std::size_t>> variable_blocks(const TropicalExpr& e) {
    const std::size_t n = e.n();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            v = parent[v] = parent[parent[v]];
        }
        return v;
    };
    std::vector<bool> seen(n, false);
    for (const auto& t : e.terms()) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(t.exponent[i]) == 0) {
                continue;
            }
            seen[i] = true;
            if (!first) {
                first = i;
            } else {
                parent[find(i)] = find(*first);
            }
        }
        if (!first) {
            return {};
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        return {};
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[find(i)].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, vars] : groups) {
        out.push_back(std::move(vars));
    }
    return out;
}

TropicalExpr restrict_to_block(const TropicalExpr& e, const std::vector<std::size_t>& block) {
    std::vector<Term> terms;
    for (const auto& t : e.terms()) {
        bool inside = false;
        for (auto i : block) {
            inside = inside || sgn(t.exponent[i]) > 0;
        }
        if (!inside) {
            continue;
        }
        Term out{Point(), t.constant};
        for (auto i : block) {
            out.exponent.push_back(t.exponent[i]);
        }
        terms.push_back(std::move(out));
    }
    std::vector<MobiusTag> tags;
    for (const auto& tag : e.tags()) {
        const auto it = std::find(block.begin(), block.end(), tag.variable);
        if (it != block.end()) {
            tags.push_back(MobiusTag{static_cast<std::size_t>(it - block.begin()), tag.center});
        }
    }
    return canonicalize(TropicalExpr(block.size(), std::move(terms), std::move(tags)));
}

// Places a measure over `vars` (a subset of n coordinates) by padding the
// remaining coordinates with the corresponding entries of `other`.
MAMeasure sort_atoms(MAMeasure m) {
    std::sort(m.atoms.begin(), m.atoms.end(), location_less);
    return m;
}

}  // namespace

Rational MAMeasure::total_mass() const {
    Rational s = 0;
    for (const auto& a : atoms) {
        s += a.mass;
    }
    return s;
}

bool MAMeasure::same_as(const MAMeasure& other) const {
    return atoms == other.atoms && unresolved_strata == other.unresolved_strata;
}

std::vector<MAAtom> interior_atoms(const TropicalExpr& e, std::size_t* discarded) {
    const auto canon = canonicalize(e);
    const std::size_t n = canon.n();
    std::vector<LiftedPoint> lifted;
    for (const auto& t : canon.terms()) {
        lifted.push_back(LiftedPoint{t.exponent, t.constant});
    }
    const auto sub = regular_subdivision(std::move(lifted));
    const Rational nfact = factorial(static_cast<unsigned>(n));
    std::vector<MAAtom> atoms;
    std::size_t dropped = 0;
    for (const auto& cell : sub.cells) {
        const bool inside = std::all_of(cell.dual_vertex.begin(), cell.dual_vertex.end(),
                                        [](const Rational& v) { return sgn(v) < 0; });
        if (!inside) {
            ++dropped;
            continue;
        }
        ExtPoint loc(cell.dual_vertex.begin(), cell.dual_vertex.end());
        atoms.push_back(MAAtom{loc, nfact * volume_exact(cell.polytope), annotate(loc, canon.tags())});
    }
    std::sort(atoms.begin(), atoms.end(), location_less);
    if (discarded != nullptr) {
        *discarded = dropped;
    }
    return atoms;
}

OriginMass origin_mass(const TropicalExpr& e) {
    const std::size_t n = e.n();
    const Rational nfact = factorial(static_cast<unsigned>(n));
    auto exponents = [](const TropicalExpr& x) {
        std::vector<Point> g;
        for (const auto& t : x.terms()) {
            g.push_back(t.exponent);
        }
        return g;
    };
    const auto canon = canonicalize(e);
    if (auto covol = covolume(NewtonDiagram(exponents(canon)))) {
        return OriginMass{true, nfact * *covol};
    }
    // Truncations max(g, A (x_1 + ... + x_n)); any convenient one bounds the
    // residual mass from below. Zero is always a valid bound.
    OriginMass out{false, Rational(0)};
    for (long a = 1; a <= 1024; a *= 2) {
        Point diag(n, Rational(a));
        const auto truncated = make_max(canon, TropicalExpr(n, {Term{diag, Rational(0)}}));
        if (auto covol = covolume(NewtonDiagram(exponents(truncated)))) {
            out.value = std::max(out.value, Rational(nfact * *covol));
        }
    }
    return out;
}

MAMeasure direct_measure(const TropicalExpr& e) {
    const auto canon = canonicalize(e);
    const std::size_t n = canon.n();
    MAMeasure m;
    m.atoms = interior_atoms(canon, &m.discarded_vertices);
    const auto origin = origin_mass(canon);
    if (origin.convenient && sgn(origin.value) > 0) {
        ExtPoint loc(n, ExtRational::neg_inf());
        m.atoms.push_back(MAAtom{loc, origin.value, annotate(loc, canon.tags())});
    }
    for (const auto& s : proper_strata(n)) {
        const bool all_killed = std::all_of(canon.terms().begin(), canon.terms().end(),
                                            [&](const Term& t) { return term_killed(t, s); });
        if (all_killed) {
            m.unresolved_strata.push_back(s);
        }
    }
    if (!origin.convenient) {
        Stratum all(n);
        std::iota(all.begin(), all.end(), 0);
        m.unresolved_strata.push_back(std::move(all));
    }
    return sort_atoms(std::move(m));
}

MAMeasure product_measure(const MAMeasure& m1, std::size_t n1, const MAMeasure& m2, std::size_t n2) {
    MAMeasure out;
    for (const auto& a : m1.atoms) {
        for (const auto& b : m2.atoms) {
            MAAtom atom;
            atom.location = a.location;
            atom.location.insert(atom.location.end(), b.location.begin(), b.location.end());
            atom.mass = a.mass * b.mass;
            atom.note = a.note.empty() ? b.note : (b.note.empty() ? a.note : a.note + "; " + b.note);
            out.atoms.push_back(std::move(atom));
        }
    }
    for (const auto& s : m1.unresolved_strata) {
        out.unresolved_strata.push_back(s);
    }
    for (auto s : m2.unresolved_strata) {
        for (auto& i : s) {
            i += n1;
        }
        out.unresolved_strata.push_back(std::move(s));
    }
    (void)n2;
    out.discarded_vertices = m1.discarded_vertices + m2.discarded_vertices;
    return sort_atoms(std::move(out));
}

bool charges_only_neg_inf_locus(const TropicalExpr& e, const MAMeasure& m) {
    if (!m.unresolved_strata.empty()) {
        return false;
    }
    return std::all_of(m.atoms.begin(), m.atoms.end(),
                       [&](const MAAtom& a) { return eval(e, a.location).is_neg_inf(); });
}

MAMeasure total_measure(const TropicalExpr& e) {
    auto direct = direct_measure(e);
    if (direct.unresolved_strata.empty()) {
        return direct;
    }
    const auto canon = canonicalize(e);
    const auto blocks = variable_blocks(canon);
    if (blocks.size() < 2) {
        return direct;
    }
    // Product hypothesis on every factor, then fold the product over blocks.
    std::vector<std::size_t> order;
    std::optional<MAMeasure> acc;
    for (const auto& block : blocks) {
        const auto factor = restrict_to_block(canon, block);
        const auto fm = total_measure(factor);
        if (!charges_only_neg_inf_locus(factor, fm)) {
            return direct;
        }
        acc = acc ? product_measure(*acc, order.size(), fm, block.size()) : fm;
        order.insert(order.end(), block.begin(), block.end());
    }
    // Undo the block permutation of coordinates.
    MAMeasure out;
    out.discarded_vertices = acc->discarded_vertices;
    for (const auto& a : acc->atoms) {
        MAAtom atom{ExtPoint(canon.n()), a.mass, std::string()};
        for (std::size_t i = 0; i < order.size(); ++i) {
            atom.location[order[i]] = a.location[i];
        }
        atom.note = annotate(atom.location, canon.tags());
        out.atoms.push_back(std::move(atom));
    }
    return sort_atoms(std::move(out));
}

MassReport mass_report(const MAMeasure& m, std::size_t n) {
    MassReport r;
    for (const auto& a : m.atoms) {
        r.total += a.mass;
        Stratum s;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.location[i].is_neg_inf()) {
                s.push_back(i);
            }
        }
        if (s.empty()) {
            r.interior += a.mass;
        } else if (s.size() == n) {
            r.origin += a.mass;
        } else {
            auto& slot = r.strata[s];
            slot = slot.value_or(Rational(0)) + a.mass;
        }
    }
    for (const auto& s : m.unresolved_strata) {
        if (s.size() < n) {
            r.strata[s] = std::nullopt;
        }
    }
    return r;
}

Rational mixed_origin_mass(std::span<const TropicalExpr> exprs) {
    const std::size_t n = exprs.size();
    if (n == 0) {
        throw std::invalid_argument("mixed_origin_mass: no expressions");
    }
    for (const auto& e : exprs) {
        if (e.n() != n) {
            throw DimensionError("mixed_origin_mass: need exactly n expressions in n variables");
        }
    }
    Rational total = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<TropicalExpr> chosen;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                chosen.push_back(exprs[i]);
            }
        }
        const auto om = origin_mass(make_sum(chosen));
        if (!om.convenient) {
            throw std::domain_error("mixed_origin_mass: a partial sum is not convenient");
        }
        const bool negative = (n - chosen.size()) % 2 == 1;
        total += negative ? Rational(-om.value) : om.value;
    }
    return total / factorial(static_cast<unsigned>(n));
}

ProductIdentity product_mass_identity(const TropicalExpr& u1, const TropicalExpr& u2) {
    ProductIdentity out;
    const auto m1 = total_measure(u1);
    const auto m2 = total_measure(u2);
    const bool h1 = charges_only_neg_inf_locus(canonicalize(u1), m1);
    const bool h2 = charges_only_neg_inf_locus(canonicalize(u2), m2);
    out.hypothesis_ok = h1 && h2;
    if (!h1) {
        out.violation = "first factor charges {u1 > -inf}";
    } else if (!h2) {
        out.violation = "second factor charges {u2 > -inf}";
    }
    out.lhs = direct_measure(join_max(u1, u2));
    out.rhs = product_measure(m1, u1.n(), m2, u2.n());
    out.equal = out.lhs.same_as(out.rhs);
    return out;
}

SubvarietyLift lift_to_subvariety(const TropicalExpr& phi, std::size_t n) {
    const std::size_t k = phi.n();
    if (n <= k) {
        throw DimensionError("lift_to_subvariety: target dimension must exceed the slice dimension");
    }
    std::vector<TropicalExpr> parts{embed(phi, n, 0)};
    for (std::size_t i = k; i < n; ++i) {
        parts.push_back(TropicalExpr::variable(n, i));
    }
    SubvarietyLift out{make_max(parts), {}, {}, false, false, {}};
    const auto phi_measure = total_measure(phi);
    out.hypothesis_ok = charges_only_neg_inf_locus(canonicalize(phi), phi_measure);
    if (!out.hypothesis_ok) {
        out.violation = "(dd^c phi)^k charges {phi > -inf}";
    }
    out.measure = total_measure(out.u);
    MAMeasure dirac;
    dirac.atoms.push_back(MAAtom{ExtPoint(n - k, ExtRational::neg_inf()), Rational(1), std::string()});
    out.expected = product_measure(phi_measure, k, dirac, n - k);
    for (auto& a : out.expected.atoms) {
        a.note = annotate(a.location, out.u.tags());
    }
    out.check = out.hypothesis_ok && out.measure.same_as(out.expected);
    return out;
}

Example1Interval example1_mass_interval(const std::vector<Point>& rows, std::size_t n) {
    if (rows.empty()) {
        throw std::invalid_argument("example1_mass_interval: no rows");
    }
    std::vector<TropicalExpr> summands;
    std::vector<Rational> products;
    Rational lower = 0;
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw DimensionError("example1_mass_interval: row length differs from n");
        }
        std::vector<Term> terms;
        Rational prod = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(row[i]) <= 0) {
                throw std::invalid_argument("example1_mass_interval: rows must be positive");
            }
            Point a(n, Rational(0));
            a[i] = row[i];
            terms.push_back(Term{std::move(a), Rational(0)});
            prod *= row[i];
        }
        summands.emplace_back(n, std::move(terms));
        products.push_back(prod);
        lower += prod;
    }
    Example1Interval out{make_sum(summands), Rational(0), lower, {}, 0, false};
    const auto om = origin_mass(out.expr);
    if (!om.convenient) {
        throw std::logic_error("example1_mass_interval: positive rows gave a non-convenient diagram");
    }
    out.mass = om.value;
    out.upper = root_sum_power_enclosure(products, static_cast<unsigned>(n));
    out.upper_vs_mass = compare_root_sum_power(products, static_cast<unsigned>(n), out.mass);
    out.inside = out.lower <= out.mass && out.upper_vs_mass >= 0;
    return out;
}

std::vector<Point> alternating_rows(std::size_t J) {
    std::vector<Point> rows;
    Rational quarter_power = 1;
    for (std::size_t j = 1; j <= J; ++j) {
        quarter_power /= 4;
        if (j % 2 == 1) {
            rows.push_back({Rational(1), quarter_power});
        } else {
            rows.push_back({quarter_power, Rational(1)});
        }
    }
    return rows;
}

TropicalExpr example2_term(std::size_t j, std::size_t n) {
    if (j == 0 || n < 2) {
        throw std::invalid_argument("example2_term: need j >= 1 and n >= 2");
    }
    mpz_class two_j;
    mpz_ui_pow_ui(two_j.get_mpz_t(), 2, j);
    std::vector<Term> terms;
    Point a(n, Rational(0));
    a[0] = Rational(mpz_class(1), two_j);
    terms.push_back(Term{a, Rational(0)});
    a.assign(n, Rational(0));
    a[1] = Rational(two_j, mpz_class(static_cast<unsigned long>(j)));
    a[1].canonicalize();
    terms.push_back(Term{a, Rational(0)});
    for (std::size_t i = 2; i < n; ++i) {
        a.assign(n, Rational(0));
        a[i] = 1;
        terms.push_back(Term{a, Rational(0)});
    }
    terms.push_back(Term{Point(n, Rational(0)), Rational(-two_j)});
    return TropicalExpr(n, std::move(terms), {MobiusTag{0, Rational(mpz_class(1), two_j)}});
}

Rational example2_lower_bound(std::size_t k, std::size_t n) {
    if (k == 0) {
        throw std::invalid_argument("example2_lower_bound: k must be positive");
    }
    Rational total = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        for (const auto& atom : interior_atoms(example2_term(j, n))) {
            total += atom.mass;
        }
    }
    return total;
}

nlohmann::json to_json(const MAMeasure& m) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms) {
        nlohmann::json x = nlohmann::json::array();
        for (const auto& v : a.location) {
            x.push_back(to_string(v));
        }
        nlohmann::json atom = {{"x", x}, {"mass", to_string(a.mass)}};
        if (!a.note.empty()) {
            atom["note"] = a.note;
        }
        atoms.push_back(std::move(atom));
    }
    nlohmann::json unresolved = nlohmann::json::array();
    for (const auto& s : m.unresolved_strata) {
        nlohmann::json one = nlohmann::json::array();
        for (auto i : s) {
            one.push_back(i + 1);
        }
        unresolved.push_back(std::move(one));
    }
    return {{"atoms", atoms}, {"unresolved", unresolved}};
}

MAMeasure measure_from_json(const nlohmann::json& j) {
    MAMeasure m;
    for (const auto& a : j.at("atoms")) {
        MAAtom atom;
        for (const auto& v : a.at("x")) {
            atom.location.push_back(parse_ext_rational(v.get<std::string>()));
        }
        atom.mass = parse_rational(a.at("mass").get<std::string>());
        if (a.contains("note")) {
            atom.note = a.at("note").get<std::string>();
        }
        m.atoms.push_back(std::move(atom));
    }
    if (j.contains("unresolved")) {
        for (const auto& s : j.at("unresolved")) {
            Stratum one;
            for (const auto& i : s) {
                one.push_back(i.get<std::size_t>() - 1);
            }
            m.unresolved_strata.push_back(std::move(one));
        }
    }
    return sort_atoms(std::move(m));
}

std::string to_csv(const MAMeasure& m, std::size_t n) {
    std::ostringstream os;
    for (std::size_t i = 0; i < n; ++i) {
        os << "x" << (i + 1) << ",";
    }
    os << "mass\n";
    for (const auto& a : m.atoms) {
        for (const auto& v : a.location) {
            os << to_string(v) << ",";
        }
        os << to_string(a.mass) << "\n";
    }
    return os.str();
}

}  // namespace tropma
