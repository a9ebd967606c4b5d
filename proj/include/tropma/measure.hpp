#pragma once

#include "tropma/certified.hpp"
#include "tropma/expr.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropma {

/// Uniform measure on a torus fiber {log|z_i| = x_i}; a -inf coordinate pins
/// z_i = 0 (or z_i = center for a Mobius-tagged variable).
struct MAAtom {
    ExtPoint location;
    Rational mass;
    std::string note;

    bool operator==(const MAAtom& o) const { return location == o.location && mass == o.mass; }
};

/// Coordinate subset, 0-based, sorted.
using Stratum = std::vector<std::size_t>;

struct MAMeasure {
    std::vector<MAAtom> atoms;               // sorted by location, distinct
    std::vector<Stratum> unresolved_strata;  // mass could be neither computed nor excluded
    std::size_t discarded_vertices = 0;      // tropical vertices outside the open polydisc

    Rational total_mass() const;
    /// Exact atom-by-atom equality plus equal unresolved lists.
    bool same_as(const MAMeasure& other) const;
};

struct MassReport {
    Rational total;
    Rational origin;
    Rational interior;
    std::map<Stratum, std::optional<Rational>> strata;  // nullopt = unresolved
};

struct OriginMass {
    bool convenient = true;
    /// Exact n! * covolume when convenient; otherwise a certified lower bound.
    Rational value;
};

/// Dd^c normalised so log|z| has unit mass at 0 in one variable; every mass
/// is n! times a Euclidean volume in log-coordinates.
std::vector<MAAtom> interior_atoms(const TropicalExpr& e, std::size_t* discarded = nullptr);

OriginMass origin_mass(const TropicalExpr& e);

/// Interior atoms, the origin atom, and partial strata. A stratum on which
/// every term dies is resolved only through a product decomposition
/// satisfying the product hypothesis; otherwise it is reported unresolved.
MAMeasure total_measure(const TropicalExpr& e);

/// Same as total_measure but never uses the product decomposition.
MAMeasure direct_measure(const TropicalExpr& e);

MassReport mass_report(const MAMeasure& m, std::size_t n);

/// Every atom sits where e = -inf and nothing is unresolved: the toric form
/// of (dd^c u)^n({u > -inf}) = 0.
bool charges_only_neg_inf_locus(const TropicalExpr& e, const MAMeasure& m);

/// Product measure on n1 + n2 coordinates.
MAMeasure product_measure(const MAMeasure& m1, std::size_t n1, const MAMeasure& m2, std::size_t n2);

/// Polarization of the n-homogeneous residual-mass functional.
/// Throws std::domain_error when some partial sum is not convenient.
Rational mixed_origin_mass(std::span<const TropicalExpr> exprs);

struct ProductIdentity {
    MAMeasure lhs;
    MAMeasure rhs;
    bool equal = false;
    bool hypothesis_ok = false;
    std::string violation;
};

ProductIdentity product_mass_identity(const TropicalExpr& u1, const TropicalExpr& u2);

struct SubvarietyLift {
    TropicalExpr u;
    MAMeasure measure;   // total_measure(u)
    MAMeasure expected;  // (dd^c phi)^k pushed to (., -inf^{n-k})
    bool check = false;
    bool hypothesis_ok = false;
    std::string violation;
};

/// u = max(phi, x_{k+1}, ..., x_n).
SubvarietyLift lift_to_subvariety(const TropicalExpr& phi, std::size_t n);

struct Example1Interval {
    TropicalExpr expr;
    Rational mass;
    Rational lower;
    Enclosure upper;
    int upper_vs_mass = 0;  // certified sign of upper - mass
    bool inside = false;
};

/// Partial sum of max_i(a_ij x_i) over the rows; rows must be positive.
Example1Interval example1_mass_interval(const std::vector<Point>& rows, std::size_t n);

/// a_1j = 1, a_2j = 4^{-j} for odd j and swapped for even j, j = 1..J.
std::vector<Point> alternating_rows(std::size_t J);

/// max(2^{-j} y_1, (2^j/j) x_2, x_3, ..., x_n, -2^j), y_1 tagged with center 2^{-j}.
TropicalExpr example2_term(std::size_t j, std::size_t n);

/// Sum over j <= k of the interior mass of example2_term(j, n).
Rational example2_lower_bound(std::size_t k, std::size_t n);

nlohmann::json to_json(const MAMeasure& m);
MAMeasure measure_from_json(const nlohmann::json& j);
std::string to_csv(const MAMeasure& m, std::size_t n);

}  // namespace tropma
