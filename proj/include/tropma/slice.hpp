#pragma once

#include "tropma/measure.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace tropma {

/// Diagonal recession slope min_t sum_i a_{t,i}: the Lelong number at 0.
Rational lelong_at_origin(const TropicalExpr& e);

struct SliceStratum {
    Stratum coordinates;        // subset of the first k variables set to -inf, 0-based
    std::optional<Rational> nu; // nullopt: no term survives (u(z', .) is -inf)
};

/// Lelong numbers of u(z', .) at z'' = 0, z' = first k coordinates.
struct SliceLelongProfile {
    std::size_t k = 0;
    Rational generic_value;
    std::vector<SliceStratum> strata;  // every non-empty S, by size then lex
};

SliceLelongProfile slice_lelong_profile(const TropicalExpr& e, std::size_t k);

/// E(u, t, 0) inside the polydisc in z'.
struct ESet {
    bool whole_polydisc = false;
    /// Minimal coordinate subsets S with {z_S = 0} contained in E.
    std::vector<Stratum> strata;
};

ESet E_set(const TropicalExpr& e, std::size_t k, const Rational& t);

/// phi_u(x', r) = g(x', log r, ..., log r) / |log r|, parametrised by the
/// depth s = |log r| > 0 so that every value is rational.
class PhiFunction {
public:
    PhiFunction(TropicalExpr e, std::size_t k);

    const TropicalExpr& expr() const { return expr_; }
    std::size_t k() const { return k_; }
    Rational value(const Point& x_prime, const Rational& depth) const;
    Rational limit_value() const { return -sigma_min_; }
    /// Depth beyond which only terms of minimal z''-slope can be maximal.
    Rational stabilization_depth(const Point& x_prime) const;

private:
    std::vector<Rational> levels(const Point& x_prime) const;

    TropicalExpr expr_;
    std::size_t k_;
    std::vector<Rational> sigma_;
    Rational sigma_min_;
};

/// Past the stabilization depth phi is K/s + L; the limit L is extracted
/// exactly from two depths and compared across the grid.
bool phi_constancy_check(const TropicalExpr& e, std::size_t k, const std::vector<Point>& grid);

/// (some term has zero z''-block) == (generic slice Lelong number is 0) ==
/// (phi limit is 0). Returns the common value; throws std::logic_error if
/// the three disagree.
bool classE_phi_zero(const TropicalExpr& e, std::size_t k);

struct CapacityStep {
    Rational depth;
    Rational sup_error;
};

/// Exact sup over x in [-M, -1/M]^n of |g(x', x'' - s) / s - limit| for each
/// depth s. g is monotone, so the extremes sit at the two box corners.
std::vector<CapacityStep> capacity_convergence_profile(const TropicalExpr& e, std::size_t k,
                                                       const std::vector<Rational>& depths, const Rational& box);

/// No atom of total_measure(e) sits on a torus fiber of (polydisc)^k x {0}.
bool toric_slice_invariant(const TropicalExpr& e, std::size_t k);

nlohmann::json to_json(const SliceLelongProfile& p);
nlohmann::json to_json(const ESet& e);

}  // namespace tropma
