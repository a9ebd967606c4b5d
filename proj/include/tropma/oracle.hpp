#pragma once

#include "tropma/expr.hpp"
#include "tropma/polytope.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace tropma {

/// Approximate estimate paired with the exact value it checks. Monte-Carlo
/// verdicts use 3 standard errors; the grid estimator uses 1% relative error
/// (absolute 1e-9 when the exact value is 0).
struct OracleReport {
    std::string method;
    Rational exact;
    double estimate = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

/// Hit-or-miss estimate of the covolume in the per-axis bounding box of the
/// complement. Supporting halfspaces of the upper set are enumerated by brute
/// force in double precision, independently of the exact kernel.
/// Throws std::invalid_argument for a non-convenient diagram.
OracleReport mc_covolume(const NewtonDiagram& d, std::uint64_t samples, std::uint64_t seed);

/// Hit-or-miss estimate of volume_exact(p) using brute-force facets of its
/// vertex set.
OracleReport mc_volume(const RationalPolytope& p, std::uint64_t samples, std::uint64_t seed);

struct LogBox {
    Point lo;
    Point hi;
};

/// Real Monge-Ampere mass of the box: gradients of g are collected on a
/// (resolution+1)^n grid, grid cells whose corner gradients span a
/// full-dimensional set are clustered, and n! times the hull volume of each
/// cluster's gradients is summed. Compared with the interior atoms in the
/// box. n must be 2 or 3; the box must lie in (-inf, 0)^n.
OracleReport grid_real_ma(const TropicalExpr& e, const LogBox& box, unsigned resolution);

nlohmann::json to_json(const OracleReport& r);

}  // namespace tropma
