#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace tropma {

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::size_t pairs = 50;            // product pairs
    std::size_t corpus = 0;            // 0: the suite's default corpus size
    std::uint64_t samples = 1000000;   // Monte-Carlo samples per mass
    unsigned grid = 512;               // grid_real_ma resolution
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> messages;  // first failures, or informational lines
    nlohmann::json data = nlohmann::json::object();
};

/// anchor, example1, infinity, example2, product, lift, constancy, eset,
/// toric, geometry, oracle.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

nlohmann::json to_json(const SuiteResult& r);

}  // namespace tropma
