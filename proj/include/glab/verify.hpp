#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "glab/bodies.hpp"
#include "glab/constants.hpp"
#include "glab/descriptors.hpp"
#include "glab/measures.hpp"

namespace glab {

using Json = nlohmann::ordered_json;

struct ScenarioConfig {
    int d = 3;
    int j = 1;
    int k = -1;  // defaults to j+1 where a k is needed
    long samples = 100000;
    int probes = 10;
    int per_atom = 4;
    int inner = 1;
    std::uint64_t seed = 12345;
    double z = 3.0;
    std::string f_choice = "one";          // thm-5-1 probe function: one | bracket
    std::string phi_choice = "intrinsic";  // thm-3-1 valuation: intrinsic | crofton
};

struct CandidateRow {
    std::string name;
    double value = 0.0;
    double max_abs_z = 0.0;
    bool pass = false;
};

struct VerifyResult {
    std::string identity;
    ComparisonReport report;
    std::vector<CandidateRow> candidates;
    bool pass = false;
    double max_abs_diff = 0.0;  // exact branches (eq-2-5)
    double max_sep_z = 0.0;     // discrimination
    std::vector<std::string> notes;
    Json extra;
};

const std::vector<std::string>& verify_identities();

/// Runs one identity check. body2 is used by the discrimination branch only.
VerifyResult run_verify(const std::string& identity, const Body& body, const Body* body2,
                        const ScenarioConfig& cfg);

/// Deterministic report document (no wall-clock: identical configuration
/// must reproduce identical bytes).
Json report_json(const VerifyResult& res, const ScenarioConfig& cfg, const Json& body_echo);

/// JSON echo of a body spec.
Json body_json(const Body& body);

/// Serialize with stable key order and trailing newline.
std::string dump_json(const Json& j);

}  // namespace glab
