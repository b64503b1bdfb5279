#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "conclust/core.hpp"
#include "conclust/decomposition.hpp"
#include "conclust/msr_msd.hpp"

namespace conclust {

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const ClusteringSolution& sol);
ClusteringSolution solution_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const TreeDecomposition& td);
TreeDecomposition decomposition_from_json(const nlohmann::json& j);

/// Generator output: instance plus optional witness decomposition and
/// designated centers, tagged with its provenance.
struct Bundle {
    Instance inst;
    std::optional<TreeDecomposition> decomposition;
    std::optional<std::vector<int>> centers;
    std::string generator;
    uint64_t seed = 0;
};

nlohmann::json bundle_to_json(const Bundle& b);
Bundle bundle_from_json(const nlohmann::json& j);

nlohmann::json msr_report_to_json(const MsrReport& rep);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace conclust
