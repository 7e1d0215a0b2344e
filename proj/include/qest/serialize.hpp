#pragma once

#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "qest/matrix.hpp"
#include "qest/partition.hpp"
#include "qest/selector.hpp"
#include "qest/simulator.hpp"
#include "qest/synthesis.hpp"

namespace qest {

nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const SynthesisSolution& s);
SynthesisSolution solution_from_json(const nlohmann::json& j);

nlohmann::json block_solutions_to_json(const BlockSolutions& bs);
BlockSolutions block_solutions_from_json(const nlohmann::json& j);

nlohmann::json unitary_to_json(const Unitary& u);
Unitary unitary_from_json(const nlohmann::json& j);

nlohmann::json approximation_set_to_json(const ApproximationSet& set);
ApproximationSet approximation_set_from_json(const nlohmann::json& j);

std::string distribution_to_csv(const ProbabilityDistribution& d);
ProbabilityDistribution distribution_from_csv(const std::string& text);

/// FNV-1a over the raw matrix bytes plus arbitrary tag integers; cache key
/// for synthesized solution sets.
std::string content_hash(const Unitary& u,
                         const std::vector<std::uint64_t>& tags);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qest
