#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dhkrylov/dhdae.hpp"

namespace dhk::bench {

/// A model descriptor is a JSON object {"name": ..., "params": {...}}.
/// Missing parameters take the defaults listed by model_catalog().
struct ModelInfo {
  std::string name;
  std::string description;
  nlohmann::json defaults;
};

const std::vector<ModelInfo>& model_catalog();

/// Throws ContractError for unknown names or malformed parameters.
DhDaeSystem build_model(const nlohmann::json& descriptor);

/// Descriptor with all defaults filled in (what build_model actually used).
nlohmann::json resolve_descriptor(const nlohmann::json& descriptor);

/// Writes e.mtx, j.mtx and r.mtx into dir (created if missing) and returns
/// the written paths.
std::vector<std::filesystem::path> export_model(const DhDaeSystem& sys,
                                                const std::filesystem::path& dir);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace dhk::bench
