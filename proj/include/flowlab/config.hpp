#pragma once

// Experiment configuration documents (JSON) and their translation into
// fields, grids, states and masks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "flowlab/core.hpp"
#include "flowlab/fields.hpp"
#include "flowlab/reinversion.hpp"

namespace flowlab::config {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Loads a config document. A run metadata file is accepted too: its
/// embedded "config" object is returned. Relative "file" entries are made
/// absolute against the document's directory.
Json load(const std::filesystem::path& path);

/// Required key lookup; throws a Config error naming the missing key.
const Json& require(const Json& doc, const std::string& key);

std::uint64_t seed_of(const Json& doc);
TimeGrid grid_of(const Json& doc);
EditConfig edit_config_of(const Json& doc);

/// Built-in field presets usable by name: zero, linear, smooth, guided.
bool is_preset(const std::string& name);

/// Expands presets and fills omitted dims from dim_hint.
Json normalize_field_spec(const Json& spec, std::size_t dim_hint);
FieldPtr build_field(const Json& normalized_spec);

struct StateContext {
  const VelocityField* field = nullptr;  // needed by {"forward": ...}
  std::optional<TimeGrid> grid;
  double default_time = 1.0;
};

/// State from a spec: values / file / blob / prior / forward.
LatentState build_state(const Json& spec, const StateContext& context);
/// Dimension implied by a state spec, if it can be known without a field.
std::optional<std::size_t> state_dim(const Json& spec);

/// Mask from a spec: file / box / values.
Mask build_mask(const Json& spec, std::optional<GridShape> shape, std::size_t dim);

}  // namespace flowlab::config
