#include "flowlab/config.hpp"

#include <fstream>

#include "flowlab/data.hpp"
#include "flowlab/io.hpp"
#include "flowlab/solver.hpp"

namespace flowlab::config {

namespace {

Error config_error(const std::string& what) { return Error(ErrorKind::Config, what); }

void absolutize_files(Json& node, const std::filesystem::path& base) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it.key() == "file" && it->is_string()) {
        std::filesystem::path p = it->get<std::string>();
        if (p.is_relative()) *it = std::filesystem::weakly_canonical(base / p).string();
      } else {
        absolutize_files(*it, base);
      }
    }
  } else if (node.is_array()) {
    for (Json& child : node) absolutize_files(child, base);
  }
}

std::vector<double> number_list(const Json& doc, const std::string& key) {
  const Json& node = require(doc, key);
  if (!node.is_array()) throw config_error("config key '" + key + "' must be a list of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const Json& v : node) {
    if (!v.is_number()) throw config_error("config key '" + key + "' must be a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

template <typename T>
T get_or(const Json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error("config key '" + key + "' has the wrong type");
  }
}

std::optional<GridShape> shape_from(const Json& doc) {
  if (doc.contains("rows") || doc.contains("cols")) {
    return GridShape(get_or<std::size_t>(doc, "rows", 0), get_or<std::size_t>(doc, "cols", 0));
  }
  return std::nullopt;
}

}  // namespace

Json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw config_error("config document must be a JSON object");
  if (doc.contains("config") && doc.contains("tool")) doc = doc.at("config");
  absolutize_files(doc, std::filesystem::absolute(path).parent_path());
  return doc;
}

const Json& require(const Json& doc, const std::string& key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw config_error("config is missing required key '" + key + "'");
  }
  return doc.at(key);
}

std::uint64_t seed_of(const Json& doc) { return get_or<std::uint64_t>(doc, "seed", 0); }

TimeGrid grid_of(const Json& doc) {
  const Json& grid = require(doc, "grid");
  if (grid.contains("times")) return TimeGrid(number_list(grid, "times"));
  return TimeGrid::uniform(get_or<std::size_t>(grid, "steps", 0));
}

EditConfig edit_config_of(const Json& doc) {
  EditConfig cfg;
  const Json edit = doc.contains("edit") ? doc.at("edit") : Json::object();
  cfg.t_tau = get_or<double>(edit, "t_tau", cfg.t_tau);
  cfg.eta = get_or<double>(edit, "eta", cfg.eta);
  cfg.deterministic_stage1 = get_or<bool>(edit, "deterministic_stage1", false);
  cfg.seed = seed_of(doc);
  cfg.validate();
  return cfg;
}

bool is_preset(const std::string& name) {
  return name == "zero" || name == "linear" || name == "smooth" || name == "guided";
}

Json normalize_field_spec(const Json& raw, std::size_t dim_hint) {
  Json spec = raw.is_string() ? Json{{"type", raw.get<std::string>()}} : raw;
  if (!spec.is_object()) throw config_error("field spec must be an object or a preset name");
  const std::string type = get_or<std::string>(spec, "type", "");
  if (type.empty()) throw config_error("config is missing required key 'field.type'");

  auto fill_dim = [&](const char* key, std::size_t fallback) {
    if (!spec.contains(key)) {
      if (fallback == 0) {
        throw config_error(std::string("config is missing required key 'field.") + key + "'");
      }
      spec[key] = fallback;
    }
  };

  if (type == "zero") {
    fill_dim("dim", dim_hint);
    fill_dim("condition_dim", spec["dim"].get<std::size_t>());
  } else if (type == "linear") {
    // v(x, t) = a x, condition-insensitive
    fill_dim("dim", dim_hint);
    fill_dim("condition_dim", spec["dim"].get<std::size_t>());
    if (!spec.contains("a")) spec["a"] = 1.0;
  } else if (type == "smooth" || type == "smooth_random") {
    spec["type"] = "smooth_random";
    fill_dim("dim", dim_hint);
    fill_dim("condition_dim", spec["dim"].get<std::size_t>());
    if (!spec.contains("seed")) spec["seed"] = 1;
    if (!spec.contains("hidden_width")) spec["hidden_width"] = 32;
    if (!spec.contains("gain")) spec["gain"] = 1.0;
  } else if (type == "guided") {
    fill_dim("dim", dim_hint);
    if (!spec.contains("pull")) spec["pull"] = 3.0;
    if (!spec.contains("seed")) spec["seed"] = 1;
    if (!spec.contains("hidden_width")) spec["hidden_width"] = 32;
    if (!spec.contains("gain")) spec["gain"] = 0.5;
  } else if (type == "affine") {
    fill_dim("dim", dim_hint);
    fill_dim("condition_dim", spec["dim"].get<std::size_t>());
  } else if (type == "sum") {
    Json terms = Json::array();
    for (const Json& term : require(spec, "terms")) terms.push_back(normalize_field_spec(term, dim_hint));
    spec["terms"] = terms;
  } else if (type != "constant" && type != "target") {
    throw config_error("unknown field type '" + type + "'");
  }
  return spec;
}

FieldPtr build_field(const Json& spec) {
  const std::string type = require(spec, "type").get<std::string>();
  if (type == "zero") {
    const auto d = spec.at("dim").get<std::size_t>();
    return constant_field(std::vector<double>(d, 0.0), spec.at("condition_dim").get<std::size_t>());
  }
  if (type == "constant") {
    std::vector<double> value = number_list(spec, "values");
    const std::size_t cdim = get_or<std::size_t>(spec, "condition_dim", value.size());
    return constant_field(std::move(value), cdim);
  }
  if (type == "target") return deterministic_target_field(number_list(spec, "values"), true);
  if (type == "linear") {
    AffineFieldSpec affine = AffineFieldSpec::scalar(spec.at("dim").get<std::size_t>(),
                                                     spec.at("a").get<double>());
    affine.condition_dim = spec.at("condition_dim").get<std::size_t>();
    return affine_field(std::move(affine));
  }
  if (type == "affine") {
    AffineFieldSpec affine;
    affine.dim = spec.at("dim").get<std::size_t>();
    affine.condition_dim = spec.at("condition_dim").get<std::size_t>();
    if (spec.contains("a_times")) affine.a_grid = TimeGrid(number_list(spec, "a_times"));
    affine.a_values = spec.contains("a_values") ? number_list(spec, "a_values")
                                                : std::vector<double>(affine.a_grid.times().size(),
                                                                      get_or<double>(spec, "a", 0.0));
    if (spec.contains("b")) affine.b = number_list(spec, "b");
    if (spec.contains("b_scale")) {
      require_same_dim(affine.dim, affine.condition_dim, "affine b_scale");
      affine.b.assign(affine.dim * affine.dim, 0.0);
      for (std::size_t i = 0; i < affine.dim; ++i) {
        affine.b[i * affine.dim + i] = spec.at("b_scale").get<double>();
      }
    }
    if (spec.contains("b0")) affine.b0 = number_list(spec, "b0");
    return affine_field(std::move(affine));
  }
  if (type == "smooth_random") {
    SmoothRandomFieldSpec s;
    s.dim = spec.at("dim").get<std::size_t>();
    s.condition_dim = spec.at("condition_dim").get<std::size_t>();
    s.seed = spec.at("seed").get<std::uint64_t>();
    s.hidden_width = spec.at("hidden_width").get<std::size_t>();
    s.gain = spec.at("gain").get<double>();
    return smooth_random_field(s);
  }
  if (type == "guided") {
    SmoothRandomFieldSpec s;
    s.dim = spec.at("dim").get<std::size_t>();
    s.condition_dim = s.dim;
    s.seed = spec.at("seed").get<std::uint64_t>();
    s.hidden_width = spec.at("hidden_width").get<std::size_t>();
    s.gain = spec.at("gain").get<double>();
    return guided_field(spec.at("pull").get<double>(), s);
  }
  if (type == "sum") {
    std::vector<FieldPtr> terms;
    for (const Json& term : spec.at("terms")) terms.push_back(build_field(term));
    return sum_field(std::move(terms));
  }
  throw config_error("unknown field type '" + type + "'");
}

std::optional<std::size_t> state_dim(const Json& spec) {
  if (!spec.is_object()) return std::nullopt;
  if (spec.contains("values") && spec.at("values").is_array()) return spec.at("values").size();
  if (spec.contains("blob")) {
    const Json& blob = spec.at("blob");
    return get_or<std::size_t>(blob, "rows", 0) * get_or<std::size_t>(blob, "cols", 0);
  }
  if (spec.contains("file")) {
    return io::read_state(std::filesystem::path(spec.at("file").get<std::string>())).dim();
  }
  if (spec.contains("dim")) return spec.at("dim").get<std::size_t>();
  if (auto shape = shape_from(spec)) return shape->size();
  return std::nullopt;
}

LatentState build_state(const Json& spec, const StateContext& context) {
  if (!spec.is_object()) throw config_error("state spec must be an object");
  if (spec.contains("values")) {
    return LatentState(number_list(spec, "values"), get_or<double>(spec, "time", context.default_time),
                       shape_from(spec));
  }
  if (spec.contains("file")) return io::read_state(std::filesystem::path(spec.at("file").get<std::string>()));
  if (spec.contains("blob")) {
    const Json& blob = spec.at("blob");
    const GridShape shape(get_or<std::size_t>(blob, "rows", 0), get_or<std::size_t>(blob, "cols", 0));
    return make_blob_grid(shape, {get_or<double>(blob, "row", 0.0), get_or<double>(blob, "col", 0.0)},
                          get_or<double>(blob, "radius", 1.0), get_or<double>(blob, "amplitude", 1.0));
  }
  if (spec.contains("prior")) {
    PriorSampler sampler(spec.at("prior").get<std::uint64_t>());
    const auto d = state_dim(spec);
    if (!d) throw config_error("config is missing required key 'dim' for a prior state");
    return sample_prior(sampler, *d, shape_from(spec))
        .at_time(get_or<double>(spec, "time", context.default_time));
  }
  if (spec.contains("forward")) {
    if (context.field == nullptr || !context.grid) {
      throw config_error("a forward state needs a field and a grid");
    }
    PriorSampler sampler(get_or<std::uint64_t>(spec.at("forward"), "seed", 0));
    const LatentState x0 = sample_prior(sampler, context.field->dim(), shape_from(spec));
    return euler_sample(*context.field, x0, *context.grid, Condition::none()).final_state();
  }
  throw config_error("state spec needs one of 'values', 'file', 'blob', 'prior', 'forward'");
}

Mask build_mask(const Json& spec, std::optional<GridShape> shape, std::size_t dim) {
  if (spec.is_string()) return io::read_mask(std::filesystem::path(spec.get<std::string>()));
  if (!spec.is_object()) throw config_error("mask spec must be an object or a path");
  if (spec.contains("file")) return io::read_mask(std::filesystem::path(spec.at("file").get<std::string>()));
  if (spec.contains("values")) return Mask(number_list(spec, "values"), shape);
  if (spec.contains("box")) {
    if (!shape) throw config_error("a box mask needs a state with a grid shape");
    const Json& box = spec.at("box");
    return make_box_mask(*shape, get_or<std::size_t>(box, "top", 0), get_or<std::size_t>(box, "left", 0),
                         get_or<std::size_t>(box, "height", 0), get_or<std::size_t>(box, "width", 0));
  }
  if (get_or<bool>(spec, "ones", false)) return Mask::ones(dim, shape);
  if (get_or<bool>(spec, "zeros", false)) return Mask::zeros(dim, shape);
  throw config_error("mask spec needs one of 'file', 'values', 'box', 'ones', 'zeros'");
}

}  // namespace flowlab::config
