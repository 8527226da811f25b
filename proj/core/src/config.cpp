#include "ovkron/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ovkron {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "ovkron-model/1";

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!required.contains(item.key()) && !optional.contains(item.key()))
      throw ConfigError(where + ": unknown field '" + item.key() + "'");
  }
  for (const auto& k : required)
    if (!j.contains(k))
      throw ConfigError(where + ": missing field '" + k + "'");
}

ScalarMeasure parse_measure(const json& j, const std::string& where) {
  require_keys(j, {"type"}, {"atoms", "n_atoms"}, where);
  std::string type = j.at("type").get<std::string>();
  if (type == "atoms") {
    if (!j.contains("atoms"))
      throw ConfigError(where + ": measure of type 'atoms' needs 'atoms'");
    std::vector<ScalarMeasure::Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2)
        throw ConfigError(where + ": atoms must be [location, weight] pairs");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    try {
      return ScalarMeasure::from_atoms(std::move(atoms));
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (type == "uniform01") {
    if (!j.contains("n_atoms"))
      throw ConfigError(where + ": measure of type 'uniform01' needs 'n_atoms'");
    return discretize_uniform01(j.at("n_atoms").get<int>());
  }
  throw ConfigError(where + ": unknown measure type '" + type + "'");
}

std::vector<ScalarMeasure> parse_measures(const json& j, Eigen::Index count,
                                          const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != count)
    throw ConfigError(where + ": expected an array of " +
                      std::to_string(count) + " measures");
  std::vector<ScalarMeasure> out;
  Eigen::Index i = 0;
  for (const auto& m : j)
    out.push_back(parse_measure(m, where + "[" + std::to_string(i++) + "]"));
  return out;
}

json measure_to_json(const ScalarMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({a.location, a.weight});
  return json{{"type", "atoms"}, {"atoms", atoms}};
}

}  // namespace

ModelSpec parse_model_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  require_keys(j, {"schema", "n_r", "n_t", "r_measures", "t_measures",
                   "covariance"},
               {"gamma"}, "config");
  if (j.at("schema").get<std::string>() != kSchema)
    throw ConfigError("config: unsupported schema '" +
                      j.at("schema").get<std::string>() + "'");

  ModelSpec spec;
  spec.n_r = j.at("n_r").get<Eigen::Index>();
  spec.n_t = j.at("n_t").get<Eigen::Index>();
  if (spec.n_r < 1 || spec.n_t < 1)
    throw ConfigError("config: n_r and n_t must be positive");
  spec.gamma = j.value("gamma", 1.0);
  spec.r2 = parse_measures(j.at("r_measures"), spec.n_r, "config.r_measures");
  spec.t2 = parse_measures(j.at("t_measures"), spec.n_t, "config.t_measures");

  const json& cov = j.at("covariance");
  require_keys(cov, {}, {"blocks", "entry_variances"}, "config.covariance");
  bool has_blocks = cov.contains("blocks");
  bool has_entry = cov.contains("entry_variances");
  if (has_blocks == has_entry)
    throw ConfigError(
        "config.covariance: exactly one of 'blocks' or 'entry_variances' "
        "required");

  Eigen::Index n = std::max(spec.n_r, spec.n_t);
  if (has_blocks) {
    std::vector<CovarianceBlock> blocks;
    Eigen::Index bi = 0;
    for (const auto& bj : cov.at("blocks")) {
      std::string where = "config.covariance.blocks[" + std::to_string(bi++) + "]";
      require_keys(bj, {"variance", "diagonal", "permutation"}, {}, where);
      CovarianceBlock b;
      b.variance = bj.at("variance").get<double>();
      const auto& dj = bj.at("diagonal");
      const auto& pj = bj.at("permutation");
      if (!dj.is_array() || static_cast<Eigen::Index>(dj.size()) != n)
        throw ConfigError(where + ": diagonal must have length max(n_r, n_t)");
      if (!pj.is_array() || static_cast<Eigen::Index>(pj.size()) != n)
        throw ConfigError(where + ": permutation must have length max(n_r, n_t)");
      b.diag.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) b.diag[i] = dj[i].get<double>();
      for (const auto& p : pj) b.perm.push_back(p.get<Eigen::Index>());
      try {
        inverse_permutation(b.perm);
      } catch (const Error&) {
        throw ConfigError(where + ": permutation is not a permutation of 0..n-1");
      }
      blocks.push_back(std::move(b));
    }
    if (blocks.empty())
      throw ConfigError("config.covariance.blocks: must be nonempty");
    spec.blocks = std::move(blocks);
  } else {
    const auto& ev = cov.at("entry_variances");
    if (!ev.is_array() || static_cast<Eigen::Index>(ev.size()) != spec.n_r)
      throw ConfigError("config.covariance.entry_variances: expected n_r rows");
    RealMatrix sv(spec.n_r, spec.n_t);
    for (Eigen::Index k = 0; k < spec.n_r; ++k) {
      const auto& row = ev[k];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != spec.n_t)
        throw ConfigError(
            "config.covariance.entry_variances: row " + std::to_string(k) +
            " must have n_t entries");
      for (Eigen::Index l = 0; l < spec.n_t; ++l)
        sv(k, l) = row[l].get<double>();
    }
    spec.entry_variances = std::move(sv);
  }
  return spec;
}

ModelSpec load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

namespace {

json normalized_json(const ChannelModel& model) {
  json j;
  j["schema"] = kSchema;
  j["n_r"] = model.n_r;
  j["n_t"] = model.n_t;
  j["gamma"] = 1.0;  // folded into the block variances
  json rm = json::array(), tm = json::array();
  for (Eigen::Index k = 0; k < model.n_r; ++k)
    rm.push_back(measure_to_json(model.r2[static_cast<size_t>(k)]));
  for (Eigen::Index k = 0; k < model.n_t; ++k)
    tm.push_back(measure_to_json(model.t2[static_cast<size_t>(k)]));
  j["r_measures"] = rm;
  j["t_measures"] = tm;
  json blocks = json::array();
  for (const auto& b : model.blocks) {
    json bj;
    bj["variance"] = b.variance;
    bj["diagonal"] = std::vector<double>(b.diag.data(), b.diag.data() + b.diag.size());
    bj["permutation"] = b.perm;
    blocks.push_back(bj);
  }
  j["covariance"] = json{{"blocks", blocks}};
  return j;
}

}  // namespace

std::string dump_normalized(const ChannelModel& model) {
  return normalized_json(model).dump(2) + "\n";
}

std::string normalized_params_line(const ChannelModel& model) {
  return normalized_json(model).dump();
}

}  // namespace ovkron
