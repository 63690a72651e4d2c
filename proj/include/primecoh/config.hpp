#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "primecoh/divergence.hpp"
#include "primecoh/fits.hpp"
#include "primecoh/operators.hpp"

namespace primecoh {

using json = nlohmann::json;

struct GridConfig {
  double t_min = 1e-4;
  double t_max = 1e4;
  std::size_t count = 200;
};

struct FitFlags {
  bool alpha = true;
  bool beta = true;
  bool pcp = true;
  std::optional<IndexWindow> alpha_window;
  double beta_lo = kDefaultEntropyWindowLo;
  double beta_hi = kDefaultEntropyWindowHi;
};

struct ControlFlags {
  bool gue = false;
  bool bilaplacian = false;
  bool ks = false;
};

/// One cell of a sweep. `model` is a divergence kind name or "gue", the
/// latter meaning an external divergence built from a GUE draw seeded by
/// `seed`.
struct RunConfig {
  std::string id;
  std::string model = "entropic";
  double gamma = 1.0;
  bool literal_diagonal = false;
  std::vector<double> external_values;
  double external_spacing = 1.0;
  std::size_t n = 0;
  double delta0 = 1.0;
  OperatorSpec spec;
  GridConfig grid;
  FitFlags fits;
  ControlFlags controls;
  std::uint64_t seed = 0;
  bool emit_kernel = false;
};

struct ExperimentConfig {
  std::vector<RunConfig> runs;
};

/// Raised for malformed or invalid configs; carries every diagnostic found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  [[nodiscard]] const std::vector<std::string>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  static std::string join(const std::vector<std::string>& d) {
    std::string s;
    for (const auto& line : d) s += line + '\n';
    return s;
  }
  std::vector<std::string> diagnostics_;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

/// Accumulates "<where>: <what>" diagnostics while reading one run.
class RunReader {
 public:
  RunReader(const json& obj, std::size_t index, std::vector<std::string>& out)
      : obj_(obj), index_(index), out_(out) {
    if (obj.is_object() && obj.contains("id") && obj["id"].is_string())
      label_ = "run '" + obj["id"].get<std::string>() + "'";
    else
      label_ = "run #" + std::to_string(index);
  }

  void error(const std::string& field, const std::string& what) {
    out_.push_back(label_ + " (/runs/" + std::to_string(index_) + field + "): " + what);
  }

  const json* find(const json& parent, const char* key) {
    auto it = parent.find(key);
    return it == parent.end() ? nullptr : &*it;
  }

  template <class T>
  void number(const json& parent, const std::string& prefix, const char* key, T& into,
              bool required = false) {
    const json* v = find(parent, key);
    if (!v) {
      if (required) error(prefix + "/" + key, "missing required field");
      return;
    }
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_unsigned()) {
        error(prefix + "/" + key, "must be a nonnegative integer");
        return;
      }
    } else if (!v->is_number()) {
      error(prefix + "/" + key, "must be a number");
      return;
    }
    into = v->get<T>();
  }

  void boolean(const json& parent, const std::string& prefix, const char* key, bool& into) {
    const json* v = find(parent, key);
    if (!v) return;
    if (!v->is_boolean()) {
      error(prefix + "/" + key, "must be true or false");
      return;
    }
    into = v->get<bool>();
  }

  void string(const json& parent, const std::string& prefix, const char* key, std::string& into,
              bool required = false) {
    const json* v = find(parent, key);
    if (!v) {
      if (required) error(prefix + "/" + key, "missing required field");
      return;
    }
    if (!v->is_string()) {
      error(prefix + "/" + key, "must be a string");
      return;
    }
    into = v->get<std::string>();
  }

  const json* object(const json& parent, const std::string& prefix, const char* key,
                     bool required = false) {
    const json* v = find(parent, key);
    if (!v) {
      if (required) error(prefix + "/" + key, "missing required field");
      return nullptr;
    }
    if (!v->is_object()) {
      error(prefix + "/" + key, "must be an object");
      return nullptr;
    }
    return v;
  }

  const json& obj() const { return obj_; }

 private:
  const json& obj_;
  std::size_t index_;
  std::vector<std::string>& out_;
  std::string label_;
};

inline bool known_model(const std::string& m) {
  return m == "gue" || parse_divergence_kind(m).has_value();
}

inline RunConfig read_run(const json& j, std::size_t index, std::vector<std::string>& diag) {
  RunReader rd(j, index, diag);
  RunConfig rc;
  if (!j.is_object()) {
    rd.error("", "must be an object");
    return rc;
  }
  static const std::set<std::string> known{"id",   "model", "n",        "delta0",
                                           "normalization", "order", "grid", "fits",
                                           "controls", "seed",  "emit_kernel"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) rd.error("/" + key, "unknown field");

  rd.string(j, "", "id", rc.id, true);
  if (j.contains("id") && j["id"].is_string()) {
    static const std::regex safe("[A-Za-z0-9._-]+");
    if (!std::regex_match(rc.id, safe) || rc.id == "." || rc.id == "..")
      rd.error("/id", "must be nonempty and use only letters, digits, '.', '_' or '-'");
  }

  if (const json* m = rd.object(j, "", "model", true)) {
    rd.string(*m, "/model", "kind", rc.model, true);
    if (m->contains("kind") && !known_model(rc.model))
      rd.error("/model/kind", "unknown divergence model '" + rc.model + "'");
    rd.number(*m, "/model", "gamma", rc.gamma);
    rd.boolean(*m, "/model", "literal_diagonal", rc.literal_diagonal);
    if (rc.model == "index-power") {
      if (!m->contains("gamma")) rd.error("/model/gamma", "index-power requires gamma");
      else if (!(rc.gamma > 0.0) || !std::isfinite(rc.gamma)) rd.error("/model/gamma", "must be > 0");
    }
    if (rc.model == "external") {
      const json* v = rd.find(*m, "values");
      if (!v || !v->is_array()) {
        rd.error("/model/values", "external model requires a values array");
      } else {
        for (const auto& x : *v) {
          if (!x.is_number()) {
            rd.error("/model/values", "must contain only numbers");
            break;
          }
          rc.external_values.push_back(x.get<double>());
        }
      }
      rd.number(*m, "/model", "spacing", rc.external_spacing);
      if (!(rc.external_spacing > 0.0)) rd.error("/model/spacing", "must be > 0");
    } else if (m->contains("values")) {
      rd.error("/model/values", "values are only accepted by the external model");
    }
  }

  rd.number(j, "", "n", rc.n, true);
  if (j.contains("n") && rc.n < 1) rd.error("/n", "must be >= 1");
  if (rc.n > 10000) rd.error("/n", "must be <= 10000 (dense eigensolver)");
  if (rc.model == "external" && !rc.external_values.empty() && rc.external_values.size() != rc.n)
    rd.error("/model/values", "length must equal n");

  rd.number(j, "", "delta0", rc.delta0);
  if (!(rc.delta0 > 0.0) || !std::isfinite(rc.delta0)) rd.error("/delta0", "must be > 0");

  std::string norm = std::string(to_string(rc.spec.normalization));
  rd.string(j, "", "normalization", norm);
  if (norm == "symmetric-normalized") rc.spec.normalization = Normalization::SymmetricNormalized;
  else if (norm == "combinatorial") rc.spec.normalization = Normalization::Combinatorial;
  else rd.error("/normalization", "must be 'symmetric-normalized' or 'combinatorial'");

  std::string order = std::string(to_string(rc.spec.order));
  rd.string(j, "", "order", order);
  if (order == "two") rc.spec.order = Order::Two;
  else if (order == "four") rc.spec.order = Order::Four;
  else rd.error("/order", "must be 'two' or 'four'");

  if (const json* g = rd.object(j, "", "grid")) {
    rd.number(*g, "/grid", "t_min", rc.grid.t_min);
    rd.number(*g, "/grid", "t_max", rc.grid.t_max);
    rd.number(*g, "/grid", "count", rc.grid.count);
  }
  if (!(rc.grid.t_min > 0.0)) rd.error("/grid/t_min", "must be > 0");
  if (!(rc.grid.t_max > rc.grid.t_min)) rd.error("/grid/t_max", "must exceed t_min");
  if (rc.grid.count < 3) rd.error("/grid/count", "must be >= 3");

  if (const json* f = rd.object(j, "", "fits")) {
    rd.boolean(*f, "/fits", "alpha", rc.fits.alpha);
    rd.boolean(*f, "/fits", "beta", rc.fits.beta);
    rd.boolean(*f, "/fits", "pcp", rc.fits.pcp);
    if (const json* w = rd.find(*f, "alpha_window")) {
      if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number_unsigned() ||
          !(*w)[1].is_number_unsigned()) {
        rd.error("/fits/alpha_window", "must be [first, last] 1-based indices");
      } else {
        IndexWindow iw{(*w)[0].get<std::size_t>(), (*w)[1].get<std::size_t>()};
        if (iw.first < 1 || iw.first > iw.last || iw.last > rc.n)
          rd.error("/fits/alpha_window", "must satisfy 1 <= first <= last <= n");
        rc.fits.alpha_window = iw;
      }
    }
    if (const json* w = rd.find(*f, "beta_window")) {
      if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number()) {
        rd.error("/fits/beta_window", "must be [t_lo, t_hi]");
      } else {
        rc.fits.beta_lo = (*w)[0].get<double>();
        rc.fits.beta_hi = (*w)[1].get<double>();
        if (!(rc.fits.beta_lo > 0.0 && rc.fits.beta_lo < rc.fits.beta_hi && rc.fits.beta_hi < 1.0))
          rd.error("/fits/beta_window", "must satisfy 0 < t_lo < t_hi < 1");
      }
    }
  }

  if (const json* c = rd.object(j, "", "controls")) {
    rd.boolean(*c, "/controls", "gue", rc.controls.gue);
    rd.boolean(*c, "/controls", "bilaplacian", rc.controls.bilaplacian);
    rd.boolean(*c, "/controls", "ks", rc.controls.ks);
  }
  if (rc.model == "gue" && rc.n < 2) rd.error("/n", "gue model requires n >= 2");
  if (rc.controls.gue && rc.n < 2) rd.error("/n", "gue control requires n >= 2");
  if (rc.controls.bilaplacian && rc.n < 2) rd.error("/n", "bilaplacian control requires n >= 2");
  if (rc.controls.ks && rc.n < 50) rd.error("/n", "ks control requires n >= 50");
  if (rc.controls.gue && rc.n < 50)
    rd.error("/n", "gue control spacing statistics require n >= 50");

  rd.number(j, "", "seed", rc.seed);
  rd.boolean(j, "", "emit_kernel", rc.emit_kernel);
  return rc;
}

}  // namespace detail

/// Parses and validates; throws ConfigError listing every problem found.
/// Syntax errors are reported as line:column, semantic ones by JSON pointer.
inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "config") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError({source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": syntax error: " + e.what()});
  }
  std::vector<std::string> diag;
  ExperimentConfig cfg;
  if (!doc.is_object() || !doc.contains("runs") || !doc["runs"].is_array()) {
    throw ConfigError({source + ": top level must be an object with a 'runs' array"});
  }
  for (const auto& [key, _] : doc.items())
    if (key != "runs") diag.push_back(source + ": /" + key + ": unknown top-level field");
  if (doc["runs"].empty()) diag.push_back(source + ": /runs: must contain at least one run");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc["runs"].size(); ++i) {
    auto rc = detail::read_run(doc["runs"][i], i, diag);
    if (!rc.id.empty() && !ids.insert(rc.id).second)
      diag.push_back("run '" + rc.id + "' (/runs/" + std::to_string(i) + "/id): duplicate run id");
    cfg.runs.push_back(std::move(rc));
  }
  if (!diag.empty()) {
    for (auto& d : diag)
      if (d.rfind(source, 0) != 0) d = source + ": " + d;
    throw ConfigError(std::move(diag));
  }
  return cfg;
}

/// The effective configuration of one run, defaults filled in.
inline json to_json(const RunConfig& rc) {
  json model{{"kind", rc.model}};
  if (rc.model == "index-power") model["gamma"] = rc.gamma;
  if (rc.model == "log-product") model["literal_diagonal"] = rc.literal_diagonal;
  if (rc.model == "external") {
    model["values"] = rc.external_values;
    model["spacing"] = rc.external_spacing;
  }
  json fits{{"alpha", rc.fits.alpha},
            {"beta", rc.fits.beta},
            {"pcp", rc.fits.pcp},
            {"beta_window", {rc.fits.beta_lo, rc.fits.beta_hi}}};
  if (rc.fits.alpha_window)
    fits["alpha_window"] = {rc.fits.alpha_window->first, rc.fits.alpha_window->last};
  return json{{"id", rc.id},
              {"model", model},
              {"n", rc.n},
              {"delta0", rc.delta0},
              {"normalization", std::string(to_string(rc.spec.normalization))},
              {"order", std::string(to_string(rc.spec.order))},
              {"grid", {{"t_min", rc.grid.t_min}, {"t_max", rc.grid.t_max}, {"count", rc.grid.count}}},
              {"fits", fits},
              {"controls",
               {{"gue", rc.controls.gue},
                {"bilaplacian", rc.controls.bilaplacian},
                {"ks", rc.controls.ks}}},
              {"seed", rc.seed},
              {"emit_kernel", rc.emit_kernel}};
}

inline json to_json(const ExperimentConfig& cfg) {
  json runs = json::array();
  for (const auto& r : cfg.runs) runs.push_back(to_json(r));
  return json{{"runs", runs}};
}

}  // namespace primecoh
