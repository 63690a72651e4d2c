#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace primecoh {

struct Preset {
  std::string name;
  std::string description;
  nlohmann::json config;
};

namespace detail {

inline nlohmann::json preset_run(std::string id, nlohmann::json model, std::size_t n,
                                 nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json r{{"id", std::move(id)},
                   {"model", std::move(model)},
                   {"n", n},
                   {"delta0", 1.0},
                   {"normalization", "symmetric-normalized"},
                   {"order", "four"},
                   {"grid", {{"t_min", 1e-4}, {"t_max", 1e4}, {"count", 200}}},
                   {"fits", {{"alpha", false}, {"beta", false}, {"pcp", false}}},
                   {"seed", 1}};
  r.update(extra);
  return r;
}

}  // namespace detail

/// Built-in sweeps behind the standard figures and the plateau study.
inline std::vector<Preset> presets() {
  using nlohmann::json;
  using detail::preset_run;
  std::vector<Preset> out;

  out.push_back({"profiles-n500", "d_s profiles for the four prime divergences and the GUE kernel, n=500",
                 json{{"runs",
                       {preset_run("log-product", {{"kind", "log-product"}}, 500),
                        preset_run("log-ratio-squared", {{"kind", "log-ratio-squared"}}, 500),
                        preset_run("entropic", {{"kind", "entropic"}}, 500),
                        preset_run("index-power", {{"kind", "index-power"}, {"gamma", 2.0}}, 500),
                        preset_run("gue-kernel", {{"kind", "gue"}}, 500)}}}});

  out.push_back({"entropic-fit", "entropic-divergence profile with the four-parameter fit, n=500",
                 json{{"runs",
                       {preset_run("entropic-pcp", {{"kind", "entropic"}}, 500,
                                   {{"fits", {{"alpha", true}, {"beta", true}, {"pcp", true}}}})}}}});

  out.push_back(
      {"controls-n1000", "prime kernel vs 1D bi-Laplacian vs GUE kernel at n=1000",
       json{{"runs",
             {preset_run("prime-log-ratio-squared", {{"kind", "log-ratio-squared"}}, 1000,
                         {{"controls", {{"bilaplacian", true}, {"gue", true}, {"ks", true}}}}),
              preset_run("gue-kernel", {{"kind", "gue"}}, 1000)}}}});

  out.push_back({"kernels-n20", "20x20 coherence kernels for the log-ratio-squared and entropic divergences",
                 json{{"runs",
                       {preset_run("kernel-log-ratio-squared", {{"kind", "log-ratio-squared"}}, 20,
                                   {{"emit_kernel", true}}),
                        preset_run("kernel-entropic", {{"kind", "entropic"}}, 20,
                                   {{"emit_kernel", true}})}}}});

  json plateau = json::array();
  for (std::size_t n : {500, 1000, 2000}) {
    plateau.push_back(preset_run(
        "combinatorial-index-power-" + std::to_string(n), {{"kind", "index-power"}, {"gamma", 2.0}},
        n,
        {{"normalization", "combinatorial"},
         {"grid", {{"t_min", 1e-10}, {"t_max", 1e4}, {"count", 400}}},
         {"fits", {{"alpha", true}, {"beta", false}, {"pcp", false}}},
         {"controls", {{"bilaplacian", n == 2000}}}}));
  }
  out.push_back({"plateau-study", "H = L_c^2 peak d_s against n, with the bi-Laplacian control",
                 json{{"runs", plateau}}});
  return out;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  for (auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace primecoh
