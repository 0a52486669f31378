#pragma once

// JSON mappings for the value types that appear in reports.

#include <cmath>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "mgraph/algos.hpp"
#include "mgraph/genmodel.hpp"
#include "mgraph/oracle.hpp"
#include "mgraph/properties.hpp"
#include "mgraph/theory.hpp"

namespace mgraph {

using json = nlohmann::ordered_json;

namespace detail {
/// NaN and infinities have no JSON spelling; they become null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json number_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }
}  // namespace detail

inline void to_json(json& j, const ModelSpec& s) {
  j = json{{"kind", to_string(s.kind)}, {"n", s.n}, {"beta", s.beta}, {"weight_mode", to_string(s.weight_mode)}, {"seed", s.seed}};
}

inline void from_json(const json& j, ModelSpec& s) {
  static const std::set<std::string> known = {"kind", "n", "beta", "weight_mode", "seed"};
  if (!j.is_object()) throw Error("model spec: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw Error("model spec: unknown field '" + it.key() + "'");
  for (const char* key : {"kind", "n", "beta", "seed"})
    if (!j.contains(key)) throw Error(std::string("model spec: missing field '") + key + "'");
  s.kind = parse_model_kind(j.at("kind").get<std::string>());
  s.n = j.at("n").get<std::size_t>();
  s.beta = j.at("beta").get<double>();
  s.weight_mode = j.contains("weight_mode") ? parse_weight_mode(j.at("weight_mode").get<std::string>())
                                            : WeightMode::DeterministicQuantile;
  s.seed = j.at("seed").get<std::uint64_t>();
}

inline void to_json(json& j, const Prediction& p) {
  using detail::number_or_null;
  j = json{{"beta", p.beta},
           {"n", p.n},
           {"regime", to_string(p.regime)},
           {"q", number_or_null(p.q)},
           {"eta1", number_or_null(p.eta1)},
           {"M1_mu", number_or_null(p.M1_mu)},
           {"d_avg_tilde", number_or_null(p.d_avg_tilde)},
           {"c", number_or_null(p.c)},
           {"c_exponent", number_or_null(p.c_exponent)},
           {"diameter_pred", number_or_null(p.diameter_pred)},
           {"diameter_pred_alt", number_or_null(p.diameter_pred_alt)},
           {"avg_dist_low", number_or_null(p.avg_dist_low)},
           {"avg_dist_high", number_or_null(p.avg_dist_high)},
           {"C", number_or_null(p.C)}};
  if (p.diameter_pred_alt)
    j["note"] = "diameter_pred is the closed-form value for this regime; diameter_pred_alt evaluates the general diameter formula with the same constants; the two disagree when 1 < beta < 2";
  json tt = json::array();
  for (double x : {0.25, 0.5, 0.75})
    for (double d : {1.0, 2.0, 3.0, 10.0, 100.0}) tt.push_back({{"d", d}, {"x", x}, {"value", number_or_null(p.t_tilde(d, x))}});
  j["t_tilde"] = tt;
}

inline void to_json(json& j, const AlgoResult& r) {
  j = json{{"algo", r.algo},   {"value", r.value},
           {"witnesses", r.witnesses}, {"bfs_count", r.bfs_count},
           {"wall_time_ms", r.wall_time_ms}, {"params", r.params},
           {"seed", r.seed}};
}

inline void to_json(json& j, const TopKEntry& e) { j = json{{"vertex", e.vertex}, {"farness", e.farness}}; }

inline void to_json(json& j, const TopKResult& r) {
  j = json{{"entries", r.entries}, {"bfs_count", r.bfs_count}, {"pruned", r.pruned},
           {"visited", r.visited},  {"wall_time_ms", r.wall_time_ms}};
}

inline void to_json(json& j, const LabelStats& s) {
  j = json{{"avg_label_size", s.avg_label_size}, {"max_label_size", s.max_label_size},
           {"total_entries", s.total_entries},   {"estimated_bytes", s.estimated_bytes}};
}

inline void to_json(json& j, const Verdict& v) {
  j = json{{"name", v.name}, {"pass", v.pass}, {"observed", detail::number_or_null(v.observed)},
           {"threshold", detail::number_or_null(v.threshold)}};
}

inline void to_json(json& j, const PropertyReport& r) {
  json hist = json::object();
  for (auto [k, c] : r.histogram) hist[std::to_string(k)] = c;
  json values = json::object();
  for (auto& [k, v] : r.values) values[k] = detail::number_or_null(v);
  j = json{{"property_id", r.property_id},
           {"parameters", r.parameters},
           {"seed", r.seed},
           {"sample_size", r.sample_size},
           {"histogram", hist},
           {"rejected", r.rejected},
           {"values", values},
           {"verdicts", r.verdicts},
           {"pass", r.pass()}};
  if (r.note) j["note"] = *r.note;
}

}  // namespace mgraph
