#pragma once

#include <nlohmann/json.hpp>

#include "foldscope/appearance.hpp"
#include "foldscope/classifier.hpp"
#include "foldscope/verification.hpp"

namespace foldscope {

inline nlohmann::json to_json(const AppearanceReport& r) {
  return {{"n", r.n},
          {"phi", r.phi_n},
          {"s", r.s_value},
          {"a", r.a_value},
          {"last_factor", r.last_factor.word.str()},
          {"first_start", r.last_factor.first_start},
          {"factor_count", r.factor_count},
          {"horizon", r.horizon_used}};
}

inline nlohmann::json to_json(const Counterexample& c) {
  nlohmann::json j = {{"instructions", c.instructions}, {"n", c.n}, {"details", c.details}};
  j["computed"] = c.computed ? nlohmann::json(*c.computed) : nlohmann::json(nullptr);
  j["expected"] = c.expected ? nlohmann::json(*c.expected) : nlohmann::json(nullptr);
  j["factor"] = c.factor.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.factor);
  return j;
}

/// One JSON-lines record per outcome.
inline nlohmann::json to_json(const VerificationOutcome& o) {
  nlohmann::json j = {{"claim", o.claim_id},
                      {"n_lo", o.n_lo},
                      {"n_hi", o.n_hi},
                      {"depth", o.instruction_depth},
                      {"mode", to_string(o.mode)},
                      {"cases", o.cases},
                      {"passed", o.passed()}};
  j["samples"] = o.mode == EnumerationMode::sampled ? nlohmann::json(o.samples) : nlohmann::json(nullptr);
  j["seed"] = o.seed ? nlohmann::json(*o.seed) : nlohmann::json(nullptr);
  j["counterexample"] = o.counterexample ? to_json(*o.counterexample) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const ClassifierTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, value] : t.rows) {
    nlohmann::json bits = nlohmann::json::array();
    for (Sign s : key) bits.push_back(to_int(s));
    rows.push_back({{"bits", bits}, {"s", value}});
  }
  return {{"n", t.n},
          {"depth", t.depth},
          {"relevant_bits", t.relevant_bits},
          {"rows", rows},
          {"value_set", t.value_set}};
}

}  // namespace foldscope
