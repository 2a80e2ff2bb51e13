#include "morl/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <json.hpp>

#include "morl/error.hpp"

namespace morl {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::Schema, "config field \"" + field + "\": " + what);
}

Json parse_document(std::string_view text, const char* what) {
  try {
    Json doc = Json::parse(text.begin(), text.end());
    if (!doc.is_object()) fail(ErrorCode::Schema, std::string(what) + " config must be a JSON object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, std::string(what) + " config: syntax error: " + e.what());
  }
}

using Handler = std::function<void(const Json&)>;

/// Applies one handler per present key and rejects keys without a handler.
void apply_fields(const Json& doc, const std::map<std::string, Handler>& handlers, const std::string& prefix) {
  for (const auto& [key, value] : doc.items()) {
    auto it = handlers.find(key);
    if (it == handlers.end()) field_error(prefix + key, "unknown field");
    it->second(value);
  }
}

double real_of(const Json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  field_error(field, "expected a number");
}

std::uint64_t count_of(const Json& v, const std::string& field) {
  if (!v.is_number_unsigned()) field_error(field, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_of(const Json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> reals_of(const Json& v, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real_of(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <typename T, typename F>
T enum_of(const Json& v, const std::string& field, F convert) {
  const auto name = string_of(v, field);
  try {
    return convert(name);
  } catch (const Error& e) {
    field_error(field, e.what());
  }
}

Json real_json(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

Json reals_json(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(real_json(v));
  return out;
}

UtilitySpec utility_from(const Json& doc, const std::string& prefix) {
  if (doc.is_string()) {
    // Shorthand: "paper-nonlinear".
    UtilitySpec spec;
    spec.kind = enum_of<UtilityKind>(doc, prefix + "kind", utility_kind_from_string);
    return spec;
  }
  if (!doc.is_object()) field_error(prefix.empty() ? "utility" : prefix.substr(0, prefix.size() - 1), "expected an object");
  UtilitySpec spec;
  if (!doc.contains("kind")) field_error(prefix + "kind", "missing");
  apply_fields(doc,
               {
                   {"kind", [&](const Json& v) { spec.kind = enum_of<UtilityKind>(v, prefix + "kind", utility_kind_from_string); }},
                   {"weights", [&](const Json& v) { spec.weights = reals_of(v, prefix + "weights"); }},
                   {"reference_point", [&](const Json& v) { spec.reference_point = reals_of(v, prefix + "reference_point"); }},
                   {"thresholds", [&](const Json& v) { spec.thresholds = reals_of(v, prefix + "thresholds"); }},
                   {"objective_order",
                    [&](const Json& v) {
                      if (!v.is_array()) field_error(prefix + "objective_order", "expected an array of indices");
                      spec.objective_order.clear();
                      for (const auto& i : v) spec.objective_order.push_back(count_of(i, prefix + "objective_order"));
                    }},
               },
               prefix);
  return spec;
}

Json utility_json(const UtilitySpec& spec) {
  Json out = Json::object();
  out["kind"] = std::string(to_string(spec.kind));
  switch (spec.kind) {
    case UtilityKind::Linear:
      out["weights"] = reals_json(spec.weights);
      break;
    case UtilityKind::Chebyshev:
      out["weights"] = reals_json(spec.weights);
      out["reference_point"] = reals_json(spec.reference_point);
      break;
    case UtilityKind::LexThreshold:
      out["thresholds"] = reals_json(spec.thresholds);
      out["objective_order"] = spec.objective_order;
      break;
    case UtilityKind::PaperNonlinear:
      break;
  }
  return out;
}

}  // namespace

UtilitySpec parse_utility_config(std::string_view json) {
  Json doc;
  try {
    doc = Json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("utility config: syntax error: ") + e.what());
  }
  return utility_from(doc, "utility.");
}

std::string utility_config_json(const UtilitySpec& spec) { return utility_json(spec).dump(); }

TrialConfig parse_trial_config(std::string_view json) {
  const Json doc = parse_document(json, "trial");
  TrialConfig c;
  AgentConfig& a = c.agent;
  apply_fields(doc,
               {
                   {"env", [&](const Json& v) { c.env = string_of(v, "env"); }},
                   {"alpha", [&](const Json& v) { a.alpha = real_of(v, "alpha"); }},
                   {"gamma", [&](const Json& v) { a.gamma = real_of(v, "gamma"); }},
                   {"lambda", [&](const Json& v) { a.lambda = real_of(v, "lambda"); }},
                   {"epsilon0", [&](const Json& v) { a.epsilon0 = real_of(v, "epsilon0"); }},
                   {"episodes", [&](const Json& v) { a.episodes = count_of(v, "episodes"); }},
                   {"q_init", [&](const Json& v) { a.q_init = RewardVector(reals_of(v, "q_init")); }},
                   {"utility", [&](const Json& v) { a.utility = utility_from(v, "utility."); }},
                   {"tie_break", [&](const Json& v) { a.tie_break = enum_of<TieBreak>(v, "tie_break", tie_break_from_string); }},
                   {"trace_mode", [&](const Json& v) { a.trace_mode = enum_of<TraceMode>(v, "trace_mode", trace_mode_from_string); }},
                   {"tol", [&](const Json& v) { a.tol = real_of(v, "tol"); }},
                   {"seed", [&](const Json& v) { c.seed = count_of(v, "seed"); }},
               },
               "");
  return c;
}

std::string trial_config_json(const TrialConfig& c) {
  Json out = Json::object();
  out["env"] = c.env;
  out["alpha"] = c.agent.alpha;
  out["gamma"] = c.agent.gamma;
  out["lambda"] = c.agent.lambda;
  out["epsilon0"] = c.agent.epsilon0;
  out["episodes"] = c.agent.episodes;
  out["q_init"] = c.agent.q_init.values();
  out["utility"] = utility_json(c.agent.utility);
  out["tie_break"] = std::string(to_string(c.agent.tie_break));
  out["trace_mode"] = std::string(to_string(c.agent.trace_mode));
  out["tol"] = c.agent.tol;
  out["seed"] = c.seed;
  return out.dump(2);
}

SweepConfig parse_sweep_config(std::string_view json) {
  const Json doc = parse_document(json, "sweep");
  SweepConfig c;
  apply_fields(doc,
               {
                   {"env", [&](const Json& v) { c.env = string_of(v, "env"); }},
                   {"alphas", [&](const Json& v) { c.alphas = reals_of(v, "alphas"); }},
                   {"epsilons", [&](const Json& v) { c.epsilons = reals_of(v, "epsilons"); }},
                   {"trials_per_cell", [&](const Json& v) { c.trials_per_cell = count_of(v, "trials_per_cell"); }},
                   {"episodes_per_trial", [&](const Json& v) { c.episodes_per_trial = count_of(v, "episodes_per_trial"); }},
                   {"lambda", [&](const Json& v) { c.lambda = real_of(v, "lambda"); }},
                   {"gamma", [&](const Json& v) { c.gamma = real_of(v, "gamma"); }},
                   {"q_init", [&](const Json& v) { c.q_init = RewardVector(reals_of(v, "q_init")); }},
                   {"utility", [&](const Json& v) { c.utility = utility_from(v, "utility."); }},
                   {"strategies",
                    [&](const Json& v) {
                      if (!v.is_array()) field_error("strategies", "expected an array of strategy names");
                      c.strategies.clear();
                      for (const auto& s : v) c.strategies.push_back(enum_of<TieBreak>(s, "strategies", tie_break_from_string));
                    }},
                   {"trace_mode", [&](const Json& v) { c.trace_mode = enum_of<TraceMode>(v, "trace_mode", trace_mode_from_string); }},
                   {"base_seed", [&](const Json& v) { c.base_seed = count_of(v, "base_seed"); }},
                   {"tol", [&](const Json& v) { c.tol = real_of(v, "tol"); }},
               },
               "");
  return c;
}

std::string sweep_config_json(const SweepConfig& c) {
  Json out = Json::object();
  out["env"] = c.env;
  out["alphas"] = c.alphas;
  out["epsilons"] = c.epsilons;
  out["trials_per_cell"] = c.trials_per_cell;
  out["episodes_per_trial"] = c.episodes_per_trial;
  out["lambda"] = c.lambda;
  out["gamma"] = c.gamma;
  out["q_init"] = c.q_init.values();
  out["utility"] = utility_json(c.utility);
  Json strategies = Json::array();
  for (TieBreak s : c.strategies) strategies.push_back(std::string(to_string(s)));
  out["strategies"] = strategies;
  out["trace_mode"] = std::string(to_string(c.trace_mode));
  out["base_seed"] = c.base_seed;
  out["tol"] = c.tol;
  return out.dump(2);
}

BanditConfig parse_bandit_config(std::string_view json) {
  const Json doc = parse_document(json, "bandit");
  BanditConfig c;
  apply_fields(doc,
               {
                   {"env", [&](const Json& v) { c.env = string_of(v, "env"); }},
                   {"criterion", [&](const Json& v) { c.criterion = enum_of<Criterion>(v, "criterion", criterion_from_string); }},
                   {"warmup", [&](const Json& v) { c.warmup = count_of(v, "warmup"); }},
                   {"pulls", [&](const Json& v) { c.pulls = count_of(v, "pulls"); }},
                   {"utility", [&](const Json& v) { c.utility = utility_from(v, "utility."); }},
                   {"tie_break", [&](const Json& v) { c.tie_break = enum_of<TieBreak>(v, "tie_break", tie_break_from_string); }},
                   {"tol", [&](const Json& v) { c.tol = real_of(v, "tol"); }},
                   {"seed", [&](const Json& v) { c.seed = count_of(v, "seed"); }},
               },
               "");
  return c;
}

std::string bandit_config_json(const BanditConfig& c) {
  Json out = Json::object();
  out["env"] = c.env;
  out["criterion"] = std::string(to_string(c.criterion));
  out["warmup"] = c.warmup;
  out["pulls"] = c.pulls;
  out["utility"] = utility_json(c.utility);
  out["tie_break"] = std::string(to_string(c.tie_break));
  out["tol"] = c.tol;
  out["seed"] = c.seed;
  return out.dump(2);
}

}  // namespace morl
