#include "morl/momdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "morl/error.hpp"

namespace morl {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kProbabilityTolerance = 1e-12;

std::string location_of(const std::string& state, const std::string& action) {
  return "transitions/" + state + "/" + action;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::Schema, "schema error at " + where + ": " + what);
}

const Json& require(const Json& object, const char* key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double as_number(const Json& value, const std::string& where) {
  if (!value.is_number()) schema_error(where, "expected a number");
  return value.get<double>();
}

std::string as_string(const Json& value, const std::string& where) {
  if (!value.is_string()) schema_error(where, "expected a string");
  return value.get<std::string>();
}

RewardVector as_reward(const Json& value, const std::string& where) {
  if (!value.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> values;
  values.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    values.push_back(as_number(value[i], where + "/" + std::to_string(i)));
  }
  return RewardVector(std::move(values));
}

std::vector<std::string> as_string_list(const Json& value, const std::string& where) {
  if (!value.is_array()) schema_error(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_string(value[i], where + "/" + std::to_string(i)));
  }
  return out;
}

Json reward_json(const RewardVector& r) {
  Json out = Json::array();
  for (double v : r) out.push_back(v);
  return out;
}

MomdpSpec fig1_spec() {
  MomdpSpec spec;
  spec.name = "fig1-deterministic";
  spec.n_objectives = 3;
  spec.states = {"A", "B", "C", "T1", "T2", "T3", "T4"};
  spec.terminals = {"T1", "T2", "T3", "T4"};
  spec.initial = {{1.0, "A"}};
  spec.point_start = true;
  const RewardVector zero{0.0, 0.0, 0.0};
  spec.transitions = {
      {"A", {{"a1", {{1.0, "B", zero}}}, {"a2", {{1.0, "C", zero}}}}},
      {"B", {{"a1", {{1.0, "T1", {7.0, -1.0, -5.0}}}}, {"a2", {{1.0, "T2", {7.0, -5.0, -1.0}}}}}},
      {"C", {{"a1", {{1.0, "T3", {8.0, -3.0, -3.0}}}}, {"a2", {{1.0, "T4", {0.0, -5.0, -5.0}}}}}},
  };
  return spec;
}

MomdpSpec fig3_spec() {
  MomdpSpec spec;
  spec.name = "fig3-bandit";
  spec.n_objectives = 3;
  spec.states = {"S", "T1", "T2", "T3"};
  spec.terminals = {"T1", "T2", "T3"};
  spec.initial = {{1.0, "S"}};
  spec.point_start = true;
  spec.transitions = {
      {"S",
       {{"a1", {{0.5, "T1", {7.0, -1.0, -5.0}}, {0.5, "T2", {7.0, -5.0, -1.0}}}},
        {"a2", {{1.0, "T3", {8.0, -3.0, -3.0}}}}}},
  };
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate_momdp(const MomdpSpec& spec) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string invariant, std::string location, std::string message) {
    out.push_back({std::move(invariant), std::move(location), std::move(message)});
  };

  if (spec.n_objectives == 0) report("n-objectives", "n_objectives", "objective count must be positive");

  std::set<std::string> declared;
  for (const auto& s : spec.states) {
    if (!declared.insert(s).second) report("duplicate-state", "states", "state \"" + s + "\" declared twice");
  }
  std::set<std::string> terminals;
  for (const auto& t : spec.terminals) {
    if (!declared.contains(t)) report("dangling-state", "terminals", "terminal \"" + t + "\" is not a declared state");
    terminals.insert(t);
  }

  if (spec.initial.empty()) report("initial", "initial", "start distribution is empty");
  double start_mass = 0.0;
  for (const auto& entry : spec.initial) {
    if (!declared.contains(entry.state)) {
      report("dangling-state", "initial", "initial state \"" + entry.state + "\" is not a declared state");
    }
    if (!(entry.probability > 0.0 && entry.probability <= 1.0)) {
      report("probability-range", "initial", "start probability must lie in (0,1]");
    }
    start_mass += entry.probability;
  }
  if (!spec.initial.empty() && std::abs(start_mass - 1.0) > kProbabilityTolerance) {
    report("probability-sum", "initial", "start probabilities sum to " + format_double(start_mass));
  }

  std::set<std::string> with_transitions;
  for (const auto& st : spec.transitions) {
    const std::string where = "transitions/" + st.state;
    if (!declared.contains(st.state)) {
      report("dangling-state", where, "state \"" + st.state + "\" is not a declared state");
    }
    if (!with_transitions.insert(st.state).second) {
      report("duplicate-state", where, "transitions for \"" + st.state + "\" listed twice");
    }
    if (terminals.contains(st.state)) {
      report("terminal-outcomes", where, "terminal state \"" + st.state + "\" has outgoing outcomes");
    }
    if (st.actions.empty() && !terminals.contains(st.state)) {
      report("missing-actions", where, "non-terminal state \"" + st.state + "\" has no actions");
    }
    std::set<std::string> action_names;
    for (const auto& act : st.actions) {
      const std::string loc = location_of(st.state, act.action);
      if (!action_names.insert(act.action).second) {
        report("duplicate-action", loc, "action \"" + act.action + "\" listed twice");
      }
      if (act.outcomes.empty()) report("missing-outcomes", loc, "action has no outcomes");
      double mass = 0.0;
      for (std::size_t i = 0; i < act.outcomes.size(); ++i) {
        const auto& o = act.outcomes[i];
        const std::string oloc = loc + "/" + std::to_string(i);
        if (!(o.probability > 0.0 && o.probability <= 1.0)) {
          report("probability-range", oloc, "probability " + format_double(o.probability) + " outside (0,1]");
        }
        mass += o.probability;
        if (!declared.contains(o.next_state)) {
          report("dangling-state", oloc, "next state \"" + o.next_state + "\" is not a declared state");
        }
        if (o.reward.size() != spec.n_objectives) {
          report("reward-arity", oloc,
                 "reward has " + std::to_string(o.reward.size()) + " entries, expected " +
                     std::to_string(spec.n_objectives));
        } else if (!o.reward.is_finite()) {
          report("non-finite-reward", oloc, "reward contains a non-finite entry");
        }
      }
      if (!act.outcomes.empty() && std::abs(mass - 1.0) > kProbabilityTolerance) {
        report("probability-sum", loc,
               "outcome probabilities for (" + st.state + ", " + act.action + ") sum to " + format_double(mass));
      }
    }
  }

  for (const auto& s : spec.states) {
    if (!terminals.contains(s) && !with_transitions.contains(s)) {
      report("missing-actions", "transitions/" + s, "non-terminal state \"" + s + "\" has no transitions");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON document
// ---------------------------------------------------------------------------

MomdpSpec parse_momdp_unvalidated(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) schema_error("/", "expected a JSON object");

  MomdpSpec spec;
  spec.name = as_string(require(doc, "name", "/"), "/name");
  const Json& n = require(doc, "n_objectives", "/");
  if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) {
    schema_error("/n_objectives", "expected a positive integer");
  }
  spec.n_objectives = n.get<std::size_t>();
  spec.states = as_string_list(require(doc, "states", "/"), "/states");
  spec.terminals = as_string_list(require(doc, "terminals", "/"), "/terminals");

  const Json& initial = require(doc, "initial", "/");
  if (initial.is_string()) {
    spec.initial = {{1.0, initial.get<std::string>()}};
    spec.point_start = true;
  } else if (initial.is_array()) {
    spec.point_start = false;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      const std::string where = "/initial/" + std::to_string(i);
      const Json& entry = initial[i];
      if (!entry.is_array() || entry.size() != 2) schema_error(where, "expected [probability, state]");
      spec.initial.push_back({as_number(entry[0], where + "/0"), as_string(entry[1], where + "/1")});
    }
  } else {
    schema_error("/initial", "expected a state name or a list of [probability, state]");
  }

  const Json& transitions = require(doc, "transitions", "/");
  if (!transitions.is_object()) schema_error("/transitions", "expected an object");
  for (const auto& [state, actions] : transitions.items()) {
    const std::string swhere = "/transitions/" + state;
    if (!actions.is_object()) schema_error(swhere, "expected an object of actions");
    StateTransitions st{state, {}};
    for (const auto& [action, outcomes] : actions.items()) {
      const std::string awhere = swhere + "/" + action;
      if (!outcomes.is_array()) schema_error(awhere, "expected a list of outcomes");
      ActionOutcomes act{action, {}};
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string owhere = awhere + "/" + std::to_string(i);
        const Json& o = outcomes[i];
        if (!o.is_array() || o.size() != 3) schema_error(owhere, "expected [probability, next_state, reward]");
        act.outcomes.push_back(
            {as_number(o[0], owhere + "/0"), as_string(o[1], owhere + "/1"), as_reward(o[2], owhere + "/2")});
      }
      st.actions.push_back(std::move(act));
    }
    spec.transitions.push_back(std::move(st));
  }
  return spec;
}

MomdpSpec parse_momdp(std::string_view document) {
  MomdpSpec spec = parse_momdp_unvalidated(document);
  auto diagnostics = validate_momdp(spec);
  if (!diagnostics.empty()) {
    std::string msg = "schema error: ";
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
      if (i > 0) msg += "; ";
      msg += diagnostics[i].invariant + " at " + diagnostics[i].location + ": " + diagnostics[i].message;
    }
    fail(ErrorCode::Schema, msg);
  }
  return spec;
}

MomdpSpec load_momdp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_momdp(buf.str());
}

std::string serialize_momdp(const MomdpSpec& spec) {
  Json doc = Json::object();
  doc["name"] = spec.name;
  doc["n_objectives"] = spec.n_objectives;
  doc["states"] = spec.states;
  doc["terminals"] = spec.terminals;
  if (spec.point_start && spec.initial.size() == 1) {
    doc["initial"] = spec.initial.front().state;
  } else {
    Json initial = Json::array();
    for (const auto& e : spec.initial) initial.push_back(Json::array({e.probability, e.state}));
    doc["initial"] = initial;
  }
  Json transitions = Json::object();
  for (const auto& st : spec.transitions) {
    Json actions = Json::object();
    for (const auto& act : st.actions) {
      Json outcomes = Json::array();
      for (const auto& o : act.outcomes) {
        outcomes.push_back(Json::array({o.probability, o.next_state, reward_json(o.reward)}));
      }
      actions[act.action] = outcomes;
    }
    transitions[st.state] = actions;
  }
  doc["transitions"] = transitions;
  return doc.dump(2) + "\n";
}

MomdpSpec builtin_spec(std::string_view name) {
  if (name == "fig1-deterministic") return fig1_spec();
  if (name == "fig3-bandit") return fig3_spec();
  fail(ErrorCode::InvalidArgument, "unknown built-in environment \"" + std::string(name) + "\"");
}

std::vector<std::string> builtin_names() { return {"fig1-deterministic", "fig3-bandit"}; }

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

std::shared_ptr<const Environment> Environment::create(MomdpSpec spec) {
  auto diagnostics = validate_momdp(spec);
  if (!diagnostics.empty()) {
    std::string msg = "invalid environment \"" + spec.name + "\": ";
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
      if (i > 0) msg += "; ";
      msg += diagnostics[i].location + ": " + diagnostics[i].message;
    }
    fail(ErrorCode::Schema, msg);
  }
  return std::shared_ptr<const Environment>(new Environment(std::move(spec)));
}

std::shared_ptr<const Environment> Environment::builtin(std::string_view name) {
  return create(builtin_spec(name));
}

std::shared_ptr<const Environment> Environment::resolve(std::string_view name_or_path) {
  for (const auto& n : builtin_names()) {
    if (n == name_or_path) return builtin(name_or_path);
  }
  std::filesystem::path path(name_or_path);
  if (path.extension() == ".json") return create(load_momdp(path));
  fail(ErrorCode::InvalidArgument,
       "unknown environment \"" + std::string(name_or_path) + "\" (expected a built-in name or a .json path)");
}

Environment::Environment(MomdpSpec spec) : spec_(std::move(spec)) {
  state_names_ = spec_.states;
  for (StateId i = 0; i < state_names_.size(); ++i) state_index_.emplace(state_names_[i], i);
  terminal_.assign(state_names_.size(), false);
  for (const auto& t : spec_.terminals) terminal_[state_index_.at(t)] = true;
  actions_.resize(state_names_.size());
  outcomes_.resize(state_names_.size());
  for (const auto& st : spec_.transitions) {
    StateId s = state_index_.at(st.state);
    for (const auto& act : st.actions) {
      actions_[s].push_back(act.action);
      std::vector<IndexedOutcome> list;
      for (const auto& o : act.outcomes) list.push_back({o.probability, state_index_.at(o.next_state), o.reward});
      outcomes_[s].push_back(std::move(list));
    }
  }
  for (const auto& e : spec_.initial) start_.emplace_back(e.probability, state_index_.at(e.state));
}

StateId Environment::state_id(std::string_view name) const {
  auto it = state_index_.find(std::string(name));
  if (it == state_index_.end()) fail(ErrorCode::InvalidArgument, "unknown state \"" + std::string(name) + "\"");
  return it->second;
}

const std::string& Environment::action_name(StateId s, ActionId a) const {
  require_decision(s, a);
  return actions_[s][a];
}

ActionId Environment::action_id(StateId s, std::string_view name) const {
  const auto& list = actions_.at(s);
  auto it = std::find(list.begin(), list.end(), name);
  if (it == list.end()) {
    fail(ErrorCode::InvalidArgument,
         "action \"" + std::string(name) + "\" is not legal in state \"" + state_name(s) + "\"");
  }
  return static_cast<ActionId>(it - list.begin());
}

void Environment::require_decision(StateId s, ActionId a) const {
  if (s >= state_names_.size()) fail(ErrorCode::InvalidArgument, "state index out of range");
  if (terminal_[s]) fail(ErrorCode::InvalidArgument, "state \"" + state_names_[s] + "\" is terminal");
  if (a >= actions_[s].size()) {
    fail(ErrorCode::InvalidArgument, "action index " + std::to_string(a) + " is not legal in state \"" +
                                         state_names_[s] + "\"");
  }
}

std::span<const IndexedOutcome> Environment::outcome_support(StateId s, ActionId a) const {
  require_decision(s, a);
  return outcomes_[s][a];
}

StepOutcome Environment::step_with_variate(StateId s, ActionId a, double u) const {
  const auto& list = outcome_support(s, a);
  double cumulative = 0.0;
  const IndexedOutcome* chosen = &list.back();
  for (const auto& o : list) {
    cumulative += o.probability;
    if (u < cumulative) {
      chosen = &o;
      break;
    }
  }
  return {chosen->next_state, chosen->reward, terminal_[chosen->next_state]};
}

StepOutcome Environment::sample_step(StateId s, ActionId a, Rng& rng) const {
  return step_with_variate(s, a, rng.uniform());
}

StateId Environment::sample_start(Rng& rng) const {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const auto& [p, s] : start_) {
    cumulative += p;
    if (u < cumulative) return s;
  }
  return start_.back().second;
}

bool Environment::is_acyclic() const {
  enum class Mark { Unvisited, Active, Done };
  std::vector<Mark> mark(state_count(), Mark::Unvisited);
  std::function<bool(StateId)> visit = [&](StateId s) {
    if (mark[s] == Mark::Active) return false;
    if (mark[s] == Mark::Done) return true;
    mark[s] = Mark::Active;
    for (const auto& per_action : outcomes_[s]) {
      for (const auto& o : per_action) {
        if (!visit(o.next_state)) return false;
      }
    }
    mark[s] = Mark::Done;
    return true;
  };
  for (StateId s = 0; s < state_count(); ++s) {
    if (!visit(s)) return false;
  }
  return true;
}

}  // namespace morl
