#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "morl/agent.hpp"
#include "morl/distributional.hpp"
#include "morl/experiments.hpp"
#include "morl/utility.hpp"

// JSON configuration documents. Parsers reject unknown keys and report the
// offending field; serializers emit every field so a resolved configuration
// can be echoed and replayed.

namespace morl {

struct TrialConfig {
  std::string env = "fig1-deterministic";
  AgentConfig agent;
  std::uint64_t seed = 20240101;
};

UtilitySpec parse_utility_config(std::string_view json);
std::string utility_config_json(const UtilitySpec& spec);

TrialConfig parse_trial_config(std::string_view json);
std::string trial_config_json(const TrialConfig& config);

SweepConfig parse_sweep_config(std::string_view json);
std::string sweep_config_json(const SweepConfig& config);

BanditConfig parse_bandit_config(std::string_view json);
std::string bandit_config_json(const BanditConfig& config);

}  // namespace morl
