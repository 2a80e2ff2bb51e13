#include "morl/morl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "morl/config.hpp"
#include "morl/distributional.hpp"
#include "morl/error.hpp"
#include "morl/experiments.hpp"
#include "morl/momdp.hpp"
#include "morl/oracle.hpp"

struct morl_env {
  morl::EnvironmentPtr env;
};

struct morl_sweep {
  morl::SweepResult result;
};

namespace {

thread_local std::string last_error;

morl_status to_status(morl::ErrorCode code) {
  switch (code) {
    case morl::ErrorCode::InvalidArgument: return MORL_ERR_INVALID_ARGUMENT;
    case morl::ErrorCode::Parse: return MORL_ERR_PARSE;
    case morl::ErrorCode::Schema: return MORL_ERR_SCHEMA;
    case morl::ErrorCode::Io: return MORL_ERR_IO;
    case morl::ErrorCode::Domain: return MORL_ERR_DOMAIN;
    case morl::ErrorCode::Internal: return MORL_ERR_INTERNAL;
  }
  return MORL_ERR_INTERNAL;
}

template <typename F>
morl_status guarded(F&& body) noexcept {
  try {
    body();
    return MORL_OK;
  } catch (const morl::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MORL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MORL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return MORL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) morl::fail(morl::ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* morl_version(void) { return "1.0.0"; }

const char* morl_last_error(void) { return last_error.c_str(); }

const char* morl_status_name(morl_status status) {
  switch (status) {
    case MORL_OK: return "ok";
    case MORL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MORL_ERR_PARSE: return "parse error";
    case MORL_ERR_SCHEMA: return "schema error";
    case MORL_ERR_IO: return "i/o error";
    case MORL_ERR_DOMAIN: return "domain error";
    case MORL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void morl_string_free(char* s) { std::free(s); }

morl_status morl_env_open(const char* name_or_path, morl_env** out) {
  return guarded([&] {
    require(name_or_path, "name_or_path");
    require(out, "out");
    *out = new morl_env{morl::Environment::resolve(name_or_path)};
  });
}

morl_status morl_env_parse(const char* json, morl_env** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new morl_env{morl::Environment::create(morl::parse_momdp(json))};
  });
}

void morl_env_free(morl_env* env) { delete env; }

morl_status morl_env_serialize(const morl_env* env, char** out_json) {
  return guarded([&] {
    require(env, "env");
    require(out_json, "out_json");
    *out_json = copy_out(morl::serialize_momdp(env->env->spec()));
  });
}

morl_status morl_env_info(const morl_env* env, size_t* n_objectives, size_t* n_states) {
  return guarded([&] {
    require(env, "env");
    if (n_objectives) *n_objectives = env->env->n_objectives();
    if (n_states) *n_states = env->env->state_count();
  });
}

morl_status morl_env_check(const char* json, char** out_report) {
  return guarded([&] {
    require(json, "json");
    require(out_report, "out_report");
    std::string report;
    for (const auto& d : morl::validate_momdp(morl::parse_momdp_unvalidated(json))) {
      report += d.invariant + "\t" + d.location + "\t" + d.message + "\n";
    }
    *out_report = copy_out(report);
  });
}

morl_status morl_enumerate_csv(const morl_env* env, const char* utility_json, char** out_csv) {
  return guarded([&] {
    require(env, "env");
    require(out_csv, "out_csv");
    const auto utility =
        utility_json ? morl::parse_utility_config(utility_json) : morl::UtilitySpec::paper_nonlinear();
    *out_csv = copy_out(morl::policy_table_csv(*env->env, utility));
  });
}

morl_status morl_segment_utility(double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = morl::segment_utility(x);
  });
}

morl_status morl_preference_boundary(double* x_low, double* x_high) {
  return guarded([&] {
    require(x_low, "x_low");
    require(x_high, "x_high");
    std::tie(*x_low, *x_high) = morl::preference_boundary();
  });
}

morl_status morl_config_resolve(const char* kind, const char* json, char** out_json) {
  return guarded([&] {
    require(kind, "kind");
    require(json, "json");
    require(out_json, "out_json");
    const std::string k = kind;
    if (k == "trial") {
      *out_json = copy_out(morl::trial_config_json(morl::parse_trial_config(json)));
    } else if (k == "sweep") {
      *out_json = copy_out(morl::sweep_config_json(morl::parse_sweep_config(json)));
    } else if (k == "bandit") {
      *out_json = copy_out(morl::bandit_config_json(morl::parse_bandit_config(json)));
    } else {
      morl::fail(morl::ErrorCode::InvalidArgument, "unknown config kind \"" + k + "\"");
    }
  });
}

morl_status morl_trial_run(const char* trial_config_json, size_t* out_label, char** out_policy, char** out_q_table) {
  return guarded([&] {
    require(trial_config_json, "trial_config_json");
    const auto config = morl::parse_trial_config(trial_config_json);
    const auto env = morl::Environment::resolve(config.env);
    const auto outcome =
        morl::run_trial_detailed(env, config.agent, config.seed, morl::enumerate_policies(*env));
    if (out_label) *out_label = outcome.label;
    if (out_policy) *out_policy = copy_out(morl::describe(*env, outcome.policy));
    if (out_q_table) *out_q_table = copy_out(outcome.agent.dump_q_table());
  });
}

morl_status morl_sweep_run(const char* sweep_config_json, unsigned threads, morl_sweep** out) {
  return guarded([&] {
    require(sweep_config_json, "sweep_config_json");
    require(out, "out");
    *out = new morl_sweep{morl::run_sweep(morl::parse_sweep_config(sweep_config_json), threads)};
  });
}

morl_status morl_sweep_load_csv(const char* path, morl_sweep** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::FILE* f = std::fopen(path, "rb");
    if (f == nullptr) morl::fail(morl::ErrorCode::Io, std::string("file not found: ") + path);
    std::string text;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) text.append(buf, n);
    std::fclose(f);
    *out = new morl_sweep{morl::parse_heatmap_csv(text)};
  });
}

morl_status morl_sweep_parse_csv(const char* csv, morl_sweep** out) {
  return guarded([&] {
    require(csv, "csv");
    require(out, "out");
    *out = new morl_sweep{morl::parse_heatmap_csv(csv)};
  });
}

void morl_sweep_free(morl_sweep* sweep) { delete sweep; }

morl_status morl_sweep_shape(const morl_sweep* sweep, size_t* n_alphas, size_t* n_epsilons, size_t* n_strategies,
                             size_t* n_policies, size_t* trials_per_cell) {
  return guarded([&] {
    require(sweep, "sweep");
    const auto& r = sweep->result;
    if (n_alphas) *n_alphas = r.alphas.size();
    if (n_epsilons) *n_epsilons = r.epsilons.size();
    if (n_strategies) *n_strategies = r.grids.size();
    if (n_policies) *n_policies = r.n_policies;
    if (trials_per_cell) *trials_per_cell = r.trials_per_cell;
  });
}

morl_status morl_sweep_count(const morl_sweep* sweep, const char* strategy, size_t alpha_index, size_t epsilon_index,
                             size_t label, uint64_t* out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(strategy, "strategy");
    require(out, "out");
    const auto& cell = sweep->result.cell(morl::tie_break_from_string(strategy), alpha_index, epsilon_index);
    if (label >= cell.size()) morl::fail(morl::ErrorCode::InvalidArgument, "policy label out of range");
    *out = cell[label];
  });
}

morl_status morl_sweep_total(const morl_sweep* sweep, const char* strategy, size_t label, uint64_t* out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(strategy, "strategy");
    require(out, "out");
    if (label >= sweep->result.n_policies) morl::fail(morl::ErrorCode::InvalidArgument, "policy label out of range");
    *out = sweep->result.total(morl::tie_break_from_string(strategy), label);
  });
}

morl_status morl_sweep_diff_total(const morl_sweep* sweep, const char* strategy_a, const char* strategy_b,
                                  size_t label, int64_t* out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(strategy_a, "strategy_a");
    require(strategy_b, "strategy_b");
    require(out, "out");
    *out = morl::diff_map(sweep->result, morl::tie_break_from_string(strategy_a),
                          morl::tie_break_from_string(strategy_b), label)
               .total;
  });
}

morl_status morl_sweep_render(const morl_sweep* sweep, const char* format, char** out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(format, "format");
    require(out, "out");
    const auto f = morl::heatmap_format_from_string(format);
    *out = copy_out(f == morl::HeatmapFormat::Csv ? morl::heatmap_csv(sweep->result)
                                                  : morl::heatmap_svg(sweep->result));
  });
}

morl_status morl_sweep_write(const morl_sweep* sweep, const char* format, const char* path) {
  return guarded([&] {
    require(sweep, "sweep");
    require(format, "format");
    require(path, "path");
    morl::emit_heatmap(sweep->result, morl::heatmap_format_from_string(format), path);
  });
}

morl_status morl_bandit_run(const char* bandit_config_json, char** out_csv, size_t* out_greedy_action) {
  return guarded([&] {
    require(bandit_config_json, "bandit_config_json");
    const auto config = morl::parse_bandit_config(bandit_config_json);
    const auto env = morl::Environment::resolve(config.env);
    auto run = morl::run_bandit(*env, config);
    if (out_csv) *out_csv = copy_out(run.trace_csv);
    if (out_greedy_action) *out_greedy_action = run.final_greedy;
  });
}

}  // extern "C"
