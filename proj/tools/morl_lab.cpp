// morl_lab: command-line front end. Talks to the library exclusively through
// the C interface in morl/morl.h.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morl/morl.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(morl_status status) {
  if (status != MORL_OK) throw LibraryError(std::string(morl_status_name(status)) + ": " + morl_last_error());
}

/// Owns a string returned by the C interface.
class CString {
 public:
  CString() = default;
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  ~CString() { morl_string_free(ptr_); }

  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? std::string(ptr_) : std::string(); }

 private:
  char* ptr_ = nullptr;
};

struct SweepHandle {
  morl_sweep* ptr = nullptr;
  ~SweepHandle() { morl_sweep_free(ptr); }
};

struct EnvHandle {
  morl_env* ptr = nullptr;
  ~EnvHandle() { morl_env_free(ptr); }
};

std::string format_real(double v) {
  if (v == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  const std::string text = read_file(path);
  try {
    Json doc = Json::parse(text);
    if (!doc.is_object()) throw UsageError("config " + path + ": expected a JSON object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("MORL_LAB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t value = 0;
  const std::string text(raw);
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError("MORL_LAB_SEED must be a non-negative integer, got \"" + text + "\"");
  }
  return value;
}

/// "--utility paper-nonlinear" or an inline JSON object.
Json utility_from_flag(const std::string& value) {
  if (!value.empty() && value.front() == '{') {
    try {
      return Json::parse(value);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("--utility: ") + e.what());
    }
  }
  return Json{{"kind", value}};
}

void echo_config(const std::string& resolved) { std::cerr << "# resolved config\n" << resolved << "\n"; }

struct Flags {
  std::string env;
  std::string utility;
  double alpha = 0;
  double epsilon0 = 0;
  double lambda = 0;
  double gamma = 0;
  std::uint64_t episodes = 0;
  std::uint64_t trials = 0;
  std::string tie_break;
  std::string trace_mode;
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::string format;
  std::string criterion;
  std::uint64_t warmup = 0;
  std::uint64_t pulls = 0;
  unsigned threads = 0;
  std::string input;
};

struct Options {
  CLI::Option* env = nullptr;
  CLI::Option* utility = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* epsilon0 = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* episodes = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* tie_break = nullptr;
  CLI::Option* trace_mode = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* criterion = nullptr;
  CLI::Option* warmup = nullptr;
  CLI::Option* pulls = nullptr;
};

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

void apply_seed(Json& doc, const char* key, const Options& o, const Flags& f) {
  if (given(o.seed)) {
    doc[key] = f.seed;
  } else if (!doc.contains(key)) {
    if (auto s = seed_from_environment()) doc[key] = *s;
  }
}

std::string resolve(const char* kind, const Json& doc) {
  CString resolved;
  const morl_status status = morl_config_resolve(kind, doc.dump().c_str(), resolved.out());
  if (status != MORL_OK) throw UsageError(std::string("config error: ") + morl_last_error());
  return resolved.str();
}

// ---- subcommands -----------------------------------------------------------

int run_enumerate(const Flags& f, const Options& o) {
  Json doc = load_config(f.config);
  for (const auto& [key, value] : doc.items()) {
    if (key != "env" && key != "utility") throw UsageError("config field \"" + key + "\": unknown field");
  }
  if (given(o.env)) doc["env"] = f.env;
  if (given(o.utility)) doc["utility"] = utility_from_flag(f.utility);
  if (!doc.contains("env")) doc["env"] = "fig1-deterministic";
  if (!doc.contains("utility")) doc["utility"] = Json{{"kind", "paper-nonlinear"}};
  if (doc["utility"].is_string()) doc["utility"] = Json{{"kind", doc["utility"]}};
  echo_config(doc.dump(2));

  EnvHandle env;
  check(morl_env_open(doc["env"].get<std::string>().c_str(), &env.ptr));
  CString csv;
  check(morl_enumerate_csv(env.ptr, doc["utility"].dump().c_str(), csv.out()));
  write_output(f.out, csv.str());
  return 0;
}

int run_trial(const Flags& f, const Options& o) {
  Json doc = load_config(f.config);
  if (given(o.env)) doc["env"] = f.env;
  if (given(o.utility)) doc["utility"] = utility_from_flag(f.utility);
  if (given(o.alpha)) doc["alpha"] = f.alpha;
  if (given(o.epsilon0)) doc["epsilon0"] = f.epsilon0;
  if (given(o.lambda)) doc["lambda"] = f.lambda;
  if (given(o.gamma)) doc["gamma"] = f.gamma;
  if (given(o.episodes)) doc["episodes"] = f.episodes;
  if (given(o.tie_break)) doc["tie_break"] = f.tie_break;
  if (given(o.trace_mode)) doc["trace_mode"] = f.trace_mode;
  apply_seed(doc, "seed", o, f);
  const std::string resolved = resolve("trial", doc);
  echo_config(resolved);

  std::size_t label = 0;
  CString policy;
  CString q_table;
  check(morl_trial_run(resolved.c_str(), &label, policy.out(), q_table.out()));
  std::ostringstream out;
  out << "label: " << label << "\n";
  out << "policy: " << policy.str() << "\n";
  out << q_table.str();
  write_output(f.out, out.str());
  return 0;
}

int run_sweep(const Flags& f, const Options& o) {
  Json doc = load_config(f.config);
  if (given(o.env)) doc["env"] = f.env;
  if (given(o.utility)) doc["utility"] = utility_from_flag(f.utility);
  if (given(o.alpha)) doc["alphas"] = Json::array({f.alpha});
  if (given(o.epsilon0)) doc["epsilons"] = Json::array({f.epsilon0});
  if (given(o.lambda)) doc["lambda"] = f.lambda;
  if (given(o.gamma)) doc["gamma"] = f.gamma;
  if (given(o.episodes)) doc["episodes_per_trial"] = f.episodes;
  if (given(o.trials)) doc["trials_per_cell"] = f.trials;
  if (given(o.tie_break)) doc["strategies"] = Json::array({f.tie_break});
  if (given(o.trace_mode)) doc["trace_mode"] = f.trace_mode;
  apply_seed(doc, "base_seed", o, f);
  const std::string resolved = resolve("sweep", doc);
  echo_config(resolved);

  SweepHandle sweep;
  check(morl_sweep_run(resolved.c_str(), f.threads, &sweep.ptr));
  const std::string format = given(o.format) ? f.format : "csv";
  if (f.out.empty()) {
    CString text;
    check(morl_sweep_render(sweep.ptr, format.c_str(), text.out()));
    write_output("", text.str());
  } else {
    check(morl_sweep_write(sweep.ptr, format.c_str(), f.out.c_str()));
  }

  // Summary: per-strategy label totals and pairwise differences.
  std::size_t n_policies = 0;
  check(morl_sweep_shape(sweep.ptr, nullptr, nullptr, nullptr, &n_policies, nullptr));
  const Json config = Json::parse(resolved);
  std::vector<std::string> strategies;
  for (const auto& s : config["strategies"]) strategies.push_back(s.get<std::string>());
  for (const auto& s : strategies) {
    std::cerr << "# totals " << s << ":";
    for (std::size_t p = 0; p < n_policies; ++p) {
      std::uint64_t total = 0;
      check(morl_sweep_total(sweep.ptr, s.c_str(), p, &total));
      std::cerr << " policy" << p << "=" << total;
    }
    std::cerr << "\n";
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = 0; j < strategies.size(); ++j) {
      if (i == j) continue;
      std::cerr << "# diff " << strategies[i] << " - " << strategies[j] << ":";
      for (std::size_t p = 0; p < n_policies; ++p) {
        std::int64_t diff = 0;
        check(morl_sweep_diff_total(sweep.ptr, strategies[i].c_str(), strategies[j].c_str(), p, &diff));
        std::cerr << " policy" << p << "=" << diff;
      }
      std::cerr << "\n";
    }
  }
  return 0;
}

int run_bandit(const Flags& f, const Options& o) {
  Json doc = load_config(f.config);
  if (given(o.env)) doc["env"] = f.env;
  if (given(o.utility)) doc["utility"] = utility_from_flag(f.utility);
  if (given(o.tie_break)) doc["tie_break"] = f.tie_break;
  if (given(o.criterion)) doc["criterion"] = f.criterion;
  if (given(o.warmup)) doc["warmup"] = f.warmup;
  if (given(o.pulls)) doc["pulls"] = f.pulls;
  apply_seed(doc, "seed", o, f);
  const std::string resolved = resolve("bandit", doc);
  echo_config(resolved);

  CString csv;
  std::size_t greedy = 0;
  check(morl_bandit_run(resolved.c_str(), csv.out(), &greedy));
  write_output(f.out, csv.str());
  std::cerr << "# greedy action index: " << greedy << "\n";
  return 0;
}

int run_analyze(const Flags& f) {
  double x_low = 0;
  double x_high = 0;
  check(morl_preference_boundary(&x_low, &x_high));
  std::ostringstream out;
  out << "x_low,x_high\n" << format_real(x_low) << ',' << format_real(x_high) << "\n\n";
  out << "x,segment_utility,preferred_in_A\n";
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(i / 10.0);
  xs.push_back(x_low);
  xs.push_back(x_high);
  for (double x : xs) {
    double u = 0;
    check(morl_segment_utility(x, &u));
    // The roots land within rounding of 7.
    const char* preferred = std::abs(u - 7.0) <= 1e-9 ? "tie" : (u > 7.0 ? "a1" : "a2");
    out << format_real(x) << ',' << format_real(u) << ',' << preferred << '\n';
  }
  echo_config("{}");
  write_output(f.out, out.str());
  return 0;
}

int run_render(const Flags& f, const Options& o) {
  const std::string format = given(o.format) ? f.format : "svg";
  echo_config(Json{{"input", f.input}, {"format", format}}.dump(2));
  SweepHandle sweep;
  const morl_status status = morl_sweep_load_csv(f.input.c_str(), &sweep.ptr);
  if (status == MORL_ERR_IO) throw UsageError(morl_last_error());
  check(status);
  if (f.out.empty()) {
    CString text;
    check(morl_sweep_render(sweep.ptr, format.c_str(), text.out()));
    write_output("", text.str());
  } else {
    check(morl_sweep_write(sweep.ptr, format.c_str(), f.out.c_str()));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective Q(lambda) laboratory: exact policy evaluation, learning trials, "
               "tie-breaking sweeps and distributional bandit runs.",
               "morl_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(morl_version()));

  Flags f;
  const std::vector<std::string> strategies{"random", "low-index", "high-index"};
  const std::vector<std::string> trace_modes{"literal", "watkins-reset"};
  const std::vector<std::string> formats{"csv", "svg"};

  auto common = [&](CLI::App* sub, Options& o, bool learning) {
    o.env = sub->add_option("--env", f.env, "Built-in environment name or path to an environment JSON file");
    o.utility = sub->add_option("--utility", f.utility,
                                "Utility kind (linear, paper-nonlinear, chebyshev, lex-threshold) or inline JSON");
    if (learning) {
      o.seed = sub->add_option("--seed", f.seed, "Random seed (default: MORL_LAB_SEED, then the config)");
    }
    sub->add_option("--config", f.config, "JSON config file; command-line flags override its fields");
    sub->add_option("--out", f.out, "Output file (default: standard output)");
  };

  auto agent_flags = [&](CLI::App* sub, Options& o) {
    o.alpha = sub->add_option("--alpha", f.alpha, "Learning rate in (0,1]");
    o.epsilon0 = sub->add_option("--epsilon0", f.epsilon0, "Initial exploration rate, decayed linearly to 0");
    o.lambda = sub->add_option("--lambda", f.lambda, "Eligibility trace decay");
    o.gamma = sub->add_option("--gamma", f.gamma, "Discount factor");
    o.episodes = sub->add_option("--episodes", f.episodes, "Episodes per trial");
    o.tie_break = sub->add_option("--tie-break", f.tie_break, "Tie-breaking strategy")
                      ->check(CLI::IsMember(strategies));
    o.trace_mode = sub->add_option("--trace-mode", f.trace_mode, "Trace handling after exploratory actions")
                       ->check(CLI::IsMember(trace_modes));
  };

  Options enumerate_opts;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate deterministic policies with exact SER/ESR utilities (CSV)");
  common(enumerate, enumerate_opts, false);

  Options trial_opts;
  auto* trial = app.add_subcommand("trial", "Run one seeded learning trial; print the final policy label and Q-table");
  common(trial, trial_opts, true);
  agent_flags(trial, trial_opts);

  Options sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run the (alpha, epsilon0) x tie-breaking sweep and emit a heatmap");
  common(sweep, sweep_opts, true);
  agent_flags(sweep, sweep_opts);
  sweep_opts.trials = sweep->add_option("--trials", f.trials, "Trials per (alpha, epsilon0) cell");
  sweep_opts.format = sweep->add_option("--format", f.format, "Heatmap format (default csv)")->check(CLI::IsMember(formats));
  sweep->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)");

  Options bandit_opts;
  auto* bandit = app.add_subcommand("bandit", "Run the distributional learner on a single-decision environment (CSV trace)");
  common(bandit, bandit_opts, true);
  bandit_opts.tie_break = bandit->add_option("--tie-break", f.tie_break, "Tie-breaking strategy")
                              ->check(CLI::IsMember(strategies));
  bandit_opts.criterion = bandit->add_option("--criterion", f.criterion, "ESR or SER")
                              ->check(CLI::IsMember({"ESR", "SER"}));
  bandit_opts.warmup = bandit->add_option("--warmup", f.warmup, "Round-robin pulls before acting greedily");
  bandit_opts.pulls = bandit->add_option("--pulls", f.pulls, "Total pulls");

  auto* analyze = app.add_subcommand("analyze", "Print the analytic preference boundary and segment utilities");
  analyze->add_option("--out", f.out, "Output file (default: standard output)");

  Options render_opts;
  auto* render = app.add_subcommand("render", "Convert a sweep heatmap CSV to SVG (or normalised CSV)");
  render->add_option("input", f.input, "Heatmap CSV produced by the sweep subcommand")->required();
  render_opts.format = render->add_option("--format", f.format, "Output format (default svg)")->check(CLI::IsMember(formats));
  render->add_option("--out", f.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (enumerate->parsed()) return run_enumerate(f, enumerate_opts);
    if (trial->parsed()) return run_trial(f, trial_opts);
    if (sweep->parsed()) return run_sweep(f, sweep_opts);
    if (bandit->parsed()) return run_bandit(f, bandit_opts);
    if (analyze->parsed()) return run_analyze(f);
    if (render->parsed()) return run_render(f, render_opts);
  } catch (const UsageError& e) {
    std::cerr << "morl_lab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "morl_lab: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "morl_lab: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
