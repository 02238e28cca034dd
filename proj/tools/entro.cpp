#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcb/cli.hpp"
#include "gcb/error.hpp"
#include "gcb/parallel.hpp"

namespace {

using gcb::cli::kExitConfig;
using json = nlohmann::ordered_json;

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration")->required();
  cmd->add_option("--out", c.out, "artifact directory");
  cmd->add_option("--seed", c.seed, "overrides the config seed");
  cmd->add_option("--threads", c.threads, "worker threads (ENTRO_THREADS otherwise)")->check(CLI::PositiveNumber);
}

int configure_threads(const Common& c) {
  if (c.threads) return *c.threads;
  if (const char* env = std::getenv("ENTRO_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw gcb::Error(gcb::ErrorCode::Validation, "ENTRO_THREADS must be a positive integer");
  }
  return 0;
}

gcb::cli::RunConfig load(const Common& c, bool verify) {
  std::ifstream in(c.config);
  if (!in) throw gcb::Error(gcb::ErrorCode::Parse, "cannot read config " + c.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw gcb::Error(gcb::ErrorCode::Parse, c.config + ": " + e.what());
  }
  if (verify && j.is_object() && !j.contains("task")) j["task"] = "verify";
  gcb::cli::RunConfig config;
  try {
    config = gcb::cli::parse_config(j);
  } catch (const json::exception& e) {
    throw gcb::Error(gcb::ErrorCode::Parse, c.config + ": " + e.what());
  }
  const bool is_verify = config.task == gcb::cli::Task::Verify;
  if (verify && !is_verify) {
    throw gcb::Error(gcb::ErrorCode::Validation, "verify needs task \"verify\"");
  }
  if (!verify && is_verify) {
    throw gcb::Error(gcb::ErrorCode::Validation, "task \"verify\" runs under the verify subcommand");
  }
  if (c.seed) config.seed = *c.seed;
  return config;
}

int execute(const Common& c, bool verify) {
  gcb::cli::RunConfig config;
  gcb::cli::RunResult result;
  try {
    gcb::set_thread_count(static_cast<unsigned>(configure_threads(c)));
    config = load(c, verify);
  } catch (const gcb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    result = gcb::cli::run(config);
    gcb::cli::write_artifacts(result, c.out);
  } catch (const gcb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::cout << result.summary << "\n";
  return result.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy estimates for hyperbolic model spaces"};
  app.require_subcommand(1);

  Common estimate_opts;
  auto* estimate = app.add_subcommand("estimate", "run an estimation task");
  add_common(estimate, estimate_opts);

  Common verify_opts;
  auto* verify = app.add_subcommand("verify", "run verification checks");
  add_common(verify, verify_opts);

  std::string a;
  std::string b;
  double eps = 0.1;
  double T_eps = 0.0;
  auto* compare = app.add_subcommand("compare", "compare two growth series");
  compare->add_option("a", a, "first CSV")->required();
  compare->add_option("b", b, "second CSV")->required();
  compare->add_option("--eps", eps, "allowed gap of (1/T) log values");
  compare->add_option("--t-eps", T_eps, "compare only T >= t-eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*estimate) return execute(estimate_opts, false);
  if (*verify) return execute(verify_opts, true);
  try {
    return gcb::cli::compare(a, b, eps, T_eps, std::cout);
  } catch (const gcb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
