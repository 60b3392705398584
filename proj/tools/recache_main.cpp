// Command-line front end: run / sweep / scaling over plain-text configs.
// Exit codes: 0 ok, 1 run failure, 2 config error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "recache/config.hpp"
#include "recache/io.hpp"
#include "recache/sweep.hpp"

namespace fs = std::filesystem;

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel g_log_level = LogLevel::info;

void log_info(const std::string& msg) {
  if (g_log_level >= LogLevel::info) std::fprintf(stderr, "%s\n", msg.c_str());
}

void log_error(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
}

int resolve_workers(int cli_workers) {
  if (cli_workers > 0) return cli_workers;
  if (const char* env = std::getenv("RECACHE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return recache::default_workers();
}

fs::path resolve_out_dir(const std::string& cli_out,
                         const std::string& config_out) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("RECACHE_OUT_DIR")) {
    if (*env != '\0') return env;
  }
  return config_out;
}

// Removes outputs created by a failed command so no partial results linger.
void remove_partial(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recache: joint caching and recommendation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string log_level = "info";
  int workers = 0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file")
        ->required();
    cmd->add_option("--out", out_override,
                    "output directory (overrides config and RECACHE_OUT_DIR)");
    cmd->add_option("--workers", workers,
                    "worker threads (default: RECACHE_WORKERS or hardware)");
    cmd->add_option("--log-level", log_level, "error, info or debug")
        ->check(CLI::IsMember({"error", "info", "debug"}));
  };

  CLI::App* cmd_run = app.add_subcommand("run", "execute a single run");
  add_common(cmd_run);
  cmd_run
      ->add_option("--seed", seed_override, "seed override for this run")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "execute the configured sweep");
  add_common(cmd_sweep);

  CLI::App* cmd_scaling =
      app.add_subcommand("scaling", "regret scaling over the sweep T grid");
  add_common(cmd_scaling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (log_level == "error") g_log_level = LogLevel::error;
  else if (log_level == "debug") g_log_level = LogLevel::debug;

  recache::ExperimentSpec spec;
  try {
    spec = recache::parse_config(config_path);
    if (seed_set) spec.base.seed = seed_override;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 2;
  }

  const fs::path out_base = resolve_out_dir(out_override, spec.out_dir);
  const int n_workers = resolve_workers(workers);

  // Config-shaped failures exit 2, anything else during execution exits 1;
  // a failed command removes whatever it had written.
  auto execute = [&](const fs::path& target_dir, auto&& body) -> int {
    try {
      body();
      return 0;
    } catch (const recache::ParseError& e) {
      log_error(e.what());
      remove_partial(target_dir);
      return 2;
    } catch (const recache::ValidationError& e) {
      log_error(e.what());
      remove_partial(target_dir);
      return 2;
    } catch (const std::exception& e) {
      log_error(e.what());
      remove_partial(target_dir);
      return 1;
    }
  };

  if (cmd_run->parsed()) {
    const fs::path run_dir =
        out_base / ("run-" + recache::config_hash(spec.base) + "-s" +
                    std::to_string(spec.base.seed));
    return execute(run_dir, [&] {
      const recache::RunMetrics rm = recache::run(spec.base);
      const recache::RunPaths paths =
          recache::write_run_outputs(spec.base, rm, out_base);
      log_info("run written to " + paths.dir.string());
    });
  }

  if (cmd_sweep->parsed()) {
    const fs::path sweep_dir =
        out_base / ("sweep-" + recache::detail::spec_hash(spec));
    return execute(sweep_dir, [&] {
      const recache::SweepOutput out =
          recache::run_sweep(spec, n_workers, out_base);
      log_info("sweep of " + std::to_string(out.runs.size()) +
               " runs written to " + out.dir.string());
    });
  }

  const fs::path scaling_dir =
      out_base / ("scaling-" + recache::detail::spec_hash(spec));
  return execute(scaling_dir, [&] {
    const recache::ScalingOutput out =
        recache::run_scaling(spec, n_workers, out_base);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", out.result.fitted_exponent);
    log_info("scaling written to " + out.dir.string() + " (exponent " + buf +
             ")");
  });
}
