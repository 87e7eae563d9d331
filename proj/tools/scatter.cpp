// scatter solve|verify|bench|ablate --config <path> [overrides]
//
// Exit codes: 0 success, 2 configuration error, 3 convergence failure.
#include "dirprec/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace dirprec;

int main(int argc, char** argv) {
  CLI::App app{"Directional preconditioner for 2D acoustic scattering"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> shape, q, bc, precond, out, tau, p, seed, diagonal, threads;
  for (const char* name : {"solve", "verify", "bench", "ablate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--shape", shape, "circle|ellipse|kite, comma separated");
    sub->add_option("--q", q, "level(s), comma separated");
    sub->add_option("--bc", bc, "dirichlet|neumann, comma separated");
    sub->add_option("--precond", precond, "on|off|both");
    sub->add_option("--out", out, "output CSV path");
    sub->add_option("--tau", tau, "threshold budget factor");
    sub->add_option("--p", p, "points per wavelength");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--diagonal", diagonal, "flat|exact");
    sub->add_option("--threads", threads, "worker thread cap");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string mode_name = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.mode = parse_mode(mode_name);
    const std::pair<const char*, std::optional<std::string>*> overrides[] = {
        {"shape", &shape}, {"q", &q},       {"bc", &bc},     {"precond", &precond},
        {"output", &out},  {"tau", &tau},   {"p", &p},       {"seed", &seed},
        {"diagonal", &diagonal}};
    for (const auto& [key, value] : overrides)
      if (value->has_value()) set_config_value(cfg, key, **value);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (threads) setenv("SCATTER_THREADS", threads->c_str(), 1);

  try {
    switch (cfg.mode) {
      case Mode::solve: {
        const SolveResults r = run_solve(cfg, std::cout);
        return r.all_converged() ? 0 : 3;
      }
      case Mode::verify: {
        const VerifyResults r = run_verify(cfg, std::cout);
        std::cout << "max relative error " << r.max_error() << '\n';
        return r.all_converged() ? 0 : 3;
      }
      case Mode::bench: {
        const auto rows = run_bench(cfg, std::cout);
        if (cfg.output.empty()) write_bench_csv(rows, std::cout);
        for (const auto& row : rows)
          if (!row.converged_p || !row.converged_n) return 3;
        return 0;
      }
      case Mode::ablate: {
        const auto rows = run_ablate(cfg, std::cout);
        for (const auto& row : rows)
          if (!row.converged) return 3;
        return 0;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
