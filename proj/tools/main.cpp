#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "nlos/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"passive corner-imaging simulator and reconstruction engine"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config, out, phase = "both";
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--config", config, "scenario config file")->required();
  app.add_option("--out", out, "run directory for artifacts")->required();
  app.add_option("--seed", seed, "master seed for synthetic noise");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--phase", phase, "solver phase: 1, 2, or both")
      ->check(CLI::IsMember({"1", "2", "both"}));

  auto* sim = app.add_subcommand("simulate", "synthesize measurements");
  auto* rec = app.add_subcommand("reconstruct", "solve the fused inverse problem");
  auto* nul = app.add_subcommand("nullmap", "operator null-space maps");
  auto* wgt = app.add_subcommand("weights", "redundancy sample weights");
  auto* swp = app.add_subcommand("sweep", "lambda/noise MSE sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const int phase_num = phase == "both" ? 0 : std::stoi(phase);
  if (sim->parsed()) return nlos::cmd_simulate(config, out, seed, threads);
  if (rec->parsed()) return nlos::cmd_reconstruct(config, out, phase_num, threads);
  if (nul->parsed()) return nlos::cmd_nullmap(config, out, threads);
  if (wgt->parsed()) return nlos::cmd_weights(config, out, threads);
  if (swp->parsed()) return nlos::cmd_sweep(config, out, seed, threads);
  return 2;
}
