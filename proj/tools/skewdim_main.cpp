#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "skewdim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Box dimensions of invariant graphs over hyperbolic toral automorphisms"};
  app.require_subcommand(1);

  std::string config_path, out_dir, target;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<double> delta;

  for (const char* name : {"spectrum", "render", "dims", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: outputs.directory)");
    sub->add_option("--seed", seed, "anchor placement seed");
    if (std::string(name) == "render") {
      sub->add_option("--target", target, "'slice <i>', 'graph' or 'figure1'");
      sub->add_option("--resolution", resolution, "samples along each axis");
      sub->add_option("--delta", delta, "box side of the overlaid cover");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : skewdim::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    skewdim::AnalysisConfig config = skewdim::load_config(config_path);
    if (seed) config.estimation.seed = *seed;
    if (!target.empty()) config.render.target = target;
    if (resolution) config.render.resolution = *resolution;
    if (delta) config.render.delta = *delta;
    const std::string dir = out_dir.empty() ? config.output_directory : out_dir;
    return skewdim::run_command(command, config, dir, std::cout, std::cerr);
  } catch (const skewdim::Error& e) {
    std::cerr << e.what() << '\n';
    return skewdim::exit_code_for(e.code());
  }
}
