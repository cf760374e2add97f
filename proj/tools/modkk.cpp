#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include <modkk/modkk.hpp>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw modkk::ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for modular lifts, transform estimates "
               "and unbounded products"};
  app.require_subcommand(0);

  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string only;
  std::string out_dir;
  double tol = 0.0;

  app.add_option("command", command, "verify | sweep | product | fractal");
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_option("--only", only, "run a single named entry / estimate");
  app.add_option("--out", out_dir, "output directory for reports and CSVs");
  auto* tol_opt = app.add_option("--tol", tol, "blanket tolerance override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    modkk::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = modkk::parse_config(read_file(config_path));
    } else if (command.empty()) {
      std::cerr << "error: give a command or --config\n" << app.help();
      return 2;
    }
    if (!command.empty()) cfg.command = command;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (!only.empty()) cfg.only = only;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (tol_opt->count() > 0) cfg.global_tol = tol;

    const modkk::CommandResult res = modkk::run_command(cfg);
    std::cout << res.report;
    if (!res.files.empty()) {
      std::filesystem::create_directories(cfg.output_dir);
      for (const auto& [name, content] : res.files)
        modkk::write_text_file(
            (std::filesystem::path(cfg.output_dir) / name).string(), content);
    }
    return res.exit_code;
  } catch (const modkk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
