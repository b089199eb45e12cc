#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "soficrank_cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"soficrank: von Neumann-Lueck rank and mean dimension estimates from sofic levels"};
  app.require_subcommand(1);
  soficrank::cli::RunOptions options;
  const std::map<std::string, std::string> help{
      {"vr", "rank of a presented module"},
      {"vnd", "dim ker of a group ring matrix"},
      {"spectrum", "counting functions and covering sandwich"},
      {"moments", "trace moments, optionally perturbed"},
      {"mdim", "mean dimension interval"},
      {"tile", "quasi-tiling and orbit covering numbers"},
      {"demo-additivity", "additivity failure over a free group"},
      {"verify", "validate a job and predict its dense sizes"}};
  for (const auto& name : soficrank::cli::subcommands()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--job", options.job_path, "YAML job file")->required();
    sub->add_option("--threads", options.threads, "cap on worker threads")
        ->check(CLI::Range(1, 256));
    sub->add_option("--out", options.out_dir, "output directory (default: .)");
    sub->callback([&options, name] { options.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return soficrank::cli::run(options, std::cout, std::cerr);
}
