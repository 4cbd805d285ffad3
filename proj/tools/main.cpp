#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace mapu::cli;
  Options opt;
  std::string path;

  CLI::App app{"mapu: exact solver for assignment with supplier upgrades"};
  app.require_subcommand(1);
  app.add_flag("--trace", opt.trace, "include the solver trace");
  app.add_flag("--verify", opt.verify, "cross-check against exhaustive search");
  app.add_option("--cap", opt.cap, "largest size for exhaustive search");
  app.add_option("--seed", opt.seed, "seed for sweep");
  app.add_option("--format", opt.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  auto with_file = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("instance", path, "instance JSON file")->required();
    return sub;
  };
  CLI::App* solve = with_file("solve", "optimal upgrade set and assignment");
  CLI::App* oracle = with_file("oracle", "exhaustive optimum");
  CLI::App* hprofile = with_file("hprofile", "h(k') for every budget k'");
  CLI::App* greedy = with_file("greedy", "best-single-addition heuristic");
  CLI::App* schedule = with_file("schedule", "uniform machine scheduling JSON");
  CLI::App* fixtures =
      app.add_subcommand("verify-fixtures", "check the counterexample fixtures");
  fixtures->fallthrough();
  fixtures->add_option("--fixtures-dir", opt.fixtures_dir,
                       "load fixture files from this directory instead");
  CLI::App* sweep = app.add_subcommand("sweep", "solver vs oracle on random data");
  sweep->fallthrough();
  sweep->add_option("--count", opt.count, "number of instances");
  sweep->add_option("--max-n", opt.max_n, "largest supplier count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  RunReport report;
  if (solve->parsed()) report = cmd_solve(path, opt);
  else if (oracle->parsed()) report = cmd_oracle(path, opt);
  else if (hprofile->parsed()) report = cmd_hprofile(path, opt);
  else if (greedy->parsed()) report = cmd_greedy(path, opt);
  else if (schedule->parsed()) report = cmd_schedule(path, opt);
  else if (fixtures->parsed()) report = cmd_verify_fixtures(opt);
  else if (sweep->parsed()) report = cmd_sweep(opt);

  if (opt.format == "text") {
    render_text(to_json(report), "", std::cout);
  } else {
    std::cout << to_json(report).dump(2) << "\n";
  }
  if (!report.error.empty()) std::cerr << "mapu: " << report.error << "\n";
  return report.exit_code;
}
