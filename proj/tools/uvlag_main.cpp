#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "uvlag/errors.hpp"
#include "uvlag/funcmodel.hpp"
#include "uvlag/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"uvlag - verification suite for localized U-Lagrangians of "
               "prox-regular functions"};
  app.require_subcommand(1);

  uvlag::RunConfig config;
  double eps = 0.0, eps_bar = 0.0, rho = 0.0;

  auto* run = app.add_subcommand("run", "run verification checks");
  run->add_option("--problem", config.problems,
                  "catalog problem name (repeatable): P1..P6");
  run->add_flag("--all", config.all_problems, "select every catalog problem");
  run->add_option("--check", config.check, "check id or 'all'")
      ->default_val("all");
  auto* oe = run->add_option("--eps", eps, "localization radius override");
  auto* oeb = run->add_option("--eps-bar", eps_bar,
                              "prox-regularity radius override");
  auto* orho = run->add_option("--rho", rho, "prox-regularity modulus override");
  run->add_option("--grid-n", config.grid_n, "inner grid points per V-dimension")
      ->default_val(41);
  run->add_option("--samples", config.samples, "samples per certificate")
      ->default_val(10000);
  run->add_option("--seed", config.seed, "sampling seed")->default_val(0);
  run->add_option("-o,--out", config.out_path, "report path (default: stdout)");

  auto* list = app.add_subcommand("list", "list problems and check ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    std::cout << "problems:";
    for (const auto& p : uvlag::catalog_names()) std::cout << " " << p;
    std::cout << "\nchecks:";
    for (const auto& c : uvlag::known_check_ids()) std::cout << " " << c;
    std::cout << "\n";
    return 0;
  }

  if (oe->count() > 0) config.eps = eps;
  if (oeb->count() > 0) config.eps_bar = eps_bar;
  if (orho->count() > 0) config.rho = rho;

  const auto errors = uvlag::validate_config(config);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return 2;
  }

  try {
    const uvlag::Report report = uvlag::run(config);
    const std::string text = report.doc.dump(2) + "\n";
    if (config.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(config.out_path);
      if (!out) {
        std::cerr << "error: cannot open output path: " << config.out_path
                  << "\n";
        return 2;
      }
      out << text;
    }
    const auto& summary = report.doc["summary"];
    std::cerr << "pass " << summary["pass"] << ", fail " << summary["fail"]
              << ", expected-fail " << summary["expected_fail"] << "\n";
    return report.exit_code;
  } catch (const uvlag::PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
