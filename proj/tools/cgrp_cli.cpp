#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgrp/error.hpp"
#include "cgrp/harness.hpp"
#include "cgrp/instance_io.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

cgrp::harness::SolveOptions load_options(const std::string& config_path, std::uint64_t seed) {
  cgrp::harness::SolveOptions opts;
  if (!config_path.empty()) {
    opts = cgrp::harness::options_from_json(cgrp::read_json_file(config_path));
  }
  opts.seed = seed;
  return opts;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional geometry routing: datasets, solvers and benchmarks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed")->envname("CGRP_SEED");
  };

  auto* gen = app.add_subcommand("gen", "Generate a JSON Lines dataset");
  std::string preset;
  std::string spec_path;
  int count = 200;
  std::string gen_out;
  auto* preset_opt = gen->add_option("--preset", preset, "Named suite");
  auto* spec_opt = gen->add_option("--spec", spec_path, "Instance spec JSON file");
  preset_opt->excludes(spec_opt);
  gen->add_option("--count", count, "Number of instances")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", gen_out, "Output dataset path")->required();
  add_seed(gen);

  auto* solve = app.add_subcommand("solve", "Solve one instance and print a report");
  std::string algo = "alns";
  std::string config_path;
  std::string instance_path;
  std::string tour_out;
  solve->add_option("--algo", algo, "exact-dp, exact-bf, alns, altopt or greedy");
  solve->add_option("--config", config_path, "Solver config JSON");
  solve->add_option("--tour-out", tour_out, "Also write the tour document here");
  solve->add_option("instance", instance_path, "Instance JSON or JSONL file")->required();
  add_seed(solve);

  auto* bench = app.add_subcommand("bench", "Benchmark solvers on a dataset");
  std::string dataset_path;
  std::string algos = "greedy,alns";
  std::string baseline;
  int jobs = 1;
  std::string csv_out;
  bench->add_option("--dataset", dataset_path, "JSON Lines dataset")->required();
  bench->add_option("--algos", algos, "Comma-separated solver list");
  bench->add_option("--baseline", baseline, "Solver the gaps are measured against");
  bench->add_option("--jobs", jobs, "Concurrent solver runs")->check(CLI::PositiveNumber);
  bench->add_option("--config", config_path, "Solver config JSON");
  bench->add_option("--out", csv_out, "CSV report path");
  add_seed(bench);

  auto* validate = app.add_subcommand("validate", "Check a tour against an instance");
  std::string tour_path;
  validate->add_option("instance", instance_path, "Instance JSON file")->required();
  validate->add_option("tour", tour_path, "Tour JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      if (preset.empty() == spec_path.empty()) {
        print_error("invalid-argument", "exactly one of --preset or --spec is required");
        return kExitUsage;
      }
      const auto spec = preset.empty() ? cgrp::spec_from_json(cgrp::read_json_file(spec_path))
                                       : cgrp::harness::preset_spec(preset);
      const std::string source = preset.empty() ? "spec:" + spec_path : preset;
      const auto records =
          cgrp::harness::generate_dataset(spec, count, seed, preset.empty() ? "instance" : preset);
      std::ostringstream text;
      cgrp::write_jsonl(text, records);
      cgrp::write_text_file(gen_out, text.str());
      cgrp::write_text_file(cgrp::harness::manifest_path(gen_out),
                            cgrp::harness::dataset_manifest(source, spec, count, seed).dump(2) +
                                "\n");
      return 0;
    }

    if (*solve) {
      const cgrp::Problem problem(cgrp::load_instance(instance_path));
      auto report = cgrp::harness::solve(problem, algo, load_options(config_path, seed));
      report.instance_id = instance_path;
      if (!tour_out.empty()) {
        cgrp::write_text_file(tour_out, cgrp::to_json(report.tour, report.objective).dump() + "\n");
      }
      std::cout << cgrp::to_json(report).dump() << '\n';
      return 0;
    }

    if (*bench) {
      const auto records = cgrp::load_dataset(dataset_path);
      const auto list = split(algos);
      if (list.empty()) {
        print_error("invalid-argument", "--algos is empty");
        return kExitUsage;
      }
      const std::string base = baseline.empty() ? list.front() : baseline;
      const auto summary = cgrp::harness::run_benchmark(records, list, base,
                                                        load_options(config_path, seed), jobs);
      if (!csv_out.empty()) {
        cgrp::write_text_file(csv_out, cgrp::harness::to_csv(summary.rows));
      }
      std::cout << cgrp::harness::to_json(summary).dump(2) << '\n';
      return 0;
    }

    if (*validate) {
      const cgrp::Problem problem(cgrp::load_instance(instance_path));
      const auto tour = cgrp::tour_from_json(cgrp::read_json_file(tour_path));
      const auto result = cgrp::validate_tour(tour, problem.candidates());
      if (!result.ok()) {
        json violations = json::array();
        for (const auto& v : result.violations) {
          violations.push_back({{"position", v.position}, {"task", v.task}, {"message", v.message}});
        }
        std::cout << json{{"ok", false}, {"violations", violations}}.dump() << '\n';
        return kExitFailure;
      }
      std::cout << json{{"ok", true}, {"objective", problem.evaluate(tour)}}.dump() << '\n';
      return 0;
    }
  } catch (const cgrp::Error& e) {
    print_error(std::string(cgrp::to_string(e.code())), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitFailure;
  }
  return 0;
}
