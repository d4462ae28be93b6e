#include "themegrain/config.hpp"
#include "themegrain/csv.hpp"
#include "themegrain/experiments.hpp"
#include "themegrain/machine.hpp"
#include "themegrain/operators.hpp"
#include "themegrain/version.hpp"
#include "themegrain/walsh.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace themegrain;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::string> path_override;
  std::optional<std::uint64_t> seed_fitness;
  std::optional<std::uint64_t> seed_population;
  bool timings = false;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
  ExperimentConfig config = load_config_file(args.config_path);
  if (args.path_override) {
    parse_path(*args.path_override);
    config.path = *args.path_override;
  }
  if (args.seed_fitness) config.seeds.fitness = *args.seed_fitness;
  if (args.seed_population) config.seeds.population = *args.seed_population;
  config.collect_timings = args.timings;
  return config;
}

/// Writes through `emit` to the resolved destination; "-" is stdout.
void write_output(const CommonArgs& args, const std::string& name,
                  const std::function<void(std::ostream&)>& emit) {
  if (name == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::filesystem::path dest(name);
  if (dest.is_relative()) dest = std::filesystem::path(args.out_dir) / dest;
  if (dest.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(dest.parent_path(), ec);
  }
  std::ofstream out(dest, std::ios::binary);
  if (!out)
    throw validation_error("cannot open output file: " + dest.string());
  emit(out);
  if (!out)
    throw validation_error("failed writing output file: " + dest.string());
  std::cerr << "wrote " << dest.string() << "\n";
}

int cmd_compare(const CommonArgs& args) {
  const ExperimentConfig config = load_with_overrides(args);
  const ExperimentResult result = run_fidelity_experiment(config);

  write_output(args, config.outputs.report_csv, [&](std::ostream& out) {
    write_fidelity_csv(out, result.report, result.provenance);
  });
  if (config.outputs.trajectory_csv)
    write_output(args, *config.outputs.trajectory_csv, [&](std::ostream& out) {
      write_trajectory_csv(out, result.report, result.provenance);
    });

  const auto& rows = result.report.rows;
  std::cerr << "compare: " << rows.size() - 1 << " generations, max error "
            << format_double(result.report.max_error()) << ", final delta_hat "
            << format_double(rows.back().delta_hat) << ", final uniformity_dev "
            << format_double(rows.back().uniformity_dev) << "\n";
  return 0;
}

int cmd_check_ambivalence(const CommonArgs& args) {
  const ExperimentConfig config = load_with_overrides(args);
  const SchemaPartitioning beta = build_partitioning(config);
  const Transmission transmission = build_transmission(config);
  const AmbivalenceMode mode = parse_ambivalence_mode(config.ambivalence.mode);

  const AmbivalenceReport report = std::visit(
      [&](const auto& t) {
        return check_ambivalence(t, beta, mode, config.ambivalence.samples,
                                 config.ambivalence.tolerance);
      },
      transmission);

  std::cerr << "ambivalence: " << (report.ambivalent ? "PASS" : "FAIL")
            << ", max_deviation " << format_double(report.max_deviation)
            << " (tolerance " << format_double(config.ambivalence.tolerance)
            << "), " << report.tuples_checked << " parent tuples checked\n";
  if (!report.ambivalent) {
    auto print_tuple = [](const std::vector<Genome>& tuple) {
      std::string s = "(";
      for (std::size_t i = 0; i < tuple.size(); ++i)
        s += (i ? "," : "") + std::to_string(tuple[i]);
      return s + ")";
    };
    std::cerr << "witness: parent tuples " << print_tuple(report.witness_a)
              << " and " << print_tuple(report.witness_b)
              << " share theme classes but differ in class sums\n";
    return 1;
  }
  return 0;
}

int cmd_bench(const CommonArgs& args) {
  const ExperimentConfig config = load_with_overrides(args);
  CrossoverKind kind;
  if (config.transmission.kind == "uniform") {
    kind = CrossoverKind::uniform;
  } else if (config.transmission.kind == "one_point") {
    kind = CrossoverKind::one_point;
  } else if (config.transmission.kind == "none") {
    kind = CrossoverKind::none;
  } else {
    throw validation_error(
        "bench sweeps lengths, so transmission.kind must be one of the named "
        "kinds (uniform, one_point, none), not \"" + config.transmission.kind +
        "\"");
  }

  std::vector<MixingBenchRow> rows;
  for (int l = config.bench.l_min; l <= config.bench.l_max; ++l) {
    auto batch = mixing_benchmark(l, kind, config.transmission.mutation_rate,
                                  config.bench.repetitions);
    for (const MixingBenchRow& row : batch)
      std::cerr << "bench: l=" << row.length << " path=" << row.path
                << " mean=" << format_double(row.mean_seconds) << "s\n";
    rows.insert(rows.end(), batch.begin(), batch.end());
  }

  Provenance provenance{kVersion, config_hash(config), config.seeds.fitness,
                        config.seeds.population, "bench"};
  write_output(args, config.outputs.bench_csv, [&](std::ostream& out) {
    write_bench_csv(out, rows, provenance);
  });
  return 0;
}

int cmd_divergence(const CommonArgs& args) {
  const ExperimentConfig config = load_with_overrides(args);
  const SchemaPartitioning beta = build_partitioning(config);
  const FitnessFunction fitness = build_fitness(config, beta);
  const FitnessFunction theme_fitness =
      build_theme_fitness(config, beta, fitness);
  const Distribution p0 = build_population(config, beta);

  std::vector<DivergenceRow> rows;
  double delta_hat = 0.0;
  for (Theme k = 0; k < static_cast<Theme>(beta.theme_space().size()); ++k) {
    const Distribution conditional = theme_conditional(beta, p0, k);
    if (conditional.is_zero()) {
      std::cerr << "divergence: theme " << k << " carries no mass, skipped\n";
      continue;
    }
    DivergenceRow row;
    row.theme = k;
    row.class_mean = expectation(fitness, conditional);
    row.f_star = theme_fitness(k);
    row.abs_deviation = std::abs(row.class_mean - row.f_star);
    delta_hat = std::max(delta_hat, row.abs_deviation);
    rows.push_back(row);
  }

  Provenance provenance{kVersion, config_hash(config), config.seeds.fitness,
                        config.seeds.population, "divergence"};
  write_output(args, config.outputs.divergence_csv, [&](std::ostream& out) {
    write_divergence_csv(out, rows, provenance);
  });
  std::cerr << "divergence: delta_hat " << format_double(delta_hat) << " over "
            << rows.size() << " themes\n";
  return 0;
}

int dispatch(const std::function<int()>& command) {
  try {
    return command();
  } catch (const ambivalence_error& e) {
    std::cerr << "ambivalence error: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinite-population evolution dynamics and their "
               "theme-level reductions"};
  app.set_version_flag("--version", std::string("themegrain ") + kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  int (*run)(const CommonArgs&) = nullptr;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", args.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir,
                    "directory for relative output paths");
    sub->add_option("--path", args.path_override,
                    "variation path: naive, fast, or auto")
        ->check(CLI::IsMember({"naive", "fast", "auto"}));
    sub->add_option("--seed-fitness", args.seed_fitness,
                    "override seeds.fitness");
    sub->add_option("--seed-population", args.seed_population,
                    "override seeds.population");
    sub->add_flag("--timings", args.timings,
                  "record per-generation wall times in the report CSV "
                  "(makes reruns differ byte-wise)");
  };

  CLI::App* compare = app.add_subcommand(
      "compare", "run fine and quotient dynamics in lockstep, report fidelity");
  add_common(compare);
  compare->callback([&] { run = cmd_compare; });

  CLI::App* check = app.add_subcommand(
      "check-ambivalence", "test whether class sums depend only on themes");
  add_common(check);
  check->callback([&] { run = cmd_check_ambivalence; });

  CLI::App* bench = app.add_subcommand(
      "bench", "time the variation paths over a range of genome lengths");
  add_common(bench);
  bench->callback([&] { run = cmd_bench; });

  CLI::App* divergence = app.add_subcommand(
      "divergence", "per-theme gap between class mean fitness and its target");
  add_common(divergence);
  divergence->callback([&] { run = cmd_divergence; });

  CLI11_PARSE(app, argc, argv);
  return dispatch([&] { return run(args); });
}
