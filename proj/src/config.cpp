#include "themegrain/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace themegrain {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& context) {
  if (!j.is_object())
    throw validation_error(context + " must be a JSON object");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      throw validation_error(context + ": unknown key \"" + key + "\"");
}

double as_number(const json& j, const std::string& context) {
  if (!j.is_number())
    throw validation_error(context + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& context) {
  if (!j.is_number_integer())
    throw validation_error(context + " must be an integer");
  return j.get<int>();
}

std::uint64_t as_seed(const json& j, const std::string& context) {
  if (!j.is_number_unsigned() && !j.is_number_integer())
    throw validation_error(context + " must be a nonnegative integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw validation_error(context + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::string as_string(const json& j, const std::string& context) {
  if (!j.is_string())
    throw validation_error(context + " must be a string");
  return j.get<std::string>();
}

Eigen::ArrayXd as_array(const json& j, const std::string& context) {
  if (!j.is_array())
    throw validation_error(context + " must be an array of numbers");
  Eigen::ArrayXd out(j.size());
  Eigen::Index i = 0;
  for (const auto& v : j) {
    if (!v.is_number())
      throw validation_error(context + "[" + std::to_string(i) +
                             "] must be a number");
    out(i++) = v.get<double>();
  }
  return out;
}

TransmissionConfig parse_transmission(const json& j) {
  require_object(j, "transmission");
  reject_unknown_keys(
      j, {"kind", "mutation_rate", "mask_table", "transmission_table", "arity"},
      "transmission");
  TransmissionConfig out;
  if (!j.contains("kind"))
    throw validation_error("transmission: missing \"kind\"");
  out.kind = as_string(j.at("kind"), "transmission.kind");
  if (out.kind != "uniform" && out.kind != "one_point" && out.kind != "none" &&
      out.kind != "table")
    throw validation_error("transmission.kind \"" + out.kind +
                           "\" is not one of uniform, one_point, none, table");
  if (j.contains("mutation_rate"))
    out.mutation_rate = as_number(j.at("mutation_rate"),
                                  "transmission.mutation_rate");
  const bool has_mask = j.contains("mask_table");
  const bool has_raw = j.contains("transmission_table");
  if (out.kind == "table") {
    if (has_mask == has_raw)
      throw validation_error(
          "transmission.kind \"table\" requires exactly one of "
          "\"mask_table\" (mask distribution) or \"transmission_table\" "
          "(raw conditional table)");
    if (has_mask)
      out.mask_table = as_array(j.at("mask_table"), "transmission.mask_table");
    if (has_raw) {
      out.transmission_table = as_array(j.at("transmission_table"),
                                        "transmission.transmission_table");
      if (out.mutation_rate != 0.0)
        throw validation_error(
            "transmission: a raw transmission_table already includes every "
            "stage; mutation_rate must be 0");
    }
  } else if (has_mask || has_raw) {
    throw validation_error("transmission: mask_table/transmission_table are "
                           "only valid with kind \"table\"");
  }
  return out;
}

FitnessConfig parse_fitness(const json& j) {
  require_object(j, "fitness");
  reject_unknown_keys(j, {"mode", "table", "f_star", "noise", "sigma_rel", "floor"},
                      "fitness");
  FitnessConfig out;
  if (!j.contains("mode"))
    throw validation_error("fitness: missing \"mode\"");
  out.mode = as_string(j.at("mode"), "fitness.mode");
  if (out.mode == "table") {
    if (!j.contains("table"))
      throw validation_error("fitness: mode \"table\" requires \"table\"");
    out.table = as_array(j.at("table"), "fitness.table");
  } else if (out.mode == "schematic") {
    if (!j.contains("f_star"))
      throw validation_error("fitness: mode \"schematic\" requires \"f_star\"");
    out.f_star = as_array(j.at("f_star"), "fitness.f_star");
    if (j.contains("noise"))
      out.noise = as_string(j.at("noise"), "fitness.noise");
    parse_noise(out.noise);  // validates the name
    if (j.contains("sigma_rel"))
      out.sigma_rel = as_number(j.at("sigma_rel"), "fitness.sigma_rel");
    if (j.contains("floor"))
      out.floor = as_number(j.at("floor"), "fitness.floor");
  } else {
    throw validation_error("fitness.mode \"" + out.mode +
                           "\" is not one of table, schematic");
  }
  return out;
}

PopulationConfig parse_population(const json& j) {
  require_object(j, "population");
  reject_unknown_keys(j, {"mode", "bit_one_probs", "table", "theme_marginal", "eta"},
                      "population");
  PopulationConfig out;
  if (!j.contains("mode"))
    throw validation_error("population: missing \"mode\"");
  out.mode = as_string(j.at("mode"), "population.mode");
  if (out.mode == "uniform") {
    // no parameters
  } else if (out.mode == "product") {
    if (!j.contains("bit_one_probs"))
      throw validation_error(
          "population: mode \"product\" requires \"bit_one_probs\"");
    out.bit_one_probs = as_array(j.at("bit_one_probs"),
                                 "population.bit_one_probs");
  } else if (out.mode == "table") {
    if (!j.contains("table"))
      throw validation_error("population: mode \"table\" requires \"table\"");
    out.table = as_array(j.at("table"), "population.table");
  } else if (out.mode == "schematic") {
    if (j.contains("theme_marginal")) {
      const json& m = j.at("theme_marginal");
      if (m.is_string()) {
        if (m.get<std::string>() != "uniform")
          throw validation_error(
              "population.theme_marginal: the only named marginal is "
              "\"uniform\"");
      } else {
        out.theme_marginal = as_array(m, "population.theme_marginal");
      }
    }
    if (j.contains("eta"))
      out.eta = as_number(j.at("eta"), "population.eta");
  } else {
    throw validation_error("population.mode \"" + out.mode +
                           "\" is not one of uniform, product, table, schematic");
  }
  return out;
}

}  // namespace

ExperimentConfig load_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(doc, "config");
  reject_unknown_keys(doc,
                      {"schema_version", "genome_length", "defined_loci",
                       "transmission", "fitness", "population", "generations",
                       "path", "seeds", "outputs", "bench", "ambivalence"},
                      "config");

  ExperimentConfig out;
  if (!doc.contains("schema_version"))
    throw validation_error("config: missing \"schema_version\"");
  out.schema_version = as_int(doc.at("schema_version"), "schema_version");
  if (out.schema_version != 1)
    throw validation_error("config: schema_version " +
                           std::to_string(out.schema_version) +
                           " is not supported (this build reads version 1)");
  if (!doc.contains("genome_length"))
    throw validation_error("config: missing \"genome_length\"");
  out.genome_length = as_int(doc.at("genome_length"), "genome_length");
  if (!doc.contains("defined_loci"))
    throw validation_error("config: missing \"defined_loci\"");
  {
    const json& loci = doc.at("defined_loci");
    if (!loci.is_array() || loci.empty())
      throw validation_error("defined_loci must be a non-empty array");
    for (const auto& v : loci)
      out.defined_loci.push_back(as_int(v, "defined_loci entry"));
  }
  if (!doc.contains("transmission"))
    throw validation_error("config: missing \"transmission\"");
  out.transmission = parse_transmission(doc.at("transmission"));
  if (doc.contains("fitness")) out.fitness = parse_fitness(doc.at("fitness"));
  if (doc.contains("population"))
    out.population = parse_population(doc.at("population"));
  if (doc.contains("generations")) {
    out.generations = as_int(doc.at("generations"), "generations");
    if (out.generations < 0)
      throw validation_error("generations must be nonnegative");
  }
  if (doc.contains("path")) {
    out.path = as_string(doc.at("path"), "path");
    parse_path(out.path);  // validates the name
  }
  if (doc.contains("seeds")) {
    const json& seeds = doc.at("seeds");
    require_object(seeds, "seeds");
    reject_unknown_keys(seeds, {"fitness", "population"}, "seeds");
    if (seeds.contains("fitness"))
      out.seeds.fitness = as_seed(seeds.at("fitness"), "seeds.fitness");
    if (seeds.contains("population"))
      out.seeds.population = as_seed(seeds.at("population"), "seeds.population");
  }
  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    require_object(o, "outputs");
    reject_unknown_keys(
        o, {"trajectory_csv", "report_csv", "bench_csv", "divergence_csv"},
        "outputs");
    if (o.contains("trajectory_csv"))
      out.outputs.trajectory_csv =
          as_string(o.at("trajectory_csv"), "outputs.trajectory_csv");
    if (o.contains("report_csv"))
      out.outputs.report_csv = as_string(o.at("report_csv"), "outputs.report_csv");
    if (o.contains("bench_csv"))
      out.outputs.bench_csv = as_string(o.at("bench_csv"), "outputs.bench_csv");
    if (o.contains("divergence_csv"))
      out.outputs.divergence_csv =
          as_string(o.at("divergence_csv"), "outputs.divergence_csv");
  }
  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    require_object(b, "bench");
    reject_unknown_keys(b, {"l_min", "l_max", "repetitions"}, "bench");
    if (b.contains("l_min")) out.bench.l_min = as_int(b.at("l_min"), "bench.l_min");
    if (b.contains("l_max")) out.bench.l_max = as_int(b.at("l_max"), "bench.l_max");
    if (b.contains("repetitions"))
      out.bench.repetitions = as_int(b.at("repetitions"), "bench.repetitions");
    if (out.bench.l_min < 1 || out.bench.l_max > GenomeSpace::kMaxLength ||
        out.bench.l_min > out.bench.l_max)
      throw validation_error("bench: length range [" +
                             std::to_string(out.bench.l_min) + ", " +
                             std::to_string(out.bench.l_max) +
                             "] outside [1, " +
                             std::to_string(GenomeSpace::kMaxLength) + "]");
    if (out.bench.repetitions < 1)
      throw validation_error("bench.repetitions must be positive");
  }
  if (doc.contains("ambivalence")) {
    const json& a = doc.at("ambivalence");
    require_object(a, "ambivalence");
    reject_unknown_keys(a, {"mode", "samples", "tolerance"}, "ambivalence");
    if (a.contains("mode")) {
      out.ambivalence.mode = as_string(a.at("mode"), "ambivalence.mode");
      parse_ambivalence_mode(out.ambivalence.mode);
    }
    if (a.contains("samples"))
      out.ambivalence.samples = as_seed(a.at("samples"), "ambivalence.samples");
    if (a.contains("tolerance"))
      out.ambivalence.tolerance =
          as_number(a.at("tolerance"), "ambivalence.tolerance");
    if (!(out.ambivalence.tolerance > 0.0))
      throw validation_error("ambivalence.tolerance must be positive");
  }

  // Structural validation of the core geometry happens here so every
  // command sees the same errors; deeper cross-field checks live in the
  // builders that use the sections.
  build_partitioning(out);

  out.canonical_json = doc.dump();
  return out;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw validation_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return load_config(text.str());
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.canonical_json) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

VariationPath parse_path(const std::string& name) {
  if (name == "naive") return VariationPath::naive;
  if (name == "fast") return VariationPath::fast;
  if (name == "auto") return VariationPath::auto_select;
  throw validation_error("path \"" + name + "\" is not one of naive, fast, auto");
}

AmbivalenceMode parse_ambivalence_mode(const std::string& name) {
  if (name == "exhaustive") return AmbivalenceMode::exhaustive;
  if (name == "sampled") return AmbivalenceMode::sampled;
  throw validation_error("ambivalence.mode \"" + name +
                         "\" is not one of exhaustive, sampled");
}

NoiseKind parse_noise(const std::string& name) {
  if (name == "truncated_normal") return NoiseKind::truncated_normal;
  if (name == "uniform_interval") return NoiseKind::uniform_interval;
  throw validation_error("fitness.noise \"" + name +
                         "\" is not one of truncated_normal, uniform_interval");
}

SchemaPartitioning build_partitioning(const ExperimentConfig& config) {
  return make_schema_partitioning(config.genome_length, config.defined_loci);
}

Transmission build_transmission(const ExperimentConfig& config) {
  const TransmissionConfig& t = config.transmission;
  const int l = config.genome_length;
  if (t.kind == "uniform")
    return TransmissionSpec::uniform_crossover(l, t.mutation_rate);
  if (t.kind == "one_point")
    return TransmissionSpec::one_point_crossover(l, t.mutation_rate);
  if (t.kind == "none")
    return TransmissionSpec::mutation_only(l, t.mutation_rate);
  // kind == "table"
  if (t.mask_table)
    return TransmissionSpec::with_mask_table(l, *t.mask_table, t.mutation_rate);
  const Eigen::Index n = Eigen::Index{1} << l;
  const Eigen::Index len = t.transmission_table->size();
  // The flat table's length is space^(arity+1); recover the arity.
  Eigen::Index rows = len, arity = 0;
  while (rows > 1 && rows % n == 0) {
    rows /= n;
    ++arity;
  }
  if (rows != 1 || arity < 2)
    throw validation_error(
        "transmission.transmission_table has " + std::to_string(len) +
        " entries, which is not 2^genome_length raised to a parent count + 1");
  return TransmissionTable::from_flat(n, static_cast<int>(arity) - 1,
                                      *t.transmission_table);
}

FitnessFunction build_fitness(const ExperimentConfig& config,
                              const SchemaPartitioning& beta) {
  if (!config.fitness)
    throw validation_error("config has no \"fitness\" section");
  const FitnessConfig& f = *config.fitness;
  if (f.mode == "table") {
    if (f.table->size() != beta.genome_space().size())
      throw validation_error("fitness.table has " +
                             std::to_string(f.table->size()) +
                             " entries, genome space holds " +
                             std::to_string(beta.genome_space().size()));
    return FitnessFunction::from_values(*f.table);
  }
  SchematicFitnessSpec spec;
  spec.f_star = *f.f_star;
  spec.noise = parse_noise(f.noise);
  spec.sigma_rel = f.sigma_rel;
  spec.floor = f.floor;
  spec.seed = config.seeds.fitness;
  return gen_schematic_fitness(spec, beta);
}

FitnessFunction build_theme_fitness(const ExperimentConfig& config,
                                    const SchemaPartitioning& beta,
                                    const FitnessFunction& fitness) {
  if (!config.fitness)
    throw validation_error("config has no \"fitness\" section");
  const FitnessConfig& f = *config.fitness;
  if (f.mode == "schematic") {
    if (f.f_star->size() != beta.theme_space().size())
      throw validation_error("fitness.f_star has " +
                             std::to_string(f.f_star->size()) +
                             " entries, theme space holds " +
                             std::to_string(beta.theme_space().size()));
    return FitnessFunction::from_values(*f.f_star);
  }
  // Table mode has no generative target; use exact unweighted class means.
  return derive_theme_fitness(beta, fitness,
                              Distribution::uniform(beta.genome_space().size()));
}

Distribution build_population(const ExperimentConfig& config,
                              const SchemaPartitioning& beta) {
  const Eigen::Index n = beta.genome_space().size();
  if (!config.population)
    throw validation_error("config has no \"population\" section");
  const PopulationConfig& p = *config.population;
  if (p.mode == "uniform") return Distribution::uniform(n);
  if (p.mode == "product") {
    const Eigen::ArrayXd& probs = *p.bit_one_probs;
    if (probs.size() != config.genome_length)
      throw validation_error("population.bit_one_probs has " +
                             std::to_string(probs.size()) +
                             " entries, genome length is " +
                             std::to_string(config.genome_length));
    if ((probs < 0.0).any() || (probs > 1.0).any())
      throw validation_error("population.bit_one_probs must lie in [0, 1]");
    Eigen::ArrayXd w(n);
    for (Eigen::Index g = 0; g < n; ++g) {
      double prob = 1.0;
      for (int b = 0; b < config.genome_length; ++b)
        prob *= ((g >> b) & 1) ? probs(b) : 1.0 - probs(b);
      w(g) = prob;
    }
    // Mathematically sums to 1; renormalize so accumulation round-off at
    // large lengths cannot trip the strict constructor.
    w /= w.sum();
    w /= w.sum();
    return Distribution::from_weights(std::move(w));
  }
  if (p.mode == "table") {
    if (p.table->size() != n)
      throw validation_error("population.table has " +
                             std::to_string(p.table->size()) +
                             " entries, genome space holds " + std::to_string(n));
    return Distribution::from_weights(*p.table);
  }
  // mode == "schematic"
  const PopulationSpec spec{
      p.theme_marginal ? Distribution::from_weights(*p.theme_marginal)
                       : Distribution::uniform(beta.theme_space().size()),
      p.eta, config.seeds.population};
  return gen_population(spec, beta);
}

}  // namespace themegrain
