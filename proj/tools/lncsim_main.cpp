#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lncsim/cli.hpp"
#include "lncsim/oracle.hpp"
#include "lncsim/version.hpp"

namespace {

std::vector<double> parse_pe_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string item =
        text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lnc::ConfigError("invalid erasure probability '" + item + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> sfm;
  std::optional<std::string> scheme;
  std::optional<std::string> pe;
  std::optional<int> field;
  std::optional<std::string> memory;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_slots;
  std::optional<std::string> out_dir;
  std::optional<std::string> objective;
  std::optional<int> horizon;

  // config file first, then any flag the user actually set
  lnc::ExperimentConfig build() const {
    lnc::ExperimentConfig config;
    if (config_path) config.merge_json_file(*config_path);
    if (sfm) config.sfm_source = *sfm;
    if (scheme) config.scheme = *scheme;
    if (pe) config.pe = parse_pe_list(*pe);
    if (field) config.field_order = *field;
    if (memory) config.memory = *memory;
    if (trials) config.trials = *trials;
    if (seed) config.seed = *seed;
    if (max_slots) config.max_slots = *max_slots;
    if (out_dir) config.out_dir = *out_dir;
    if (objective) config.objective = *objective;
    if (horizon) config.horizon = *horizon;
    return config;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its values");
  cmd->add_option("--sfm", flags.sfm,
                  "SFM source: file path, or generator spec (theorem2 | a1:K | a2:K:M | "
                  "theorem5:W1:N | random:N:K:P:SEED)");
  cmd->add_option("--scheme", flags.scheme,
                  "rlnc | mds | uncoded | halving | idnc-greedy | partitioned:<plan>:<inner>");
  cmd->add_option("--pe", flags.pe, "erasure probability, single value or comma list");
  cmd->add_option("--field", flags.field, "field order q (2, 4, 16 or 256)");
  cmd->add_option("--memory", flags.memory, "full | memoryless");
  cmd->add_option("--trials", flags.trials, "Monte Carlo trial count");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--max-slots", flags.max_slots, "slot cap per session (0 = automatic)");
  cmd->add_option("--out", flags.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("lncsim v") + lnc::kVersion +
               " - linear network coded broadcast simulator"};
  app.require_subcommand(1);

  CommonFlags sim_flags, ratio_flags, oracle_flags;

  CLI::App* sim = app.add_subcommand("simulate", "estimate completion and APDD for one setup");
  add_common_flags(sim, sim_flags);

  CLI::App* ratio = app.add_subcommand(
      "ratio-report", "compare estimates against the analytic lower bounds");
  add_common_flags(ratio, ratio_flags);

  CLI::App* orc = app.add_subcommand("oracle", "exhaustive erasure-free optimum on a small SFM");
  add_common_flags(orc, oracle_flags);
  orc->add_option("--objective", oracle_flags.objective, "completion | apdd");
  orc->add_option("--horizon", oracle_flags.horizon, "schedule length cap (0 = K+2)");

  std::string gen_name, gen_out = "-";
  long gen_k = 0, gen_m = 0, gen_w1 = 0, gen_n = 0;
  double gen_pwant = 0.5;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("gen-sfm", "write a named SFM in the SFM file format");
  gen->add_option("generator", gen_name, "a1 | a2 | theorem2 | theorem5 | random")->required();
  gen->add_option("--k", gen_k, "packet count (a1, a2, random)");
  gen->add_option("--m", gen_m, "per-packet receiver multiplicity (a2)");
  gen->add_option("--w1", gen_w1, "size of the large want set (theorem5)");
  gen->add_option("--n", gen_n, "receiver count (theorem5, random)");
  gen->add_option("--p-want", gen_pwant, "want probability (random)");
  gen->add_option("--seed", gen_seed, "seed (random)");
  gen->add_option("--out", gen_out, "output file ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return lnc::cmd_simulate(sim_flags.build(), std::cout);
    if (ratio->parsed()) return lnc::cmd_ratio_report(ratio_flags.build(), std::cout);
    if (orc->parsed()) return lnc::cmd_oracle(oracle_flags.build(), std::cout);
    if (gen->parsed()) {
      std::string spec = gen_name;
      if (gen_name == "a1") spec += ":" + std::to_string(gen_k);
      if (gen_name == "a2") spec += ":" + std::to_string(gen_k) + ":" + std::to_string(gen_m);
      if (gen_name == "theorem5") spec += ":" + std::to_string(gen_w1) + ":" + std::to_string(gen_n);
      if (gen_name == "random")
        spec += ":" + std::to_string(gen_n) + ":" + std::to_string(gen_k) + ":" +
                lnc::format_number(gen_pwant) + ":" + std::to_string(gen_seed);
      return lnc::cmd_gen_sfm(spec, gen_seed, gen_out, std::cout);
    }
  } catch (const lnc::oracle::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lnc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
