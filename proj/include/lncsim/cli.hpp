#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lncsim/gf.hpp"
#include "lncsim/metrics.hpp"
#include "lncsim/rational.hpp"
#include "lncsim/sfmgen.hpp"

namespace lnc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One fully-specified experiment. The JSON form of this struct (sorted keys)
// plus the code version is hashed into a fingerprint that is echoed at the
// top of every output file, so a result can always be traced back to the
// exact configuration that produced it.
struct ExperimentConfig {
  std::string sfm_source = "theorem2";  // generator spec or file path
  std::string scheme = "rlnc";
  std::vector<double> pe;  // empty: lossless; one value: uniform; else per receiver
  int field_order = 2;     // q, one of 2 | 4 | 16 | 256
  std::string memory = "full";
  long trials = 1000;
  std::uint64_t seed = 1;
  long max_slots = 0;  // 0: session default cap
  std::string out_dir;

  // oracle subcommand
  std::string objective = "completion";  // or "apdd"
  int horizon = 0;                       // 0: default

  static ExperimentConfig load_json_file(const std::string& path);
  void merge_json_file(const std::string& path);  // file values, overridable by flags
  std::string canonical_json() const;
  std::string fingerprint() const;  // fnv1a-64 of canonical json + version, hex
};

// "a1:4", "a2:3:2", "theorem2", "theorem5:5:50", "random:10:12:0.5:7",
// or a path to an SFM file.
Sfm resolve_sfm(const std::string& source);
ChannelSpec resolve_channel(const std::vector<double>& pe, int n_receivers);
GfField resolve_field(int order);

// "8" for integers, exact decimals where they terminate, otherwise 6
// significant digits.
std::string format_number(double v);
std::string format_number(const Rational& v);

std::uint64_t fnv1a64(const std::string& text);

// Wording required on every ratio report: simulation certifies ratios for
// the tested instances only, never over the universally-quantified
// definitions.
extern const char* kRatioCaveat;

// simulate: writes estimates.csv and aggregate.csv under config.out_dir.
int cmd_simulate(const ExperimentConfig& config, std::ostream& log);

// ratio-report: writes ratios.csv and ratio_summary.txt; the summary names
// the bound behind every ratio and carries kRatioCaveat.
int cmd_ratio_report(const ExperimentConfig& config, std::ostream& log);

// oracle: prints optimum, witness schedule and node count; duplicates the
// output into out_dir/oracle.txt when out_dir is set.
int cmd_oracle(const ExperimentConfig& config, std::ostream& out);

// gen-sfm: writes the SFM file format to out_path ("-" = stdout).
int cmd_gen_sfm(const std::string& generator_spec, std::uint64_t seed, const std::string& out_path,
                std::ostream& out);

}  // namespace lnc
