#include "lncsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lncsim/oracle.hpp"
#include "lncsim/schemes.hpp"
#include "lncsim/version.hpp"

namespace lnc {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + ": '" + s + "'");
  }
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + ": '" + s + "'");
  }
}

std::string header_lines(const char* command, const ExperimentConfig& config) {
  return std::string("# lncsim v") + kVersion + " " + command + "\n# fingerprint=" +
         config.fingerprint() + " seed=" + std::to_string(config.seed) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

struct ResolvedExperiment {
  Sfm sfm;
  ChannelSpec channel;
  GfField field;
  SchemeSpec scheme;
  MemoryMode memory;
};

ResolvedExperiment resolve(const ExperimentConfig& config) {
  Sfm sfm = resolve_sfm(config.sfm_source);
  ChannelSpec channel = resolve_channel(config.pe, sfm.receivers());
  GfField field = resolve_field(config.field_order);
  SchemeSpec scheme = SchemeSpec::parse(config.scheme);
  MemoryMode memory = parse_memory_mode(config.memory);
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  return {std::move(sfm), std::move(channel), std::move(field), std::move(scheme), memory};
}

std::string describe_instance(const ExperimentConfig& config, const ResolvedExperiment& exp,
                              const Estimates& est) {
  std::ostringstream out;
  out << "instance: sfm=" << config.sfm_source << " (N=" << exp.sfm.receivers()
      << ", K=" << exp.sfm.packets() << "), scheme=" << config.scheme
      << ", field=" << exp.field.name() << ", memory=" << config.memory << ", pe=[";
  for (std::size_t i = 0; i < exp.channel.erasure_probs.size(); ++i)
    out << (i ? "," : "") << format_number(exp.channel.erasure_probs[i]);
  out << "], trials=" << est.trials << " (" << est.truncated << " truncated)";
  return out.str();
}

}  // namespace

const char* kRatioCaveat =
    "caveat: approximation ratios are quantified over all state feedback matrices and erasure "
    "probabilities; a simulation certifies them only for the instances, seeds and trial counts "
    "actually tested, never universally.";

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

ExperimentConfig ExperimentConfig::load_json_file(const std::string& path) {
  ExperimentConfig config;
  config.merge_json_file(path);
  return config;
}

void ExperimentConfig::merge_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  try {
    if (j.contains("sfm")) sfm_source = j.at("sfm").get<std::string>();
    if (j.contains("scheme")) scheme = j.at("scheme").get<std::string>();
    if (j.contains("pe")) {
      pe.clear();
      if (j.at("pe").is_number())
        pe.push_back(j.at("pe").get<double>());
      else
        pe = j.at("pe").get<std::vector<double>>();
    }
    if (j.contains("field")) field_order = j.at("field").get<int>();
    if (j.contains("memory")) memory = j.at("memory").get<std::string>();
    if (j.contains("trials")) trials = j.at("trials").get<long>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_slots")) max_slots = j.at("max_slots").get<long>();
    if (j.contains("out")) out_dir = j.at("out").get<std::string>();
    if (j.contains("objective")) objective = j.at("objective").get<std::string>();
    if (j.contains("horizon")) horizon = j.at("horizon").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["sfm"] = sfm_source;
  j["scheme"] = scheme;
  j["pe"] = pe;
  j["field"] = field_order;
  j["memory"] = memory;
  j["trials"] = trials;
  j["seed"] = seed;
  j["max_slots"] = max_slots;
  j["objective"] = objective;
  j["horizon"] = horizon;
  return j.dump();  // nlohmann objects iterate in sorted key order
}

std::string ExperimentConfig::fingerprint() const {
  const std::uint64_t h = fnv1a64(canonical_json() + "|lncsim v" + kVersion);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Sfm resolve_sfm(const std::string& source) {
  const auto parts = split(source, ':');
  const std::string& name = parts.front();
  try {
    if (name == "theorem2" && parts.size() == 1) return gen_theorem2();
    if (name == "a1" && parts.size() == 2)
      return gen_a1(static_cast<int>(to_long(parts[1], "a1 packet count")));
    if (name == "a2" && parts.size() == 3)
      return gen_a2(static_cast<int>(to_long(parts[1], "a2 packet count")),
                    static_cast<int>(to_long(parts[2], "a2 multiplicity")));
    if (name == "theorem5" && parts.size() == 3)
      return gen_theorem5(static_cast<int>(to_long(parts[1], "theorem5 w1")),
                          static_cast<int>(to_long(parts[2], "theorem5 receiver count")));
    if (name == "random" && parts.size() == 5)
      return gen_random(static_cast<int>(to_long(parts[1], "random receiver count")),
                        static_cast<int>(to_long(parts[2], "random packet count")),
                        to_double(parts[3], "random want probability"),
                        static_cast<std::uint64_t>(to_long(parts[4], "random seed")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sfm generator: ") + e.what());
  }
  if (name == "theorem2" || name == "a1" || name == "a2" || name == "theorem5" || name == "random")
    throw ConfigError("malformed sfm generator spec '" + source + "'");

  std::ifstream in(source, std::ios::binary);
  if (!in)
    throw ConfigError("'" + source + "' is neither a known generator spec nor a readable file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_sfm(text.str());
  } catch (const SfmParseError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

ChannelSpec resolve_channel(const std::vector<double>& pe, int n_receivers) {
  ChannelSpec channel;
  if (pe.empty())
    channel = ChannelSpec::lossless(n_receivers);
  else if (pe.size() == 1)
    channel = ChannelSpec::uniform(n_receivers, pe.front());
  else
    channel.erasure_probs = pe;
  try {
    channel.validate(n_receivers);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return channel;
}

GfField resolve_field(int order) {
  try {
    return GfField(FieldSpec::for_order(static_cast<std::uint32_t>(order)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_number(const Rational& v) {
  // exact decimal when the reduced denominator is 2^a * 5^b
  std::int64_t den = v.den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1) return format_number(v.to_double());
  const int digits = std::max(twos, fives);
  std::int64_t scaled = v.num();
  for (int i = 0; i < digits; ++i) scaled *= 10;
  scaled /= v.den();
  std::string s = std::to_string(scaled < 0 ? -scaled : scaled);
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  if (digits > 0) {
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return (v.num() < 0 ? "-" : "") + s;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
  ResolvedExperiment exp = resolve(config);
  const Estimates est = monte_carlo(exp.sfm, exp.channel, exp.field, exp.scheme, exp.memory,
                                    config.trials, config.seed, config.max_slots);

  std::ostringstream estimates;
  estimates << header_lines("simulate", config) << "receiver,w,E_Un,se_Un,E_Dn,se_Dn\n";
  for (int n = 0; n < exp.sfm.receivers(); ++n) {
    if (exp.sfm.weight(n) == 0) continue;  // excluded from all metrics
    const auto i = static_cast<std::size_t>(n);
    estimates << (n + 1) << ',' << exp.sfm.weight(n) << ',' << format_number(est.e_un[i]) << ','
              << format_number(est.se_un[i]) << ',' << format_number(est.e_dn[i]) << ','
              << format_number(est.se_dn[i]) << '\n';
  }

  std::ostringstream aggregate;
  aggregate << header_lines("simulate", config) << "E_U,se_U,E_D,se_D,trials,truncated\n"
            << format_number(est.e_u) << ',' << format_number(est.se_u) << ','
            << format_number(est.e_d) << ',' << format_number(est.se_d) << ',' << est.trials << ','
            << est.truncated << '\n';

  const std::filesystem::path dir = config.out_dir.empty() ? "." : config.out_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "estimates.csv", estimates.str());
  write_file(dir / "aggregate.csv", aggregate.str());

  log << "simulate: E_U=" << format_number(est.e_u) << " E_D=" << format_number(est.e_d)
      << " trials=" << est.trials << " truncated=" << est.truncated << "\n";
  if (est.truncation_warning)
    log << "warning: " << est.truncated << " of " << est.trials
        << " trials hit the slot cap; estimates exclude them\n";
  return 0;
}

int cmd_ratio_report(const ExperimentConfig& config, std::ostream& log) {
  ResolvedExperiment exp = resolve(config);
  const Estimates est = monte_carlo(exp.sfm, exp.channel, exp.field, exp.scheme, exp.memory,
                                    config.trials, config.seed, config.max_slots);
  const Bounds b = bounds(exp.sfm, exp.channel);
  const ApproxReport rep = approximation_report(est, b, exp.sfm);

  std::ostringstream csv;
  csv << header_lines("ratio-report", config)
      << "kind,receiver,w,U_est,U_bound,U_ratio,U_ratio_se,D_est,D_bound,D_ratio,D_ratio_se\n";
  for (int n = 0; n < exp.sfm.receivers(); ++n) {
    if (exp.sfm.weight(n) == 0) continue;
    const auto i = static_cast<std::size_t>(n);
    csv << "receiver," << (n + 1) << ',' << exp.sfm.weight(n) << ',' << format_number(est.e_un[i])
        << ',' << format_number(b.u_lower[i]) << ',' << format_number(rep.throughput_ratio[i])
        << ',' << format_number(rep.throughput_ratio_se[i]) << ',' << format_number(est.e_dn[i])
        << ',' << format_number(b.d_lower[i]) << ',' << format_number(rep.apdd_ratio[i]) << ','
        << format_number(rep.apdd_ratio_se[i]) << '\n';
  }
  csv << "strong,,,,," << format_number(rep.strong_throughput) << ",,,,"
      << format_number(rep.strong_apdd) << ",\n";
  csv << "weak,,," << format_number(est.e_u) << ',' << format_number(b.u_lower_overall) << ','
      << format_number(rep.weak_throughput) << ',' << format_number(rep.weak_throughput_se) << ','
      << format_number(est.e_d) << ',' << format_number(b.d_lower_overall) << ','
      << format_number(rep.weak_apdd) << ',' << format_number(rep.weak_apdd_se) << '\n';

  std::ostringstream summary;
  summary << header_lines("ratio-report", config) << describe_instance(config, exp, est) << "\n"
          << "per-receiver throughput ratio: E[U_n] / (w_n/(1-Pe_n)); strong ratio (max over "
             "receivers) = "
          << format_number(rep.strong_throughput) << "\n"
          << "per-receiver APDD ratio: E[D_n] / ((w_n+1)/(2(1-Pe_n))); strong ratio = "
          << format_number(rep.strong_apdd) << "\n"
          << "aggregate throughput ratio: E[U] / max_n(w_n/(1-Pe_n)) = "
          << format_number(rep.weak_throughput) << "\n"
          << "aggregate APDD ratio: E[D] / (sum_n w_n*(w_n+1)/(2(1-Pe_n)) / sum_n w_n) = "
          << format_number(rep.weak_apdd) << "\n"
          << "The aggregate APDD denominator is a lower bound on the optimum, not an attainable "
             "value; throughput-optimal schemes keep every per-receiver APDD ratio at or below "
             "2.\n"
          << kRatioCaveat << "\n";
  if (est.truncation_warning)
    summary << "warning: " << est.truncated << " of " << est.trials
            << " trials hit the slot cap; estimates exclude them\n";

  const std::filesystem::path dir = config.out_dir.empty() ? "." : config.out_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "ratios.csv", csv.str());
  write_file(dir / "ratio_summary.txt", summary.str());
  log << summary.str();
  return 0;
}

int cmd_oracle(const ExperimentConfig& config, std::ostream& out) {
  const Sfm sfm = resolve_sfm(config.sfm_source);
  FieldSpec field;
  try {
    field = FieldSpec::for_order(static_cast<std::uint32_t>(config.field_order));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.objective != "completion" && config.objective != "apdd")
    throw ConfigError("oracle objective must be completion or apdd");
  oracle::OracleResult result;
  try {
    result = config.objective == "completion"
                 ? oracle::min_completion(sfm, field, config.horizon)
                 : oracle::min_apdd(sfm, field, config.horizon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::ostringstream text;
  text << header_lines("oracle", config) << "objective: " << config.objective << "\n"
       << "field: GF(" << config.field_order << ")\n"
       << "sfm: N=" << sfm.receivers() << " K=" << sfm.packets() << "\n";
  if (!result.feasible) {
    text << "optimum: infeasible within horizon\n";
  } else if (config.objective == "completion") {
    text << "optimum: " << result.completion << "\n";
  } else {
    text << "optimum: " << result.apdd.str() << " (" << format_number(result.apdd) << ")\n";
  }
  text << "witness:\n";
  for (const auto& v : result.witness) {
    if (config.field_order == 2) {
      for (Fe c : v) text << (c ? '1' : '0');
    } else {
      for (std::size_t j = 0; j < v.size(); ++j) text << (j ? "," : "") << v[j];
    }
    text << "\n";
  }
  text << "nodes: " << result.nodes_explored << "\n";

  out << text.str();
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_file(std::filesystem::path(config.out_dir) / "oracle.txt", text.str());
  }
  return 0;  // an infeasible horizon is a reported result, not a failure
}

int cmd_gen_sfm(const std::string& generator_spec, std::uint64_t seed, const std::string& out_path,
                std::ostream& out) {
  const Sfm sfm = resolve_sfm(generator_spec);
  ExperimentConfig config;
  config.sfm_source = generator_spec;
  config.seed = seed;
  const std::string content = header_lines("gen-sfm", config) + serialize_sfm(sfm);
  if (out_path.empty() || out_path == "-") {
    out << content;
  } else {
    if (std::filesystem::path(out_path).has_parent_path())
      std::filesystem::create_directories(std::filesystem::path(out_path).parent_path());
    write_file(out_path, content);
  }
  return 0;
}

}  // namespace lnc
