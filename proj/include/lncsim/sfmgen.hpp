#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnc {

// Binary N x K want matrix. wants(n, k) means receiver n missed packet k and
// still wants it; everything else is side information.
class Sfm {
 public:
  Sfm(int n_receivers, int k_packets);
  static Sfm from_rows(std::vector<std::vector<std::uint8_t>> rows);

  int receivers() const { return n_; }
  int packets() const { return k_; }
  bool wants(int n, int k) const { return a_[idx(n, k)] != 0; }
  void set_want(int n, int k, bool v = true) { a_[idx(n, k)] = v ? 1 : 0; }

  int weight(int n) const;  // w_n
  int max_weight() const;
  long total_wants() const;  // number of ones

  std::vector<int> wanted_by(int n) const;
  std::vector<int> side_info(int n) const;
  std::vector<std::uint8_t> row(int n) const;

  bool operator==(const Sfm& o) const { return n_ == o.n_ && k_ == o.k_ && a_ == o.a_; }
  bool operator!=(const Sfm& o) const { return !(*this == o); }

 private:
  std::size_t idx(int n, int k) const;

  int n_;
  int k_;
  std::vector<std::uint8_t> a_;
};

// Per-receiver Bernoulli erasure probabilities, each strictly below 1.
struct ChannelSpec {
  std::vector<double> erasure_probs;

  static ChannelSpec uniform(int n_receivers, double pe);
  static ChannelSpec lossless(int n_receivers) { return uniform(n_receivers, 0.0); }
  void validate(int n_receivers) const;
  double max_pe() const;
};

// Every pair of packets wanted by a different receiver; N = K(K-1)/2 rows in
// lexicographic (i, j) order.
Sfm gen_a1(int k);

// m singleton rows per packet (grouped by packet) followed by the pair rows
// of gen_a1(k); N = mK + K(K-1)/2.
Sfm gen_a2(int k, int m);

// 2 packets, 3 receivers: rows 10, 01, 11.
Sfm gen_theorem2();

// Receiver 1 wants packets 1..w1; each of the other N-1 receivers wants one
// distinct packet outside that set. K = w1 + N - 1.
Sfm gen_theorem5(int w1, int n_receivers);

// Each entry is 1 with probability p_want, sampled row-major from the seed.
// All-zero rows are retained (metrics exclude them later).
Sfm gen_random(int n_receivers, int k_packets, double p_want, std::uint64_t seed);

struct SfmParseError : std::runtime_error {
  SfmParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  int line_number;
};

// ASCII format: one '0'/'1' row per line, equal lengths, LF newlines,
// '#' lines are comments.
Sfm parse_sfm(const std::string& text);
std::string serialize_sfm(const Sfm& sfm);

}  // namespace lnc
