#include "lncsim/sfmgen.hpp"

#include <algorithm>

#include "lncsim/rng.hpp"

namespace lnc {

Sfm::Sfm(int n_receivers, int k_packets) : n_(n_receivers), k_(k_packets) {
  if (n_ < 1 || k_ < 1) throw std::invalid_argument("SFM needs at least one receiver and one packet");
  a_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(k_), 0);
}

Sfm Sfm::from_rows(std::vector<std::vector<std::uint8_t>> rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("SFM needs at least one receiver and one packet");
  Sfm s(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int n = 0; n < s.n_; ++n) {
    if (rows[static_cast<std::size_t>(n)].size() != static_cast<std::size_t>(s.k_))
      throw std::invalid_argument("ragged SFM rows");
    for (int k = 0; k < s.k_; ++k)
      s.set_want(n, k, rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] != 0);
  }
  return s;
}

std::size_t Sfm::idx(int n, int k) const {
  if (n < 0 || n >= n_ || k < 0 || k >= k_) throw std::out_of_range("SFM index out of range");
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(k);
}

int Sfm::weight(int n) const {
  int w = 0;
  for (int k = 0; k < k_; ++k)
    if (wants(n, k)) ++w;
  return w;
}

int Sfm::max_weight() const {
  int w = 0;
  for (int n = 0; n < n_; ++n) w = std::max(w, weight(n));
  return w;
}

long Sfm::total_wants() const {
  long total = 0;
  for (auto b : a_) total += b;
  return total;
}

std::vector<int> Sfm::wanted_by(int n) const {
  std::vector<int> out;
  for (int k = 0; k < k_; ++k)
    if (wants(n, k)) out.push_back(k);
  return out;
}

std::vector<int> Sfm::side_info(int n) const {
  std::vector<int> out;
  for (int k = 0; k < k_; ++k)
    if (!wants(n, k)) out.push_back(k);
  return out;
}

std::vector<std::uint8_t> Sfm::row(int n) const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(k_));
  for (int k = 0; k < k_; ++k) out[static_cast<std::size_t>(k)] = wants(n, k) ? 1 : 0;
  return out;
}

ChannelSpec ChannelSpec::uniform(int n_receivers, double pe) {
  ChannelSpec c;
  c.erasure_probs.assign(static_cast<std::size_t>(n_receivers), pe);
  c.validate(n_receivers);
  return c;
}

void ChannelSpec::validate(int n_receivers) const {
  if (static_cast<int>(erasure_probs.size()) != n_receivers)
    throw std::invalid_argument("channel has " + std::to_string(erasure_probs.size()) +
                                " erasure probabilities for " + std::to_string(n_receivers) +
                                " receivers");
  for (double p : erasure_probs)
    if (!(p >= 0.0 && p < 1.0))
      throw std::invalid_argument("erasure probability must lie in [0, 1)");
}

double ChannelSpec::max_pe() const {
  double m = 0.0;
  for (double p : erasure_probs) m = std::max(m, p);
  return m;
}

Sfm gen_a1(int k) {
  if (k < 2) throw std::invalid_argument("a1 generator needs K >= 2");
  const int n = k * (k - 1) / 2;
  Sfm s(n, k);
  int row = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      s.set_want(row, i);
      s.set_want(row, j);
      ++row;
    }
  return s;
}

Sfm gen_a2(int k, int m) {
  if (k < 2) throw std::invalid_argument("a2 generator needs K >= 2");
  if (m < 1) throw std::invalid_argument("a2 generator needs m >= 1");
  const int n = m * k + k * (k - 1) / 2;
  Sfm s(n, k);
  int row = 0;
  for (int p = 0; p < k; ++p)
    for (int copy = 0; copy < m; ++copy) s.set_want(row++, p);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      s.set_want(row, i);
      s.set_want(row, j);
      ++row;
    }
  return s;
}

Sfm gen_theorem2() {
  Sfm s(3, 2);
  s.set_want(0, 0);
  s.set_want(1, 1);
  s.set_want(2, 0);
  s.set_want(2, 1);
  return s;
}

Sfm gen_theorem5(int w1, int n_receivers) {
  if (w1 < 1) throw std::invalid_argument("theorem5 generator needs w1 >= 1");
  if (n_receivers < 2) throw std::invalid_argument("theorem5 generator needs N >= 2");
  const int k = w1 + n_receivers - 1;
  Sfm s(n_receivers, k);
  for (int p = 0; p < w1; ++p) s.set_want(0, p);
  for (int n = 1; n < n_receivers; ++n) s.set_want(n, w1 + n - 1);
  return s;
}

Sfm gen_random(int n_receivers, int k_packets, double p_want, std::uint64_t seed) {
  if (!(p_want > 0.0 && p_want <= 1.0)) throw std::invalid_argument("p_want must lie in (0, 1]");
  Sfm s(n_receivers, k_packets);
  Rng rng(seed);
  for (int n = 0; n < n_receivers; ++n)
    for (int k = 0; k < k_packets; ++k)
      if (rng.bernoulli(p_want)) s.set_want(n, k);
  return s;
}

Sfm parse_sfm(const std::string& text) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::size_t width = 0;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_number;
    if (line.empty() && pos > text.size()) break;  // trailing newline
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) throw SfmParseError("empty row", line_number);
    std::vector<std::uint8_t> row;
    row.reserve(line.size());
    for (char c : line) {
      if (c == '0')
        row.push_back(0);
      else if (c == '1')
        row.push_back(1);
      else
        throw SfmParseError(std::string("invalid character '") + c + "'", line_number);
    }
    if (width == 0)
      width = row.size();
    else if (row.size() != width)
      throw SfmParseError("row length " + std::to_string(row.size()) + " does not match " +
                              std::to_string(width),
                          line_number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SfmParseError("no matrix rows", line_number);
  return Sfm::from_rows(std::move(rows));
}

std::string serialize_sfm(const Sfm& sfm) {
  std::string out;
  out.reserve(static_cast<std::size_t>(sfm.receivers()) * (static_cast<std::size_t>(sfm.packets()) + 1));
  for (int n = 0; n < sfm.receivers(); ++n) {
    for (int k = 0; k < sfm.packets(); ++k) out.push_back(sfm.wants(n, k) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace lnc
