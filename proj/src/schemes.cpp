#include "lncsim/schemes.hpp"

#include <algorithm>
#include <numeric>

#include "lncsim/rng.hpp"

namespace lnc {

namespace {

class RlncScheme final : public Scheme {
 public:
  RlncScheme(const GfField& field, int k, std::uint64_t seed)
      : field_(&field), k_(k), rng_(seed) {}

  CodingVector next_vector(const FeedbackView&) override {
    CodingVector v(static_cast<std::size_t>(k_));
    for (;;) {
      bool nonzero = false;
      for (auto& c : v) {
        c = static_cast<Fe>(rng_.below(field_->order()));
        nonzero |= c != 0;
      }
      if (nonzero) return v;  // all-zero draws are resampled
    }
  }

  std::string name() const override { return "rlnc"; }

 private:
  const GfField* field_;
  int k_;
  Rng rng_;
};

// Deterministic throughput-optimal code: slot t is row t of a Cauchy matrix
// c[t][k] = 1/(x_t + y_k) with y_k = k and x_t = K + t - 1. Every square
// minor of such a matrix is invertible, so each successful reception is
// innovative to every incomplete receiver, any w_n successes complete
// receiver n, and no packet decodes before its receiver's completion slot.
class MdsScheme final : public Scheme {
 public:
  MdsScheme(const GfField& field, int k) : field_(&field), k_(k) {
    if (field_->order() <= static_cast<std::uint32_t>(k_) + 1)
      throw CapacityError("mds needs field order > K + slot; " + field_->name() +
                          " cannot serve K = " + std::to_string(k_));
  }

  CodingVector next_vector(const FeedbackView&) override {
    const long t = ++slots_;
    if (static_cast<long>(field_->order()) <= static_cast<long>(k_) + t)
      throw CapacityError("mds exhausted " + field_->name() + " at slot " + std::to_string(t));
    const Fe x = static_cast<Fe>(k_ + t - 1);
    CodingVector v(static_cast<std::size_t>(k_));
    for (int j = 0; j < k_; ++j)
      v[static_cast<std::size_t>(j)] = field_->inv(field_->add(x, static_cast<Fe>(j)));
    return v;
  }

  std::string name() const override { return "mds"; }

 private:
  const GfField* field_;
  int k_;
  long slots_ = 0;
};

class UncodedScheme final : public Scheme {
 public:
  explicit UncodedScheme(int k) : k_(k) {}

  CodingVector next_vector(const FeedbackView& fb) override {
    // largest residual want set first, then lowest packet index
    int best_w = 0;
    for (int n = 0; n < fb.receivers; ++n) best_w = std::max(best_w, fb.residual_count(n));
    int packet = -1;
    for (int n = 0; n < fb.receivers; ++n) {
      if (fb.residual_count(n) != best_w) continue;
      for (int k = 0; k < fb.packets; ++k)
        if (fb.wants(n, k)) {
          if (packet < 0 || k < packet) packet = k;
          break;
        }
    }
    if (packet < 0) throw std::logic_error("uncoded scheme invoked with no residual wants");
    CodingVector v(static_cast<std::size_t>(k_));
    v[static_cast<std::size_t>(packet)] = 1;
    return v;
  }

  std::string name() const override { return "uncoded"; }

 private:
  int k_;
};

// Keeps a partition of the packet set, initially one group. Each slot XORs
// the first half of every group of size >= 2 and then splits those groups;
// once only singletons remain, it XORs everything still wanted by someone.
class HalvingScheme final : public Scheme {
 public:
  HalvingScheme(const GfField& field, int k) : k_(k) {
    if (field.order() != 2)
      throw std::invalid_argument("halving is XOR-based and requires GF(2)");
    std::vector<int> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    groups_.push_back(std::move(all));
  }

  CodingVector next_vector(const FeedbackView& fb) override {
    CodingVector v(static_cast<std::size_t>(k_), 0);
    std::vector<std::vector<int>> next;
    bool split_any = false;
    for (auto& g : groups_) {
      if (g.size() >= 2) {
        const std::size_t half = (g.size() + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) v[static_cast<std::size_t>(g[i])] = 1;
        next.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half));
        next.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(half), g.end());
        split_any = true;
      } else {
        next.push_back(g);
      }
    }
    if (split_any) {
      groups_ = std::move(next);
      return v;
    }
    for (int k = 0; k < k_; ++k)
      for (int n = 0; n < fb.receivers; ++n)
        if (fb.wants(n, k)) {
          v[static_cast<std::size_t>(k)] = 1;
          break;
        }
    return v;
  }

  std::string name() const override { return "halving"; }

 private:
  int k_;
  std::vector<std::vector<int>> groups_;
};

// Greedy instant-decodability heuristic (not taken from any published
// algorithm): receivers in descending residual order; a receiver joins the
// XOR either because exactly one of its unknowns is already in the target
// set, or by contributing one wanted packet that every receiver served so
// far already knows. At least the first receiver decodes every slot.
class IdncGreedyScheme final : public Scheme {
 public:
  IdncGreedyScheme(const GfField& field, int k) : k_(k) {
    if (field.order() != 2)
      throw std::invalid_argument("idnc-greedy is XOR-based and requires GF(2)");
  }

  CodingVector next_vector(const FeedbackView& fb) override {
    std::vector<int> order;
    for (int n = 0; n < fb.receivers; ++n)
      if (fb.residual_count(n) > 0) order.push_back(n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fb.residual_count(a) > fb.residual_count(b);
    });

    std::vector<std::uint8_t> in_target(static_cast<std::size_t>(k_), 0);
    std::vector<int> served;
    for (int n : order) {
      int unknowns = 0;
      for (int k = 0; k < k_; ++k)
        if (in_target[static_cast<std::size_t>(k)] && !fb.knows(n, k)) ++unknowns;
      if (unknowns == 1) {
        served.push_back(n);
        continue;
      }
      if (unknowns != 0) continue;  // would stay undecodable for n
      for (int k = 0; k < k_; ++k) {
        if (!fb.wants(n, k) || in_target[static_cast<std::size_t>(k)]) continue;
        const bool safe = std::all_of(served.begin(), served.end(),
                                      [&](int s) { return fb.knows(s, k); });
        if (safe) {
          in_target[static_cast<std::size_t>(k)] = 1;
          served.push_back(n);
          break;
        }
      }
    }

    CodingVector v(static_cast<std::size_t>(k_), 0);
    for (int k = 0; k < k_; ++k) v[static_cast<std::size_t>(k)] = in_target[static_cast<std::size_t>(k)];
    return v;
  }

  std::string name() const override { return "idnc-greedy"; }

 private:
  int k_;
};

Sfm restrict_columns(const Sfm& sfm, const std::vector<int>& cols) {
  Sfm sub(sfm.receivers(), static_cast<int>(cols.size()));
  for (int n = 0; n < sfm.receivers(); ++n)
    for (std::size_t j = 0; j < cols.size(); ++j)
      sub.set_want(n, static_cast<int>(j), sfm.wants(n, cols[j]));
  return sub;
}

// Runs a fresh inner scheme on each block, strictly in plan order; a block is
// left only when nobody wants anything in it anymore. Coefficients outside
// the active block stay zero.
class PartitionedScheme final : public Scheme {
 public:
  PartitionedScheme(Plan plan, const SchemeSpec& inner_spec, const Sfm& sfm, const GfField& field,
                    std::uint64_t seed)
      : k_(sfm.packets()), n_(sfm.receivers()), plan_(std::move(plan)),
        inner_name_(inner_spec.str()) {
    validate_plan(plan_, sfm);
    for (std::size_t b = 0; b < plan_.size(); ++b) {
      const Sfm sub = restrict_columns(sfm, plan_[b]);
      inner_.push_back(make_scheme(inner_spec, sub, field, derive_seed(seed, b)));
      inner_slots_.push_back(0);
    }
  }

  CodingVector next_vector(const FeedbackView& fb) override {
    while (cursor_ < plan_.size() && block_done(fb, plan_[cursor_])) ++cursor_;
    if (cursor_ >= plan_.size())
      throw std::logic_error("partitioned scheme invoked with no residual wants");

    const auto& block = plan_[cursor_];
    const int bk = static_cast<int>(block.size());
    std::vector<std::vector<std::uint8_t>> sub_residual(static_cast<std::size_t>(n_)),
        sub_known(static_cast<std::size_t>(n_));
    for (int n = 0; n < n_; ++n) {
      sub_residual[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(bk));
      sub_known[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(bk));
      for (int j = 0; j < bk; ++j) {
        sub_residual[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] =
            fb.wants(n, block[static_cast<std::size_t>(j)]) ? 1 : 0;
        sub_known[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] =
            fb.knows(n, block[static_cast<std::size_t>(j)]) ? 1 : 0;
      }
    }
    FeedbackView sub{n_, bk, ++inner_slots_[cursor_], &sub_residual, &sub_known};
    const CodingVector inner_v = inner_[cursor_]->next_vector(sub);
    if (inner_v.size() != static_cast<std::size_t>(bk))
      throw std::logic_error("inner scheme emitted a vector of the wrong block length");

    CodingVector v(static_cast<std::size_t>(k_), 0);
    for (int j = 0; j < bk; ++j)
      v[static_cast<std::size_t>(block[static_cast<std::size_t>(j)])] =
          inner_v[static_cast<std::size_t>(j)];
    return v;
  }

  std::string name() const override { return "partitioned(" + inner_name_ + ")"; }

 private:
  static bool block_done(const FeedbackView& fb, const std::vector<int>& block) {
    for (int n = 0; n < fb.receivers; ++n)
      for (int k : block)
        if (fb.wants(n, k)) return false;
    return true;
  }

  int k_;
  int n_;
  Plan plan_;
  std::string inner_name_;
  std::vector<std::unique_ptr<Scheme>> inner_;
  std::vector<long> inner_slots_;
  std::size_t cursor_ = 0;
};

class ReplayScheme final : public Scheme {
 public:
  explicit ReplayScheme(std::vector<CodingVector> schedule) : schedule_(std::move(schedule)) {}

  CodingVector next_vector(const FeedbackView&) override {
    if (pos_ >= schedule_.size()) throw CapacityError("replay schedule exhausted");
    return schedule_[pos_++];
  }

  std::string name() const override { return "replay"; }

 private:
  std::vector<CodingVector> schedule_;
  std::size_t pos_ = 0;
};

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

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid " + what + ": '" + s + "'");
  }
}

}  // namespace

PlanSpec PlanSpec::parse(const std::string& text) {
  PlanSpec out;
  if (text == "theorem5") {
    out.kind = Kind::LargestWantFirst;
    return out;
  }
  if (text.rfind("equal", 0) == 0) {
    out.kind = Kind::EqualBlocks;
    out.blocks = parse_int(text.substr(5), "block count");
    if (out.blocks < 1) throw std::invalid_argument("plan needs at least one block");
    return out;
  }
  out.kind = Kind::Explicit;
  for (const auto& block_text : split(text, '|')) {
    std::vector<int> block;
    for (const auto& item : split(block_text, ',')) {
      const std::size_t dash = item.find('-');
      if (dash == std::string::npos) {
        block.push_back(parse_int(item, "packet index") - 1);
      } else {
        const int lo = parse_int(item.substr(0, dash), "packet range");
        const int hi = parse_int(item.substr(dash + 1), "packet range");
        if (lo > hi) throw std::invalid_argument("empty packet range '" + item + "'");
        for (int p = lo; p <= hi; ++p) block.push_back(p - 1);
      }
    }
    if (block.empty()) throw std::invalid_argument("empty plan block");
    out.explicit_plan.push_back(std::move(block));
  }
  return out;
}

std::string PlanSpec::str() const {
  switch (kind) {
    case Kind::LargestWantFirst:
      return "theorem5";
    case Kind::EqualBlocks:
      return "equal" + std::to_string(blocks);
    case Kind::Explicit: {
      std::string out;
      for (std::size_t b = 0; b < explicit_plan.size(); ++b) {
        if (b) out.push_back('|');
        for (std::size_t j = 0; j < explicit_plan[b].size(); ++j) {
          if (j) out.push_back(',');
          out += std::to_string(explicit_plan[b][j] + 1);
        }
      }
      return out;
    }
  }
  return "";
}

SchemeSpec SchemeSpec::parse(const std::string& text) {
  SchemeSpec out;
  if (text == "rlnc") {
    out.kind = SchemeKind::RlncRandom;
  } else if (text == "mds") {
    out.kind = SchemeKind::RlncMds;
  } else if (text == "uncoded") {
    out.kind = SchemeKind::UncodedRoundRobin;
  } else if (text == "halving") {
    out.kind = SchemeKind::MemorylessHalving;
  } else if (text == "idnc-greedy") {
    out.kind = SchemeKind::IdncGreedy;
  } else if (text.rfind("partitioned:", 0) == 0) {
    const std::string rest = text.substr(12);
    const std::size_t sep = rest.rfind(':');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= rest.size())
      throw std::invalid_argument("partitioned scheme needs the form partitioned:<plan>:<inner>");
    out.kind = SchemeKind::Partitioned;
    out.plan = PlanSpec::parse(rest.substr(0, sep));
    out.inner = std::make_shared<SchemeSpec>(parse(rest.substr(sep + 1)));
    if (out.inner->kind == SchemeKind::Partitioned)
      throw std::invalid_argument("nested partitioned schemes are not supported");
  } else {
    throw std::invalid_argument("unknown scheme '" + text + "'");
  }
  return out;
}

std::string SchemeSpec::str() const {
  switch (kind) {
    case SchemeKind::RlncRandom:
      return "rlnc";
    case SchemeKind::RlncMds:
      return "mds";
    case SchemeKind::UncodedRoundRobin:
      return "uncoded";
    case SchemeKind::MemorylessHalving:
      return "halving";
    case SchemeKind::IdncGreedy:
      return "idnc-greedy";
    case SchemeKind::Partitioned:
      return "partitioned:" + plan->str() + ":" + inner->str();
  }
  return "";
}

Plan make_theorem5_plan(const Sfm& sfm) {
  int best = -1;
  for (int n = 0; n < sfm.receivers(); ++n)
    if (sfm.weight(n) > (best < 0 ? 0 : sfm.weight(best))) best = n;
  if (best < 0) throw std::invalid_argument("plan needs at least one nonempty want set");

  std::vector<std::uint8_t> in_first(static_cast<std::size_t>(sfm.packets()), 0);
  Plan plan(1);
  for (int k : sfm.wanted_by(best)) {
    plan[0].push_back(k);
    in_first[static_cast<std::size_t>(k)] = 1;
  }
  std::vector<int> rest;
  for (int k = 0; k < sfm.packets(); ++k) {
    if (in_first[static_cast<std::size_t>(k)]) continue;
    for (int n = 0; n < sfm.receivers(); ++n)
      if (sfm.wants(n, k)) {
        rest.push_back(k);
        break;
      }
  }
  if (!rest.empty()) plan.push_back(std::move(rest));
  return plan;
}

Plan make_equal_plan(const Sfm& sfm, int m) {
  if (m < 1) throw std::invalid_argument("plan needs at least one block");
  std::vector<int> wanted;
  for (int k = 0; k < sfm.packets(); ++k)
    for (int n = 0; n < sfm.receivers(); ++n)
      if (sfm.wants(n, k)) {
        wanted.push_back(k);
        break;
      }
  if (wanted.empty()) throw std::invalid_argument("plan needs at least one nonempty want set");
  const int blocks = std::min<int>(m, static_cast<int>(wanted.size()));
  Plan plan(static_cast<std::size_t>(blocks));
  const std::size_t total = wanted.size();
  std::size_t start = 0;
  for (int b = 0; b < blocks; ++b) {
    const std::size_t len = total / static_cast<std::size_t>(blocks) +
                            (static_cast<std::size_t>(b) < total % static_cast<std::size_t>(blocks) ? 1 : 0);
    plan[static_cast<std::size_t>(b)].assign(wanted.begin() + static_cast<std::ptrdiff_t>(start),
                                             wanted.begin() + static_cast<std::ptrdiff_t>(start + len));
    start += len;
  }
  return plan;
}

void validate_plan(const Plan& plan, const Sfm& sfm) {
  if (plan.empty()) throw std::invalid_argument("plan has no blocks");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(sfm.packets()), 0);
  for (const auto& block : plan) {
    if (block.empty()) throw std::invalid_argument("plan has an empty block");
    for (int k : block) {
      if (k < 0 || k >= sfm.packets()) throw std::invalid_argument("plan packet index out of range");
      if (seen[static_cast<std::size_t>(k)])
        throw std::invalid_argument("plan blocks overlap at packet " + std::to_string(k + 1));
      seen[static_cast<std::size_t>(k)] = 1;
    }
  }
  for (int k = 0; k < sfm.packets(); ++k) {
    bool wanted = false;
    for (int n = 0; n < sfm.receivers() && !wanted; ++n) wanted = sfm.wants(n, k);
    if (wanted && !seen[static_cast<std::size_t>(k)])
      throw std::invalid_argument("plan misses wanted packet " + std::to_string(k + 1));
    if (!wanted && seen[static_cast<std::size_t>(k)])
      throw std::invalid_argument("plan covers packet " + std::to_string(k + 1) +
                                  " which nobody wants");
  }
}

std::unique_ptr<Scheme> make_scheme(const SchemeSpec& spec, const Sfm& sfm, const GfField& field,
                                    std::uint64_t seed) {
  switch (spec.kind) {
    case SchemeKind::RlncRandom:
      return make_rlnc(field, sfm.packets(), seed);
    case SchemeKind::RlncMds:
      return make_mds(field, sfm.packets());
    case SchemeKind::UncodedRoundRobin:
      return make_uncoded(sfm.packets());
    case SchemeKind::MemorylessHalving:
      return make_halving(field, sfm.packets());
    case SchemeKind::IdncGreedy:
      return make_idnc_greedy(field, sfm.packets());
    case SchemeKind::Partitioned: {
      Plan plan;
      switch (spec.plan->kind) {
        case PlanSpec::Kind::LargestWantFirst:
          plan = make_theorem5_plan(sfm);
          break;
        case PlanSpec::Kind::EqualBlocks:
          plan = make_equal_plan(sfm, spec.plan->blocks);
          break;
        case PlanSpec::Kind::Explicit:
          plan = spec.plan->explicit_plan;
          break;
      }
      return make_partitioned(std::move(plan), *spec.inner, sfm, field, seed);
    }
  }
  throw std::logic_error("unreachable scheme kind");
}

std::unique_ptr<Scheme> make_rlnc(const GfField& field, int k_packets, std::uint64_t seed) {
  return std::make_unique<RlncScheme>(field, k_packets, seed);
}
std::unique_ptr<Scheme> make_mds(const GfField& field, int k_packets) {
  return std::make_unique<MdsScheme>(field, k_packets);
}
std::unique_ptr<Scheme> make_uncoded(int k_packets) {
  return std::make_unique<UncodedScheme>(k_packets);
}
std::unique_ptr<Scheme> make_halving(const GfField& field, int k_packets) {
  return std::make_unique<HalvingScheme>(field, k_packets);
}
std::unique_ptr<Scheme> make_idnc_greedy(const GfField& field, int k_packets) {
  return std::make_unique<IdncGreedyScheme>(field, k_packets);
}
std::unique_ptr<Scheme> make_partitioned(Plan plan, const SchemeSpec& inner, const Sfm& sfm,
                                         const GfField& field, std::uint64_t seed) {
  return std::make_unique<PartitionedScheme>(std::move(plan), inner, sfm, field, seed);
}
std::unique_ptr<Scheme> make_replay(std::vector<CodingVector> schedule) {
  return std::make_unique<ReplayScheme>(std::move(schedule));
}

}  // namespace lnc
