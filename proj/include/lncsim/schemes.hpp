#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lncsim/gf.hpp"
#include "lncsim/sfmgen.hpp"

namespace lnc {

// Thrown when a scheme cannot serve the requested slot (e.g. the field has
// run out of distinct code-matrix points).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sender-side residual state. The sender has perfect per-slot feedback, so
// this is exact: residual = wanted and not yet decoded, known = side info
// plus decoded. Non-owning; valid only while the owner is alive.
struct FeedbackView {
  int receivers = 0;
  int packets = 0;
  long next_slot = 1;  // 1-based index of the slot about to be sent
  const std::vector<std::vector<std::uint8_t>>* residual = nullptr;
  const std::vector<std::vector<std::uint8_t>>* known = nullptr;

  bool wants(int n, int k) const {
    return (*residual)[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] != 0;
  }
  bool knows(int n, int k) const {
    return (*known)[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] != 0;
  }
  int residual_count(int n) const {
    int c = 0;
    for (int k = 0; k < packets; ++k)
      if (wants(n, k)) ++c;
    return c;
  }
  bool receiver_complete(int n) const { return residual_count(n) == 0; }
  bool all_complete() const {
    for (int n = 0; n < receivers; ++n)
      if (!receiver_complete(n)) return false;
    return true;
  }
};

class Scheme {
 public:
  virtual ~Scheme() = default;
  virtual CodingVector next_vector(const FeedbackView& fb) = 0;
  virtual std::string name() const = 0;
};

enum class SchemeKind {
  RlncRandom,
  RlncMds,
  UncodedRoundRobin,
  Partitioned,
  MemorylessHalving,
  IdncGreedy,
};

// Ordered disjoint packet blocks; must cover exactly the packets wanted by
// at least one receiver.
using Plan = std::vector<std::vector<int>>;

struct PlanSpec {
  enum class Kind { LargestWantFirst, EqualBlocks, Explicit };
  Kind kind = Kind::LargestWantFirst;
  int blocks = 2;       // EqualBlocks
  Plan explicit_plan;   // Explicit

  static PlanSpec parse(const std::string& text);
  std::string str() const;
};

struct SchemeSpec {
  SchemeKind kind = SchemeKind::RlncRandom;
  std::optional<PlanSpec> plan;             // Partitioned only
  std::shared_ptr<SchemeSpec> inner;        // Partitioned only

  // Grammar: rlnc | mds | uncoded | halving | idnc-greedy
  //        | partitioned:<plan>:<inner>
  // where <plan> is theorem5, equal<M>, or explicit 1-based blocks such as
  // "1-5|6-54" ('|' between blocks, ',' and 'a-b' ranges inside a block).
  static SchemeSpec parse(const std::string& text);
  std::string str() const;
};

// Two-block plan {W of the largest-want receiver, remaining wanted packets};
// the second block is dropped when empty. Ties go to the lowest receiver
// index.
Plan make_theorem5_plan(const Sfm& sfm);

// m blocks of as-equal-as-possible size over the wanted packets, in packet
// order. Returns fewer blocks when fewer wanted packets exist.
Plan make_equal_plan(const Sfm& sfm, int m);

// Throws std::invalid_argument unless blocks are disjoint, nonempty, and
// cover exactly the packets wanted by someone.
void validate_plan(const Plan& plan, const Sfm& sfm);

// Builds a ready-to-run scheme instance for one session. Validates
// scheme/field compatibility (XOR-only schemes require GF(2)) and resolves
// partition plans against the SFM.
std::unique_ptr<Scheme> make_scheme(const SchemeSpec& spec, const Sfm& sfm, const GfField& field,
                                    std::uint64_t seed);

std::unique_ptr<Scheme> make_rlnc(const GfField& field, int k_packets, std::uint64_t seed);
std::unique_ptr<Scheme> make_mds(const GfField& field, int k_packets);
std::unique_ptr<Scheme> make_uncoded(int k_packets);
std::unique_ptr<Scheme> make_halving(const GfField& field, int k_packets);
std::unique_ptr<Scheme> make_idnc_greedy(const GfField& field, int k_packets);
std::unique_ptr<Scheme> make_partitioned(Plan plan, const SchemeSpec& inner, const Sfm& sfm,
                                         const GfField& field, std::uint64_t seed);

// Emits a fixed schedule; used to replay oracle witnesses and handcrafted
// schedules.
std::unique_ptr<Scheme> make_replay(std::vector<CodingVector> schedule);

}  // namespace lnc
