#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lncsim/gf.hpp"
#include "lncsim/rng.hpp"
#include "lncsim/schemes.hpp"
#include "lncsim/sfmgen.hpp"

namespace lnc {

// Whether a receiver keeps undecodable coded packets. Memoryless receivers
// store nothing: their knowledge is side info plus instantly decoded packets.
enum class MemoryMode { FullMemory, Memoryless };

MemoryMode parse_memory_mode(const std::string& text);  // "full" | "memoryless"

struct SchemeContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TransmissionRecord {
  long slot = 0;  // 1-based
  CodingVector vector;
  std::vector<std::uint8_t> erased;                 // one flag per receiver
  std::vector<std::pair<int, int>> decoded_events;  // (receiver, packet), 0-based

  bool operator==(const TransmissionRecord& o) const {
    return slot == o.slot && vector == o.vector && erased == o.erased &&
           decoded_events == o.decoded_events;
  }
};

struct SessionResult {
  std::vector<std::vector<long>> decode_slot;  // u_{n,k}; 0 = not decoded / not wanted
  std::vector<long> completion_slot;           // U_n; 0 for receivers with w_n = 0
  long completion = 0;                         // U, max over completed receivers
  bool completed = false;                      // false on truncation
  long slots_used = 0;
};

// One broadcast run: scheme -> erasures -> decoders, slot by slot. Erased
// slots still advance decode-slot indices (delay counts transmitted slots).
// Single-owner mutable; concurrent Monte Carlo uses one Session per trial.
class Session {
 public:
  Session(Sfm sfm, ChannelSpec channel, const GfField& field, std::unique_ptr<Scheme> scheme,
          MemoryMode mode, std::uint64_t seed);
  Session(Sfm sfm, ChannelSpec channel, const GfField& field, const SchemeSpec& scheme,
          MemoryMode mode, std::uint64_t seed);

  const TransmissionRecord& step();
  SessionResult run();                 // uses default_max_slots()
  SessionResult run(long max_slots);   // max_slots >= 1; truncation is not an error
  SessionResult result() const;

  FeedbackView feedback_view() const;
  bool receiver_complete(int n) const;
  bool all_complete() const;
  long slot() const { return slot_; }
  long default_max_slots() const;

  const Sfm& sfm() const { return sfm_; }
  MemoryMode memory_mode() const { return mode_; }
  const std::vector<TransmissionRecord>& event_log() const { return log_; }
  const EliminationState& elimination_state(int n) const;  // FullMemory only

 private:
  void decode(int n, int k, std::vector<std::pair<int, int>>& events);
  void process(int n, const CodingVector& v, std::vector<std::pair<int, int>>& events);

  Sfm sfm_;
  ChannelSpec channel_;
  const GfField* field_;
  std::unique_ptr<Scheme> scheme_;
  MemoryMode mode_;
  Rng channel_rng_;

  std::vector<EliminationState> elim_;  // FullMemory only
  std::vector<std::vector<std::uint8_t>> residual_;
  std::vector<std::vector<std::uint8_t>> known_;
  std::vector<int> residual_count_;
  std::vector<std::vector<long>> decode_slot_;
  std::vector<long> completion_slot_;
  int incomplete_ = 0;
  long slot_ = 0;
  std::vector<TransmissionRecord> log_;
};

}  // namespace lnc
