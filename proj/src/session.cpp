#include "lncsim/session.hpp"

#include <algorithm>
#include <cmath>

namespace lnc {

namespace {
constexpr std::uint64_t kChannelStream = 0x6368616e6e656cULL;
constexpr std::uint64_t kSchemeStream = 0x736368656d65ULL;
}  // namespace

MemoryMode parse_memory_mode(const std::string& text) {
  if (text == "full") return MemoryMode::FullMemory;
  if (text == "memoryless") return MemoryMode::Memoryless;
  throw std::invalid_argument("unknown memory mode '" + text + "' (use full or memoryless)");
}

Session::Session(Sfm sfm, ChannelSpec channel, const GfField& field,
                 std::unique_ptr<Scheme> scheme, MemoryMode mode, std::uint64_t seed)
    : sfm_(std::move(sfm)),
      channel_(std::move(channel)),
      field_(&field),
      scheme_(std::move(scheme)),
      mode_(mode),
      channel_rng_(derive_seed(seed, kChannelStream)) {
  const int n = sfm_.receivers();
  const int k = sfm_.packets();
  channel_.validate(n);
  if (!scheme_) throw std::invalid_argument("session needs a scheme");

  residual_.resize(static_cast<std::size_t>(n));
  known_.resize(static_cast<std::size_t>(n));
  residual_count_.resize(static_cast<std::size_t>(n));
  decode_slot_.assign(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(k), 0));
  completion_slot_.assign(static_cast<std::size_t>(n), 0);
  for (int r = 0; r < n; ++r) {
    residual_[static_cast<std::size_t>(r)] = sfm_.row(r);
    known_[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
      known_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = sfm_.wants(r, c) ? 0 : 1;
    residual_count_[static_cast<std::size_t>(r)] = sfm_.weight(r);
    if (residual_count_[static_cast<std::size_t>(r)] > 0) ++incomplete_;
    if (mode_ == MemoryMode::FullMemory) elim_.emplace_back(field, k, sfm_.side_info(r));
  }
}

Session::Session(Sfm sfm, ChannelSpec channel, const GfField& field, const SchemeSpec& scheme,
                 MemoryMode mode, std::uint64_t seed)
    : Session(sfm, std::move(channel), field,
              make_scheme(scheme, sfm, field, derive_seed(seed, kSchemeStream)), mode, seed) {}

bool Session::receiver_complete(int n) const {
  return residual_count_[static_cast<std::size_t>(n)] == 0;
}

bool Session::all_complete() const { return incomplete_ == 0; }

FeedbackView Session::feedback_view() const {
  return FeedbackView{sfm_.receivers(), sfm_.packets(), slot_ + 1, &residual_, &known_};
}

const EliminationState& Session::elimination_state(int n) const {
  if (mode_ != MemoryMode::FullMemory)
    throw std::logic_error("memoryless receivers have no elimination state");
  return elim_.at(static_cast<std::size_t>(n));
}

long Session::default_max_slots() const {
  return static_cast<long>(std::ceil(50.0 * sfm_.packets() / (1.0 - channel_.max_pe())));
}

void Session::decode(int n, int k, std::vector<std::pair<int, int>>& events) {
  auto& res = residual_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  if (!res) return;
  res = 0;
  known_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = 1;
  decode_slot_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = slot_;
  events.emplace_back(n, k);
  if (--residual_count_[static_cast<std::size_t>(n)] == 0) {
    completion_slot_[static_cast<std::size_t>(n)] = slot_;
    --incomplete_;
  }
}

void Session::process(int n, const CodingVector& v, std::vector<std::pair<int, int>>& events) {
  if (mode_ == MemoryMode::FullMemory) {
    for (int k : elim_[static_cast<std::size_t>(n)].absorb(v)) decode(n, k, events);
    return;
  }
  // Memoryless: decodable iff exactly one coordinate is unknown after
  // removing everything already possessed; otherwise the packet is dropped.
  int unknown = -1;
  for (int k = 0; k < sfm_.packets(); ++k) {
    if (v[static_cast<std::size_t>(k)] == 0) continue;
    if (known_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]) continue;
    if (unknown >= 0) return;  // two unknowns: undecodable, discard
    unknown = k;
  }
  if (unknown >= 0) decode(n, unknown, events);
}

const TransmissionRecord& Session::step() {
  if (all_complete()) throw std::logic_error("all receivers already complete");
  const CodingVector v = scheme_->next_vector(feedback_view());
  if (static_cast<int>(v.size()) != sfm_.packets())
    throw SchemeContractViolation(scheme_->name() + " emitted a vector of length " +
                                  std::to_string(v.size()) + ", expected " +
                                  std::to_string(sfm_.packets()));
  if (std::all_of(v.begin(), v.end(), [](Fe c) { return c == 0; }))
    throw SchemeContractViolation(scheme_->name() + " emitted the all-zero vector");
  for (Fe c : v)
    if (c >= field_->order())
      throw SchemeContractViolation(scheme_->name() + " emitted a coefficient outside " +
                                    field_->name());

  ++slot_;
  TransmissionRecord rec;
  rec.slot = slot_;
  rec.vector = v;
  rec.erased.resize(static_cast<std::size_t>(sfm_.receivers()));
  // erasures are sampled for every receiver each slot, in receiver order, so
  // the channel stream does not depend on completion status
  for (int n = 0; n < sfm_.receivers(); ++n)
    rec.erased[static_cast<std::size_t>(n)] =
        channel_rng_.bernoulli(channel_.erasure_probs[static_cast<std::size_t>(n)]) ? 1 : 0;
  for (int n = 0; n < sfm_.receivers(); ++n)
    if (!rec.erased[static_cast<std::size_t>(n)] && !receiver_complete(n))
      process(n, v, rec.decoded_events);
  log_.push_back(std::move(rec));
  return log_.back();
}

SessionResult Session::result() const {
  SessionResult out;
  out.decode_slot = decode_slot_;
  out.completion_slot = completion_slot_;
  out.completed = all_complete();
  out.slots_used = slot_;
  out.completion = 0;
  for (int n = 0; n < sfm_.receivers(); ++n)
    if (receiver_complete(n))
      out.completion = std::max(out.completion, completion_slot_[static_cast<std::size_t>(n)]);
  return out;
}

SessionResult Session::run() { return run(default_max_slots()); }

SessionResult Session::run(long max_slots) {
  if (max_slots < 1) throw std::invalid_argument("max_slots must be at least 1");
  while (!all_complete() && slot_ < max_slots) step();
  return result();
}

}  // namespace lnc
