#include "lncsim/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "lncsim/metrics.hpp"

namespace lnc::oracle {

namespace {

constexpr long kInfinity = std::numeric_limits<long>::max() / 4;

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

CodingVector nth_vector(std::uint64_t index, std::uint32_t q, int k) {
  CodingVector v(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    v[static_cast<std::size_t>(j)] = static_cast<Fe>(index % q);
    index /= q;
  }
  return v;
}

void append_rows_key(std::string& key, const std::vector<CodingVector>& rows) {
  for (const auto& row : rows) {
    for (Fe c : row) {
      key.push_back(static_cast<char>(c & 0xFF));
      key.push_back(static_cast<char>((c >> 8) & 0xFF));
    }
    key.push_back('|');
  }
}

std::string span_key(const EliminationState& state) {
  std::string key;
  append_rows_key(key, state.rows());
  return key;
}

// Per-receiver search state for the APDD oracle.
struct ReceiverStates {
  std::vector<EliminationState> elim;
  std::vector<int> residual;  // wanted, not yet decoded

  long total_residual() const {
    long r = 0;
    for (int c : residual) r += c;
    return r;
  }

  // Signature of the whole state up to receiver permutation: the sorted
  // multiset of (side info, basis) keys. Receivers with equal side info and
  // equal bases are interchangeable for any future schedule.
  std::string key() const {
    std::vector<std::string> parts(elim.size());
    for (std::size_t n = 0; n < elim.size(); ++n) {
      std::string& part = parts[n];
      for (int k : elim[n].side_info()) part.push_back(static_cast<char>(k + 1));
      part.push_back(':');
      append_rows_key(part, elim[n].rows());
    }
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (auto& p : parts) {
      key += p;
      key.push_back(';');
    }
    return key;
  }
};

ReceiverStates initial_states(const Sfm& sfm, const GfField& field) {
  ReceiverStates s;
  for (int n = 0; n < sfm.receivers(); ++n) {
    s.elim.emplace_back(field, sfm.packets(), sfm.side_info(n));
    s.residual.push_back(sfm.weight(n));
  }
  return s;
}

// Absorbs v into every receiver; returns the number of fresh decodes.
long apply_vector(ReceiverStates& s, const CodingVector& v) {
  long decodes = 0;
  for (std::size_t n = 0; n < s.elim.size(); ++n) {
    if (s.residual[n] == 0) continue;
    const auto fresh = s.elim[n].absorb(v);
    s.residual[n] -= static_cast<int>(fresh.size());
    decodes += static_cast<long>(fresh.size());
  }
  return decodes;
}

struct ApddSearch {
  const Sfm* sfm;
  const GfField* field;
  std::uint64_t vector_count;
  long nodes = 0;

  struct Entry {
    long h = kInfinity;
    CodingVector best;
  };
  std::unordered_map<std::string, Entry> memo;

  // Minimum over schedules of the residual decode-slot sum, counted relative
  // to the current slot; budget caps the remaining schedule length.
  long solve(const ReceiverStates& state, int budget) {
    const long residual = state.total_residual();
    if (residual == 0) return 0;
    if (budget <= 0) return kInfinity;

    const std::string key = state.key() + '#' + std::to_string(budget);
    if (auto it = memo.find(key); it != memo.end()) return it->second.h;
    ++nodes;

    Entry entry;
    std::unordered_set<std::string> tried;
    const std::string here = state.key();
    for (std::uint64_t i = 1; i < vector_count; ++i) {
      const CodingVector v = nth_vector(i, field->order(), sfm->packets());
      ReceiverStates next = state;
      apply_vector(next, v);
      std::string next_key = next.key();
      if (next_key == here) continue;  // changed nothing; only delays decodes
      if (!tried.insert(next_key).second) continue;
      const long tail = solve(next, budget - 1);
      if (tail >= kInfinity) continue;
      const long total = residual + tail;
      if (total < entry.h) {
        entry.h = total;
        entry.best = v;
      }
    }
    memo.emplace(key, entry);
    return entry.h;
  }
};

}  // namespace

void check_envelope(const Sfm& sfm, const FieldSpec& field) {
  if (sfm.packets() > 6 || sfm.receivers() > 12)
    throw CapabilityError("oracle search envelope is K <= 6, N <= 12; got K = " +
                          std::to_string(sfm.packets()) + ", N = " +
                          std::to_string(sfm.receivers()));
  const std::uint64_t q = 1ULL << field.m;
  if (pow_u64(q, sfm.packets()) > 4096)
    throw CapabilityError("oracle search envelope is q^K <= 4096; got q = " + std::to_string(q) +
                          ", K = " + std::to_string(sfm.packets()));
}

OracleResult min_completion(const Sfm& sfm, FieldSpec field_spec, int horizon) {
  check_envelope(sfm, field_spec);
  if (horizon == 0) horizon = sfm.packets() + 2;
  if (horizon < sfm.max_weight())
    throw std::invalid_argument("horizon below max w_n can never complete");
  const GfField field(field_spec);
  const std::uint64_t vectors = pow_u64(field.order(), sfm.packets());

  const auto complete_under = [&](const std::vector<CodingVector>& basis) {
    for (int n = 0; n < sfm.receivers(); ++n) {
      if (sfm.weight(n) == 0) continue;
      EliminationState st(field, sfm.packets(), sfm.side_info(n));
      for (const auto& row : basis) st.absorb(row);
      for (int k : sfm.wanted_by(n))
        if (!st.is_decoded(k)) return false;
    }
    return true;
  };

  OracleResult out;
  std::vector<std::vector<CodingVector>> frontier{{}};
  std::unordered_set<std::string> visited{std::string()};
  out.nodes_explored = 1;
  const int max_dim = std::min(horizon, sfm.packets());
  for (int dim = 0; dim <= max_dim; ++dim) {
    for (const auto& basis : frontier) {
      if (complete_under(basis)) {
        out.feasible = true;
        out.completion = dim;
        out.witness = basis;
        return out;
      }
    }
    if (dim == max_dim) break;
    std::vector<std::vector<CodingVector>> next;
    for (const auto& basis : frontier) {
      EliminationState base(field, sfm.packets());
      for (const auto& row : basis) base.absorb(row);
      for (std::uint64_t i = 1; i < vectors; ++i) {
        const CodingVector v = nth_vector(i, field.order(), sfm.packets());
        if (!base.is_innovative(v)) continue;
        EliminationState span = base;
        span.absorb(v);
        if (!visited.insert(span_key(span)).second) continue;
        next.push_back(span.rows());
        ++out.nodes_explored;
      }
    }
    frontier = std::move(next);
  }
  out.feasible = false;
  return out;
}

OracleResult min_apdd(const Sfm& sfm, FieldSpec field_spec, int horizon) {
  check_envelope(sfm, field_spec);
  if (horizon == 0) horizon = sfm.packets() + 2;
  if (horizon < sfm.max_weight())
    throw std::invalid_argument("horizon below max w_n can never complete");
  const GfField field(field_spec);

  ApddSearch search;
  search.sfm = &sfm;
  search.field = &field;
  search.vector_count = pow_u64(field.order(), sfm.packets());

  ReceiverStates state = initial_states(sfm, field);
  const long total_wants = sfm.total_wants();
  const long h = search.solve(state, horizon);

  OracleResult out;
  out.nodes_explored = search.nodes;
  if (h >= kInfinity) return out;
  out.feasible = true;
  out.apdd = total_wants > 0 ? Rational(h, total_wants) : Rational(0);

  // walk the memoized optimal schedule back out
  int budget = horizon;
  while (state.total_residual() > 0) {
    const auto it = search.memo.find(state.key() + '#' + std::to_string(budget));
    if (it == search.memo.end() || it->second.h >= kInfinity) break;
    out.witness.push_back(it->second.best);
    apply_vector(state, it->second.best);
    --budget;
  }
  return out;
}

Rational min_apdd_receiver(const Sfm& sfm, int n) {
  if (n < 0 || n >= sfm.receivers()) throw std::out_of_range("receiver index out of range");
  const int w = sfm.weight(n);
  if (w == 0)
    throw MetricUndefinedError("receiver " + std::to_string(n + 1) +
                               " wants nothing and is excluded from APDD limits");
  return Rational(w + 1, 2);
}

}  // namespace lnc::oracle
