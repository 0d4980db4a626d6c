#pragma once

#include <vector>

#include "lncsim/gf.hpp"
#include "lncsim/rational.hpp"
#include "lncsim/sfmgen.hpp"

namespace lnc::oracle {

// Instance is outside the documented search envelope.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  bool feasible = false;       // false: no completion within the horizon
  long completion = 0;         // minimum U (completion objective)
  Rational apdd;               // minimum D (apdd objective)
  std::vector<CodingVector> witness;
  long nodes_explored = 0;
};

// Envelope for exhaustive search: K <= 6, N <= 12, q^K <= 4096. The q = 2
// default is the only field searched exhaustively in routine use; small
// fields (4, 16) are supported for field-size sweeps on instances where the
// binary search falls short of max w_n.
void check_envelope(const Sfm& sfm, const FieldSpec& field);

// Minimum number of erasure-free slots after which every receiver with
// w_n >= 1 has decoded everything it wants, under full-memory decoding.
// horizon = 0 uses K + 2. Searches canonical received subspaces
// breadth-first by dimension.
OracleResult min_completion(const Sfm& sfm, FieldSpec field = FieldSpec::gf2(), int horizon = 0);

// Minimum overall APDD over erasure-free schedules, exact rational.
// Depth-first search over schedules with memoization keyed on the multiset
// of receiver elimination-state signatures; slots that change nothing are
// pruned (they can only delay decodes).
OracleResult min_apdd(const Sfm& sfm, FieldSpec field = FieldSpec::gf2(), int horizon = 0);

// Closed form (w_n + 1)/2: serving receiver n alone, uncoded, attains the
// per-receiver APDD limit.
Rational min_apdd_receiver(const Sfm& sfm, int n);

}  // namespace lnc::oracle
