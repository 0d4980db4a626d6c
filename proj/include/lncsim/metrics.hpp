#pragma once

#include <functional>
#include <vector>

#include "lncsim/rational.hpp"
#include "lncsim/session.hpp"

namespace lnc {

// Requested metric is undefined for this input (incomplete receiver,
// truncated session, or a receiver that wants nothing).
struct MetricUndefinedError : std::domain_error {
  using std::domain_error::domain_error;
};

// Analytic per-receiver and aggregate lower bounds. Without a channel these
// are the erasure-free limits w_n and (w_n+1)/2; with a channel each is
// divided by (1 - P_e,n). Entries for receivers with w_n = 0 are 0 and
// excluded from the aggregates. The aggregate APDD value is a lower bound,
// not an optimum.
struct Bounds {
  std::vector<double> u_lower;  // per receiver
  std::vector<double> d_lower;
  double u_lower_overall = 0.0;  // max_n
  double d_lower_overall = 0.0;  // want-weighted mean of d_lower
};

// Monte Carlo estimate bundle. Means and standard errors are over completed
// trials; per-receiver entries for w_n = 0 receivers are NaN.
struct Estimates {
  std::vector<double> e_un, se_un, e_dn, se_dn;
  double e_u = 0.0, se_u = 0.0, e_d = 0.0, se_d = 0.0;
  long trials = 0;
  long truncated = 0;
  bool truncation_warning = false;  // more than 1% of trials truncated
};

// Ratios of measured metrics to the analytic lower bounds. Strong ratios
// take the max over receivers with w_n >= 1; weak ratios compare the
// aggregates. Standard errors are the estimate errors scaled by the bound.
struct ApproxReport {
  std::vector<double> throughput_ratio, throughput_ratio_se;
  std::vector<double> apdd_ratio, apdd_ratio_se;
  double strong_throughput = 0.0, strong_apdd = 0.0;
  double weak_throughput = 0.0, weak_throughput_se = 0.0;
  double weak_apdd = 0.0, weak_apdd_se = 0.0;
  long trials = 0;
};

// Per-receiver APDD (mean decode slot over the wanted packets), exact.
Rational apdd_receiver(const SessionResult& result, const Sfm& sfm, int n);

// APDD across all receivers: mean decode slot over every (n, k) want.
Rational apdd_overall(const SessionResult& result, const Sfm& sfm);

// (U_n sequence, U). Undefined on truncated sessions.
std::pair<std::vector<long>, long> completion_stats(const SessionResult& result, const Sfm& sfm);

Bounds bounds(const Sfm& sfm);
Bounds bounds(const Sfm& sfm, const ChannelSpec& channel);

using PerTrialHook = std::function<void(long trial, const SessionResult&)>;

// Runs `trials` independent sessions with per-trial seeds derived from
// (master_seed, trial index); results are identical for any execution order.
// max_slots = 0 uses the session default cap.
Estimates monte_carlo(const Sfm& sfm, const ChannelSpec& channel, const GfField& field,
                      const SchemeSpec& scheme, MemoryMode mode, long trials,
                      std::uint64_t master_seed, long max_slots = 0,
                      const PerTrialHook& per_trial = nullptr);

ApproxReport approximation_report(const Estimates& estimates, const Bounds& bounds,
                                  const Sfm& sfm);

}  // namespace lnc
