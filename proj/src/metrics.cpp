#include "lncsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lncsim/rng.hpp"

namespace lnc {

namespace {

constexpr std::uint64_t kTrialStream = 0x747269616cULL;

void require_receiver_defined(const SessionResult& result, const Sfm& sfm, int n) {
  if (n < 0 || n >= sfm.receivers()) throw std::out_of_range("receiver index out of range");
  if (sfm.weight(n) == 0)
    throw MetricUndefinedError("receiver " + std::to_string(n + 1) + " wants nothing; APDD is undefined");
  for (int k : sfm.wanted_by(n))
    if (result.decode_slot[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] == 0)
      throw MetricUndefinedError("receiver " + std::to_string(n + 1) + " has not decoded packet " +
                                 std::to_string(k + 1));
}

// Streaming mean/variance (Welford); merge order never affects the inputs
// because trials are accumulated in trial order.
struct Accumulator {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double standard_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

Rational apdd_receiver(const SessionResult& result, const Sfm& sfm, int n) {
  require_receiver_defined(result, sfm, n);
  std::int64_t sum = 0;
  for (int k : sfm.wanted_by(n))
    sum += result.decode_slot[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  return Rational(sum, sfm.weight(n));
}

Rational apdd_overall(const SessionResult& result, const Sfm& sfm) {
  std::int64_t sum = 0;
  std::int64_t wants = 0;
  for (int n = 0; n < sfm.receivers(); ++n) {
    if (sfm.weight(n) == 0) continue;
    require_receiver_defined(result, sfm, n);
    for (int k : sfm.wanted_by(n))
      sum += result.decode_slot[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    wants += sfm.weight(n);
  }
  if (wants == 0) throw MetricUndefinedError("no receiver wants any packet; APDD is undefined");
  return Rational(sum, wants);
}

std::pair<std::vector<long>, long> completion_stats(const SessionResult& result, const Sfm& sfm) {
  if (!result.completed)
    throw MetricUndefinedError("session was truncated; completion metrics are undefined");
  long u = 0;
  for (int n = 0; n < sfm.receivers(); ++n)
    u = std::max(u, result.completion_slot[static_cast<std::size_t>(n)]);
  return {result.completion_slot, u};
}

Bounds bounds(const Sfm& sfm) { return bounds(sfm, ChannelSpec::lossless(sfm.receivers())); }

Bounds bounds(const Sfm& sfm, const ChannelSpec& channel) {
  channel.validate(sfm.receivers());
  Bounds b;
  b.u_lower.resize(static_cast<std::size_t>(sfm.receivers()), 0.0);
  b.d_lower.resize(static_cast<std::size_t>(sfm.receivers()), 0.0);
  double weighted_d = 0.0;
  long total_w = 0;
  for (int n = 0; n < sfm.receivers(); ++n) {
    const int w = sfm.weight(n);
    if (w == 0) continue;
    const double success = 1.0 - channel.erasure_probs[static_cast<std::size_t>(n)];
    b.u_lower[static_cast<std::size_t>(n)] = w / success;
    b.d_lower[static_cast<std::size_t>(n)] = (w + 1) / (2.0 * success);
    b.u_lower_overall = std::max(b.u_lower_overall, b.u_lower[static_cast<std::size_t>(n)]);
    weighted_d += w * b.d_lower[static_cast<std::size_t>(n)];
    total_w += w;
  }
  if (total_w > 0) b.d_lower_overall = weighted_d / static_cast<double>(total_w);
  return b;
}

Estimates monte_carlo(const Sfm& sfm, const ChannelSpec& channel, const GfField& field,
                      const SchemeSpec& scheme, MemoryMode mode, long trials,
                      std::uint64_t master_seed, long max_slots, const PerTrialHook& per_trial) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  channel.validate(sfm.receivers());

  const int n_receivers = sfm.receivers();
  std::vector<Accumulator> acc_un(static_cast<std::size_t>(n_receivers));
  std::vector<Accumulator> acc_dn(static_cast<std::size_t>(n_receivers));
  Accumulator acc_u, acc_d;
  long truncated = 0;

  for (long t = 0; t < trials; ++t) {
    Session session(sfm, channel, field, scheme, mode,
                    derive_seed(master_seed, kTrialStream + static_cast<std::uint64_t>(t)));
    const SessionResult result = max_slots > 0 ? session.run(max_slots) : session.run();
    if (!result.completed) {
      ++truncated;
      continue;
    }
    if (per_trial) per_trial(t, result);
    for (int n = 0; n < n_receivers; ++n) {
      if (sfm.weight(n) == 0) continue;
      acc_un[static_cast<std::size_t>(n)].add(
          static_cast<double>(result.completion_slot[static_cast<std::size_t>(n)]));
      acc_dn[static_cast<std::size_t>(n)].add(apdd_receiver(result, sfm, n).to_double());
    }
    acc_u.add(static_cast<double>(result.completion));
    acc_d.add(apdd_overall(result, sfm).to_double());
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  Estimates est;
  est.trials = trials;
  est.truncated = truncated;
  est.truncation_warning = truncated * 100 > trials;
  est.e_un.resize(static_cast<std::size_t>(n_receivers), nan);
  est.se_un.resize(static_cast<std::size_t>(n_receivers), nan);
  est.e_dn.resize(static_cast<std::size_t>(n_receivers), nan);
  est.se_dn.resize(static_cast<std::size_t>(n_receivers), nan);
  for (int n = 0; n < n_receivers; ++n) {
    if (sfm.weight(n) == 0 || acc_un[static_cast<std::size_t>(n)].n == 0) continue;
    est.e_un[static_cast<std::size_t>(n)] = acc_un[static_cast<std::size_t>(n)].mean;
    est.se_un[static_cast<std::size_t>(n)] = acc_un[static_cast<std::size_t>(n)].standard_error();
    est.e_dn[static_cast<std::size_t>(n)] = acc_dn[static_cast<std::size_t>(n)].mean;
    est.se_dn[static_cast<std::size_t>(n)] = acc_dn[static_cast<std::size_t>(n)].standard_error();
  }
  est.e_u = acc_u.mean;
  est.se_u = acc_u.standard_error();
  est.e_d = acc_d.mean;
  est.se_d = acc_d.standard_error();
  return est;
}

ApproxReport approximation_report(const Estimates& estimates, const Bounds& bounds,
                                  const Sfm& sfm) {
  const int n_receivers = sfm.receivers();
  if (static_cast<int>(estimates.e_un.size()) != n_receivers ||
      static_cast<int>(bounds.u_lower.size()) != n_receivers)
    throw std::invalid_argument("estimates, bounds and SFM describe different receiver counts");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ApproxReport rep;
  rep.trials = estimates.trials;
  rep.throughput_ratio.assign(static_cast<std::size_t>(n_receivers), nan);
  rep.throughput_ratio_se.assign(static_cast<std::size_t>(n_receivers), nan);
  rep.apdd_ratio.assign(static_cast<std::size_t>(n_receivers), nan);
  rep.apdd_ratio_se.assign(static_cast<std::size_t>(n_receivers), nan);
  for (int n = 0; n < n_receivers; ++n) {
    if (sfm.weight(n) == 0) continue;
    const auto i = static_cast<std::size_t>(n);
    rep.throughput_ratio[i] = estimates.e_un[i] / bounds.u_lower[i];
    rep.throughput_ratio_se[i] = estimates.se_un[i] / bounds.u_lower[i];
    rep.apdd_ratio[i] = estimates.e_dn[i] / bounds.d_lower[i];
    rep.apdd_ratio_se[i] = estimates.se_dn[i] / bounds.d_lower[i];
    rep.strong_throughput = std::max(rep.strong_throughput, rep.throughput_ratio[i]);
    rep.strong_apdd = std::max(rep.strong_apdd, rep.apdd_ratio[i]);
  }
  if (bounds.u_lower_overall > 0) {
    rep.weak_throughput = estimates.e_u / bounds.u_lower_overall;
    rep.weak_throughput_se = estimates.se_u / bounds.u_lower_overall;
  }
  if (bounds.d_lower_overall > 0) {
    rep.weak_apdd = estimates.e_d / bounds.d_lower_overall;
    rep.weak_apdd_se = estimates.se_d / bounds.d_lower_overall;
  }
  return rep;
}

}  // namespace lnc
