#include "lncsim/gf.hpp"

#include <algorithm>
#include <bit>

namespace lnc {

namespace {

int poly_degree(std::uint64_t p) { return p == 0 ? -1 : std::bit_width(p) - 1; }

std::uint64_t poly_mod(std::uint64_t a, std::uint32_t mod) {
  const int dm = poly_degree(mod);
  int da = poly_degree(a);
  while (da >= dm) {
    a ^= static_cast<std::uint64_t>(mod) << (da - dm);
    da = poly_degree(a);
  }
  return a;
}

}  // namespace

FieldSpec FieldSpec::for_order(std::uint32_t q) {
  switch (q) {
    case 2: return gf2();
    case 4: return gf4();
    case 16: return gf16();
    case 256: return gf256();
    default: throw std::invalid_argument("no shipped field of order " + std::to_string(q));
  }
}

bool poly_irreducible(std::uint32_t poly, int m) {
  if (poly_degree(poly) != m) return false;
  if (m == 1) return true;
  if ((poly & 1u) == 0) return false;  // divisible by x
  // trial division by every polynomial of degree 1..m/2
  for (int d = 1; d <= m / 2; ++d) {
    for (std::uint32_t cand = 1u << d; cand < (2u << d); ++cand) {
      if (poly_mod(poly, cand) == 0) return false;
    }
  }
  return true;
}

GfField::GfField(FieldSpec spec) : spec_(spec) {
  if (spec_.m < 1 || spec_.m > 16) throw std::invalid_argument("field exponent m must be in [1,16]");
  if (!poly_irreducible(spec_.reduction_poly, spec_.m))
    throw std::invalid_argument("reduction polynomial is not irreducible of degree m");
  q_ = 1u << spec_.m;
}

void GfField::check_operand(Fe a) const {
  if (a >= q_) throw std::domain_error("operand " + std::to_string(a) + " outside " + name());
}

Fe GfField::add(Fe a, Fe b) const {
  check_operand(a);
  check_operand(b);
  return a ^ b;
}

Fe GfField::mul(Fe a, Fe b) const {
  check_operand(a);
  check_operand(b);
  // carryless product, then reduction by the field polynomial
  std::uint32_t acc = 0;
  std::uint32_t aa = a;
  for (std::uint32_t bb = b; bb; bb >>= 1, aa <<= 1)
    if (bb & 1u) acc ^= aa;
  while (acc >= q_) {
    const int d = std::bit_width(acc) - 1;
    acc ^= spec_.reduction_poly << (d - spec_.m);
  }
  return static_cast<Fe>(acc);
}

Fe GfField::inv(Fe a) const {
  check_operand(a);
  if (a == 0) throw std::domain_error("division by zero in " + name());
  // a^(q-2) by square and multiply
  Fe result = 1;
  Fe base = a;
  for (std::uint32_t e = q_ - 2; e; e >>= 1) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

CodingVector reduce_by_side_info(const CodingVector& v, const std::vector<int>& side_info) {
  CodingVector out = v;
  for (int k : side_info) {
    if (k < 0 || k >= static_cast<int>(out.size()))
      throw std::invalid_argument("side info index out of range");
    out[static_cast<std::size_t>(k)] = 0;
  }
  return out;
}

EliminationState::EliminationState(const GfField& field, int k_packets, std::vector<int> side_info)
    : field_(&field), k_(k_packets), side_info_(std::move(side_info)) {
  if (k_ < 1) throw std::invalid_argument("packet block size must be positive");
  std::sort(side_info_.begin(), side_info_.end());
  side_info_.erase(std::unique(side_info_.begin(), side_info_.end()), side_info_.end());
  known_.assign(static_cast<std::size_t>(k_), 0);
  for (int k : side_info_) {
    if (k < 0 || k >= k_) throw std::invalid_argument("side info index out of range");
    known_[static_cast<std::size_t>(k)] = 1;
  }
  decoded_ = known_;
}

int EliminationState::pivot(const CodingVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return static_cast<int>(i);
  return -1;
}

bool EliminationState::is_decoded(int packet) const {
  if (packet < 0 || packet >= k_) throw std::invalid_argument("packet index out of range");
  return decoded_[static_cast<std::size_t>(packet)] != 0;
}

std::vector<int> EliminationState::decoded() const {
  std::vector<int> out;
  for (int k = 0; k < k_; ++k)
    if (decoded_[static_cast<std::size_t>(k)]) out.push_back(k);
  return out;
}

CodingVector EliminationState::reduce_by_side_info(const CodingVector& v) const {
  if (static_cast<int>(v.size()) != k_) throw std::invalid_argument("coding vector length mismatch");
  CodingVector out = v;
  for (int k : side_info_) out[static_cast<std::size_t>(k)] = 0;
  return out;
}

bool EliminationState::eliminate(CodingVector& v) const {
  for (const auto& row : rows_) {
    const int p = pivot(row);
    const Fe c = v[static_cast<std::size_t>(p)];
    if (c == 0) continue;
    // rows are pivot-normalized, so subtracting c*row clears coordinate p
    for (int j = p; j < k_; ++j)
      v[static_cast<std::size_t>(j)] = field_->add(v[static_cast<std::size_t>(j)],
                                                   field_->mul(c, row[static_cast<std::size_t>(j)]));
  }
  return pivot(v) >= 0;
}

bool EliminationState::is_innovative(const CodingVector& v) const {
  CodingVector w = reduce_by_side_info(v);
  return eliminate(w);
}

std::vector<int> EliminationState::absorb(const CodingVector& v) {
  CodingVector w = reduce_by_side_info(v);
  if (!eliminate(w)) return {};

  const int p = pivot(w);
  const Fe lead = w[static_cast<std::size_t>(p)];
  if (lead != 1) {
    const Fe il = field_->inv(lead);
    for (auto& c : w) c = field_->mul(c, il);
  }
  // back-substitute into the existing rows
  for (auto& row : rows_) {
    const Fe c = row[static_cast<std::size_t>(p)];
    if (c == 0) continue;
    for (int j = p; j < k_; ++j)
      row[static_cast<std::size_t>(j)] = field_->add(row[static_cast<std::size_t>(j)],
                                                     field_->mul(c, w[static_cast<std::size_t>(j)]));
  }
  auto it = std::find_if(rows_.begin(), rows_.end(),
                         [&](const CodingVector& r) { return pivot(r) > p; });
  rows_.insert(it, std::move(w));

  std::vector<int> fresh;
  for (const auto& row : rows_) {
    int nonzero = 0;
    for (Fe c : row)
      if (c != 0) ++nonzero;
    if (nonzero != 1) continue;
    const int k = pivot(row);
    if (!decoded_[static_cast<std::size_t>(k)]) {
      decoded_[static_cast<std::size_t>(k)] = 1;
      fresh.push_back(k);
    }
  }
  std::sort(fresh.begin(), fresh.end());
  return fresh;
}

}  // namespace lnc
