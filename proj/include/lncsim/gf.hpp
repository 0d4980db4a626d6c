#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnc {

// Field element of GF(2^m), m <= 16.
using Fe = std::uint16_t;

// One broadcast slot's coding coefficients, length K.
using CodingVector = std::vector<Fe>;

// Binary characteristic field description. The reduction polynomial is a
// degree-m bitmask (bit m set); construction of GfField rejects anything
// that is not irreducible.
struct FieldSpec {
  int m = 1;
  std::uint32_t reduction_poly = 0x3;

  static FieldSpec gf2() { return {1, 0x3}; }
  static FieldSpec gf4() { return {2, 0x7}; }
  static FieldSpec gf16() { return {4, 0x13}; }
  static FieldSpec gf256() { return {8, 0x11B}; }

  // Spec for GF(q), q in {2, 4, 16, 256}.
  static FieldSpec for_order(std::uint32_t q);
};

bool poly_irreducible(std::uint32_t poly, int m);

class GfField {
 public:
  explicit GfField(FieldSpec spec);

  int m() const { return spec_.m; }
  std::uint32_t order() const { return q_; }
  const FieldSpec& spec() const { return spec_; }

  Fe add(Fe a, Fe b) const;
  Fe mul(Fe a, Fe b) const;
  Fe inv(Fe a) const;  // throws std::domain_error on a == 0

  std::string name() const { return "GF(" + std::to_string(q_) + ")"; }

 private:
  void check_operand(Fe a) const;

  FieldSpec spec_;
  std::uint32_t q_ = 2;
};

// Zeroes every coordinate listed in side_info (0-based packet indices).
CodingVector reduce_by_side_info(const CodingVector& v, const std::vector<int>& side_info);

// Incremental Gaussian elimination workspace of one receiver. Rows are kept
// in reduced row echelon form at all times; a packet is decodable exactly
// when its unit row is present (for an RREF basis, e_k is in the rowspace
// iff e_k is literally a row). Dependent vectors are discarded.
class EliminationState {
 public:
  EliminationState(const GfField& field, int k_packets, std::vector<int> side_info = {});

  int k() const { return k_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<CodingVector>& rows() const { return rows_; }
  const std::vector<int>& side_info() const { return side_info_; }

  bool is_decoded(int packet) const;
  std::vector<int> decoded() const;  // sorted; includes side info

  CodingVector reduce_by_side_info(const CodingVector& v) const;

  // True iff the side-info-reduced vector is independent of the current rows.
  // Does not mutate.
  bool is_innovative(const CodingVector& v) const;

  // Inserts the effective vector into the basis (or discards it if
  // dependent) and returns the packet indices whose unit rows newly
  // appeared, sorted ascending.
  std::vector<int> absorb(const CodingVector& v);

 private:
  // Reduces v in place against the basis; returns false if it vanishes.
  bool eliminate(CodingVector& v) const;
  static int pivot(const CodingVector& v);

  const GfField* field_;
  int k_;
  std::vector<CodingVector> rows_;  // RREF, ordered by pivot column
  std::vector<int> side_info_;      // sorted
  std::vector<std::uint8_t> known_;     // side-info mask
  std::vector<std::uint8_t> decoded_;   // side info + unit rows
};

}  // namespace lnc
