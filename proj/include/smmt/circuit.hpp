#pragma once

#include <vector>

#include "smmt/cnf.hpp"
#include "smmt/definition.hpp"

namespace smmt {

/// Either a constant or a literal. Lets circuits fold constant bits.
class Bit {
public:
  Bit() : konst_(true), value_(false) {}
  static Bit constant(bool v) {
    Bit b;
    b.value_ = v;
    return b;
  }
  static Bit of(Lit l) {
    Bit b;
    b.konst_ = false;
    b.lit_ = l;
    return b;
  }
  static Bit var(Var v) { return of(Lit::pos(v)); }

  bool is_const() const { return konst_; }
  bool value() const { return value_; }
  Lit lit() const { return lit_; }
  bool is_true() const { return konst_ && value_; }
  bool is_false() const { return konst_ && !value_; }

  Bit operator~() const { return konst_ ? constant(!value_) : of(~lit_); }
  friend bool operator==(const Bit&, const Bit&) = default;

private:
  bool konst_;
  bool value_ = false;
  Lit lit_;
};

using BitVec = std::vector<Bit>;

/// Tseitin gates (both directions) over Bits. Gates with constant inputs fold.
class CircuitBuilder {
public:
  CircuitBuilder(CnfFormula& out, VarPool& pool) : out_(out), pool_(pool) {}

  /// Adds the disjunction; false constants drop out, a true constant drops the clause.
  void clause(std::initializer_list<Bit> bits);
  void clause(const std::vector<Bit>& bits);

  Bit and_(Bit a, Bit b);
  Bit or_(Bit a, Bit b);
  Bit xor_(Bit a, Bit b);
  Bit maj(Bit a, Bit b, Bit c);

  /// Ripple-carry a + b truncated to `width` bits (lsb first).
  BitVec add(const BitVec& a, const BitVec& b, std::size_t width);
  /// Left-to-right sum of the terms, `width` bits.
  BitVec sum(const std::vector<BitVec>& terms, std::size_t width);
  /// val(a) > val(b); shorter vector is zero-extended.
  Bit gt(const BitVec& a, const BitVec& b);
  /// out <=> b
  void equate(Lit out, Bit b);

  CnfFormula& formula() { return out_; }
  VarPool& pool() { return pool_; }

private:
  Lit fresh() { return Lit::pos(pool_.fresh()); }

  CnfFormula& out_;
  VarPool& pool_;
};

/// Zero-extends or truncates to `width`.
BitVec resize(BitVec v, std::size_t width);
/// Bits needed for a sum of n values of width k: k + ceil(log2 n).
std::size_t sum_width(std::size_t k, std::size_t n);

}  // namespace smmt
