#include "smmt/circuit.hpp"

namespace smmt {

void CircuitBuilder::clause(std::initializer_list<Bit> bits) { clause(std::vector<Bit>(bits)); }

void CircuitBuilder::clause(const std::vector<Bit>& bits) {
  Clause c;
  for (const Bit& b : bits) {
    if (b.is_true()) return;
    if (!b.is_const()) c.push_back(b.lit());
  }
  out_.add(std::move(c));
}

Bit CircuitBuilder::and_(Bit a, Bit b) {
  if (a.is_false() || b.is_false()) return Bit::constant(false);
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a == b) return a;
  if (a == ~b) return Bit::constant(false);
  Bit o = Bit::of(fresh());
  clause({~o, a});
  clause({~o, b});
  clause({o, ~a, ~b});
  return o;
}

Bit CircuitBuilder::or_(Bit a, Bit b) { return ~and_(~a, ~b); }

Bit CircuitBuilder::xor_(Bit a, Bit b) {
  if (a.is_const()) return a.value() ? ~b : b;
  if (b.is_const()) return b.value() ? ~a : a;
  if (a == b) return Bit::constant(false);
  if (a == ~b) return Bit::constant(true);
  Bit o = Bit::of(fresh());
  clause({~o, a, b});
  clause({~o, ~a, ~b});
  clause({o, ~a, b});
  clause({o, a, ~b});
  return o;
}

Bit CircuitBuilder::maj(Bit a, Bit b, Bit c) {
  if (a.is_const()) return a.value() ? or_(b, c) : and_(b, c);
  if (b.is_const()) return b.value() ? or_(a, c) : and_(a, c);
  if (c.is_const()) return c.value() ? or_(a, b) : and_(a, b);
  Bit o = Bit::of(fresh());
  clause({~o, a, b});
  clause({~o, a, c});
  clause({~o, b, c});
  clause({o, ~a, ~b});
  clause({o, ~a, ~c});
  clause({o, ~b, ~c});
  return o;
}

BitVec CircuitBuilder::add(const BitVec& a, const BitVec& b, std::size_t width) {
  BitVec x = resize(a, width), y = resize(b, width), s(width);
  Bit carry = Bit::constant(false);
  for (std::size_t i = 0; i < width; ++i) {
    s[i] = xor_(xor_(x[i], y[i]), carry);
    if (i + 1 < width) carry = maj(x[i], y[i], carry);
  }
  return s;
}

BitVec CircuitBuilder::sum(const std::vector<BitVec>& terms, std::size_t width) {
  if (terms.empty()) return BitVec(width, Bit::constant(false));
  BitVec acc = resize(terms[0], width);
  for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i], width);
  return acc;
}

Bit CircuitBuilder::gt(const BitVec& a, const BitVec& b) {
  std::size_t w = std::max(a.size(), b.size());
  BitVec x = resize(a, w), y = resize(b, w);
  // scan lsb to msb: g = (x_i & ~y_i) | (~(x_i ^ y_i) & g)
  Bit g = Bit::constant(false);
  for (std::size_t i = 0; i < w; ++i) {
    Bit win = and_(x[i], ~y[i]);
    Bit same = ~xor_(x[i], y[i]);
    g = or_(win, and_(same, g));
  }
  return g;
}

void CircuitBuilder::equate(Lit out, Bit b) {
  Bit o = Bit::of(out);
  clause({~o, b});
  clause({o, ~b});
}

BitVec resize(BitVec v, std::size_t width) {
  v.resize(width, Bit::constant(false));
  return v;
}

std::size_t sum_width(std::size_t k, std::size_t n) {
  std::size_t extra = 0;
  while ((std::size_t{1} << extra) < n) ++extra;
  return k + extra;
}

}  // namespace smmt
