#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smmt/pipeline.hpp"

namespace smmt::netbench {

/// Addresses whose top `length` bits equal those of `prefix`.
struct Cidr {
  std::uint64_t prefix = 0;  ///< full-width value, low bits zero
  std::size_t length = 0;

  bool contains(std::uint64_t addr, std::size_t width) const;
  std::uint64_t lo() const { return prefix; }
  std::uint64_t hi(std::size_t width) const;
};

enum class Kind { Source, Simple, Transformer, Destination };

struct Component {
  Kind kind = Kind::Simple;
  std::size_t layer = 0;
  Cidr control;               ///< Simple, Destination
  std::uint64_t rewrite = 0;  ///< Transformer
  bool drop_all = false;      ///< Simple: relays nothing
};

struct NetworkSpec {
  std::uint64_t seed = 0;
  std::size_t layers = 0, per_layer = 0, width = 8;
  std::vector<Component> nodes;  ///< source first, destination last
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  bool decoy = false;  ///< add an unrelated reachability constraint

  std::size_t source() const { return 0; }
  std::size_t destination() const { return nodes.size() - 1; }
};

/// Layered DAG source -> layers x per_layer components -> destination. The
/// destination accepts a CIDR block disjoint from every packet that can arrive.
NetworkSpec generate(std::uint64_t seed, std::size_t layers, std::size_t per_layer, std::size_t width = 8,
                     bool decoy = false);

/// Addresses that can reach each node (indexed [node][address]).
std::vector<std::vector<bool>> arriving(const NetworkSpec& spec);

/// Packets as per-node bit-vectors, hops as symbolic edges guarded by the
/// component behaviour, reach(source, destination) and acceptance asserted.
Instance encode(const NetworkSpec& spec);

struct TierEntry {
  std::uint64_t seed = 0;
  std::size_t layers = 0, per_layer = 0, width = 8;
  bool decoy = false;
  std::string name() const;
};

/// The 24-instance desk-scale suite: 8-bit addresses, 3-5 layers.
std::vector<TierEntry> oracle_tier();
std::string manifest_to_string(const std::vector<TierEntry>& entries);
std::vector<TierEntry> parse_manifest(const std::string& text);

}  // namespace smmt::netbench
