#include "smmt/netbench.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace smmt::netbench {

namespace {

constexpr std::size_t kMaxWidth = 20;

std::uint64_t mask_of(std::size_t width) { return (std::uint64_t{1} << width) - 1; }

Cidr random_cidr(std::mt19937_64& rng, std::size_t width, std::size_t length) {
  Cidr c;
  c.length = length;
  c.prefix = (rng() & mask_of(width)) >> (width - length) << (width - length);
  return c;
}

}  // namespace

bool Cidr::contains(std::uint64_t addr, std::size_t width) const {
  if (length == 0) return true;
  return (addr >> (width - length)) == (prefix >> (width - length));
}

std::uint64_t Cidr::hi(std::size_t width) const { return prefix | mask_of(width - length); }

std::vector<std::vector<bool>> arriving(const NetworkSpec& spec) {
  const std::size_t n = spec.nodes.size(), space = std::size_t{1} << spec.width;
  std::vector<std::vector<bool>> in(n, std::vector<bool>(space, false));
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [u, v] : spec.edges) succ[u].push_back(v);
  in[spec.source()].assign(space, true);
  // edges run from lower to higher node index
  for (std::size_t u = 0; u < n; ++u) {
    const Component& c = spec.nodes[u];
    std::vector<bool> out(space, false);
    switch (c.kind) {
      case Kind::Source: out = in[u]; break;
      case Kind::Simple:
        if (!c.drop_all)
          for (std::uint64_t a = 0; a < space; ++a) out[a] = in[u][a] && c.control.contains(a, spec.width);
        break;
      case Kind::Transformer:
        for (std::uint64_t a = 0; a < space; ++a)
          if (in[u][a]) {
            out[c.rewrite] = true;
            break;
          }
        break;
      case Kind::Destination: break;
    }
    for (std::size_t v : succ[u])
      for (std::uint64_t a = 0; a < space; ++a)
        if (out[a]) in[v][a] = true;
  }
  return in;
}

NetworkSpec generate(std::uint64_t seed, std::size_t layers, std::size_t per_layer, std::size_t width, bool decoy) {
  if (layers == 0 || per_layer == 0) throw Error("netbench: layers and components per layer must be at least 1");
  if (width == 0 || width > kMaxWidth) throw Error("netbench: address width must be in 1.." + std::to_string(kMaxWidth));
  std::mt19937_64 rng(seed);
  const std::size_t max_len = std::max<std::size_t>(1, width / 4);
  for (;;) {
    NetworkSpec spec;
    spec.seed = seed;
    spec.layers = layers;
    spec.per_layer = per_layer;
    spec.width = width;
    spec.decoy = decoy;
    spec.nodes.push_back({Kind::Source, 0, {}, 0, false});
    for (std::size_t l = 1; l <= layers; ++l)
      for (std::size_t k = 0; k < per_layer; ++k) {
        Component c;
        c.layer = l;
        if (rng() % 3 == 0) {
          c.kind = Kind::Transformer;
          c.rewrite = rng() & mask_of(width);
        } else {
          c.kind = Kind::Simple;
          c.control = random_cidr(rng, width, 1 + rng() % max_len);
        }
        spec.nodes.push_back(c);
      }
    const std::size_t dst = spec.nodes.size();
    spec.nodes.push_back({Kind::Destination, layers + 1, {}, 0, false});

    auto at = [&](std::size_t l, std::size_t k) { return 1 + (l - 1) * per_layer + k; };
    for (std::size_t k = 0; k < per_layer; ++k) spec.edges.emplace_back(0, at(1, k));
    for (std::size_t l = 1; l < layers; ++l) {
      std::vector<bool> fed(per_layer, false);
      for (std::size_t k = 0; k < per_layer; ++k) {
        const std::size_t deg = 1 + rng() % std::min<std::size_t>(2, per_layer);
        const std::size_t first = rng() % per_layer;
        for (std::size_t j = 0; j < deg; ++j) {
          const std::size_t to = (first + j) % per_layer;
          spec.edges.emplace_back(at(l, k), at(l + 1, to));
          fed[to] = true;
        }
      }
      for (std::size_t k = 0; k < per_layer; ++k)
        if (!fed[k]) spec.edges.emplace_back(at(l, rng() % per_layer), at(l + 1, k));
    }
    for (std::size_t k = 0; k < per_layer; ++k) spec.edges.emplace_back(at(layers, k), dst);
    std::sort(spec.edges.begin(), spec.edges.end());

    // widest block missing every packet that can arrive
    const std::vector<bool> arrive = arriving(spec)[dst];
    for (std::size_t len = 1; len <= width; ++len) {
      std::vector<std::uint64_t> free;
      const std::size_t shift = width - len;
      for (std::uint64_t p = 0; p < (std::uint64_t{1} << len); ++p) {
        bool hit = false;
        for (std::uint64_t a = p << shift; a <= ((p << shift) | mask_of(shift)) && !hit; ++a) hit = arrive[a];
        if (!hit) free.push_back(p << shift);
      }
      if (free.empty()) continue;
      spec.nodes[dst].control = {free[rng() % free.size()], len};
      return spec;
    }
  }
}

Instance encode(const NetworkSpec& spec) {
  const std::size_t w = spec.width, n_nodes = spec.nodes.size();
  Instance inst;
  std::vector<Clause> cls;
  Var next = 1;
  int bv_id = 0;

  if (spec.decoy) {
    GraphDecl g;
    g.id = 1;
    g.nodes = 4;
    for (auto [u, v] : {std::pair<std::size_t, std::size_t>{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 2}})
      g.edges.push_back({u, v, next++, std::nullopt, 0});
    BindingDecl d;
    d.kind = BindingKind::Reach;
    d.graph = 1;
    d.src = 0;
    d.dst = 3;
    d.pred = next++;
    cls.push_back({Lit::pos(d.pred)});
    inst.graphs.push_back(g);
    inst.bindings.push_back(d);
  }

  std::vector<std::vector<Var>> packet(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    BvDecl b;
    b.id = bv_id++;
    b.width = w;
    for (std::size_t j = 0; j < w; ++j) b.bits.push_back(next++);
    packet[i] = b.bits;
    inst.bvs.push_back(b);
  }

  GraphDecl g;
  g.id = 0;
  g.nodes = n_nodes;
  for (auto [u, v] : spec.edges) {
    const Var e = next++;
    g.edges.push_back({u, v, e, std::nullopt, 0});
    const Component& c = spec.nodes[u];
    const Lit off = Lit::neg(e);
    switch (c.kind) {
      case Kind::Simple:
        if (c.drop_all) {
          cls.push_back({off});
          break;
        }
        for (std::size_t i = 0; i < c.control.length; ++i) {
          const std::size_t j = w - 1 - i;
          cls.push_back({off, Lit::make(packet[u][j], (c.control.prefix >> j) & 1u)});
        }
        [[fallthrough]];
      case Kind::Source:
        for (std::size_t j = 0; j < w; ++j) {
          cls.push_back({off, Lit::neg(packet[u][j]), Lit::pos(packet[v][j])});
          cls.push_back({off, Lit::pos(packet[u][j]), Lit::neg(packet[v][j])});
        }
        break;
      case Kind::Transformer:
        for (std::size_t j = 0; j < w; ++j) cls.push_back({off, Lit::make(packet[v][j], (c.rewrite >> j) & 1u)});
        break;
      case Kind::Destination: throw Error("netbench: edge leaving the destination");
    }
  }
  inst.graphs.insert(inst.graphs.begin(), g);

  BindingDecl reach;
  reach.kind = BindingKind::Reach;
  reach.graph = 0;
  reach.src = spec.source();
  reach.dst = spec.destination();
  reach.pred = next++;
  cls.push_back({Lit::pos(reach.pred)});
  inst.bindings.push_back(reach);

  // lo <= packet <= hi at the destination
  const Cidr& acc = spec.nodes[spec.destination()].control;
  const int lo = bv_id++, hi = bv_id++;
  inst.bvs.push_back({lo, w, {}, acc.lo(), 0});
  inst.bvs.push_back({hi, w, {}, acc.hi(w), 0});
  BindingDecl ge;
  ge.kind = BindingKind::Ge;
  ge.pred = next++;
  ge.lhs = {static_cast<int>(spec.destination())};
  ge.rhs = {lo};
  BindingDecl le = ge;
  le.pred = next++;
  le.lhs = {hi};
  le.rhs = {static_cast<int>(spec.destination())};
  cls.push_back({Lit::pos(ge.pred)});
  cls.push_back({Lit::pos(le.pred)});
  inst.bindings.push_back(ge);
  inst.bindings.push_back(le);

  inst.cnf = CnfFormula(next - 1, std::move(cls));
  return inst;
}

std::string TierEntry::name() const {
  std::ostringstream o;
  o << "net-s" << seed << "-l" << layers << "-k" << per_layer << "-w" << width << (decoy ? "-decoy" : "");
  return o.str();
}

std::vector<TierEntry> oracle_tier() {
  std::vector<TierEntry> out;
  for (std::size_t i = 0; i < 24; ++i) out.push_back({i + 1, 3 + i % 3, 2 + (i / 3) % 2, 8, i % 4 == 3});
  return out;
}

std::string manifest_to_string(const std::vector<TierEntry>& entries) {
  std::ostringstream o;
  o << "c name seed layers per_layer width decoy\n";
  for (const TierEntry& e : entries)
    o << e.name() << ' ' << e.seed << ' ' << e.layers << ' ' << e.per_layer << ' ' << e.width << ' ' << e.decoy
      << '\n';
  return o.str();
}

std::vector<TierEntry> parse_manifest(const std::string& text) {
  std::vector<TierEntry> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string name;
    if (!(ls >> name) || name == "c") continue;
    TierEntry e;
    int decoy = 0;
    if (!(ls >> e.seed >> e.layers >> e.per_layer >> e.width >> decoy) || (decoy != 0 && decoy != 1))
      throw ParseError(line, "expected '<name> <seed> <layers> <per_layer> <width> <0|1>'");
    e.decoy = decoy == 1;
    if (e.name() != name) throw ParseError(line, "name '" + name + "' does not match the parameters");
    out.push_back(e);
  }
  return out;
}

}  // namespace smmt::netbench
