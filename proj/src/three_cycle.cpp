#include <algorithm>
#include <array>
#include <numeric>

#include "simperm/errors.hpp"
#include "simperm/synthesis.hpp"

namespace simperm {

namespace {

// Control-bit constants c_1..c_5 (index 0 unused), packed with (v'')_1 as
// bit 0 and (v'')_2 as bit 1: 00, 01, 01, 10, 11.
constexpr std::array<unsigned, 6> kCtrl = {0, 0, 2, 2, 1, 3};

std::uint64_t prefix_of(std::uint64_t v, int n) { return v & ((1ULL << (n - 2)) - 1); }
unsigned ctrl_of(std::uint64_t v, int n) { return static_cast<unsigned>(v >> (n - 2)) & 3U; }

int top_size(int n) { return (n - 1) / 2; }  // ceil((n-2)/2)

std::size_t rho_like_length(int n) {
  const int t = top_size(n);
  const int b = (n - 2) - t;
  return 2 * controlled_flip_length(t) + 2 * controlled_flip_length(b + 1);
}

// Flips T iff the prefix equals `pat`, via top/bot sub-blocks:
//   top: flip U iff the first t prefix bits match (scratch: the rest)
//   bot: flip T iff the remaining bits match and U = 1 (scratch: the top)
Word rho_like(int n, int T, int U, std::uint64_t pat, bool nop, bool labels) {
  const int t = top_size(n);
  std::vector<int> top(static_cast<std::size_t>(t));
  std::iota(top.begin(), top.end(), 0);
  std::vector<int> bot(static_cast<std::size_t>(n - 2 - t));
  std::iota(bot.begin(), bot.end(), t);

  const std::uint64_t top_pat = pat & ((1ULL << t) - 1);
  const Word wt = synth_controlled_flip(n, U, top, top_pat, bot);
  auto bot_ctrl = bot;
  bot_ctrl.push_back(U);
  const std::uint64_t bot_pat = (pat >> t) | (1ULL << bot.size());
  const Word wb = synth_controlled_flip(n, T, bot_ctrl, bot_pat, top);

  Word out;
  out.reserve(2 * (wt.size() + wb.size()));
  for (int rep = 0; rep < 2; ++rep) {
    const std::size_t b0 = out.size();
    for (const auto& g : wt.gens()) out.push(nop ? g.as_nop() : g);
    if (labels) out.label_tail(b0, "top");
    const std::size_t b1 = out.size();
    for (const auto& g : wb.gens()) out.push(nop ? g.as_nop() : g);
    if (labels) out.label_tail(b1, "bot");
  }
  return out;
}

void append_block(Word& out, const Word& block, const std::string& label, bool labels = true) {
  const std::size_t b = out.size();
  for (const auto& g : block.gens()) out.push(g);
  if (!labels) return;
  for (const auto& s : block.spans()) out.add_span({label + "." + s.label, b + s.begin, b + s.end});
  out.add_span({label, b, out.size()});
}

Word pi_block(int n, std::uint64_t v, int i, bool labels) {
  const unsigned d = ctrl_of(v, n) ^ kCtrl[static_cast<std::size_t>(i)];
  const std::uint64_t p = prefix_of(v, n);
  Word w;
  append_block(w, rho_like(n, n - 2, n - 1, p, (d & 1U) == 0, labels), "c1", labels);
  append_block(w, rho_like(n, n - 1, n - 2, p, (d & 2U) == 0, labels), "c2", labels);
  return w;
}

Word tau_block(int n, std::uint64_t vi, std::uint64_t v5, int i) {
  Word w;
  const std::uint64_t diff = prefix_of(vi ^ v5, n);
  for (int j = 0; j < n - 2; ++j) {
    const std::uint64_t table = ((diff >> j) & 1U) ? (1ULL << kCtrl[static_cast<std::size_t>(i)]) : 0;
    w.push(SimplePerm(j, {n - 2, n - 1}, table));
  }
  return w;
}

// psi = pi_a pi_b pi_4 pi_5 tau_a tau_b tau_4 rho_core (mirror), with a = 1 and
// b in {2, 3}.
void append_psi(Word& out, int n, const std::array<std::uint64_t, 6>& v, int b, const std::string& tag, bool labels) {
  Word half;
  const std::array<int, 4> pis = {1, b, 4, 5};
  for (int i : pis) {
    append_block(half, pi_block(n, v[static_cast<std::size_t>(i)], i, labels), "pi_" + std::to_string(i), labels);
  }
  const std::array<int, 3> taus = {1, b, 4};
  for (int i : taus) {
    append_block(half, tau_block(n, v[static_cast<std::size_t>(i)], v[5], i), "tau_" + std::to_string(i), labels);
  }
  Word body;
  body.reserve(2 * half.size() + rho_like_length(n));
  body.append(half);
  append_block(body, rho_like(n, n - 1, n - 2, prefix_of(v[5], n), false, labels), "rho_core", labels);
  if (labels) {
    body.append(half.reversed());
  } else {
    for (auto it = half.gens().rbegin(); it != half.gens().rend(); ++it) body.push(*it);
  }
  append_block(out, body, tag, labels);
}

Word block_word(int n, const std::array<std::uint64_t, 6>& v, bool labels = true) {
  Word w;
  w.reserve(2 * (2 * (4 * 2 * rho_like_length(n) + 3 * static_cast<std::size_t>(n - 2)) + rho_like_length(n)));
  append_psi(w, n, v, 2, "psi1", labels);
  append_psi(w, n, v, 3, "psi2", labels);
  return w;
}

std::vector<int> inverse_perm(const std::vector<int>& phi) {
  std::vector<int> inv(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) inv[static_cast<std::size_t>(phi[j])] = static_cast<int>(j);
  return inv;
}

std::vector<int> random_perm(int n, SeedStream& rng) {
  std::vector<int> phi(static_cast<std::size_t>(n));
  std::iota(phi.begin(), phi.end(), 0);
  for (int j = n - 1; j > 0; --j) {
    const auto r = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(j) + 1));
    std::swap(phi[static_cast<std::size_t>(j)], phi[static_cast<std::size_t>(r)]);
  }
  return phi;
}

// --- n = 4: search in the triple Schreier graph toward a base triple --------

struct TripleTable {
  static constexpr int n = 4;
  std::array<std::uint64_t, 6> base{};  // v1..v5 at indices 1..5
  Word base_word;
  std::vector<SimplePerm> gens;
  std::vector<int> dist;  // by key x<<8 | y<<4 | z; -1 unreachable / invalid
  int max_depth = 0;

  static unsigned key(std::uint64_t x, std::uint64_t y, std::uint64_t z) {
    return static_cast<unsigned>((x << 8) | (y << 4) | z);
  }

  TripleTable() {
    auto pt = [](std::uint64_t prefix, unsigned ctrl) { return prefix | (std::uint64_t{ctrl} << 2); };
    base = {0, pt(0, kCtrl[1]), pt(1, kCtrl[2]), pt(1, 0), pt(2, kCtrl[4]), pt(3, kCtrl[5])};
    base_word = block_word(n, base);
    gens = enumerate_sigma(SigmaSpec{n, 2});
    dist.assign(1U << 12, -1);
    std::vector<unsigned> frontier = {key(base[1], base[2], base[3])};
    dist[frontier[0]] = 0;
    while (!frontier.empty()) {
      std::vector<unsigned> next;
      for (unsigned s : frontier) {
        const std::uint64_t x = s >> 8, y = (s >> 4) & 15U, z = s & 15U;
        for (const auto& g : gens) {
          const unsigned t = key(g.apply_bits(x), g.apply_bits(y), g.apply_bits(z));
          if (dist[t] < 0) {
            dist[t] = dist[s] + 1;
            next.push_back(t);
          }
        }
      }
      if (!next.empty()) ++max_depth;
      frontier = std::move(next);
    }
  }

  std::size_t length() const { return 2 * static_cast<std::size_t>(max_depth) + base_word.size(); }
};

const TripleTable& triple_table() {
  static const TripleTable table;
  return table;
}

ThreeCycle table_cycle(const CubePoint& x, const CubePoint& y, const CubePoint& z, SeedStream& rng, bool labels) {
  const auto& T = triple_table();
  std::uint64_t a = x.bits(), b = y.bits(), c = z.bits();
  Word walk;
  std::vector<const SimplePerm*> down;
  for (int d = T.dist[T.key(a, b, c)]; d > 0; --d) {
    down.clear();
    for (const auto& g : T.gens) {
      if (T.dist[T.key(g.apply_bits(a), g.apply_bits(b), g.apply_bits(c))] == d - 1) down.push_back(&g);
    }
    const SimplePerm& g = *down[rng.uniform(down.size())];
    walk.push(g);
    a = g.apply_bits(a);
    b = g.apply_bits(b);
    c = g.apply_bits(c);
  }
  const SimplePerm nop(0, {1, 2}, 0);
  while (walk.size() < static_cast<std::size_t>(T.max_depth)) walk.push(nop);

  ThreeCycle out;
  out.word.append(walk);
  if (labels) out.word.label_tail(0, "route");
  append_block(out.word, T.base_word, "base", labels);
  const std::size_t b0 = out.word.size();
  out.word.append(walk.reversed());
  if (labels) out.word.label_tail(b0, "route");
  out.witness.phi = {0, 1, 2, 3};
  out.witness.v4 = CubePoint(4, T.base[4]);
  out.witness.v5 = CubePoint(4, T.base[5]);
  out.witness.mode = CycleMode::table;
  return out;
}

}  // namespace

std::string to_string(CycleMode m) {
  switch (m) {
    case CycleMode::full: return "full";
    case CycleMode::relaxed: return "relaxed-fallback";
    case CycleMode::table: return "table-fallback";
  }
  return "?";
}

CubePoint permute_coords(const CubePoint& x, const std::vector<int>& phi) {
  if (static_cast<int>(phi.size()) != x.dim()) throw ContractError("phi has wrong length");
  std::uint64_t v = 0;
  for (int j = 0; j < x.dim(); ++j) {
    if (x.bit(j)) v |= 1ULL << phi[static_cast<std::size_t>(j)];
  }
  return CubePoint(x.dim(), v);
}

bool phi_valid(const CubePoint& x, const CubePoint& y, const CubePoint& z, const std::vector<int>& phi) {
  const int n = x.dim();
  const auto p1 = prefix_of(permute_coords(x, phi).bits(), n);
  return p1 != prefix_of(permute_coords(y, phi).bits(), n) &&
         p1 != prefix_of(permute_coords(z, phi).bits(), n);
}

bool validate_witness(const CubePoint& x, const CubePoint& y, const CubePoint& z,
                      const ThreeCycleWitness& wit) {
  const int n = x.dim();
  if (y.dim() != n || z.dim() != n || wit.v4.dim() != n || wit.v5.dim() != n) return false;
  if (static_cast<int>(wit.phi.size()) != n) return false;
  auto sorted = wit.phi;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < n; ++j) {
    if (sorted[static_cast<std::size_t>(j)] != j) return false;
  }
  if (!phi_valid(x, y, z, wit.phi)) return false;
  const std::array<CubePoint, 3> v = {permute_coords(x, wit.phi), permute_coords(y, wit.phi),
                                      permute_coords(z, wit.phi)};
  if (hamming_distance(wit.v4, wit.v5) < 3) return false;
  for (const auto& p : v) {
    if (hamming_distance(p, wit.v4) < 3 || hamming_distance(p, wit.v5) < 3) return false;
  }
  return true;
}

std::size_t three_cycle_length(int n) {
  if (n < 4 || n > kMaxDim) {
    throw UnsupportedDimension("3-cycle synthesis needs 4 <= n <= 64, got n=" + std::to_string(n));
  }
  if (n == 4) return triple_table().length();
  const std::size_t rho = rho_like_length(n);
  const std::size_t psi = 4 * (2 * rho) + 3 * static_cast<std::size_t>(n - 2);
  return 2 * (2 * psi + rho);
}

Word three_cycle_from_witness(const CubePoint& x, const CubePoint& y, const CubePoint& z,
                              const ThreeCycleWitness& wit, bool labels) {
  const int n = x.dim();
  if (n < 5) throw UnsupportedDimension("block construction needs n >= 5");
  const std::array<std::uint64_t, 6> v = {0,
                                          permute_coords(x, wit.phi).bits(),
                                          permute_coords(y, wit.phi).bits(),
                                          permute_coords(z, wit.phi).bits(),
                                          wit.v4.bits(),
                                          wit.v5.bits()};
  Word w = block_word(n, v, labels);
  w.relabel(inverse_perm(wit.phi));
  return w;
}

ThreeCycle synth_three_cycle(int n, const CubePoint& x, const CubePoint& y, const CubePoint& z,
                             SeedStream& rng, bool labels) {
  if (x.dim() != n || y.dim() != n || z.dim() != n) throw ContractError("point dimension differs from n");
  if (x == y || y == z || x == z) throw ContractError("3-cycle needs distinct points");
  if (n < 4) {
    throw UnsupportedDimension("3-cycle synthesis is not supported at n=" + std::to_string(n) +
                               " (minimum 4)");
  }
  if (n == 4) return table_cycle(x, y, z, rng, labels);

  ThreeCycle out;
  auto& wit = out.witness;
  wit.mode = n >= kThreeCycleMinDim ? CycleMode::full : CycleMode::relaxed;
  for (;;) {
    if (++wit.phi_attempts > kRejectionBudget) {
      throw SamplingError("no valid coordinate permutation after " + std::to_string(kRejectionBudget) +
                          " attempts");
    }
    wit.phi = random_perm(n, rng);
    if (phi_valid(x, y, z, wit.phi)) break;
  }
  const std::array<CubePoint, 3> v = {permute_coords(x, wit.phi), permute_coords(y, wit.phi),
                                      permute_coords(z, wit.phi)};
  const std::uint64_t mask = n == 64 ? ~0ULL : (1ULL << n) - 1;
  auto far = [&](const CubePoint& a, const CubePoint& b) {
    if (wit.mode == CycleMode::full) return hamming_distance(a, b) >= 3;
    return prefix_of(a.bits(), n) != prefix_of(b.bits(), n);
  };
  for (;;) {
    if (++wit.v_attempts > kRejectionBudget) {
      throw SamplingError("no valid (v4, v5) after " + std::to_string(kRejectionBudget) + " attempts");
    }
    const CubePoint v4(n, rng() & mask);
    const CubePoint v5(n, rng() & mask);
    bool ok = far(v4, v5);
    for (const auto& p : v) ok = ok && far(p, v4) && far(p, v5);
    if (ok) {
      wit.v4 = v4;
      wit.v5 = v5;
      break;
    }
  }
  out.word = three_cycle_from_witness(x, y, z, wit, labels);
  return out;
}

}  // namespace simperm
