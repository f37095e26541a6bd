#include <algorithm>
#include <bit>
#include <cmath>

#include "simperm/chains.hpp"
#include "simperm/errors.hpp"

namespace simperm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t low_mask(int b) { return b >= 64 ? ~0ULL : (1ULL << b) - 1; }

std::vector<std::uint64_t> unpack(std::uint64_t key, int k, int b) {
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(k));
  for (int r = k - 1; r >= 0; --r) {
    rows[static_cast<std::size_t>(r)] = key & low_mask(b);
    key = b >= 64 ? 0 : key >> b;
  }
  return rows;
}

std::uint64_t pack(const std::vector<std::uint64_t>& rows, int b) {
  std::uint64_t key = 0;
  for (auto r : rows) key = (b >= 64 ? 0 : key << b) | r;
  return key;
}

bool all_distinct(const std::vector<std::uint64_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (v[i] == v[j]) return false;
    }
  }
  return true;
}

// Blocks are contiguous: block i covers columns [i w, (i+1) w).
bool generic_rows(const std::vector<std::uint64_t>& rows, int w, int p) {
  const std::uint64_t m = low_mask(w);
  for (int i = 0; i < p; ++i) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        if (((rows[a] >> (i * w)) & m) == ((rows[b] >> (i * w)) & m)) return false;
      }
    }
  }
  return true;
}

double falling(double m, int q) {
  double r = 1;
  for (int i = 0; i < q; ++i) r *= m - i;
  return r;
}

std::vector<Transition> merge(std::vector<Transition> t) {
  std::sort(t.begin(), t.end(), [](const Transition& a, const Transition& b) { return a.to < b.to; });
  std::vector<Transition> out;
  for (const auto& x : t) {
    if (!out.empty() && out.back().to == x.to) {
      out.back().prob += x.prob;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

void check_matrix_dims(int n, int k) {
  if (n < 1 || k < 1 || static_cast<long>(n) * k > 64) {
    throw SpecError("matrix chains need k*n <= 64 for packed states (n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ")");
  }
  if (n < 63 && static_cast<double>(k) > std::ldexp(1.0, n)) throw SpecError("k exceeds 2^n");
}

std::vector<std::uint64_t> generic_states(int w, int p, int m, int k, std::size_t limit) {
  const auto block_tuples = distinct_tuples(w, k, 1ULL << w, limit);
  const double tail_count = std::ldexp(1.0, m * k);
  const double total = std::pow(static_cast<double>(block_tuples.size()), p) * tail_count;
  if (total > static_cast<double>(limit)) {
    throw ResourceError("state space has " + std::to_string(static_cast<long long>(total)) +
                        " generic states, limit " + std::to_string(limit));
  }
  std::vector<std::vector<std::uint64_t>> partial = {std::vector<std::uint64_t>(static_cast<std::size_t>(k), 0)};
  for (int i = 0; i < p; ++i) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& rows : partial) {
      for (auto t : block_tuples) {
        const auto vals = unpack(t, k, w);
        auto r2 = rows;
        for (int r = 0; r < k; ++r) r2[static_cast<std::size_t>(r)] |= vals[static_cast<std::size_t>(r)] << (i * w);
        next.push_back(std::move(r2));
      }
    }
    partial = std::move(next);
  }
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(total));
  const std::uint64_t tails = 1ULL << (m * k);
  for (const auto& rows : partial) {
    for (std::uint64_t t = 0; t < tails; ++t) {
      const auto tv = unpack(t, k, m);
      auto r2 = rows;
      for (int r = 0; r < k; ++r) r2[static_cast<std::size_t>(r)] |= tv[static_cast<std::size_t>(r)] << (p * w);
      out.push_back(pack(r2, p * w + m));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string chain_name(const ChainSpec& spec) {
  return std::visit(
      overloaded{
          [](const SchreierSpec& s) {
            return "schreier(n=" + std::to_string(s.n) + ",k=" + std::to_string(s.k) + ",w=" + std::to_string(s.w) + ")";
          },
          [](const GenericRestrictedSpec& s) {
            return "generic(n=" + std::to_string(s.n) + ",k=" + std::to_string(s.k) + ",w=" + std::to_string(s.w) + ")";
          },
          [](const CliqueColoringSpec& s) {
            return "clique(k=" + std::to_string(s.k) + ",q=" + std::to_string(s.q) + ")";
          },
          [](const LazyHypercubeSpec& s) { return "hypercube(d=" + std::to_string(s.d) + ")"; },
          [](const ProductGlauberSpec& s) {
            return "product(k=" + std::to_string(s.k) + ",w=" + std::to_string(s.w) + ",p=" + std::to_string(s.p) +
                   ",m=" + std::to_string(s.m) + ")";
          },
          [](const ThreeCycleWalkSpec& s) {
            return "three-cycle(n=" + std::to_string(s.n) + ",k=" + std::to_string(s.k) + ")";
          },
          [](const TwoRowSpec& s) { return "two-row(n=" + std::to_string(s.n) + ",w=" + std::to_string(s.w) + ")"; },
      },
      spec);
}

double two_row_hit_probability(int n, int w, int l) {
  double miss = 1.0;
  for (int j = 1; j <= w; ++j) miss *= 1.0 - static_cast<double>(l) / (n - j);
  return 1.0 - miss;
}

std::vector<std::uint64_t> distinct_tuples(int bits, int k, std::uint64_t values, std::size_t limit) {
  const double count = falling(static_cast<double>(values), k);
  if (count > static_cast<double>(limit)) {
    throw ResourceError("state space has " + std::to_string(static_cast<long long>(count)) +
                        " tuples, limit " + std::to_string(limit));
  }
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0.0)));
  std::vector<std::uint64_t> cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(pack(cur, bits));
      return;
    }
    for (std::uint64_t v = 0; v < values; ++v) {
      if (std::find(cur.begin(), cur.end(), v) != cur.end()) continue;
      cur.push_back(v);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

Partition product_partition(int w, int p, int m) {
  Partition part;
  part.n = p * w + m;
  part.w = w;
  part.p = p;
  for (int i = 0; i < p; ++i) {
    std::vector<int> b;
    for (int c = i * w; c < (i + 1) * w; ++c) b.push_back(c);
    part.blocks.push_back(std::move(b));
  }
  for (int c = p * w; c < part.n; ++c) part.tail.push_back(c);
  return part;
}

double generic_count(const Partition& part, int k) {
  return std::pow(falling(std::ldexp(1.0, part.w), k), part.p) * std::ldexp(1.0, part.tail_size() * k);
}

TupleMatrix random_tuple(int n, int k, SeedStream& rng) {
  const std::uint64_t mask = low_mask(n);
  std::vector<std::uint64_t> rows;
  while (static_cast<int>(rows.size()) < k) {
    const std::uint64_t v = rng() & mask;
    if (std::find(rows.begin(), rows.end(), v) == rows.end()) rows.push_back(v);
  }
  return TupleMatrix(n, std::move(rows));
}

TupleMatrix random_generic(const Partition& part, int k, SeedStream& rng) {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    auto m = random_tuple(part.n, k, rng);
    if (is_generic(m, part)) return m;
  }
  throw SamplingError("no generic matrix found after 10^6 attempts");
}

Chain::Chain(ChainSpec spec) : spec_(std::move(spec)) {
  std::visit(overloaded{
                 [&](const SchreierSpec& s) {
                   check_matrix_dims(s.n, s.k);
                   SigmaSpec{s.n, s.w}.validate();
                   if (SigmaSpec{s.n, s.w}.count() <= 1000000) gens_ = enumerate_sigma({s.n, s.w});
                 },
                 [&](const GenericRestrictedSpec& s) {
                   check_matrix_dims(s.n, s.k);
                   part_ = make_partition(s.n, s.w, s.k, PartitionMode::explicit_width);
                   if (static_cast<double>(s.k) > std::ldexp(1.0, s.w)) throw SpecError("k exceeds 2^w: no generic matrices");
                   if (SigmaSpec{s.n, 2}.count() <= 1000000) gens_ = enumerate_sigma({s.n, 2});
                 },
                 [&](const CliqueColoringSpec& s) {
                   if (s.k < 1 || s.q < s.k + 1) throw SpecError("clique coloring needs q >= k + 1");
                   if (s.k * row_bits() > 64) throw SpecError("clique coloring state does not fit in 64 bits");
                 },
                 [&](const LazyHypercubeSpec& s) {
                   if (s.d < 1 || s.d > 63) throw SpecError("hypercube dimension must be in [1, 63]");
                 },
                 [&](const ProductGlauberSpec& s) {
                   if (s.k < 1 || s.w < 1 || s.p < 1 || s.m < 0) throw SpecError("product chain parameters must be positive");
                   if (static_cast<double>(s.k) >= std::ldexp(1.0, s.w)) throw SpecError("product chain needs k < 2^w");
                   check_matrix_dims(s.p * s.w + s.m, s.k);
                   part_ = product_partition(s.w, s.p, s.m);
                 },
                 [&](const ThreeCycleWalkSpec& s) {
                   check_matrix_dims(s.n, s.k);
                   if (s.n < 2) throw SpecError("3-cycles need n >= 2");
                 },
                 [&](const TwoRowSpec& s) {
                   if (s.n < 3 || 2 * s.n > 64) throw SpecError("two-row chain needs 3 <= n <= 32");
                   if (s.w < 0 || s.w > s.n - 1) throw SpecError("two-row chain needs 0 <= w <= n-1");
                 },
             },
             spec_);
}

int Chain::rows() const {
  return std::visit(overloaded{
                        [](const SchreierSpec& s) { return s.k; },
                        [](const GenericRestrictedSpec& s) { return s.k; },
                        [](const CliqueColoringSpec& s) { return s.k; },
                        [](const LazyHypercubeSpec&) { return 1; },
                        [](const ProductGlauberSpec& s) { return s.k; },
                        [](const ThreeCycleWalkSpec& s) { return s.k; },
                        [](const TwoRowSpec&) { return 2; },
                    },
                    spec_);
}

int Chain::row_bits() const {
  return std::visit(overloaded{
                        [](const SchreierSpec& s) { return s.n; },
                        [](const GenericRestrictedSpec& s) { return s.n; },
                        [](const CliqueColoringSpec& s) {
                          return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(s.q - 1))));
                        },
                        [](const LazyHypercubeSpec& s) { return s.d; },
                        [](const ProductGlauberSpec& s) { return s.p * s.w + s.m; },
                        [](const ThreeCycleWalkSpec& s) { return s.n; },
                        [](const TwoRowSpec& s) { return s.n; },
                    },
                    spec_);
}

double Chain::state_count() const {
  return std::visit(overloaded{
                        [](const SchreierSpec& s) { return falling(std::ldexp(1.0, s.n), s.k); },
                        [&](const GenericRestrictedSpec& s) { return generic_count(part_, s.k); },
                        [](const CliqueColoringSpec& s) { return falling(s.q, s.k); },
                        [](const LazyHypercubeSpec& s) { return std::ldexp(1.0, s.d); },
                        [&](const ProductGlauberSpec& s) { return generic_count(part_, s.k); },
                        [](const ThreeCycleWalkSpec& s) { return falling(std::ldexp(1.0, s.n), s.k); },
                        [](const TwoRowSpec& s) { return std::ldexp(1.0, s.n) * (std::ldexp(1.0, s.n) - 1); },
                    },
                    spec_);
}

std::vector<std::uint64_t> Chain::states(std::size_t limit) const {
  const double count = state_count();
  if (count > static_cast<double>(limit)) {
    throw ResourceError(name() + " has " + std::to_string(static_cast<long long>(count)) +
                        " states, above the enumeration limit " + std::to_string(limit));
  }
  return std::visit(
      overloaded{
          [&](const SchreierSpec& s) { return distinct_tuples(s.n, s.k, 1ULL << s.n, limit); },
          [&](const GenericRestrictedSpec& s) {
            return generic_states(part_.w, part_.p, part_.tail_size(), s.k, limit);
          },
          [&](const CliqueColoringSpec& s) {
            return distinct_tuples(row_bits(), s.k, static_cast<std::uint64_t>(s.q), limit);
          },
          [&](const LazyHypercubeSpec& s) {
            std::vector<std::uint64_t> v(std::size_t{1} << s.d);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
            return v;
          },
          [&](const ProductGlauberSpec& s) { return generic_states(s.w, s.p, s.m, s.k, limit); },
          [&](const ThreeCycleWalkSpec& s) { return distinct_tuples(s.n, s.k, 1ULL << s.n, limit); },
          [&](const TwoRowSpec& s) {
            std::vector<std::uint64_t> v;
            for (std::uint64_t a = 0; a < (1ULL << s.n); ++a) {
              for (std::uint64_t u = 1; u < (1ULL << s.n); ++u) v.push_back((a << s.n) | u);
            }
            return v;
          },
      },
      spec_);
}

bool Chain::contains(std::uint64_t state) const {
  const int k = rows();
  const int b = row_bits();
  if (k * b < 64 && (state >> (k * b)) != 0) return false;
  const auto r = unpack(state, k, b);
  return std::visit(overloaded{
                        [&](const SchreierSpec&) { return all_distinct(r); },
                        [&](const GenericRestrictedSpec&) {
                          return all_distinct(r) && generic_rows(r, part_.w, part_.p);
                        },
                        [&](const CliqueColoringSpec& s) {
                          for (auto v : r) {
                            if (v >= static_cast<std::uint64_t>(s.q)) return false;
                          }
                          return all_distinct(r);
                        },
                        [&](const LazyHypercubeSpec&) { return true; },
                        [&](const ProductGlauberSpec& s) { return generic_rows(r, s.w, s.p); },
                        [&](const ThreeCycleWalkSpec&) { return all_distinct(r); },
                        [&](const TwoRowSpec&) { return r[1] != 0; },
                    },
                    spec_);
}

void Chain::require(std::uint64_t state) const {
  if (!contains(state)) throw ContractError("state is not in the state space of " + name());
}

std::uint64_t Chain::step(std::uint64_t state, SeedStream& rng) const {
  require(state);
  const int k = rows();
  const int b = row_bits();
  auto r = unpack(state, k, b);
  return std::visit(
      overloaded{
          [&](const SchreierSpec& s) {
            const auto g = sample_sigma({s.n, s.w}, rng);
            for (auto& x : r) x = g.apply_bits(x);
            return pack(r, b);
          },
          [&](const GenericRestrictedSpec& s) {
            const auto g = sample_sigma({s.n, 2}, rng);
            for (auto& x : r) x = g.apply_bits(x);
            return generic_rows(r, part_.w, part_.p) ? pack(r, b) : state;
          },
          [&](const CliqueColoringSpec& s) {
            const auto row = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(k)));
            std::vector<std::uint64_t> allowed;
            for (std::uint64_t v = 0; v < static_cast<std::uint64_t>(s.q); ++v) {
              bool used = false;
              for (std::size_t o = 0; o < r.size(); ++o) used = used || (o != row && r[o] == v);
              if (!used) allowed.push_back(v);
            }
            r[row] = allowed[rng.uniform(allowed.size())];
            return pack(r, b);
          },
          [&](const LazyHypercubeSpec& s) {
            if (rng.bernoulli(0.5)) return std::uint64_t{state};
            return std::uint64_t{state} ^ (std::uint64_t{1} << rng.uniform(static_cast<std::uint64_t>(s.d)));
          },
          [&](const ProductGlauberSpec& s) {
            if (rng() & 1U) {
              const auto row = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(k)));
              const auto col = s.p * s.w + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.m)));
              if (s.m > 0 && (rng() & 1U)) r[row] ^= 1ULL << col;
              return pack(r, b);
            }
            const int blk = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.p)));
            const auto row = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(k)));
            const std::uint64_t m = low_mask(s.w);
            std::vector<std::uint64_t> allowed;
            for (std::uint64_t v = 0; v <= m; ++v) {
              bool used = false;
              for (std::size_t o = 0; o < r.size(); ++o) used = used || (o != row && ((r[o] >> (blk * s.w)) & m) == v);
              if (!used) allowed.push_back(v);
            }
            const std::uint64_t v = allowed[rng.uniform(allowed.size())];
            r[row] = (r[row] & ~(m << (blk * s.w))) | (v << (blk * s.w));
            return pack(r, b);
          },
          [&](const ThreeCycleWalkSpec& s) {
            const std::uint64_t size = 1ULL << s.n;
            const std::uint64_t x = rng.uniform(size);
            std::uint64_t y, z;
            do y = rng.uniform(size); while (y == x);
            do z = rng.uniform(size); while (z == x || z == y);
            for (auto& v : r) v = v == x ? y : v == y ? z : v == z ? x : v;
            return pack(r, b);
          },
          [&](const TwoRowSpec& s) {
            const int i = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.n)));
            const int l = std::popcount(r[1] & ~(1ULL << i));
            const double pu = 0.5 * two_row_hit_probability(s.n, s.w, l);
            if (rng() & 1U) r[0] ^= 1ULL << i;
            if (rng.bernoulli(pu)) r[1] ^= 1ULL << i;
            return pack(r, b);
          },
      },
      spec_);
}

std::vector<Transition> Chain::transitions(std::uint64_t state) const {
  require(state);
  const int k = rows();
  const int b = row_bits();
  const auto r = unpack(state, k, b);
  std::vector<Transition> out;
  std::visit(
      overloaded{
          [&](const SchreierSpec&) {
            if (gens_.empty()) throw ResourceError("generator set too large for exact transitions");
            const double pr = 1.0 / static_cast<double>(gens_.size());
            auto x = r;
            for (const auto& g : gens_) {
              for (std::size_t i = 0; i < r.size(); ++i) x[i] = g.apply_bits(r[i]);
              out.push_back({pack(x, b), pr});
            }
          },
          [&](const GenericRestrictedSpec&) {
            if (gens_.empty()) throw ResourceError("generator set too large for exact transitions");
            const double pr = 1.0 / static_cast<double>(gens_.size());
            auto x = r;
            for (const auto& g : gens_) {
              for (std::size_t i = 0; i < r.size(); ++i) x[i] = g.apply_bits(r[i]);
              out.push_back({generic_rows(x, part_.w, part_.p) ? pack(x, b) : state, pr});
            }
          },
          [&](const CliqueColoringSpec& s) {
            const double pr = 1.0 / (static_cast<double>(k) * (s.q - k + 1));
            for (std::size_t row = 0; row < r.size(); ++row) {
              for (std::uint64_t v = 0; v < static_cast<std::uint64_t>(s.q); ++v) {
                bool used = false;
                for (std::size_t o = 0; o < r.size(); ++o) used = used || (o != row && r[o] == v);
                if (used) continue;
                auto x = r;
                x[row] = v;
                out.push_back({pack(x, b), pr});
              }
            }
          },
          [&](const LazyHypercubeSpec& s) {
            out.push_back({state, 0.5});
            for (int i = 0; i < s.d; ++i) out.push_back({state ^ (1ULL << i), 0.5 / s.d});
          },
          [&](const ProductGlauberSpec& s) {
            if (s.m > 0) {
              const double pr = 0.25 / (static_cast<double>(k) * s.m);
              for (std::size_t row = 0; row < r.size(); ++row) {
                for (int c = 0; c < s.m; ++c) {
                  auto x = r;
                  x[row] ^= 1ULL << (s.p * s.w + c);
                  out.push_back({pack(x, b), pr});
                  out.push_back({state, pr});
                }
              }
            } else {
              out.push_back({state, 0.5});
            }
            const std::uint64_t m = low_mask(s.w);
            const double pr = 0.5 / (static_cast<double>(s.p) * k * (static_cast<double>(m + 1) - k + 1));
            for (int blk = 0; blk < s.p; ++blk) {
              for (std::size_t row = 0; row < r.size(); ++row) {
                for (std::uint64_t v = 0; v <= m; ++v) {
                  bool used = false;
                  for (std::size_t o = 0; o < r.size(); ++o) {
                    used = used || (o != row && ((r[o] >> (blk * s.w)) & m) == v);
                  }
                  if (used) continue;
                  auto x = r;
                  x[row] = (x[row] & ~(m << (blk * s.w))) | (v << (blk * s.w));
                  out.push_back({pack(x, b), pr});
                }
              }
            }
          },
          [&](const ThreeCycleWalkSpec& s) {
            const std::uint64_t size = 1ULL << s.n;
            const double triples = falling(static_cast<double>(size), 3);
            if (triples > 1e6) throw ResourceError("too many 3-cycles for exact transitions at n=" + std::to_string(s.n));
            const double pr = 1.0 / triples;
            auto x = r;
            for (std::uint64_t a = 0; a < size; ++a) {
              for (std::uint64_t c = 0; c < size; ++c) {
                if (c == a) continue;
                for (std::uint64_t d = 0; d < size; ++d) {
                  if (d == a || d == c) continue;
                  for (std::size_t i = 0; i < r.size(); ++i) {
                    x[i] = r[i] == a ? c : r[i] == c ? d : r[i] == d ? a : r[i];
                  }
                  out.push_back({pack(x, b), pr});
                }
              }
            }
          },
          [&](const TwoRowSpec& s) {
            for (int i = 0; i < s.n; ++i) {
              const int l = std::popcount(r[1] & ~(1ULL << i));
              const double pu = 0.5 * two_row_hit_probability(s.n, s.w, l);
              for (int fs = 0; fs < 2; ++fs) {
                for (int fu = 0; fu < 2; ++fu) {
                  const double pr = (0.5 / s.n) * (fu ? pu : 1.0 - pu);
                  if (pr == 0.0) continue;
                  auto x = r;
                  if (fs) x[0] ^= 1ULL << i;
                  if (fu) x[1] ^= 1ULL << i;
                  out.push_back({pack(x, b), pr});
                }
              }
            }
          },
      },
      spec_);
  return merge(std::move(out));
}

}  // namespace simperm
