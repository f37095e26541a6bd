#include <algorithm>
#include <cmath>
#include <limits>

#include "simperm/errors.hpp"
#include "simperm/flow.hpp"
#include "simperm/parallel.hpp"
#include "simperm/synthesis.hpp"

namespace simperm {

namespace {

struct EdgeHit {
  std::uint64_t state;
  std::uint32_t gen;
  std::uint32_t weight;
  bool operator<(const EdgeHit& o) const { return state != o.state ? state < o.state : gen < o.gen; }
  bool same(const EdgeHit& o) const { return state == o.state && gen == o.gen; }
};

struct Sample {
  bool loop = false;
  bool failed = false;
  int type = 0;
  std::uint64_t retries = 0;
  bool split_distinct = false;
  std::size_t length = 0;
};

struct Worker {
  std::vector<EdgeHit> hits;
  std::vector<EdgeHit> scratch;
};

// Replays `w` from `m` on the target chain, appending per-edge loads. Returns
// false if the path leaves the graph or misses the endpoint.
bool replay(const Word& w, const TupleMatrix& m, const TupleMatrix& m2, const SigmaSpec& sig,
            const Partition* generic, Worker& wk) {
  wk.scratch.clear();
  auto rows = m.rows();
  std::uint64_t key = m.key();
  const int n = m.dim();
  for (const auto& g : w.gens()) {
    if (g.width() != 2 || g.max_index() >= n) return false;
    auto next = rows;
    for (auto& r : next) r = g.apply_bits(r);
    const TupleMatrix nm(n, next);
    if (generic && !is_generic(nm, *generic)) return false;
    if (next != rows) wk.scratch.push_back({key, static_cast<std::uint32_t>(sigma_rank(sig, g)), 0});
    rows = std::move(next);
    key = nm.key();
  }
  if (rows != m2.rows()) return false;
  std::sort(wk.scratch.begin(), wk.scratch.end());
  const auto len = static_cast<std::uint32_t>(w.size());
  for (std::size_t i = 0; i < wk.scratch.size();) {
    std::size_t j = i;
    while (j < wk.scratch.size() && wk.scratch[j].same(wk.scratch[i])) ++j;
    wk.hits.push_back({wk.scratch[i].state, wk.scratch[i].gen, static_cast<std::uint32_t>(len * (j - i))});
    i = j;
  }
  return true;
}

std::uint64_t pick_other(std::uint64_t size, const std::vector<std::uint64_t>& avoid, SeedStream& rng) {
  for (;;) {
    const std::uint64_t v = rng.uniform(size);
    if (std::find(avoid.begin(), avoid.end(), v) == avoid.end()) return v;
  }
}

Sample cycle_commodity(FlowKind kind, const FlowParams& p, SeedStream& rng, Worker& wk) {
  Sample s;
  const int n = p.n;
  const std::uint64_t size = 1ULL << n;
  const TupleMatrix m = random_tuple(n, p.k, rng);
  std::uint64_t x, y, z;
  if (kind == FlowKind::cayley) {
    x = rng.uniform(size);
    y = pick_other(size, {x}, rng);
    z = pick_other(size, {x, y}, rng);
  } else {
    const int r = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(p.k)));
    std::vector<std::uint64_t> others;
    for (int o = 0; o < p.k; ++o) {
      if (o != r) others.push_back(m.row(o));
    }
    x = m.row(r);
    y = pick_other(size, others, rng);
    if (y == x) {
      s.loop = true;
      return s;
    }
    others.push_back(x);
    others.push_back(y);
    z = pick_other(size, others, rng);
  }
  auto rows = m.rows();
  for (auto& v : rows) v = v == x ? y : v == y ? z : v == z ? x : v;
  const TupleMatrix m2(n, rows);
  if (m2 == m) {
    s.loop = true;
    return s;
  }
  const auto c = synth_three_cycle(n, CubePoint(n, x), CubePoint(n, y), CubePoint(n, z), rng, false);
  s.length = c.word.size();
  s.failed = !replay(c.word, m, m2, SigmaSpec{n, 2}, nullptr, wk);
  return s;
}

Sample generic_commodity(const FlowParams& p, const Partition& part, SeedStream& rng, Worker& wk) {
  Sample s;
  const int k = p.k;
  const TupleMatrix m = random_generic(part, k, rng);
  const int r = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(k)));
  if (rng() & 1U) {
    const int c = part.tail[rng.uniform(part.tail.size())];
    if (rng() & 1U) {
      s.loop = true;
      return s;
    }
    const TupleMatrix m2 = m.with_bit_flipped(r, c);
    const auto spec = random_type1_spec(part, r, c, rng);
    const Word w = synth_type1_path(m, spec, part);
    s.type = 1;
    s.length = w.size();
    s.failed = !replay(w, m, m2, SigmaSpec{p.n, 2}, &part, wk);
    return s;
  }
  const int blk = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(part.p)));
  const auto& ci = part.blocks[static_cast<std::size_t>(blk)];
  std::vector<std::uint64_t> used;
  for (int o = 0; o < k; ++o) {
    if (o != r) used.push_back(m.restrict_row(o, ci));
  }
  const std::uint64_t alpha = pick_other(1ULL << part.w, used, rng);
  const std::uint64_t cur = m.restrict_row(r, ci);
  if (alpha == cur) {
    s.loop = true;
    return s;
  }
  std::uint64_t row = m.row(r);
  for (std::size_t q = 0; q < ci.size(); ++q) {
    row &= ~(1ULL << ci[q]);
    row |= ((alpha >> q) & 1U) << ci[q];
  }
  const TupleMatrix m2 = m.with_row(r, row);
  s.type = 2;
  for (;;) {
    const auto spec = random_type2_spec(part, blk, r, rng);
    auto res = synth_type2_path(m, m2, spec, part, rng);
    if (res.status == PathStatus::retry) {
      if (++s.retries > static_cast<std::uint64_t>(kRejectionBudget)) {
        throw SamplingError("no valid type (ii) path after " + std::to_string(kRejectionBudget) + " prefixes");
      }
      continue;
    }
    s.split_distinct = res.split_distinct;
    s.length = res.word.size();
    s.failed = !replay(res.word, m, m2, SigmaSpec{p.n, 2}, &part, wk);
    return s;
  }
}

}  // namespace

std::string to_string(FlowKind k) {
  switch (k) {
    case FlowKind::cayley: return "cayley";
    case FlowKind::recolor: return "recolor";
    case FlowKind::generic: return "generic";
  }
  return "?";
}

FlowKind flow_kind_from_string(const std::string& s) {
  if (s == "cayley") return FlowKind::cayley;
  if (s == "recolor") return FlowKind::recolor;
  if (s == "generic") return FlowKind::generic;
  throw ContractError("unknown flow kind '" + s + "' (cayley, recolor, generic)");
}

CongestionReport estimate_congestion(FlowKind kind, const FlowParams& params, std::uint64_t samples,
                                     std::uint64_t seed, const FlowOptions& opt) {
  if (samples == 0) throw ContractError("congestion estimate needs samples > 0");
  if (params.n * params.k > 64) throw ResourceError("flow states need k*n <= 64");
  CongestionReport rep;
  rep.kind = kind;
  rep.params = params;
  rep.samples = samples;
  rep.seed = seed;
  const SigmaSpec sig{params.n, 2};
  rep.d = static_cast<double>(sig.count());
  const double cube = std::ldexp(1.0, params.n);
  Partition part;
  switch (kind) {
    case FlowKind::cayley:
      rep.states = Chain(SchreierSpec{params.n, params.k, 2}).state_count();
      rep.d_tilde = cube * (cube - 1) * (cube - 2);
      break;
    case FlowKind::recolor:
      if (cube < params.k + 2) throw ContractError("recolor flow needs 2^n >= k + 2");
      rep.states = Chain(SchreierSpec{params.n, params.k, 2}).state_count();
      rep.d_tilde = params.k * (cube - params.k + 1);
      break;
    case FlowKind::generic:
      part = make_partition(params.n, params.w, params.k, PartitionMode::explicit_width);
      if (part.p < 2) throw ContractError("generic flow needs at least two blocks");
      if (static_cast<int>(part.tail.size()) < std::max(2, params.w)) {
        throw ContractError("generic flow needs a tail of at least max(2, w) columns");
      }
      rep.states = generic_count(part, params.k);
      rep.d_tilde = rep.d;
      break;
  }

  std::vector<Sample> res(samples);
  const int threads = std::max(1, opt.threads);
  std::vector<Worker> workers(static_cast<std::size_t>(threads));
  parallel_chunks(samples, threads, [&](std::size_t b, std::size_t e, int wi) {
    Worker& wk = workers[static_cast<std::size_t>(wi)];
    for (std::size_t t = b; t < e; ++t) {
      auto rng = SeedStream::derive(seed, t);
      res[t] = kind == FlowKind::generic ? generic_commodity(params, part, rng, wk)
                                         : cycle_commodity(kind, params, rng, wk);
      if (res[t].failed && opt.strict) {
        throw VerificationError("replay failure in " + to_string(kind) + " commodity " + std::to_string(t));
      }
    }
  });

  rep.min_length = std::numeric_limits<std::size_t>::max();
  for (const auto& s : res) {
    if (s.loop) {
      ++rep.loops;
      continue;
    }
    ++rep.paths;
    rep.replay_failures += s.failed;
    rep.type1 += s.type == 1;
    rep.type2 += s.type == 2;
    rep.retries += s.retries;
    rep.split_distinct += s.split_distinct;
    rep.min_length = std::min(rep.min_length, s.length);
    rep.max_length = std::max(rep.max_length, s.length);
  }
  if (rep.paths == 0) rep.min_length = 0;

  std::vector<EdgeHit> all;
  for (auto& w : workers) {
    all.insert(all.end(), w.hits.begin(), w.hits.end());
    std::vector<EdgeHit>().swap(w.hits);
  }
  std::sort(all.begin(), all.end());
  std::uint64_t best = 0, best_sq = 0;
  long double total = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::uint64_t sum = 0, sq = 0;
    while (j < all.size() && all[j].same(all[i])) {
      sum += all[j].weight;
      sq += static_cast<std::uint64_t>(all[j].weight) * all[j].weight;
      ++j;
    }
    ++rep.observed_edges;
    total += sum;
    if (sum > best || (sum == best && sq > best_sq)) {
      best = sum;
      best_sq = sq;
    }
    i = j;
  }
  const double S = static_cast<double>(samples);
  const double scale = rep.d * rep.states / S;
  rep.A_hat = scale * static_cast<double>(best);
  const double mean = static_cast<double>(best) / S;
  const double var = std::max(0.0, static_cast<double>(best_sq) / S - mean * mean);
  rep.A_sigma = rep.d * rep.states * std::sqrt(var / S);
  rep.max_load = rep.A_hat * rep.d_tilde / rep.d;
  if (rep.observed_edges) {
    rep.mean_load = rep.d_tilde * rep.states / S * static_cast<double>(total) / static_cast<double>(rep.observed_edges);
  }
  return rep;
}

CongestionReport self_comparison(const SchreierSpec& spec) {
  const Chain chain(spec);
  const auto states = chain.states();
  const auto& gens = chain.generators();
  if (gens.empty()) throw ResourceError("generator set too large for exact self-comparison");
  CongestionReport rep;
  rep.params = {spec.n, spec.k, spec.w};
  rep.states = static_cast<double>(states.size());
  rep.d = rep.d_tilde = static_cast<double>(gens.size());
  rep.samples = states.size() * gens.size();
  rep.min_length = rep.max_length = 1;
  // Each directed edge (v, g) carries exactly its own commodity: f = 1, |gamma| = 1.
  std::uint64_t best = 0;
  for (auto s : states) {
    const auto rows = TupleMatrix::from_key(spec.n, spec.k, s).rows();
    for (const auto& g : gens) {
      bool moved = false;
      for (auto r : rows) moved = moved || g.apply_bits(r) != r;
      if (!moved) {
        ++rep.loops;
        continue;
      }
      ++rep.paths;
      ++rep.observed_edges;
      best = std::max<std::uint64_t>(best, 1);
    }
  }
  rep.max_load = static_cast<double>(best);
  rep.mean_load = rep.observed_edges ? 1.0 : 0.0;
  rep.A_hat = rep.d / rep.d_tilde * rep.max_load;
  return rep;
}

ComparisonBound comparison_bound(const CongestionReport& rep, double gap_comparison) {
  if (rep.A_hat <= 0) throw ContractError("comparison constant must be positive");
  return {gap_comparison / rep.A_hat, gap_comparison * rep.A_sigma / (rep.A_hat * rep.A_hat)};
}

}  // namespace simperm
