#include <algorithm>
#include <cmath>

#include "simperm/errors.hpp"
#include "simperm/mixing.hpp"
#include "simperm/parallel.hpp"
#include "simperm/synthesis.hpp"

namespace simperm {

namespace {

struct Trial {
  std::uint64_t x = 0;
  Word word;
};

Trial run_trial(int n, std::uint64_t seed, std::uint64_t t) {
  auto rng = SeedStream::derive(seed, t);
  const std::uint64_t size = 1ULL << n;
  const std::uint64_t x = rng.uniform(size);
  std::uint64_t y, z;
  do y = rng.uniform(size); while (y == x);
  do z = rng.uniform(size); while (z == x || z == y);
  auto c = synth_three_cycle(n, CubePoint(n, x), CubePoint(n, y), CubePoint(n, z), rng, false);
  return {x, std::move(c.word)};
}

}  // namespace

std::uint64_t entropy_min_trials(int n, double slack) {
  const double bound = slack * std::ldexp(1.0, -n) / (static_cast<double>(n) * n * n);
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(200.0 / bound))) + 1;
}

EntropyReport min_entropy_probe(int n, std::uint64_t trials, std::uint64_t seed, const EntropyOptions& opt) {
  const std::size_t L = three_cycle_length(n);
  const SigmaSpec sig{n, 2};
  const std::uint64_t G = sig.count();
  const std::uint64_t X = 1ULL << n;
  if (static_cast<double>(X) * static_cast<double>(G) > static_cast<double>(1ULL << 28)) {
    throw ResourceError("entropy probe key space 2^n |Sigma| = " + std::to_string(X * G) + " exceeds 2^28");
  }
  const std::uint64_t need = entropy_min_trials(n, opt.slack);
  if (trials < need) {
    throw ContractError("insufficient trials for the entropy probe at n=" + std::to_string(n) + ": need at least " +
                        std::to_string(need) + ", got " + std::to_string(trials));
  }
  EntropyReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.slack = opt.slack;
  rep.z = opt.z;
  rep.length = L;
  rep.mode = to_string(n >= kThreeCycleMinDim ? CycleMode::full : n >= 5 ? CycleMode::relaxed : CycleMode::table);
  const double n3 = static_cast<double>(n) * n * n;
  const double b_joint = opt.slack * std::ldexp(1.0, -n) / n3;
  const double b_prefix = opt.slack * std::ldexp(1.0, -n);
  const double b_gen = opt.slack / n3;

  const std::size_t batch = std::max<std::size_t>(1, std::min<std::size_t>(L, opt.memory_bytes / (4 * trials)));
  std::vector<std::uint32_t> keys;
  rep.positions.resize(L);
  const int threads = std::max(1, opt.threads);
  for (std::size_t p0 = 0; p0 < L; p0 += batch) {
    const std::size_t p1 = std::min(L, p0 + batch);
    const std::size_t B = p1 - p0;
    keys.assign(B * trials, 0);
    parallel_chunks(trials, threads, [&](std::size_t b, std::size_t e, int) {
      for (std::size_t t = b; t < e; ++t) {
        const Trial tr = run_trial(n, seed, t);
        if (tr.word.size() != L) throw VerificationError("3-cycle word length differs from L(n)");
        std::uint64_t v = tr.x;
        for (std::size_t l = 0; l < p1; ++l) {
          const SimplePerm& g = tr.word[l];
          if (l >= p0) {
            if (g.width() != 2) throw VerificationError("3-cycle word contains a generator outside Sigma_2");
            keys[(l - p0) * trials + t] = static_cast<std::uint32_t>(v * G + sigma_rank(sig, g));
          }
          v = g.apply_bits(v);
        }
      }
    });
    parallel_chunks(B, threads, [&](std::size_t b, std::size_t e, int) {
      std::vector<std::uint32_t> cj(X * G, 0), cp(X, 0), cg(G, 0);
      for (std::size_t q = b; q < e; ++q) {
        const std::uint32_t* k = keys.data() + q * trials;
        for (std::size_t t = 0; t < trials; ++t) {
          ++cj[k[t]];
          ++cp[k[t] / G];
          ++cg[k[t] % G];
        }
        CollisionSums sj, sp, sg;
        for (std::size_t t = 0; t < trials; ++t) {
          if (auto& c = cj[k[t]]; c) {
            sj.add(c);
            c = 0;
          }
          if (auto& c = cp[k[t] / G]; c) {
            sp.add(c);
            c = 0;
          }
          if (auto& c = cg[k[t] % G]; c) {
            sg.add(c);
            c = 0;
          }
        }
        auto& pos = rep.positions[p0 + q];
        pos.position = p0 + q + 1;
        pos.joint = collision_from_sums(sj, trials, b_joint, opt.z);
        pos.prefix = collision_from_sums(sp, trials, b_prefix, opt.z);
        pos.generator = collision_from_sums(sg, trials, b_gen, opt.z);
      }
    });
  }
  for (const auto& p : rep.positions) {
    rep.joint_ok = rep.joint_ok && p.joint.within;
    rep.prefix_ok = rep.prefix_ok && p.prefix.within;
    rep.generator_ok = rep.generator_ok && p.generator.within;
    rep.worst_joint = std::max(rep.worst_joint, p.joint.q2);
    rep.worst_prefix = std::max(rep.worst_prefix, p.prefix.q2);
    rep.worst_generator = std::max(rep.worst_generator, p.generator.q2);
  }
  return rep;
}

}  // namespace simperm
