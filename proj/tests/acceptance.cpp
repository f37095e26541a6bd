// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracle.hpp"
#include "simperm/chains.hpp"
#include "simperm/flow.hpp"
#include "simperm/mixing.hpp"
#include "simperm/spectral.hpp"
#include "simperm/synthesis.hpp"

using namespace simperm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<int> shuffled(int n, SeedStream& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

Outcome synthesis_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  SeedStream rng(0x5151);
  std::uint64_t flips = 0, cycles = 0, mismatches = 0;
  for (int n = 5; n <= 10; ++n) {
    const std::uint64_t size = 1ULL << n;
    for (int rep = 0; rep < 100; ++rep) {
      // Width up to n-2, limited by the w-1 scratch coordinates the ladder needs.
      const int wmax = std::min(n - 2, n / 2);
      const int w = 1 + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(wmax)));
      const auto idx = shuffled(n, rng);
      const std::vector<int> controls(idx.begin() + 1, idx.begin() + 1 + w);
      const std::vector<int> scratch(idx.begin() + 1 + w, idx.end());
      const auto pattern = rng.uniform(1ULL << w);
      const auto word = synth_controlled_flip(n, idx[0], controls, pattern, scratch);
      const auto t = word_to_table(word, n);
      for (std::uint64_t v = 0; v < size; ++v) {
        bool match = true;
        for (int c = 0; c < w; ++c) match = match && ((v >> controls[static_cast<std::size_t>(c)]) & 1U) == ((pattern >> c) & 1U);
        mismatches += t[v] != (match ? v ^ (1ULL << idx[0]) : v);
      }
      ++flips;
    }
    for (int rep = 0; rep < 100; ++rep) {
      const auto x = rng.uniform(size);
      std::uint64_t y, z;
      do y = rng.uniform(size); while (y == x);
      do z = rng.uniform(size); while (z == x || z == y);
      const auto c = synth_three_cycle(n, CubePoint(n, x), CubePoint(n, y), CubePoint(n, z), rng);
      const auto t = word_to_table(c.word, n);
      const auto want = oracle::cycle_table(n, x, y, z);
      for (std::uint64_t v = 0; v < size; ++v) mismatches += t[v] != want[v];
      ++cycles;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs <= 120,
          std::to_string(flips) + " flips, " + std::to_string(cycles) + " 3-cycles, n=5..10, " +
              std::to_string(mismatches) + " mismatches, " + fmt("%.1f s", secs)};
}

// Recorded regression constant: L(n) <= kLengthC * n.
constexpr std::size_t kLengthC = 284;

Outcome ladder_length() {
  bool ok = true;
  std::string bad;
  for (int w = 3; w <= 8; ++w) {
    const int n = 2 * w;
    std::vector<int> controls(static_cast<std::size_t>(w)), scratch(static_cast<std::size_t>(w - 1));
    std::iota(controls.begin(), controls.end(), 1);
    std::iota(scratch.begin(), scratch.end(), w + 1);
    const auto word = synth_controlled_flip(n, 0, controls, (1ULL << w) - 1, scratch);
    if (word.size() != static_cast<std::size_t>(4 * w - 4)) {
      ok = false;
      bad += " w=" + std::to_string(w);
    }
  }
  SeedStream rng(2);
  for (int n = 4; n <= 64; ++n) {
    if (three_cycle_length(n) > kLengthC * static_cast<std::size_t>(n)) {
      ok = false;
      bad += " L(" + std::to_string(n) + ")";
    }
  }
  for (int n : {4, 5, 6, 7, 12, 20, 40, 64}) {
    const auto c = synth_three_cycle(n, CubePoint(n, 0), CubePoint(n, 1), CubePoint(n, 6), rng);
    if (c.word.size() != three_cycle_length(n)) {
      ok = false;
      bad += " |word(" + std::to_string(n) + ")|";
    }
  }
  return {ok, "4w-4 for w=3..8; L(n) <= " + std::to_string(kLengthC) + "n for n=4..64 (L(7)=" +
                  std::to_string(three_cycle_length(7)) + ", L(10)=" + std::to_string(three_cycle_length(10)) + ")" +
                  (bad.empty() ? "" : "; bad:" + bad)};
}

Outcome parity() {
  std::uint64_t checked = 0, odd = 0;
  for (int n = 4; n <= 5; ++n) {
    for (const auto& g : enumerate_sigma(SigmaSpec{n, 2})) {
      odd += word_sign(Word({g}), n) != 1;
      ++checked;
    }
  }
  SeedStream rng(0x9a41);
  std::uint64_t odd_cycles = 0, words = 0;
  for (int n = 4; n <= 9; ++n) {
    const std::uint64_t size = 1ULL << n;
    for (int rep = 0; rep < 50; ++rep) {
      const auto x = rng.uniform(size);
      std::uint64_t y, z;
      do y = rng.uniform(size); while (y == x);
      do z = rng.uniform(size); while (z == x || z == y);
      odd_cycles += word_sign(synth_three_cycle(n, CubePoint(n, x), CubePoint(n, y), CubePoint(n, z), rng).word, n) != 1;
      ++words;
    }
  }
  return {odd == 0 && odd_cycles == 0 && checked == 16 * 24 + 16 * 60,
          std::to_string(checked) + " generators at n=4,5 and " + std::to_string(words) +
              " 3-cycle words; odd: " + std::to_string(odd + odd_cycles)};
}

Outcome exact_gaps() {
  double worst_gap = 0, worst_spec = 0;
  for (int n = 3; n <= 6; ++n) {
    const auto s = eig_symmetric(transition_matrix(SchreierSpec{n, 1}));
    worst_gap = std::max(worst_gap, std::abs(s.gap - 1.0 / n));
    std::vector<double> want;
    for (int j = 0; j <= n; ++j) {
      double c = 1;
      for (int i = 0; i < j; ++i) c = c * (n - i) / (i + 1);
      want.insert(want.end(), static_cast<std::size_t>(std::lround(c)), static_cast<double>(n - j) / n);
    }
    std::sort(want.rbegin(), want.rend());
    if (want.size() != s.eigenvalues.size()) return {false, "spectrum size mismatch at n=" + std::to_string(n)};
    for (std::size_t i = 0; i < want.size(); ++i) worst_spec = std::max(worst_spec, std::abs(want[i] - s.eigenvalues[i]));
  }
  return {worst_gap <= 1e-9 && worst_spec <= 1e-9,
          "n=3..6: max |gap - 1/n| = " + fmt("%.2e", worst_gap) + ", max spectrum error = " + fmt("%.2e", worst_spec)};
}

Outcome lift_containment() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream d;
  for (const auto& [n, kmax] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}}) {
    std::vector<Spectrum> sp;
    for (int k = 1; k <= kmax; ++k) sp.push_back(eig_symmetric(transition_matrix(SchreierSpec{n, k}), {false}));
    for (int k = 1; k < kmax; ++k) {
      const auto r = multiset_contained(sp[static_cast<std::size_t>(k - 1)].eigenvalues, sp[static_cast<std::size_t>(k)].eigenvalues, 1e-8);
      ok = ok && r.contained;
      ok = ok && sp[static_cast<std::size_t>(k)].gap <= sp[static_cast<std::size_t>(k - 1)].gap + 1e-12;
      d << "G(" << k << "," << n << ")<G(" << k + 1 << "," << n << ") " << (r.contained ? "ok" : "NO") << " ("
        << fmt("%.1e", r.max_mismatch) << "); ";
    }
    d << "gaps n=" << n << ":";
    for (const auto& s : sp) d << " " << fmt("%.6f", s.gap);
    d << "; ";
  }
  const double secs = seconds_since(t0);
  d << fmt("%.1f s", secs);
  return {ok && secs <= 300, d.str()};
}

Outcome product_identity() {
  const ProductGlauberSpec s{2, 2, 2, 2};
  const double g = spectral_gap(s, {false});
  const double g1 = spectral_gap(CliqueColoringSpec{s.k, 1 << s.w}, {false});
  const double g2 = spectral_gap(LazyHypercubeSpec{s.k * s.m}, {false});
  const double want = std::min(g1 / s.p, g2) / 2;
  return {std::abs(g - want) <= 1e-9, "gap=" + fmt("%.12f", g) + " formula=" + fmt("%.12f", want) +
                                          " (gap1=" + fmt("%.6f", g1) + ", gap2=" + fmt("%.6f", g2) + ")"};
}

Outcome mixing_laws() {
  const std::vector<ChainSpec> suite{SchreierSpec{3, 1},     SchreierSpec{3, 2},          SchreierSpec{4, 1},
                                     SchreierSpec{4, 2},     GenericRestrictedSpec{4, 2, 2}, CliqueColoringSpec{2, 4},
                                     CliqueColoringSpec{3, 5}, LazyHypercubeSpec{4},       ProductGlauberSpec{2, 2, 2, 1},
                                     ThreeCycleWalkSpec{3, 1}, ThreeCycleWalkSpec{3, 2},   TwoRowSpec{4, 2}};
  const std::vector<double> eps{0.25, 1.0 / 8, 1.0 / 64};
  int bad = 0;
  std::string which;
  for (const auto& spec : suite) {
    const auto m = transition_matrix(spec);
    const auto prof = mixing_profile(m, MixingOptions{1.0 / 128});
    const auto sub = check_submultiplicative(prof, 5);
    const auto cons = gap_mixing_consistency(m, eps);
    if (!profile_nonincreasing(prof) || !sub.holds || cons.violated) {
      ++bad;
      which += " " + chain_name(spec);
    }
  }
  return {bad == 0, std::to_string(suite.size()) + " chains: monotone TV, tau(2^-l-1) <= l tau(1/4) for l<=5, gap/mixing bounds at eps=1/4,1/8,1/64" +
                        (which.empty() ? "" : "; failing:" + which)};
}

Outcome genericity() {
  const auto part = make_partition(12, 4, 3, PartitionMode::explicit_width);
  const auto s = genericity_survey(12, 3, part, 200000, 0x6e6e, default_walk_steps(12, 4), 1);
  const auto one = genericity_survey(12, 1, make_partition(12, 4, 1, PartitionMode::explicit_width), 20000, 3, 10, 1);
  return {s.uniform_ok && one.uniform_fraction == 1.0,
          "k=3: fraction " + fmt("%.5f", s.uniform_fraction) + " +- " + fmt("%.5f", s.uniform_sigma) + " vs bound " +
              fmt("%.5f", s.bound) + " (walk " + fmt("%.5f", s.walk_fraction) + "); k=1: " + fmt("%.1f", one.uniform_fraction)};
}

Outcome path_validity() {
  const auto r = estimate_congestion(FlowKind::generic, {8, 3, 2}, 22000, 0x9a7e, FlowOptions{1, false});
  const double attempts = static_cast<double>(r.retries + r.type2);
  const double rate = r.phi_rejection();
  const double sigma = attempts > 0 ? std::sqrt(rate * (1 - rate) / attempts) : 0;
  const bool ok = r.replay_failures == 0 && r.paths >= 10000 && rate <= 0.25 + 3 * sigma;
  return {ok, std::to_string(r.paths) + " paths (" + std::to_string(r.type1) + " type i, " + std::to_string(r.type2) +
                  " type ii), replay failures " + std::to_string(r.replay_failures) + ", phi rejection " +
                  fmt("%.4f", rate) + " +- " + fmt("%.4f", sigma) + " (limit 0.25 + 3 sigma)"};
}

Outcome comparison_soundness() {
  const auto r = estimate_congestion(FlowKind::recolor, {4, 2}, 100000, 0xc0de, FlowOptions{1, false});
  const double gap_tilde = spectral_gap(CliqueColoringSpec{2, 16}, {false});
  const double gap = spectral_gap(SchreierSpec{4, 2}, {false});
  const auto b = comparison_bound(r, gap_tilde);
  const auto self = self_comparison(SchreierSpec{4, 2});
  const bool ok = r.replay_failures == 0 && b.bound <= gap && self.A_hat == 1.0;
  return {ok, "A_hat=" + fmt("%.1f", r.A_hat) + " +- " + fmt("%.1f", r.A_sigma) + ", bound " + fmt("%.3e", b.bound) +
                  " +- " + fmt("%.1e", b.sigma) + " <= gap(P)=" + fmt("%.6f", gap) + "; self A=" + fmt("%.1f", self.A_hat)};
}

Outcome entropy() {
  const auto t0 = std::chrono::steady_clock::now();
  EntropyOptions eo;
  eo.threads = 1;
  const auto r = min_entropy_probe(8, 1000000, 0xe27, eo);
  const double secs = seconds_since(t0);
  const double n3 = 512;
  double gen_ci = 0, pre_ci = 0, joint_ci = 0;
  for (const auto& p : r.positions) {
    gen_ci = std::max(gen_ci, p.generator.q2 + r.z * p.generator.sigma);
    pre_ci = std::max(pre_ci, p.prefix.q2 + r.z * p.prefix.sigma);
    joint_ci = std::max(joint_ci, p.joint.q2 + r.z * p.joint.sigma);
  }
  return {r.generator_ok && r.prefix_ok && secs <= 600 && !r.positions.empty(),
          std::to_string(r.positions.size()) + " positions; worst generator q2 " + fmt("%.3e", r.worst_generator) +
              " (upper CI " + fmt("%.3e", gen_ci) + ") vs " + fmt("%.3e", 64 / n3) + ", worst prefix q2 " +
              fmt("%.3e", r.worst_prefix) + " (upper CI " + fmt("%.3e", pre_ci) + ") vs " + fmt("%.3e", 64 / 256.0) +
              ", joint " + (r.joint_ok ? "ok" : "over") + " (upper CI " + fmt("%.3e", joint_ci) + " vs " +
              fmt("%.3e", 64 / 256.0 / n3) + "); " + fmt("%.1f s", secs)};
}

Outcome determinism() {
  const std::string word = "/tmp/simperm_acceptance_word.txt";
  std::vector<std::vector<std::string>> cmds{
      {"synth", "and", "--n", "8", "--target", "0", "--controls", "1,2,3,4", "--pattern", "9", "--scratch", "5,6,7"},
      {"synth", "three-cycle", "--n", "9", "--x", "1", "--y", "2", "--z", "300", "--seed", "5"},
      {"synth", "three-cycle", "--n", "7", "--x", "1", "--y", "2", "--z", "3", "--seed", "4", "--out", word},
      {"verify", "word", "--n", "7", "--in", word, "--expect", "three-cycle", "--x", "1", "--y", "2", "--z", "3"},
      {"chain", "step", "--chain", "schreier", "--n", "5", "--k", "3", "--start", "0x123", "--steps", "50", "--seed", "8"},
      {"chain", "matrix", "--chain", "clique", "--k", "2", "--q", "4"},
      {"spectrum", "gap", "--chain", "two-row", "--n", "4", "--all"},
      {"spectrum", "lift", "--chain", "schreier", "--n", "3", "--k", "2"},
      {"mixing", "profile", "--chain", "product", "--k", "2", "--w", "2", "--p", "2", "--m", "1"},
      {"mixing", "consistency", "--chain", "hypercube", "--d", "5"},
      {"mixing", "entropy", "--n", "6", "--trials", "20000", "--seed", "3"},
      {"mixing", "genericity", "--n", "12", "--k", "3", "--w", "4", "--trials", "20000", "--seed", "3"},
      {"flow", "congestion", "--kind", "generic", "--n", "8", "--k", "3", "--w", "2", "--trials", "2000", "--seed", "3"},
      {"flow", "bound", "--kind", "recolor", "--n", "4", "--k", "2", "--trials", "3000", "--seed", "3"},
  };
  const std::set<std::string> threaded{"entropy", "genericity", "congestion", "bound"};
  int differ = 0, failed = 0;
  std::string which;
  for (const auto& c : cmds) {
    std::string payload[2];
    for (int i = 0; i < 2; ++i) {
      auto args = c;
      if (threaded.count(c[1])) {
        args.push_back("--threads");
        args.push_back(i ? "8" : "1");
      }
      std::ostringstream out, err;
      const int code = cli::dispatch(args, out, err);
      if (code != cli::kExitOk) {
        ++failed;
        which += " " + c[0] + "/" + c[1] + "(exit " + std::to_string(code) + ")";
      }
      payload[i] = out.str();
    }
    if (payload[0] != payload[1]) {
      ++differ;
      which += " " + c[0] + "/" + c[1];
    }
  }
  std::remove(word.c_str());
  return {differ == 0 && failed == 0, std::to_string(cmds.size()) + " commands at 1 and 8 threads; differing " +
                                          std::to_string(differ) + ", failed " + std::to_string(failed) + which};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"synthesis exactness", synthesis_exactness},
      {"ladder and 3-cycle length", ladder_length},
      {"parity", parity},
      {"exact k=1 gaps and spectrum", exact_gaps},
      {"lift containment and gap monotonicity", lift_containment},
      {"product-chain gap identity", product_identity},
      {"mixing laws", mixing_laws},
      {"genericity fraction", genericity},
      {"path validity", path_validity},
      {"comparison soundness", comparison_soundness},
      {"entropy necessary conditions", entropy},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
