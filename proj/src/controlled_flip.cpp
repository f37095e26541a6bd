#include <algorithm>
#include <numeric>

#include "simperm/errors.hpp"
#include "simperm/synthesis.hpp"

namespace simperm {

namespace {

// Table of "flip iff x_a = 1 and x_b = bit" on controls (a, b).
std::uint64_t and_table(int bit) { return 1ULL << (1 + 2 * bit); }

SimplePerm padded(const SimplePerm& g, int n, const std::vector<int>& first) {
  if (g.width() >= 2 || n < 3) return g;
  std::vector<int> cand = first;
  cand.resize(cand.size() + static_cast<std::size_t>(n));
  std::iota(cand.end() - n, cand.end(), 0);
  return pad_to_width(g, 2, cand);
}

}  // namespace

std::size_t controlled_flip_length(int w, bool force_ladder) {
  if (w <= 1) return 1;
  if (w == 2 && !force_ladder) return 1;
  return static_cast<std::size_t>(4 * w - 4);
}

Word synth_controlled_flip(int n, int target, const std::vector<int>& controls,
                           std::uint64_t pattern, const std::vector<int>& scratch,
                           const FlipOptions& opt) {
  const int w = static_cast<int>(controls.size());
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  if (!in_range(target)) throw ContractError("flip target out of range");
  for (int c : controls) {
    if (!in_range(c)) throw ContractError("control index out of range");
  }
  const bool ladder = w >= 3 || (w == 2 && opt.force_ladder);
  const int need = ladder ? w - 1 : 0;
  if (static_cast<int>(scratch.size()) < need) {
    throw ContractError("controlled flip of width " + std::to_string(w) + " needs " +
                        std::to_string(need) + " scratch indices, got " +
                        std::to_string(scratch.size()) + " (short by " +
                        std::to_string(need - static_cast<int>(scratch.size())) + ")");
  }
  std::vector<int> used = controls;
  used.push_back(target);
  used.insert(used.end(), scratch.begin(), scratch.begin() + need);
  for (int s : used) {
    if (!in_range(s)) throw ContractError("scratch index out of range");
  }
  auto sorted = used;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractError("target, controls and scratch must be pairwise disjoint");
  }
  if (pattern >> w) throw ContractError("pattern wider than the control list");

  std::vector<int> pad = opt.pad;
  pad.insert(pad.end(), scratch.begin(), scratch.end());
  pad.push_back(target);

  auto b = [&](int k) { return static_cast<int>((pattern >> k) & 1U); };
  Word out;
  if (!ladder) {
    if (w == 0) {
      out.push(padded(SimplePerm(target, {}, 1), n, pad));
    } else if (w == 1) {
      out.push(padded(SimplePerm(target, {controls[0]}, b(0) ? 2 : 1), n, pad));
    } else {
      out.push(SimplePerm(target, {controls[0], controls[1]}, 1ULL << (b(0) + 2 * b(1))));
    }
    return out;
  }

  const auto s = [&](int l) { return scratch[static_cast<std::size_t>(l)]; };
  std::vector<SimplePerm> sigma;
  sigma.push_back(padded(SimplePerm(s(0), {controls[0]}, b(0) ? 2 : 1), n, pad));
  for (int l = 1; l < w - 1; ++l) {
    sigma.emplace_back(s(l), std::initializer_list<int>{s(l - 1), controls[static_cast<std::size_t>(l)]},
                       and_table(b(l)));
  }
  const SimplePerm tau(target, {s(w - 2), controls.back()}, and_table(b(w - 1)));

  Word lambda;
  for (int l = w - 2; l >= 1; --l) lambda.push(sigma[static_cast<std::size_t>(l)]);
  lambda.push(sigma[0]);
  for (int l = 1; l <= w - 2; ++l) lambda.push(sigma[static_cast<std::size_t>(l)]);

  out.reserve(controlled_flip_length(w, true));
  for (int rep = 0; rep < 2; ++rep) {
    out.push(tau);
    out.append(lambda);
  }
  return out;
}

}  // namespace simperm
