#include <algorithm>
#include <cmath>

#include "simperm/errors.hpp"
#include "simperm/synthesis.hpp"

namespace simperm {

namespace {

std::vector<int> sample_distinct(const std::vector<int>& pool, std::size_t count, SeedStream& rng) {
  if (count > pool.size()) {
    throw ContractError("need " + std::to_string(count) + " distinct tail columns, only " +
                        std::to_string(pool.size()) + " available");
  }
  auto v = pool;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform(v.size() - i);
    std::swap(v[i], v[j]);
  }
  v.resize(count);
  return v;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// [ (prod_{c in targets} tau_c) Lambda ]^2 on controls `ctrl` with pattern
// `beta`, or direct gates when w <= 2.
Word multi_flip(int n, const std::vector<int>& targets, const std::vector<int>& ctrl,
                std::uint64_t beta, const std::vector<int>& scratch, const std::vector<int>& pad) {
  Word out;
  if (targets.empty()) return out;
  const int w = static_cast<int>(ctrl.size());
  if (w <= 2) {
    FlipOptions opt;
    opt.pad = pad;
    for (int c : targets) out.append(synth_controlled_flip(n, c, ctrl, beta, scratch, opt));
    return out;
  }
  // Reuse the single-target ladder and splice in the extra tau gates.
  FlipOptions opt;
  opt.pad = pad;
  const Word one = synth_controlled_flip(n, targets[0], ctrl, beta, scratch, opt);
  const std::size_t half = one.size() / 2;
  for (int rep = 0; rep < 2; ++rep) {
    const SimplePerm& tau = one[rep * half];
    for (int c : targets) {
      out.push(SimplePerm(c, {tau.control(0), tau.control(1)}, tau.table()));
    }
    for (std::size_t q = rep * half + 1; q < (rep + 1) * half; ++q) out.push(one[q]);
  }
  return out;
}

void check_block(const Partition& part, int b) {
  if (b < 0 || b >= part.p) throw ContractError("block index out of range");
}

}  // namespace

std::vector<int> block_first_half(const std::vector<int>& block) {
  return {block.begin(), block.begin() + static_cast<std::ptrdiff_t>(block.size() / 2)};
}

std::vector<int> block_second_half(const std::vector<int>& block) {
  return {block.begin() + static_cast<std::ptrdiff_t>(block.size() / 2), block.end()};
}

int type2_prefix_length(int w, int k) {
  const double lw = w > 1 ? std::log2(static_cast<double>(w)) : 0.0;
  const double lk = k > 1 ? std::log2(static_cast<double>(k)) : 0.0;
  const double len = static_cast<double>(w) * lw * (1.0 + 2.0 * lk);
  return std::max(1, static_cast<int>(std::ceil(len - 1e-12)));
}

bool replay_generic(const Word& w, const TupleMatrix& m, const Partition& part, std::size_t* bad) {
  auto rows = m.rows();
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (auto& r : rows) r = w[i].apply_bits(r);
    const TupleMatrix cur(m.dim(), rows);
    if (!is_generic(cur, part)) {
      if (bad) *bad = i;
      return false;
    }
  }
  return true;
}

Word chi_substitute(const Word& w, const std::vector<int>& block, int s1, int s2) {
  if (s1 == s2) throw ContractError("chi scratch indices must differ");
  if (contains(block, s1) || contains(block, s2)) throw ContractError("chi scratch lies inside the block");
  Word out;
  for (std::size_t q = 0; q < w.size(); ++q) {
    const SimplePerm& g = w[q];
    if (g.uses(s1) || g.uses(s2)) throw ContractError("gate touches chi scratch index");
    const bool inside = g.width() == 2 && contains(block, g.target()) && contains(block, g.control(0)) &&
                        contains(block, g.control(1));
    if (!inside) {
      out.push(g);
      continue;
    }
    // h(a, b) = f0(b) ^ a f1(b) with a = first control, b = second.
    const int i1 = g.target(), j1 = g.control(0), j2 = g.control(1);
    const auto h = [&](int a, int b) { return static_cast<int>((g.table() >> (a + 2 * b)) & 1U); };
    std::uint64_t ta = 0, td1 = 0;
    for (int b = 0; b < 2; ++b) {
      const int f0 = h(0, b), f1 = h(0, b) ^ h(1, b);
      if (f1) ta |= 1ULL << (1 + 2 * b);          // s2 ^= s1 f1(b)
      td1 |= 1ULL << ((f0 ? 0 : 1) + 2 * b);      // i1 ^= s2 ^ f0(b)
    }
    const SimplePerm A(s2, {s1, j2}, ta);
    const SimplePerm B(s1, {j1, s2}, 0xA);        // s1 ^= x_j1
    const SimplePerm D1(i1, {s2, j2}, td1);
    const SimplePerm D2(i1, {s2, j2}, 0xA);       // i1 ^= s2
    const std::size_t b0 = out.size();
    for (const auto& x : {A, B, A, D1, A, B, A, D2}) out.push(x);
    out.label_tail(b0, "chi-sub");
  }
  return out;
}

Word synth_type1_path(const TupleMatrix& m, const Type1Spec& spec, const Partition& part) {
  if (m.dim() != part.n) throw ContractError("matrix and partition dimensions differ");
  check_block(part, spec.block);
  if (spec.row < 0 || spec.row >= m.k()) throw ContractError("row out of range");
  if (!contains(part.tail, spec.column)) throw ContractError("type (i) column must lie in the tail");
  if (static_cast<int>(spec.scratch.size()) != part.w - 1) throw ContractError("type (i) needs w-1 scratch columns");
  for (int s : spec.scratch) {
    if (!contains(part.tail, s) || s == spec.column) throw ContractError("type (i) scratch must lie in the tail minus c");
  }
  if (!is_generic(m, part)) throw ContractError("type (i) path needs a generic matrix");
  const auto& cj = part.blocks[static_cast<std::size_t>(spec.block)];
  const std::uint64_t beta = m.restrict_row(spec.row, cj);
  FlipOptions opt;
  opt.force_ladder = true;
  opt.pad = {spec.column};
  Word w = synth_controlled_flip(part.n, spec.column, cj, beta, spec.scratch, opt);
  w.label_tail(0, "type1");
  return w;
}

Type2Result synth_type2_path(const TupleMatrix& m, const TupleMatrix& m2, const Type2Spec& spec,
                             const Partition& part, SeedStream& rng) {
  const int n = part.n;
  const int w = part.w;
  if (m.dim() != n || m2.dim() != n || m.k() != m2.k()) throw ContractError("matrix shapes differ");
  check_block(part, spec.block);
  check_block(part, spec.helper);
  if (spec.block == spec.helper) throw ContractError("helper block must differ from the rewritten block");
  if (spec.row < 0 || spec.row >= m.k()) throw ContractError("row out of range");
  const auto& ci = part.blocks[static_cast<std::size_t>(spec.block)];
  const auto& cj = part.blocks[static_cast<std::size_t>(spec.helper)];
  std::uint64_t ci_mask = 0;
  for (int c : ci) ci_mask |= 1ULL << c;
  for (int r = 0; r < m.k(); ++r) {
    const std::uint64_t d = m.row(r) ^ m2.row(r);
    if ((r != spec.row && d != 0) || (d & ~ci_mask) != 0) {
      throw ContractError("type (ii) endpoints must differ only in the chosen row on the chosen block");
    }
  }
  if (!is_generic(m, part) || !is_generic(m2, part)) throw ContractError("type (ii) endpoints must be generic");
  const bool substitute = w >= 3;
  if (substitute) {
    if (spec.s1 < 0 || spec.s2 < 0 || !contains(part.tail, spec.s1) || !contains(part.tail, spec.s2)) {
      throw ContractError("chi scratch must be two tail columns");
    }
  }
  const int pad_index = !part.tail.empty() ? (spec.s1 >= 0 ? spec.s1 : part.tail[0]) : -1;

  Type2Result res;
  const int len = spec.prefix_length >= 0 ? spec.prefix_length : type2_prefix_length(w, m.k());
  const auto pick = [&](std::size_t bound) { return static_cast<std::size_t>(rng.uniform(bound)); };
  for (int q = 0; q < len; ++q) {
    if (w >= 3) {
      auto idx = sample_distinct(ci, 3, rng);
      res.prefix.push(SimplePerm(idx[0], {idx[1], idx[2]}, rng.uniform(16)));
    } else if (w == 2) {
      const std::size_t t = pick(2);
      SimplePerm g(ci[t], {ci[1 - t]}, rng.uniform(4));
      if (pad_index >= 0) g = pad_to_width(g, 2, std::vector<int>{pad_index});
      res.prefix.push(g);
    } else {
      SimplePerm g(ci[0], {}, rng.uniform(2));
      if (static_cast<int>(part.tail.size()) >= 2) g = pad_to_width(g, 2, part.tail);
      res.prefix.push(g);
    }
  }
  Word phi = substitute ? chi_substitute(res.prefix, ci, spec.s1, spec.s2) : res.prefix;
  phi.label_tail(0, "phi-prefix");

  const TupleMatrix mh = apply_word_tuple(res.prefix, m);
  const TupleMatrix mh2 = apply_word_tuple(res.prefix, m2);
  const int q = (w - 1) / 2;
  const std::vector<int> c_first(ci.begin(), ci.begin() + q);
  const std::vector<int> c_last(ci.end() - q, ci.end());
  res.split_distinct = mh.rows_distinct_on(c_last) && mh2.rows_distinct_on(c_first);

  const std::uint64_t a = mh.row(spec.row), a2 = mh2.row(spec.row);
  const std::uint64_t beta = m.restrict_row(spec.row, cj);
  std::vector<int> pad = spec.scratch;
  if (pad_index >= 0) pad.insert(pad.begin(), pad_index);
  Word middle;
  for (const auto& half : {block_first_half(ci), block_second_half(ci)}) {
    std::vector<int> diff;
    for (int c : half) {
      if (((a ^ a2) >> c) & 1U) diff.push_back(c);
    }
    middle.append(multi_flip(n, diff, cj, beta, spec.scratch, pad));
  }
  middle.label_tail(0, "middle");

  res.word.append(phi);
  res.word.append(middle);
  res.word.append(phi.reversed());
  res.word.label_tail(0, "type2");

  if (apply_word_tuple(res.word, m) != m2) {
    throw VerificationError("type (ii) path does not reach its endpoint");
  }
  if (replay_generic(res.word, m, part, &res.first_bad_step)) {
    res.status = PathStatus::ok;
  } else {
    res.status = PathStatus::retry;
  }
  return res;
}

Type1Spec random_type1_spec(const Partition& part, int row, int column, SeedStream& rng) {
  Type1Spec s;
  s.row = row;
  s.column = column;
  s.block = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(part.p)));
  std::vector<int> pool;
  for (int c : part.tail) {
    if (c != column) pool.push_back(c);
  }
  s.scratch = sample_distinct(pool, static_cast<std::size_t>(part.w - 1), rng);
  return s;
}

Type2Spec random_type2_spec(const Partition& part, int block, int row, SeedStream& rng) {
  if (part.p < 2) throw ContractError("type (ii) paths need at least two blocks");
  Type2Spec s;
  s.row = row;
  s.block = block;
  s.helper = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(part.p - 1)));
  if (s.helper >= block) ++s.helper;
  s.scratch = sample_distinct(part.tail, static_cast<std::size_t>(part.w - 1), rng);
  if (part.tail.size() >= 2) {
    const auto chi = sample_distinct(part.tail, 2, rng);
    s.s1 = chi[0];
    s.s2 = chi[1];
  }
  return s;
}

}  // namespace simperm
