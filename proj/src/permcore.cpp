#include <algorithm>
#include <bit>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "simperm/cube.hpp"
#include "simperm/errors.hpp"
#include "simperm/tuple_matrix.hpp"

namespace simperm {

namespace {

std::uint64_t dim_mask(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw ContractError("dimension " + std::to_string(n) + " outside [1, 64]");
  }
}

std::uint64_t table_mask(int width) {
  const int bits = 1 << width;
  return bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
}

}  // namespace

// --- CubePoint --------------------------------------------------------------

CubePoint::CubePoint(int n, std::uint64_t bits) : bits_(bits), n_(n) {
  check_dim(n);
  if ((bits & ~dim_mask(n)) != 0) {
    throw ContractError("point has bits set beyond dimension " + std::to_string(n));
  }
}

CubePoint CubePoint::from_bits_string(const std::string& s) {
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1') {
      bits |= 1ULL << j;
    } else if (s[j] != '0') {
      throw ContractError("bit string may only contain 0 and 1: " + s);
    }
  }
  return CubePoint(static_cast<int>(s.size()), bits);
}

CubePoint CubePoint::from_hex(int n, const std::string& hex) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(hex, &pos, 16);
  } catch (const std::exception&) {
    throw ContractError("not a hex value: " + hex);
  }
  if (pos != hex.size()) throw ContractError("not a hex value: " + hex);
  return CubePoint(n, v);
}

CubePoint CubePoint::flipped(int j) const {
  if (j < 0 || j >= n_) throw ContractError("flip index out of range");
  return CubePoint(n_, bits_ ^ (1ULL << j));
}

std::string CubePoint::to_bits_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int j = 0; j < n_; ++j) {
    if (bit(j)) s[static_cast<std::size_t>(j)] = '1';
  }
  return s;
}

std::string CubePoint::to_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(bits_));
  return buf;
}

int hamming_distance(const CubePoint& a, const CubePoint& b) {
  if (a.dim() != b.dim()) throw ContractError("dimension mismatch");
  return std::popcount(a.bits() ^ b.bits());
}

// --- SimplePerm -------------------------------------------------------------

SimplePerm::SimplePerm(int target, std::span<const int> controls, std::uint64_t table) {
  if (controls.size() > static_cast<std::size_t>(kMaxWidth)) {
    throw ContractError("width exceeds " + std::to_string(kMaxWidth));
  }
  if (target < 0 || target >= kMaxDim) throw ContractError("target index out of range");
  width_ = static_cast<std::uint8_t>(controls.size());
  target_ = static_cast<std::uint8_t>(target);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    const int c = controls[k];
    if (c < 0 || c >= kMaxDim) throw ContractError("control index out of range");
    if (c == target) {
      throw ContractError("control " + std::to_string(c) + " equals the target");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (controls[l] == c) throw ContractError("repeated control " + std::to_string(c));
    }
    controls_[k] = static_cast<std::uint8_t>(c);
  }
  if ((table & ~table_mask(width_)) != 0) {
    throw ContractError("truth table wider than 2^w bits");
  }
  table_ = table;
}

std::vector<int> SimplePerm::controls() const {
  return {controls_.begin(), controls_.begin() + width_};
}

int SimplePerm::max_index() const {
  int m = target_;
  for (int k = 0; k < width_; ++k) m = std::max<int>(m, controls_[static_cast<std::size_t>(k)]);
  return m;
}

bool SimplePerm::uses(int index) const {
  if (index == target_) return true;
  for (int k = 0; k < width_; ++k) {
    if (controls_[static_cast<std::size_t>(k)] == index) return true;
  }
  return false;
}

SimplePerm SimplePerm::relabeled(std::span<const int> map) const {
  std::array<int, kMaxWidth> c{};
  for (int k = 0; k < width_; ++k) {
    c[static_cast<std::size_t>(k)] = map[controls_[static_cast<std::size_t>(k)]];
  }
  return SimplePerm(map[target_], std::span<const int>(c.data(), width_), table_);
}

SimplePerm SimplePerm::as_nop() const {
  SimplePerm p = *this;
  p.table_ = 0;
  return p;
}

CubePoint apply_perm(const SimplePerm& p, const CubePoint& x) {
  if (p.max_index() >= x.dim()) {
    throw ContractError("generator index " + std::to_string(p.max_index()) +
                        " out of range for n=" + std::to_string(x.dim()));
  }
  return CubePoint(x.dim(), p.apply_bits(x.bits()));
}

SimplePerm pad_to_width(const SimplePerm& p, int width, std::span<const int> candidates) {
  if (width > kMaxWidth) throw ContractError("padding width too large");
  std::vector<int> controls = p.controls();
  std::uint64_t table = p.table();
  for (int c : candidates) {
    if (static_cast<int>(controls.size()) >= width) break;
    if (p.uses(c) || std::find(controls.begin(), controls.end(), c) != controls.end()) continue;
    // New control is the most significant address bit; duplicate the table.
    const int span = 1 << controls.size();
    table |= table << span;
    controls.push_back(c);
  }
  if (static_cast<int>(controls.size()) < width) {
    throw ContractError("not enough unused candidate indices to pad generator");
  }
  return SimplePerm(p.target(), controls, table);
}

// --- Word -------------------------------------------------------------------

void Word::append(const Word& other) {
  const std::size_t base = gens_.size();
  gens_.insert(gens_.end(), other.gens_.begin(), other.gens_.end());
  for (const auto& s : other.spans_) spans_.push_back({s.label, s.begin + base, s.end + base});
}

void Word::label_tail(std::size_t begin, std::string label) {
  spans_.push_back({std::move(label), begin, gens_.size()});
}

void Word::add_span(BlockSpan span) {
  if (span.begin > span.end || span.end > gens_.size()) throw ContractError("span out of range");
  spans_.push_back(std::move(span));
}

Word Word::reversed() const {
  Word r;
  r.gens_.assign(gens_.rbegin(), gens_.rend());
  const std::size_t n = gens_.size();
  for (const auto& s : spans_) r.spans_.push_back({s.label, n - s.end, n - s.begin});
  return r;
}

std::string Word::label_at(std::size_t i) const {
  for (auto it = spans_.rbegin(); it != spans_.rend(); ++it) {
    if (it->begin <= i && i < it->end) return it->label;
  }
  return {};
}

int Word::max_index() const {
  int m = -1;
  for (const auto& g : gens_) m = std::max(m, g.max_index());
  return m;
}

Word Word::relabeled(std::span<const int> map) const {
  Word r;
  r.gens_.reserve(gens_.size());
  for (const auto& g : gens_) r.gens_.push_back(g.relabeled(map));
  r.spans_ = spans_;
  return r;
}

void Word::relabel(std::span<const int> map) {
  for (auto& g : gens_) g = g.relabeled(map);
}

CubePoint apply_word(const Word& w, const CubePoint& x) {
  if (w.max_index() >= x.dim()) {
    throw ContractError("word index out of range for n=" + std::to_string(x.dim()));
  }
  return CubePoint(x.dim(), w.apply_bits(x.bits()));
}

// --- Sigma census -----------------------------------------------------------

void SigmaSpec::validate() const {
  if (n < 1 || n > kMaxDim) throw SpecError("sigma spec: n out of range");
  if (w < 0 || w > 4) throw SpecError("sigma spec: width must be in [0, 4]");
  if (w > n - 1) {
    throw SpecError("sigma spec: width " + std::to_string(w) + " exceeds n-1 = " +
                    std::to_string(n - 1));
  }
}

std::uint64_t SigmaSpec::index_tuples() const {
  validate();
  std::uint64_t c = static_cast<std::uint64_t>(n);
  for (int k = 1; k <= w; ++k) c *= static_cast<std::uint64_t>(n - k);
  return c;
}

std::uint64_t SigmaSpec::table_count() const {
  validate();
  return 1ULL << (1 << w);
}

namespace {

// Ordered w-tuples of distinct values from `pool`, ranked lexicographically.
std::uint64_t falling(std::uint64_t m, int q) {
  std::uint64_t r = 1;
  for (int k = 0; k < q; ++k) r *= m - static_cast<std::uint64_t>(k);
  return r;
}

}  // namespace

std::vector<SimplePerm> enumerate_sigma(const SigmaSpec& spec) {
  const std::uint64_t total = spec.count();
  std::vector<SimplePerm> out;
  out.reserve(total);
  for (std::uint64_t r = 0; r < total; ++r) out.push_back(sigma_unrank(spec, r));
  return out;
}

std::uint64_t sigma_rank(const SigmaSpec& spec, const SimplePerm& p) {
  spec.validate();
  if (p.width() != spec.w) throw ContractError("generator width does not match spec");
  if (p.max_index() >= spec.n) throw ContractError("generator index out of range");
  const std::uint64_t tables = spec.table_count();
  const std::uint64_t avail = static_cast<std::uint64_t>(spec.n - 1);
  std::uint64_t jrank = 0;
  std::uint64_t used = 1ULL << p.target();
  for (int k = 0; k < spec.w; ++k) {
    const int c = p.control(k);
    const std::uint64_t below = static_cast<std::uint64_t>(std::popcount(used & ((1ULL << c) - 1)));
    const std::uint64_t r = static_cast<std::uint64_t>(c) - below;
    jrank += r * falling(avail - static_cast<std::uint64_t>(k) - 1, spec.w - k - 1);
    used |= 1ULL << c;
  }
  const std::uint64_t per_target = falling(avail, spec.w) * tables;
  return static_cast<std::uint64_t>(p.target()) * per_target + jrank * tables + p.table();
}

SimplePerm sigma_unrank(const SigmaSpec& spec, std::uint64_t rank) {
  if (rank >= spec.count()) throw ContractError("sigma rank out of range");
  const std::uint64_t tables = spec.table_count();
  const std::uint64_t avail = static_cast<std::uint64_t>(spec.n - 1);
  const std::uint64_t per_target = falling(avail, spec.w) * tables;
  const int target = static_cast<int>(rank / per_target);
  rank %= per_target;
  const std::uint64_t table = rank % tables;
  std::uint64_t jrank = rank / tables;
  std::array<int, kMaxWidth> controls{};
  std::uint64_t used = 1ULL << target;
  for (int k = 0; k < spec.w; ++k) {
    const std::uint64_t block = falling(avail - static_cast<std::uint64_t>(k) - 1, spec.w - k - 1);
    std::uint64_t r = jrank / block;
    jrank %= block;
    int c = 0;
    for (;; ++c) {
      if (used & (1ULL << c)) continue;
      if (r == 0) break;
      --r;
    }
    controls[static_cast<std::size_t>(k)] = c;
    used |= 1ULL << c;
  }
  return SimplePerm(target, std::span<const int>(controls.data(), static_cast<std::size_t>(spec.w)),
                    table);
}

SimplePerm sample_sigma(const SigmaSpec& spec, SeedStream& rng) {
  return sigma_unrank(spec, rng.uniform(spec.count()));
}

// --- Full tables ------------------------------------------------------------

std::vector<std::uint32_t> identity_table(int n) {
  if (n < 1 || n > kMaxTableDim) {
    throw ResourceError("full permutation table needs n <= 24, got n=" + std::to_string(n));
  }
  std::vector<std::uint32_t> t(std::size_t{1} << n);
  std::iota(t.begin(), t.end(), 0U);
  return t;
}

std::vector<std::uint32_t> word_to_table(const Word& w, int n) {
  auto table = identity_table(n);
  if (w.max_index() >= n) throw ContractError("word index out of range for n=" + std::to_string(n));
  for (auto& v : table) v = static_cast<std::uint32_t>(w.apply_bits(v));
  return table;
}

int table_sign(std::span<const std::uint32_t> table) {
  std::vector<bool> seen(table.size(), false);
  std::size_t cycles = 0;
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (std::size_t v = s; !seen[v]; v = table[v]) seen[v] = true;
  }
  return ((table.size() - cycles) % 2 == 0) ? 1 : -1;
}

int word_sign(const Word& w, int n) { return table_sign(word_to_table(w, n)); }

// --- TupleMatrix ------------------------------------------------------------

TupleMatrix::TupleMatrix(int n, std::vector<std::uint64_t> rows) : n_(n), rows_(std::move(rows)) {
  check_dim(n);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if ((rows_[r] & ~dim_mask(n)) != 0) throw ContractError("row has bits beyond dimension");
    for (std::size_t q = 0; q < r; ++q) {
      if (rows_[q] == rows_[r]) throw ContractError("tuple matrix rows must be distinct");
    }
  }
}

TupleMatrix TupleMatrix::from_key(int n, int k, std::uint64_t key) {
  if (n * k > 64) throw ResourceError("packed key needs k*n <= 64");
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(k));
  for (int r = k - 1; r >= 0; --r) {
    rows[static_cast<std::size_t>(r)] = key & dim_mask(n);
    key = n >= 64 ? 0 : key >> n;
  }
  return TupleMatrix(n, std::move(rows));
}

std::uint64_t TupleMatrix::key() const {
  if (n_ * k() > 64) throw ResourceError("packed key needs k*n <= 64");
  std::uint64_t key = 0;
  for (auto r : rows_) key = (n_ >= 64 ? 0 : key << n_) | r;
  return key;
}

std::uint64_t TupleMatrix::restrict_row(int r, std::span<const int> cols) const {
  std::uint64_t v = 0;
  const std::uint64_t x = row(r);
  for (std::size_t k = 0; k < cols.size(); ++k) v |= ((x >> cols[k]) & 1U) << k;
  return v;
}

bool TupleMatrix::rows_distinct_on(std::span<const int> cols) const {
  std::vector<std::uint64_t> v(rows_.size());
  for (int r = 0; r < k(); ++r) v[static_cast<std::size_t>(r)] = restrict_row(r, cols);
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

TupleMatrix TupleMatrix::with_bit_flipped(int r, int c) const {
  auto rows = rows_;
  rows.at(static_cast<std::size_t>(r)) ^= 1ULL << c;
  return TupleMatrix(n_, std::move(rows));
}

TupleMatrix TupleMatrix::with_row(int r, std::uint64_t value) const {
  auto rows = rows_;
  rows.at(static_cast<std::size_t>(r)) = value;
  return TupleMatrix(n_, std::move(rows));
}

std::string TupleMatrix::to_hex() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (r) os << ':';
    os << std::hex << rows_[r];
  }
  return os.str();
}

TupleMatrix apply_perm_tuple(const SimplePerm& p, const TupleMatrix& m) {
  if (p.max_index() >= m.dim()) throw ContractError("generator index out of range");
  std::vector<std::uint64_t> rows = m.rows();
  for (auto& r : rows) r = p.apply_bits(r);
  return TupleMatrix(m.dim(), std::move(rows));
}

TupleMatrix apply_word_tuple(const Word& w, const TupleMatrix& m) {
  if (w.max_index() >= m.dim()) throw ContractError("word index out of range");
  std::vector<std::uint64_t> rows = m.rows();
  for (auto& r : rows) r = w.apply_bits(r);
  return TupleMatrix(m.dim(), std::move(rows));
}

}  // namespace simperm
