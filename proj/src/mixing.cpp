#include <algorithm>
#include <cmath>
#include <numeric>

#include "simperm/errors.hpp"
#include "simperm/mixing.hpp"
#include "simperm/parallel.hpp"

namespace simperm {

double tv_distance(const DistVector& p, const DistVector& q) {
  if (p.size() != q.size()) throw ContractError("distributions have different support sizes");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

DistVector uniform_dist(std::size_t size) { return DistVector(size, 1.0 / static_cast<double>(size)); }

DistVector point_mass(std::size_t size, std::size_t at) {
  DistVector d(size, 0.0);
  d.at(at) = 1.0;
  return d;
}

DistVector mix_dist(double a, const DistVector& p, const DistVector& q) {
  if (p.size() != q.size()) throw ContractError("distributions have different support sizes");
  DistVector r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = a * p[i] + (1 - a) * q[i];
  return r;
}

double event_probability(const DistVector& p, const std::vector<bool>& event) {
  if (p.size() != event.size()) throw ContractError("event has wrong size");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (event[i]) s += p[i];
  }
  return s;
}

DistVector condition_on(const DistVector& p, const std::vector<bool>& event) {
  const double pa = event_probability(p, event);
  if (pa <= 0) throw ContractError("conditioning on a null event");
  DistVector r(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (event[i]) r[i] = p[i] / pa;
  }
  return r;
}

MixingProfile mixing_profile(const TransitionMatrix& m, const MixingOptions& opt) {
  const std::size_t n = m.size();
  if (n == 0) throw ContractError("empty chain");
  {
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t q = m.row_ptr()[i]; q < m.row_ptr()[i + 1]; ++q) col[m.cols()[q]] += m.vals()[q];
    }
    for (double c : col) {
      if (std::abs(c - 1.0) > 1e-9) throw ContractError("uniform law is not stationary for this matrix");
    }
  }
  MixingProfile prof;
  prof.states = n;
  prof.all_starts = opt.all_starts && n <= kAllStartsLimit;
  prof.starts = prof.all_starts ? n : 1;
  const DistVector u = uniform_dist(n);
  std::vector<DistVector> cur(prof.starts), next(prof.starts);
  for (std::size_t s = 0; s < prof.starts; ++s) cur[s] = point_mass(n, s);

  auto worst = [&] {
    double w = 0;
    for (const auto& d : cur) w = std::max(w, tv_distance(d, u));
    return w;
  };
  prof.tv.push_back(worst());
  std::size_t flat = 0;
  for (std::size_t t = 1; t <= opt.max_steps && prof.tv.back() >= opt.eps; ++t) {
    for (std::size_t s = 0; s < prof.starts; ++s) {
      m.left_multiply(cur[s], next[s]);
      std::swap(cur[s], next[s]);
    }
    const double w = worst();
    flat = (w > prof.tv.back() - 1e-14) ? flat + 1 : 0;
    prof.tv.push_back(w);
    if (flat >= 100) {
      prof.stalled = true;
      break;
    }
  }
  if (prof.tv.back() >= opt.eps) prof.stalled = true;
  return prof;
}

MixingProfile mixing_profile(const ChainSpec& spec, const MixingOptions& opt) {
  return mixing_profile(transition_matrix(spec), opt);
}

std::optional<std::size_t> mixing_time(const MixingProfile& prof, double eps) {
  for (std::size_t t = 0; t < prof.tv.size(); ++t) {
    if (prof.tv[t] < eps) return t;
  }
  return std::nullopt;
}

bool profile_nonincreasing(const MixingProfile& prof, double tol) {
  for (std::size_t t = 1; t < prof.tv.size(); ++t) {
    if (prof.tv[t] > prof.tv[t - 1] + tol) return false;
  }
  return true;
}

SubmultReport check_submultiplicative(const MixingProfile& prof, int max_l) {
  SubmultReport r;
  r.tau_quarter = mixing_time(prof, 0.25);
  for (int l = 1; l <= max_l; ++l) {
    const auto t = mixing_time(prof, std::ldexp(1.0, -l - 1));
    r.rows.emplace_back(l, t);
    if (!r.tau_quarter) continue;  // non-mixing: nothing to compare
    if (!t || *t > static_cast<std::size_t>(l) * *r.tau_quarter) r.holds = false;
  }
  return r;
}

ConsistencyReport gap_mixing_consistency(const TransitionMatrix& m, const std::vector<double>& eps) {
  ConsistencyReport rep;
  rep.states = m.size();
  rep.symmetric = m.max_asymmetry() <= 1e-12;
  rep.lazy = m.min_diagonal() > 0;
  EigOptions eo;
  eo.vectors = false;
  rep.gap = eig_symmetric(m, eo).gap;
  rep.non_mixing = rep.gap <= 1e-12;
  MixingOptions mo;
  mo.eps = eps.empty() ? 0.25 : *std::min_element(eps.begin(), eps.end());
  if (rep.non_mixing) mo.max_steps = 200;
  const auto prof = mixing_profile(m, mo);
  const double v = static_cast<double>(m.size());
  for (double e : eps) {
    ConsistencyRow row;
    row.eps = e;
    row.tau = mixing_time(prof, e);
    if (rep.non_mixing || !row.tau) {
      row.upper = std::numeric_limits<double>::infinity();
      row.lower = 0;
      rep.non_mixing = true;
    } else {
      row.upper = std::log(v / e) / rep.gap;
      row.upper_ok = static_cast<double>(*row.tau) <= row.upper;
      const double l = std::max(0.0, std::log(1.0 / (2 * e)));
      const double tau = static_cast<double>(*row.tau);
      row.lower = l > 0 ? l / (tau + l) : 0;
      row.lower_ok = rep.gap >= row.lower;
      row.lower_literal = l > 0 ? (tau > 0 ? l / tau : std::numeric_limits<double>::infinity()) : 0;
      row.lower_literal_ok = rep.gap >= row.lower_literal;
    }
    rep.violated = rep.violated || !row.upper_ok || !row.lower_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

ConsistencyReport gap_mixing_consistency(const ChainSpec& spec, const std::vector<double>& eps) {
  return gap_mixing_consistency(transition_matrix(spec), eps);
}

double CollisionEstimate::renyi2() const {
  return q2 > 0 ? -std::log2(q2) : std::numeric_limits<double>::infinity();
}

CollisionEstimate collision_from_sums(const CollisionSums& s, std::uint64_t trials, double bound, double z) {
  if (trials < 3) throw ContractError("collision estimate needs at least 3 trials");
  const long double T = static_cast<long double>(trials);
  CollisionEstimate e;
  const long double q2 = s.pairs / (T * (T - 1));
  const long double q3 = s.triples / (T * (T - 1) * (T - 2));
  const long double zeta1 = std::max<long double>(0, q3 - q2 * q2);
  const long double zeta2 = q2 * (1 - q2);
  const long double var = 2.0L / (T * (T - 1)) * (2 * (T - 2) * zeta1 + zeta2);
  e.q2 = static_cast<double>(q2);
  e.sigma = static_cast<double>(std::sqrt(var));
  e.bound = bound;
  e.within = e.q2 + z * e.sigma <= bound;
  return e;
}

CollisionEstimate collision_from_counts(const std::vector<std::uint32_t>& counts, std::uint64_t trials,
                                        double bound, double z) {
  CollisionSums s;
  std::uint64_t total = 0;
  for (auto c : counts) {
    s.add(c);
    total += c;
  }
  if (total != trials) throw ContractError("histogram total differs from the trial count");
  return collision_from_sums(s, trials, bound, z);
}

std::uint64_t default_walk_steps(int n, int w) {
  return static_cast<std::uint64_t>(std::ceil(n * std::log2(static_cast<double>(n)) * w));
}

GenericitySurvey genericity_survey(int n, int k, const Partition& part, std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t walk_steps, int threads) {
  if (part.n != n) throw ContractError("partition dimension differs from n");
  if (trials == 0) throw ContractError("genericity survey needs trials > 0");
  GenericitySurvey g;
  g.n = n;
  g.k = k;
  g.w = part.w;
  g.p = part.p;
  g.trials = trials;
  g.walk_steps = walk_steps;
  g.bound = generic_fraction_bound(part, k);
  std::vector<std::uint8_t> uni(trials), walk(trials);
  std::vector<std::uint64_t> start(static_cast<std::size_t>(k));
  std::iota(start.begin(), start.end(), 0);
  const TupleMatrix m0(n, start);
  parallel_chunks(trials, threads, [&](std::size_t b, std::size_t e, int) {
    for (std::size_t t = b; t < e; ++t) {
      auto rng = SeedStream::derive(seed, t);
      uni[t] = is_generic(random_tuple(n, k, rng), part);
      auto rows = m0.rows();
      for (std::uint64_t s = 0; s < walk_steps; ++s) {
        const auto gsig = sample_sigma({n, 2}, rng);
        for (auto& r : rows) r = gsig.apply_bits(r);
      }
      walk[t] = is_generic(TupleMatrix(n, rows), part);
    }
  });
  auto summarize = [&](const std::vector<std::uint8_t>& v, double& f, double& sd, bool& ok) {
    const double c = static_cast<double>(std::accumulate(v.begin(), v.end(), std::uint64_t{0}));
    const double T = static_cast<double>(trials);
    f = c / T;
    sd = std::sqrt(std::max(f * (1 - f), std::max(0.0, g.bound * (1 - g.bound))) / T);
    ok = f >= g.bound - 3 * sd;
  };
  summarize(uni, g.uniform_fraction, g.uniform_sigma, g.uniform_ok);
  summarize(walk, g.walk_fraction, g.walk_sigma, g.walk_ok);
  return g;
}

}  // namespace simperm
