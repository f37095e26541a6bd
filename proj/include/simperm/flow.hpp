#pragma once

#include <cstdint>
#include <string>

#include "simperm/chains.hpp"

namespace simperm {

enum class FlowKind {
  cayley,   // 3-cycle walk compared to the Schreier walk
  recolor,  // clique recoloring compared to the Schreier walk
  generic,  // product chain compared to the generic-restricted walk
};

std::string to_string(FlowKind k);
FlowKind flow_kind_from_string(const std::string& s);

struct FlowParams {
  int n = 4;
  int k = 2;
  int w = 2;  // generic kind only
};

struct CongestionReport {
  FlowKind kind = FlowKind::recolor;
  FlowParams params;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  double states = 0;    // |V|
  double d = 0;         // target degree |Sigma_2|
  double d_tilde = 0;   // comparison degree (generic: reported as d, see README)

  std::uint64_t loops = 0;  // commodities with M == M'
  std::uint64_t paths = 0;
  std::uint64_t type1 = 0;
  std::uint64_t type2 = 0;
  std::uint64_t retries = 0;       // invalid phi, resampled
  std::uint64_t split_distinct = 0;   // type (ii) paths meeting the distinct-rows condition
  std::uint64_t replay_failures = 0;
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  std::size_t observed_edges = 0;

  double max_load = 0;   // max_e sum_{gamma through e} f(gamma) |gamma|
  double mean_load = 0;  // over observed edges
  double A_hat = 0;
  double A_sigma = 0;

  double phi_rejection() const {
    return retries + type2 ? static_cast<double>(retries) / static_cast<double>(retries + type2) : 0.0;
  }
};

struct FlowOptions {
  int threads = 1;
  bool strict = false;  // throw VerificationError on the first replay failure
};

CongestionReport estimate_congestion(FlowKind kind, const FlowParams& params, std::uint64_t samples,
                                     std::uint64_t seed, const FlowOptions& opt = {});

// Schreier walk compared to itself with single-edge paths: exact.
CongestionReport self_comparison(const SchreierSpec& spec);

struct ComparisonBound {
  double bound = 0;  // gap(P~) / A
  double sigma = 0;
};

ComparisonBound comparison_bound(const CongestionReport& rep, double gap_comparison);

}  // namespace simperm
