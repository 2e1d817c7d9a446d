#pragma once

#include <vector>

#include "graphpursuit/nets.hpp"

namespace gp {

/// Bijection between two equal-size nets, stored as pairing[i] = index in
/// `to` matched with from.point(i). distortion is the max absolute change
/// of pairwise distance under the pairing; exact is false when it came
/// from the heuristic search and is only an upper bound on the optimum.
struct Correspondence {
  Net from;
  Net to;
  std::vector<int> pairing;
  double distortion = 0.0;
  bool exact = true;
};

/// Max absolute change of pairwise distance under an index pairing.
double pairing_distortion(const Net& from, const Net& to,
                          std::span<const int> pairing);

/// Recomputes the distortion from scratch.
double distortion_of(const Correspondence& corr);

/// Minimum-distortion bijection between equal-size nets. Up to 9 points
/// this is exact branch-and-bound over permutations (lexicographically
/// first among optima); beyond that, greedy seeding plus 2-swap hill
/// climbing over 20 deterministic restarts, flagged exact = false.
Correspondence min_distortion_bijection(const Net& from, const Net& to);

}  // namespace gp
