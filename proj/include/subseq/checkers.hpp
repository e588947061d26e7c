#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subseq/distance.hpp"
#include "subseq/sequence.hpp"

namespace subseq {

enum class ViolationKind { triangle, symmetry, identity, consistency };

// A reproducible counterexample: re-running the named check on the witness
// sequences must reproduce the measured values.
struct Violation {
  ViolationKind kind;
  std::vector<Sequence> witness;
  std::vector<double> measured;
  std::string detail;
};

// Brute-force check of the consistency property: for every contiguous SX of X
// there must exist a contiguous SQ of Q with d(SQ, SX) <= d(Q, X). Lengths are
// capped at 14 (budget); equal-length distances only search aligned-length SQ.
std::vector<Violation> check_consistency(const DistanceSpec& spec, const Sequence& q,
                                         const Sequence& x);

// Triangle/symmetry/identity over explicit triples, tolerance 1e-9.
std::vector<Violation> check_metric_axioms(const DistanceSpec& spec,
                                           std::span<const std::array<Sequence, 3>> triples);

// Randomized search for a DTW triangle-inequality counterexample over short
// integer series. Returns the first violation found within max_trials.
std::optional<Violation> search_dtw_triangle_violation(std::uint64_t seed, std::size_t max_trials);

}  // namespace subseq
