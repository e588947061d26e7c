#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subseq/distance.hpp"
#include "subseq/reference_net.hpp"
#include "subseq/sequence.hpp"

namespace subseq {

struct WorkCounter {
  std::uint64_t computations = 0;
  std::uint64_t total = 0;

  // Fraction of indexed windows whose distance was never computed.
  double alpha() const {
    return total == 0 ? 0.0 : 1.0 - static_cast<double>(computations) / static_cast<double>(total);
  }
};

struct WindowEntry {
  ObjectId id = 0;
  SeqView view;
};

struct RangeOutcome {
  std::vector<ObjectId> ids;  // sorted
  WorkCounter work;
};

// Exact range search by scanning every window; the ground truth for both
// index structures.
RangeOutcome linear_scan_range(std::span<const WindowEntry> windows, SeqView query, double eps,
                               const DistanceSpec& spec);

// Greedy maximum-variance reference selection: pick the window whose
// distances to a seeded sample have the largest variance, skipping
// zero-distance duplicates of already-chosen references.
std::vector<ObjectId> mv_select_references(std::span<const WindowEntry> windows, std::size_t k,
                                           std::size_t sample_size, const DistanceSpec& spec,
                                           std::uint64_t seed);

// Reference-based index: k references with a complete window-to-reference
// distance table, queried with triangle-inequality lower/upper bounds.
class MVIndex {
 public:
  MVIndex(std::span<const WindowEntry> windows, std::vector<ObjectId> references,
          const DistanceSpec& spec);

  RangeOutcome range_query(SeqView query, double eps) const;

  std::size_t reference_count() const { return refs_.size(); }
  std::size_t table_entries() const { return table_.size(); }
  std::uint64_t build_computations() const { return build_comps_; }

 private:
  DistanceSpec spec_;
  std::vector<WindowEntry> windows_;
  std::vector<ObjectId> refs_;
  std::vector<std::size_t> ref_rows_;  // index into windows_ per reference
  std::vector<double> table_;          // windows x refs, row-major
  std::uint64_t build_comps_ = 0;
};

struct PruningRow {
  double radius = 0.0;
  std::string method;
  double alpha = 0.0;
  double mean_computations = 0.0;
};

// Runs every (query, radius) through the net, the MV index and a linear scan,
// verifies that all three return identical result sets, and reports the mean
// pruning ratio per radius and method. A result-set mismatch is an error, not
// a statistic.
std::vector<PruningRow> compare_pruning(std::span<const WindowEntry> windows,
                                        std::span<const Sequence> queries,
                                        std::span<const double> radii, const DistanceSpec& spec,
                                        const ReferenceNet& net, const MVIndex& mv);

}  // namespace subseq
