#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subseq/baselines.hpp"
#include "subseq/distance.hpp"
#include "subseq/io.hpp"
#include "subseq/reference_net.hpp"
#include "subseq/segmentation.hpp"
#include "subseq/sequence.hpp"

namespace subseq {

// A (query segment, database window) pair surviving the range-query filter.
// distance is exact when the traversal verified the window directly and the
// certified upper bound (the query radius) when the window was accepted
// through a covering radius.
struct SegmentMatch {
  Span query_span;
  WindowRef window;
  ObjectId window_id = 0;
  double distance = 0.0;
};

struct SubsequencePair {
  Span sq;
  Span sx;
  std::uint32_t db_index = 0;
  double distance = 0.0;

  bool same_spans(const SubsequencePair& o) const {
    return db_index == o.db_index && sq.start == o.sq.start && sq.end == o.sq.end &&
           sx.start == o.sx.start && sx.end == o.sx.end;
  }
};

bool pair_span_less(const SubsequencePair& a, const SubsequencePair& b);

struct QueryStats {
  std::uint64_t filter_computations = 0;  // distance evaluations inside the net
  std::uint64_t verify_computations = 0;  // exact span-pair verifications
};

// Database windows indexed in a reference net, plus the bookkeeping to map
// net object ids back to window positions.
class SubseqIndex {
 public:
  SubseqIndex(Dataset ds, SegmentationParams params, DistanceSpec spec, NetConfig net_cfg);

  const Dataset& dataset() const { return dataset_; }
  const SegmentationParams& params() const { return params_; }
  const DistanceSpec& distance_spec() const { return spec_; }
  const ReferenceNet& net() const { return net_; }
  const std::vector<WindowRef>& windows() const { return windows_; }
  const WindowRef& window(ObjectId id) const { return windows_.at(id); }
  SeqView window_view(ObjectId id) const;
  std::vector<WindowEntry> window_entries() const;
  std::uint64_t build_computations() const { return net_.build_computations(); }

 private:
  friend SubseqIndex load_index(std::istream& in);
  SubseqIndex(SegmentationParams params, DistanceSpec spec, NetConfig cfg);

  Dataset dataset_;
  SegmentationParams params_;
  DistanceSpec spec_;
  ReferenceNet net_;
  std::vector<WindowRef> windows_;
};

SubseqIndex build_index(Dataset ds, const SegmentationParams& params, const DistanceSpec& spec,
                        const NetConfig& net_cfg);

// Step 3 + 4: range queries for all query segments, radius eps.
std::vector<SegmentMatch> candidate_pairs(const SubseqIndex& idx, const Sequence& query,
                                          std::uint32_t lambda0, double eps,
                                          QueryStats* stats = nullptr);

// Step 5 candidate ranges around one segment/window match, clamped to the
// sequence bounds.
struct ExpandRanges {
  std::size_t sq_start_lo, sq_start_hi;
  std::size_t sq_end_lo, sq_end_hi;
  std::size_t sx_start_lo, sx_start_hi;
  std::size_t sx_end_lo, sx_end_hi;
};
ExpandRanges expand_candidate(const SegmentMatch& m, const SegmentationParams& p,
                              std::size_t query_len, std::size_t db_len);

// Type I: every pair with |SQ| >= lambda, |SX| >= lambda, ||SQ|-|SX]| <=
// lambda0 and distance <= eps, canonically ordered and deduplicated.
std::vector<SubsequencePair> query_type1(const SubseqIndex& idx, const Sequence& query, double eps,
                                         std::uint32_t lambda0, QueryStats* stats = nullptr);

// Type II: the pairs maximizing min(|SQ|, |SX|) subject to the Type I
// constraints; empty when nothing qualifies at eps.
std::vector<SubsequencePair> query_type2(const SubseqIndex& idx, const Sequence& query, double eps,
                                         std::uint32_t lambda0, QueryStats* stats = nullptr);

struct Type3Result {
  SubsequencePair pair;
  double tier = 0.0;  // the radius at which verification first succeeded
};

// Type III: minimum-distance pair; searches the smallest radius producing a
// segment match, then widens by eps_inc until a pair verifies.
Type3Result query_type3(const SubseqIndex& idx, const Sequence& query, std::uint32_t lambda0,
                        double eps_inc, std::optional<double> eps_hint = std::nullopt,
                        QueryStats* stats = nullptr);

struct QueryDefaults {
  double eps_inc = 0.0;
  double eps_hint = 0.0;
};
// Defaults estimated from a seeded sample of window pairs: eps_inc is 5% of
// the minimum nonzero pairwise distance, eps_hint the maximum observed.
QueryDefaults estimate_query_defaults(const SubseqIndex& idx, std::uint64_t seed,
                                      std::size_t sample_pairs = 1000);

// Exhaustive reference answers; evaluates every qualifying span pair.
struct OracleBudget {
  std::uint64_t max_pairs = 20'000'000;
};
std::vector<SubsequencePair> oracle_type1(const Dataset& ds, const Sequence& query,
                                          const DistanceSpec& spec, double eps,
                                          std::uint32_t lambda, std::uint32_t lambda0,
                                          const OracleBudget& budget = {});
std::vector<SubsequencePair> oracle_type2(const Dataset& ds, const Sequence& query,
                                          const DistanceSpec& spec, double eps,
                                          std::uint32_t lambda, std::uint32_t lambda0,
                                          const OracleBudget& budget = {});
std::optional<SubsequencePair> oracle_type3(const Dataset& ds, const Sequence& query,
                                            const DistanceSpec& spec, std::uint32_t lambda,
                                            std::uint32_t lambda0,
                                            const OracleBudget& budget = {});

// Result rows: query_id, db_seq_id, sq_start, sq_end, sx_start, sx_end, distance
void write_pairs_csv(std::ostream& out, const std::string& query_id,
                     std::span<const SubsequencePair> pairs);

struct IndexFileInfo {
  std::string dataset_path;
  DatasetFormat format = DatasetFormat::lines;
  int dims = 1;
};
void save_index(std::ostream& out, const SubseqIndex& idx, const IndexFileInfo& info);
SubseqIndex load_index(std::istream& in);

}  // namespace subseq
