#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "subseq/distance.hpp"
#include "subseq/sequence.hpp"

namespace subseq {

using ObjectId = std::uint32_t;

// eps_prime is the base radius: a reference at level i covers a ball of
// radius eps_prime * 2^i. num_max caps how many parent lists may hold one
// node (nullopt = unlimited).
struct NetConfig {
  double eps_prime = 1.0;
  std::optional<std::uint32_t> num_max = 5;

  void validate() const;
};

struct NetStats {
  std::size_t level_count = 0;   // occupied level span (top - bottom + 1)
  std::size_t node_count = 0;    // stored objects, including zero-distance twins
  std::size_t list_count = 0;    // references with a non-empty child list
  std::size_t total_entries = 0; // sum of child-list sizes (== parent links)
  double avg_parents = 0.0;      // total_entries / node_count
  std::size_t approx_bytes = 0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

struct RangeResult {
  std::vector<ObjectId> ids;  // sorted ascending
  std::uint64_t computations = 0;
  // (id, exact distance) for objects whose distance was computed directly;
  // objects accepted purely through covering radii do not appear here.
  std::vector<std::pair<ObjectId, double>> verified;
};

// Hierarchical reference net: a leveled metric index with geometric radii and
// multi-parent child lists.
//
// Structure maintained here:
//   * every stored object is a node at one integer level (negative levels are
//     used when objects sit closer than eps_prime);
//   * the root is the unique top node; a parent sits strictly above a child
//     and covers it within eps_prime * 2^(child_level + 1);
//   * same-level nodes are separated by more than eps_prime * 2^level;
//   * distinct objects at distance exactly zero are kept in a twin bucket
//     attached to the first-inserted copy.
//
// Insertion descends from the root to the lowest level at which some existing
// node can cover the new object, then links it under the nearest covering
// nodes (capped at num_max). Deletion re-inserts orphaned children; deleting
// the root promotes the child with the largest median distance to its
// siblings. Range queries sweep levels top-down, accepting or pruning whole
// subtrees with the triangle inequality and counting every distance
// evaluation.
class ReferenceNet {
 public:
  ReferenceNet(DistanceSpec spec, NetConfig cfg);

  ReferenceNet(ReferenceNet&& other) noexcept;
  ReferenceNet& operator=(ReferenceNet&& other) noexcept;
  ReferenceNet(const ReferenceNet&) = delete;
  ReferenceNet& operator=(const ReferenceNet&) = delete;

  void insert(ObjectId id, Sequence payload);
  void erase(ObjectId id);

  // Exact range search: every object within eps of the query, plus the count
  // of distance evaluations the traversal performed.
  RangeResult range_query(SeqView query, double eps) const;

  ValidationReport validate() const;
  NetStats stats() const;

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size() + twins_.size(); }
  bool contains(ObjectId id) const;
  std::vector<ObjectId> object_ids() const;
  const Sequence& payload(ObjectId id) const;
  const DistanceSpec& distance_spec() const { return spec_; }
  const NetConfig& config() const { return cfg_; }
  std::optional<ObjectId> root() const { return root_; }
  int node_level(ObjectId id) const;

  std::uint64_t build_computations() const { return build_comps_; }
  std::uint64_t query_computations() const { return query_comps_.load(std::memory_order_relaxed); }

  // Line-oriented text format: header, one line per node, payload reference.
  void serialize(std::ostream& out, std::string_view payload_ref) const;

  struct Deserialized {
    ReferenceNet net;
    std::string payload_ref;
  };
  // Rebuilds the structure, re-binds payloads through the resolver and
  // re-validates every invariant before returning.
  static Deserialized deserialize(std::istream& in,
                                  const std::function<Sequence(ObjectId)>& payload_resolver);

 private:
  struct Node {
    int level = 0;
    std::vector<ObjectId> parents;
    std::vector<ObjectId> children;
    std::vector<ObjectId> twins;
    Sequence payload;
  };
  struct TwinRec {
    ObjectId anchor = 0;
    Sequence payload;
  };

  double radius(int level) const;  // eps_prime * 2^level
  int needed_level(double d) const;
  double dist(const Sequence& a, const Sequence& b, std::uint64_t& counter) const;
  std::vector<ObjectId> collect_subtree(ObjectId start) const;

  struct Placement {
    bool is_twin = false;
    ObjectId twin_anchor = 0;
    int level = 0;
    std::vector<ObjectId> parents;
  };
  Placement plan_placement(const Sequence& payload, const std::vector<ObjectId>& extra_seeds,
                           const std::unordered_set<ObjectId>* excluded, bool allow_twin);
  void attach(ObjectId id, int level, const std::vector<ObjectId>& parents);
  void insert_internal(ObjectId id, Sequence payload, const std::vector<ObjectId>& seeds);
  void reinsert_orphan(ObjectId id, const std::vector<ObjectId>& pending);

  DistanceSpec spec_;
  NetConfig cfg_;
  std::map<ObjectId, Node> nodes_;
  std::map<ObjectId, TwinRec> twins_;
  std::optional<ObjectId> root_;
  std::uint64_t build_comps_ = 0;
  mutable std::atomic<std::uint64_t> query_comps_{0};
};

}  // namespace subseq
