#include "subseq/reference_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace subseq {

namespace {

void erase_id(std::vector<ObjectId>& v, ObjectId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it != v.end() && *it == id) v.erase(it);
}

void insert_id(std::vector<ObjectId>& v, ObjectId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void NetConfig::validate() const {
  if (!(eps_prime > 0.0) || !std::isfinite(eps_prime))
    fail(Errc::config, "eps_prime must be positive and finite");
  if (num_max && *num_max < 1) fail(Errc::config, "num_max must be at least 1");
}

ReferenceNet::ReferenceNet(DistanceSpec spec, NetConfig cfg) : spec_(spec), cfg_(cfg) {
  cfg_.validate();
  if (!spec_.declared_metric)
    fail(Errc::non_metric,
         "reference net requires a metric distance; " + distance_name(spec_.kind) + " is not");
}

ReferenceNet::ReferenceNet(ReferenceNet&& other) noexcept
    : spec_(std::move(other.spec_)),
      cfg_(other.cfg_),
      nodes_(std::move(other.nodes_)),
      twins_(std::move(other.twins_)),
      root_(other.root_),
      build_comps_(other.build_comps_),
      query_comps_(other.query_comps_.load()) {}

ReferenceNet& ReferenceNet::operator=(ReferenceNet&& other) noexcept {
  spec_ = std::move(other.spec_);
  cfg_ = other.cfg_;
  nodes_ = std::move(other.nodes_);
  twins_ = std::move(other.twins_);
  root_ = other.root_;
  build_comps_ = other.build_comps_;
  query_comps_.store(other.query_comps_.load());
  return *this;
}

double ReferenceNet::radius(int level) const { return std::ldexp(cfg_.eps_prime, level); }

// Smallest integer i with d <= eps_prime * 2^i; caller guarantees d > 0.
int ReferenceNet::needed_level(double d) const {
  int i = std::ilogb(d / cfg_.eps_prime);
  while (radius(i) < d) ++i;
  while (radius(i - 1) >= d) --i;
  return i;
}

double ReferenceNet::dist(const Sequence& a, const Sequence& b, std::uint64_t& counter) const {
  ++counter;
  return sequence_distance(spec_, a, b);
}

bool ReferenceNet::contains(ObjectId id) const {
  return nodes_.count(id) != 0 || twins_.count(id) != 0;
}

std::vector<ObjectId> ReferenceNet::object_ids() const {
  std::vector<ObjectId> out;
  out.reserve(size());
  for (const auto& [id, node] : nodes_) out.push_back(id);
  for (const auto& [id, rec] : twins_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

const Sequence& ReferenceNet::payload(ObjectId id) const {
  if (auto it = nodes_.find(id); it != nodes_.end()) return it->second.payload;
  if (auto it = twins_.find(id); it != twins_.end()) return it->second.payload;
  fail(Errc::not_found, "object " + std::to_string(id) + " is not in the net");
}

int ReferenceNet::node_level(ObjectId id) const {
  if (auto it = nodes_.find(id); it != nodes_.end()) return it->second.level;
  if (auto it = twins_.find(id); it != twins_.end()) return nodes_.at(it->second.anchor).level;
  fail(Errc::not_found, "object " + std::to_string(id) + " is not in the net");
}

std::vector<ObjectId> ReferenceNet::collect_subtree(ObjectId start) const {
  std::vector<ObjectId> out;
  std::vector<ObjectId> stack{start};
  std::unordered_set<ObjectId> seen{start};
  while (!stack.empty()) {
    const ObjectId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (ObjectId c : nodes_.at(cur).children)
      if (seen.insert(c).second) stack.push_back(c);
  }
  return out;
}

// Finds the lowest level at which the new payload can hang off an existing
// node. A node P can cover the payload at level i iff d(P, payload) <=
// eps_prime * 2^i and i <= level(P); the search tracks the minimum feasible i
// and prunes subtrees that provably cannot improve it or supply parents.
ReferenceNet::Placement ReferenceNet::plan_placement(const Sequence& payload,
                                                     const std::vector<ObjectId>& extra_seeds,
                                                     const std::unordered_set<ObjectId>* excluded,
                                                     bool allow_twin) {
  const auto is_excluded = [&](ObjectId id) { return excluded && excluded->count(id) != 0; };

  std::unordered_map<ObjectId, double> d;
  const auto dist_to = [&](ObjectId id) {
    auto it = d.find(id);
    if (it != d.end()) return it->second;
    const double v = dist(payload, nodes_.at(id).payload, build_comps_);
    d.emplace(id, v);
    return v;
  };

  const double d_root = dist_to(*root_);
  if (d_root == 0.0) {
    if (!allow_twin) fail(Errc::validation, "unexpected zero distance between stored objects");
    return Placement{true, *root_, 0, {}};
  }
  // Root growth: raise the top level until the root covers the new object.
  if (needed_level(d_root) > nodes_.at(*root_).level)
    nodes_.at(*root_).level = needed_level(d_root);

  int best = needed_level(d_root);

  std::vector<ObjectId> frontier{*root_};
  std::unordered_set<ObjectId> visited{*root_};
  for (ObjectId seed : extra_seeds) {
    if (is_excluded(seed) || !visited.insert(seed).second) continue;
    const double ds = dist_to(seed);
    if (ds == 0.0) {
      if (!allow_twin) fail(Errc::validation, "unexpected zero distance between stored objects");
      return Placement{true, seed, 0, {}};
    }
    const int need = needed_level(ds);
    if (need <= nodes_.at(seed).level) best = std::min(best, need);
    frontier.push_back(seed);
  }

  while (!frontier.empty()) {
    std::vector<ObjectId> next;
    for (ObjectId cur : frontier) {
      for (ObjectId child : nodes_.at(cur).children) {
        if (is_excluded(child) || !visited.insert(child).second) continue;
        const double dc = dist_to(child);
        if (dc == 0.0) {
          if (!allow_twin)
            fail(Errc::validation, "unexpected zero distance between stored objects");
          return Placement{true, child, 0, {}};
        }
        const int need = needed_level(dc);
        const int child_level = nodes_.at(child).level;
        if (need <= child_level) best = std::min(best, need);
        // The subtree below `child` lies within eps_prime * 2^(level + 1);
        // skip it when even its closest point cannot cover the payload at
        // the current best level.
        if (dc - radius(child_level + 1) <= radius(best)) next.push_back(child);
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::pair<double, ObjectId>> candidates;
  for (ObjectId id : visited) {
    if (is_excluded(id)) continue;
    const Node& n = nodes_.at(id);
    if (n.level >= best && d.at(id) <= radius(best)) candidates.emplace_back(d.at(id), id);
  }
  std::sort(candidates.begin(), candidates.end());
  if (cfg_.num_max && candidates.size() > *cfg_.num_max) candidates.resize(*cfg_.num_max);

  Placement p;
  p.level = best - 1;
  for (const auto& [dd, id] : candidates) p.parents.push_back(id);
  std::sort(p.parents.begin(), p.parents.end());
  return p;
}

void ReferenceNet::attach(ObjectId id, int level, const std::vector<ObjectId>& parents) {
  Node& node = nodes_.at(id);
  node.level = level;
  node.parents = parents;
  for (ObjectId p : parents) insert_id(nodes_.at(p).children, id);
}

void ReferenceNet::insert(ObjectId id, Sequence payload) {
  if (contains(id)) fail(Errc::duplicate_id, "object " + std::to_string(id) + " already inserted");
  insert_internal(id, std::move(payload), {});
}

void ReferenceNet::insert_internal(ObjectId id, Sequence payload,
                                   const std::vector<ObjectId>& seeds) {
  if (nodes_.empty()) {
    Node n;
    n.level = 0;
    n.payload = std::move(payload);
    nodes_.emplace(id, std::move(n));
    root_ = id;
    return;
  }

  const Placement plan = plan_placement(payload, seeds, nullptr, true);
  if (plan.is_twin) {
    insert_id(nodes_.at(plan.twin_anchor).twins, id);
    twins_.emplace(id, TwinRec{plan.twin_anchor, std::move(payload)});
    return;
  }

  Node n;
  n.payload = std::move(payload);
  nodes_.emplace(id, std::move(n));
  attach(id, plan.level, plan.parents);
}

void ReferenceNet::reinsert_orphan(ObjectId id, const std::vector<ObjectId>& pending) {
  // The orphan's own subtree must not adopt it; other still-detached orphans
  // act as extra search entry points so every stored object stays reachable
  // by the placement search.
  const auto subtree = collect_subtree(id);
  std::unordered_set<ObjectId> excluded(subtree.begin(), subtree.end());
  std::vector<ObjectId> seeds;
  for (ObjectId p : pending)
    if (p != id && !excluded.count(p) && nodes_.count(p)) seeds.push_back(p);

  const Placement plan = plan_placement(nodes_.at(id).payload, seeds, &excluded, false);

  // The orphan must stay above its own children. Placements normally come out
  // at or above the old level; after a root promotion the separation slack
  // that guarantees this can be gone, in which case the whole subtree is
  // dissolved and re-inserted node by node.
  int min_legal = std::numeric_limits<int>::min();
  for (ObjectId c : nodes_.at(id).children)
    min_legal = std::max(min_legal, nodes_.at(c).level + 1);
  if (plan.level >= min_legal) {
    attach(id, plan.level, plan.parents);
    return;
  }

  struct Member {
    int level;
    ObjectId id;
    Sequence payload;
    std::vector<std::pair<ObjectId, Sequence>> twin_payloads;
  };
  std::vector<Member> members;
  members.reserve(subtree.size());
  for (ObjectId m : subtree) {
    Node& node = nodes_.at(m);
    Member mem;
    mem.level = node.level;
    mem.id = m;
    mem.payload = std::move(node.payload);
    for (ObjectId t : node.twins) {
      mem.twin_payloads.emplace_back(t, std::move(twins_.at(t).payload));
      twins_.erase(t);
    }
    // multi-parent edges may leave the subtree; detach those too
    for (ObjectId p : node.parents)
      if (!excluded.count(p)) erase_id(nodes_.at(p).children, m);
    members.push_back(std::move(mem));
  }
  for (ObjectId m : subtree) nodes_.erase(m);

  std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
    return a.level != b.level ? a.level > b.level : a.id < b.id;
  });
  for (auto& mem : members) {
    std::vector<ObjectId> live_seeds;
    for (ObjectId p : pending)
      if (p != mem.id && nodes_.count(p)) live_seeds.push_back(p);
    insert_internal(mem.id, std::move(mem.payload), live_seeds);
    for (auto& [tid, tp] : mem.twin_payloads) insert_internal(tid, std::move(tp), live_seeds);
  }
}

void ReferenceNet::erase(ObjectId id) {
  if (auto it = twins_.find(id); it != twins_.end()) {
    erase_id(nodes_.at(it->second.anchor).twins, id);
    twins_.erase(it);
    return;
  }
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(Errc::not_found, "object " + std::to_string(id) + " is not in the net");

  // A twin stands in for the deleted node: same payload up to distance zero,
  // so every radius-based invariant carries over unchanged.
  if (!it->second.twins.empty()) {
    const ObjectId heir = it->second.twins.front();
    Node replacement = std::move(it->second);
    erase_id(replacement.twins, heir);
    replacement.payload = std::move(twins_.at(heir).payload);
    twins_.erase(heir);
    for (ObjectId t : replacement.twins) twins_.at(t).anchor = heir;
    for (ObjectId p : replacement.parents) {
      erase_id(nodes_.at(p).children, id);
      insert_id(nodes_.at(p).children, heir);
    }
    for (ObjectId c : replacement.children) {
      erase_id(nodes_.at(c).parents, id);
      insert_id(nodes_.at(c).parents, heir);
    }
    nodes_.erase(it);
    nodes_.emplace(heir, std::move(replacement));
    if (root_ == id) root_ = heir;
    return;
  }

  if (root_ == id) {
    const std::vector<ObjectId> children = it->second.children;
    if (children.empty()) {
      nodes_.erase(it);
      root_.reset();
      return;
    }
    // Promote the child with the largest median distance to its siblings.
    ObjectId promoted = children.front();
    if (children.size() > 1) {
      double best_median = -1.0;
      for (ObjectId c : children) {
        std::vector<double> ds;
        for (ObjectId s : children) {
          if (s == c) continue;
          ds.push_back(dist(nodes_.at(c).payload, nodes_.at(s).payload, build_comps_));
        }
        std::sort(ds.begin(), ds.end());
        const double median = ds[(ds.size() - 1) / 2];
        if (median > best_median) {
          best_median = median;
          promoted = c;
        }
      }
    }

    const int top_level = it->second.level;
    for (ObjectId c : children) erase_id(nodes_.at(c).parents, id);
    nodes_.erase(it);

    Node& new_root = nodes_.at(promoted);
    for (ObjectId p : new_root.parents) erase_id(nodes_.at(p).children, promoted);
    new_root.parents.clear();
    new_root.level = top_level;
    root_ = promoted;

    std::vector<ObjectId> orphans;
    for (ObjectId c : children)
      if (c != promoted && nodes_.at(c).parents.empty()) orphans.push_back(c);
    for (ObjectId o : orphans) reinsert_orphan(o, orphans);
    return;
  }

  const std::vector<ObjectId> children = it->second.children;
  for (ObjectId p : it->second.parents) erase_id(nodes_.at(p).children, id);
  for (ObjectId c : children) erase_id(nodes_.at(c).parents, id);
  nodes_.erase(it);

  std::vector<ObjectId> orphans;
  for (ObjectId c : children)
    if (nodes_.at(c).parents.empty()) orphans.push_back(c);
  for (ObjectId o : orphans) reinsert_orphan(o, orphans);
}

RangeResult ReferenceNet::range_query(SeqView query, double eps) const {
  RangeResult result;
  if (nodes_.empty()) return result;

  // (level desc, id asc) processing order.
  std::vector<std::pair<int, ObjectId>> order;
  order.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) order.emplace_back(-node.level, id);
  std::sort(order.begin(), order.end());

  enum : char { kUndecided = 0, kIn = 1, kOut = 2 };
  std::unordered_map<ObjectId, char> state;
  state.reserve(nodes_.size());

  const auto mark_subtree = [&](ObjectId start, char value) {
    std::vector<ObjectId> stack{start};
    while (!stack.empty()) {
      const ObjectId cur = stack.back();
      stack.pop_back();
      for (ObjectId c : nodes_.at(cur).children) {
        char& s = state[c];
        if (s != kUndecided) continue;
        s = value;
        stack.push_back(c);
      }
    }
  };

  std::uint64_t comps = 0;
  for (const auto& [neg_level, id] : order) {
    char& s = state[id];
    if (s != kUndecided) continue;
    const Node& node = nodes_.at(id);
    ++comps;
    const double dq = sequence_distance(spec_, query, SeqView(node.payload));
    s = dq <= eps ? kIn : kOut;
    if (s == kIn) {
      result.verified.emplace_back(id, dq);
      for (ObjectId t : node.twins) result.verified.emplace_back(t, dq);
    }

    const int level = node.level;
    if (dq + radius(level + 1) <= eps) {
      mark_subtree(id, kIn);
    } else if (dq - radius(level + 1) > eps) {
      mark_subtree(id, kOut);
    } else {
      for (ObjectId c : node.children) {
        char& cs = state[c];
        if (cs != kUndecided) continue;
        const double r = radius(nodes_.at(c).level + 1);
        if (dq + r <= eps)
          cs = kIn;
        else if (dq - r > eps)
          cs = kOut;
      }
    }
  }

  for (const auto& [id, node] : nodes_) {
    if (state[id] != kIn) continue;
    result.ids.push_back(id);
    for (ObjectId t : node.twins) result.ids.push_back(t);
  }
  std::sort(result.ids.begin(), result.ids.end());
  result.computations = comps;
  query_comps_.fetch_add(comps, std::memory_order_relaxed);
  return result;
}

ValidationReport ReferenceNet::validate() const {
  ValidationReport report;
  const auto issue = [&](std::string text) {
    report.ok = false;
    report.issues.push_back(std::move(text));
  };
  if (nodes_.empty()) {
    if (root_) issue("root set on empty net");
    if (!twins_.empty()) issue("twins present without nodes");
    return report;
  }
  if (!root_ || !nodes_.count(*root_)) {
    issue("missing root");
    return report;
  }

  std::uint64_t scratch = 0;  // validation distance evaluations are not billed

  std::size_t parentless = 0;
  int top = std::numeric_limits<int>::min();
  for (const auto& [id, node] : nodes_) top = std::max(top, node.level);

  for (const auto& [id, node] : nodes_) {
    if (node.parents.empty()) {
      ++parentless;
      if (id != *root_) issue("node " + std::to_string(id) + " has no parent (inclusive violated)");
    }
    if (cfg_.num_max && node.parents.size() > *cfg_.num_max)
      issue("node " + std::to_string(id) + " exceeds num_max parents");
    if (node.level > nodes_.at(*root_).level)
      issue("node " + std::to_string(id) + " sits above the root");
    if (!std::is_sorted(node.parents.begin(), node.parents.end()) ||
        std::adjacent_find(node.parents.begin(), node.parents.end()) != node.parents.end())
      issue("node " + std::to_string(id) + " parent list not sorted/unique");
    if (!std::is_sorted(node.children.begin(), node.children.end()) ||
        std::adjacent_find(node.children.begin(), node.children.end()) != node.children.end())
      issue("node " + std::to_string(id) + " child list not sorted/unique");

    for (ObjectId p : node.parents) {
      auto pit = nodes_.find(p);
      if (pit == nodes_.end()) {
        issue("node " + std::to_string(id) + " has unknown parent " + std::to_string(p));
        continue;
      }
      if (pit->second.level <= node.level)
        issue("parent " + std::to_string(p) + " does not sit above child " + std::to_string(id));
      if (!std::binary_search(pit->second.children.begin(), pit->second.children.end(), id))
        issue("parent " + std::to_string(p) + " missing child back-reference " + std::to_string(id));
      const double dd = dist(pit->second.payload, node.payload, scratch);
      if (dd > radius(node.level + 1))
        issue("membership radius violated for child " + std::to_string(id) + " under " +
              std::to_string(p) + ": d=" + fmt_double(dd) + " > " +
              fmt_double(radius(node.level + 1)));
    }
    for (ObjectId c : node.children) {
      auto cit = nodes_.find(c);
      if (cit == nodes_.end()) {
        issue("node " + std::to_string(id) + " has unknown child " + std::to_string(c));
        continue;
      }
      if (!std::binary_search(cit->second.parents.begin(), cit->second.parents.end(), id))
        issue("child " + std::to_string(c) + " missing parent back-reference " + std::to_string(id));
    }
    for (ObjectId t : node.twins) {
      auto tit = twins_.find(t);
      if (tit == twins_.end()) {
        issue("twin " + std::to_string(t) + " missing from registry");
        continue;
      }
      if (tit->second.anchor != id) issue("twin " + std::to_string(t) + " anchor mismatch");
      if (dist(node.payload, tit->second.payload, scratch) != 0.0)
        issue("twin " + std::to_string(t) + " not at distance zero from anchor");
    }
  }
  if (parentless != 1) issue("expected exactly one parentless node (the root)");

  for (const auto& [id, rec] : twins_) {
    auto ait = nodes_.find(rec.anchor);
    if (ait == nodes_.end())
      issue("twin " + std::to_string(id) + " anchored to unknown node");
    else if (!std::binary_search(ait->second.twins.begin(), ait->second.twins.end(), id))
      issue("twin " + std::to_string(id) + " missing from anchor bucket");
  }

  // Exclusive: same-level references must be separated by more than the
  // level radius.
  std::map<int, std::vector<ObjectId>> by_level;
  for (const auto& [id, node] : nodes_) by_level[node.level].push_back(id);
  for (const auto& [level, ids] : by_level) {
    const double r = radius(level);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const double dd = dist(nodes_.at(ids[i]).payload, nodes_.at(ids[j]).payload, scratch);
        if (!(dd > r))
          issue("exclusive violated at level " + std::to_string(level) + " between " +
                std::to_string(ids[i]) + " and " + std::to_string(ids[j]) + ": d=" +
                fmt_double(dd));
      }
    }
  }

  // Reachability from the root.
  const auto reached = collect_subtree(*root_);
  if (reached.size() != nodes_.size())
    issue("only " + std::to_string(reached.size()) + " of " + std::to_string(nodes_.size()) +
          " nodes reachable from the root");
  return report;
}

NetStats ReferenceNet::stats() const {
  NetStats s;
  if (nodes_.empty()) return s;
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& [id, node] : nodes_) {
    lo = std::min(lo, node.level);
    hi = std::max(hi, node.level);
    if (!node.children.empty()) ++s.list_count;
    s.total_entries += node.children.size();
  }
  s.level_count = static_cast<std::size_t>(hi - lo + 1);
  s.node_count = nodes_.size() + twins_.size();
  s.avg_parents = static_cast<double>(s.total_entries) / static_cast<double>(s.node_count);
  std::size_t payload_bytes = 0;
  for (const auto& [id, node] : nodes_)
    payload_bytes += node.payload.size() *
                     (node.payload.kind() == ElementKind::symbol
                          ? sizeof(std::int32_t)
                          : sizeof(double) * static_cast<std::size_t>(std::max(node.payload.dims(), 1)));
  s.approx_bytes = payload_bytes + s.total_entries * 2 * sizeof(ObjectId) +
                   s.node_count * (sizeof(Node) + sizeof(ObjectId));
  return s;
}

void ReferenceNet::serialize(std::ostream& out, std::string_view payload_ref) const {
  out << "refnet 1\n";
  out << "eps_prime " << fmt_double(cfg_.eps_prime) << '\n';
  if (cfg_.num_max)
    out << "num_max " << *cfg_.num_max << '\n';
  else
    out << "num_max unlimited\n";
  out << "levels " << stats().level_count << '\n';
  out << "distance " << distance_name(spec_.kind) << '\n';
  if (spec_.kind == DistanceKind::erp) {
    if (spec_.gap.kind == ElementKind::symbol) {
      out << "gap symbol " << spec_.gap.symbol << '\n';
    } else {
      out << "gap vector " << spec_.gap.dims;
      for (int i = 0; i < spec_.gap.dims; ++i)
        out << ' ' << fmt_double(spec_.gap.coords[static_cast<std::size_t>(i)]);
      out << '\n';
    }
  }
  out << "nodes " << nodes_.size() << '\n';
  for (const auto& [id, node] : nodes_) {
    out << "n " << id << ' ' << node.level;
    out << " p " << node.parents.size();
    for (ObjectId p : node.parents) out << ' ' << p;
    out << " c " << node.children.size();
    for (ObjectId c : node.children) out << ' ' << c;
    out << " t " << node.twins.size();
    for (ObjectId t : node.twins) out << ' ' << t;
    out << '\n';
  }
  out << "payload " << payload_ref << '\n';
  out << "end\n";
}

ReferenceNet::Deserialized ReferenceNet::deserialize(
    std::istream& in, const std::function<Sequence(ObjectId)>& payload_resolver) {
  const auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line)) fail(Errc::parse, std::string("net file truncated before ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  const auto expect_tag = [&](const std::string& line, const std::string& tag) {
    if (line.rfind(tag + " ", 0) != 0 && line != tag)
      fail(Errc::parse, "net file: expected '" + tag + "' line, got '" + line + "'");
    return line.size() > tag.size() ? line.substr(tag.size() + 1) : std::string();
  };

  if (next_line("header") != "refnet 1") fail(Errc::parse, "net file: bad magic");
  const double eps_prime = std::stod(expect_tag(next_line("eps_prime"), "eps_prime"));
  const std::string num_max_str = expect_tag(next_line("num_max"), "num_max");
  NetConfig cfg;
  cfg.eps_prime = eps_prime;
  if (num_max_str == "unlimited")
    cfg.num_max.reset();
  else
    cfg.num_max = static_cast<std::uint32_t>(std::stoul(num_max_str));
  expect_tag(next_line("levels"), "levels");
  const DistanceKind kind = parse_distance_name(expect_tag(next_line("distance"), "distance"));
  DistanceSpec spec = DistanceSpec::make(kind);
  std::string line = next_line("nodes");
  if (kind == DistanceKind::erp) {
    std::istringstream gs(expect_tag(line, "gap"));
    std::string gk;
    gs >> gk;
    if (gk == "symbol") {
      std::int32_t cp;
      gs >> cp;
      spec.gap = Element::sym(cp);
    } else if (gk == "vector") {
      int dims;
      gs >> dims;
      std::vector<double> coords(static_cast<std::size_t>(dims));
      for (auto& c : coords) gs >> c;
      spec.gap = Element::vec(std::span<const double>(coords));
    } else {
      fail(Errc::parse, "net file: bad gap line");
    }
    if (!gs) fail(Errc::parse, "net file: bad gap line");
    line = next_line("nodes");
  }
  const std::size_t node_count = std::stoul(expect_tag(line, "nodes"));

  ReferenceNet net(spec, cfg);
  for (std::size_t i = 0; i < node_count; ++i) {
    std::istringstream ns(next_line("node"));
    std::string tag;
    ObjectId id;
    int level;
    ns >> tag >> id >> level;
    if (tag != "n") fail(Errc::parse, "net file: bad node line");
    Node node;
    node.level = level;
    const auto read_list = [&](char expected, std::vector<ObjectId>& out) {
      std::string t;
      std::size_t k;
      ns >> t >> k;
      if (t.size() != 1 || t[0] != expected) fail(Errc::parse, "net file: bad node line");
      out.resize(k);
      for (auto& v : out) ns >> v;
    };
    read_list('p', node.parents);
    read_list('c', node.children);
    read_list('t', node.twins);
    if (!ns) fail(Errc::parse, "net file: bad node line");
    node.payload = payload_resolver(id);
    for (ObjectId t : node.twins) net.twins_.emplace(t, TwinRec{id, payload_resolver(t)});
    net.nodes_.emplace(id, std::move(node));
  }
  const std::string payload_ref = expect_tag(next_line("payload"), "payload");
  if (next_line("end") != "end") fail(Errc::parse, "net file: missing end marker");

  for (const auto& [id, node] : net.nodes_)
    if (node.parents.empty()) {
      if (net.root_) fail(Errc::validation, "net file: multiple roots");
      net.root_ = id;
    }
  if (!net.nodes_.empty() && !net.root_) fail(Errc::validation, "net file: no root");

  const ValidationReport report = net.validate();
  if (!report.ok) {
    std::string msg = "deserialized net failed validation:";
    for (const auto& s : report.issues) msg += "\n  " + s;
    fail(Errc::validation, msg);
  }
  return Deserialized{std::move(net), payload_ref};
}

}  // namespace subseq
