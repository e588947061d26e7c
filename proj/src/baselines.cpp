#include "subseq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "subseq/rng.hpp"

namespace subseq {

RangeOutcome linear_scan_range(std::span<const WindowEntry> windows, SeqView query, double eps,
                               const DistanceSpec& spec) {
  RangeOutcome out;
  out.work.total = windows.size();
  for (const auto& w : windows) {
    ++out.work.computations;
    if (sequence_distance(spec, query, w.view) <= eps) out.ids.push_back(w.id);
  }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

std::vector<ObjectId> mv_select_references(std::span<const WindowEntry> windows, std::size_t k,
                                           std::size_t sample_size, const DistanceSpec& spec,
                                           std::uint64_t seed) {
  if (k > windows.size())
    fail(Errc::config, "cannot select " + std::to_string(k) + " references from " +
                           std::to_string(windows.size()) + " windows");
  if (k == 0 || windows.empty()) return {};

  Rng rng(seed);
  const std::size_t samples = std::max<std::size_t>(1, std::min(sample_size, windows.size()));
  std::vector<std::size_t> sample_rows(samples);
  for (auto& s : sample_rows) s = static_cast<std::size_t>(rng.below(windows.size()));

  // variance of distances to the sample, per candidate window
  std::vector<std::pair<double, std::size_t>> ranked;  // (-variance, row)
  ranked.reserve(windows.size());
  for (std::size_t row = 0; row < windows.size(); ++row) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t s : sample_rows) {
      const double d = sequence_distance(spec, windows[row].view, windows[s].view);
      sum += d;
      sum2 += d * d;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = sum2 / static_cast<double>(samples) - mean * mean;
    ranked.emplace_back(-var, row);
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<ObjectId> chosen;
  std::vector<std::size_t> chosen_rows;
  std::vector<std::size_t> skipped;
  for (const auto& [neg_var, row] : ranked) {
    if (chosen.size() == k) break;
    bool duplicate = false;
    for (std::size_t cr : chosen_rows) {
      if (sequence_distance(spec, windows[row].view, windows[cr].view) == 0.0) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      skipped.push_back(row);
      continue;
    }
    chosen.push_back(windows[row].id);
    chosen_rows.push_back(row);
  }
  for (std::size_t row : skipped) {
    if (chosen.size() == k) break;
    chosen.push_back(windows[row].id);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

MVIndex::MVIndex(std::span<const WindowEntry> windows, std::vector<ObjectId> references,
                 const DistanceSpec& spec)
    : spec_(spec), windows_(windows.begin(), windows.end()), refs_(std::move(references)) {
  std::unordered_map<ObjectId, std::size_t> row_of;
  row_of.reserve(windows_.size());
  for (std::size_t i = 0; i < windows_.size(); ++i) row_of.emplace(windows_[i].id, i);
  ref_rows_.reserve(refs_.size());
  for (ObjectId r : refs_) {
    auto it = row_of.find(r);
    if (it == row_of.end()) fail(Errc::not_found, "MV reference not among the indexed windows");
    ref_rows_.push_back(it->second);
  }
  table_.resize(windows_.size() * refs_.size());
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    for (std::size_t r = 0; r < refs_.size(); ++r) {
      ++build_comps_;
      table_[w * refs_.size() + r] =
          sequence_distance(spec_, windows_[w].view, windows_[ref_rows_[r]].view);
    }
  }
}

RangeOutcome MVIndex::range_query(SeqView query, double eps) const {
  RangeOutcome out;
  out.work.total = windows_.size();
  const std::size_t k = refs_.size();

  std::vector<double> dq(k);
  for (std::size_t r = 0; r < k; ++r) {
    ++out.work.computations;
    dq[r] = sequence_distance(spec_, query, windows_[ref_rows_[r]].view);
  }

  for (std::size_t w = 0; w < windows_.size(); ++w) {
    bool pruned = false;
    bool accepted = false;
    for (std::size_t r = 0; r < k; ++r) {
      const double tw = table_[w * k + r];
      if (std::abs(dq[r] - tw) > eps) {  // lower bound exceeds the radius
        pruned = true;
        break;
      }
      if (dq[r] + tw <= eps) accepted = true;  // upper bound already inside
    }
    if (pruned) continue;
    if (accepted) {
      out.ids.push_back(windows_[w].id);
      continue;
    }
    bool is_ref = false;
    for (std::size_t r = 0; r < k; ++r) {
      if (ref_rows_[r] == w) {
        if (dq[r] <= eps) out.ids.push_back(windows_[w].id);
        is_ref = true;
        break;
      }
    }
    if (is_ref) continue;
    ++out.work.computations;
    if (sequence_distance(spec_, query, windows_[w].view) <= eps) out.ids.push_back(windows_[w].id);
  }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

std::vector<PruningRow> compare_pruning(std::span<const WindowEntry> windows,
                                        std::span<const Sequence> queries,
                                        std::span<const double> radii, const DistanceSpec& spec,
                                        const ReferenceNet& net, const MVIndex& mv) {
  if (net.size() != windows.size())
    fail(Errc::validation, "reference net and window set sizes differ");

  std::vector<PruningRow> rows;
  const double total = static_cast<double>(windows.size());
  for (double radius : radii) {
    double net_comps = 0.0, mv_comps = 0.0, lin_comps = 0.0;
    for (const auto& q : queries) {
      const SeqView qv(q);
      const RangeOutcome truth = linear_scan_range(windows, qv, radius, spec);
      const RangeResult via_net = net.range_query(qv, radius);
      const RangeOutcome via_mv = mv.range_query(qv, radius);
      if (via_net.ids != truth.ids)
        fail(Errc::validation, "reference net result set differs from linear scan at radius " +
                                   std::to_string(radius));
      if (via_mv.ids != truth.ids)
        fail(Errc::validation,
             "MV result set differs from linear scan at radius " + std::to_string(radius));
      net_comps += static_cast<double>(via_net.computations);
      mv_comps += static_cast<double>(via_mv.work.computations);
      lin_comps += static_cast<double>(truth.work.computations);
    }
    const double nq = static_cast<double>(queries.size());
    rows.push_back({radius, "refnet", 1.0 - net_comps / (nq * total), net_comps / nq});
    rows.push_back({radius, "mv", 1.0 - mv_comps / (nq * total), mv_comps / nq});
    rows.push_back({radius, "linear", 1.0 - lin_comps / (nq * total), lin_comps / nq});
  }
  return rows;
}

}  // namespace subseq
