#include "subseq/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "subseq/rng.hpp"

namespace subseq {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void check_query_compatible(const SubseqIndex& idx, const Sequence& query) {
  if (idx.dataset().empty()) return;
  if (query.alphabet() != *idx.dataset().alphabet())
    fail(Errc::kind_mismatch, "query alphabet does not match the indexed dataset");
}

std::uint32_t effective_lambda0(const SubseqIndex& idx, std::uint32_t lambda0) {
  if (lambda0 > 0 && idx.distance_spec().length_rigid())
    fail(Errc::config, "lambda0 must be 0 for fixed-length distances");
  return lambda0;
}

}  // namespace

bool pair_span_less(const SubsequencePair& a, const SubsequencePair& b) {
  return std::tie(a.db_index, a.sq.start, a.sq.end, a.sx.start, a.sx.end) <
         std::tie(b.db_index, b.sq.start, b.sq.end, b.sx.start, b.sx.end);
}

SubseqIndex::SubseqIndex(SegmentationParams params, DistanceSpec spec, NetConfig cfg)
    : params_(params), spec_(spec), net_(spec, cfg) {}

SubseqIndex::SubseqIndex(Dataset ds, SegmentationParams params, DistanceSpec spec,
                         NetConfig net_cfg)
    : dataset_(std::move(ds)), params_(params), spec_(spec), net_(spec, net_cfg) {
  params_.validate();
  if (spec_.length_rigid() && params_.lambda0 != 0)
    fail(Errc::config, "lambda0 must be 0 for fixed-length distances");
  if (!dataset_.empty() && spec_.kind == DistanceKind::erp) {
    const AlphabetDesc a = *dataset_.alphabet();
    if ((a.kind == ElementKind::symbol) != (spec_.gap.kind == ElementKind::symbol) ||
        (a.kind == ElementKind::vector && a.dims != spec_.gap.dims))
      fail(Errc::kind_mismatch, "ERP gap element does not match the dataset alphabet");
  }

  for (std::uint32_t s = 0; s < dataset_.size(); ++s) {
    const auto refs =
        partition_windows(s, dataset_.at(s).size(), params_, /*include_tail=*/true);
    windows_.insert(windows_.end(), refs.begin(), refs.end());
  }
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const WindowRef& w = windows_[i];
    const SeqView view(dataset_.at(w.seq_index), w.start, w.length);
    net_.insert(static_cast<ObjectId>(i), view.to_sequence(std::to_string(i)));
  }
}

SeqView SubseqIndex::window_view(ObjectId id) const {
  const WindowRef& w = windows_.at(id);
  return SeqView(dataset_.at(w.seq_index), w.start, w.length);
}

std::vector<WindowEntry> SubseqIndex::window_entries() const {
  std::vector<WindowEntry> out;
  out.reserve(windows_.size());
  for (std::size_t i = 0; i < windows_.size(); ++i)
    out.push_back(WindowEntry{static_cast<ObjectId>(i), window_view(static_cast<ObjectId>(i))});
  return out;
}

SubseqIndex build_index(Dataset ds, const SegmentationParams& params, const DistanceSpec& spec,
                        const NetConfig& net_cfg) {
  return SubseqIndex(std::move(ds), params, spec, net_cfg);
}

std::vector<SegmentMatch> candidate_pairs(const SubseqIndex& idx, const Sequence& query,
                                          std::uint32_t lambda0, double eps, QueryStats* stats) {
  check_query_compatible(idx, query);
  lambda0 = effective_lambda0(idx, lambda0);
  std::vector<SegmentMatch> out;
  if (idx.windows().empty()) return out;

  const auto segments = extract_query_segments(query.size(), idx.params(), lambda0);
  for (const auto& seg : segments) {
    const SeqView seg_view(query, seg.start, seg.length);
    const RangeResult hits = idx.net().range_query(seg_view, eps);
    if (stats) stats->filter_computations += hits.computations;
    std::unordered_map<ObjectId, double> exact;
    exact.reserve(hits.verified.size());
    for (const auto& [id, d] : hits.verified) exact.emplace(id, d);
    for (ObjectId id : hits.ids) {
      SegmentMatch m;
      m.query_span = Span{query.id(), seg.start, seg.end()};
      m.window = idx.window(id);
      m.window_id = id;
      auto it = exact.find(id);
      m.distance = it != exact.end() ? it->second : eps;
      out.push_back(std::move(m));
    }
  }
  return out;
}

ExpandRanges expand_candidate(const SegmentMatch& m, const SegmentationParams& p,
                              std::size_t query_len, std::size_t db_len) {
  const std::size_t l = p.window_length();
  const std::size_t l0 = p.lambda0;
  const std::size_t a = m.query_span.start;
  const std::size_t b = m.query_span.end;
  const std::size_t c = m.window.start;

  ExpandRanges r;
  r.sq_start_lo = a > l + l0 ? a - l - l0 : 1;
  r.sq_start_hi = a;
  r.sq_end_lo = b;
  r.sq_end_hi = std::min(query_len, b + l + l0);
  r.sx_start_lo = c > l ? c - l : 1;
  r.sx_start_hi = c;
  r.sx_end_lo = std::min(db_len, c + l);
  r.sx_end_hi = std::min(db_len, c + p.lambda);
  return r;
}

namespace {

// One database window together with the query segments that matched it.
struct MatchedWindow {
  WindowRef ref;
  std::vector<std::pair<std::size_t, std::size_t>> seg_spans;  // (start, end) on Q
};

enum class VerifyMode { all, longest };

// Step 5: enumerate candidate span pairs around runs of matched windows and
// verify them with exact distance computations.
//
// For a contiguous run of matched windows c_i..c_j the candidate spans are
//   SX start in [c_i - l, c_i],  SX end in [c_j + l, c_j + lambda]
//   SQ start in [a - l - lambda0, a] over segments matching c_i
//   SQ end   in [b, b + l + lambda0] over segments matching c_j
// which covers flush-ended long matches through shorter sub-runs.
std::vector<SubsequencePair> verify_candidates(const SubseqIndex& idx, const Sequence& query,
                                               const std::vector<SegmentMatch>& matches,
                                               double cutoff, std::uint32_t lambda0,
                                               VerifyMode mode, QueryStats* stats) {
  const SegmentationParams& p = idx.params();
  const std::size_t l = p.window_length();
  const std::size_t lambda = p.lambda;
  const std::size_t qn = query.size();

  // group matches per database sequence, per window
  std::map<std::uint32_t, std::map<std::uint32_t, MatchedWindow>> by_seq;
  for (const auto& m : matches) {
    MatchedWindow& mw = by_seq[m.window.seq_index][m.window.start];
    mw.ref = m.window;
    mw.seg_spans.emplace_back(m.query_span.start, m.query_span.end);
  }

  std::vector<SubsequencePair> accepted;
  std::set<std::tuple<std::uint32_t, std::size_t, std::size_t, std::size_t, std::size_t>> seen;
  std::size_t best_len = 0;  // longest mode: best min(|SQ|, |SX|) so far

  for (auto& [seq_index, wmap] : by_seq) {
    const Sequence& db_seq = idx.dataset().at(seq_index);
    const std::size_t xn = db_seq.size();

    std::vector<MatchedWindow*> sorted;
    sorted.reserve(wmap.size());
    for (auto& [start, mw] : wmap) sorted.push_back(&mw);

    // maximal runs of physically adjacent matched windows
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t run_begin = 0;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
      if (i == sorted.size() ||
          sorted[i]->ref.start - sorted[i - 1]->ref.start > static_cast<std::uint32_t>(l)) {
        runs.emplace_back(run_begin, i - 1);
        run_begin = i;
      }
    }

    for (const auto& [lo, hi] : runs) {
      for (std::size_t i = lo; i <= hi; ++i) {
        for (std::size_t j = i; j <= hi; ++j) {
          const std::size_t ci = sorted[i]->ref.start;
          const std::size_t cj = sorted[j]->ref.start;

          const std::size_t sx_start_lo = ci > l ? ci - l : 1;
          const std::size_t sx_start_hi = ci;
          if (cj + l > xn) continue;  // flush ends are covered by shorter sub-runs
          const std::size_t sx_end_lo = cj + l;
          const std::size_t sx_end_hi = std::min(xn, cj + lambda);

          if (mode == VerifyMode::longest) {
            const std::size_t max_len = sx_end_hi - sx_start_lo + 1;
            if (max_len < std::max<std::size_t>(best_len, lambda)) continue;
          }

          std::set<std::size_t> sq_starts;
          for (const auto& [a, b] : sorted[i]->seg_spans) {
            const std::size_t lo_s = a > l + lambda0 ? a - l - lambda0 : 1;
            for (std::size_t s = lo_s; s <= a; ++s) sq_starts.insert(s);
          }
          std::set<std::size_t> sq_ends;
          for (const auto& [a, b] : sorted[j]->seg_spans) {
            const std::size_t hi_e = std::min(qn, b + l + lambda0);
            for (std::size_t e = b; e <= hi_e; ++e) sq_ends.insert(e);
          }

          for (std::size_t sx_s = sx_start_lo; sx_s <= sx_start_hi; ++sx_s) {
            for (std::size_t sx_e = sx_end_lo; sx_e <= sx_end_hi; ++sx_e) {
              const std::size_t len_x = sx_e - sx_s + 1;
              if (len_x < lambda) continue;
              for (std::size_t sq_s : sq_starts) {
                for (std::size_t sq_e : sq_ends) {
                  if (sq_e < sq_s) continue;
                  const std::size_t len_q = sq_e - sq_s + 1;
                  if (len_q < lambda) continue;
                  const std::size_t diff = len_q > len_x ? len_q - len_x : len_x - len_q;
                  if (diff > lambda0) continue;
                  if (mode == VerifyMode::longest && std::min(len_q, len_x) < best_len) continue;
                  if (!seen.emplace(seq_index, sq_s, sq_e, sx_s, sx_e).second) continue;
                  if (stats) ++stats->verify_computations;
                  const double d = sequence_distance(idx.distance_spec(),
                                                     SeqView(query, sq_s, len_q),
                                                     SeqView(db_seq, sx_s, len_x));
                  if (d > cutoff) continue;
                  SubsequencePair pair;
                  pair.sq = Span{query.id(), sq_s, sq_e};
                  pair.sx = Span{db_seq.id(), sx_s, sx_e};
                  pair.db_index = seq_index;
                  pair.distance = d;
                  if (mode == VerifyMode::longest) {
                    const std::size_t min_len = std::min(len_q, len_x);
                    if (min_len > best_len) {
                      best_len = min_len;
                      accepted.clear();
                    }
                    if (min_len == best_len) accepted.push_back(std::move(pair));
                  } else {
                    accepted.push_back(std::move(pair));
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  std::sort(accepted.begin(), accepted.end(), pair_span_less);
  accepted.erase(std::unique(accepted.begin(), accepted.end(),
                             [](const SubsequencePair& a, const SubsequencePair& b) {
                               return a.same_spans(b);
                             }),
                 accepted.end());
  return accepted;
}

}  // namespace

std::vector<SubsequencePair> query_type1(const SubseqIndex& idx, const Sequence& query, double eps,
                                         std::uint32_t lambda0, QueryStats* stats) {
  lambda0 = effective_lambda0(idx, lambda0);
  const auto matches = candidate_pairs(idx, query, lambda0, eps, stats);
  return verify_candidates(idx, query, matches, eps, lambda0, VerifyMode::all, stats);
}

std::vector<SubsequencePair> query_type2(const SubseqIndex& idx, const Sequence& query, double eps,
                                         std::uint32_t lambda0, QueryStats* stats) {
  lambda0 = effective_lambda0(idx, lambda0);
  const auto matches = candidate_pairs(idx, query, lambda0, eps, stats);
  if (matches.empty()) return {};
  return verify_candidates(idx, query, matches, eps, lambda0, VerifyMode::longest, stats);
}

Type3Result query_type3(const SubseqIndex& idx, const Sequence& query, std::uint32_t lambda0,
                        double eps_inc, std::optional<double> eps_hint, QueryStats* stats) {
  lambda0 = effective_lambda0(idx, lambda0);
  if (idx.windows().empty()) fail(Errc::not_found, "dataset has no window");
  if (!(eps_inc > 0.0)) fail(Errc::config, "eps_inc must be positive");
  if (query.size() < idx.params().lambda)
    fail(Errc::validation, "query shorter than lambda cannot form a pair");
  bool db_long_enough = false;
  for (const auto& s : idx.dataset().sequences())
    if (s.size() >= idx.params().lambda) db_long_enough = true;
  if (!db_long_enough)
    fail(Errc::validation, "no database sequence reaches length lambda");

  const auto has_match = [&](double radius) {
    return !candidate_pairs(idx, query, lambda0, radius, stats).empty();
  };

  // Smallest radius producing at least one segment match, by binary search.
  double hi = eps_hint.value_or(0.0);
  if (hi <= 0.0) hi = eps_inc * 20.0;
  int guard = 0;
  while (!has_match(hi)) {
    hi *= 2.0;
    if (++guard > 200) fail(Errc::validation, "no segment match at any radius");
  }
  double lo = 0.0;
  if (has_match(0.0)) {
    hi = 0.0;
  } else {
    const double width = std::max(eps_inc / 4.0, 1e-12);
    while (hi - lo > width) {
      const double mid = lo + (hi - lo) / 2.0;
      if (has_match(mid))
        hi = mid;
      else
        lo = mid;
    }
  }

  for (double tier = hi;; tier += eps_inc) {
    const auto matches = candidate_pairs(idx, query, lambda0, tier, stats);
    if (!matches.empty()) {
      const auto verified =
          verify_candidates(idx, query, matches, tier, lambda0, VerifyMode::all, stats);
      if (!verified.empty()) {
        const auto best = std::min_element(
            verified.begin(), verified.end(), [](const SubsequencePair& a, const SubsequencePair& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return pair_span_less(a, b);
            });
        return Type3Result{*best, tier};
      }
    }
    if (tier > hi + eps_inc * 1e7)
      fail(Errc::validation, "type 3 search failed to verify any pair");
  }
}

QueryDefaults estimate_query_defaults(const SubseqIndex& idx, std::uint64_t seed,
                                      std::size_t sample_pairs) {
  QueryDefaults d;
  const auto& windows = idx.windows();
  if (windows.size() < 2) {
    d.eps_inc = 0.05;
    d.eps_hint = 1.0;
    return d;
  }
  Rng rng(seed);
  double min_nonzero = std::numeric_limits<double>::infinity();
  double max_seen = 0.0;
  for (std::size_t i = 0; i < sample_pairs; ++i) {
    const auto a = static_cast<ObjectId>(rng.below(windows.size()));
    auto b = static_cast<ObjectId>(rng.below(windows.size()));
    if (a == b) b = static_cast<ObjectId>((b + 1) % windows.size());
    const double dist =
        sequence_distance(idx.distance_spec(), idx.window_view(a), idx.window_view(b));
    if (dist > 0.0) min_nonzero = std::min(min_nonzero, dist);
    max_seen = std::max(max_seen, dist);
  }
  d.eps_inc = std::isfinite(min_nonzero) ? 0.05 * min_nonzero : 0.05;
  d.eps_hint = max_seen > 0.0 ? max_seen : 1.0;
  return d;
}

namespace {

// Exhaustive span-pair enumeration shared by the oracle query types.
template <class Fn>
void oracle_enumerate(const Dataset& ds, const Sequence& query, const DistanceSpec& spec,
                      std::uint32_t lambda, std::uint32_t lambda0, const OracleBudget& budget,
                      Fn&& fn) {
  const std::size_t qn = query.size();
  std::uint64_t pair_count = 0;
  for (std::uint32_t xi = 0; xi < ds.size(); ++xi) {
    const std::size_t xn = ds.at(xi).size();
    for (std::size_t len_x = lambda; len_x <= xn; ++len_x) {
      const std::size_t q_lo = len_x > lambda0 ? std::max<std::size_t>(lambda, len_x - lambda0)
                                               : lambda;
      const std::size_t q_hi = std::min(qn, len_x + lambda0);
      for (std::size_t len_q = q_lo; len_q <= q_hi; ++len_q)
        pair_count += static_cast<std::uint64_t>(xn - len_x + 1) *
                      static_cast<std::uint64_t>(qn - len_q + 1);
    }
  }
  if (pair_count > budget.max_pairs)
    fail(Errc::budget_exceeded, "oracle would evaluate " + std::to_string(pair_count) +
                                    " pairs (budget " + std::to_string(budget.max_pairs) + ")");

  for (std::uint32_t xi = 0; xi < ds.size(); ++xi) {
    const Sequence& x = ds.at(xi);
    const std::size_t xn = x.size();
    for (std::size_t sx_s = 1; sx_s <= xn; ++sx_s) {
      for (std::size_t sx_e = sx_s + lambda - 1; sx_e <= xn; ++sx_e) {
        const std::size_t len_x = sx_e - sx_s + 1;
        for (std::size_t sq_s = 1; sq_s <= qn; ++sq_s) {
          for (std::size_t sq_e = sq_s + lambda - 1; sq_e <= qn; ++sq_e) {
            const std::size_t len_q = sq_e - sq_s + 1;
            const std::size_t diff = len_q > len_x ? len_q - len_x : len_x - len_q;
            if (diff > lambda0) continue;
            const double d = sequence_distance(spec, SeqView(query, sq_s, len_q),
                                               SeqView(x, sx_s, len_x));
            SubsequencePair pair;
            pair.sq = Span{query.id(), sq_s, sq_e};
            pair.sx = Span{x.id(), sx_s, sx_e};
            pair.db_index = xi;
            pair.distance = d;
            fn(pair);
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<SubsequencePair> oracle_type1(const Dataset& ds, const Sequence& query,
                                          const DistanceSpec& spec, double eps,
                                          std::uint32_t lambda, std::uint32_t lambda0,
                                          const OracleBudget& budget) {
  std::vector<SubsequencePair> out;
  oracle_enumerate(ds, query, spec, lambda, lambda0, budget, [&](const SubsequencePair& p) {
    if (p.distance <= eps) out.push_back(p);
  });
  std::sort(out.begin(), out.end(), pair_span_less);
  return out;
}

std::vector<SubsequencePair> oracle_type2(const Dataset& ds, const Sequence& query,
                                          const DistanceSpec& spec, double eps,
                                          std::uint32_t lambda, std::uint32_t lambda0,
                                          const OracleBudget& budget) {
  std::vector<SubsequencePair> out;
  std::size_t best_len = 0;
  oracle_enumerate(ds, query, spec, lambda, lambda0, budget, [&](const SubsequencePair& p) {
    if (p.distance > eps) return;
    const std::size_t min_len = std::min(p.sq.length(), p.sx.length());
    if (min_len > best_len) {
      best_len = min_len;
      out.clear();
    }
    if (min_len == best_len) out.push_back(p);
  });
  std::sort(out.begin(), out.end(), pair_span_less);
  return out;
}

std::optional<SubsequencePair> oracle_type3(const Dataset& ds, const Sequence& query,
                                            const DistanceSpec& spec, std::uint32_t lambda,
                                            std::uint32_t lambda0, const OracleBudget& budget) {
  std::optional<SubsequencePair> best;
  oracle_enumerate(ds, query, spec, lambda, lambda0, budget, [&](const SubsequencePair& p) {
    if (!best || p.distance < best->distance ||
        (p.distance == best->distance && pair_span_less(p, *best)))
      best = p;
  });
  return best;
}

void write_pairs_csv(std::ostream& out, const std::string& query_id,
                     std::span<const SubsequencePair> pairs) {
  for (const auto& p : pairs) {
    out << query_id << ',' << p.sx.seq_id << ',' << p.sq.start << ',' << p.sq.end << ','
        << p.sx.start << ',' << p.sx.end << ',' << fmt_double(p.distance) << '\n';
  }
}

void save_index(std::ostream& out, const SubseqIndex& idx, const IndexFileInfo& info) {
  out << "subseqindex 1\n";
  out << "dataset " << info.dataset_path << '\n';
  out << "format " << format_name(info.format) << '\n';
  out << "dims " << info.dims << '\n';
  out << "lambda " << idx.params().lambda << '\n';
  out << "lambda0 " << idx.params().lambda0 << '\n';
  out << "windows " << idx.windows().size() << '\n';
  for (std::size_t i = 0; i < idx.windows().size(); ++i) {
    const WindowRef& w = idx.windows()[i];
    out << "w " << i << ' ' << w.seq_index << ' ' << w.start << ' ' << w.length << '\n';
  }
  idx.net().serialize(out, "windows");
}

SubseqIndex load_index(std::istream& in) {
  const auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      fail(Errc::parse, std::string("index file truncated before ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  const auto tag_value = [&](const std::string& line, const std::string& tag) {
    if (line.rfind(tag + " ", 0) != 0)
      fail(Errc::parse, "index file: expected '" + tag + "', got '" + line + "'");
    return line.substr(tag.size() + 1);
  };

  if (next_line("header") != "subseqindex 1") fail(Errc::parse, "index file: bad magic");
  const std::string dataset_path = tag_value(next_line("dataset"), "dataset");
  const DatasetFormat format = parse_format_name(tag_value(next_line("format"), "format"));
  const int dims = std::stoi(tag_value(next_line("dims"), "dims"));
  SegmentationParams params;
  params.lambda = static_cast<std::uint32_t>(std::stoul(tag_value(next_line("lambda"), "lambda")));
  params.lambda0 =
      static_cast<std::uint32_t>(std::stoul(tag_value(next_line("lambda0"), "lambda0")));
  params.validate();
  const std::size_t window_count = std::stoul(tag_value(next_line("windows"), "windows"));

  Dataset ds = load_dataset(dataset_path, format, dims);

  std::vector<WindowRef> windows(window_count);
  for (std::size_t i = 0; i < window_count; ++i) {
    std::istringstream ws(next_line("window"));
    std::string tag;
    std::size_t id;
    WindowRef w;
    ws >> tag >> id >> w.seq_index >> w.start >> w.length;
    if (!ws || tag != "w" || id != i) fail(Errc::parse, "index file: bad window line");
    if (w.seq_index >= ds.size() || w.start < 1 || w.start + w.length - 1 > ds.at(w.seq_index).size())
      fail(Errc::validation, "index file: window out of dataset bounds");
    windows[i] = w;
  }

  const auto resolver = [&](ObjectId id) -> Sequence {
    if (id >= windows.size()) fail(Errc::validation, "index file: unknown window id in net");
    const WindowRef& w = windows[id];
    return SeqView(ds.at(w.seq_index), w.start, w.length).to_sequence(std::to_string(id));
  };
  auto loaded = ReferenceNet::deserialize(in, resolver);
  if (loaded.payload_ref != "windows") fail(Errc::parse, "index file: unexpected payload reference");
  if (loaded.net.size() != window_count)
    fail(Errc::validation, "index file: net object count does not match window table");

  SubseqIndex idx(params, loaded.net.distance_spec(), loaded.net.config());
  idx.dataset_ = std::move(ds);
  idx.windows_ = std::move(windows);
  idx.net_ = std::move(loaded.net);
  return idx;
}

}  // namespace subseq
