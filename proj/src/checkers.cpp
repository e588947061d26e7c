#include "subseq/checkers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "subseq/rng.hpp"

namespace subseq {

namespace {

constexpr std::size_t kConsistencyBudget = 14;

bool needs_equal_lengths(DistanceKind k) {
  return k == DistanceKind::euclidean || k == DistanceKind::hamming;
}

bool needs_nonempty(DistanceKind k) { return k == DistanceKind::dfd || k == DistanceKind::dtw; }

}  // namespace

std::vector<Violation> check_consistency(const DistanceSpec& spec, const Sequence& q,
                                         const Sequence& x) {
  if (q.size() > kConsistencyBudget || x.size() > kConsistencyBudget)
    fail(Errc::budget_exceeded, "consistency check limited to sequences of length 14");
  std::vector<Violation> out;

  if (needs_equal_lengths(spec.kind) && q.size() != x.size())
    fail(Errc::length_mismatch, "consistency check needs equal lengths for this distance");
  if (needs_nonempty(spec.kind) && (q.empty() || x.empty()))
    fail(Errc::empty_sequence, "consistency check needs non-empty sequences for this distance");

  const double whole = sequence_distance(spec, q, x);
  const SeqView qv(q);
  const SeqView xv(x);

  for (std::size_t a = 1; a <= x.size(); ++a) {
    for (std::size_t b = a; b <= x.size(); ++b) {
      const SeqView sx(x, a, b - a + 1);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 1; c <= q.size(); ++c) {
        for (std::size_t d = c; d <= q.size(); ++d) {
          const std::size_t len = d - c + 1;
          if (needs_equal_lengths(spec.kind) && len != sx.size()) continue;
          best = std::min(best, sequence_distance(spec, SeqView(q, c, len), sx));
          if (best == 0.0) break;
        }
        if (best == 0.0) break;
      }
      if (best > whole + kTolerance) {
        Violation v;
        v.kind = ViolationKind::consistency;
        v.witness = {q, x, sx.to_sequence("SX")};
        v.measured = {best, whole};
        v.detail = "SX=[" + std::to_string(a) + "," + std::to_string(b) +
                   "] min over SQ = " + std::to_string(best) + " > d(Q,X) = " + std::to_string(whole);
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

std::vector<Violation> check_metric_axioms(const DistanceSpec& spec,
                                           std::span<const std::array<Sequence, 3>> triples) {
  std::vector<Violation> out;
  const auto dist = [&](const Sequence& a, const Sequence& b) {
    return sequence_distance(spec, a, b);
  };

  for (const auto& triple : triples) {
    const Sequence& a = triple[0];
    const Sequence& b = triple[1];
    const Sequence& c = triple[2];

    for (const Sequence* s : {&a, &b, &c}) {
      const double self = dist(*s, *s);
      if (self > kTolerance || self < 0.0) {
        out.push_back(Violation{ViolationKind::identity,
                                {*s},
                                {self},
                                "d(A,A) = " + std::to_string(self)});
      }
    }

    const std::array<std::pair<const Sequence*, const Sequence*>, 3> pairs = {
        {{&a, &b}, {&a, &c}, {&b, &c}}};
    for (auto [s, t] : pairs) {
      const double st = dist(*s, *t);
      const double ts = dist(*t, *s);
      if (std::abs(st - ts) > kTolerance) {
        out.push_back(Violation{ViolationKind::symmetry,
                                {*s, *t},
                                {st, ts},
                                "d(A,B) != d(B,A)"});
      }
    }

    const std::array<std::array<const Sequence*, 3>, 3> orders = {
        {{&a, &b, &c}, {&b, &a, &c}, {&a, &c, &b}}};
    for (const auto& ord : orders) {
      const double direct = dist(*ord[0], *ord[2]);
      const double via = dist(*ord[0], *ord[1]) + dist(*ord[1], *ord[2]);
      if (direct > via + kTolerance) {
        out.push_back(Violation{ViolationKind::triangle,
                                {*ord[0], *ord[1], *ord[2]},
                                {direct, via},
                                "d(A,C) = " + std::to_string(direct) + " > d(A,B)+d(B,C) = " +
                                    std::to_string(via)});
      }
    }
  }
  return out;
}

std::optional<Violation> search_dtw_triangle_violation(std::uint64_t seed, std::size_t max_trials) {
  Rng rng(seed);
  const DistanceSpec spec = DistanceSpec::make(DistanceKind::dtw);
  const auto random_series = [&](int salt) {
    const std::size_t len = 1 + rng.below(4);
    std::vector<double> vals(len);
    for (auto& v : vals) v = static_cast<double>(rng.below(3));
    return Sequence::series("w" + std::to_string(salt), std::move(vals), 1);
  };

  for (std::size_t trial = 0; trial < max_trials; ++trial) {
    std::array<Sequence, 3> triple = {random_series(0), random_series(1), random_series(2)};
    const double ab = sequence_distance(spec, triple[0], triple[1]);
    const double bc = sequence_distance(spec, triple[1], triple[2]);
    const double ac = sequence_distance(spec, triple[0], triple[2]);
    if (ac > ab + bc + kTolerance) {
      return Violation{ViolationKind::triangle,
                       {triple[0], triple[1], triple[2]},
                       {ac, ab + bc},
                       "dtw triangle violation found after " + std::to_string(trial + 1) +
                           " trials"};
    }
  }
  return std::nullopt;
}

}  // namespace subseq
