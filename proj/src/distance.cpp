#include "subseq/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace subseq {

namespace {

void check_compatible(SeqView a, SeqView b) {
  if (a.kind() != b.kind() || a.dims() != b.dims())
    fail(Errc::kind_mismatch, "sequence alphabet mismatch");
}

struct SymGround {
  const std::int32_t* a;
  const std::int32_t* b;
  double operator()(std::size_t i, std::size_t j) const { return a[i] == b[j] ? 0.0 : 1.0; }
};

struct VecGround {
  const double* a;
  const double* b;
  int dims;
  double operator()(std::size_t i, std::size_t j) const {
    const double* pa = a + i * static_cast<std::size_t>(dims);
    const double* pb = b + j * static_cast<std::size_t>(dims);
    double acc = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double diff = pa[d] - pb[d];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }
};

// Dispatches to `fn(ground)` where ground(i, j) is the element distance
// between q[i] and x[j]; avoids per-element kind branching in the DP loops.
template <class Fn>
double with_ground(SeqView q, SeqView x, Fn&& fn) {
  check_compatible(q, x);
  if (q.kind() == ElementKind::symbol) {
    return fn(SymGround{q.sequence().symbol_data().data() + q.offset(),
                        x.sequence().symbol_data().data() + x.offset()});
  }
  const auto d = static_cast<std::size_t>(q.dims());
  return fn(VecGround{q.sequence().value_data().data() + q.offset() * d,
                      x.sequence().value_data().data() + x.offset() * d, q.dims()});
}

thread_local std::vector<double> g_row0;
thread_local std::vector<double> g_row1;

template <class Ground>
double levenshtein_impl(std::size_t m, std::size_t n, Ground g) {
  auto& prev = g_row0;
  auto& cur = g_row1;
  prev.resize(n + 1);
  cur.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<double>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<double>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const double sub = prev[j - 1] + (g(i - 1, j - 1) == 0.0 ? 0.0 : 1.0);
      cur[j] = std::min({sub, prev[j] + 1.0, cur[j - 1] + 1.0});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

template <class Ground, class GapCostQ, class GapCostX>
double erp_impl(std::size_t m, std::size_t n, Ground g, GapCostQ gq, GapCostX gx) {
  auto& prev = g_row0;
  auto& cur = g_row1;
  prev.resize(n + 1);
  cur.resize(n + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + gx(j - 1);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = prev[0] + gq(i - 1);
    for (std::size_t j = 1; j <= n; ++j) {
      const double match = prev[j - 1] + g(i - 1, j - 1);
      const double gap_q = prev[j] + gq(i - 1);
      const double gap_x = cur[j - 1] + gx(j - 1);
      cur[j] = std::min({match, gap_q, gap_x});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

template <class Ground>
double dfd_impl(std::size_t m, std::size_t n, Ground g) {
  auto& prev = g_row0;
  auto& cur = g_row1;
  prev.resize(n);
  cur.resize(n);
  prev[0] = g(0, 0);
  for (std::size_t j = 1; j < n; ++j) prev[j] = std::max(prev[j - 1], g(0, j));
  for (std::size_t i = 1; i < m; ++i) {
    cur[0] = std::max(prev[0], g(i, 0));
    for (std::size_t j = 1; j < n; ++j) {
      const double reach = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(reach, g(i, j));
    }
    std::swap(prev, cur);
  }
  return prev[n - 1];
}

template <class Ground>
double dtw_impl(std::size_t m, std::size_t n, Ground g) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto& prev = g_row0;
  auto& cur = g_row1;
  prev.assign(n + 1, kInf);
  cur.assign(n + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = best + g(i - 1, j - 1);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

DistanceKind parse_distance_name(std::string_view name) {
  if (name == "euclidean") return DistanceKind::euclidean;
  if (name == "hamming") return DistanceKind::hamming;
  if (name == "levenshtein") return DistanceKind::levenshtein;
  if (name == "erp") return DistanceKind::erp;
  if (name == "dfd") return DistanceKind::dfd;
  if (name == "dtw") return DistanceKind::dtw;
  fail(Errc::config, "unknown distance: " + std::string(name));
}

std::string distance_name(DistanceKind k) {
  switch (k) {
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::hamming: return "hamming";
    case DistanceKind::levenshtein: return "levenshtein";
    case DistanceKind::erp: return "erp";
    case DistanceKind::dfd: return "dfd";
    case DistanceKind::dtw: return "dtw";
  }
  return "?";
}

DistanceSpec DistanceSpec::make(DistanceKind k) {
  DistanceSpec s;
  s.kind = k;
  s.declared_metric = k != DistanceKind::dtw;
  s.declared_consistent = true;
  if (k == DistanceKind::erp) s.gap = Element::sym(0);
  return s;
}

DistanceSpec DistanceSpec::make_erp(Element gap_element) {
  DistanceSpec s = make(DistanceKind::erp);
  s.gap = gap_element;
  return s;
}

double euclidean(SeqView q, SeqView x) {
  if (q.size() != x.size()) fail(Errc::length_mismatch, "euclidean requires equal lengths");
  return with_ground(q, x, [&](auto g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double d = g(i, i);
      acc += d * d;
    }
    return std::sqrt(acc);
  });
}

double hamming(SeqView q, SeqView x) {
  if (q.size() != x.size()) fail(Errc::length_mismatch, "hamming requires equal lengths");
  return with_ground(q, x, [&](auto g) {
    double count = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (g(i, i) != 0.0) count += 1.0;
    return count;
  });
}

double levenshtein(SeqView q, SeqView x) {
  if (q.empty()) return static_cast<double>(x.size());
  if (x.empty()) return static_cast<double>(q.size());
  return with_ground(q, x, [&](auto g) { return levenshtein_impl(q.size(), x.size(), g); });
}

double erp(SeqView q, SeqView x, const Element& gap) {
  if (!q.empty()) {
    const Element probe = q.element(0);
    if (probe.kind != gap.kind || probe.dims != gap.dims)
      fail(Errc::kind_mismatch, "ERP gap element kind mismatch");
  } else if (!x.empty()) {
    const Element probe = x.element(0);
    if (probe.kind != gap.kind || probe.dims != gap.dims)
      fail(Errc::kind_mismatch, "ERP gap element kind mismatch");
  }
  const auto gap_cost = [&](SeqView s, std::size_t i) { return element_distance(s.element(i), gap); };
  if (q.empty() && x.empty()) return 0.0;
  if (q.empty()) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += gap_cost(x, j);
    return acc;
  }
  if (x.empty()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += gap_cost(q, i);
    return acc;
  }
  return with_ground(q, x, [&](auto g) {
    return erp_impl(
        q.size(), x.size(), g, [&](std::size_t i) { return gap_cost(q, i); },
        [&](std::size_t j) { return gap_cost(x, j); });
  });
}

double dfd(SeqView q, SeqView x) {
  if (q.empty() || x.empty())
    fail(Errc::empty_sequence, "discrete Frechet distance requires non-empty sequences");
  return with_ground(q, x, [&](auto g) { return dfd_impl(q.size(), x.size(), g); });
}

double dtw(SeqView q, SeqView x) {
  if (q.empty() || x.empty()) fail(Errc::empty_sequence, "DTW requires non-empty sequences");
  return with_ground(q, x, [&](auto g) { return dtw_impl(q.size(), x.size(), g); });
}

double sequence_distance(const DistanceSpec& spec, SeqView q, SeqView x) {
  switch (spec.kind) {
    case DistanceKind::euclidean: return euclidean(q, x);
    case DistanceKind::hamming: return hamming(q, x);
    case DistanceKind::levenshtein: return levenshtein(q, x);
    case DistanceKind::erp: return erp(q, x, spec.gap);
    case DistanceKind::dfd: return dfd(q, x);
    case DistanceKind::dtw: return dtw(q, x);
  }
  fail(Errc::config, "unhandled distance kind");
}

}  // namespace subseq
