#pragma once

#include <string>

#include "subseq/sequence.hpp"

namespace subseq {

// Absolute tolerance for all real-valued comparisons.
inline constexpr double kTolerance = 1e-9;

enum class DistanceKind { euclidean, hamming, levenshtein, erp, dfd, dtw };

DistanceKind parse_distance_name(std::string_view name);
std::string distance_name(DistanceKind k);

// A distance measure plus its declared properties. All six kinds are
// consistent; all but DTW are metric.
struct DistanceSpec {
  DistanceKind kind = DistanceKind::levenshtein;
  Element gap;  // ERP only
  bool declared_metric = true;
  bool declared_consistent = true;

  static DistanceSpec make(DistanceKind k);
  static DistanceSpec make_erp(Element gap_element);

  // Distances whose value bounds the length difference of its arguments
  // (the edit family); used to pick safe filter radii.
  bool length_rigid() const {
    return kind == DistanceKind::euclidean || kind == DistanceKind::hamming;
  }
};

// Aligned distances (require |Q| == |X|).
double euclidean(SeqView q, SeqView x);
double hamming(SeqView q, SeqView x);

// Edit family (empty sequences allowed).
double levenshtein(SeqView q, SeqView x);
double erp(SeqView q, SeqView x, const Element& gap);

// Coupling family (require non-empty sequences).
double dfd(SeqView q, SeqView x);
double dtw(SeqView q, SeqView x);

double sequence_distance(const DistanceSpec& spec, SeqView q, SeqView x);

inline double sequence_distance(const DistanceSpec& spec, const Sequence& q, const Sequence& x) {
  return sequence_distance(spec, SeqView(q), SeqView(x));
}

}  // namespace subseq
