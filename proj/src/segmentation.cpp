#include "subseq/segmentation.hpp"

#include <string>

namespace subseq {

void SegmentationParams::validate() const {
  if (lambda < 2) fail(Errc::config, "lambda must be at least 2");
  const std::uint32_t l = window_length();
  if (lambda0 >= l)
    fail(Errc::config, "lambda0 must be smaller than the window length " + std::to_string(l));
}

std::vector<WindowRef> partition_windows(std::uint32_t seq_index, std::size_t seq_len,
                                         const SegmentationParams& p, bool include_tail) {
  p.validate();
  const std::uint32_t l = p.window_length();
  std::vector<WindowRef> out;
  if (seq_len < l) return out;
  const std::size_t count = seq_len / l;
  out.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(WindowRef{seq_index, static_cast<std::uint32_t>(i * l + 1), l});
  if (include_tail && seq_len % l != 0)
    out.push_back(WindowRef{seq_index, static_cast<std::uint32_t>(seq_len - l + 1), l});
  return out;
}

std::vector<QuerySegment> extract_query_segments(std::size_t query_len,
                                                 const SegmentationParams& p) {
  return extract_query_segments(query_len, p, p.lambda0);
}

std::vector<QuerySegment> extract_query_segments(std::size_t query_len, const SegmentationParams& p,
                                                 std::uint32_t lambda0) {
  p.validate();
  const std::uint32_t l = p.window_length();
  if (lambda0 >= l) fail(Errc::config, "lambda0 must be smaller than the window length");
  std::vector<QuerySegment> out;
  const std::uint32_t lo = l - lambda0;
  const std::uint32_t hi = l + lambda0;
  if (query_len < lo) return out;
  for (std::size_t start = 1; start + lo - 1 <= query_len; ++start) {
    for (std::uint32_t len = lo; len <= hi; ++len) {
      if (start + len - 1 > query_len) break;
      out.push_back(QuerySegment{static_cast<std::uint32_t>(start), len});
    }
  }
  return out;
}

}  // namespace subseq
