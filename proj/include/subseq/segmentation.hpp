#pragma once

#include <cstdint>
#include <vector>

#include "subseq/errors.hpp"

namespace subseq {

// Fixed-length database window: sequence index plus a 1-based start offset.
struct WindowRef {
  std::uint32_t seq_index = 0;
  std::uint32_t start = 1;
  std::uint32_t length = 0;

  std::uint32_t end() const { return start + length - 1; }
  bool operator==(const WindowRef&) const = default;
};

// lambda: minimum match length; lambda0: maximum length shift between matched
// subsequences; window length is floor(lambda / 2).
struct SegmentationParams {
  std::uint32_t lambda = 2;
  std::uint32_t lambda0 = 0;

  std::uint32_t window_length() const { return lambda / 2; }
  void validate() const;
};

struct QuerySegment {
  std::uint32_t start = 1;  // 1-based inclusive
  std::uint32_t length = 0;

  std::uint32_t end() const { return start + length - 1; }
  bool operator==(const QuerySegment&) const = default;
};

// Non-overlapping windows at offsets 0, l, 2l, ...; the trailing remainder is
// dropped. With include_tail an extra end-anchored window [n-l+1, n] is added
// when n is not a multiple of l, keeping sequence tails coverable.
std::vector<WindowRef> partition_windows(std::uint32_t seq_index, std::size_t seq_len,
                                         const SegmentationParams& p, bool include_tail = false);

// Every contiguous span of Q with length in [l-lambda0, l+lambda0], ordered by
// (start, length). lambda0 overrides the params value when supplied.
std::vector<QuerySegment> extract_query_segments(std::size_t query_len, const SegmentationParams& p);
std::vector<QuerySegment> extract_query_segments(std::size_t query_len, const SegmentationParams& p,
                                                 std::uint32_t lambda0);

}  // namespace subseq
