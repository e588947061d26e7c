#pragma once

#include <stdexcept>
#include <string>

namespace subseq {

enum class Errc {
  kind_mismatch,
  length_mismatch,
  empty_sequence,
  parse,
  io,
  budget_exceeded,
  duplicate_id,
  not_found,
  non_metric,
  validation,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace subseq
