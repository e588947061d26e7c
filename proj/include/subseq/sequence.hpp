#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subseq/errors.hpp"

namespace subseq {

enum class ElementKind { symbol, vector };

inline constexpr int kMaxDims = 3;

// One sequence element: either a code point over a symbolic alphabet or a
// small real vector (1-3 dims).
struct Element {
  ElementKind kind = ElementKind::symbol;
  int dims = 0;  // 0 for symbols, 1..3 for vectors
  std::int32_t symbol = 0;
  std::array<double, 3> coords{0.0, 0.0, 0.0};

  static Element sym(std::int32_t code) {
    Element e;
    e.kind = ElementKind::symbol;
    e.symbol = code;
    return e;
  }

  static Element vec(std::initializer_list<double> values);
  static Element vec(std::span<const double> values);

  bool operator==(const Element& other) const;
};

// Ground distance between two elements: 0/1 discrete metric for symbols,
// Euclidean norm of the difference for vectors.
double element_distance(const Element& a, const Element& b);

struct AlphabetDesc {
  ElementKind kind = ElementKind::symbol;
  int dims = 0;

  bool operator==(const AlphabetDesc&) const = default;
};

// 1-based inclusive span into a named sequence.
struct Span {
  std::string seq_id;
  std::size_t start = 1;
  std::size_t end = 1;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const Span&) const = default;
};

// Immutable element sequence. Storage is flat per alphabet kind; public span
// arithmetic is 1-based, raw accessors are 0-based.
class Sequence {
 public:
  Sequence() = default;

  static Sequence symbols(std::string id, std::vector<std::int32_t> syms);
  static Sequence series(std::string id, std::vector<double> flat, int dims);
  // ASCII convenience constructor used all over the tests.
  static Sequence from_chars(std::string id, std::string_view chars);

  const std::string& id() const { return id_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  ElementKind kind() const { return alphabet_.kind; }
  int dims() const { return alphabet_.dims; }
  AlphabetDesc alphabet() const { return alphabet_; }

  // 1-based element access (public data model).
  Element element(std::size_t pos1) const;

  std::span<const std::int32_t> symbol_data() const { return symbols_; }
  std::span<const double> value_data() const { return values_; }

  bool operator==(const Sequence& other) const;

 private:
  std::string id_;
  AlphabetDesc alphabet_{};
  std::size_t size_ = 0;
  std::vector<std::int32_t> symbols_;
  std::vector<double> values_;  // dims * size, row-major
};

// Lightweight non-owning view of a contiguous sequence slice (0-based
// internally). Distance kernels operate on views so that windows and query
// segments never get copied.
class SeqView {
 public:
  SeqView() = default;
  explicit SeqView(const Sequence& s) : seq_(&s), offset_(0), len_(s.size()) {}
  SeqView(const Sequence& s, std::size_t start1, std::size_t len);
  static SeqView from_span(const Sequence& s, const Span& sp) {
    return SeqView(s, sp.start, sp.length());
  }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  ElementKind kind() const { return seq_->kind(); }
  int dims() const { return seq_->dims(); }
  const Sequence& sequence() const { return *seq_; }
  std::size_t offset() const { return offset_; }

  std::int32_t sym(std::size_t i) const { return seq_->symbol_data()[offset_ + i]; }
  const double* vec(std::size_t i) const {
    return seq_->value_data().data() + (offset_ + i) * static_cast<std::size_t>(seq_->dims());
  }
  Element element(std::size_t i) const { return seq_->element(offset_ + i + 1); }

  // Materialize the slice as a standalone sequence.
  Sequence to_sequence(std::string id) const;

 private:
  const Sequence* seq_ = nullptr;
  std::size_t offset_ = 0;
  std::size_t len_ = 0;
};

// Collection of sequences sharing one alphabet.
class Dataset {
 public:
  Dataset() = default;

  void add(Sequence s);

  std::size_t size() const { return seqs_.size(); }
  bool empty() const { return seqs_.empty(); }
  const Sequence& at(std::size_t index) const { return seqs_.at(index); }
  const std::vector<Sequence>& sequences() const { return seqs_; }
  std::optional<AlphabetDesc> alphabet() const { return alphabet_; }

  bool operator==(const Dataset& other) const { return seqs_ == other.seqs_; }

 private:
  std::optional<AlphabetDesc> alphabet_;
  std::vector<Sequence> seqs_;
};

}  // namespace subseq
