#include "subseq/sequence.hpp"

#include <cmath>
#include <utility>

namespace subseq {

Element Element::vec(std::initializer_list<double> values) {
  return vec(std::span<const double>(values.begin(), values.size()));
}

Element Element::vec(std::span<const double> values) {
  if (values.empty() || values.size() > kMaxDims)
    fail(Errc::validation, "vector elements support 1-3 dimensions");
  Element e;
  e.kind = ElementKind::vector;
  e.dims = static_cast<int>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) fail(Errc::validation, "vector coordinates must be finite");
    e.coords[i] = values[i];
  }
  return e;
}

bool Element::operator==(const Element& other) const {
  if (kind != other.kind || dims != other.dims) return false;
  if (kind == ElementKind::symbol) return symbol == other.symbol;
  for (int i = 0; i < dims; ++i)
    if (coords[static_cast<std::size_t>(i)] != other.coords[static_cast<std::size_t>(i)])
      return false;
  return true;
}

double element_distance(const Element& a, const Element& b) {
  if (a.kind != b.kind || a.dims != b.dims)
    fail(Errc::kind_mismatch, "element kind/dimension mismatch");
  if (a.kind == ElementKind::symbol) return a.symbol == b.symbol ? 0.0 : 1.0;
  double acc = 0.0;
  for (int i = 0; i < a.dims; ++i) {
    const double d = a.coords[static_cast<std::size_t>(i)] - b.coords[static_cast<std::size_t>(i)];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Sequence Sequence::symbols(std::string id, std::vector<std::int32_t> syms) {
  Sequence s;
  s.id_ = std::move(id);
  s.alphabet_ = AlphabetDesc{ElementKind::symbol, 0};
  s.size_ = syms.size();
  s.symbols_ = std::move(syms);
  return s;
}

Sequence Sequence::series(std::string id, std::vector<double> flat, int dims) {
  if (dims < 1 || dims > kMaxDims) fail(Errc::validation, "series dimensions must be 1-3");
  if (flat.size() % static_cast<std::size_t>(dims) != 0)
    fail(Errc::validation, "flat value buffer not divisible by dims");
  for (double v : flat)
    if (!std::isfinite(v)) fail(Errc::validation, "series values must be finite");
  Sequence s;
  s.id_ = std::move(id);
  s.alphabet_ = AlphabetDesc{ElementKind::vector, dims};
  s.size_ = flat.size() / static_cast<std::size_t>(dims);
  s.values_ = std::move(flat);
  return s;
}

Sequence Sequence::from_chars(std::string id, std::string_view chars) {
  std::vector<std::int32_t> syms;
  syms.reserve(chars.size());
  for (char c : chars) syms.push_back(static_cast<std::int32_t>(static_cast<unsigned char>(c)));
  return symbols(std::move(id), std::move(syms));
}

Element Sequence::element(std::size_t pos1) const {
  if (pos1 < 1 || pos1 > size_) fail(Errc::validation, "element index out of range");
  if (alphabet_.kind == ElementKind::symbol) return Element::sym(symbols_[pos1 - 1]);
  const double* p = values_.data() + (pos1 - 1) * static_cast<std::size_t>(alphabet_.dims);
  return Element::vec(std::span<const double>(p, static_cast<std::size_t>(alphabet_.dims)));
}

bool Sequence::operator==(const Sequence& other) const {
  return id_ == other.id_ && alphabet_ == other.alphabet_ && symbols_ == other.symbols_ &&
         values_ == other.values_;
}

SeqView::SeqView(const Sequence& s, std::size_t start1, std::size_t len)
    : seq_(&s), offset_(start1 - 1), len_(len) {
  if (start1 < 1) fail(Errc::validation, "span start must be 1-based");
  if (len > 0 && start1 + len - 1 > s.size())
    fail(Errc::validation, "span out of sequence bounds");
  if (len == 0 && start1 > s.size() + 1) fail(Errc::validation, "span out of sequence bounds");
}

Sequence SeqView::to_sequence(std::string id) const {
  if (kind() == ElementKind::symbol) {
    auto data = seq_->symbol_data();
    return Sequence::symbols(
        std::move(id), std::vector<std::int32_t>(data.begin() + static_cast<std::ptrdiff_t>(offset_),
                                                 data.begin() + static_cast<std::ptrdiff_t>(offset_ + len_)));
  }
  auto data = seq_->value_data();
  const auto d = static_cast<std::size_t>(seq_->dims());
  return Sequence::series(std::move(id),
                          std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(offset_ * d),
                                              data.begin() + static_cast<std::ptrdiff_t>((offset_ + len_) * d)),
                          seq_->dims());
}

void Dataset::add(Sequence s) {
  if (!alphabet_) {
    alphabet_ = s.alphabet();
  } else if (*alphabet_ != s.alphabet()) {
    fail(Errc::kind_mismatch, "dataset sequences must share one alphabet");
  }
  seqs_.push_back(std::move(s));
}

}  // namespace subseq
