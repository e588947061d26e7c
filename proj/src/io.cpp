#include "subseq/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace subseq {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_control(unsigned char c) { return c < 0x20 || c == 0x7f; }

// Decodes one UTF-8 code point starting at i; returns false on malformed input.
bool decode_utf8(const std::string& s, std::size_t& i, std::int32_t& cp) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char c = byte(i);
  int extra;
  if (c < 0x80) {
    cp = c;
    extra = 0;
  } else if ((c & 0xe0) == 0xc0) {
    cp = c & 0x1f;
    extra = 1;
  } else if ((c & 0xf0) == 0xe0) {
    cp = c & 0x0f;
    extra = 2;
  } else if ((c & 0xf8) == 0xf0) {
    cp = c & 0x07;
    extra = 3;
  } else {
    return false;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) return false;
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = byte(i + static_cast<std::size_t>(k));
    if ((cc & 0xc0) != 0x80) return false;
    cp = (cp << 6) | (cc & 0x3f);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return true;
}

void encode_utf8(std::string& out, std::int32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::vector<std::int32_t> decode_line(const std::string& line, std::size_t line_no) {
  std::vector<std::int32_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    unsigned char c = static_cast<unsigned char>(line[i]);
    if (is_control(c))
      fail(Errc::parse, "control character in sequence at line " + std::to_string(line_no));
    std::int32_t cp;
    if (!decode_utf8(line, i, cp))
      fail(Errc::parse, "malformed UTF-8 at line " + std::to_string(line_no));
    out.push_back(cp);
  }
  return out;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

DatasetFormat parse_format_name(std::string_view name) {
  if (name == "fasta") return DatasetFormat::fasta;
  if (name == "lines") return DatasetFormat::lines;
  if (name == "csv") return DatasetFormat::csv;
  fail(Errc::config, "unknown dataset format: " + std::string(name));
}

std::string format_name(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::fasta: return "fasta";
    case DatasetFormat::lines: return "lines";
    case DatasetFormat::csv: return "csv";
  }
  return "?";
}

Dataset parse_string_dataset(std::istream& in) {
  const auto lines = read_lines(in);
  Dataset ds;

  bool fasta = false;
  for (const auto& line : lines) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    fasta = t[0] == '>';
    break;
  }

  if (fasta) {
    bool open = false;
    std::string id;
    std::vector<std::int32_t> syms;
    const auto flush = [&] {
      if (open) ds.add(Sequence::symbols(id, std::move(syms)));
      syms.clear();
    };
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const std::string t = trim(lines[n]);
      if (t.empty()) continue;
      if (t[0] == '>') {
        flush();
        open = true;
        id = trim(t.substr(1));
      } else {
        if (!open) fail(Errc::parse, "sequence data before first header at line " + std::to_string(n + 1));
        auto cps = decode_line(t, n + 1);
        syms.insert(syms.end(), cps.begin(), cps.end());
      }
    }
    flush();
  } else {
    std::size_t next_id = 0;
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const std::string t = trim(lines[n]);
      if (t.empty()) continue;
      ds.add(Sequence::symbols(std::to_string(next_id++), decode_line(t, n + 1)));
    }
  }
  return ds;
}

Dataset parse_timeseries_dataset(std::istream& in, int dims) {
  if (dims < 1 || dims > kMaxDims) fail(Errc::config, "time-series dims must be 1-3");
  const auto lines = read_lines(in);
  Dataset ds;

  std::string cur_id;
  bool open = false;
  std::vector<double> flat;
  std::vector<std::string> seen_ids;
  const auto flush = [&] {
    if (open) ds.add(Sequence::series(cur_id, std::move(flat), dims));
    flat.clear();
  };

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string t = trim(lines[n]);
    if (t.empty()) continue;
    const std::size_t row = n + 1;

    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = t.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(trim(t.substr(pos)));
        break;
      }
      cells.push_back(trim(t.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    if (cells.size() != static_cast<std::size_t>(dims) + 1)
      fail(Errc::parse, "wrong column count at row " + std::to_string(row));

    const std::string& id = cells[0];
    if (!open || id != cur_id) {
      for (const auto& prev : seen_ids)
        if (prev == id)
          fail(Errc::parse, "rows of sequence '" + id + "' are not consecutive (row " +
                                std::to_string(row) + ")");
      flush();
      open = true;
      cur_id = id;
      seen_ids.push_back(id);
    }
    for (int d = 0; d < dims; ++d) {
      const std::string& cell = cells[static_cast<std::size_t>(d) + 1];
      char* endp = nullptr;
      const double v = std::strtod(cell.c_str(), &endp);
      if (cell.empty() || endp != cell.c_str() + cell.size() || !std::isfinite(v))
        fail(Errc::parse, "non-numeric value at row " + std::to_string(row));
      flat.push_back(v);
    }
  }
  flush();
  return ds;
}

Dataset parse_dataset(std::istream& in, DatasetFormat format, int dims) {
  if (format == DatasetFormat::csv) return parse_timeseries_dataset(in, dims);
  return parse_string_dataset(in);
}

Dataset load_dataset(const std::string& path, DatasetFormat format, int dims) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open dataset file: " + path);
  return parse_dataset(in, format, dims);
}

void serialize_dataset(std::ostream& out, const Dataset& ds) {
  if (ds.empty()) return;
  if (ds.alphabet()->kind == ElementKind::symbol) {
    for (const auto& s : ds.sequences()) {
      out << '>' << s.id() << '\n';
      std::string body;
      for (std::int32_t cp : s.symbol_data()) encode_utf8(body, cp);
      out << body << '\n';
    }
  } else {
    char buf[64];
    for (const auto& s : ds.sequences()) {
      const int dims = s.dims();
      const auto values = s.value_data();
      for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.id();
        for (int d = 0; d < dims; ++d) {
          std::snprintf(buf, sizeof buf, "%.17g",
                        values[i * static_cast<std::size_t>(dims) + static_cast<std::size_t>(d)]);
          out << ',' << buf;
        }
        out << '\n';
      }
    }
  }
}

}  // namespace subseq
