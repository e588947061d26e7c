#pragma once

#include <iosfwd>
#include <string>

#include "subseq/sequence.hpp"

namespace subseq {

// Text formats accepted for datasets and query files.
enum class DatasetFormat { fasta, lines, csv };

DatasetFormat parse_format_name(std::string_view name);
std::string format_name(DatasetFormat f);

// Strings: FASTA-style ('>' headers) or one sequence per line. UTF-8, LF or
// CRLF. Unnamed sequences get ids "0", "1", ...
Dataset parse_string_dataset(std::istream& in);

// Time series: CSV rows `seq_id,v1[,v2[,v3]]`, rows of one id consecutive.
Dataset parse_timeseries_dataset(std::istream& in, int dims);

Dataset parse_dataset(std::istream& in, DatasetFormat format, int dims);
Dataset load_dataset(const std::string& path, DatasetFormat format, int dims);

// FASTA for symbol datasets, CSV for series; parse(serialize(ds)) == ds.
void serialize_dataset(std::ostream& out, const Dataset& ds);

}  // namespace subseq
