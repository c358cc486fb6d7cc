#pragma once

// Comma-delimited dataset ingestion: header row with x and y columns (plus an
// optional id column), one sample per line. Parse failures carry the
// offending 1-based line number.

#include <iosfwd>
#include <string>

#include "pwd/data.hpp"

namespace pwd {

MCDataset read_csv(std::istream& in, const std::string& source_name = "<input>");
MCDataset read_csv_file(const std::string& path);

}  // namespace pwd
