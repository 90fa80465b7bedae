#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "partialreg/dataset.hpp"

namespace partialreg {

/// Reads a comma-separated file: a header row of unique names, then at
/// least two rows of finite numbers. Fields may be double-quoted; a UTF-8
/// byte-order mark and CRLF line endings are accepted. The result is not
/// centered.
///
/// Problems are reported as ParseError with the 1-based file line and field
/// index, e.g. "row 4, column 2: non-numeric cell 'NA' in column 'x1'".
Dataset ingest_csv(const std::filesystem::path& path);

/// Same as ingest_csv, for text already in memory.
Dataset parse_csv(std::string_view text);

/// Header row plus one line per observation. Numbers use the shortest
/// representation that reads back to the same double.
void write_csv(const Dataset& data, std::ostream& out);

}  // namespace partialreg
