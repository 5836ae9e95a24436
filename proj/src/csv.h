#ifndef PACEBENCH_SRC_CSV_H_
#define PACEBENCH_SRC_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace pacebench::csv {

// Minimal RFC 4180 helpers: fields with commas, quotes or newlines are
// quoted, embedded quotes doubled.
std::string Escape(std::string_view field);
std::string JoinRow(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> ParseRows(std::string_view text);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double value);
// Throws Error(kParse) naming |what|.
double ParseDouble(std::string_view text, std::string_view what);
long long ParseInt(std::string_view text, std::string_view what);

}  // namespace pacebench::csv

#endif  // PACEBENCH_SRC_CSV_H_
