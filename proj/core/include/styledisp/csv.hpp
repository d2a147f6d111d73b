#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace styledisp::csv {

// Quotes a field when it contains a comma, quote or newline.
std::string field(std::string_view value);

// RFC 4180 style reader; quoted fields may span lines.
std::vector<std::vector<std::string>> parse(std::string_view text);

// "%.17g"
std::string number(double value);

}  // namespace styledisp::csv
