#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace digestlab::csv {

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes;
// fields are trimmed of surrounding blanks.
std::vector<std::string> split(std::string_view line);

// Reads the next line, dropping a trailing '\r'. Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

bool is_blank(std::string_view line);

std::string format_double(double value);  // 17 significant digits

}  // namespace digestlab::csv
