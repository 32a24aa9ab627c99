#ifndef TWEETSENT_IO_UTIL_HPP
#define TWEETSENT_IO_UTIL_HPP

#include <string>
#include <string_view>
#include <vector>

namespace tweetsent {

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Writes to <path>.tmp then renames, so readers never observe a
// half-written file.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace tweetsent

#endif  // TWEETSENT_IO_UTIL_HPP
