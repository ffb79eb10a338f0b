#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace selcot::text {

std::string trim(std::string_view s);
std::string to_upper_ascii(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Splits on '\n'; a trailing newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view s);

bool is_unicode_whitespace(char32_t cp);

// Number of Unicode code points (malformed bytes count as one each).
std::size_t codepoint_count(std::string_view s);

// Words are maximal runs of non-whitespace code points.
std::size_t word_count(std::string_view s);

// Same segmentation as word_count, returning the word slices.
std::vector<std::string_view> split_words(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);
std::string hex16(std::uint64_t v);

}  // namespace selcot::text
