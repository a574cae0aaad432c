#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "affect/tensor.hpp"

namespace affect {

// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);
// Fixed 17-significant-digit form (checkpoint payloads).
std::string format_double_17(double v);

double parse_double(const std::string& text, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

// Rectangular numeric CSV -> rows x cols tensor.
Tensor read_numeric_csv(const std::filesystem::path& path);
void write_numeric_csv(const std::filesystem::path& path, const Tensor& t);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64-bit, used for checkpoint payload checksums and config digests.
std::uint64_t fnv1a64(const std::string& payload);
std::string to_hex(std::uint64_t value);

}  // namespace affect
