#include "affect/io_util.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "affect/errors.hpp"

namespace affect {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_double_17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& context) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size())
        throw IoError("cannot parse number \"" + text + "\" in " + context);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

Tensor read_numeric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature file: " + path.string());
    std::vector<double> values;
    std::size_t cols = 0, rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (cols == 0) cols = fields.size();
        else if (fields.size() != cols)
            throw IoError("ragged row in " + path.string() + ": line " + std::to_string(rows + 1) +
                          " has " + std::to_string(fields.size()) + " columns, expected " +
                          std::to_string(cols));
        for (const auto& f : fields)
            values.push_back(parse_double(f, path.string()));
        ++rows;
    }
    if (rows == 0) throw IoError("feature file is empty: " + path.string());
    Tensor t(std::vector<std::size_t>{rows, cols});
    t.values() = std::move(values);
    return t;
}

void write_numeric_csv(const std::filesystem::path& path, const Tensor& t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write feature file: " + path.string());
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (c) out << ',';
            out << format_double(t(r, c));
        }
        out << '\n';
    }
    if (!out.good()) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out.good()) throw IoError("failed writing " + path.string());
}

std::uint64_t fnv1a64(const std::string& payload) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace affect
