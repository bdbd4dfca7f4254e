#include "mvlle/csv.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mvlle {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || cell.empty()) {
        throw std::invalid_argument(path + ": cell at row " + std::to_string(row) +
                                    ", column " + std::to_string(col) +
                                    " is not a number: '" + cell + "'");
    }
    return value;
}

std::vector<std::string> read_data_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        lines.push_back(std::move(t));
    }
    return lines;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path, bool has_header) {
    std::vector<std::string> lines = read_data_lines(path);
    if (has_header && !lines.empty()) {
        lines.erase(lines.begin());
    }
    if (lines.empty()) {
        throw std::invalid_argument(path + ": no data rows");
    }

    const std::vector<std::string> first = split_fields(lines[0]);
    const std::size_t cols = first.size();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(lines.size()),
                           static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const std::vector<std::string> fields = split_fields(lines[r]);
        if (fields.size() != cols) {
            throw std::invalid_argument(path + ": row " + std::to_string(r) + " has " +
                                        std::to_string(fields.size()) +
                                        " columns, expected " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_cell(fields[c], path, r, c);
        }
    }
    return values;
}

std::string format_csv_matrix(const Eigen::MatrixXd& values, const std::string& comment) {
    std::string out;
    out.reserve(static_cast<std::size_t>(values.size()) * 24 + comment.size() + 2);
    if (!comment.empty()) {
        out += "# ";
        out += comment;
        out += '\n';
    }
    char buffer[40];
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", values(r, c));
            if (c > 0) out += ',';
            out += buffer;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> read_label_lines(const std::string& path) {
    return read_data_lines(path);
}

std::string format_label_lines(const std::vector<std::string>& labels) {
    std::string out;
    for (const std::string& label : labels) {
        out += label;
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    std::uint64_t hash = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(hex);
}

}  // namespace mvlle
