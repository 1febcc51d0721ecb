#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ldes::csv {

// A parsed comma-separated table with a header row. Row numbers in error
// messages are 1-based file lines (the header is line 1).
class Table {
public:
    static Table read(const std::filesystem::path& path);
    static Table parse(std::string_view text, std::string source);

    const std::string& source() const { return source_; }
    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }
    int line_of(std::size_t row) const { return static_cast<int>(row) + 2; }

    // Index of a required column; throws ValidationError naming the file.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;

    const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    double number(std::size_t row, std::size_t col) const;
    // Empty cell yields fallback.
    double number_or(std::size_t row, std::size_t col, double fallback) const;
    long integer(std::size_t row, std::size_t col) const;

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

class Writer {
public:
    explicit Writer(std::vector<std::string> header);
    Writer& add(std::vector<std::string> cells);
    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    std::size_t width_;
    std::string text_;
};

}  // namespace ldes::csv
