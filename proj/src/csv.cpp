#include "ldes/csv.hpp"

#include "ldes/error.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace ldes::csv {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

}  // namespace

Table Table::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.filename().string());
}

Table Table::parse(std::string_view text, std::string source) {
    Table t;
    t.source_ = std::move(source);
    // Skip a UTF-8 byte order mark.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::size_t pos = 0;
    int line_no = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (!have_header) {
            t.header_ = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header_.size()) {
            throw ValidationError(fmt::format("{}:{}: expected {} fields, found {}", t.source_,
                                              line_no, t.header_.size(), cells.size()));
        }
        t.rows_.push_back(std::move(cells));
    }
    if (!have_header) throw ValidationError(fmt::format("{}: missing header row", t.source_));
    return t;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw ValidationError(fmt::format("{}: missing column '{}'", source_, name));
}

bool Table::has_column(std::string_view name) const {
    for (const auto& h : header_) {
        if (h == name) return true;
    }
    return false;
}

double Table::number(std::size_t row, std::size_t col) const {
    const std::string& s = rows_[row][col];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError(fmt::format("{}:{}: column '{}' is not a number: '{}'", source_,
                                          line_of(row), header_[col], s));
    }
    return v;
}

double Table::number_or(std::size_t row, std::size_t col, double fallback) const {
    return rows_[row][col].empty() ? fallback : number(row, col);
}

long Table::integer(std::size_t row, std::size_t col) const {
    const std::string& s = rows_[row][col];
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError(fmt::format("{}:{}: column '{}' is not an integer: '{}'", source_,
                                          line_of(row), header_[col], s));
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Writer::Writer(std::vector<std::string> header) : width_(header.size()) { add(std::move(header)); }

Writer& Writer::add(std::vector<std::string> cells) {
    if (cells.size() != width_) throw ArgumentError("csv writer: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_.push_back(',');
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            text_.push_back('"');
            for (char ch : c) {
                if (ch == '"') text_.push_back('"');
                text_.push_back(ch);
            }
            text_.push_back('"');
        } else {
            text_ += c;
        }
    }
    text_.push_back('\n');
    return *this;
}

std::string Writer::str() const { return text_; }

void Writer::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << text_;
    if (!out) throw IoError(fmt::format("write failed: {}", path.string()));
}

}  // namespace ldes::csv
