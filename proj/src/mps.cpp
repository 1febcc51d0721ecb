#include "ldes/mps.hpp"

#include "ldes/csv.hpp"
#include "ldes/error.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <sstream>

namespace ldes {

namespace {

constexpr std::string_view kObjectiveRow = "OBJ";

std::string num(double v) { return csv::format_number(v); }

char sense_code(RowSense s) {
    switch (s) {
        case RowSense::less_equal: return 'L';
        case RowSense::equal: return 'E';
        case RowSense::greater_equal: return 'G';
    }
    return 'E';
}

std::vector<std::string> tokens(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_num(const std::string& s, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        if (s == "Infinity" || s == "inf" || s == "1e+30" || s == "1e30") return kInf;
        if (s == "-Infinity" || s == "-inf" || s == "-1e+30" || s == "-1e30") return -kInf;
        throw ValidationError(fmt::format("mps:{}: not a number: '{}'", line_no, s));
    }
    if (v >= 1e30) return kInf;
    if (v <= -1e30) return -kInf;
    return v;
}

}  // namespace

std::string to_mps(const LinearProgram& lp, std::string_view model_name) {
    lp.validate();
    const int n = lp.num_variables();
    // Column-major view with duplicate entries merged.
    std::vector<std::map<int, double>> columns(n);
    for (int i = 0; i < lp.num_constraints(); ++i) {
        const Constraint& c = lp.constraints()[i];
        if (c.name == kObjectiveRow) throw ArgumentError("constraint name 'OBJ' is reserved");
        for (auto [j, a] : c.coefficients) columns[j][i] += a;
    }

    std::string out;
    out += fmt::format("NAME {}\n", model_name);
    out += "OBJSENSE\n";
    out += lp.sense == ObjectiveSense::maximize ? "    MAX\n" : "    MIN\n";
    out += "ROWS\n";
    out += fmt::format(" N  {}\n", kObjectiveRow);
    for (const auto& c : lp.constraints()) out += fmt::format(" {}  {}\n", sense_code(c.sense), c.name);
    out += "COLUMNS\n";
    for (int j = 0; j < n; ++j) {
        const Variable& v = lp.variable(j);
        bool wrote = false;
        if (v.objective != 0.0) {
            out += fmt::format("    {}  {}  {}\n", v.name, kObjectiveRow, num(v.objective));
            wrote = true;
        }
        for (auto [i, a] : columns[j]) {
            if (a == 0.0) continue;
            out += fmt::format("    {}  {}  {}\n", v.name, lp.constraints()[i].name, num(a));
            wrote = true;
        }
        if (!wrote) out += fmt::format("    {}  {}  0\n", v.name, kObjectiveRow);
    }
    out += "RHS\n";
    if (lp.objective_offset != 0.0) {
        out += fmt::format("    RHS  {}  {}\n", kObjectiveRow, num(-lp.objective_offset));
    }
    for (const auto& c : lp.constraints()) {
        if (c.rhs != 0.0) out += fmt::format("    RHS  {}  {}\n", c.name, num(c.rhs));
    }
    out += "BOUNDS\n";
    for (const auto& v : lp.variables()) {
        if (v.lower == v.upper) {
            out += fmt::format(" FX BND  {}  {}\n", v.name, num(v.lower));
        } else if (v.lower == -kInf && v.upper == kInf) {
            out += fmt::format(" FR BND  {}\n", v.name);
        } else {
            if (v.lower == -kInf) {
                out += fmt::format(" MI BND  {}\n", v.name);
            } else if (v.lower != 0.0) {
                out += fmt::format(" LO BND  {}  {}\n", v.name, num(v.lower));
            }
            if (v.upper != kInf) out += fmt::format(" UP BND  {}  {}\n", v.name, num(v.upper));
        }
    }
    out += "ENDATA\n";
    return out;
}

void write_mps(const LinearProgram& lp, const std::filesystem::path& path, std::string_view model_name) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot write {}", path.string()));
    f << to_mps(lp, model_name);
    if (!f) throw IoError(fmt::format("write failed: {}", path.string()));
}

LinearProgram parse_mps(std::string_view text) {
    enum class Section { none, name, objsense, rows, columns, rhs, bounds, done };
    Section section = Section::none;
    LinearProgram lp;
    std::string objective_row;
    // Rows are created as they are declared; coefficients collected per row.
    std::vector<std::vector<std::pair<int, double>>> row_coeffs;
    std::vector<std::string> row_names;
    std::vector<RowSense> row_senses;
    std::vector<double> row_rhs;
    std::map<std::string, int> row_index;
    std::map<std::string, bool> ignored_free_rows;
    std::vector<bool> lower_set;

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        auto tok = tokens(line);
        if (tok.empty()) continue;
        const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        if (header) {
            const std::string& h = tok[0];
            if (h == "NAME") {
                section = Section::name;
            } else if (h == "OBJSENSE") {
                section = Section::objsense;
                if (tok.size() > 1) lp.sense = tok[1] == "MAX" ? ObjectiveSense::maximize : ObjectiveSense::minimize;
            } else if (h == "ROWS") {
                section = Section::rows;
            } else if (h == "COLUMNS") {
                section = Section::columns;
            } else if (h == "RHS") {
                section = Section::rhs;
            } else if (h == "BOUNDS") {
                section = Section::bounds;
            } else if (h == "ENDATA") {
                section = Section::done;
                break;
            } else if (h == "RANGES") {
                throw ValidationError(fmt::format("mps:{}: RANGES section not supported", line_no));
            } else if (section == Section::objsense && (h == "MAX" || h == "MIN")) {
                lp.sense = h == "MAX" ? ObjectiveSense::maximize : ObjectiveSense::minimize;
            } else {
                throw ValidationError(fmt::format("mps:{}: unknown section '{}'", line_no, h));
            }
            continue;
        }
        switch (section) {
            case Section::objsense:
                if (tok[0] == "MAX" || tok[0] == "MAXIMIZE") lp.sense = ObjectiveSense::maximize;
                else if (tok[0] == "MIN" || tok[0] == "MINIMIZE") lp.sense = ObjectiveSense::minimize;
                else throw ValidationError(fmt::format("mps:{}: bad OBJSENSE '{}'", line_no, tok[0]));
                break;
            case Section::rows: {
                if (tok.size() < 2) throw ValidationError(fmt::format("mps:{}: bad ROWS line", line_no));
                const std::string& kind = tok[0];
                if (kind == "N") {
                    if (objective_row.empty()) objective_row = tok[1];
                    else ignored_free_rows[tok[1]] = true;
                    break;
                }
                RowSense s = kind == "L" ? RowSense::less_equal
                             : kind == "G" ? RowSense::greater_equal
                             : kind == "E" ? RowSense::equal
                                           : throw ValidationError(fmt::format("mps:{}: bad row type '{}'", line_no, kind));
                row_index[tok[1]] = static_cast<int>(row_names.size());
                row_names.push_back(tok[1]);
                row_senses.push_back(s);
                row_rhs.push_back(0.0);
                row_coeffs.emplace_back();
                break;
            }
            case Section::columns: {
                if (tok.size() < 3 || tok.size() % 2 == 0) {
                    if (tok.size() >= 2 && tok[1] == "'MARKER'") {
                        throw ValidationError(fmt::format("mps:{}: integer markers not supported", line_no));
                    }
                    throw ValidationError(fmt::format("mps:{}: bad COLUMNS line", line_no));
                }
                int j = lp.find_variable(tok[0]);
                if (j < 0) {
                    j = lp.add_variable(tok[0], 0.0, kInf, 0.0);
                    lower_set.push_back(false);
                }
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    double a = parse_num(tok[k + 1], line_no);
                    if (tok[k] == objective_row) {
                        lp.variable(j).objective += a;
                    } else if (auto it = row_index.find(tok[k]); it != row_index.end()) {
                        row_coeffs[it->second].emplace_back(j, a);
                    } else if (!ignored_free_rows.count(tok[k])) {
                        throw ValidationError(fmt::format("mps:{}: unknown row '{}'", line_no, tok[k]));
                    }
                }
                break;
            }
            case Section::rhs: {
                // Optional set name in front of (row, value) pairs.
                std::size_t k = tok.size() % 2 == 1 ? 1 : 0;
                for (; k + 1 < tok.size(); k += 2) {
                    double v = parse_num(tok[k + 1], line_no);
                    if (tok[k] == objective_row) {
                        lp.objective_offset = -v;
                    } else if (auto it = row_index.find(tok[k]); it != row_index.end()) {
                        row_rhs[it->second] = v;
                    } else if (!ignored_free_rows.count(tok[k])) {
                        throw ValidationError(fmt::format("mps:{}: unknown row '{}'", line_no, tok[k]));
                    }
                }
                break;
            }
            case Section::bounds: {
                if (tok.size() < 3) throw ValidationError(fmt::format("mps:{}: bad BOUNDS line", line_no));
                const std::string& type = tok[0];
                int j = lp.find_variable(tok[2]);
                if (j < 0) throw ValidationError(fmt::format("mps:{}: unknown column '{}'", line_no, tok[2]));
                Variable& v = lp.variable(j);
                auto value = [&] {
                    if (tok.size() < 4) throw ValidationError(fmt::format("mps:{}: bound value missing", line_no));
                    return parse_num(tok[3], line_no);
                };
                if (type == "UP") {
                    v.upper = value();
                    if (v.upper < 0.0 && !lower_set[j] && v.lower == 0.0) v.lower = -kInf;
                } else if (type == "LO") {
                    v.lower = value();
                    lower_set[j] = true;
                } else if (type == "FX") {
                    v.lower = v.upper = value();
                    lower_set[j] = true;
                } else if (type == "FR") {
                    v.lower = -kInf;
                    v.upper = kInf;
                } else if (type == "MI") {
                    v.lower = -kInf;
                    lower_set[j] = true;
                } else if (type == "PL") {
                    v.upper = kInf;
                } else {
                    throw ValidationError(fmt::format("mps:{}: unsupported bound type '{}'", line_no, type));
                }
                break;
            }
            default:
                break;
        }
    }
    if (section != Section::done) throw ValidationError("mps: missing ENDATA");
    for (std::size_t i = 0; i < row_names.size(); ++i) {
        lp.add_constraint(row_names[i], std::move(row_coeffs[i]), row_senses[i], row_rhs[i]);
    }
    lp.validate();
    return lp;
}

LinearProgram read_mps(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_mps(buf.str());
}

}  // namespace ldes
