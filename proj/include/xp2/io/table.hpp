// Column-oriented result table with deterministic CSV and JSON output.
// Floats are always rendered with "%.9g" so identical runs produce
// byte-identical files.
#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace xp2::io {

class Cell {
  public:
    Cell(double v) : value_(v) {}
    Cell(int v) : value_(static_cast<long>(v)) {}
    Cell(long v) : value_(v) {}
    Cell(const char* s) : value_(std::string(s)) {}
    Cell(std::string s) : value_(std::move(s)) {}

    bool is_text() const { return std::holds_alternative<std::string>(value_); }

    std::string formatted() const {
        if (const auto* d = std::get_if<double>(&value_)) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.9g", *d);
            return buf;
        }
        if (const auto* i = std::get_if<long>(&value_)) return std::to_string(*i);
        return std::get<std::string>(value_);
    }

  private:
    std::variant<double, long, std::string> value_;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells) {
        if (cells.size() != columns.size())
            throw std::invalid_argument("Table: row width does not match header");
        rows.push_back(std::move(cells));
    }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "");
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i].formatted() << (i + 1 < row.size() ? "," : "");
            os << '\n';
        }
    }

    /// Same samples as the CSV, as a JSON array of objects.
    void write_json(std::ostream& os) const {
        os << "[";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            os << (r == 0 ? "\n" : ",\n") << "  {";
            for (std::size_t i = 0; i < rows[r].size(); ++i) {
                os << (i == 0 ? "" : ", ") << '"' << columns[i] << "\": ";
                if (rows[r][i].is_text())
                    os << '"' << rows[r][i].formatted() << '"';
                else
                    os << rows[r][i].formatted();
            }
            os << "}";
        }
        os << "\n]\n";
    }
};

}  // namespace xp2::io
