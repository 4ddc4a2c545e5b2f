#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "cli.hpp"

namespace fastfpt::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table: row width does not match the header");
  rows.push_back(std::move(row));
}

namespace {

bool same_cell(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    return (std::isnan(*x) && std::isnan(y)) || *x == y;
  }
  return std::get<std::string>(a) == std::get<std::string>(b);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// Splits one CSV record; quoted fields come back with quoted = true.
std::vector<std::pair<std::string, bool>> split_record(const std::string& line) {
  std::vector<std::pair<std::string, bool>> fields;
  std::size_t i = 0;
  for (;;) {
    std::string field;
    bool quoted = false;
    if (i < line.size() && line[i] == '"') {
      quoted = true;
      ++i;
      for (;;) {
        if (i >= line.size()) throw std::invalid_argument("csv: unterminated quoted field");
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field += line[i++];
      }
    } else {
      while (i < line.size() && line[i] != ',') field += line[i++];
    }
    fields.emplace_back(std::move(field), quoted);
    if (i >= line.size()) break;
    if (line[i] != ',') throw std::invalid_argument("csv: expected ',' after field");
    ++i;
  }
  return fields;
}

}  // namespace

bool Table::operator==(const Table& other) const {
  if (command != other.command || columns != other.columns || rows.size() != other.rows.size()) return false;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != other.rows[r].size()) return false;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (!same_cell(rows[r][c], other.rows[r][c])) return false;
    }
  }
  return true;
}

void write_csv(const Table& t, std::ostream& os) {
  os << "# fastfpt v" << kVersion << ' ' << t.command << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (const auto* d = std::get_if<double>(&row[c])) {
        os << format_number(*d);
      } else {
        os << quote(std::get<std::string>(row[c]));
      }
    }
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# fastfpt v", 0) != 0) {
    throw std::invalid_argument("csv: missing '# fastfpt v<version> <command>' header");
  }
  const auto space = line.find(' ', 11);
  if (space == std::string::npos) throw std::invalid_argument("csv: header lacks a command name");
  t.command = line.substr(space + 1);
  if (!std::getline(is, line)) throw std::invalid_argument("csv: missing column line");
  for (auto& [name, quoted] : split_record(line)) t.columns.push_back(name);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (auto& [text, quoted] : split_record(line)) {
      if (quoted) {
        row.emplace_back(text);
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size()) throw std::invalid_argument("csv: bad number '" + text + "'");
      row.emplace_back(v);
    }
    t.add_row(std::move(row));
  }
  return t;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        // JSON has no NaN or infinity; keep them as strings that read back.
        if (std::isfinite(*d)) {
          r.push_back(*d);
        } else {
          r.push_back(nlohmann::json{{"number", format_number(*d)}});
        }
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"fastfpt", kVersion}, {"command", t.command}, {"columns", t.columns}, {"rows", rows}};
}

Table table_from_json(const nlohmann::json& j) {
  Table t;
  try {
    t.command = j.at("command").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& cell : r) {
        if (cell.is_number()) {
          row.emplace_back(cell.get<double>());
        } else if (cell.is_object()) {
          row.emplace_back(std::stod(cell.at("number").get<std::string>()));
        } else {
          row.emplace_back(cell.get<std::string>());
        }
      }
      t.add_row(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("json table: ") + e.what());
  }
  return t;
}

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << to_json(t).dump(2) << '\n';
  } else {
    write_csv(t, os);
  }
}

}  // namespace fastfpt::cli
