#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shnw/errors.hpp"
#include "shnw/io.hpp"

namespace shnw {
namespace {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

double parse_number(std::string_view s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw FormatError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::string header() {
  std::string h;
  for (const auto& [name, member] : kRecordColumns) {
    h += name;
    h += ',';
  }
  return h + "status";
}

}  // namespace

void write_records(std::ostream& out, const std::vector<DiagnosticsRecord>& rows) {
  out << header() << '\n';
  for (const auto& r : rows) {
    for (const auto& [name, member] : kRecordColumns) out << format_number(r.*member) << ',';
    out << to_string(r.status) << '\n';
  }
}

std::vector<DiagnosticsRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header()) throw FormatError("unexpected CSV header: " + line);
  std::vector<DiagnosticsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cells.push_back(rest);
    if (cells.size() != kRecordColumns.size() + 1)
      throw FormatError("line " + std::to_string(lineno) + ": expected " +
                        std::to_string(kRecordColumns.size() + 1) + " cells");
    DiagnosticsRecord r;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i)
      r.*(kRecordColumns[i].second) = parse_number(cells[i], lineno);
    try {
      r.status = parse_status(cells.back());
    } catch (const std::exception&) {
      throw FormatError("line " + std::to_string(lineno) + ": bad status '" +
                        std::string(cells.back()) + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_records(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string());
  write_records(out, rows);
}

std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_records(in);
}

}  // namespace shnw
