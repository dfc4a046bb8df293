#include "lsnw/io.hpp"
#include "lsnw/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lsnw {

namespace {

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    cells.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

std::optional<double> parse_number(const std::string& cell)
{
  if (cell.empty())
    return std::nullopt;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+')
    ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    return std::nullopt;
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                std::vector<int>& line_numbers)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    rows.push_back(split_csv(line));
    line_numbers.push_back(lineno);
  }
  return rows;
}

} // namespace

ColumnSelector ColumnSelector::parse(const std::string& text)
{
  ColumnSelector sel;
  int idx = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), idx);
  if (!text.empty() && ec == std::errc() && ptr == text.data() + text.size() &&
      idx >= 0)
    sel.index = idx;
  else
    sel.name = text;
  return sel;
}

Series load_series_csv(const std::string& path, const ColumnSelector& column)
{
  std::vector<int> lines;
  const auto rows = read_rows(path, lines);
  if (rows.empty())
    throw InputError("'" + path + "' is empty");

  const std::size_t width = rows.front().size();
  const bool first_is_numeric = [&] {
    for (const auto& c : rows.front())
      if (!parse_number(c))
        return false;
    return true;
  }();

  std::size_t col = 0;
  if (column.name) {
    if (first_is_numeric)
      throw InputError("column '" + *column.name + "' requested but '" + path +
                       "' has no header");
    const auto& hdr = rows.front();
    const auto it = std::find(hdr.begin(), hdr.end(), *column.name);
    if (it == hdr.end())
      throw InputError("no column named '" + *column.name + "' in '" + path + "'");
    col = static_cast<std::size_t>(it - hdr.begin());
  } else if (column.index) {
    col = static_cast<std::size_t>(*column.index);
    if (col >= width)
      throw InputError("column index " + std::to_string(col) + " out of range");
  } else if (width > 1) {
    throw InputError("'" + path + "' has " + std::to_string(width) +
                     " columns; select one with --column");
  }

  std::size_t start = 0;
  if (col < rows.front().size() && !parse_number(rows.front()[col]))
    start = 1;

  std::vector<double> values;
  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string cell = col < row.size() ? row[col] : std::string();
    const auto v = parse_number(cell);
    if (!v)
      throw InputError("non-numeric value '" + cell + "' at row " +
                       std::to_string(lines[r]) + " of '" + path + "'");
    values.push_back(*v);
  }
  if (values.size() < 2)
    throw InputError("'" + path + "' needs at least 2 numeric rows");
  std::string name = start == 1 ? rows.front()[col] : path;
  return Series(Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()),
                std::move(name));
}

std::string format_double(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_text(const std::string& path, const std::string& contents)
{
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out)
    throw InputError("failed writing '" + path + "'");
}

std::string series_csv(const Series& s)
{
  std::string out = "y\n";
  for (Eigen::Index i = 0; i < s.size(); ++i)
    out += format_double(s.values(i), 17) + "\n";
  return out;
}

std::string convergence_csv(const ConvergenceReport& report)
{
  std::string out = "T,u,h,mean_w1,std_w1,L,mc_runs\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.T) + "," + format_double(r.u) + "," +
           format_double(r.h) + "," + format_double(r.mean_w1) + "," +
           format_double(r.std_w1) + "," + std::to_string(r.L) + "," +
           std::to_string(r.mc_runs) + "\n";
  }
  return out;
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path)
{
  write_text(path, convergence_csv(report));
}

ConvergenceReport read_convergence_csv(const std::string& path)
{
  std::vector<int> lines;
  const auto rows = read_rows(path, lines);
  const std::vector<std::string> header{ "T",      "u", "h",      "mean_w1",
                                         "std_w1", "L", "mc_runs" };
  if (rows.empty() || rows.front() != header)
    throw InputError("'" + path + "' is not a convergence report");
  ConvergenceReport rep;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw InputError("row " + std::to_string(lines[r]) + " has " +
                       std::to_string(row.size()) + " fields");
    std::array<double, 7> v{};
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto x = parse_number(row[c]);
      if (!x)
        throw InputError("non-numeric value '" + row[c] + "' at row " +
                         std::to_string(lines[r]));
      v[c] = *x;
    }
    rep.rows.push_back({ static_cast<int>(v[0]), v[1], v[2], v[3], v[4],
                         static_cast<int>(v[5]), static_cast<int>(v[6]) });
  }
  return rep;
}

Json to_json(const ConvergenceRow& row)
{
  return Json{ { "T", row.T },         { "u", row.u },
               { "h", row.h },         { "mean_w1", row.mean_w1 },
               { "std_w1", row.std_w1 }, { "L", row.L },
               { "mc_runs", row.mc_runs } };
}

std::string report_json(const Json& meta, const Json& rows)
{
  Json doc;
  doc["meta"] = meta;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

} // namespace lsnw
