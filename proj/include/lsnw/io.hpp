#pragma once

#include "lsnw/harness.hpp"
#include "lsnw/simulate.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lsnw {

using Json = nlohmann::ordered_json;

//! Which CSV column to read: by header name or by 0-based position.
struct ColumnSelector
{
  std::optional<std::string> name;
  std::optional<int> index;

  //! "3" selects by index, anything else by name.
  static ColumnSelector parse(const std::string& text);
};

//! Reads one numeric column; rows in file order become t = 1..T. A first
//! row that does not parse as a number is taken as a header. Errors name the
//! 1-based line of the offending cell.
Series load_series_csv(const std::string& path, const ColumnSelector& column = {});

//! Fixed "%.<digits>g" rendering, identical across platforms.
std::string format_double(double v, int digits = 10);

//! Writes to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& contents);

//! Header "y", one value per line, 17 significant digits.
std::string series_csv(const Series& s);

//! Header "T,u,h,mean_w1,std_w1,L,mc_runs", floats with 10 significant digits.
std::string convergence_csv(const ConvergenceReport& report);
void write_convergence_csv(const ConvergenceReport& report, const std::string& path);
ConvergenceReport read_convergence_csv(const std::string& path);

Json to_json(const ConvergenceRow& row);

//! {"meta": meta, "rows": rows}
std::string report_json(const Json& meta, const Json& rows);

} // namespace lsnw
