#include "erw/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace erw::csv {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string to_string(const std::vector<EnsembleStats::Row>& rows) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.t);
    out += ',';
    out += row.stat;
    out += ',';
    append_double(out, row.mean);
    out += ',';
    append_double(out, row.ci_lo);
    out += ',';
    append_double(out, row.ci_hi);
    out += ',';
    out += std::to_string(row.replicas);
    out += '\n';
  }
  return out;
}

std::vector<EnsembleStats::Row> parse(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw std::runtime_error("csv: missing or wrong header");
  std::vector<EnsembleStats::Row> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    EnsembleStats::Row row;
    char stat[128];
    uint64_t t = 0, replicas = 0;
    const int got =
        std::sscanf(line.c_str(), "%" SCNu64 ",%127[^,],%lg,%lg,%lg,%" SCNu64,
                    &t, stat, &row.mean, &row.ci_lo, &row.ci_hi, &replicas);
    if (got != 6)
      throw std::runtime_error("csv: malformed row at line " +
                               std::to_string(lineno));
    row.t = t;
    row.stat = stat;
    row.replicas = replicas;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EnsembleStats::Row> parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

}  // namespace erw::csv
