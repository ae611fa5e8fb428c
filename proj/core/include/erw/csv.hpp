#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "erw/ensemble.hpp"

namespace erw::csv {

inline constexpr const char* kHeader = "t,stat,mean,ci_lo,ci_hi,replicas";

/// Serialises rows under the fixed header. Doubles are printed with 17
/// significant digits, so equal statistics give byte-equal files.
std::string to_string(const std::vector<EnsembleStats::Row>& rows);

/// Strict parser for the same schema; throws std::runtime_error with a
/// line number on any malformed input.
std::vector<EnsembleStats::Row> parse(std::istream& in);
std::vector<EnsembleStats::Row> parse_string(const std::string& text);

}  // namespace erw::csv
