#pragma once

#include <json.hpp>
#include <map>
#include <string>

#include "hwsim/qkd.hpp"
#include "hwsim/security.hpp"

namespace hwsim::report {

using nlohmann::json;

/// Nearest small fraction p/q with q <= 256, or "" when none is within 1e-9.
std::string nearest_rational(double x);

/// Probability node: the raw value, a 12-digit decimal rendering, and the
/// matching small fraction when one exists.
json prob(double value);

json dist_to_json(const std::map<int, double>& dist);
json dist_counts_to_json(const std::map<int, std::int64_t>& counts, std::int64_t total);

json error_table_to_json(const qkd::ErrorTable& t);
json test_report_to_json(const security::TestReport& r);
json session_summary_to_json(const qkd::QkdSession& s);
/// Full per-group transcript dump (the serializable session schema).
json session_transcripts_to_json(const qkd::QkdSession& s);

/// Flatten to CSV rows "section,row,column,value".
std::string to_csv(const json& j);

}  // namespace hwsim::report
