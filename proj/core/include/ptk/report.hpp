#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ptk/classify.hpp"
#include "ptk/stochastic.hpp"

namespace ptk::report {

// floats at 6 significant digits; infinities render as "inf"
std::string format_number(double v);

struct ReportDoc {
  nlohmann::json header;  // resolved config, version, seed, threads, timestamps
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// "# key: value" header lines followed by an RFC-quoted CSV body
std::string render_csv(const ReportDoc& doc);
// one structured record
std::string render_json(const ReportDoc& doc);

nlohmann::json to_json(const DecayProfile& p);
nlohmann::json to_json(const potentials::ClassReport& r);
nlohmann::json to_json(const stochastic::MCEstimate& e);

ReportDoc profile_doc(const DecayProfile& p);
ReportDoc class_doc(const potentials::ClassReport& r);

}  // namespace ptk::report
