#pragma once

#include <string>

#include <json.hpp>

#include "ptk/kernels.hpp"
#include "ptk/measure.hpp"

namespace ptk::config {

// JSON schema documented in the README; round trips are exact for all fields.
nlohmann::json to_json(const geometry::Domain& d);
geometry::Domain domain_from_json(const nlohmann::json& j);

nlohmann::json to_json(const geometry::MeasureSpec& m);
geometry::MeasureSpec measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const kernels::ProcessSpec& s);
kernels::ProcessSpec process_from_json(const nlohmann::json& j);

// compact command-line forms:
//   process: brownian:d=3 | stable:alpha=1.5,d=1 | relativistic:alpha=1,m=1,d=3
//   domain:  ball(0,1) | interval(a,b) | strip:w=1,d=2 | horn:rate=1,d=2 | full:d=3
//   measure: lebesgue:<domain> | sphere:r=1,d=3 | density:exp,rate=1:<domain>
kernels::ProcessSpec parse_process(const std::string& text);
geometry::Domain parse_domain(const std::string& text, int default_dim = 0);
geometry::MeasureSpec parse_measure(const std::string& text, int default_dim = 0);

}  // namespace ptk::config
