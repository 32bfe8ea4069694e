#include "ptk/report.hpp"

#include <cmath>
#include <sstream>

#include "ptk/version.hpp"

namespace ptk::report {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string render_csv(const ReportDoc& doc) {
  std::ostringstream os;
  os << "# ptk " << version_string << "\n";
  for (auto it = doc.header.begin(); it != doc.header.end(); ++it)
    os << "# " << it.key() << ": " << it.value().dump() << "\n";
  for (size_t i = 0; i < doc.columns.size(); ++i)
    os << (i ? "," : "") << csv_quote(doc.columns[i]);
  os << "\n";
  for (const auto& row : doc.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_quote(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string render_json(const ReportDoc& doc) {
  nlohmann::json j;
  j["header"] = doc.header;
  j["header"]["version"] = version_string;
  j["columns"] = doc.columns;
  j["rows"] = doc.rows;
  return j.dump(2) + "\n";
}

nlohmann::json to_json(const DecayProfile& p) {
  nlohmann::json j;
  j["label"] = p.label;
  j["direction"] = p.direction == LimitDirection::TowardZero ? "r->0" : "R->inf";
  j["abscissae"] = p.abscissae;
  nlohmann::json vals = nlohmann::json::array();
  for (double v : p.values) {
    if (std::isinf(v)) vals.push_back("inf");
    else vals.push_back(v);
  }
  j["values"] = vals;
  j["verdict"] = to_string(p.verdict);
  if (p.fit.valid) {
    j["fitted_exponent"] = p.fit.exponent;
    j["fit_r2"] = p.fit.r2;
  }
  j["low_confidence"] = p.low_confidence;
  return j;
}

nlohmann::json to_json(const potentials::ClassReport& r) {
  nlohmann::json j;
  j["measure"] = r.measure_id;
  j["process"] = r.process.name();
  j["p"] = r.p;
  j["transient"] = r.transient;
  j["verdicts"] = {
      {"S_K", to_string(r.verdicts.s_k)},
      {"S_EK", to_string(r.verdicts.s_ek)},
      {"S_D", to_string(r.verdicts.s_d)},
      {"S_D0", to_string(r.verdicts.s_d0)},
      {"K_nu_beta", to_string(r.verdicts.kato_ref)},
      {"K_nu_beta_inf", to_string(r.verdicts.kato_ref_tail)},
      {"zhao_tight", to_string(r.verdicts.zhao)},
      {"chen_tight", to_string(r.verdicts.chen)},
  };
  if (r.analytic_threshold_p) {
    if (std::isinf(*r.analytic_threshold_p)) j["analytic_threshold"] = "inf";
    else j["analytic_threshold"] = *r.analytic_threshold_p;
  }
  j["profiles"] = {
      {"local_ref", to_json(r.local_ref)},
      {"tail_ref", to_json(r.tail_ref)},
      {"sk_ladder", to_json(r.sk_ladder)},
      {"zhao_tail", to_json(r.zhao_tail)},
  };
  j["green_bound_sup"] =
      std::isinf(r.green_bound_sup) ? nlohmann::json("inf") : nlohmann::json(r.green_bound_sup);
  j["warnings"] = r.warnings;
  if (!r.chen_note.empty()) j["chen_note"] = r.chen_note;
  return j;
}

nlohmann::json to_json(const stochastic::MCEstimate& e) {
  nlohmann::json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n"] = e.n;
  j["z"] = e.z;
  j["bias_note"] = e.bias_note;
  j["censored"] = e.censored;
  return j;
}

ReportDoc profile_doc(const DecayProfile& p) {
  ReportDoc doc;
  doc.columns = {"abscissa", "value", "verdict"};
  for (size_t i = 0; i < p.abscissae.size(); ++i)
    doc.rows.push_back({format_number(p.abscissae[i]), format_number(p.values[i]),
                        i + 1 == p.abscissae.size() ? to_string(p.verdict) : ""});
  if (p.abscissae.empty()) doc.rows.push_back({"", "", to_string(p.verdict)});
  return doc;
}

ReportDoc class_doc(const potentials::ClassReport& r) {
  ReportDoc doc;
  doc.columns = {"class", "verdict", "detail"};
  auto add = [&](const char* name, Verdict v, std::string detail = "") {
    doc.rows.push_back({name, to_string(v), std::move(detail)});
  };
  add("S_K", r.verdicts.s_k);
  add("S_EK", r.verdicts.s_ek);
  add("S_D", r.verdicts.s_d);
  add("S_D0", r.verdicts.s_d0,
      "sup R^p nu = " + format_number(r.green_bound_sup));
  add("K_nu_beta", r.verdicts.kato_ref,
      r.local_ref.fit.valid
          ? "fitted exponent " + format_number(r.local_ref.fit.exponent)
          : "");
  add("K_nu_beta_inf", r.verdicts.kato_ref_tail);
  add("zhao_tight", r.verdicts.zhao);
  add("chen_tight", r.verdicts.chen, r.chen_note);
  for (const auto& w : r.warnings) doc.rows.push_back({"warning", "", w});
  return doc;
}

}  // namespace ptk::report
