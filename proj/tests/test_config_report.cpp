#include <doctest.h>

#include <cmath>

#include "ptk/config_io.hpp"
#include "ptk/report.hpp"

using namespace ptk;
using nlohmann::json;

TEST_CASE("domain and measure configs round trip bit-exactly") {
  auto horn = geometry::Domain::horn(
      2, geometry::HornProfile{geometry::HornProfile::Family::Exp, 1.25}, 0.5);
  auto dom = geometry::Domain::intersection_of(
      {geometry::Domain::strip(2, 1.0), geometry::Domain::ball({0.1, -0.2}, 7.5)});
  auto mu = geometry::MeasureSpec::mixture(
      {0.5, 1.5},
      {geometry::MeasureSpec::lebesgue(dom),
       geometry::MeasureSpec::atoms({{0.25, 0.3}, {1.0, -1.0}}, {2.0, 0.125})});

  for (const auto& j :
       {config::to_json(horn), config::to_json(dom)}) {
    const auto back = config::to_json(config::domain_from_json(j));
    CHECK(j.dump() == back.dump());
  }
  const auto jm = config::to_json(mu);
  CHECK(jm.dump() == config::to_json(config::measure_from_json(jm)).dump());

  auto spec = kernels::ProcessSpec::relativistic(1.5, 0.75, 3);
  const auto js = config::to_json(spec);
  CHECK(js.dump() == config::to_json(config::process_from_json(js)).dump());

  // serialize(parse(text)) idempotent on the textual form
  const std::string text = jm.dump();
  CHECK(json::parse(text).dump() == text);
}

TEST_CASE("command line mini grammar") {
  auto bm = config::parse_process("brownian:d=3");
  CHECK(bm.kind == kernels::ProcessKind::Brownian);
  CHECK(bm.dim == 3);
  auto st = config::parse_process("stable:alpha=1.5,d=1");
  CHECK(st.alpha == doctest::Approx(1.5));
  auto rel = config::parse_process("relativistic:alpha=1,m=1,d=3");
  CHECK(rel.mass == doctest::Approx(1.0));

  auto strip = config::parse_domain("strip:w=1,d=2");
  CHECK(strip.kind() == geometry::DomainKind::Strip);
  CHECK(strip.width() == doctest::Approx(1.0));
  CHECK(strip.dimension() == 2);

  auto mu = config::parse_measure("lebesgue:ball(0,1)", 3);
  CHECK(mu.kind() == geometry::MeasureKind::Lebesgue);
  CHECK(mu.domain().kind() == geometry::DomainKind::Ball);
  CHECK(mu.domain().dimension() == 3);
  CHECK(mu.domain().radius() == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)config::parse_process("weird:d=1"), std::invalid_argument);
}

TEST_CASE("number formatting and csv quoting") {
  CHECK(report::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(report::format_number(0.333333333333) == "0.333333");
  CHECK(report::format_number(123456789.0) == "1.23457e+08");

  report::ReportDoc doc;
  doc.columns = {"a", "with,comma"};
  doc.rows.push_back({"plain", "say \"hi\""});
  const auto text = report::render_csv(doc);
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
}

TEST_CASE("profile reports keep infinities and verdicts") {
  DecayProfile p;
  p.abscissae = {1.0, 2.0};
  p.values = {std::numeric_limits<double>::infinity(), 3.0};
  p.verdict = Verdict::Out;
  auto doc = report::profile_doc(p);
  const auto text = report::render_csv(doc);
  CHECK(text.find("inf") != std::string::npos);
  CHECK(text.find("OUT") != std::string::npos);

  // empty profile renders header plus a verdict row
  DecayProfile e;
  e.verdict = Verdict::Inconclusive;
  auto ed = report::profile_doc(e);
  CHECK(ed.rows.size() == 1);

  // record round trip: parse(render(x)) keeps the document
  auto j = report::to_json(p);
  CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("report bodies are deterministic") {
  auto run = [] {
    auto prof = geometry::b0_profile(geometry::Domain::strip(2, 1.0), {10, 20});
    return report::render_csv(report::profile_doc(prof));
  };
  CHECK(run() == run());
}
