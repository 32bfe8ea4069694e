#include "ptk/config_io.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ptk::config {

using geometry::Domain;
using geometry::DomainKind;
using geometry::HornProfile;
using geometry::MeasureKind;
using geometry::MeasureSpec;
using geometry::RadialDensity;
using kernels::ProcessKind;
using kernels::ProcessSpec;
using nlohmann::json;

json to_json(const Domain& d) {
  json j;
  j["d"] = d.dimension();
  switch (d.kind()) {
    case DomainKind::FullSpace:
      j["kind"] = "full";
      break;
    case DomainKind::Ball:
      j["kind"] = "ball";
      j["center"] = d.center();
      j["radius"] = d.radius();
      break;
    case DomainKind::Box:
      j["kind"] = "box";
      j["lo"] = d.lo();
      j["hi"] = d.hi();
      break;
    case DomainKind::Strip:
      j["kind"] = "strip";
      j["axis"] = d.axis();
      j["width"] = d.width();
      break;
    case DomainKind::Horn:
      j["kind"] = "horn";
      j["profile"] = {{"family", d.profile().family == HornProfile::Family::Exp
                                     ? "exp"
                                     : "power"},
                      {"rate", d.profile().rate}};
      j["x1_min"] = d.horn_x1_min();
      break;
    case DomainKind::Union:
    case DomainKind::Intersection: {
      j["kind"] = d.kind() == DomainKind::Union ? "union" : "intersection";
      json parts = json::array();
      for (const auto& c : d.children()) parts.push_back(to_json(c));
      j["parts"] = parts;
      break;
    }
  }
  if (!d.regular_hint()) j["regular"] = false;
  return j;
}

Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.value("d", 1);
  Domain out = [&]() -> Domain {
    if (kind == "full") return Domain::full_space(d);
    if (kind == "ball")
      return Domain::ball(j.at("center").get<std::vector<double>>(),
                          j.at("radius").get<double>());
    if (kind == "box")
      return Domain::box(j.at("lo").get<std::vector<double>>(),
                         j.at("hi").get<std::vector<double>>());
    if (kind == "strip")
      return Domain::strip(d, j.at("width").get<double>(), j.value("axis", -1));
    if (kind == "horn") {
      HornProfile prof;
      const auto& pj = j.at("profile");
      prof.family = pj.at("family").get<std::string>() == "power"
                        ? HornProfile::Family::Power
                        : HornProfile::Family::Exp;
      prof.rate = pj.at("rate").get<double>();
      return Domain::horn(d, prof, j.value("x1_min", 0.0));
    }
    if (kind == "union" || kind == "intersection") {
      std::vector<Domain> parts;
      for (const auto& pj : j.at("parts")) parts.push_back(domain_from_json(pj));
      return kind == "union" ? Domain::union_of(std::move(parts))
                             : Domain::intersection_of(std::move(parts));
    }
    throw std::invalid_argument("domain_from_json: unknown kind '" + kind + "'");
  }();
  if (j.contains("regular")) out.set_regular_hint(j["regular"].get<bool>());
  return out;
}

json to_json(const MeasureSpec& m) {
  json j;
  switch (m.kind()) {
    case MeasureKind::Lebesgue:
      j["kind"] = "lebesgue";
      j["domain"] = to_json(m.domain());
      break;
    case MeasureKind::Density: {
      j["kind"] = "density";
      j["domain"] = to_json(m.domain());
      const auto& g = m.density_fn();
      const char* fam = g.family == RadialDensity::Family::Const ? "const"
                        : g.family == RadialDensity::Family::ExpRadial ? "exp_radial"
                                                                       : "gaussian";
      j["density"] = {{"family", fam}, {"scale", g.scale}, {"rate", g.rate}};
      if (!g.center.empty()) j["density"]["center"] = g.center;
      break;
    }
    case MeasureKind::SphereSurface:
      j["kind"] = "sphere_surface";
      j["center"] = m.center();
      j["radius"] = m.radius();
      break;
    case MeasureKind::Atoms:
      j["kind"] = "atoms";
      j["points"] = m.points();
      j["masses"] = m.masses();
      break;
    case MeasureKind::Mixture: {
      j["kind"] = "mixture";
      j["weights"] = m.weights();
      json parts = json::array();
      for (const auto& p : m.parts()) parts.push_back(to_json(p));
      j["parts"] = parts;
      break;
    }
  }
  if (m.total_mass_hint) j["total_mass_hint"] = *m.total_mass_hint;
  return j;
}

MeasureSpec measure_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  MeasureSpec out = [&]() -> MeasureSpec {
    if (kind == "lebesgue") return MeasureSpec::lebesgue(domain_from_json(j.at("domain")));
    if (kind == "density") {
      RadialDensity g;
      const auto& gj = j.at("density");
      const std::string fam = gj.at("family").get<std::string>();
      g.family = fam == "const"        ? RadialDensity::Family::Const
                 : fam == "exp_radial" ? RadialDensity::Family::ExpRadial
                                       : RadialDensity::Family::Gaussian;
      g.scale = gj.value("scale", 1.0);
      g.rate = gj.value("rate", 1.0);
      if (gj.contains("center")) g.center = gj["center"].get<std::vector<double>>();
      return MeasureSpec::density(domain_from_json(j.at("domain")), g);
    }
    if (kind == "sphere_surface")
      return MeasureSpec::sphere_surface(j.at("center").get<std::vector<double>>(),
                                         j.at("radius").get<double>());
    if (kind == "atoms")
      return MeasureSpec::atoms(j.at("points").get<std::vector<std::vector<double>>>(),
                                j.at("masses").get<std::vector<double>>());
    if (kind == "mixture") {
      std::vector<MeasureSpec> parts;
      for (const auto& pj : j.at("parts")) parts.push_back(measure_from_json(pj));
      return MeasureSpec::mixture(j.at("weights").get<std::vector<double>>(),
                                  std::move(parts));
    }
    throw std::invalid_argument("measure_from_json: unknown kind '" + kind + "'");
  }();
  if (j.contains("total_mass_hint"))
    out.total_mass_hint = j["total_mass_hint"].get<double>();
  return out;
}

json to_json(const ProcessSpec& s) {
  json j;
  j["d"] = s.dim;
  switch (s.kind) {
    case ProcessKind::Brownian:
      j["kind"] = "brownian";
      break;
    case ProcessKind::Stable:
      j["kind"] = "stable";
      j["alpha"] = s.alpha;
      break;
    case ProcessKind::Relativistic:
      j["kind"] = "relativistic";
      j["alpha"] = s.alpha;
      j["m"] = s.mass;
      break;
  }
  return j;
}

ProcessSpec process_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.at("d").get<int>();
  if (kind == "brownian") return ProcessSpec::brownian(d);
  if (kind == "stable") return ProcessSpec::stable(j.at("alpha").get<double>(), d);
  if (kind == "relativistic")
    return ProcessSpec::relativistic(j.at("alpha").get<double>(), j.at("m").get<double>(),
                                     d);
  throw std::invalid_argument("process_from_json: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// compact text forms

namespace {

std::map<std::string, double> parse_kv(const std::string& s) {
  std::map<std::string, double> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_args(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

ProcessSpec parse_process(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  auto kv = colon == std::string::npos ? std::map<std::string, double>{}
                                       : parse_kv(text.substr(colon + 1));
  const int d = static_cast<int>(kv.count("d") ? kv["d"] : 1);
  if (kind == "brownian") return ProcessSpec::brownian(d);
  if (kind == "stable") return ProcessSpec::stable(kv.at("alpha"), d);
  if (kind == "relativistic") return ProcessSpec::relativistic(kv.at("alpha"), kv.at("m"), d);
  throw std::invalid_argument("parse_process: unknown kind '" + kind + "'");
}

Domain parse_domain(const std::string& text, int default_dim) {
  const auto paren = text.find('(');
  if (paren != std::string::npos && text.back() == ')') {
    const std::string kind = text.substr(0, paren);
    auto args = parse_args(text.substr(paren + 1, text.size() - paren - 2));
    if (kind == "ball") {
      // ball(c, r): center (c, 0, ..., 0)
      const int d = default_dim > 0 ? default_dim : 1;
      std::vector<double> c(d, 0.0);
      double r = 1.0;
      if (args.size() == 2) {
        c[0] = args[0];
        r = args[1];
      } else if (args.size() == 1) {
        r = args[0];
      } else if (args.size() == static_cast<size_t>(d) + 1) {
        for (int i = 0; i < d; ++i) c[i] = args[i];
        r = args.back();
      }
      return Domain::ball(c, r);
    }
    if (kind == "interval") return Domain::box({args.at(0)}, {args.at(1)});
    if (kind == "square")
      return Domain::box({args.at(0), args.at(0)}, {args.at(1), args.at(1)});
    if (kind == "strip") {
      const int d = default_dim > 0 ? default_dim : 2;
      return Domain::strip(d, args.at(0));
    }
    if (kind == "horn") {
      const int d = default_dim > 0 ? default_dim : 2;
      HornProfile prof;
      prof.rate = args.empty() ? 1.0 : args[0];
      return Domain::horn(d, prof);
    }
    if (kind == "full") return Domain::full_space(default_dim > 0 ? default_dim : 1);
    throw std::invalid_argument("parse_domain: unknown kind '" + kind + "'");
  }
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  auto kv = colon == std::string::npos ? std::map<std::string, double>{}
                                       : parse_kv(text.substr(colon + 1));
  const int d = static_cast<int>(kv.count("d") ? kv["d"]
                                               : (default_dim > 0 ? default_dim : 1));
  if (kind == "full") return Domain::full_space(d);
  if (kind == "strip")
    return Domain::strip(d, kv.count("w") ? kv["w"] : kv.at("width"),
                         kv.count("axis") ? static_cast<int>(kv["axis"]) : -1);
  if (kind == "horn") {
    HornProfile prof;
    prof.rate = kv.count("rate") ? kv["rate"] : 1.0;
    return Domain::horn(d, prof, kv.count("x1_min") ? kv["x1_min"] : 0.0);
  }
  if (kind == "ball") {
    std::vector<double> c(d, 0.0);
    if (kv.count("c")) c[0] = kv["c"];
    return Domain::ball(c, kv.count("r") ? kv["r"] : 1.0);
  }
  if (kind == "interval") return Domain::box({kv.at("a")}, {kv.at("b")});
  throw std::invalid_argument("parse_domain: cannot parse '" + text + "'");
}

MeasureSpec parse_measure(const std::string& text, int default_dim) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "lebesgue") {
    if (colon == std::string::npos)
      return MeasureSpec::lebesgue(Domain::full_space(default_dim > 0 ? default_dim : 1));
    return MeasureSpec::lebesgue(parse_domain(text.substr(colon + 1), default_dim));
  }
  if (kind == "sphere") {
    auto kv = colon == std::string::npos ? std::map<std::string, double>{}
                                         : parse_kv(text.substr(colon + 1));
    const int d = static_cast<int>(kv.count("d") ? kv["d"]
                                                 : (default_dim > 0 ? default_dim : 3));
    return MeasureSpec::sphere_surface(std::vector<double>(d, 0.0),
                                       kv.count("r") ? kv["r"] : 1.0);
  }
  if (kind == "density") {
    // density:exp_radial,rate=1:<domain>
    const auto second = text.find(':', colon + 1);
    const std::string spec = text.substr(colon + 1, second - colon - 1);
    RadialDensity g;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "exp" || item == "exp_radial") g.family = RadialDensity::Family::ExpRadial;
      else if (item == "gaussian") g.family = RadialDensity::Family::Gaussian;
      else if (item == "const") g.family = RadialDensity::Family::Const;
      else {
        const auto eq = item.find('=');
        if (eq != std::string::npos) {
          const std::string key = item.substr(0, eq);
          const double val = std::stod(item.substr(eq + 1));
          if (key == "rate") g.rate = val;
          if (key == "scale") g.scale = val;
        }
      }
    }
    const Domain dom = second == std::string::npos
                           ? Domain::full_space(default_dim > 0 ? default_dim : 1)
                           : parse_domain(text.substr(second + 1), default_dim);
    return MeasureSpec::density(dom, g);
  }
  throw std::invalid_argument("parse_measure: cannot parse '" + text + "'");
}

}  // namespace ptk::config
