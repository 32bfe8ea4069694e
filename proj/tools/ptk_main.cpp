// ptk: command line front end for the potential-theory toolkit.
//
// Exit codes: 0 pass, 1 failed assertion (--assert-in) or selftest failure,
// 2 usage/config error, 3 numerically inconclusive.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ptk/classify.hpp"
#include "ptk/config_io.hpp"
#include "ptk/report.hpp"
#include "ptk/spectral.hpp"
#include "ptk/stochastic.hpp"
#include "ptk/version.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  int threads = 1;
  bool assert_in = false;
  std::string out_dir = ".";
  std::string format = "csv";
};

int exit_code_for(const std::vector<ptk::Verdict>& verdicts, bool assert_in) {
  bool any_out = false, any_inc = false;
  for (auto v : verdicts) {
    any_out |= v == ptk::Verdict::Out;
    any_inc |= v == ptk::Verdict::Inconclusive;
  }
  if (any_inc && !any_out) return 3;
  if (any_out && assert_in) return 1;
  return 0;
}

void write_report(const GlobalOpts& g, const std::string& name,
                  ptk::report::ReportDoc doc, const json& record) {
  doc.header["seed"] = g.seed;
  doc.header["threads"] = g.threads;
  doc.header["generated_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  std::filesystem::create_directories(g.out_dir);
  if (g.format == "csv" || g.format == "both") {
    std::ofstream os(g.out_dir + "/" + name + ".csv");
    os << ptk::report::render_csv(doc);
  }
  if (g.format == "json" || g.format == "both") {
    json j = record;
    j["header"] = doc.header;
    j["header"]["version"] = ptk::version_string;
    std::ofstream os(g.out_dir + "/" + name + ".json");
    os << j.dump(2) << "\n";
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

int run_classify(const GlobalOpts& g, const std::string& process,
                 const std::string& measure, double p, bool no_chen) {
  auto spec = ptk::config::parse_process(process);
  auto mu = ptk::config::parse_measure(measure, spec.dim);
  ptk::potentials::ClassifyOptions opts;
  opts.run_chen = !no_chen;
  auto rep = ptk::potentials::classify(spec, p, mu, opts);
  rep.measure_id = measure;

  auto doc = ptk::report::class_doc(rep);
  doc.header["command"] = "classify";
  doc.header["process"] = ptk::config::to_json(spec);
  doc.header["measure"] = ptk::config::to_json(mu);
  doc.header["p"] = p;
  write_report(g, "classify", doc, ptk::report::to_json(rep));

  std::cout << "S_K " << ptk::to_string(rep.verdicts.s_k) << " | zhao "
            << ptk::to_string(rep.verdicts.zhao) << " | chen "
            << ptk::to_string(rep.verdicts.chen) << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  return exit_code_for({rep.verdicts.s_k}, g.assert_in);
}

int run_potential(const GlobalOpts& g, const std::string& process,
                  const std::string& measure, double p, const std::string& x_text,
                  double order, const std::string& kernel_kind) {
  auto spec = ptk::config::parse_process(process);
  auto mu = ptk::config::parse_measure(measure, spec.dim);
  auto x = parse_list(x_text);
  if (static_cast<int>(x.size()) != spec.dim) {
    std::cerr << "potential: --x has wrong dimension\n";
    return 2;
  }
  ptk::potentials::RadialKernel k;
  if (kernel_kind == "reference")
    k = ptk::potentials::reference_kernel(spec.dim, spec.beta_scale());
  else
    k = ptk::potentials::resolvent_handle(spec, order);
  auto v = ptk::potentials::p_potential(k, p, mu, x);

  ptk::report::ReportDoc doc;
  doc.columns = {"kernel", "p", "value", "error", "status"};
  doc.rows.push_back({k.name, ptk::report::format_number(p),
                      ptk::report::format_number(v.value),
                      ptk::report::format_number(v.error),
                      v.status == ptk::num::QuadStatus::Converged ? "ok"
                      : v.status == ptk::num::QuadStatus::Divergent ? "divergent"
                                                                    : "inconclusive"});
  doc.header["command"] = "potential";
  doc.header["process"] = ptk::config::to_json(spec);
  doc.header["measure"] = ptk::config::to_json(mu);
  doc.header["x"] = x;
  doc.header["order"] = order;
  json rec;
  rec["value"] = std::isinf(v.value) ? json("inf") : json(v.value);
  rec["error"] = v.error;
  write_report(g, "potential", doc, rec);
  std::cout << k.name << "^" << p << " potential = "
            << ptk::report::format_number(v.value) << "\n";
  return v.ok() ? 0 : 3;
}

int run_b0(const GlobalOpts& g, const std::string& domain_text,
           const std::string& radii_text) {
  auto D = ptk::config::parse_domain(domain_text);
  auto radii = parse_list(radii_text.empty() ? "10 20 40" : radii_text);
  auto prof = ptk::geometry::b0_profile(D, radii);
  auto doc = ptk::report::profile_doc(prof);
  doc.header["command"] = "b0";
  doc.header["domain"] = ptk::config::to_json(D);
  write_report(g, "b0", doc, ptk::report::to_json(prof));
  std::cout << "b0 verdict " << ptk::to_string(prof.verdict) << "\n";
  return exit_code_for({prof.verdict}, g.assert_in);
}

int run_embed(const GlobalOpts& g, const std::string& domain_text, double h, int k,
              const std::string& trunc_text) {
  auto D = ptk::config::parse_domain(domain_text);
  auto lengths = parse_list(trunc_text.empty() ? "10 20 40" : trunc_text);
  std::vector<ptk::forms::SpectralReport> reports;
  for (double L : lengths) {
    ptk::forms::Truncation tr;
    tr.lo.assign(D.dimension(), -L);
    tr.hi.assign(D.dimension(), L);
    if (D.kind() == ptk::geometry::DomainKind::Horn) tr.lo[0] = 0.0;
    auto form = ptk::forms::assemble_local(D, h, tr);
    reports.push_back(ptk::forms::embedding_singular_values(form, k));
  }
  auto dich = ptk::forms::truncation_dichotomy(reports, lengths, k);

  ptk::report::ReportDoc doc;
  doc.columns = {"truncation", "count_above_half_sigma1"};
  for (int i = 1; i <= k; ++i) doc.columns.push_back("sigma_" + std::to_string(i));
  for (size_t t = 0; t < lengths.size(); ++t) {
    std::vector<std::string> row{ptk::report::format_number(lengths[t]),
                                 std::to_string(dich.counts[t])};
    for (double s : dich.sigmas[t]) row.push_back(ptk::report::format_number(s));
    doc.rows.push_back(row);
  }
  doc.header["command"] = "embed";
  doc.header["domain"] = ptk::config::to_json(D);
  doc.header["h"] = h;
  json rec;
  rec["stabilized"] = dich.stabilized;
  rec["max_rel_drift"] = dich.max_rel_drift;
  rec["count_growth"] = dich.count_growth;
  write_report(g, "embed", doc, rec);
  std::cout << "embedding " << (dich.stabilized ? "stabilized (compact-like)"
                                                : "not stabilized")
            << ", drift " << ptk::report::format_number(dich.max_rel_drift) << "\n";
  return exit_code_for({dich.stabilized ? ptk::Verdict::In : ptk::Verdict::Out},
                       g.assert_in);
}

int run_fk(const GlobalOpts& g, const std::string& process, const std::string& vtext,
           const std::string& ladder_text, const std::string& x_text, long n,
           double dt) {
  auto spec = ptk::config::parse_process(process);
  auto ts = parse_list(ladder_text.empty() ? "1 2 4 8" : ladder_text);
  auto x = parse_list(x_text);
  if (x.empty()) x.assign(spec.dim, 0.0);

  ptk::stochastic::PointFn V;
  if (vtext.rfind("const:", 0) == 0) {
    const double c = std::stod(vtext.substr(6));
    V = [c](const std::vector<double>&) { return c; };
  } else if (vtext == "harmonic") {
    V = [](const std::vector<double>& y) {
      double s = 0.0;
      for (double v : y) s += v * v;
      return 0.5 * s;
    };
  } else {
    std::cerr << "fk: unknown potential '" << vtext << "' (use const:c | harmonic)\n";
    return 2;
  }

  ptk::stochastic::PathConfig cfg;
  cfg.spec = spec;
  cfg.dt = dt;
  cfg.paths = n;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  auto fit = ptk::stochastic::fk_decay_rate(cfg, V, {}, ts, x);

  ptk::report::ReportDoc doc;
  doc.columns = {"t", "estimate", "se", "n", "dt", "seed", "bias"};
  for (size_t i = 0; i < fit.ts.size(); ++i)
    doc.rows.push_back({ptk::report::format_number(fit.ts[i]),
                        ptk::report::format_number(fit.values[i]),
                        ptk::report::format_number(fit.ses[i]), std::to_string(n),
                        ptk::report::format_number(dt), std::to_string(g.seed),
                        "trapezoid potential integral"});
  doc.header["command"] = "fk";
  doc.header["process"] = ptk::config::to_json(spec);
  doc.header["lambda0"] = fit.lambda0;
  json rec;
  rec["lambda0"] = fit.lambda0;
  rec["lambda0_se"] = fit.std_error;
  write_report(g, "fk", doc, rec);
  std::cout << "lambda0 = " << ptk::report::format_number(fit.lambda0) << " +- "
            << ptk::report::format_number(fit.std_error) << "\n";
  return 0;
}

int run_kernels_selftest() {
  using ptk::kernels::ProcessSpec;
  int failures = 0;
  auto expect = [&](bool ok, const char* what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };
  // closed forms and invariants that must hold on every build
  {
    auto bm = ProcessSpec::brownian(1);
    const double v = ptk::kernels::heat_kernel_radial(bm, 1.0, 0.0).value;
    expect(std::abs(v - 0.3989422804014327) < 1e-12, "brownian p_1(0) = (2pi)^{-1/2}");
    ptk::kernels::EvalPolicy quad;
    quad.prefer_closed_form = false;
    const double r1 = ptk::kernels::resolvent_kernel_radial(bm, 1.0, 0.5, quad).value;
    expect(std::abs(r1 - std::exp(-std::sqrt(2.0) * 0.5) / std::sqrt(2.0)) < 1e-6,
           "brownian d=1 R_1 equality case");
  }
  {
    auto st = ProcessSpec::stable(1.0, 1);
    const double v = ptk::kernels::heat_kernel_radial(st, 1.0, 0.0).value;
    expect(std::abs(v - 1.0 / 3.14159265358979323846) < 1e-12, "cauchy p_1(0) = 1/pi");
  }
  {
    const double p0 = ptk::kernels::psi_ratio(0.0, 1, 1.0);
    const double p1 = ptk::kernels::psi_ratio(1.0, 1, 1.0);
    const double p5 = ptk::kernels::psi_ratio(5.0, 1, 1.0);
    expect(p0 == 1.0 && p1 < p0 && p5 < p1, "psi decreasing with psi(0) = 1");
  }
  {
    auto rel = ProcessSpec::relativistic(1.0, 1.0, 1);
    ptk::kernels::EvalPolicy quad;
    quad.prefer_closed_form = false;
    const double closed = ptk::kernels::heat_kernel_radial(rel, 1.0, 0.5).value;
    const double fourier = ptk::kernels::heat_kernel_radial(rel, 1.0, 0.5, quad).value;
    expect(std::abs(closed - fourier) < 1e-6 * closed,
           "relativistic closed form vs Fourier quadrature");
  }
  std::cout << (failures == 0 ? "kernels-selftest passed\n" : "kernels-selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptk - numerical potential theory toolkit"};
  app.set_version_flag("--version", ptk::version_string);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--seed", g.seed, "rng seed");
  app.add_option("--threads", g.threads, "worker thread cap");
  app.add_flag("--assert-in", g.assert_in, "exit nonzero on an OUT verdict (CI mode)");
  app.add_option("--out", g.out_dir, "report output directory");
  app.add_option("--format", g.format, "report format: csv | json | both");

  std::string process, measure, domain, x_text = "0", vtext = "harmonic";
  std::string radii_text, trunc_text, ladder_text;
  double p = 1.0, order = 1.0, h = 0.125, dt = 1e-3;
  int kk = 20;
  long n = 100000;
  bool no_chen = false;
  std::string kernel_kind = "resolvent";

  app.fallthrough();
  auto* classify = app.add_subcommand("classify", "measure class verdicts");
  classify->fallthrough();
  classify->add_option("--process", process)->required();
  classify->add_option("--measure", measure)->required();
  classify->add_option("--p", p);
  classify->add_flag("--no-chen", no_chen);

  auto* potential = app.add_subcommand("potential", "pointwise p-potential");
  potential->fallthrough();
  potential->add_option("--process", process)->required();
  potential->add_option("--measure", measure)->required();
  potential->add_option("--p", p);
  potential->add_option("--x", x_text);
  potential->add_option("--order", order);
  potential->add_option("--kernel", kernel_kind, "resolvent | reference");

  auto* b0 = app.add_subcommand("b0", "ball-mass decay of a domain");
  b0->fallthrough();
  b0->add_option("--domain", domain)->required();
  b0->add_option("--radii", radii_text);

  auto* embed = app.add_subcommand("embed", "embedding compactness diagnostic");
  embed->fallthrough();
  embed->add_option("--domain", domain)->required();
  embed->add_option("--grid-h", h);
  embed->add_option("--k", kk);
  embed->add_option("--truncations", trunc_text);

  auto* fk = app.add_subcommand("fk", "Feynman-Kac decay rate");
  fk->fallthrough();
  fk->add_option("--process", process)->required();
  fk->add_option("--potential", vtext);
  fk->add_option("--t-ladder", ladder_text);
  fk->add_option("--x", x_text);
  fk->add_option("--n", n);
  fk->add_option("--dt", dt);

  app.add_subcommand("kernels-selftest", "run the kernel invariant suite")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.config_path.empty()) {
      std::ifstream is(g.config_path);
      if (!is) {
        std::cerr << "config: cannot open " << g.config_path << "\n";
        return 2;
      }
      json cfg = json::parse(is);
      const std::string cmd = cfg.at("command").get<std::string>();
      g.seed = cfg.value("seed", g.seed);
      g.threads = cfg.value("threads", g.threads);
      g.assert_in = cfg.value("assert_in", g.assert_in);
      g.out_dir = cfg.value("out", g.out_dir);
      g.format = cfg.value("format", g.format);
      auto text_or = [&](const char* key, const std::string& fallback) {
        if (!cfg.contains(key)) return fallback;
        if (cfg[key].is_string()) return cfg[key].get<std::string>();
        return cfg[key].dump();
      };
      if (cmd == "classify") {
        std::string pr = text_or("process", process);
        std::string me = text_or("measure", measure);
        if (cfg["process"].is_object())
          pr = "json";  // resolved below through from_json paths
        if (cfg.contains("p")) p = cfg["p"].get<double>();
        if (cfg["process"].is_object() || cfg["measure"].is_object()) {
          auto spec = cfg["process"].is_object()
                          ? ptk::config::process_from_json(cfg["process"])
                          : ptk::config::parse_process(pr);
          auto mu = cfg["measure"].is_object()
                        ? ptk::config::measure_from_json(cfg["measure"])
                        : ptk::config::parse_measure(me, spec.dim);
          ptk::potentials::ClassifyOptions opts;
          opts.run_chen = !cfg.value("no_chen", false);
          auto rep = ptk::potentials::classify(spec, p, mu, opts);
          rep.measure_id = cfg["measure"].dump();
          auto doc = ptk::report::class_doc(rep);
          doc.header["command"] = "classify";
          doc.header["config"] = cfg;
          write_report(g, "classify", doc, ptk::report::to_json(rep));
          return exit_code_for({rep.verdicts.s_k}, g.assert_in);
        }
        return run_classify(g, pr, me, p, cfg.value("no_chen", false));
      }
      if (cmd == "b0") return run_b0(g, text_or("domain", domain), text_or("radii", ""));
      if (cmd == "kernels-selftest") return run_kernels_selftest();
      std::cerr << "config: unknown command '" << cmd << "'\n";
      return 2;
    }

    if (classify->parsed()) return run_classify(g, process, measure, p, no_chen);
    if (potential->parsed())
      return run_potential(g, process, measure, p, x_text, order, kernel_kind);
    if (b0->parsed()) return run_b0(g, domain, radii_text);
    if (embed->parsed()) return run_embed(g, domain, h, kk, trunc_text);
    if (fk->parsed()) return run_fk(g, process, vtext, ladder_text, x_text, n, dt);
    if (app.get_subcommand("kernels-selftest")->parsed()) return run_kernels_selftest();
    std::cout << app.help() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
