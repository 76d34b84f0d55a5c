#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stiffkit/bench.hpp"

namespace {

using namespace stiffkit;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr double kResidualTol = 1e-10;

struct TableEntry {
  double c_norm, d_norm, theta;
};

// Reported reference properties for the cataloged methods (4-6 digits).
std::optional<TableEntry> table_entry(const std::string& name) {
  if (name == "SRKTASE2") return TableEntry{4.00347, 4.16667, 90.0};
  if (name == "MSRKTASE2") return TableEntry{0.212866, 0.10116, 90.0};
  if (name == "SRKTASE3") return TableEntry{6.7171, 6.6753, 88.99};
  if (name == "MSRKTASE3a") return TableEntry{0.1817, 0.2288, 88.23};
  if (name == "MSRKTASE3b") return TableEntry{0.3968, 0.0035, 50.38};
  return std::nullopt;
}

MSRKTASEMethod resolve_method(const std::string& name, const std::string& card_path) {
  if (!card_path.empty()) {
    std::ifstream in(card_path);
    if (!in) throw Error("cannot read card file '" + card_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return method_card_from_json(buf.str());
  }
  return catalog_method(name);
}

int cmd_verify(const std::string& name, const std::string& card_path, bool as_json) {
  const MSRKTASEMethod m = resolve_method(name, card_path);
  const WTableau w = to_wmethod(m);

  const auto residuals = order_residuals_w(w, m.declared_order);
  bool all_ok = true;
  nlohmann::json jres;
  for (const auto& r : residuals) {
    const bool ok = std::abs(r.value) <= kResidualTol;
    all_ok = all_ok && ok;
    jres[r.name] = r.value;
    if (!as_json)
      std::printf("%-28s % .3e  %s\n", r.name.c_str(), r.value, ok ? "pass" : "FAIL");
  }

  const double rinf = r_infinity(w);
  const double theta = stability_angle(w);
  double c_norm = NAN, d_norm = NAN;
  if (all_ok && (m.declared_order == 2 || m.declared_order == 3)) {
    c_norm = error_norm_c(w, m.declared_order);
    d_norm = error_norm_d(w, m.declared_order);
  }

  if (as_json) {
    nlohmann::json j;
    j["method"] = m.name;
    j["declared_order"] = m.declared_order;
    j["residuals"] = jres;
    j["order_ok"] = all_ok;
    j["r_infinity"] = rinf;
    j["theta_degrees"] = theta;
    if (std::isfinite(c_norm)) {
      j["c_norm"] = c_norm;
      j["d_norm"] = d_norm;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("order <= %d residuals: %s (tolerance %.1e)\n", m.declared_order,
                all_ok ? "all pass" : "FAILURES", kResidualTol);
    std::printf("R(inf)      = %.6f\n", rinf);
    std::printf("theta       = %.2f deg\n", theta);
    if (std::isfinite(c_norm)) {
      std::printf("C%d norm     = %.6f\n", m.declared_order + 1, c_norm);
      std::printf("D%d norm     = %.6f\n", m.declared_order + 1, d_norm);
      if (auto expected = table_entry(m.name)) {
        std::printf("reference   : C=%.6g D=%.6g theta=%.4g\n", expected->c_norm,
                    expected->d_norm, expected->theta);
      }
    }
  }
  return all_ok ? kExitOk : kExitVerifyFail;
}

int cmd_stability(const std::string& name, const std::string& card_path, int boundary_rays,
                  bool want_angle, bool want_rinf, const std::string& out_path,
                  const std::string& svg_path, double resolution, int radial) {
  const MSRKTASEMethod m = resolve_method(name, card_path);
  const WTableau w = to_wmethod(m);
  if (want_angle) {
    std::printf("%.2f\n", stability_angle(w, resolution, radial));
    return kExitOk;
  }
  if (want_rinf) {
    std::printf("%.6f\n", r_infinity(w));
    return kExitOk;
  }
  const auto points = stability_boundary(w, boundary_rays);
  std::string csv = "re,im,abs_R\n";
  for (const auto& z : points) {
    const double mag = std::abs(stability_function(w, z));
    csv += format_double(z.real()) + ',' + format_double(z.imag()) + ',' + format_double(mag) +
           '\n';
  }
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  if (!svg_path.empty()) write_text_file(svg_path, boundary_svg(m.name, points));
  return kExitOk;
}

int cmd_run(const std::string& method, const std::string& problem_name, int n, double h,
            double t0, double tf, const std::string& strategy_name,
            const std::string& state_out) {
  if (tf <= t0) throw Error("empty interval: tf must exceed t0");
  if (h <= 0) throw Error("h must be positive");
  const SemiDiscreteProblem problem = problem_for_name(problem_name, n);
  const WStrategy strategy = wstrategy_from_string(strategy_name);
  const Stepper stepper = stepper_for_name(method);

  nlohmann::json j;
  j["method"] = method;
  j["problem"] = problem_name;
  j["N"] = n;
  j["w_strategy"] = strategy_name;
  j["t0"] = t0;
  j["tf"] = tf;
  std::string status = "ok";
  try {
    const IntegrationRun run = integrate(stepper, problem, t0, tf, h, strategy);
    const Vec reference = reference_state(problem, t0, tf, run.h / 64.0);
    Vec diff = run.y_final;
    axpy(-1.0, reference, diff);
    j["h"] = run.h;
    j["steps"] = run.steps;
    j["error"] = norm2(diff);
    j["wall_seconds"] = run.wall_seconds;
    j["factorizations"] = run.factorizations;
    j["rhs_evals"] = run.rhs_evals;
    if (!state_out.empty()) {
      std::string csv = "x,y\n";
      const Vec x = grid_points(n);
      for (int i = 0; i < n; ++i)
        csv += format_double(x[i]) + ',' + format_double(run.y_final[i]) + '\n';
      write_text_file(state_out, csv);
    }
  } catch (const NonFiniteState& e) {
    status = "blowup";
    j["detail"] = e.what();
  } catch (const NewtonDivergence& e) {
    status = "newton-divergence";
    j["detail"] = e.what();
  }
  j["status"] = status;
  std::cout << j.dump(2) << "\n";
  return status == "ok" ? kExitOk : kExitRuntime;
}

std::vector<double> parse_h_sweep(const std::string& spec) {
  // "start:ratio:count", e.g. 0.04:0.5:6
  double start = 0, ratio = 0;
  int count = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &start, &ratio, &count) != 3 || start <= 0 ||
      ratio <= 0 || ratio >= 1 || count < 2)
    throw Error("bad --h-sweep '" + spec + "' (want start:ratio:count with 0<ratio<1, count>=2)");
  std::vector<double> hs(count);
  double h = start;
  for (int i = 0; i < count; ++i, h *= ratio) hs[i] = h;
  return hs;
}

int cmd_bench(const std::string& problem, const std::vector<std::string>& methods,
              const std::string& h_sweep, int n, double tf, const std::string& strategy_name,
              const std::string& out_path, const std::string& svg_path, int jobs,
              bool strict_timing) {
  BenchConfig config;
  config.problem = problem;
  config.n = n;
  config.methods = methods;
  config.h_values = parse_h_sweep(h_sweep);
  config.w_strategy = wstrategy_from_string(strategy_name);
  config.tf = tf;
  config.jobs = strict_timing ? 1 : jobs;

  const BenchReport report = run_bench(config);
  const std::string csv = bench_csv(report);
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  if (!svg_path.empty()) {
    const std::string title = problem + " (N=" + std::to_string(n) + ", " + strategy_name + ")";
    write_text_file(svg_path, efficiency_svg(report, title));
  }
  for (const auto& row : report.rows)
    if (row.status != "ok")
      std::fprintf(stderr, "note: %s at h=%g -> %s\n", row.method.c_str(), row.h,
                   row.status.c_str());
  return kExitOk;
}

int cmd_derive(const std::string& family, double alpha, const std::string& beta22_spec,
               const std::string& beta32_spec, double c2, double c3) {
  MSRKTASEMethod m;
  if (family == "ms2") {
    if (alpha < kMsrktase2AlphaMin || alpha > kMsrktase2AlphaMax)
      std::fprintf(stderr, "warning: alpha=%g outside the A-stability window [%g, %g]\n", alpha,
                   kMsrktase2AlphaMin, kMsrktase2AlphaMax);
    m = derive_msrktase2(alpha);
  } else if (family == "ms3") {
    if (beta22_spec.empty()) throw Error("--beta22 required for ms3 (number or auto-d41)");
    const double beta22 =
        (beta22_spec == "auto-d41") ? beta22_vanishing_d41(alpha) : parse_double(beta22_spec);
    double beta32;
    if (beta32_spec == "auto" || beta32_spec.empty()) {
      const auto roots = solve_beta32_linfinity(alpha, beta22);
      double best_angle = -1;
      beta32 = roots[0];
      for (double root : roots) {
        const double angle = stability_angle(to_wmethod(derive_msrktase3(alpha, beta22, root, c2, c3)),
                                             1.0, 160);
        if (angle > best_angle + 0.5 ||
            (std::abs(angle - best_angle) <= 0.5 && std::abs(root) < std::abs(beta32))) {
          best_angle = angle;
          beta32 = root;
        }
      }
    } else {
      beta32 = parse_double(beta32_spec);
    }
    m = derive_msrktase3(alpha, beta22, beta32, c2, c3);
  } else {
    throw Error("unknown family '" + family + "' (expected ms2 or ms3)");
  }

  const WTableau w = to_wmethod(m);
  std::cout << method_card_json(m) << "\n";
  bool ok = true;
  for (const auto& r : order_residuals_w(w, m.declared_order)) {
    ok = ok && std::abs(r.value) <= kResidualTol;
    std::printf("%-28s % .3e\n", r.name.c_str(), r.value);
  }
  std::printf("order %d     : %s\n", m.declared_order, ok ? "verified" : "NOT satisfied");
  std::printf("R(inf)      = %.6f\n", r_infinity(w));
  std::printf("theta       = %.2f deg\n", stability_angle(w));
  if (ok) {
    std::printf("C%d norm     = %.6f\n", m.declared_order + 1, error_norm_c(w, m.declared_order));
    std::printf("D%d norm     = %.6f\n", m.declared_order + 1, error_norm_d(w, m.declared_order));
  }
  return ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stiffkit - stage-wise stabilized explicit RK methods for stiff ODEs"};
  app.require_subcommand(1);

  std::string name, card, out_path, svg_path, state_out;
  std::string problem = "diffusion", strategy = "jacobian-every-step";
  std::string family, beta22_spec, beta32_spec, h_sweep;
  std::vector<std::string> methods;
  int n = 64, boundary_rays = 0, radial = 400, jobs = 1;
  double h = 0.01, t0 = 0.0, tf = 1.0, alpha = 0.0, c2 = 0.5, c3 = 0.75, resolution = 0.25;
  bool want_angle = false, want_rinf = false, as_json = false, strict_timing = false;

  auto* verify = app.add_subcommand("verify", "check order conditions of a method");
  verify->add_option("method", name, "catalog name (or use --card)");
  verify->add_option("--card", card, "method card JSON file");
  verify->add_flag("--json", as_json, "emit a JSON residual report");

  auto* stability = app.add_subcommand("stability", "stability function diagnostics");
  stability->add_option("method", name, "catalog name (or use --card)");
  stability->add_option("--card", card, "method card JSON file");
  auto* opt_boundary =
      stability->add_option("--boundary", boundary_rays, "emit boundary CSV over this many rays");
  auto* opt_angle = stability->add_flag("--angle", want_angle, "print the L(theta) angle");
  auto* opt_rinf = stability->add_flag("--rinf", want_rinf, "print R(infinity)");
  stability->add_option("--out", out_path, "write CSV here instead of stdout");
  stability->add_option("--svg", svg_path, "also render the boundary as SVG");
  stability->add_option("--resolution", resolution, "angle scan resolution in degrees");
  stability->add_option("--radial", radial, "radial samples per ray");
  opt_boundary->excludes(opt_angle)->excludes(opt_rinf);
  opt_angle->excludes(opt_rinf);

  auto* run = app.add_subcommand("run", "single fixed-step integration");
  run->set_help_flag("--help", "print help");  // frees -h so --h can be the step size
  run->add_option("method", name)->required();
  run->add_option("problem", problem, "diffusion or burgers")->required();
  run->add_option("--N", n, "grid points");
  run->add_option("--h", h, "step size")->required();
  run->add_option("--t0", t0);
  run->add_option("--tf", tf);
  run->add_option("--w-strategy", strategy,
                  "jacobian-every-step | jacobian-initial-only | linear-part-only");
  run->add_option("--state-out", state_out, "write final state as CSV (x,y)");

  auto* bench = app.add_subcommand("bench", "work-precision sweep");
  bench->add_option("problem", problem, "diffusion or burgers")->required();
  bench->add_option("--methods", methods, "method names")->required()->delimiter(',');
  bench->add_option("--h-sweep", h_sweep, "geometric sweep start:ratio:count")->required();
  bench->add_option("--N", n, "grid points");
  bench->add_option("--tf", tf);
  bench->add_option("--w-strategy", strategy);
  bench->add_option("--out", out_path, "CSV output path");
  bench->add_option("--svg", svg_path, "efficiency plot output path");
  bench->add_option("--jobs", jobs, "parallel sweep cells");
  bench->add_flag("--strict-timing", strict_timing, "force serial cells for clean timings");

  auto* derive = app.add_subcommand("derive", "derive a method from family parameters");
  derive->add_option("--family", family, "ms2 or ms3")->required();
  derive->add_option("--alpha", alpha)->required();
  derive->add_option("--beta22", beta22_spec, "number or auto-d41 (ms3)");
  derive->add_option("--beta32", beta32_spec, "number or auto (ms3)");
  derive->add_option("--c2", c2);
  derive->add_option("--c3", c3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (name.empty() && card.empty()) {
        std::fprintf(stderr, "verify: give a method name or --card\n");
        return kExitUsage;
      }
      return cmd_verify(name, card, as_json);
    }
    if (stability->parsed()) {
      if (!want_angle && !want_rinf && boundary_rays == 0) {
        std::fprintf(stderr, "stability: pick one of --angle, --rinf, --boundary N\n");
        return kExitUsage;
      }
      return cmd_stability(name, card, boundary_rays, want_angle, want_rinf, out_path, svg_path,
                           resolution, radial);
    }
    if (run->parsed())
      return cmd_run(name, problem, n, h, t0, tf, strategy, state_out);
    if (bench->parsed())
      return cmd_bench(problem, methods, h_sweep, n, tf, strategy, out_path, svg_path, jobs,
                       strict_timing);
    if (derive->parsed())
      return cmd_derive(family, alpha, beta22_spec, beta32_spec, c2, c3);
  } catch (const UnknownMethod& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NonFiniteState& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const NewtonDivergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const std::string what = e.what();
    return what.find("empty interval") != std::string::npos ||
                   what.find("unknown") != std::string::npos ||
                   what.find("bad --") != std::string::npos
               ? kExitUsage
               : kExitRuntime;
  }
  return kExitUsage;
}
