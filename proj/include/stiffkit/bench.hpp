#pragma once

#include <string>
#include <vector>

#include "stiffkit/integrate.hpp"

namespace stiffkit {

// Cataloged MSRKTASE names plus the baselines "SDIRK3" and "ERK3"
// (the underlying explicit 3-stage scheme, kept for stiffness demonstrations).
Stepper stepper_for_name(const std::string& name);  // throws UnknownMethod
std::vector<std::string> known_method_names();

SemiDiscreteProblem problem_for_name(const std::string& name, int n);  // throws Error

struct BenchRow {
  std::string method;
  std::string problem;
  int n = 0;
  std::string w_strategy;
  double h = 0;
  long steps = 0;
  double error = 0;  // NaN on failed cells
  double seconds = 0;
  long factorizations = 0;
  long rhs_evals = 0;
  std::string status;  // ok | blowup | newton-divergence
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

struct BenchConfig {
  std::string problem = "diffusion";
  int n = 64;
  std::vector<std::string> methods;
  std::vector<double> h_values;
  WStrategy w_strategy = WStrategy::JacobianEveryStep;
  double t0 = 0.0;
  double tf = 1.0;
  int jobs = 1;
  int reference_refine = 64;  // reference: SDIRK3 at h_min / reference_refine
};

// Runs every (method, h) cell; failures become status rows rather than
// aborting the sweep. Rows come back sorted by (method, h descending).
BenchReport run_bench(const BenchConfig& config);

// Reference trajectory shared by bench and single runs: SDIRK3 with the exact
// Jacobian at each step, at the given step size.
Vec reference_state(const SemiDiscreteProblem& problem, double t0, double tf, double h_ref);

// CSV with the fixed header
// method,problem,N,w_strategy,h,steps,error,seconds,factorizations,rhs_evals,status
// LF endings, '.' decimal separator, shortest round-trip number formatting.
std::string bench_csv(const BenchReport& report);
BenchReport bench_from_csv(const std::string& text);

// Self-contained 800x600 log-log efficiency plot (error vs seconds).
std::string efficiency_svg(const BenchReport& report, const std::string& title);

// Scatter rendering of a stability boundary in the z plane.
std::string boundary_svg(const std::string& label,
                         const std::vector<std::complex<double>>& points);

std::string format_double(double v);        // shortest round-trip
double parse_double(const std::string& s);  // inverse of format_double

void write_text_file(const std::string& path, const std::string& content);

}  // namespace stiffkit
