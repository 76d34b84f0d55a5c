#pragma once

#include <string>

#include "stiffkit/problems.hpp"

namespace stiffkit {

// One MSRKTASE step (factorizes (I - h alpha W) itself; s*r solves total).
Vec msrktase_step(const MSRKTASEMethod& m, const Rhs& f, const RealMatrix& w, double t,
                  const Vec& y, double h);

// Same step against a caller-owned factorization of (I - h alpha W); this is
// what makes frozen-W runs one factorization per trajectory.
Vec msrktase_step_prefactored(const MSRKTASEMethod& m, const Rhs& f, const LUFactorization& lu,
                              double t, const Vec& y, double h);

Vec explicit_rk_step(const RKTableau& tab, const Rhs& f, double t, const Vec& y, double h);

struct SdirkOptions {
  double newton_tol = 1e-10;
  int max_iters = 25;
};

// Three-stage, stiffly accurate, L-stable SDIRK of order 3
// (gamma = root of g^3 - 3 g^2 + 3 g/2 - 1/6 in (1/3, 1)).
RKTableau sdirk3_tableau();
double sdirk3_gamma();

Vec sdirk3_step(const Rhs& f, const RealMatrix& w, double t, const Vec& y, double h,
                const SdirkOptions& opts = {});
Vec sdirk3_step_prefactored(const Rhs& f, const LUFactorization& lu, double t, const Vec& y,
                            double h, const SdirkOptions& opts = {});

enum class StepperKind { Msrktase, ExplicitRk, Sdirk3 };

struct Stepper {
  StepperKind kind = StepperKind::Msrktase;
  std::string name;
  MSRKTASEMethod method;  // Msrktase
  RKTableau tableau;      // ExplicitRk
  SdirkOptions sdirk;

  static Stepper msrktase(const MSRKTASEMethod& m);
  static Stepper explicit_rk(const RKTableau& tab, const std::string& name);
  static Stepper sdirk3(const SdirkOptions& opts = {});
};

struct IntegrationRun {
  std::string method;
  std::string problem;
  std::string w_strategy;
  double h = 0;  // after shrinking to divide tf - t0 exactly
  double t0 = 0;
  double tf = 0;
  long steps = 0;
  Vec y_final;
  long factorizations = 0;
  long rhs_evals = 0;
  double wall_seconds = 0;
};

// Fixed-step loop; h is shrunk (never grown) so the last step lands on tf.
// The W matrix follows the strategy; the wall clock wraps the stepping loop
// only. Stepper errors are rethrown with the failing step attached.
IntegrationRun integrate(const Stepper& stepper, const SemiDiscreteProblem& problem, double t0,
                         double tf, double h, WStrategy strategy);

std::string run_json(const IntegrationRun& run, bool include_state = false);

}  // namespace stiffkit
