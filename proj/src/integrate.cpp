#include "stiffkit/integrate.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

namespace stiffkit {

Vec msrktase_step_prefactored(const MSRKTASEMethod& m, const Rhs& f, const LUFactorization& lu,
                              double t, const Vec& y, double h) {
  const int s = m.tableau.s;
  std::vector<Vec> k(s);
  for (int i = 0; i < s; ++i) {
    Vec arg = y;
    for (int j = 0; j < i; ++j)
      if (m.tableau.a(i, j) != 0.0) axpy(h * m.tableau.a(i, j), k[j], arg);
    k[i] = apply_stage_operator(m.operators, i, lu, f(t + m.tableau.c[i] * h, arg));
    if (!all_finite(k[i]))
      throw NonFiniteState("msrktase_step: non-finite stage " + std::to_string(i));
  }
  Vec out = y;
  for (int i = 0; i < s; ++i) axpy(h * m.tableau.b[i], k[i], out);
  return out;
}

Vec msrktase_step(const MSRKTASEMethod& m, const Rhs& f, const RealMatrix& w, double t,
                  const Vec& y, double h) {
  LUFactorization lu(shifted_identity(w, h * m.operators.alpha));
  return msrktase_step_prefactored(m, f, lu, t, y, h);
}

Vec explicit_rk_step(const RKTableau& tab, const Rhs& f, double t, const Vec& y, double h) {
  std::vector<Vec> k(tab.s);
  for (int i = 0; i < tab.s; ++i) {
    Vec arg = y;
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0) axpy(h * tab.a(i, j), k[j], arg);
    k[i] = f(t + tab.c[i] * h, arg);
    if (!all_finite(k[i]))
      throw NonFiniteState("explicit_rk_step: non-finite stage " + std::to_string(i));
  }
  Vec out = y;
  for (int i = 0; i < tab.s; ++i) axpy(h * tab.b[i], k[i], out);
  return out;
}

double sdirk3_gamma() {
  // Newton on g^3 - 3 g^2 + 1.5 g - 1/6 from the (1/3, 1) bracket.
  double g = 0.44;
  for (int i = 0; i < 60; ++i) {
    const double fg = ((g - 3.0) * g + 1.5) * g - 1.0 / 6.0;
    const double dg = (3.0 * g - 6.0) * g + 1.5;
    const double next = g - fg / dg;
    if (next == g) break;
    g = next;
  }
  return g;
}

RKTableau sdirk3_tableau() {
  const double g = sdirk3_gamma();
  const double b1 = -1.5 * g * g + 4.0 * g - 0.25;
  const double b2 = 1.5 * g * g - 5.0 * g + 1.25;
  RKTableau t;
  t.s = 3;
  t.a = RealMatrix(3, 3);
  t.a(0, 0) = g;
  t.a(1, 0) = 0.5 * (1.0 - g);
  t.a(1, 1) = g;
  t.a(2, 0) = b1;
  t.a(2, 1) = b2;
  t.a(2, 2) = g;
  t.b = {b1, b2, g};
  t.c = {g, 0.5 * (1.0 + g), 1.0};
  return t;  // diagonally implicit, so RKTableau::validate() does not apply
}

Vec sdirk3_step_prefactored(const Rhs& f, const LUFactorization& lu, double t, const Vec& y,
                            double h, const SdirkOptions& opts) {
  const RKTableau tab = sdirk3_tableau();
  const double g = tab.a(0, 0);
  const double scale = 1.0 + norm_inf(y);
  std::vector<Vec> k(tab.s);
  Vec stage;
  for (int i = 0; i < tab.s; ++i) {
    Vec base = y;
    for (int j = 0; j < i; ++j) axpy(h * tab.a(i, j), k[j], base);
    stage = base;
    bool converged = false;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      Vec res = f(t + tab.c[i] * h, stage);
      for (size_t q = 0; q < res.size(); ++q) res[q] = stage[q] - base[q] - h * g * res[q];
      if (!all_finite(res))
        throw NewtonDivergence("sdirk3_step: non-finite residual at stage " + std::to_string(i));
      Vec delta = lu.solve(res);
      for (size_t q = 0; q < stage.size(); ++q) stage[q] -= delta[q];
      if (norm_inf(delta) <= opts.newton_tol * scale) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NewtonDivergence("sdirk3_step: no convergence in " + std::to_string(opts.max_iters) +
                             " iterations at stage " + std::to_string(i));
    // Stage derivative recovered from the converged stage equation.
    k[i] = stage;
    for (size_t q = 0; q < stage.size(); ++q) k[i][q] = (stage[q] - base[q]) / (h * g);
  }
  if (!all_finite(stage)) throw NonFiniteState("sdirk3_step: non-finite state");
  return stage;  // stiffly accurate: y_{n+1} is the last stage
}

Vec sdirk3_step(const Rhs& f, const RealMatrix& w, double t, const Vec& y, double h,
                const SdirkOptions& opts) {
  LUFactorization lu(shifted_identity(w, h * sdirk3_gamma()));
  return sdirk3_step_prefactored(f, lu, t, y, h, opts);
}

Stepper Stepper::msrktase(const MSRKTASEMethod& m) {
  Stepper s;
  s.kind = StepperKind::Msrktase;
  s.name = m.name;
  s.method = m;
  return s;
}

Stepper Stepper::explicit_rk(const RKTableau& tab, const std::string& name) {
  Stepper s;
  s.kind = StepperKind::ExplicitRk;
  s.name = name;
  s.tableau = tab;
  return s;
}

Stepper Stepper::sdirk3(const SdirkOptions& opts) {
  Stepper s;
  s.kind = StepperKind::Sdirk3;
  s.name = "SDIRK3";
  s.sdirk = opts;
  return s;
}

namespace {

double stepper_shift(const Stepper& st) {
  switch (st.kind) {
    case StepperKind::Msrktase:
      return st.method.operators.alpha;
    case StepperKind::Sdirk3:
      return sdirk3_gamma();
    case StepperKind::ExplicitRk:
      return 0.0;
  }
  return 0.0;
}

[[noreturn]] void rethrow_with_step(const Error& e, long step, double t) {
  const std::string ctx =
      "step " + std::to_string(step) + " (t = " + std::to_string(t) + "): " + e.what();
  if (dynamic_cast<const NonFiniteState*>(&e)) throw NonFiniteState(ctx);
  if (dynamic_cast<const NewtonDivergence*>(&e)) throw NewtonDivergence(ctx);
  if (dynamic_cast<const SingularMatrix*>(&e)) throw SingularMatrix(ctx);
  throw Error(ctx);
}

}  // namespace

IntegrationRun integrate(const Stepper& stepper, const SemiDiscreteProblem& problem, double t0,
                         double tf, double h, WStrategy strategy) {
  if (tf < t0) throw Error("integrate: tf must not precede t0");
  if (h <= 0) throw Error("integrate: h must be positive");

  IntegrationRun run;
  run.method = stepper.name;
  run.problem = problem.name;
  run.w_strategy = to_string(strategy);
  run.t0 = t0;
  run.tf = tf;

  if (tf == t0) {
    run.h = h;
    run.y_final = problem.y0;
    return run;
  }

  const long steps = std::max<long>(1, static_cast<long>(std::ceil((tf - t0) / h - 1e-9)));
  run.steps = steps;
  run.h = (tf - t0) / steps;

  long rhs_evals = 0;
  const Rhs counted = [&rhs_evals, &problem](double t, const Vec& y) {
    ++rhs_evals;
    return problem.rhs(t, y);
  };

  Vec y = problem.y0;
  std::optional<RealMatrix> wcache;
  std::optional<LUFactorization> lu;
  const double shift = stepper_shift(stepper);

  const auto start = std::chrono::steady_clock::now();
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + k * run.h;
    try {
      if (stepper.kind == StepperKind::ExplicitRk) {
        y = explicit_rk_step(stepper.tableau, counted, t, y, run.h);
      } else {
        auto [w, fresh] = select_w(strategy, problem, t, y, wcache);
        if (fresh || !lu) {
          lu.emplace(shifted_identity(w, run.h * shift));
          ++run.factorizations;
        }
        if (stepper.kind == StepperKind::Msrktase)
          y = msrktase_step_prefactored(stepper.method, counted, *lu, t, y, run.h);
        else
          y = sdirk3_step_prefactored(counted, *lu, t, y, run.h, stepper.sdirk);
      }
    } catch (const Error& e) {
      rethrow_with_step(e, k, t);
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  run.wall_seconds = std::chrono::duration<double>(stop - start).count();
  run.rhs_evals = rhs_evals;
  run.y_final = std::move(y);
  return run;
}

std::string run_json(const IntegrationRun& run, bool include_state) {
  nlohmann::json j;
  j["method"] = run.method;
  j["problem"] = run.problem;
  j["w_strategy"] = run.w_strategy;
  j["h"] = run.h;
  j["t0"] = run.t0;
  j["tf"] = run.tf;
  j["steps"] = run.steps;
  j["factorizations"] = run.factorizations;
  j["rhs_evals"] = run.rhs_evals;
  j["wall_seconds"] = run.wall_seconds;
  if (include_state) j["y_final"] = run.y_final;
  return j.dump(2);
}

}  // namespace stiffkit
