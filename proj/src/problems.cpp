#include "stiffkit/problems.hpp"

#include <cmath>

namespace stiffkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double base, unsigned exp) {
  double acc = 1.0;
  while (exp) {
    if (exp & 1u) acc *= base;
    base *= base;
    exp >>= 1u;
  }
  return acc;
}

RealMatrix circulant(int n, std::initializer_list<std::pair<int, double>> stencil, double scale) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (auto [offset, coeff] : stencil) m(i, ((i + offset) % n + n) % n) = coeff * scale;
  return m;
}

}  // namespace

RealMatrix d2_matrix_periodic4(int n) {
  if (n < 5) throw Error("d2_matrix_periodic4: need at least 5 grid points");
  const double dx = 2.0 * kPi / n;
  return circulant(n, {{-2, -1.0}, {-1, 16.0}, {0, -30.0}, {1, 16.0}, {2, -1.0}},
                   1.0 / (12.0 * dx * dx));
}

RealMatrix d1_matrix_periodic4(int n) {
  if (n < 5) throw Error("d1_matrix_periodic4: need at least 5 grid points");
  const double dx = 2.0 * kPi / n;
  return circulant(n, {{-2, 1.0}, {-1, -8.0}, {1, 8.0}, {2, -1.0}}, 1.0 / (12.0 * dx));
}

double d2_symbol_periodic4(int n, double theta) {
  const double dx = 2.0 * kPi / n;
  return (-2.0 * std::cos(2.0 * theta) + 32.0 * std::cos(theta) - 30.0) / (12.0 * dx * dx);
}

Vec grid_points(int n) {
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = 2.0 * kPi * i / n;
  return x;
}

Vec pulse_initial_state(int n) {
  Vec y(n);
  const Vec x = grid_points(n);
  for (int i = 0; i < n; ++i) y[i] = 1.0 - ipow(std::cos(x[i]), 101);
  return y;
}

SemiDiscreteProblem diffusion_problem(int n) {
  SemiDiscreteProblem p;
  p.name = "diffusion";
  p.n = n;
  p.linear_part = d2_matrix_periodic4(n);
  p.y0 = pulse_initial_state(n);
  const RealMatrix d2 = p.linear_part;
  p.rhs = [d2](double t, const Vec& y) {
    Vec out = d2.apply(y);
    const double source = 0.1 * std::sin(t / 50.0);
    for (auto& v : out) v += source;
    return out;
  };
  p.jacobian = [d2](double, const Vec&) { return d2; };
  return p;
}

SemiDiscreteProblem burgers_problem(int n) {
  SemiDiscreteProblem p;
  p.name = "burgers";
  p.n = n;
  RealMatrix lin = d2_matrix_periodic4(n);
  lin *= 0.1;
  p.linear_part = lin;
  p.y0 = pulse_initial_state(n);
  const RealMatrix d1 = d1_matrix_periodic4(n);
  const RealMatrix d2v = p.linear_part;
  p.rhs = [d1, d2v](double, const Vec& y) {
    Vec out = d2v.apply(y);
    Vec flux(y.size());
    for (size_t i = 0; i < y.size(); ++i) flux[i] = 0.25 * y[i] * y[i];
    axpy(-1.0, d1.apply(flux), out);
    return out;
  };
  p.jacobian = [d1, d2v](double, const Vec& y) {
    RealMatrix j = d2v;
    const int dim = j.rows();
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) j(i, k) -= d1(i, k) * 0.5 * y[k];
    return j;
  };
  return p;
}

std::string to_string(WStrategy s) {
  switch (s) {
    case WStrategy::JacobianEveryStep:
      return "jacobian-every-step";
    case WStrategy::JacobianInitialOnly:
      return "jacobian-initial-only";
    case WStrategy::LinearPartOnly:
      return "linear-part-only";
  }
  throw Error("to_string: bad WStrategy");
}

WStrategy wstrategy_from_string(const std::string& s) {
  if (s == "jacobian-every-step") return WStrategy::JacobianEveryStep;
  if (s == "jacobian-initial-only") return WStrategy::JacobianInitialOnly;
  if (s == "linear-part-only") return WStrategy::LinearPartOnly;
  throw Error("unknown W strategy '" + s + "'");
}

std::pair<RealMatrix, bool> select_w(WStrategy strategy, const SemiDiscreteProblem& problem,
                                     double t, const Vec& y, std::optional<RealMatrix>& cache) {
  switch (strategy) {
    case WStrategy::JacobianEveryStep:
      return {problem.jacobian(t, y), true};
    case WStrategy::JacobianInitialOnly:
      if (!cache) {
        cache = problem.jacobian(t, y);
        return {*cache, true};
      }
      return {*cache, false};
    case WStrategy::LinearPartOnly:
      if (!cache) {
        cache = problem.linear_part;
        return {*cache, true};
      }
      return {*cache, false};
  }
  throw Error("select_w: bad WStrategy");
}

}  // namespace stiffkit
