#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stiffkit/analysis.hpp"
#include "stiffkit/linalg.hpp"

namespace stiffkit {

// Semi-discrete method-of-lines problem on a periodic grid over [0, 2*pi).
struct SemiDiscreteProblem {
  std::string name;
  int n = 0;  // grid points = state dimension
  Rhs rhs;
  std::function<RealMatrix(double, const Vec&)> jacobian;
  RealMatrix linear_part;
  Vec y0;
};

// Fourth-order periodic centered differences as dense circulant matrices.
// Second derivative: stencil (-1, 16, -30, 16, -1) / (12 dx^2).
RealMatrix d2_matrix_periodic4(int n);
// First derivative: stencil (1, -8, 0, 8, -1) / (12 dx) over offsets -2..2.
RealMatrix d1_matrix_periodic4(int n);

// Circulant symbol of the second-derivative stencil at angle theta.
double d2_symbol_periodic4(int n, double theta);

Vec grid_points(int n);

// 1 - cos(x)^101 pulse; the odd power is evaluated by repeated squaring.
Vec pulse_initial_state(int n);

// y_t = y_xx + 0.1 sin(t/50); constant Jacobian equal to the linear part.
SemiDiscreteProblem diffusion_problem(int n);

// Conservative Burgers: y_t = 0.1 y_xx - (y^2/4)_x.
SemiDiscreteProblem burgers_problem(int n);

enum class WStrategy { JacobianEveryStep, JacobianInitialOnly, LinearPartOnly };

std::string to_string(WStrategy s);
WStrategy wstrategy_from_string(const std::string& s);  // throws Error

// W matrix for the next step plus a flag telling whether it is fresh (and so
// needs refactorizing). Frozen strategies fill `cache` on first use.
std::pair<RealMatrix, bool> select_w(WStrategy strategy, const SemiDiscreteProblem& problem,
                                     double t, const Vec& y, std::optional<RealMatrix>& cache);

}  // namespace stiffkit
