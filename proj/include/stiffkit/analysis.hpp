#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "stiffkit/methods.hpp"

namespace stiffkit {

using Rhs = std::function<Vec(double, const Vec&)>;

// The sr-stage W-method equivalent of an MSRKTASE method. Gamma = alpha(I+L)
// is lower triangular with constant diagonal alpha and (Gamma - alpha I)^r = 0.
struct WTableau {
  int n = 0;  // = s * r
  int s = 0;
  int r = 0;
  double alpha = 0;
  RealMatrix ahat;  // strictly lower
  RealMatrix l;     // strictly lower, block diagonal of all-ones blocks
  Vec bhat;
  Vec chat;  // recomputed as ahat * 1

  RealMatrix gamma() const;
};

WTableau to_wmethod(const MSRKTASEMethod& m);

// One step of the W-method: (I - h alpha W) Khat_i =
//   h f(t + chat_i h, y + sum_j ahat_ij Khat_j) + h alpha W sum_j l_ij Khat_j.
// One factorization, n solves. Independent stepping oracle for the MSRKTASE path.
Vec wmethod_step(const WTableau& w, const Rhs& f, const RealMatrix& jac, double t, const Vec& y,
                 double h);

// R(z) = 1 + z bhat^T (I - z(Ahat + Gamma))^{-1} 1. Throws PoleAtZ.
std::complex<double> stability_function(const WTableau& w, std::complex<double> z);

// lim_{z->inf} R(z) = 1 - bhat^T (Ahat + Gamma)^{-1} 1.
double r_infinity(const WTableau& w);

// Largest sector angle (degrees) with |R| <= 1 + 1e-12 on sampled rays,
// refined by bisection to 0.01 degrees. Radii log-spaced in [1e-6, 1e8] plus
// the z -> infinity limit.
double stability_angle(const WTableau& w, double angular_resolution_deg = 0.25,
                       int radial_samples = 400);

// Points of |R(z)| = 1 located by sign-change bisection along rays with
// arg z uniform in [90, 270] degrees; up to 3 crossings per ray.
std::vector<std::complex<double>> stability_boundary(const WTableau& w, int rays);

struct Residual {
  std::string name;
  int order;
  double value;
};

// Order conditions for W-methods (arbitrary W), up_to in {1,2,3,4}.
std::vector<Residual> order_residuals_w(const WTableau& w, int up_to);

// Reduced set for W equal to the exact Jacobian (Rosenbrock case).
std::vector<Residual> order_residuals_rosenbrock(const WTableau& w, int up_to);

// True when every residual of order <= p stays within tol.
bool order_verified(const WTableau& w, int p, double tol = 1e-10);

// Leading-error coefficient sets behind the C/D norms; exposed so reports can
// print the individual components.
Vec error_coefficients_c(const WTableau& w, int p);
Vec error_coefficients_d(const WTableau& w, int p);

// 2-norm of the order-(p+1) coefficients for general W. Throws
// OrderNotVerified when the method misses order p.
double error_norm_c(const WTableau& w, int p);

// Same with W equal to the exact Jacobian.
double error_norm_d(const WTableau& w, int p);

struct OrderBarrierReport {
  int r = 0;
  bool nilpotent = false;            // (Gamma - alpha I)^r == 0 exactly
  double max_power_entry = 0;        // largest |entry| of that power
  double max_residual_next_order = 0;
  double threshold = 0;              // alpha^r / 2
  bool barrier_confirmed = false;    // some order-(r+1) residual >= threshold
};

OrderBarrierReport order_barrier_check(const WTableau& w, int r);

}  // namespace stiffkit
