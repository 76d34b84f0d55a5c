#pragma once

#include <array>
#include <string>
#include <vector>

#include "stiffkit/tase.hpp"

namespace stiffkit {

// Explicit Runge-Kutta coefficients; A strictly lower triangular, c = A*1.
struct RKTableau {
  int s = 0;
  RealMatrix a;
  Vec b;
  Vec c;

  void validate() const;
};

struct MSRKTASEMethod {
  std::string name;
  RKTableau tableau;
  StageOperatorSet operators;
  int declared_order = 0;
};

// Two-stage order-2 scheme with c2 = 2/3, b = (1/4, 3/4).
RKTableau rk2_tableau();

// Three-stage order-3 family in (c2, c3); throws DegenerateFamily when
// c2 in {0, 2/3}, c3 = 0 or c2 = c3.
RKTableau rk3_tableau(double c2, double c3);

// s = r = 2, order 2, L-stable by construction. A-stability additionally
// needs alpha inside [kMsrktase2AlphaMin, kMsrktase2AlphaMax].
MSRKTASEMethod derive_msrktase2(double alpha);

inline constexpr double kMsrktase2AlphaMin = 0.3117;
inline constexpr double kMsrktase2AlphaMax = 3.257;

// s = r = 3, order 3; beta12/beta13/beta23/beta33 resolved in closed form from
// the four stage-operator order conditions.
MSRKTASEMethod derive_msrktase3(double alpha, double beta22, double beta32, double c2, double c3);

// The two beta32 values (ascending) that give the s = r = 3 family a vanishing
// stability-function limit at infinity. Throws NoRealRoot / DegenerateFamily.
std::array<double, 2> solve_beta32_linfinity(double alpha, double beta22);

// beta22 that cancels the leading exact-Jacobian error coefficient.
double beta22_vanishing_d41(double alpha);

// Named methods: SRKTASE2, MSRKTASE2, SRKTASE3, MSRKTASE3a, MSRKTASE3b.
// Built once per process; beta32 roots are resolved by the larger computed
// stability angle (ties toward smaller |beta32|).
const std::vector<MSRKTASEMethod>& catalog();

const MSRKTASEMethod& catalog_method(const std::string& name);  // throws UnknownMethod

// Method cards: JSON with coefficients as decimal strings (>= 17 significant
// digits) so exported methods survive a round trip bit-exactly.
std::string method_card_json(const MSRKTASEMethod& m);
MSRKTASEMethod method_card_from_json(const std::string& text);

}  // namespace stiffkit
