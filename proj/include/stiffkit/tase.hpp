#pragma once

#include <vector>

#include "stiffkit/linalg.hpp"

namespace stiffkit {

// T(h) = sum_j beta_j (I - alpha_j h W)^{-1} with p distinct shifts; each
// application costs p factorizations, which is what the singly family avoids.
struct GeneralTASE {
  int p = 0;
  Vec alphas;
  Vec betas;
};

// Unique betas with sum beta_j = 1 and sum beta_j alpha_j^k = 0, k = 1..p-1.
Vec general_tase_betas(int p, const Vec& alphas);  // throws IllConditioned

GeneralTASE make_general_tase(int p, const Vec& alphas);

Vec apply_general_tase(const GeneralTASE& op, double h, const RealMatrix& w, const Vec& v);

// Betas of sum_j beta_j (I - alpha h W)^{-j} = I + O(h^p); independent of alpha.
Vec singly_tase_betas(int p, double alpha);

// Stage-wise operators T_i = sum_j beta(i,j) (I - alpha h W)^{-j} sharing one
// shift alpha and depth r across the s stages. Rows of beta sum to 1.
struct StageOperatorSet {
  double alpha = 0;
  int r = 0;
  int stages = 0;
  RealMatrix beta;  // stages x r

  void validate() const;
};

StageOperatorSet singly_operator_set(int stages, int p, double alpha);

// T_i v computed as r chained solves against the shared factorization of
// (I - h alpha W); never refactorizes.
Vec apply_stage_operator(const StageOperatorSet& ops, int stage, const LUFactorization& f,
                         const Vec& v);

// Largest violated scalar-expansion coefficient of T_i = I + O(h^q):
// max_{k=1..q-1} |sum_j beta(i,j) binom(j+k-1,k) alpha^k|; 0 means order >= q.
double tase_order_defect(const StageOperatorSet& ops, int stage, int q);

double binomial(int n, int k);

}  // namespace stiffkit
