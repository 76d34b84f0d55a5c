#include "stiffkit/tase.hpp"

#include <cmath>
#include <set>
#include <string>

namespace stiffkit {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

Vec general_tase_betas(int p, const Vec& alphas) {
  if (p < 1) throw Error("general_tase_betas: order must be >= 1");
  if (static_cast<int>(alphas.size()) != p)
    throw DimensionMismatch("general_tase_betas: need exactly p shifts");
  std::set<double> distinct(alphas.begin(), alphas.end());
  if (static_cast<int>(distinct.size()) != p)
    throw Error("general_tase_betas: shifts must be pairwise distinct");
  for (double a : alphas)
    if (a <= 0) throw Error("general_tase_betas: shifts must be positive");

  // Vandermonde system: row k asks sum_j beta_j alpha_j^k = (k == 0).
  RealMatrix v(p, p);
  Vec rhs(p, 0.0);
  rhs[0] = 1.0;
  for (int j = 0; j < p; ++j) {
    double pw = 1.0;
    for (int k = 0; k < p; ++k) {
      v(k, j) = pw;
      pw *= alphas[j];
    }
  }
  LUFactorization lu(v);
  Vec beta = lu.solve(rhs);

  Vec residual = v.apply(beta);
  residual[0] -= 1.0;
  if (norm_inf(residual) > 1e-10)
    throw IllConditioned("general_tase_betas: Vandermonde residual above 1e-10");
  return beta;
}

GeneralTASE make_general_tase(int p, const Vec& alphas) {
  return GeneralTASE{p, alphas, general_tase_betas(p, alphas)};
}

Vec apply_general_tase(const GeneralTASE& op, double h, const RealMatrix& w, const Vec& v) {
  Vec out(v.size(), 0.0);
  for (int j = 0; j < op.p; ++j) {
    LUFactorization lu(shifted_identity(w, h * op.alphas[j]));
    axpy(op.betas[j], lu.solve(v), out);
  }
  return out;
}

Vec singly_tase_betas(int p, double alpha) {
  if (p < 1) throw Error("singly_tase_betas: order must be >= 1");
  if (alpha <= 0) throw Error("singly_tase_betas: alpha must be positive");
  // (1 - alpha x)^{-j} = sum_k binom(j+k-1,k) (alpha x)^k, so the alpha^k
  // factor drops out of each homogeneous condition.
  RealMatrix m(p, p);
  Vec rhs(p, 0.0);
  rhs[0] = 1.0;
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < p; ++j) m(k, j) = binomial(j + k, k);  // depth j+1
  LUFactorization lu(m);
  return lu.solve(rhs);
}

void StageOperatorSet::validate() const {
  if (r < 1 || stages < 1) throw Error("StageOperatorSet: r and stages must be >= 1");
  if (alpha <= 0) throw Error("StageOperatorSet: alpha must be positive");
  if (beta.rows() != stages || beta.cols() != r)
    throw DimensionMismatch("StageOperatorSet: beta must be stages x r");
  for (int i = 0; i < stages; ++i) {
    double sum = 0;
    for (int j = 0; j < r; ++j) sum += beta(i, j);
    if (std::abs(sum - 1.0) > 1e-12)
      throw Error("StageOperatorSet: beta row " + std::to_string(i) + " does not sum to 1");
  }
}

StageOperatorSet singly_operator_set(int stages, int p, double alpha) {
  Vec betas = singly_tase_betas(p, alpha);
  RealMatrix beta(stages, p);
  for (int i = 0; i < stages; ++i)
    for (int j = 0; j < p; ++j) beta(i, j) = betas[j];
  return StageOperatorSet{alpha, p, stages, beta};
}

Vec apply_stage_operator(const StageOperatorSet& ops, int stage, const LUFactorization& f,
                         const Vec& v) {
  if (stage < 0 || stage >= ops.stages) throw Error("apply_stage_operator: stage out of range");
  if (static_cast<int>(v.size()) != f.dimension())
    throw DimensionMismatch("apply_stage_operator: vector/factorization mismatch");
  Vec out(v.size(), 0.0);
  Vec w = v;
  for (int j = 0; j < ops.r; ++j) {
    w = f.solve(w);
    axpy(ops.beta(stage, j), w, out);
  }
  return out;
}

double tase_order_defect(const StageOperatorSet& ops, int stage, int q) {
  if (q < 1) throw Error("tase_order_defect: q must be >= 1");
  double worst = 0;
  double apow = 1.0;
  for (int k = 1; k <= q - 1; ++k) {
    apow *= ops.alpha;
    double coeff = 0;
    for (int j = 0; j < ops.r; ++j) coeff += ops.beta(stage, j) * binomial(j + k, k);
    worst = std::max(worst, std::abs(coeff * apow));
  }
  return worst;
}

}  // namespace stiffkit
