#include "stiffkit/methods.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>

#include <json.hpp>

#include "stiffkit/analysis.hpp"

namespace stiffkit {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_number(const nlohmann::json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

void RKTableau::validate() const {
  if (s < 1) throw Error("RKTableau: needs at least one stage");
  if (a.rows() != s || a.cols() != s || static_cast<int>(b.size()) != s ||
      static_cast<int>(c.size()) != s)
    throw DimensionMismatch("RKTableau: inconsistent sizes");
  for (int i = 0; i < s; ++i) {
    double rowsum = 0;
    for (int j = 0; j < s; ++j) {
      if (j >= i && a(i, j) != 0.0) throw Error("RKTableau: A must be strictly lower triangular");
      rowsum += a(i, j);
    }
    if (std::abs(rowsum - c[i]) > 1e-12) throw Error("RKTableau: c_i must equal row sum of A");
  }
}

RKTableau rk2_tableau() {
  const double c2 = 2.0 / 3.0;
  RKTableau t;
  t.s = 2;
  t.a = RealMatrix(2, 2);
  t.a(1, 0) = c2;
  t.b = {1.0 - 1.0 / (2.0 * c2), 1.0 / (2.0 * c2)};
  t.c = {0.0, c2};
  t.validate();
  return t;
}

RKTableau rk3_tableau(double c2, double c3) {
  if (c2 == 0.0 || c3 == 0.0 || c2 == c3 || std::abs(3.0 * c2 - 2.0) < 1e-14)
    throw DegenerateFamily("rk3_tableau: need c2 not in {0, 2/3}, c3 != 0, c2 != c3");
  RKTableau t;
  t.s = 3;
  t.a = RealMatrix(3, 3);
  const double a32 = c3 * (c2 - c3) / (c2 * (3.0 * c2 - 2.0));
  t.a(1, 0) = c2;
  t.a(2, 1) = a32;
  t.a(2, 0) = c3 - a32;
  const double b2 = (2.0 - 3.0 * c3) / (6.0 * c2 * (c2 - c3));
  const double b3 = (2.0 - 3.0 * c2) / (6.0 * c3 * (c3 - c2));
  t.b = {1.0 - b2 - b3, b2, b3};
  t.c = {0.0, c2, c3};
  t.validate();
  return t;
}

MSRKTASEMethod derive_msrktase2(double alpha) {
  const double disc = 16.0 - 12.0 * alpha + 6.0 * alpha * alpha;
  if (disc < 0) throw NegativeDiscriminant("derive_msrktase2: discriminant negative");
  const double beta12 = -3.0 + std::sqrt(disc);
  const double beta22 = -(4.0 + beta12) / 3.0;

  MSRKTASEMethod m;
  m.name = "ms2(alpha=" + fmt17(alpha) + ")";
  m.tableau = rk2_tableau();
  m.operators.alpha = alpha;
  m.operators.r = 2;
  m.operators.stages = 2;
  m.operators.beta = RealMatrix(2, 2);
  m.operators.beta(0, 0) = 1.0 - beta12;
  m.operators.beta(0, 1) = beta12;
  m.operators.beta(1, 0) = 1.0 - beta22;
  m.operators.beta(1, 1) = beta22;
  m.operators.validate();
  m.declared_order = 2;
  return m;
}

MSRKTASEMethod derive_msrktase3(double alpha, double beta22, double beta32, double c2, double c3) {
  RKTableau tab = rk3_tableau(c2, c3);
  const double den = (c2 - c3) * (2.0 - 3.0 * c3 + c2 * (-3.0 + 6.0 * c3));
  if (std::abs(den) < 1e-14)
    throw DegenerateFamily("derive_msrktase3: 2 - 3 c3 + c2 (-3 + 6 c3) vanishes");

  const double beta12 = (c3 * (-2.0 + 3.0 * c3) * beta22 - 3.0 * c2 * c2 * (6.0 * c3 + beta32) +
                         2.0 * c2 * (9.0 * c3 * c3 + beta32)) /
                        den;
  const double beta13 = -(c3 * (-2.0 + 3.0 * c3) * (1.0 + beta22) -
                          3.0 * c2 * c2 * (1.0 + 4.0 * c3 + beta32) +
                          2.0 * c2 * (1.0 + 6.0 * c3 * c3 + beta32)) /
                        (2.0 * den);
  const double beta23 = 0.5 * (-1.0 - beta22);
  const double beta33 = 0.5 * (-1.0 - beta32);

  MSRKTASEMethod m;
  m.name = "ms3(alpha=" + fmt17(alpha) + ")";
  m.tableau = tab;
  m.operators.alpha = alpha;
  m.operators.r = 3;
  m.operators.stages = 3;
  m.operators.beta = RealMatrix(3, 3);
  m.operators.beta(0, 0) = 1.0 - beta12 - beta13;
  m.operators.beta(0, 1) = beta12;
  m.operators.beta(0, 2) = beta13;
  m.operators.beta(1, 0) = 1.0 - beta22 - beta23;
  m.operators.beta(1, 1) = beta22;
  m.operators.beta(1, 2) = beta23;
  m.operators.beta(2, 0) = 1.0 - beta32 - beta33;
  m.operators.beta(2, 1) = beta32;
  m.operators.beta(2, 2) = beta33;
  m.operators.validate();
  m.declared_order = 3;
  return m;
}

std::array<double, 2> solve_beta32_linfinity(double alpha, double beta22) {
  if (alpha == 0.0) throw Error("solve_beta32_linfinity: alpha must be nonzero");
  // Numerator of R(inf) as a quadratic in beta32:
  //   a0 + a1 alpha - 288 alpha^2 + 96 alpha^3 = 0 with
  //   a0 = -(-3 + beta22)(-3 + beta32)(33 + 3 beta22 + 4 beta32).
  const double s = 3.0 - beta22;
  const double qa = 4.0 * s;
  const double qb = s * (21.0 + 3.0 * beta22);
  const double qc = -9.0 * (11.0 + beta22) * s +
                    6.0 * (45.0 - 12.0 * beta22 - beta22 * beta22) * alpha -
                    288.0 * alpha * alpha + 96.0 * alpha * alpha * alpha;
  if (std::abs(qa) < 1e-14)
    throw DegenerateFamily("solve_beta32_linfinity: quadratic degenerates at beta22 = 3");
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0) throw NoRealRoot("solve_beta32_linfinity: negative discriminant");
  const double sq = std::sqrt(disc);
  // Stable quadratic roots.
  const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
  double r1 = q / qa;
  double r2 = (q != 0.0) ? qc / q : (-qb - r1 * qa) / qa;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double beta22_vanishing_d41(double alpha) {
  if (alpha == 0.0) throw Error("beta22_vanishing_d41: alpha must be nonzero");
  return -3.0 - 1.0 / (3.0 * alpha * alpha) + 8.0 * alpha;
}

namespace {

MSRKTASEMethod named(MSRKTASEMethod m, const char* name) {
  m.name = name;
  return m;
}

// Coarse scan is plenty to rank the two candidate roots; the precise angle is
// recomputed on demand by callers that need it.
double coarse_angle(const MSRKTASEMethod& m) {
  return stability_angle(to_wmethod(m), 1.0, 160);
}

double select_beta32(double alpha, double beta22, double c2, double c3) {
  const auto roots = solve_beta32_linfinity(alpha, beta22);
  const MSRKTASEMethod lo = derive_msrktase3(alpha, beta22, roots[0], c2, c3);
  const MSRKTASEMethod hi = derive_msrktase3(alpha, beta22, roots[1], c2, c3);
  const double angle_lo = coarse_angle(lo);
  const double angle_hi = coarse_angle(hi);
  if (std::abs(angle_lo - angle_hi) < 0.5)
    return std::abs(roots[0]) <= std::abs(roots[1]) ? roots[0] : roots[1];
  return angle_lo > angle_hi ? roots[0] : roots[1];
}

std::vector<MSRKTASEMethod> build_catalog() {
  std::vector<MSRKTASEMethod> out;

  MSRKTASEMethod srktase2;
  srktase2.name = "SRKTASE2";
  srktase2.tableau = rk2_tableau();
  srktase2.operators = singly_operator_set(2, 2, 2.0);
  srktase2.declared_order = 2;
  out.push_back(srktase2);

  out.push_back(named(derive_msrktase2(0.32), "MSRKTASE2"));

  MSRKTASEMethod srktase3;
  srktase3.name = "SRKTASE3";
  srktase3.tableau = rk3_tableau(0.5, 0.75);
  srktase3.operators = singly_operator_set(3, 3, 1.8868);
  srktase3.declared_order = 3;
  out.push_back(srktase3);

  {
    const double alpha = 0.54, beta22 = -6.1;
    const double beta32 = select_beta32(alpha, beta22, 0.5, 0.75);
    out.push_back(named(derive_msrktase3(alpha, beta22, beta32, 0.5, 0.75), "MSRKTASE3a"));
  }
  {
    const double alpha = 0.56;
    const double beta22 = beta22_vanishing_d41(alpha);
    const double beta32 = select_beta32(alpha, beta22, 0.5, 0.75);
    out.push_back(named(derive_msrktase3(alpha, beta22, beta32, 0.5, 0.75), "MSRKTASE3b"));
  }
  return out;
}

}  // namespace

const std::vector<MSRKTASEMethod>& catalog() {
  static const std::vector<MSRKTASEMethod> methods = build_catalog();
  return methods;
}

const MSRKTASEMethod& catalog_method(const std::string& name) {
  for (const auto& m : catalog())
    if (m.name == name) return m;
  throw UnknownMethod("no cataloged method named '" + name + "'");
}

std::string method_card_json(const MSRKTASEMethod& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["s"] = m.tableau.s;
  j["r"] = m.operators.r;
  j["alpha"] = fmt17(m.operators.alpha);
  j["declared_order"] = m.declared_order;
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < m.tableau.s; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.tableau.s; ++k) row.push_back(fmt17(m.tableau.a(i, k)));
    a.push_back(row);
  }
  j["A"] = a;
  nlohmann::json b = nlohmann::json::array(), c = nlohmann::json::array();
  for (int i = 0; i < m.tableau.s; ++i) {
    b.push_back(fmt17(m.tableau.b[i]));
    c.push_back(fmt17(m.tableau.c[i]));
  }
  j["b"] = b;
  j["c"] = c;
  nlohmann::json beta = nlohmann::json::array();
  for (int i = 0; i < m.operators.stages; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.operators.r; ++k) row.push_back(fmt17(m.operators.beta(i, k)));
    beta.push_back(row);
  }
  j["beta"] = beta;
  return j.dump(2);
}

MSRKTASEMethod method_card_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MSRKTASEMethod m;
  m.name = j.at("name").get<std::string>();
  const int s = j.at("s").get<int>();
  const int r = j.at("r").get<int>();
  m.declared_order = j.at("declared_order").get<int>();
  m.tableau.s = s;
  m.tableau.a = RealMatrix(s, s);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < s; ++k) m.tableau.a(i, k) = parse_number(j.at("A").at(i).at(k));
  m.tableau.b.resize(s);
  m.tableau.c.resize(s);
  for (int i = 0; i < s; ++i) {
    m.tableau.b[i] = parse_number(j.at("b").at(i));
    m.tableau.c[i] = parse_number(j.at("c").at(i));
  }
  m.tableau.validate();
  m.operators.alpha = parse_number(j.at("alpha"));
  m.operators.r = r;
  m.operators.stages = s;
  m.operators.beta = RealMatrix(s, r);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < r; ++k) m.operators.beta(i, k) = parse_number(j.at("beta").at(i).at(k));
  m.operators.validate();
  return m;
}

}  // namespace stiffkit
