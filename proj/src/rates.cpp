#include "admmlab/rates.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "admmlab/admm.hpp"
#include "admmlab/errors.hpp"

namespace admmlab {

namespace {

void check_section3(double Delta, double t, int N, double c1) {
  if (!(t > 0.0)) throw OutOfRegime("t > 0");
  if (!(t <= c1)) throw OutOfRegime("t <= c1");
  if (N < 4) throw OutOfRegime("N >= 4");
  if (!(Delta >= 0.0)) throw OutOfRegime("Delta >= 0");
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw InvalidInput(std::string("missing parameter ") + name);
  if (!std::isfinite(*v) || *v < 0.0) throw InvalidInput(std::string("parameter must be nonnegative: ") + name);
  return *v;
}

}  // namespace

double bound_dual_gap(double Delta, double t, int N, double c1) {
  check_section3(Delta, t, N, c1);
  return Delta / (4.0 * N * t);
}

double bound_primal_residual(double Delta, double t, int N, double c1) {
  check_section3(Delta, t, N, c1);
  return std::sqrt(Delta) / (t * N);
}

double bound_dual_residual(double Delta, double t, int N, double c1) {
  check_section3(Delta, t, N, c1);
  return std::sqrt(Delta) / ((N - 1) * t);
}

double goldstein_step_cap(const RateParams& p) {
  const double mu1 = need(p.mu1, "mu1"), mu2 = need(p.mu2, "mu2");
  const double la = need(p.lam_max_AtA, "lam_max_AtA"), lb = need(p.lam_max_BtB, "lam_max_BtB");
  if (!(mu1 > 0.0 && mu2 > 0.0)) throw OutOfRegime("mu1 > 0 and mu2 > 0");
  if (!(la > 0.0 && lb > 0.0)) throw InvalidInput("spectral bounds must be positive");
  return std::cbrt(mu1 * mu2 * mu2 / (la * lb * lb));
}

double goldstein_bound(const RateParams& p, double dist1_sq) {
  if (!(dist1_sq >= 0.0)) throw InvalidInput("dist1_sq must be nonnegative");
  if (!(p.t > 0.0)) throw OutOfRegime("t > 0");
  if (p.N < 2) throw OutOfRegime("N >= 2");
  if (!(p.t <= goldstein_step_cap(p))) throw OutOfRegime("t <= cbrt(mu1 mu2^2 / (lam_max(A^T A) lam_max(B^T B)^2))");
  return dist1_sq / (2.0 * p.t * (p.N - 1));
}

double pl_linear_rate(double c1, double c2, double t, double Lp) {
  if (!(c1 > 0.0 && c2 > 0.0)) throw OutOfRegime("c1 > 0 and c2 > 0");
  if (!(Lp > 0.0)) throw OutOfRegime("Lp > 0");
  if (!(t > 0.0)) throw OutOfRegime("t > 0");
  if (!(t <= std::sqrt(c1 * c2))) throw OutOfRegime("t <= sqrt(c1 c2)");
  if (c1 >= c2) {
    const double a = 2.0 * c1 * c2 - t * t;
    return a / (a + Lp * t * (4.0 * c1 * c2 - c2 * t - 2.0 * t * t));
  }
  const double s = std::sqrt(c1 * c2);
  const double a = 4.0 * c2 * c2 - 2.0 * c2 * s - t * t;
  return a / (a + Lp * t * (8.0 * c2 * c2 + 5.0 * c2 * t - 2.0 * s * (1.0 + t / c1) * (2.0 * c2 + t)));
}

double pl_linear_rate_boundary(double c1, double c2, double Lp) {
  if (!(c1 > 0.0 && c2 > 0.0)) throw OutOfRegime("c1 > 0 and c2 > 0");
  if (!(c1 >= c2)) throw OutOfRegime("c1 >= c2");
  if (!(Lp > 0.0)) throw OutOfRegime("Lp > 0");
  return 1.0 / (1.0 + Lp * (2.0 * std::sqrt(c1 * c2) - c2));
}

std::string to_string(Scenario s) { return s == Scenario::S1 ? "S1" : "S2"; }

Scenario parse_scenario(const std::string& tag) {
  if (tag == "S1" || tag == "s1") return Scenario::S1;
  if (tag == "S2" || tag == "s2") return Scenario::S2;
  throw UnsupportedKind("unknown scenario: " + tag);
}

double Contraction::bound(double V0, int N) const { return V0 * rho_coefficient * std::pow(factor, N); }

Contraction rlinear_contraction(Scenario s, const RateParams& p) {
  const double L = need(p.L, "L");
  if (!(L > 0.0)) throw InvalidInput("L must be positive");
  if (!(p.t > 0.0)) throw OutOfRegime("t > 0");
  if (!(p.c1 > 0.0)) throw OutOfRegime("c1 > 0");
  const double t = p.t;
  Contraction out;
  if (s == Scenario::S1) {
    const double lm = need(p.lam_min_AAt, "lam_min_AAt");
    if (!(lm > 0.0)) throw OutOfRegime("A has full row rank (lam_min(A A^T) > 0)");
    if (!(t < p.c1)) throw OutOfRegime("t < c1");
    if (!(t < std::sqrt(p.c1 * L / lm))) throw OutOfRegime("t < sqrt(c1 L / lam_min(A A^T))");
    if (p.N > 0 && p.N < 4) throw OutOfRegime("N >= 4");
    const double d = L / lm;
    out.factor = 1.0 - 2.0 * p.c1 * t / (p.c1 * d + 2.0 * p.c1 * t + t * t);
    out.rho_coefficient = std::pow(out.factor, -4) / (16.0 * t);
  } else {
    const double lm = need(p.lam_min_BBt, "lam_min_BBt");
    if (!(lm > 0.0)) throw OutOfRegime("B has full row rank (lam_min(B B^T) > 0)");
    if (!(t < p.c1 / 2.0)) throw OutOfRegime("t < c1/2");
    if (!(t < L / (2.0 * lm))) throw OutOfRegime("t < L / (2 lam_min(B B^T))");
    if (p.N > 0 && p.N < 5) throw OutOfRegime("N >= 5");
    const double r = L / (L + t * lm);
    out.factor = r * r;
    out.rho_coefficient = std::pow(out.factor, -5) / (16.0 * t);
  }
  return out;
}

double eb_to_pl(double La, double tau) {
  if (!(La > 0.0) || !(tau > 0.0) || !std::isfinite(La) || !std::isfinite(tau))
    throw InvalidInput("eb_to_pl: La and tau must be positive");
  return 1.0 / (La * tau * tau);
}

double pl_to_eb(double Lp, double a) {
  if (!(Lp > 0.0) || !(a > 0.0) || !std::isfinite(Lp) || !std::isfinite(a))
    throw InvalidInput("pl_to_eb: Lp and a must be positive");
  return Lp / (1.0 + a * Lp);
}

namespace {

std::string param_string(const std::vector<std::pair<std::string, double>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += ';';
    s += k + '=' + format_number(v);
  }
  return s;
}

RateRow evaluate_row(const std::string& formula, const std::vector<std::pair<std::string, double>>& kv,
                     const std::function<double()>& f) {
  RateRow r{formula, param_string(kv), std::numeric_limits<double>::quiet_NaN(), false};
  try {
    r.value = f();
    r.in_regime = true;
  } catch (const OutOfRegime&) {
  } catch (const InvalidInput&) {
  }
  return r;
}

}  // namespace

std::vector<RateRow> rate_table(const RateParams& p, double Delta) {
  std::vector<RateRow> rows;
  const std::vector<std::pair<std::string, double>> s3 = {
      {"Delta", Delta}, {"t", p.t}, {"N", p.N}, {"c1", p.c1}};
  rows.push_back(evaluate_row("dual_gap", s3, [&] { return bound_dual_gap(Delta, p.t, p.N, p.c1); }));
  rows.push_back(evaluate_row("primal_residual", s3, [&] { return bound_primal_residual(Delta, p.t, p.N, p.c1); }));
  rows.push_back(evaluate_row("dual_residual", s3, [&] { return bound_dual_residual(Delta, p.t, p.N, p.c1); }));

  std::vector<std::pair<std::string, double>> g = {{"dist1_sq", Delta}, {"t", p.t}, {"N", p.N}};
  if (p.mu1) g.emplace_back("mu1", *p.mu1);
  if (p.mu2) g.emplace_back("mu2", *p.mu2);
  if (p.lam_max_AtA) g.emplace_back("lam_max_AtA", *p.lam_max_AtA);
  if (p.lam_max_BtB) g.emplace_back("lam_max_BtB", *p.lam_max_BtB);
  rows.push_back(evaluate_row("goldstein", g, [&] { return goldstein_bound(p, Delta); }));

  const double Lp = p.Lp.value_or(std::numeric_limits<double>::quiet_NaN());
  const std::vector<std::pair<std::string, double>> pl = {{"c1", p.c1}, {"c2", p.c2}, {"t", p.t}, {"Lp", Lp}};
  rows.push_back(evaluate_row("pl_linear_rate", pl, [&] {
    if (!p.Lp) throw InvalidInput("missing Lp");
    return pl_linear_rate(p.c1, p.c2, p.t, *p.Lp);
  }));

  for (Scenario s : {Scenario::S1, Scenario::S2}) {
    std::vector<std::pair<std::string, double>> kv = {{"c1", p.c1}, {"t", p.t}};
    if (p.L) kv.emplace_back("L", *p.L);
    if (s == Scenario::S1 && p.lam_min_AAt) kv.emplace_back("lam_min_AAt", *p.lam_min_AAt);
    if (s == Scenario::S2 && p.lam_min_BBt) kv.emplace_back("lam_min_BBt", *p.lam_min_BBt);
    const std::string name = "rlinear_" + to_string(s);
    rows.push_back(evaluate_row(name + "_factor", kv, [&] { return rlinear_contraction(s, p).factor; }));
    rows.push_back(evaluate_row(name + "_rho_coefficient", kv, [&] { return rlinear_contraction(s, p).rho_coefficient; }));
  }
  return rows;
}

std::string rate_table_to_csv(const std::vector<RateRow>& rows) {
  std::ostringstream out;
  out << "formula,params,value,in_regime\n";
  for (const auto& r : rows)
    out << r.formula << ',' << r.params << ',' << (r.in_regime ? format_number(r.value) : std::string("nan")) << ','
        << (r.in_regime ? "true" : "false") << '\n';
  return out.str();
}

std::string rate_table_to_json(const std::vector<RateRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["formula"] = r.formula;
    o["params"] = r.params;
    o["value"] = r.in_regime ? nlohmann::ordered_json(r.value) : nlohmann::ordered_json(nullptr);
    o["in_regime"] = r.in_regime;
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

}  // namespace admmlab
