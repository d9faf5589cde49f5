#include "admmlab/planalysis.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "admmlab/errors.hpp"

namespace admmlab {

namespace {

constexpr double kGapFloor = 1e-12;

double d_star(const SeparableProblem& p, const OptimalPair& opt) {
  return side_value(p.f, opt.x_star) + side_value(p.g, opt.z_star);
}

Vector mapped_residual(const SeparableProblem& p, const Vector& x, const Vector& z) {
  return numkit::sub(numkit::add(p.A.apply(x), p.B.apply(z)), p.b);
}

PlSample sample_at(const SeparableProblem& p, double dstar, const Vector& lambda) {
  const DualValue dv = dual_value(p, lambda);
  if (!dv.bounded) throw InvalidInput("sample outside the dual domain");
  PlSample s;
  s.lambda = lambda;
  s.gap = std::max(0.0, dstar - dv.value);
  s.xi_norm_sq = numkit::norm_sq(dv.xi);
  return s;
}

}  // namespace

PlEstimate estimate_pl_constant(const SeparableProblem& p, const OptimalPair& opt,
                                const std::vector<Vector>& lambdas) {
  p.validate();
  const double dstar = d_star(p, opt);
  PlEstimate e;
  e.Lp_hat = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& l : lambdas) {
    e.samples.push_back(sample_at(p, dstar, l));
    const PlSample& s = e.samples.back();
    if (s.gap <= kGapFloor) continue;
    const double ratio = s.xi_norm_sq / (2.0 * s.gap);
    if (!any || ratio < e.Lp_hat) {
      e.Lp_hat = ratio;
      e.worst_index = e.samples.size() - 1;
    }
    any = true;
  }
  if (!any) throw InvalidInput("degenerate samples: every dual gap is zero");
  return e;
}

std::vector<Vector> sample_lambdas(const Vector& center, std::size_t count, std::uint64_t seed) {
  static constexpr double kRadii[] = {0.1, 1.0, 10.0};
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vector l = center;
    for (auto& v : l) v += kRadii[i % 3] * normal(gen);
    out.push_back(std::move(l));
  }
  return out;
}

InnerProductCheck lemma_inner_product_check(const SeparableProblem& p, const Vector& lambda1,
                                            const Vector& z1_choice, double t) {
  p.validate();
  if (!(t > 0.0)) throw InvalidInput("t must be positive");
  const DualValue dv = dual_value(p, lambda1);
  if (!dv.bounded) throw Unbounded("dual function is -inf at lambda1");
  Vector z1 = dv.z_hat;
  if (!z1_choice.empty()) {
    if (z1_choice.size() != p.m()) throw InvalidInput("z1_choice has wrong dimension");
    z1 = z1_choice;
  }
  const Vector w1 = mapped_residual(p, dv.x_hat, z1);
  AdmmTrace tr = admm_run(p, AdmmConfig{t, 1, lambda1, z1});
  const Vector w2 = mapped_residual(p, tr.x(1), tr.z(1));
  InnerProductCheck c;
  c.lhs = numkit::dot(w1, w2);
  c.rhs = numkit::norm_sq(w1);
  c.lambda2 = tr.lambda(1);
  return c;
}

InnerProductCheck lemma_inner_product_check(const SeparableProblem& p, const OptimalPair& opt,
                                            const Vector& lambda1, double t) {
  InnerProductCheck c = lemma_inner_product_check(p, lambda1, Vector{}, t);
  const double dstar = d_star(p, opt);
  const DualValue d1 = dual_value(p, lambda1);
  const DualValue d2 = dual_value(p, c.lambda2);
  const double g1 = dstar - d1.value;
  if (g1 > kGapFloor && d2.bounded) c.gap_ratio = std::max(0.0, dstar - d2.value) / g1;
  return c;
}

double observed_contraction(const SeparableProblem& p, const OptimalPair& opt, double t,
                            const std::vector<Vector>& lambdas) {
  double worst = 0.0;
  for (const auto& l : lambdas) worst = std::max(worst, lemma_inner_product_check(p, opt, l, t).gap_ratio);
  return worst;
}

NecessityReport necessity_probe(const SeparableProblem& p, const OptimalPair& opt, double gamma, double t,
                                const std::vector<Vector>& lambdas) {
  p.validate();
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidInput("gamma must lie in [0, 1)");
  if (!(t > 0.0)) throw InvalidInput("t must be positive");
  const double dstar = d_star(p, opt);
  NecessityReport r;
  r.gamma = gamma;
  r.t = t;
  r.implied_Lp = (1.0 - gamma) / (2.0 * t);
  const double k = t / (1.0 - gamma);
  for (const auto& l : lambdas) {
    const PlSample s = sample_at(p, dstar, l);
    ++r.n_samples;
    const double bound = k * s.xi_norm_sq;
    if (s.gap <= kGapFloor && bound <= kGapFloor) continue;
    if (bound <= 0.0) {
      r.worst_ratio = std::numeric_limits<double>::infinity();
      r.pass = false;
      continue;
    }
    const double ratio = s.gap / bound;
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (s.gap > bound + 1e-12) r.pass = false;
  }
  return r;
}

std::string pl_report_json(const PlEstimate& e) {
  nlohmann::ordered_json j;
  j["Lp_hat"] = e.Lp_hat;
  j["n_samples"] = e.samples.size();
  const PlSample& w = e.samples.at(e.worst_index);
  j["worst_sample"] = {{"lambda", w.lambda}, {"gap", w.gap}, {"xi_norm_sq", w.xi_norm_sq}};
  return j.dump(2) + "\n";
}

std::string pl_report_csv(const PlEstimate& e) {
  std::ostringstream out;
  out << "index,lambda,gap,xi_norm_sq,worst\n";
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    const auto& s = e.samples[i];
    out << i << ',';
    for (std::size_t k = 0; k < s.lambda.size(); ++k) out << (k ? ";" : "") << format_number(s.lambda[k]);
    out << ',' << format_number(s.gap) << ',' << format_number(s.xi_norm_sq) << ',' << (i == e.worst_index ? 1 : 0)
        << '\n';
  }
  out << "# Lp_hat," << format_number(e.Lp_hat) << '\n';
  return out.str();
}

}  // namespace admmlab
