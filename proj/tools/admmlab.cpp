// admmlab command-line front end.
//
// Exit codes: 0 success/pass, 1 verification failure, 2 invalid input,
// 3 solver did not converge.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "admmlab/admm.hpp"
#include "admmlab/certificates.hpp"
#include "admmlab/errors.hpp"
#include "admmlab/gallery.hpp"
#include "admmlab/instance_json.hpp"
#include "admmlab/pep.hpp"
#include "admmlab/planalysis.hpp"
#include "admmlab/rates.hpp"
#include "admmlab/sdpa.hpp"

using namespace admmlab;
using nlohmann::ordered_json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInvalid = 2;
constexpr int kNoConvergence = 3;

struct Output {
  std::string json_path;
  std::string csv_path;
};

std::string resolve(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("ADMMLAB_OUTPUT_DIR"); dir && *dir) return (fs::path(dir) / p).string();
  return path;
}

void write_file(const std::string& path, const std::string& text) {
  const std::string full = resolve(path);
  std::ofstream f(full, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + full);
  f << text;
  if (!f) throw IoError("write failed: " + full);
}

void emit(const Output& out, const std::function<std::string()>& json, const std::function<std::string()>& csv) {
  if (!out.json_path.empty()) write_file(out.json_path, json());
  if (!out.csv_path.empty()) write_file(out.csv_path, csv());
}

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--json", out.json_path, "write a JSON report to this path");
  cmd->add_option("--csv", out.csv_path, "write a CSV report to this path");
}

std::string num(double v) { return format_number(v); }

ordered_json vec_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x == 0.0 ? 0.0 : x);
  return a;
}

// Tight-kind bound attained at iteration N.
double tight_bound(GalleryKind kind, int N, double t, double c1) {
  switch (kind) {
    case GalleryKind::dual_gap_tight: return bound_dual_gap(1.0, t, N, c1);
    case GalleryKind::primal_residual_tight: return bound_primal_residual(1.0, t, N, c1);
    case GalleryKind::dual_residual_tight: return bound_dual_residual(1.0, t, N, c1);
    case GalleryKind::pl_l1_quadratic: break;
  }
  throw UnsupportedKind("no closed-form bound for " + to_string(kind));
}

struct LoadedInstance {
  SeparableProblem problem;
  AdmmConfig config;
  std::optional<OptimalPair> optimal;
  std::optional<GalleryKind> kind;
};

LoadedInstance load(const std::string& kind_tag, const std::string& instance_path, int N, double t, double c1,
                    int n) {
  LoadedInstance li;
  if (!instance_path.empty()) {
    if (!kind_tag.empty()) throw InvalidInput("--kind and --instance are mutually exclusive");
    InstanceFile f = load_instance_json(instance_path);
    li.problem = std::move(f.problem);
    li.config.t = t;
    li.config.N = N;
    li.config.lambda0 = f.lambda0.value_or(Vector(li.problem.r(), 0.0));
    li.config.z0 = f.z0.value_or(Vector(li.problem.m(), 0.0));
    li.optimal = f.optimal;
    return li;
  }
  if (kind_tag.empty()) throw InvalidInput("one of --kind or --instance is required");
  const GalleryKind k = parse_gallery_kind(kind_tag);
  GalleryInstance g = make_instance(k, N, t, c1, n);
  li.problem = std::move(g.problem);
  li.config = std::move(g.config);
  li.optimal = std::move(g.optimal);
  li.kind = k;
  return li;
}

std::string trace_json(const SeparableProblem& p, const AdmmTrace& tr, const std::optional<OptimalPair>& opt) {
  ordered_json j;
  j["t"] = tr.t;
  j["N"] = tr.N;
  ordered_json xs = ordered_json::array(), zs = ordered_json::array(), ls = ordered_json::array();
  for (const auto& x : tr.xs) xs.push_back(vec_json(x));
  for (const auto& z : tr.zs) zs.push_back(vec_json(z));
  for (const auto& l : tr.lambdas) ls.push_back(vec_json(l));
  j["x"] = xs;
  j["z"] = zs;
  j["lambda"] = ls;
  j["primal_residual"] = tr.primal_residuals;
  ordered_json dv = ordered_json::array();
  for (const auto& d : tr.dual_values) dv.push_back(d ? ordered_json(*d) : ordered_json("unbounded"));
  j["dual_value"] = dv;
  if (opt) j["lyapunov"] = lyapunov_sequence(p, tr, *opt);
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------------ commands

struct RunArgs {
  std::string kind, instance;
  int N = 4;
  double t = 1.0, c1 = 1.0;
  int n = 1;
  Output out;
};

int cmd_run(const RunArgs& a) {
  LoadedInstance li = load(a.kind, a.instance, a.N, a.t, a.c1, a.n);
  const AdmmTrace tr = admm_run(li.problem, li.config);
  std::cout << "iterations " << tr.N << "\n";
  std::cout << "primal_residual " << num(tr.primal_residuals.back()) << "\n";
  if (tr.dual_values.back()) std::cout << "dual_value " << num(*tr.dual_values.back()) << "\n";
  else std::cout << "dual_value unbounded\n";
  if (li.optimal) {
    const double dstar = side_value(li.problem.f, li.optimal->x_star) + side_value(li.problem.g, li.optimal->z_star);
    if (tr.dual_values.back()) std::cout << "dual_gap " << num(dstar - *tr.dual_values.back()) << "\n";
  }
  emit(a.out, [&] { return trace_json(li.problem, tr, li.optimal); },
       [&] { return trace_to_csv(li.problem, tr, li.optimal); });
  return kPass;
}

int cmd_verify(const RunArgs& a) {
  if (a.kind.empty()) throw InvalidInput("--kind is required");
  const GalleryKind kind = parse_gallery_kind(a.kind);
  const GalleryInstance inst = make_instance(kind, a.N, a.t, a.c1, a.n);
  const AdmmTrace tr = admm_run(inst.problem, inst.config);
  ordered_json j;
  j["kind"] = to_string(kind);
  j["N"] = a.N;
  j["t"] = a.t;
  bool pass = true;
  if (kind == GalleryKind::pl_l1_quadratic) {
    // Two-step contraction of the dual gap against the PL rate.
    const auto lambdas = sample_lambdas(inst.optimal.lambda_star, 100, 0);
    const PlEstimate est = estimate_pl_constant(inst.problem, inst.optimal, lambdas);
    const AdmmTrace t2 = admm_run(inst.problem, AdmmConfig{a.t, 2, inst.config.lambda0, inst.config.z0});
    const double dstar = inst.optimal.f_star + inst.optimal.g_star;
    const double g1 = dstar - t2.dual_values[1].value();
    const double g2 = dstar - t2.dual_values[2].value();
    const double ratio = g1 > 0.0 ? g2 / g1 : 0.0;
    const double rate = pl_linear_rate(1.0, 1.0, a.t, est.Lp_hat);
    pass = ratio <= rate + 1e-9;
    std::cout << "Lp_hat " << num(est.Lp_hat) << "\nratio " << num(ratio) << "\nrate " << num(rate) << "\n";
    j["Lp_hat"] = est.Lp_hat;
    j["ratio"] = ratio;
    j["rate"] = rate;
  } else {
    const double measured = measured_metric(kind, inst, tr);
    const double bound = tight_bound(kind, a.N, a.t, a.c1);
    pass = std::abs(measured - bound) <= 1e-9;
    std::cout << "measured " << num(measured) << "\nbound " << num(bound) << "\n";
    j["measured"] = measured;
    j["bound"] = bound;
  }
  j["pass"] = pass;
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  emit(a.out, [&] { return j.dump(2) + "\n"; },
       [&] { return trace_to_csv(inst.problem, tr, inst.optimal); });
  return pass ? kPass : kFail;
}

struct CertArgs {
  std::string kind = "E";
  int N = 4;
  double c = 1.0;
  int grid = 101;
  unsigned workers = 0;
  bool row_reduction = false;
  Output out;
};

int cmd_certificate(const CertArgs& a) {
  const CertificateKind kind = parse_certificate_kind(a.kind);
  const SweepResult s = psd_sweep(kind, a.N, a.c, a.grid, a.workers);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : s.reports) worst = std::min(worst, r.min_eigenvalue);
  std::cout << "kind " << to_string(kind) << "\nN " << a.N << "\nmin_eigenvalue " << num(worst) << "\n";
  bool pass = s.pass;
  if (a.row_reduction && kind == CertificateKind::F) {
    std::cout << "row_reduction unsupported for F\n";
  } else if (a.row_reduction && kind == CertificateKind::D && a.N == 4) {
    std::cout << "row_reduction replaced by the eigenvalue check at N = 4\n";
  } else if (a.row_reduction) {
    const RowReduction rr = row_reduction_diagonal(kind, a.N);
    const auto cf = closed_form_row_reduction(kind, a.N);
    bool ok = rr.upper_triangular && rr.exact == cf;
    for (const auto& v : rr.exact) ok = ok && v > 0;
    std::cout << "row_reduction " << (ok ? "match" : "mismatch") << "\n";
    pass = pass && ok;
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  emit(a.out, [&] { return sweep_to_json(s); }, [&] { return sweep_to_csv(s); });
  return pass ? kPass : kFail;
}

struct PepArgs {
  std::string objective = "dual_gap";
  int N = 4;
  double t = 1.0, c1 = 1.0, c2 = 0.0, Delta = 1.0;
  double tol = 1e-8;
  bool rate = false;
  double Lp = 0.5, alpha = 0.99;
  bool conjecture = false;
  std::string sdpa;
  Output out;
};

int cmd_pep(const PepArgs& a) {
  SdpOptions opt;
  opt.tol = a.tol;
  if (a.conjecture) {
    const ConjectureReport r = check_conjecture(a.N, a.t, a.c1, a.c2, a.Delta, opt);
    std::cout << "dual_gap_sdp " << num(r.dual_gap_sdp) << "\ndual_gap_conjectured " << num(r.dual_gap_conjectured)
              << "\nprimal_residual_sdp " << num(r.primal_residual_sdp) << "\nprimal_residual_conjectured "
              << num(r.primal_residual_conjectured) << "\n";
    emit(a.out, [&] { return conjecture_to_json(r); },
         [&] {
           std::ostringstream o;
           o << "measure,sdp,conjectured,difference\n"
             << "dual_gap," << num(r.dual_gap_sdp) << ',' << num(r.dual_gap_conjectured) << ','
             << num(r.dual_gap_difference()) << "\nprimal_residual," << num(r.primal_residual_sdp) << ','
             << num(r.primal_residual_conjectured) << ',' << num(r.primal_residual_difference()) << "\n";
           return o.str();
         });
    const bool ok = r.dual_gap_status == SdpStatus::optimal && r.primal_status == SdpStatus::optimal;
    return ok ? kPass : kNoConvergence;
  }

  SdpProblem sdp;
  if (a.rate) {
    RatePepParams rp{a.t, a.c1, a.c2, a.Lp};
    sdp = build_rate_pep(rp, a.alpha);
  } else {
    PepParams p{a.N, a.t, a.c1, a.c2, a.Delta, parse_pep_objective(a.objective)};
    sdp = build_pep(p);
  }
  if (!a.sdpa.empty()) export_sdpa(sdp, resolve(a.sdpa));
  const SdpSolution s = sdp_solve(sdp, opt);
  std::cout << (a.rate ? "relaxation_optimum " : "value ") << num(s.value) << "\n";
  std::cout << "status " << to_string(s.status) << "\nduality_gap " << num(s.duality_gap) << "\n";
  if (a.rate) std::cout << "exceeds_alpha " << (s.value > a.alpha ? "true" : "false") << "\n";
  emit(a.out, [&] { return solution_to_json(s) + "\n"; },
       [&] {
         return "value,status,duality_gap,iterations\n" + num(s.value) + ',' + to_string(s.status) + ',' +
                num(s.duality_gap) + ',' + std::to_string(s.iterations) + "\n";
       });
  return s.status == SdpStatus::optimal ? kPass : kNoConvergence;
}

struct RateArgs {
  RateParams p = [] {
    RateParams r;
    r.c1 = 1.0;
    r.N = 4;
    return r;
  }();
  double Delta = 1.0;
  double Lp = -1, L = -1, mu1 = -1, mu2 = -1, la = -1, lb = -1, lma = -1, lmb = -1;
  Output out;
};

int cmd_rates(RateArgs a) {
  auto set = [](std::optional<double>& dst, double v) {
    if (v >= 0.0) dst = v;
  };
  set(a.p.Lp, a.Lp);
  set(a.p.L, a.L);
  set(a.p.mu1, a.mu1);
  set(a.p.mu2, a.mu2);
  set(a.p.lam_max_AtA, a.la);
  set(a.p.lam_max_BtB, a.lb);
  set(a.p.lam_min_AAt, a.lma);
  set(a.p.lam_min_BBt, a.lmb);
  const auto rows = rate_table(a.p, a.Delta);
  const std::string csv = rate_table_to_csv(rows);
  std::cout << csv;
  emit(a.out, [&] { return rate_table_to_json(rows); }, [&] { return csv; });
  return kPass;
}

struct PlArgs {
  std::string kind = "pl_l1_quadratic", instance;
  int n = 1;
  double t = 1.0;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double gamma = -1.0;
  Output out;
};

int cmd_pl(const PlArgs& a) {
  LoadedInstance li = load(a.instance.empty() ? a.kind : std::string(), a.instance, 2, a.t, 1.0, a.n);
  if (!li.optimal) throw InvalidInput("pl-probe needs an instance with a known optimal pair");
  const auto lambdas = sample_lambdas(li.optimal->lambda_star, a.samples, a.seed);
  const PlEstimate e = estimate_pl_constant(li.problem, *li.optimal, lambdas);
  std::cout << "Lp_hat " << num(e.Lp_hat) << "\nn_samples " << e.samples.size() << "\n";
  bool pass = true;
  if (a.gamma >= 0.0) {
    const NecessityReport r = necessity_probe(li.problem, *li.optimal, a.gamma, a.t, lambdas);
    std::cout << "implied_Lp " << num(r.implied_Lp) << "\nworst_ratio " << num(r.worst_ratio) << "\n";
    pass = r.pass;
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
  }
  emit(a.out, [&] { return pl_report_json(e); }, [&] { return pl_report_csv(e); });
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM worst-case analysis toolkit"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run ADMM on a gallery instance or a JSON instance");
  run->add_option("--kind", run_args.kind, "gallery tag");
  run->add_option("--instance", run_args.instance, "instance JSON path");
  run->add_option("--N", run_args.N, "iterations")->check(CLI::PositiveNumber);
  run->add_option("--t", run_args.t, "step length");
  run->add_option("--c1", run_args.c1, "relative modulus of f");
  run->add_option("--n", run_args.n, "dimension (pl_l1_quadratic)");
  add_output_flags(run, run_args.out);

  RunArgs ver_args;
  auto* ver = app.add_subcommand("verify-example", "check a gallery instance against its bound");
  ver->add_option("--kind", ver_args.kind, "gallery tag")->required();
  ver->add_option("--N", ver_args.N, "iterations");
  ver->add_option("--t", ver_args.t, "step length");
  ver->add_option("--c1", ver_args.c1, "relative modulus of f");
  ver->add_option("--n", ver_args.n, "dimension (pl_l1_quadratic)");
  add_output_flags(ver, ver_args.out);

  CertArgs cert_args;
  auto* cert = app.add_subcommand("check-certificate", "PSD sweep of a certificate matrix over t in [0, c]");
  cert->add_option("--kind", cert_args.kind, "E, D or F");
  cert->add_option("--N", cert_args.N, "iterations");
  cert->add_option("--c", cert_args.c, "modulus");
  cert->add_option("--grid", cert_args.grid, "grid points");
  cert->add_option("--workers", cert_args.workers, "worker threads (0 = hardware)");
  cert->add_flag("--row-reduction", cert_args.row_reduction, "also check the exact row reduction at t = c = 1");
  add_output_flags(cert, cert_args.out);

  PepArgs pep_args;
  auto* pep = app.add_subcommand("solve-pep", "build and solve a performance-estimation SDP");
  pep->add_option("--objective", pep_args.objective, "dual_gap, primal_residual_sq or dual_residual_sq");
  pep->add_option("--N", pep_args.N, "iterations");
  pep->add_option("--t", pep_args.t, "step length");
  pep->add_option("--c1", pep_args.c1, "relative modulus of f");
  pep->add_option("--c2", pep_args.c2, "relative modulus of g");
  pep->add_option("--Delta", pep_args.Delta, "initial distance budget");
  pep->add_option("--tol", pep_args.tol, "solver tolerance");
  pep->add_flag("--rate", pep_args.rate, "two-step PL rate problem");
  pep->add_option("--Lp", pep_args.Lp, "PL modulus (with --rate)");
  pep->add_option("--alpha", pep_args.alpha, "threshold in (0, 1) (with --rate)");
  pep->add_flag("--conjecture", pep_args.conjecture, "compare both PEPs with the conjectured formulas");
  pep->add_option("--sdpa", pep_args.sdpa, "export the SDP in sparse SDPA format");
  add_output_flags(pep, pep_args.out);

  RateArgs rate_args;
  auto* rates = app.add_subcommand("rate-table", "evaluate every closed-form rate at the given parameters");
  rates->add_option("--N", rate_args.p.N, "iterations");
  rates->add_option("--t", rate_args.p.t, "step length");
  rates->add_option("--c1", rate_args.p.c1, "relative modulus of f");
  rates->add_option("--c2", rate_args.p.c2, "relative modulus of g");
  rates->add_option("--Delta", rate_args.Delta, "initial distance budget");
  rates->add_option("--Lp", rate_args.Lp, "PL modulus");
  rates->add_option("--L", rate_args.L, "smoothness constant");
  rates->add_option("--mu1", rate_args.mu1, "strong convexity of f");
  rates->add_option("--mu2", rate_args.mu2, "strong convexity of g");
  rates->add_option("--lam-max-AtA", rate_args.la, "largest eigenvalue of A^T A");
  rates->add_option("--lam-max-BtB", rate_args.lb, "largest eigenvalue of B^T B");
  rates->add_option("--lam-min-AAt", rate_args.lma, "smallest eigenvalue of A A^T");
  rates->add_option("--lam-min-BBt", rate_args.lmb, "smallest eigenvalue of B B^T");
  add_output_flags(rates, rate_args.out);

  PlArgs pl_args;
  auto* pl = app.add_subcommand("pl-probe", "estimate the PL constant of an instance by sampling");
  pl->add_option("--kind", pl_args.kind, "gallery tag");
  pl->add_option("--instance", pl_args.instance, "instance JSON path (must contain an optimal pair)");
  pl->add_option("--n", pl_args.n, "dimension (pl_l1_quadratic)");
  pl->add_option("--t", pl_args.t, "step length for the necessity probe");
  pl->add_option("--samples", pl_args.samples, "sample count");
  pl->add_option("--seed", pl_args.seed, "random seed");
  pl->add_option("--gamma", pl_args.gamma, "observed contraction; enables the necessity probe");
  add_output_flags(pl, pl_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*ver) return cmd_verify(ver_args);
    if (*cert) return cmd_certificate(cert_args);
    if (*pep) return cmd_pep(pep_args);
    if (*rates) return cmd_rates(rate_args);
    if (*pl) return cmd_pl(pl_args);
  } catch (const OutOfRegime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Unbounded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
