#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcg/charts.hpp"
#include "rcg/diagnostics.hpp"
#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/odebench.hpp"
#include "rcg/parse.hpp"
#include "rcg/radial.hpp"
#include "rcg/rc.hpp"
#include "rcg/rng.hpp"
#include "rcg/thurston.hpp"

namespace {

using rcg::RunConfig;

struct ConfigFlags {
  RunConfig values;
  std::string config_path;
  CLI::Option *manifold = nullptr, *dim = nullptr, *rc = nullptr, *law = nullptr,
              *chart = nullptr, *conv = nullptr, *seed = nullptr, *n = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_chart = true) {
  cmd->add_option("--config", f.config_path, "JSON config file (explicit flags win)");
  f.manifold = cmd->add_option("--manifold", f.values.manifold, "sphere | hyperbolic");
  f.dim = cmd->add_option("--dim", f.values.dim, "intrinsic dimension n >= 2");
  f.rc = cmd->add_option("--rc", f.values.R_c, "curvature radius R_c > 0");
  f.law = cmd->add_option("--law", f.values.law, "radial law, e.g. truncnormal:mu=1.0,sigma=0.35");
  if (with_chart) {
    f.chart = cmd->add_option("--chart", f.values.chart,
                              "exp | lambert | bexp:alpha=A | gcl");
    f.conv = cmd->add_option("--base-convention", f.values.base_convention,
                             "paper | equal-area");
  }
  f.seed = cmd->add_option("--seed", f.values.seed, "RNG seed");
  f.n = cmd->add_option("--n", f.values.n, "sample count");
}

// JSON file first, then any explicitly passed flag on top.
RunConfig resolve_config(const ConfigFlags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw rcg::ParseError("--config: cannot read '" + f.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    c = rcg::parse_config_text(ss.str());
  }
  auto take = [](CLI::Option* opt) { return opt && opt->count() > 0; };
  if (take(f.manifold)) c.manifold = f.values.manifold;
  if (take(f.dim)) c.dim = f.values.dim;
  if (take(f.rc)) c.R_c = f.values.R_c;
  if (take(f.law)) c.law = f.values.law;
  if (take(f.chart)) c.chart = f.values.chart;
  if (take(f.conv)) c.base_convention = f.values.base_convention;
  if (take(f.seed)) c.seed = f.values.seed;
  if (take(f.n)) c.n = f.values.n;
  return c;
}

rcg::ManifoldSpec spec_from(const RunConfig& c) {
  rcg::ManifoldKind kind = rcg::parse_manifold_kind(c.manifold);
  if (c.dim < 2) throw rcg::DomainError("--dim: must be >= 2");
  if (!(c.R_c > 0.0)) throw rcg::DomainError("--rc: must be > 0");
  return rcg::ManifoldSpec::validated({kind, c.dim, c.R_c});
}

rcg::Chart chart_from(const RunConfig& c, const rcg::ManifoldSpec& spec) {
  rcg::ParsedChart pc = rcg::parse_chart(c.chart);
  try {
    return rcg::Chart(spec, pc.kind, pc.alpha, rcg::parse_convention(c.base_convention));
  } catch (const rcg::DomainError& e) {
    throw rcg::DomainError(std::string("--chart: ") + e.what());
  }
}

rcg::RadialLaw law_from(const RunConfig& c, const rcg::ManifoldSpec& spec) {
  rcg::ParsedLaw pl = rcg::parse_law(c.law);
  try {
    return rcg::RadialLaw::make(pl.kind, pl.params, spec.r_max());
  } catch (const rcg::DomainError& e) {
    throw rcg::DomainError(std::string("--law: ") + e.what());
  }
}

struct OutputTarget {
  std::string path;
  std::ofstream file;
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path, std::ios::binary);
      if (!file) throw rcg::ParseError("--output: cannot write '" + path + "'");
    }
    return file;
  }
};

std::string fmt(double v) { return rcg::detail::fmt_double(v); }

// --------------------------------------------------------------------------

int cmd_sample(const RunConfig& c, OutputTarget& out) {
  rcg::ManifoldSpec spec = spec_from(c);
  rcg::RcModel model(spec, chart_from(c, spec), law_from(c, spec));
  rcg::Pcg32 rng(c.seed, 0);
  rcg::SampleBatch batch = rcg::sample_rc(model, c.n, rng);

  std::ostream& os = out.stream();
  os << "seed,idx,r";
  for (int i = 0; i < spec.ambient_dim(); ++i) os << ",x" << i;
  os << "\n";
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    os << c.seed << "," << i << "," << fmt(batch.radii[i]);
    for (double x : batch.points[i]) os << "," << fmt(x);
    os << "\n";
  }
  return 0;
}

struct Check {
  std::string what;
  bool ok;
};

void check_abs(std::vector<Check>& cs, const std::string& what, double got,
               double want, double tol) {
  cs.push_back({what + " = " + fmt(got) + " (want " + fmt(want) + " +- " + fmt(tol) + ")",
                std::fabs(got - want) <= tol});
}

std::vector<Check> e1_checks(const rcg::DiagnosticsReport& rep) {
  std::vector<Check> cs;
  for (const rcg::BlockReport& block : rep.blocks) {
    bool sphere = block.name == "sphere";
    for (const rcg::RowReport& row : block.rows) {
      std::string tag = block.name + "/" + row.label;
      if (row.variant == "rc") {
        check_abs(cs, tag + " mean", row.mean_r.value, sphere ? 1.0024 : 0.6383, 0.01);
        check_abs(cs, tag + " var", row.var_r.value, sphere ? 0.1201 : 0.2326,
                  sphere ? 0.005 : 0.01);
        cs.push_back({tag + " kl = " + fmt(row.kl.value) + " (want <= 0.005)",
                      row.kl.value <= 0.005});
      } else if (sphere) {
        check_abs(cs, tag + " mean", row.mean_r.value, 0.4386, 0.01);
        cs.push_back({tag + " kl = " + fmt(row.kl.value) + " (want >= 1.0)",
                      row.kl.value >= 1.0});
      } else {
        check_abs(cs, tag + " mean", row.mean_r.value, 1.0027, 0.01);
        check_abs(cs, tag + " var", row.var_r.value, 0.2747, 0.01);
      }
    }
  }
  return cs;
}

std::vector<Check> e1b_checks(const rcg::DiagnosticsReport& rep) {
  std::vector<Check> cs;
  for (const rcg::RowReport& row : rep.blocks.at(0).rows) {
    if (row.variant == "raw") {
      check_abs(cs, row.label + " mean", row.mean_r.value, 0.6267, 0.01);
      check_abs(cs, row.label + " var", row.var_r.value, 0.1073, 0.005);
    } else {
      check_abs(cs, row.label + " mean", row.mean_r.value, 1.0024, 0.01);
      check_abs(cs, row.label + " var", row.var_r.value, 0.1201, 0.005);
      cs.push_back({row.label + " kl = " + fmt(row.kl.value) + " (want <= 0.005)",
                    row.kl.value <= 0.005});
    }
  }
  return cs;
}

int cmd_verify_e1(std::uint64_t seed, std::size_t n, int seeds, bool baseline,
                  bool strict, OutputTarget& out) {
  rcg::DiagnosticsReport rep =
      baseline ? rcg::run_e1b(seed, n, seeds) : rcg::run_e1(seed, n, seeds);
  rcg::ordered_json j = rcg::to_json(rep);
  std::vector<Check> cs = baseline ? e1b_checks(rep) : e1_checks(rep);
  rcg::ordered_json jc = rcg::ordered_json::array();
  bool all_ok = true;
  for (const Check& c : cs) {
    jc.push_back(rcg::ordered_json{{"check", c.what}, {"pass", c.ok}});
    all_ok = all_ok && c.ok;
  }
  j["checks"] = std::move(jc);
  j["all_pass"] = all_ok;
  out.stream() << j.dump(2) << "\n";
  return (strict && !all_ok) ? 1 : 0;
}

int cmd_alpha_sweep(const RunConfig& c, const std::string& alphas_csv,
                    OutputTarget& out) {
  rcg::ManifoldSpec spec = spec_from(c);
  rcg::RcModel model(spec, rcg::Chart::exp(spec), law_from(c, spec));
  std::vector<double> alphas;
  for (const std::string& tok : rcg::detail::split(alphas_csv, ','))
    alphas.push_back(rcg::detail::parse_number(tok, "--alphas"));
  rcg::Pcg32 rng(c.seed, 0);
  auto rows = rcg::chart_term_variance(model, alphas, c.n, rng);
  std::ostream& os = out.stream();
  os << "alpha,variance,ratio\n";
  for (const auto& r : rows)
    os << fmt(r.alpha) << "," << fmt(r.variance) << "," << fmt(r.ratio_to_one) << "\n";
  return 0;
}

int cmd_atlas_check(const RunConfig& c, double delta, double width, double mu,
                    double sigma, OutputTarget& out) {
  rcg::ManifoldSpec spec = spec_from(c);
  rcg::AtlasDiagnostics d = rcg::atlas_diagnostics(spec, delta, width, mu, sigma);
  rcg::ordered_json j{{"partition_max_dev", d.partition_max_dev},
                      {"seam_grad_jump", d.seam_grad_jump},
                      {"band_sup_grad", d.band_sup_grad}};
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_misspec(const RunConfig& c, double rc_tilde, double r0, double alpha,
                OutputTarget& out) {
  rcg::ManifoldSpec spec = spec_from(c);
  if (!(rc_tilde > 0.0)) throw rcg::DomainError("--rc-tilde: must be > 0");
  rcg::ManifoldSpec tilde = rcg::ManifoldSpec::validated({spec.kind, spec.n, rc_tilde});
  rcg::MisspecSensitivity m = rcg::misspec_sensitivity(spec, tilde, r0, alpha);
  rcg::ordered_json j{{"sup_grad", m.sup_grad},
                      {"bound", m.bound},
                      {"ratio", m.bound > 0.0 ? m.sup_grad / m.bound : 0.0}};
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_thurston(std::size_t n_points, std::uint64_t seed, double h, bool strict,
                 OutputTarget& out) {
  rcg::Pcg32 rng(seed, 0);
  std::vector<rcg::Vec> pts;
  for (std::size_t i = 0; i < n_points; ++i)
    pts.push_back(rcg::Vec{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9),
                           rng.uniform(-0.9, 0.9)});
  std::ostream& os = out.stream();
  os << "kind,max_residual,checked\n";
  bool ok = true;
  for (rcg::ThurstonKind k :
       {rcg::ThurstonKind::E3, rcg::ThurstonKind::S3, rcg::ThurstonKind::H3,
        rcg::ThurstonKind::S2xR, rcg::ThurstonKind::H2xR, rcg::ThurstonKind::Nil,
        rcg::ThurstonKind::Sol, rcg::ThurstonKind::SL2tilde}) {
    double worst = 0.0;
    for (const rcg::Vec& x : pts) worst = std::max(worst, rcg::volume_check(k, x, h));
    bool checked = k != rcg::ThurstonKind::SL2tilde;
    if (checked && worst > 1e-6) ok = false;
    os << rcg::thurston_kind_name(k) << "," << fmt(worst) << "," << (checked ? 1 : 0)
       << "\n";
  }
  return (strict && !ok) ? 1 : 0;
}

int cmd_cnf_bench(const RunConfig& c, const std::string& alphas_csv, double tol,
                  OutputTarget& out) {
  rcg::ManifoldSpec spec = spec_from(c);
  rcg::RadialLaw law = law_from(c, spec);
  std::vector<double> alphas;
  for (const std::string& tok : rcg::detail::split(alphas_csv, ','))
    alphas.push_back(rcg::detail::parse_number(tok, "--alphas"));
  rcg::Pcg32 rng(c.seed, 0);
  rcg::CnfBenchResult res = rcg::chart_cnf_bench(spec, law, alphas, tol, c.n, rng);
  std::ostream& os = out.stream();
  os << "alpha,mean_nfe,sd_nfe,fit_a,fit_b,chart_var\n";
  for (const auto& row : res.rows)
    os << fmt(row.alpha) << "," << fmt(row.mean_nfe) << "," << fmt(row.sd_nfe) << ","
       << fmt(res.fit_a) << "," << fmt(res.fit_b) << "," << fmt(row.chart_var) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial compensation toolkit for constant-curvature manifolds"};
  app.require_subcommand(1);

  ConfigFlags sample_f;
  OutputTarget sample_out;
  CLI::App* sample = app.add_subcommand("sample", "draw RC samples as CSV");
  add_config_flags(sample, sample_f);
  sample->add_option("--output", sample_out.path, "write CSV here instead of stdout");

  std::uint64_t e1_seed = 2024;
  std::size_t e1_n = 20000;
  int e1_seeds = 5;
  bool e1_baseline = false, e1_strict = false;
  OutputTarget e1_out;
  CLI::App* verify = app.add_subcommand("verify-e1", "run the synthetic benchmark");
  verify->add_option("--seed", e1_seed, "base seed");
  verify->add_option("--n", e1_n, "samples per seed");
  verify->add_option("--seeds", e1_seeds, "number of seeds");
  verify->add_flag("--baseline", e1_baseline, "run the shared-sigma baseline block");
  verify->add_flag("--strict", e1_strict, "exit nonzero if a tolerance check fails");
  verify->add_option("--output", e1_out.path, "write JSON here instead of stdout");

  ConfigFlags sweep_f;
  std::string sweep_alphas = "0.25,0.5,0.75,1.0";
  OutputTarget sweep_out;
  CLI::App* sweep = app.add_subcommand("alpha-sweep", "chart-term variance across alpha");
  add_config_flags(sweep, sweep_f, false);
  sweep->add_option("--alphas", sweep_alphas, "comma-separated alpha list");
  sweep->add_option("--output", sweep_out.path, "write CSV here instead of stdout");

  ConfigFlags atlas_f;
  double atlas_delta = 0.3, atlas_width = 1.0, atlas_mu = 1.0, atlas_sigma = 0.35;
  OutputTarget atlas_out;
  CLI::App* atlas = app.add_subcommand("atlas-check", "two-chart blend diagnostics");
  add_config_flags(atlas, atlas_f, false);
  atlas->add_option("--delta", atlas_delta, "cut-locus clearance");
  atlas->add_option("--width", atlas_width, "handover band width");
  atlas->add_option("--mu", atlas_mu, "north truncnormal mu");
  atlas->add_option("--sigma", atlas_sigma, "north truncnormal sigma");
  atlas->add_option("--output", atlas_out.path, "write JSON here instead of stdout");

  ConfigFlags mis_f;
  double mis_rc_tilde = 1.1, mis_r0 = 0.1, mis_alpha = 1.0;
  OutputTarget mis_out;
  CLI::App* mis = app.add_subcommand("misspec", "curvature misspecification sensitivity");
  add_config_flags(mis, mis_f, false);
  mis->add_option("--rc-tilde", mis_rc_tilde, "misspecified curvature radius");
  mis->add_option("--r0", mis_r0, "radius horizon");
  mis->add_option("--alpha", mis_alpha, "chart-term weight");
  mis->add_option("--output", mis_out.path, "write JSON here instead of stdout");

  std::size_t th_points = 1000;
  std::uint64_t th_seed = 2024;
  double th_h = 1e-5;
  bool th_strict = false;
  OutputTarget th_out;
  CLI::App* th = app.add_subcommand("thurston", "volume checks for the model charts");
  th->add_option("--points", th_points, "probe points");
  th->add_option("--seed", th_seed, "RNG seed");
  th->add_option("--step", th_h, "finite-difference step");
  th->add_flag("--strict", th_strict, "exit nonzero if a checked kind fails 1e-6");
  th->add_option("--output", th_out.path, "write CSV here instead of stdout");

  ConfigFlags cnf_f;
  std::string cnf_alphas = "1.0,0.75,0.5,0.25";
  double cnf_tol = 1e-6;
  OutputTarget cnf_out;
  CLI::App* cnf = app.add_subcommand("cnf-bench", "ODE cost of the chart term");
  add_config_flags(cnf, cnf_f, false);
  cnf->add_option("--alphas", cnf_alphas, "comma-separated alpha list");
  cnf->add_option("--tol", cnf_tol, "integration tolerance");
  cnf->add_option("--output", cnf_out.path, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sample)) return cmd_sample(resolve_config(sample_f), sample_out);
    if (app.got_subcommand(verify))
      return cmd_verify_e1(e1_seed, e1_n, e1_seeds, e1_baseline, e1_strict, e1_out);
    if (app.got_subcommand(sweep)) {
      RunConfig c = resolve_config(sweep_f);
      if (sweep_f.n->count() == 0 && sweep_f.config_path.empty()) c.n = 100000;
      return cmd_alpha_sweep(c, sweep_alphas, sweep_out);
    }
    if (app.got_subcommand(atlas))
      return cmd_atlas_check(resolve_config(atlas_f), atlas_delta, atlas_width, atlas_mu,
                             atlas_sigma, atlas_out);
    if (app.got_subcommand(mis))
      return cmd_misspec(resolve_config(mis_f), mis_rc_tilde, mis_r0, mis_alpha, mis_out);
    if (app.got_subcommand(th))
      return cmd_thurston(th_points, th_seed, th_h, th_strict, th_out);
    if (app.got_subcommand(cnf)) {
      RunConfig c = resolve_config(cnf_f);
      if (cnf_f.n->count() == 0 && cnf_f.config_path.empty()) c.n = 50;
      return cmd_cnf_bench(c, cnf_alphas, cnf_tol, cnf_out);
    }
  } catch (const rcg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rcg::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
