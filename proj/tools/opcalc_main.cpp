// opcalc — experiment runner for the operator-calculus toolkit.
//
// Subcommands:
//   verify   run a verification campaign from a config file (+ overrides)
//   replay   re-run a reproduction bundle and compare lhs/rhs
//   shift    recover the spectral shift function for a contraction pair
//   dilate   build and validate a finite unitary power dilation
//   doi      apply the Birman-Solomyak double operator integral

#include "opcalc/bounds.hpp"
#include "opcalc/campaign.hpp"
#include "opcalc/doi.hpp"
#include "opcalc/matrix_io.hpp"
#include "opcalc/shift.hpp"
#include "opcalc/zoo.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace opcalc;

CircleFunction load_function(const std::string& spec) {
  if (fs::exists(spec)) {
    std::ifstream in(spec);
    std::ostringstream ss;
    ss << in.rdbuf();
    return circle_function_from_json(ss.str());
  }
  return zoo::by_id(spec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

int cmd_verify(const std::string& config_path, std::uint64_t seed, bool seed_set,
               const std::vector<std::string>& checks, const std::string& out_dir,
               int trials, int threads) {
  CampaignConfig cfg;
  if (!config_path.empty()) cfg = CampaignConfig::from_file(config_path);
  if (seed_set) cfg.master_seed = seed;
  if (!checks.empty()) cfg.checks = checks;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (trials > 0) cfg.trials = trials;
  if (threads > 0) cfg.threads = threads;

  const CampaignResult res = run_campaign(cfg);
  for (const auto& [name, cs] : res.checks) {
    std::cout << name << ": " << cs.rows << " rows, " << cs.fails << " fails";
    if (std::isfinite(cs.min_slack)) std::cout << ", min slack " << cs.min_slack;
    if (cs.max_ratio > 0.0) std::cout << ", max ratio " << cs.max_ratio;
    if (cs.near_diag_warnings > 0)
      std::cout << ", " << cs.near_diag_warnings << " near-diagonal warnings";
    std::cout << '\n';
  }
  std::cout << "reports written to " << res.output_dir << '\n';
  return res.exit_code;
}

int cmd_replay(const std::string& bundle_path) {
  const ReplayResult r = replay_bundle(bundle_path);
  std::cout << "check " << r.check << " instance " << r.instance_id << '\n'
            << "lhs " << render_double(r.lhs) << " (expected " << render_double(r.expected_lhs)
            << ")\n"
            << "rhs " << render_double(r.rhs) << " (expected " << render_double(r.expected_rhs)
            << ")\n"
            << (r.ok ? "REPRODUCED" : "MISMATCH") << '\n';
  return r.ok ? 0 : 1;
}

int cmd_shift(const std::string& t0_path, const std::string& t1_path,
              const std::string& x_path, int degree, const std::string& out_prefix) {
  const Contraction t0(load_matrix(t0_path));
  const Contraction t1(load_matrix(t1_path));
  const CMat x = x_path.empty() ? CMat(CMat::Identity(t0.dim(), t0.dim()))
                                : load_matrix(x_path);
  const ShiftFunction eta = eta_recover(t0, t1, x, degree);

  write_text(out_prefix + ".json", shift_to_json(eta) + "\n");
  write_text(out_prefix + "_re.tsv", shift_plot_data(eta, false));
  write_text(out_prefix + "_im.tsv", shift_plot_data(eta, true));

  double worst = 0.0;
  for (const std::string& id : zoo::default_ids(degree)) {
    const CircleFunction f = zoo::by_id(id);
    if (f.degree() > degree) continue;
    worst = std::max(worst, trace_formula_check(f, t0, t1, x, eta));
  }
  std::cout << "eta written to " << out_prefix << ".json (N = " << degree << ")\n"
            << "max trace-formula residual over the default zoo: " << render_double(worst)
            << '\n';
  return worst <= 1e-9 * (1.0 + x.norm()) ? 0 : 1;
}

int cmd_dilate(const std::string& in_path, int degree, const std::string& out_path) {
  const Contraction t(load_matrix(in_path));
  const FiniteDilation fd = finite_dilation(t, degree);

  double worst = 0.0;
  CMat pow = CMat::Identity(fd.u.rows(), fd.u.cols());
  CMat tpow = CMat::Identity(t.dim(), t.dim());
  for (int k = 1; k <= degree; ++k) {
    pow = pow * fd.u;
    tpow = tpow * t.mat();
    worst = std::max(worst, operator_norm(fd.compress(pow) - tpow));
  }
  if (!out_path.empty()) save_matrix(out_path, fd.u);
  std::cout << "dilation size " << fd.u.rows() << ", unitarity residual "
            << render_double(fd.unitarity) << ", max power-compression residual "
            << render_double(worst) << '\n';
  return (fd.unitarity <= 1e-10 && worst <= 1e-9) ? 0 : 1;
}

int cmd_doi(const std::string& u_path, const std::string& v_path, const std::string& f_spec,
            const std::string& out_path) {
  const CMat u = load_matrix(u_path);
  const CMat v = load_matrix(v_path);
  const CircleFunction f = load_function(f_spec);

  DoiStats stats;
  const CMat bs = birman_solomyak_delta(f, u, v, &stats);
  const CMat direct = calc_spectral(f, u) - calc_spectral(f, v);
  const double resid = (bs - direct).norm();
  if (!out_path.empty()) save_matrix(out_path, bs);
  std::cout << "||f(U)-f(V)||_2 = " << render_double(bs.norm())
            << ", residual vs spectral calculus = " << render_double(resid);
  if (stats.near_diagonal_pairs > 0)
    std::cout << " (" << stats.near_diagonal_pairs << " near-diagonal spectral pairs)";
  std::cout << '\n';
  return resid <= 1e-9 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical operator-calculus toolkit"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification campaign");
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  int trials = 0, threads = 0;
  verify->add_option("--config", config_path, "campaign config JSON");
  auto* seed_opt = verify->add_option("--seed", seed, "master seed override");
  verify->add_option("--check", checks, "check id (repeatable)");
  verify->add_option("--out", out_dir, "output directory");
  verify->add_option("--trials", trials, "trial count override");
  verify->add_option("--threads", threads, "worker thread count")
      ->envname("OPCALC_THREADS");

  // replay
  auto* replay = app.add_subcommand("replay", "re-run a reproduction bundle");
  std::string bundle_path;
  replay->add_option("bundle", bundle_path, "bundle JSON path")->required();

  // shift
  auto* shift = app.add_subcommand("shift", "recover the spectral shift function");
  std::string t0_path, t1_path, x_path, out_prefix = "eta";
  int degree = 32;
  shift->add_option("--t0", t0_path, "matrix file for T0")->required();
  shift->add_option("--t1", t1_path, "matrix file for T1")->required();
  shift->add_option("--x", x_path, "matrix file for X (default identity)");
  shift->add_option("--degree", degree, "truncation degree N");
  shift->add_option("--out", out_prefix, "output prefix");

  // dilate
  auto* dilate = app.add_subcommand("dilate", "build and validate a finite dilation");
  std::string in_path, dil_out;
  int dil_degree = 8;
  dilate->add_option("--in", in_path, "matrix file for T")->required();
  dilate->add_option("--degree", dil_degree, "dilation degree N");
  dilate->add_option("--out", dil_out, "output matrix file for the dilation");

  // doi
  auto* doi = app.add_subcommand("doi", "apply the Birman-Solomyak delta");
  std::string u_path, v_path, f_spec = "z^1", doi_out;
  doi->add_option("--u", u_path, "matrix file for U")->required();
  doi->add_option("--v", v_path, "matrix file for V")->required();
  doi->add_option("--f", f_spec, "zoo id or circle-function JSON path");
  doi->add_option("--out", doi_out, "output matrix file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed())
      return cmd_verify(config_path, seed, seed_opt->count() > 0, checks, out_dir, trials,
                        threads);
    if (replay->parsed()) return cmd_replay(bundle_path);
    if (shift->parsed()) return cmd_shift(t0_path, t1_path, x_path, degree, out_prefix);
    if (dilate->parsed()) return cmd_dilate(in_path, dil_degree, dil_out);
    if (doi->parsed()) return cmd_doi(u_path, v_path, f_spec, doi_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
