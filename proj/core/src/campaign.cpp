#include "opcalc/campaign.hpp"

#include "opcalc/bounds.hpp"
#include "opcalc/doi.hpp"
#include "opcalc/generators.hpp"
#include "opcalc/matrix_io.hpp"
#include "opcalc/shift.hpp"
#include "opcalc/zoo.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace opcalc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBlowupTrialsPerDelta = 20;
const std::vector<double> kBlowupDeltas = {0.5, 0.2, 0.1, 0.05, 0.01, 0.001};

std::string render_p(double p) { return std::isinf(p) ? "inf" : render_double(p); }

json p_to_json(double p) {
  if (std::isinf(p)) return json("inf");
  return json(p);
}

double p_from_json(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("campaign: bad p value '" + v.get<std::string>() + "'");
  }
  return v.get<double>();
}

SchattenOrder order_of(double p) {
  return std::isinf(p) ? SchattenOrder::inf() : SchattenOrder(p);
}

std::string hex_id(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int check_ordinal(const std::string& name) {
  for (size_t i = 0; i < kAllChecks.size(); ++i)
    if (kAllChecks[i] == name) return static_cast<int>(i) + 1;
  throw std::invalid_argument("campaign: unknown check id '" + name + "'");
}

std::uint64_t trial_seed(const CampaignConfig& cfg, const std::string& check, int trial) {
  return mix_seed(cfg.master_seed,
                  mix_seed(static_cast<std::uint64_t>(check_ordinal(check)) * 1000003ULL,
                           static_cast<std::uint64_t>(trial)));
}

// ------------------------------ rows ---------------------------------------

enum class Schema { kBound, kRatio, kBlowup };

struct Row {
  Schema schema = Schema::kBound;
  std::string stream;  // csv file name stem
  std::string instance_id;
  double p = 0.0;
  std::string f_id;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
  bool pass = true;
  bool gated = true;
  json bundle;  // null unless a reproduction bundle was built
};

struct TrialOutput {
  std::vector<Row> rows;
  int near_diag = 0;
  int clipped = 0;
  int rescaled = 0;
};

const char* header_for(Schema s) {
  switch (s) {
    case Schema::kBound:
      return "instance_id,p,f_id,lhs,rhs,constant_used,slack,pass";
    case Schema::kRatio:
      return "instance_id,p,f_id,ratio,ratio_mixed,envelope,k_p,delta";
    case Schema::kBlowup:
      return "instance_id,p,f_id,delta,ratio";
  }
  return "";
}

std::string line_for(const Row& r) {
  std::string out = csv_field(r.instance_id) + ',' + render_p(r.p) + ',' + csv_field(r.f_id);
  switch (r.schema) {
    case Schema::kBound:
      out += ',' + render_double(r.a) + ',' + render_double(r.b) + ',' +
             render_double(r.c) + ',' + render_double(r.d) + ',' + (r.pass ? "1" : "0");
      break;
    case Schema::kRatio:
      out += ',' + render_double(r.a) + ',' + render_double(r.b) + ',' +
             render_double(r.c) + ',' + render_double(r.d) + ',' + render_double(r.e);
      break;
    case Schema::kBlowup:
      out += ',' + render_double(r.d) + ',' + render_double(r.a);
      break;
  }
  return out;
}

// ------------------------------ bundles -------------------------------------

json bundle_base(const std::string& kind, const Row& r) {
  json b;
  b["schema_version"] = 1;
  b["kind"] = kind;
  b["check"] = r.stream;
  b["variant"] = r.f_id;
  b["instance_id"] = r.instance_id;
  b["p"] = p_to_json(r.p);
  b["expected_lhs"] = r.a;
  b["expected_rhs"] = r.b;
  b["matrices"] = json::object();
  b["params"] = json::object();
  return b;
}

void bundle_matrix(json& b, const std::string& name, const CMat& m) {
  b["matrices"][name] = json::parse(matrix_to_json(m));
}

void bundle_function(json& b, const CircleFunction& f) {
  b["f"] = json::parse(circle_function_to_json(f));
}

Row bound_row(const std::string& stream, const BoundReport& rep, bool gated = true) {
  Row r;
  r.schema = Schema::kBound;
  r.stream = stream;
  r.instance_id = rep.instance_id;
  r.p = rep.p;
  r.f_id = rep.f_id;
  r.a = rep.lhs;
  r.b = rep.rhs;
  r.c = rep.constant_used;
  r.d = rep.slack;
  r.pass = rep.pass();
  r.gated = gated;
  return r;
}

// residual-style row: pass means lhs <= rhs outright (the budget already
// carries the tolerance)
Row residual_row(const std::string& stream, const std::string& id, double p,
                 const std::string& tag, double residual, double budget) {
  Row r;
  r.schema = Schema::kBound;
  r.stream = stream;
  r.instance_id = id;
  r.p = p;
  r.f_id = tag;
  r.a = residual;
  r.b = budget;
  r.c = budget;
  r.d = budget - residual;
  r.pass = residual <= budget;
  return r;
}

// random bounded symbol q0 + q1 e^{il} + q2 e^{-im} + q3 e^{i(l-m)};
// sup certificate sum |q|
struct SymbolSpec {
  std::array<Complex, 4> q;

  DoiSymbol make() const {
    DoiSymbol s;
    s.evaluator = [q = q](double l, double m) {
      return q[0] + q[1] * std::polar(1.0, l) + q[2] * std::polar(1.0, -m) +
             q[3] * std::polar(1.0, l - m);
    };
    s.sup_bound = std::abs(q[0]) + std::abs(q[1]) + std::abs(q[2]) + std::abs(q[3]);
    s.id = "rand4";
    return s;
  }
  json to_json() const {
    json a = json::array();
    for (const Complex& c : q) a.push_back({c.real(), c.imag()});
    return a;
  }
  static SymbolSpec from_json(const json& a) {
    SymbolSpec s;
    for (int i = 0; i < 4; ++i)
      s.q[static_cast<size_t>(i)] =
          Complex(a.at(i).at(0).get<double>(), a.at(i).at(1).get<double>());
    return s;
  }
  static SymbolSpec random(Rng& rng) {
    SymbolSpec s;
    for (auto& c : s.q) c = 0.5 * rng.cnormal();
    return s;
  }
};

// ------------------------------ trial runners -------------------------------

struct CheckContext {
  const CampaignConfig& cfg;
  const std::vector<CircleFunction>& fns;
  const CircleFunction& blowup_fn;
};

int pick_dim(const CampaignConfig& cfg, Rng& rng) {
  return cfg.dims[static_cast<size_t>(rng.next_u64() % cfg.dims.size())];
}

TrialOutput run_series_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "series", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  // no strictness needed: norms up to 1
  const double norm0 = rng.uniform(0.0, 1.0);
  const double gap = rng.uniform(0.01, 0.5);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0 * 0.999, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;
  if (pair.t0.was_rescaled() || pair.t1.was_rescaled()) ++out.rescaled;

  int k = 0;
  for (double p : ctx.cfg.p_values) {
    for (const CircleFunction& f : ctx.fns) {
      BoundReport rep = series_bound_check(f, pair.t0, pair.t1, order_of(p));
      rep.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(k++)));
      Row r = bound_row("series", rep);
      if (ctx.cfg.selftest_force_fail && trial == 0 && k == 1) {
        Row forced = r;
        forced.f_id = "selftest";
        forced.pass = false;
        forced.instance_id = hex_id(mix_seed(seed, 0xfa17ULL));
        json b = bundle_base("bound_series", forced);
        bundle_matrix(b, "T0", pair.t0.mat());
        bundle_matrix(b, "T1", pair.t1.mat());
        bundle_function(b, f);
        forced.bundle = std::move(b);
        out.rows.push_back(std::move(forced));
      }
      if (!r.pass || ctx.cfg.dump_bundles == "all") {
        json b = bundle_base("bound_series", r);
        bundle_matrix(b, "T0", pair.t0.mat());
        bundle_matrix(b, "T1", pair.t1.mat());
        bundle_function(b, f);
        r.bundle = std::move(b);
      }
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

TrialOutput run_strict_pair_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "strict_pair", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double max_norm = std::sqrt(1.0 - ctx.cfg.delta_floor * ctx.cfg.delta_floor);
  const double norm0 = rng.uniform(0.0, std::min(0.9, max_norm));
  const double gap = rng.uniform(0.01, 0.2);
  ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (!pair.t1.is_strict()) {
    // shrink T1 slightly; Lemma 2.2 needs both endpoints strict
    pair.t1 = Contraction(0.995 * pair.t1.mat());
    ++out.clipped;
  }
  if (pair.clipped) ++out.clipped;

  int k = 0;
  for (double p : ctx.cfg.p_values) {
    for (const CircleFunction& f : ctx.fns) {
      BoundReport rep = strict_pair_check(f, pair.t0, pair.t1, order_of(p));
      rep.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(k++)));
      Row r = bound_row("strict_pair", rep);
      if (!r.pass || ctx.cfg.dump_bundles == "all") {
        json b = bundle_base("bound_strict", r);
        bundle_matrix(b, "T0", pair.t0.mat());
        bundle_matrix(b, "T1", pair.t1.mat());
        bundle_function(b, f);
        r.bundle = std::move(b);
      }
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

TrialOutput run_sqrt_lip_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "sqrt_lip", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double delta = rng.uniform(std::max(0.1, ctx.cfg.delta_floor), 0.9);
  const PsdPair pp = gen_psd_pair(seed, n, delta);

  const QuadResult q = exp_integral_diff(pp.a, pp.b, delta);
  const double resid = schatten_norm(q.value - (pp.a - pp.b), SchattenOrder::inf());
  Row quad = residual_row("sqrt_lip", hex_id(mix_seed(seed, 1)), kInf, "quad", resid, 1e-8);
  if (!quad.pass || ctx.cfg.dump_bundles == "all") {
    json b = bundle_base("quad_resid", quad);
    bundle_matrix(b, "A", pp.a);
    bundle_matrix(b, "B", pp.b);
    b["params"]["delta"] = delta;
    quad.bundle = std::move(b);
  }
  out.rows.push_back(std::move(quad));

  int k = 2;
  for (double p : ctx.cfg.p_values) {
    BoundReport rep = sqrt_lipschitz_check(pp.a, pp.b, delta, order_of(p));
    rep.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(k++)));
    rep.f_id = "bound";
    Row r = bound_row("sqrt_lip", rep);
    if (!r.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("bound_sqrt", r);
      bundle_matrix(b, "A", pp.a);
      bundle_matrix(b, "B", pp.b);
      b["params"]["delta"] = delta;
      r.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

TrialOutput run_defect_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "defect", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double max_norm = std::sqrt(1.0 - ctx.cfg.delta_floor * ctx.cfg.delta_floor);
  const double norm0 = rng.uniform(0.0, std::min(0.95, max_norm));
  const double gap = rng.uniform(0.01, 0.5);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;

  int k = 0;
  for (double p : ctx.cfg.p_values) {
    DefectDiffReport rep = defect_diff_check(pair.t0, pair.t1, order_of(p));
    const std::array<std::pair<const char*, BoundReport*>, 3> variants = {
        std::pair{"D", &rep.d}, std::pair{"D*", &rep.d_star},
        std::pair{"squares", &rep.squares}};
    for (auto& [tag, br] : variants) {
      br->instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(k++)));
      br->f_id = tag;
      Row r = bound_row("defect", *br);
      if (!r.pass || ctx.cfg.dump_bundles == "all") {
        json b = bundle_base("bound_defect", r);
        bundle_matrix(b, "T0", pair.t0.mat());
        bundle_matrix(b, "T1", pair.t1.mat());
        r.bundle = std::move(b);
      }
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

TrialOutput run_dilation_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "dilation_diff", trial);
  Rng rng(seed);
  const int n = std::min(pick_dim(ctx.cfg, rng), 8);
  const int big_n = std::min(ctx.cfg.dilation_degree, 8);
  const double max_norm = std::sqrt(1.0 - ctx.cfg.delta_floor * ctx.cfg.delta_floor);
  const double norm0 = rng.uniform(0.0, max_norm);
  const double gap = rng.uniform(0.01, 0.5);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;

  int k = 0;
  for (double p : ctx.cfg.p_values) {
    DilationDiffReport rep = dilation_diff_check(pair.t0, pair.t1, big_n, order_of(p));
    rep.report.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(k++)));
    Row r = bound_row("dilation_diff", rep.report);
    if (!r.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("bound_dilation", r);
      bundle_matrix(b, "T0", pair.t0.mat());
      bundle_matrix(b, "T1", pair.t1.mat());
      b["params"]["N"] = big_n;
      r.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

TrialOutput run_doi_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "doi_exact", trial);
  Rng rng(seed);
  const int n = std::min(pick_dim(ctx.cfg, rng), 8);
  const CMat u = gen_unitary(mix_seed(seed, 10), n);
  const CMat v = gen_unitary(mix_seed(seed, 11), n);
  Rng xrng(mix_seed(seed, 12));
  const CMat x = gaussian_matrix(xrng, n, n);
  const double xnorm = x.norm();

  const SpectralDecomp de = unitary_eig(u);
  const SpectralDecomp df = unitary_eig(v);

  int k = 0;
  for (const CircleFunction& f : ctx.fns) {
    DoiStats stats;
    const CMat bs = doi_apply(dd_symbol(f), de, df, u - v, &stats);
    out.near_diag += stats.near_diagonal_pairs;
    const CMat direct = calc_spectral(f, de) - calc_spectral(f, df);
    Row r1 = residual_row("doi_exact", hex_id(mix_seed(seed, static_cast<std::uint64_t>(100 + k))),
                          2.0, "bs:" + f.id, (bs - direct).norm(), 1e-9);
    if (!r1.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("resid_bs", r1);
      bundle_matrix(b, "U", u);
      bundle_matrix(b, "V", v);
      bundle_function(b, f);
      r1.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r1));

    const double comm = commutator_identity_check(f, u, v, x);
    Row r2 = residual_row("doi_exact", hex_id(mix_seed(seed, static_cast<std::uint64_t>(200 + k))),
                          2.0, "comm:" + f.id, comm, 1e-9 * (1.0 + xnorm));
    if (!r2.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("resid_comm", r2);
      bundle_matrix(b, "U", u);
      bundle_matrix(b, "V", v);
      bundle_matrix(b, "X", x);
      bundle_function(b, f);
      r2.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r2));
    ++k;
  }

  // symbol algebra on random bounded symbols
  Rng srng(mix_seed(seed, 13));
  const SymbolSpec phi = SymbolSpec::random(srng);
  const SymbolSpec psi = SymbolSpec::random(srng);
  const DoiAlgebraResidual alg = doi_algebra_check(de, df, phi.make(), psi.make(), x);
  const double budget = 1e-10 * std::max(1.0, xnorm);
  Row r3 = residual_row("doi_exact", hex_id(mix_seed(seed, 300)), 2.0, "alg:lin",
                        alg.linearity, budget);
  Row r4 = residual_row("doi_exact", hex_id(mix_seed(seed, 301)), 2.0, "alg:mul",
                        alg.multiplicativity, budget);
  for (Row* rr : {&r3, &r4}) {
    if (!rr->pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base(rr->f_id == "alg:lin" ? "resid_alg_lin" : "resid_alg_mul", *rr);
      bundle_matrix(b, "U", u);
      bundle_matrix(b, "V", v);
      bundle_matrix(b, "X", x);
      b["params"]["phi"] = phi.to_json();
      b["params"]["psi"] = psi.to_json();
      rr->bundle = std::move(b);
    }
    out.rows.push_back(std::move(*rr));
  }
  return out;
}

TrialOutput run_hs_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "hs_estimate", trial);
  Rng rng(seed);
  const int n = std::min(pick_dim(ctx.cfg, rng), 8);
  const CMat u = gen_unitary(mix_seed(seed, 20), n);
  CMat v;
  if (trial % 2 == 0) {
    v = gen_unitary(mix_seed(seed, 21), n);
  } else {
    // close pair: V = U e^{i eps H}; exercises the near-diagonal bookkeeping
    Rng hrng(mix_seed(seed, 22));
    CMat h = hermitize(gaussian_matrix(hrng, n, n));
    h /= operator_norm(h);
    const double eps = std::pow(10.0, rng.uniform(-7.0, -1.0));
    const HermEig eh = herm_eig(h);
    CVec ph(n);
    for (int i = 0; i < n; ++i) ph(i) = std::polar(1.0, eps * eh.evals(i));
    v = u * (eh.evecs * ph.asDiagonal() * eh.evecs.adjoint());
  }
  const double gap2 = (u - v).norm();

  const SpectralDecomp de = unitary_eig(u);
  const SpectralDecomp df = unitary_eig(v);

  int k = 0;
  for (const CircleFunction& f : ctx.fns) {
    DoiStats stats;
    const CMat delta_f = doi_apply(dd_symbol(f), de, df, u - v, &stats);
    out.near_diag += stats.near_diagonal_pairs;
    const double lhs = delta_f.norm();
    const double lip = lip_chordal(f);
    BoundReport rep = make_report(lhs, lip * (1.0 + 1e-8) * gap2, lip, SchattenOrder(2.0));
    rep.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(400 + k)));
    rep.f_id = f.id;
    Row r = bound_row("hs_estimate", rep);
    r.pass = rep.lhs <= rep.rhs;  // the (1 + 1e-8) factor already carries the tolerance
    if (!r.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("bound_hs_lip", r);
      bundle_matrix(b, "U", u);
      bundle_matrix(b, "V", v);
      bundle_function(b, f);
      r.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r));
    ++k;
  }

  // Hilbert-Schmidt contraction of the double operator integral itself
  Rng xrng(mix_seed(seed, 23));
  const CMat x = gaussian_matrix(xrng, n, n);
  Rng srng(mix_seed(seed, 24));
  const SymbolSpec phi = SymbolSpec::random(srng);
  const CMat tx = doi_apply(phi.make(), de, df, x);
  BoundReport rep = make_report(tx.norm(), phi.make().sup_bound * x.norm() * (1.0 + 1e-10),
                                phi.make().sup_bound, SchattenOrder(2.0));
  rep.instance_id = hex_id(mix_seed(seed, 450));
  rep.f_id = "doi_hs";
  Row r = bound_row("hs_estimate", rep);
  r.pass = rep.lhs <= rep.rhs;
  if (!r.pass || ctx.cfg.dump_bundles == "all") {
    json b = bundle_base("bound_hs_contraction", r);
    bundle_matrix(b, "U", u);
    bundle_matrix(b, "V", v);
    bundle_matrix(b, "X", x);
    b["params"]["phi"] = phi.to_json();
    r.bundle = std::move(b);
  }
  out.rows.push_back(std::move(r));
  return out;
}

TrialOutput run_trace_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "trace_formula", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double norm0 = rng.uniform(0.0, 0.95);
  const double gap = rng.uniform(0.01, 0.5);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;
  Rng xrng(mix_seed(seed, 30));
  const CMat x = gaussian_matrix(xrng, n, n);
  const double xnorm = x.norm();
  const int n_max = ctx.cfg.shift_degree;

  const ShiftFunction eta = eta_recover(pair.t0, pair.t1, x, n_max);

  int k = 0;
  for (const CircleFunction& f : ctx.fns) {
    if (f.degree() > n_max) continue;
    const double resid = trace_formula_check(f, pair.t0, pair.t1, x, eta);
    Row r = residual_row("trace_formula",
                         hex_id(mix_seed(seed, static_cast<std::uint64_t>(500 + k))), 1.0,
                         f.id, resid, 1e-9 * (1.0 + xnorm));
    if (!r.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("resid_trace", r);
      bundle_matrix(b, "T0", pair.t0.mat());
      bundle_matrix(b, "T1", pair.t1.mat());
      bundle_matrix(b, "X", x);
      bundle_function(b, f);
      b["params"]["N"] = n_max;
      r.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r));
    ++k;
  }

  // uniqueness under re-recovery, and coefficient stability across N
  const ShiftFunction eta2 = eta_recover(pair.t0, pair.t1, x, n_max);
  Row uniq = residual_row("trace_formula", hex_id(mix_seed(seed, 600)), 1.0, "uniqueness",
                          uniqueness_check(eta, eta2), 1e-10);
  const ShiftFunction eta_lo = eta_recover(pair.t0, pair.t1, x, std::max(1, n_max / 2));
  double shared_dev = 0.0;
  for (int m = -eta_lo.n_max(); m <= eta_lo.n_max(); ++m)
    shared_dev = std::max(shared_dev, std::abs(eta.coeff(m) - eta_lo.coeff(m)));
  Row stab = residual_row("trace_formula", hex_id(mix_seed(seed, 601)), 1.0, "coeff_stability",
                          shared_dev, 1e-12 * (1.0 + xnorm));

  // cross-check against the dilation route at a reduced degree
  const int n_cross = std::min(8, n_max);
  const ShiftFunction eta_dil =
      eta_recover(pair.t0, pair.t1, x, n_cross, EtaRoute::kDilation);
  double route_dev = 0.0;
  for (int m = -n_cross; m <= n_cross; ++m)
    route_dev = std::max(route_dev, std::abs(eta.coeff(m) - eta_dil.coeff(m)));
  Row route = residual_row("trace_formula", hex_id(mix_seed(seed, 602)), 1.0, "dilation_route",
                           route_dev, 1e-9 * (1.0 + xnorm));
  for (Row* rr : {&uniq, &stab, &route}) {
    if (!rr->pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("uniq_trace", *rr);
      bundle_matrix(b, "T0", pair.t0.mat());
      bundle_matrix(b, "T1", pair.t1.mat());
      bundle_matrix(b, "X", x);
      b["params"]["N"] = n_max;
      rr->bundle = std::move(b);
    }
    out.rows.push_back(std::move(*rr));
  }
  return out;
}

TrialOutput run_ratio_trial(const CheckContext& ctx, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(ctx.cfg, "ratio", trial);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double max_norm = std::sqrt(1.0 - ctx.cfg.delta_floor * ctx.cfg.delta_floor);
  const double norm0 = rng.uniform(0.0, max_norm);
  const double gap = rng.uniform(0.01, 0.5);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;

  int k = 0;
  for (double p : ctx.cfg.p_values) {
    for (const CircleFunction& f : ctx.fns) {
      // harness default: dilation headroom of 2 deg(f) + 2
      const int n_deg = std::max(ctx.cfg.dilation_degree, 2 * f.degree() + 2);
      const RatioRecord rec = lipschitz_ratio(f, pair.t0, pair.t1, order_of(p), n_deg);
      Row r;
      r.schema = Schema::kRatio;
      r.stream = "ratio";
      r.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(700 + k++)));
      r.p = p;
      r.f_id = f.id;
      r.a = rec.ratio;
      r.b = rec.ratio_mixed;
      r.c = rec.envelope;
      r.d = rec.k_p;
      r.e = rec.delta;
      r.gated = false;
      out.rows.push_back(std::move(r));
    }
  }

  // the d_p-free p = 2 chain is a theorem and gates the run
  int j = 0;
  for (const CircleFunction& f : ctx.fns) {
    BoundReport rep = p2_chain_check(f, pair.t0, pair.t1);
    rep.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(800 + j++)));
    Row r = bound_row("ratio_chain", rep);
    if (!r.pass || ctx.cfg.dump_bundles == "all") {
      json b = bundle_base("bound_chain", r);
      bundle_matrix(b, "T0", pair.t0.mat());
      bundle_matrix(b, "T1", pair.t1.mat());
      bundle_function(b, f);
      r.bundle = std::move(b);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

TrialOutput run_blowup_entry(const CheckContext& ctx, int index) {
  TrialOutput out;
  const int delta_idx = index / kBlowupTrialsPerDelta;
  const int inner = index % kBlowupTrialsPerDelta;
  const double delta = kBlowupDeltas[static_cast<size_t>(delta_idx)];
  const std::uint64_t seed = trial_seed(ctx.cfg, "blowup", index);
  Rng rng(seed);
  const int n = pick_dim(ctx.cfg, rng);
  const double norm0 = std::sqrt(1.0 - delta * delta);
  const double gap = rng.uniform(0.01, 0.2);
  const ContractionPair pair = gen_pair_with_gap(seed, n, norm0, gap, SchattenOrder(2.0));
  if (pair.clipped) ++out.clipped;

  // the canonical Lipschitz-not-analytic test function
  const CircleFunction& f = ctx.blowup_fn;
  const RatioRecord rec = lipschitz_ratio(f, pair.t0, pair.t1, SchattenOrder(2.0),
                                          std::max(ctx.cfg.dilation_degree, 2 * f.degree() + 2));
  Row r;
  r.schema = Schema::kBlowup;
  r.stream = "blowup";
  r.instance_id = hex_id(mix_seed(seed, static_cast<std::uint64_t>(900 + inner)));
  r.p = 2.0;
  r.f_id = f.id;
  r.a = rec.ratio;
  r.d = delta;
  r.gated = false;
  out.rows.push_back(std::move(r));
  return out;
}

TrialOutput run_one(const std::string& check, const CheckContext& ctx, int trial) {
  if (check == "series") return run_series_trial(ctx, trial);
  if (check == "strict_pair") return run_strict_pair_trial(ctx, trial);
  if (check == "sqrt_lip") return run_sqrt_lip_trial(ctx, trial);
  if (check == "defect") return run_defect_trial(ctx, trial);
  if (check == "dilation_diff") return run_dilation_trial(ctx, trial);
  if (check == "doi_exact") return run_doi_trial(ctx, trial);
  if (check == "hs_estimate") return run_hs_trial(ctx, trial);
  if (check == "trace_formula") return run_trace_trial(ctx, trial);
  if (check == "ratio") return run_ratio_trial(ctx, trial);
  if (check == "blowup") return run_blowup_entry(ctx, trial);
  throw std::invalid_argument("campaign: unknown check id '" + check + "'");
}

void parallel_trials(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<CircleFunction> build_zoo(const CampaignConfig& cfg) {
  const std::vector<std::string> ids =
      cfg.function_ids.empty() ? zoo::default_ids() : cfg.function_ids;
  std::vector<CircleFunction> fns;
  fns.reserve(ids.size());
  for (const std::string& id : ids) {
    CircleFunction f = zoo::by_id(id);
    f.lip_arc_cache = lip_arc(f);
    f.lip_chordal_cache = lip_chordal(f);
    fns.push_back(std::move(f));
  }
  return fns;
}

}  // namespace

// ------------------------------ config --------------------------------------

void CampaignConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (dims.empty()) throw std::invalid_argument("config: dims must be nonempty");
  for (int d : dims)
    if (d < 1 || d > 64) throw std::invalid_argument("config: dims must lie in [1, 64]");
  if (p_values.empty()) throw std::invalid_argument("config: p_values must be nonempty");
  for (double p : p_values)
    if (!std::isinf(p) && !(p >= 1.0))
      throw std::invalid_argument("config: p values must be >= 1 or inf");
  if (!(delta_floor > 0.0) || !(delta_floor < 1.0))
    throw std::invalid_argument("config: delta_floor must lie in (0, 1)");
  if (dilation_degree < 1 || dilation_degree > 64)
    throw std::invalid_argument("config: dilation_degree must lie in [1, 64]");
  if (shift_degree < 1 || shift_degree > 64)
    throw std::invalid_argument("config: shift_degree must lie in [1, 64]");
  for (const std::string& c : checks) check_ordinal(c);
  if (dump_bundles != "none" && dump_bundles != "fail" && dump_bundles != "all")
    throw std::invalid_argument("config: dump_bundles must be none|fail|all");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  for (const std::string& id : function_ids) zoo::by_id(id);  // throws on unknown ids
}

std::string CampaignConfig::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["master_seed"] = master_seed;
  j["trials"] = trials;
  j["dims"] = dims;
  json ps = json::array();
  for (double p : p_values) ps.push_back(p_to_json(p));
  j["p_values"] = std::move(ps);
  j["delta_floor"] = delta_floor;
  j["function_ids"] = function_ids;
  j["dilation_degree"] = dilation_degree;
  j["shift_degree"] = shift_degree;
  j["checks"] = checks;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  j["dump_bundles"] = dump_bundles;
  return j.dump(2);
}

CampaignConfig CampaignConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  CampaignConfig cfg;
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("dims")) cfg.dims = j["dims"].get<std::vector<int>>();
  if (j.contains("p_values")) {
    cfg.p_values.clear();
    for (const json& v : j["p_values"]) cfg.p_values.push_back(p_from_json(v));
  }
  if (j.contains("delta_floor")) cfg.delta_floor = j["delta_floor"].get<double>();
  if (j.contains("function_ids"))
    cfg.function_ids = j["function_ids"].get<std::vector<std::string>>();
  if (j.contains("dilation_degree")) cfg.dilation_degree = j["dilation_degree"].get<int>();
  if (j.contains("shift_degree")) cfg.shift_degree = j["shift_degree"].get<int>();
  if (j.contains("checks")) cfg.checks = j["checks"].get<std::vector<std::string>>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("dump_bundles")) cfg.dump_bundles = j["dump_bundles"].get<std::string>();
  if (j.contains("selftest_force_fail"))
    cfg.selftest_force_fail = j["selftest_force_fail"].get<bool>();
  return cfg;
}

CampaignConfig CampaignConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

// ------------------------------ runner --------------------------------------

CampaignResult run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const std::vector<CircleFunction> fns = build_zoo(cfg);
  CircleFunction blowup_fn;
  for (const CircleFunction& g : fns)
    if (g.id.rfind("|Im|~", 0) == 0) blowup_fn = g;
  if (blowup_fn.id.empty()) {
    blowup_fn = zoo::abs_im_truncated(24);
    blowup_fn.lip_arc_cache = lip_arc(blowup_fn);
    blowup_fn.lip_chordal_cache = lip_chordal(blowup_fn);
  }
  const CheckContext ctx{cfg, fns, blowup_fn};

  fs::create_directories(cfg.output_dir);
  fs::create_directories(fs::path(cfg.output_dir) / "bundles");

  CampaignResult result;
  result.output_dir = cfg.output_dir;
  std::map<std::string, double> ratio_max_per_p;
  std::map<double, double, std::greater<double>> blowup_max;

  json summary;
  summary["schema_version"] = 1;
  summary["master_seed"] = cfg.master_seed;
  summary["trials"] = cfg.trials;

  for (const std::string& check : cfg.checks) {
    const int count = (check == "blowup")
                          ? static_cast<int>(kBlowupDeltas.size()) * kBlowupTrialsPerDelta
                          : cfg.trials;
    std::vector<TrialOutput> outs(static_cast<size_t>(count));
    parallel_trials(count, cfg.threads,
                    [&](int i) { outs[static_cast<size_t>(i)] = run_one(check, ctx, i); });

    // sequential assembly in trial order keeps the reports byte-identical
    // across thread counts
    std::map<std::string, std::ofstream> files;
    auto file_for = [&](const Row& r) -> std::ofstream& {
      auto it = files.find(r.stream);
      if (it == files.end()) {
        std::ofstream f(fs::path(cfg.output_dir) / (r.stream + ".csv"), std::ios::binary);
        f << header_for(r.schema) << '\n';
        it = files.emplace(r.stream, std::move(f)).first;
      }
      return it->second;
    };

    for (const TrialOutput& to : outs) {
      CheckSummary& cs = result.checks[check];
      cs.near_diag_warnings += to.near_diag;
      cs.clipped_pairs += to.clipped;
      cs.rescaled_inputs += to.rescaled;
      for (const Row& r : to.rows) {
        file_for(r) << line_for(r) << '\n';
        ++cs.rows;
        if (r.schema == Schema::kBound) cs.min_slack = std::min(cs.min_slack, r.d);
        if (r.schema == Schema::kRatio) {
          cs.max_ratio = std::max(cs.max_ratio, r.a);
          auto& slot = ratio_max_per_p[render_p(r.p)];
          slot = std::max(slot, r.a);
        }
        if (r.schema == Schema::kBlowup) {
          cs.max_ratio = std::max(cs.max_ratio, r.a);
          auto& slot = blowup_max[r.d];
          slot = std::max(slot, r.a);
        }
        if (r.gated && !r.pass) {
          ++cs.fails;
          result.failed_instances.push_back(r.instance_id);
          std::cerr << "FAIL " << check << " instance " << r.instance_id << " (lhs "
                    << render_double(r.a) << ", rhs " << render_double(r.b) << ")\n";
        }
        if (!r.bundle.is_null()) {
          std::ofstream bf(fs::path(cfg.output_dir) / "bundles" / (r.instance_id + ".json"),
                           std::ios::binary);
          bf << r.bundle.dump(2) << '\n';
        }
      }
    }
  }

  int total_fails = 0;
  json checks_summary = json::object();
  for (const auto& [name, cs] : result.checks) {
    json c;
    c["rows"] = cs.rows;
    c["fails"] = cs.fails;
    if (std::isfinite(cs.min_slack)) c["min_slack"] = cs.min_slack;
    if (cs.max_ratio > 0.0) c["max_ratio"] = cs.max_ratio;
    c["near_diag_warnings"] = cs.near_diag_warnings;
    c["clipped_pairs"] = cs.clipped_pairs;
    c["rescaled_inputs"] = cs.rescaled_inputs;
    checks_summary[name] = std::move(c);
    total_fails += cs.fails;
  }
  summary["checks"] = std::move(checks_summary);
  if (!ratio_max_per_p.empty()) {
    json rm = json::object();
    for (const auto& [p, v] : ratio_max_per_p) rm[p] = v;
    summary["ratio_max_per_p"] = std::move(rm);
  }
  if (!blowup_max.empty()) {
    json bt = json::array();
    for (const auto& [delta, v] : blowup_max) bt.push_back({{"delta", delta}, {"max_ratio", v}});
    summary["blowup_table"] = std::move(bt);
  }
  summary["total_fails"] = total_fails;

  {
    std::ofstream sf(fs::path(cfg.output_dir) / "summary.json", std::ios::binary);
    sf << summary.dump(2) << '\n';
  }
  if (!ratio_max_per_p.empty()) {
    std::ofstream pf(fs::path(cfg.output_dir) / "ratio_max.tsv", std::ios::binary);
    for (const auto& [p, v] : ratio_max_per_p) pf << p << ' ' << render_double(v) << '\n';
  }
  if (!blowup_max.empty()) {
    std::ofstream bf(fs::path(cfg.output_dir) / "blowup_table.tsv", std::ios::binary);
    for (const auto& [delta, v] : blowup_max)
      bf << render_double(delta) << ' ' << render_double(v) << '\n';
  }

  result.exit_code = total_fails > 0 ? 1 : 0;
  return result;
}

// ------------------------------ replay --------------------------------------

namespace {

CMat bundle_mat(const json& b, const std::string& name) {
  return matrix_from_json(b.at("matrices").at(name).dump());
}

CircleFunction bundle_fn(const json& b) {
  return circle_function_from_json(b.at("f").dump());
}

}  // namespace

ReplayResult replay_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("replay: cannot open " + path);
  json b = json::parse(in);

  ReplayResult rr;
  rr.check = b.at("check").get<std::string>();
  rr.instance_id = b.at("instance_id").get<std::string>();
  rr.expected_lhs = b.at("expected_lhs").get<double>();
  rr.expected_rhs = b.at("expected_rhs").get<double>();
  const std::string kind = b.at("kind").get<std::string>();
  const double p = p_from_json(b.at("p"));

  if (kind == "bound_series" || kind == "bound_strict" || kind == "bound_chain") {
    const Contraction t0(bundle_mat(b, "T0"));
    const Contraction t1(bundle_mat(b, "T1"));
    const CircleFunction f = bundle_fn(b);
    BoundReport rep;
    if (kind == "bound_series")
      rep = series_bound_check(f, t0, t1, order_of(p));
    else if (kind == "bound_strict")
      rep = strict_pair_check(f, t0, t1, order_of(p));
    else
      rep = p2_chain_check(f, t0, t1);
    rr.lhs = rep.lhs;
    rr.rhs = rep.rhs;
  } else if (kind == "quad_resid") {
    const CMat a = bundle_mat(b, "A");
    const CMat bb = bundle_mat(b, "B");
    const double delta = b.at("params").at("delta").get<double>();
    const QuadResult q = exp_integral_diff(a, bb, delta);
    rr.lhs = schatten_norm(q.value - (a - bb), SchattenOrder::inf());
    rr.rhs = rr.expected_rhs;
  } else if (kind == "bound_sqrt") {
    const CMat a = bundle_mat(b, "A");
    const CMat bb = bundle_mat(b, "B");
    const double delta = b.at("params").at("delta").get<double>();
    const BoundReport rep = sqrt_lipschitz_check(a, bb, delta, order_of(p));
    rr.lhs = rep.lhs;
    rr.rhs = rep.rhs;
  } else if (kind == "bound_defect") {
    const Contraction t0(bundle_mat(b, "T0"));
    const Contraction t1(bundle_mat(b, "T1"));
    const DefectDiffReport rep = defect_diff_check(t0, t1, order_of(p));
    const std::string variant = b.at("variant").get<std::string>();
    const BoundReport& pick =
        variant == "D" ? rep.d : (variant == "D*" ? rep.d_star : rep.squares);
    rr.lhs = pick.lhs;
    rr.rhs = pick.rhs;
  } else if (kind == "bound_dilation") {
    const Contraction t0(bundle_mat(b, "T0"));
    const Contraction t1(bundle_mat(b, "T1"));
    const int n_deg = b.at("params").at("N").get<int>();
    const DilationDiffReport rep = dilation_diff_check(t0, t1, n_deg, order_of(p));
    rr.lhs = rep.report.lhs;
    rr.rhs = rep.report.rhs;
  } else if (kind == "resid_bs") {
    const CMat u = bundle_mat(b, "U");
    const CMat v = bundle_mat(b, "V");
    const CircleFunction f = bundle_fn(b);
    const CMat bs = birman_solomyak_delta(f, u, v);
    const CMat direct = calc_spectral(f, u) - calc_spectral(f, v);
    rr.lhs = (bs - direct).norm();
    rr.rhs = rr.expected_rhs;
  } else if (kind == "resid_comm") {
    const CMat u = bundle_mat(b, "U");
    const CMat v = bundle_mat(b, "V");
    const CMat x = bundle_mat(b, "X");
    rr.lhs = commutator_identity_check(bundle_fn(b), u, v, x);
    rr.rhs = rr.expected_rhs;
  } else if (kind == "resid_alg_lin" || kind == "resid_alg_mul") {
    const CMat u = bundle_mat(b, "U");
    const CMat v = bundle_mat(b, "V");
    const CMat x = bundle_mat(b, "X");
    const SymbolSpec phi = SymbolSpec::from_json(b.at("params").at("phi"));
    const SymbolSpec psi = SymbolSpec::from_json(b.at("params").at("psi"));
    const DoiAlgebraResidual alg =
        doi_algebra_check(unitary_eig(u), unitary_eig(v), phi.make(), psi.make(), x);
    rr.lhs = kind == "resid_alg_lin" ? alg.linearity : alg.multiplicativity;
    rr.rhs = rr.expected_rhs;
  } else if (kind == "bound_hs_lip") {
    const CMat u = bundle_mat(b, "U");
    const CMat v = bundle_mat(b, "V");
    const CircleFunction f = bundle_fn(b);
    rr.lhs = birman_solomyak_delta(f, u, v).norm();
    rr.rhs = lip_chordal(f) * (1.0 + 1e-8) * (u - v).norm();
  } else if (kind == "bound_hs_contraction") {
    const CMat u = bundle_mat(b, "U");
    const CMat v = bundle_mat(b, "V");
    const CMat x = bundle_mat(b, "X");
    const SymbolSpec phi = SymbolSpec::from_json(b.at("params").at("phi"));
    rr.lhs = doi_apply(phi.make(), unitary_eig(u), unitary_eig(v), x).norm();
    rr.rhs = phi.make().sup_bound * x.norm() * (1.0 + 1e-10);
  } else if (kind == "resid_trace") {
    const Contraction t0(bundle_mat(b, "T0"));
    const Contraction t1(bundle_mat(b, "T1"));
    const CMat x = bundle_mat(b, "X");
    const int n_max = b.at("params").at("N").get<int>();
    const ShiftFunction eta = eta_recover(t0, t1, x, n_max);
    rr.lhs = trace_formula_check(bundle_fn(b), t0, t1, x, eta);
    rr.rhs = rr.expected_rhs;
  } else if (kind == "uniq_trace") {
    const Contraction t0(bundle_mat(b, "T0"));
    const Contraction t1(bundle_mat(b, "T1"));
    const CMat x = bundle_mat(b, "X");
    const int n_max = b.at("params").at("N").get<int>();
    const std::string variant = b.at("variant").get<std::string>();
    const ShiftFunction eta = eta_recover(t0, t1, x, n_max);
    if (variant == "uniqueness") {
      rr.lhs = uniqueness_check(eta, eta_recover(t0, t1, x, n_max));
    } else if (variant == "coeff_stability") {
      const ShiftFunction lo = eta_recover(t0, t1, x, std::max(1, n_max / 2));
      for (int m = -lo.n_max(); m <= lo.n_max(); ++m)
        rr.lhs = std::max(rr.lhs, std::abs(eta.coeff(m) - lo.coeff(m)));
    } else {
      const int n_cross = std::min(8, n_max);
      const ShiftFunction dil = eta_recover(t0, t1, x, n_cross, EtaRoute::kDilation);
      for (int m = -n_cross; m <= n_cross; ++m)
        rr.lhs = std::max(rr.lhs, std::abs(eta.coeff(m) - dil.coeff(m)));
    }
    rr.rhs = rr.expected_rhs;
  } else {
    throw std::invalid_argument("replay: unknown bundle kind '" + kind + "'");
  }

  const auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y));
  };
  rr.ok = close(rr.lhs, rr.expected_lhs) && close(rr.rhs, rr.expected_rhs);
  return rr;
}

}  // namespace opcalc
