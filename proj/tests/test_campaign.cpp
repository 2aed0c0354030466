#include "opcalc/campaign.hpp"

#include "opcalc/generators.hpp"
#include "opcalc/matrix_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace opcalc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("opcalc_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen_contraction hits its target norm deterministically") {
  CHECK(operator_norm(gen_contraction(5, 4, 0.0).mat()) == 0.0);

  const Contraction one = gen_contraction(6, 1, 1.0);
  CHECK(std::abs(std::abs(one.mat()(0, 0)) - 1.0) <= 1e-12);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const double target = 0.05 + 0.9 * static_cast<double>(s) / 20.0;
    const Contraction t = gen_contraction(s, 5, target);
    CHECK(std::abs(t.norm() - target) <= 1e-12);
    CHECK_FALSE(t.was_rescaled());
  }

  const Contraction a = gen_contraction(77, 6, 0.8);
  const Contraction b = gen_contraction(77, 6, 0.8);
  CHECK((a.mat() - b.mat()).norm() == 0.0);  // bitwise determinism
}

TEST_CASE("gen_unitary is unitary and deterministic") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 1 + static_cast<int>(s % 8);
    const CMat u = gen_unitary(s, n);
    CHECK(unitarity_residual(u) <= 1e-12);
  }
  CHECK((gen_unitary(9, 5) - gen_unitary(9, 5)).norm() == 0.0);
  CHECK(std::abs(std::abs(gen_unitary(3, 1)(0, 0)) - 1.0) <= 1e-13);
}

TEST_CASE("gen_pair_with_gap") {
  // small gap: no clipping, gap hit exactly
  const ContractionPair pr = gen_pair_with_gap(11, 4, 0.5, 0.05, SchattenOrder(2.0));
  CHECK_FALSE(pr.clipped);
  CHECK(std::abs(pr.achieved_gap - 0.05) <= 1e-10);
  CHECK(pr.t0.norm() == doctest::Approx(0.5).epsilon(1e-10));

  // large gap forces clipping but stays a contraction
  const ContractionPair pc = gen_pair_with_gap(12, 4, 0.95, 5.0, SchattenOrder(2.0));
  CHECK(pc.clipped);
  CHECK(pc.t1.norm() <= 1.0);
  CHECK(pc.achieved_gap > 0.0);

  const ContractionPair pa = gen_pair_with_gap(13, 3, 0.4, 0.1, SchattenOrder(1.0));
  const ContractionPair pb = gen_pair_with_gap(13, 3, 0.4, 0.1, SchattenOrder(1.0));
  CHECK((pa.t1.mat() - pb.t1.mat()).norm() == 0.0);
}

TEST_CASE("gen_psd_pair spectra sit in the required intervals") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double delta = 0.1 + 0.04 * static_cast<double>(s % 10);
    const PsdPair pp = gen_psd_pair(s, 5, delta);
    const HermEig ea = herm_eig(pp.a);
    const HermEig eb = herm_eig(pp.b);
    CHECK(ea.evals(0) >= -1e-12);
    CHECK(ea.evals(4) <= 1.0 + 1e-12);
    CHECK(eb.evals(0) >= delta - 1e-12);
    CHECK(eb.evals(4) <= 1.0 + 1e-12);
  }
}

TEST_CASE("config validation") {
  CampaignConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  CampaignConfig bad = cfg;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.dims = {0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.delta_floor = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.checks = {"serie"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.dump_bundles = "sometimes";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.function_ids = {"zz^3"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // json round-trip preserves the p = inf encoding
  const CampaignConfig back = CampaignConfig::from_json(cfg.to_json());
  REQUIRE(back.p_values.size() == cfg.p_values.size());
  CHECK(std::isinf(back.p_values.back()));
  CHECK(back.trials == cfg.trials);
}

TEST_CASE("empty checks produce empty reports and exit 0") {
  TempDir tmp("empty");
  CampaignConfig cfg;
  cfg.checks = {};
  cfg.output_dir = (tmp.path / "out").string();
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.checks.empty());
  CHECK(fs::exists(tmp.path / "out" / "summary.json"));
}

TEST_CASE("single series trial with f = z has a zero-slack row") {
  TempDir tmp("series1");
  CampaignConfig cfg;
  cfg.trials = 1;
  cfg.checks = {"series"};
  cfg.p_values = {2.0};
  cfg.function_ids = {"z^1"};
  cfg.output_dir = (tmp.path / "out").string();
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.checks.at("series").rows == 1);
  CHECK(r.checks.at("series").fails == 0);
  CHECK(std::abs(r.checks.at("series").min_slack) <= 1e-10);

  const std::string csv = slurp(tmp.path / "out" / "series.csv");
  CHECK(csv.rfind("instance_id,p,f_id,lhs,rhs,constant_used,slack,pass", 0) == 0);
  CHECK(csv.find(",1\n") != std::string::npos);
}

TEST_CASE("campaign reports are byte-identical across thread counts") {
  TempDir tmp("det");
  CampaignConfig cfg;
  cfg.trials = 6;
  cfg.master_seed = 20250809;
  cfg.dims = {2, 4};
  cfg.p_values = {1.0, 2.0, std::numeric_limits<double>::infinity()};
  cfg.function_ids = {"z^2", "rand-1-d6", "|Im|~16"};
  cfg.shift_degree = 16;
  cfg.output_dir = (tmp.path / "one").string();
  cfg.threads = 1;
  const CampaignResult r1 = run_campaign(cfg);
  cfg.output_dir = (tmp.path / "four").string();
  cfg.threads = 4;
  const CampaignResult r4 = run_campaign(cfg);
  CHECK(r1.exit_code == 0);
  CHECK(r4.exit_code == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path / "one")) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = tmp.path / "four" / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared >= 10);  // csv files per check + summary + tsv tables
}

TEST_CASE("campaign rerun with the same seed is reproducible") {
  TempDir tmp("rerun");
  CampaignConfig cfg;
  cfg.trials = 3;
  cfg.checks = {"defect", "ratio"};
  cfg.function_ids = {"z^2"};
  cfg.p_values = {2.0};
  cfg.output_dir = (tmp.path / "a").string();
  run_campaign(cfg);
  cfg.output_dir = (tmp.path / "b").string();
  run_campaign(cfg);
  CHECK(slurp(tmp.path / "a" / "defect.csv") == slurp(tmp.path / "b" / "defect.csv"));
  CHECK(slurp(tmp.path / "a" / "ratio.csv") == slurp(tmp.path / "b" / "ratio.csv"));
  CHECK(slurp(tmp.path / "a" / "summary.json") == slurp(tmp.path / "b" / "summary.json"));
}

TEST_CASE("bundles dump on demand and replay to 1e-12") {
  TempDir tmp("bundles");
  CampaignConfig cfg;
  cfg.trials = 2;
  cfg.checks = {"series", "sqrt_lip", "dilation_diff", "doi_exact", "trace_formula"};
  cfg.p_values = {2.0};
  cfg.function_ids = {"z^2", "rand-1-d6"};
  cfg.dims = {3};
  cfg.shift_degree = 8;
  cfg.dump_bundles = "all";
  cfg.output_dir = (tmp.path / "out").string();
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.exit_code == 0);

  int replayed = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path / "out" / "bundles")) {
    const ReplayResult rep = replay_bundle(entry.path().string());
    INFO("bundle ", entry.path().filename().string(), " check ", rep.check);
    CHECK(rep.ok);
    ++replayed;
  }
  CHECK(replayed >= 20);
}

TEST_CASE("forced failure exits nonzero, dumps a bundle, and replays") {
  TempDir tmp("forcefail");
  CampaignConfig cfg;
  cfg.trials = 1;
  cfg.checks = {"series"};
  cfg.p_values = {2.0};
  cfg.function_ids = {"z^1"};
  cfg.selftest_force_fail = true;
  cfg.output_dir = (tmp.path / "out").string();
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.exit_code == 1);
  REQUIRE(r.failed_instances.size() == 1);

  const fs::path bundle =
      tmp.path / "out" / "bundles" / (r.failed_instances[0] + ".json");
  REQUIRE(fs::exists(bundle));
  const ReplayResult rep = replay_bundle(bundle.string());
  CHECK(rep.ok);  // the stored lhs/rhs are genuine; only the verdict was forced
}

TEST_CASE("replay detects tampered bundles") {
  TempDir tmp("tamper");
  CampaignConfig cfg;
  cfg.trials = 1;
  cfg.checks = {"series"};
  cfg.p_values = {2.0};
  cfg.function_ids = {"z^2"};
  cfg.dump_bundles = "all";
  cfg.output_dir = (tmp.path / "out").string();
  run_campaign(cfg);

  fs::path some;
  for (const auto& entry : fs::directory_iterator(tmp.path / "out" / "bundles")) some = entry;
  REQUIRE(!some.empty());
  std::string text = slurp(some);
  const auto pos = text.find("\"expected_lhs\":");
  REQUIRE(pos != std::string::npos);
  const auto end = text.find_first_of(",}", pos);
  text.replace(pos, end - pos, "\"expected_lhs\": 123456.0");
  std::ofstream(some, std::ios::binary) << text;
  const ReplayResult rep = replay_bundle(some.string());
  CHECK_FALSE(rep.ok);
}

TEST_CASE("blowup study emits the delta table") {
  TempDir tmp("blowup");
  CampaignConfig cfg;
  cfg.trials = 2;
  cfg.checks = {"blowup"};
  cfg.function_ids = {"z^1", "|Im|~16"};
  cfg.output_dir = (tmp.path / "out").string();
  const CampaignResult r = run_campaign(cfg);
  CHECK(r.exit_code == 0);  // measurements never gate

  const std::string table = slurp(tmp.path / "out" / "blowup_table.tsv");
  int lines = 0;
  for (char c : table)
    if (c == '\n') ++lines;
  CHECK(lines == 6);  // one row per delta in the sweep
  CHECK(table.rfind("0.5 ", 0) == 0);
}
