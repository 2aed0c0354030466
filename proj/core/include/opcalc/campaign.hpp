// campaign.hpp — config-driven verification campaigns: seeded trial grids
// per check, CSV/JSON report emission, failure reproduction bundles, and
// deterministic (thread-count independent) output.

#pragma once

#include "opcalc/linalg.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace opcalc {

inline const std::vector<std::string> kAllChecks = {
    "series",     "strict_pair",   "sqrt_lip", "defect", "dilation_diff",
    "doi_exact",  "hs_estimate",   "trace_formula", "ratio", "blowup",
};

struct CampaignConfig {
  std::uint64_t master_seed = 1;
  int trials = 40;
  std::vector<int> dims = {2, 4, 6};
  std::vector<double> p_values = {1.0, 1.25, 1.5, 2.0, 3.0, 5.0,
                                  std::numeric_limits<double>::infinity()};
  double delta_floor = 0.05;
  std::vector<std::string> function_ids;  // empty selects the default zoo
  int dilation_degree = 8;
  int shift_degree = 32;
  std::vector<std::string> checks = kAllChecks;
  std::string output_dir = "reports";
  int threads = 1;
  std::string dump_bundles = "fail";  // none | fail | all
  bool selftest_force_fail = false;   // exercises the failure path end to end

  void validate() const;
  std::string to_json() const;
  static CampaignConfig from_json(const std::string& text);
  static CampaignConfig from_file(const std::string& path);
};

struct CheckSummary {
  int rows = 0;
  int fails = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  int near_diag_warnings = 0;
  int clipped_pairs = 0;
  int rescaled_inputs = 0;
};

struct CampaignResult {
  int exit_code = 0;
  std::map<std::string, CheckSummary> checks;
  std::vector<std::string> failed_instances;
  std::string output_dir;
};

CampaignResult run_campaign(const CampaignConfig& cfg);

// ------------------------------ replay --------------------------------------

struct ReplayResult {
  bool ok = false;
  std::string check;
  std::string instance_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double expected_lhs = 0.0;
  double expected_rhs = 0.0;
};

// Re-runs the computation stored in a reproduction bundle and compares
// lhs/rhs with the recorded values to 1e-12.
ReplayResult replay_bundle(const std::string& path);

}  // namespace opcalc
