#pragma once

#include <iosfwd>
#include <string>

#include "qmarg/cli/io.hpp"
#include "qmarg/conditions.hpp"
#include "qmarg/verify.hpp"

namespace qmarg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitInputError = 2,
};

/// Entry point behind main(); never throws, always returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckRequest {
  std::string suite;
  double tol = 1e-8;
  double rank_tol = 1e-9;
  BracketConvention bracket = BracketConvention::kStrictlyLess;
};

struct CheckOutcome {
  Json report;
  int exit_code = kExitOk;
};

/// Runs one suite over a parsed spectra file. Throws InputError when a
/// required entry is missing or the file is inconsistent with the suite.
CheckOutcome check_spectra(const SpectraFile& file, const CheckRequest& request);

Json campaign_json(const CampaignConfig& cfg, const CampaignResult& result);

/// Header: coordinate names, verdict, min_slack, achievable_hits.
std::string scan_csv(const ScanResult& result);

}  // namespace qmarg::cli
