#include "qmarg/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qmarg/errors.hpp"

namespace qmarg::cli {

namespace {

std::string_view bracket_name(BracketConvention b) {
  return b == BracketConvention::kFloor ? "floor" : "strictly-less";
}

BracketConvention parse_bracket(const std::string& s) {
  return s == "floor" ? BracketConvention::kFloor : BracketConvention::kStrictlyLess;
}

Json dims_json(std::span<const std::size_t> dims) { return Json(std::vector<std::size_t>(dims.begin(), dims.end())); }

Json record_json(const InequalityRecord& r) {
  Json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["verdict"] = std::string(to_string(r.verdict));
  j["role"] = std::string(to_string(r.role));
  return j;
}

Json rank_json(const RankTheoremReport& report, const TripartiteRanks& ranks) {
  Json j;
  j["ranks"] = {{"ABC", ranks.abc}, {"AB", ranks.ab}, {"BC", ranks.bc}, {"B", ranks.b}};
  j["status"] = std::string(to_string(report.status));
  Json orients = Json::array();
  for (const auto& o : report.orientations) {
    Json oj;
    oj["name"] = o.name;
    oj["status"] = std::string(to_string(o.status));
    oj["r"] = o.r;
    oj["s"] = o.s;
    oj["t"] = o.t;
    oj["bound"] = o.bound;
    oj["reason"] = o.reason;
    orients.push_back(std::move(oj));
  }
  j["orientations"] = std::move(orients);
  return j;
}

class SpectraLookup {
 public:
  SpectraLookup(const SpectraFile& file, std::string suite) : file_(file), suite_(std::move(suite)) {}

  bool has(const std::string& name) const { return file_.spectra.count(name) != 0; }

  Spectrum get(const std::string& name) {
    const auto it = file_.spectra.find(name);
    if (it == file_.spectra.end()) {
      throw InputError("missing spectrum entry \"" + name + "\" required by suite " + suite_);
    }
    const auto& raw = it->second;
    if (!std::is_sorted(raw.begin(), raw.end())) resorted_.push_back(name);
    try {
      return Spectrum(raw);
    } catch (const std::exception& e) {
      throw InputError("spectrum entry \"" + name + "\": " + e.what());
    }
  }

  const std::vector<std::string>& resorted() const { return resorted_; }

 private:
  const SpectraFile& file_;
  std::string suite_;
  std::vector<std::string> resorted_;
};

void require_dims(const SpectraFile& file, const std::vector<std::size_t>& inferred) {
  if (!file.dims.empty() && file.dims != inferred) {
    std::ostringstream os;
    os << "dims annotation does not match the spectra lengths (inferred";
    for (const auto d : inferred) os << ' ' << d;
    os << ')';
    throw InputError(os.str());
  }
}

std::size_t exact_quotient(std::size_t num, std::size_t den, const char* what) {
  if (den == 0 || num % den != 0) throw InputError(std::string(what) + ": lengths are not consistent");
  return num / den;
}

}  // namespace

CheckOutcome check_spectra(const SpectraFile& file, const CheckRequest& request) {
  SpectraLookup lookup(file, request.suite);
  const CheckOptions opts{request.tol};
  CompatReport report;
  std::vector<std::size_t> dims;
  Json rank_section;
  bool rank_violated = false;

  try {
    if (request.suite == "two-qubit" || request.suite == "bipartite") {
      const auto a = lookup.get("A");
      const auto b = lookup.get("B");
      const auto ab = lookup.get("AB");
      dims = {a.size(), b.size()};
      require_dims(file, dims);
      if (ab.size() != a.size() * b.size()) throw InputError("length of AB must equal len(A) * len(B)");
      report = request.suite == "two-qubit" ? check_two_qubit(a, b, ab, opts) : check_bipartite(a, b, ab, opts);
    } else if (request.suite == "tripartite") {
      const auto ab = lookup.get("AB");
      const auto bc = lookup.get("BC");
      const auto b = lookup.get("B");
      const auto abc = lookup.get("ABC");
      const std::size_t m = b.size();
      dims = {exact_quotient(ab.size(), m, "AB"), m, exact_quotient(bc.size(), m, "BC")};
      require_dims(file, dims);
      const SubsystemDims sd(dims);
      if (abc.size() != sd.total()) throw InputError("length of ABC must equal L * M * N");
      report = check_tripartite(ab, bc, b, abc, sd, opts);
      const TripartiteRanks ranks{numerical_rank(abc.values(), request.rank_tol),
                                  numerical_rank(ab.values(), request.rank_tol),
                                  numerical_rank(bc.values(), request.rank_tol),
                                  numerical_rank(b.values(), request.rank_tol)};
      const auto rank_report = check_rank_theorem(ranks, sd, request.bracket);
      rank_violated = rank_report.status == RankStatus::kViolated;
      rank_section = rank_json(rank_report, ranks);
    } else if (request.suite == "pure-multi" || request.suite == "qutrit-polytope") {
      std::vector<Spectrum> spectra;
      if (request.suite == "qutrit-polytope") {
        for (const char* name : {"A", "B", "C"}) spectra.push_back(lookup.get(name));
      } else {
        for (char c = 'A'; c <= 'Z' && lookup.has(std::string(1, c)); ++c) spectra.push_back(lookup.get(std::string(1, c)));
        if (spectra.size() < 2) lookup.get(spectra.empty() ? "A" : "B");
      }
      dims.assign(spectra.size(), spectra.front().size());
      for (const auto& s : spectra) {
        if (s.size() != dims.front()) throw InputError("all party spectra must have the same length");
      }
      require_dims(file, dims);
      report = request.suite == "qutrit-polytope" ? check_three_qutrit_polytope(spectra[0], spectra[1], spectra[2], opts)
                                                  : check_pure_multipartite(spectra, opts);
    } else {
      throw InputError("unknown suite " + request.suite);
    }
  } catch (const ArgumentError& e) {
    throw InputError(e.what());
  }

  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "check";
  j["suite"] = request.suite;
  j["dims"] = dims_json(dims);
  j["tolerances"] = {{"slack", request.tol}, {"rank", request.rank_tol}};
  if (request.suite == "tripartite") j["bracket"] = std::string(bracket_name(request.bracket));
  j["resorted"] = lookup.resorted();
  j["overall"] = std::string(to_string(report.overall));
  j["min_slack"] = report.min_slack;
  j["sufficiency"] = std::string(to_string(report.sufficiency));
  if (report.sufficiency == SufficiencyClaim::kClaimedSufficient) {
    j["sufficient_conditions_hold"] = report.sufficient_conditions_hold;
  }
  Json records = Json::array();
  for (const auto& r : report.records) records.push_back(record_json(r));
  j["records"] = std::move(records);
  if (!rank_section.is_null()) j["rank_theorem"] = std::move(rank_section);

  CheckOutcome outcome;
  outcome.exit_code = (!report.compatible() || rank_violated) ? kExitViolation : kExitOk;
  outcome.report = std::move(j);
  return outcome;
}

Json campaign_json(const CampaignConfig& cfg, const CampaignResult& result) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "sample";
  j["campaign"] = result.kind;
  j["dims"] = dims_json(cfg.dims.values());
  j["mode"] = std::string(to_string(cfg.mode));
  if (cfg.mode == SpectrumMode::kFixed) j["fixed_spectrum"] = cfg.fixed_spectrum;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerances"] = {{"slack", cfg.slack_tol}, {"rank", cfg.rank_tol}};
  if (result.kind == "tripartite") j["bracket"] = std::string(bracket_name(cfg.bracket));
  j["total_samples"] = result.total_samples;
  j["total_violations"] = result.total_violations;
  j["clean"] = result.clean();
  Json records = Json::array();
  for (const auto& [name, agg] : result.records) {
    Json r;
    r["name"] = name;
    r["role"] = std::string(to_string(agg.role));
    r["evaluations"] = agg.evaluations;
    r["violation_count"] = agg.violation_count;
    r["equality_count"] = agg.equality_count;
    r["min_slack"] = agg.min_slack;
    r["max_slack"] = agg.max_slack;
    r["argmin_sample"] = agg.argmin_sample;
    r["argmin_seed"] = agg.argmin_seed;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  if (result.kind == "tripartite") {
    j["rank_theorem"] = {{"applicable", result.rank_theorem.applicable},
                         {"not_applicable", result.rank_theorem.not_applicable},
                         {"violated", result.rank_theorem.violated}};
  }
  if (result.max_marginal_gap >= 0.0) j["max_marginal_gap"] = result.max_marginal_gap;
  if (result.kind == "pure-multipartite") j["polytope_chain_inconsistencies"] = result.polytope_chain_inconsistencies;
  return j;
}

std::string scan_csv(const ScanResult& result) {
  std::ostringstream os;
  for (const auto& name : result.coordinate_names) os << name << ',';
  os << "verdict,min_slack,achievable_hits\n";
  for (const auto& row : result.rows) {
    for (const double c : row.coords) os << format_double(c) << ',';
    os << to_string(row.verdict) << ',' << format_double(row.min_slack) << ',' << row.achievable_hits << '\n';
  }
  return os.str();
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  file << text;
  if (!file.flush()) throw InputError("cannot write " + path);
}

struct CheckArgs {
  std::string input;
  CheckRequest request;
  std::string bracket = "strict";
  std::string output;
};

struct ReduceArgs {
  std::string input;
  std::string keep;
  std::string output;
};

struct SampleArgs {
  std::string dims;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  bool pure = false;
  std::string spectrum;
  bool dirichlet = false;
  bool engineered = false;
  std::string campaign = "auto";
  std::size_t workers = 1;
  double tol = 1e-8;
  double rank_tol = 1e-9;
  std::string bracket = "strict";
  std::string output;
};

struct ScanArgs {
  std::string checker = "three-qutrit";
  std::size_t parties = 3;
  std::size_t dim = 3;
  std::size_t resolution = 6;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string output;
};

int do_check(const CheckArgs& args, std::ostream& out) {
  auto request = args.request;
  request.bracket = parse_bracket(args.bracket);
  const auto file = parse_spectra_file(read_json_file(args.input));
  const auto outcome = check_spectra(file, request);
  emit(dump_json(outcome.report), args.output, out);
  return outcome.exit_code;
}

int do_reduce(const ReduceArgs& args, std::ostream& out) {
  const auto rho = parse_matrix_file(read_json_file(args.input));
  const auto keep = parse_index_list(args.keep);
  const auto reduced = partial_trace(rho, SubsetSpec(keep, rho.dims()));
  auto doc = matrix_file(reduced);
  const auto spectrum = reduced.spectrum();
  doc["spectrum"] = std::vector<double>(spectrum.values().begin(), spectrum.values().end());
  emit(dump_json(doc), args.output, out);
  return kExitOk;
}

std::string pick_campaign(const SampleArgs& args, const SubsystemDims& dims) {
  if (args.campaign != "auto") return args.campaign;
  const auto v = dims.values();
  const bool equal = std::all_of(v.begin(), v.end(), [&](std::size_t d) { return d == v.front(); });
  if (args.pure && equal && dims.count() >= 3) return "pure-multi";
  if (dims.count() == 2) return "bipartite";
  if (dims.count() == 3) return "tripartite";
  throw InputError("no campaign fits " + std::to_string(dims.count()) +
                   " subsystems; pass --pure with equal dimensions for the pure multipartite campaign");
}

int do_sample(const SampleArgs& args, std::ostream& out) {
  CampaignConfig cfg;
  cfg.dims = SubsystemDims(parse_index_list(args.dims));
  cfg.samples = args.n;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  cfg.slack_tol = args.tol;
  cfg.rank_tol = args.rank_tol;
  cfg.bracket = parse_bracket(args.bracket);
  if (args.pure) {
    cfg.mode = SpectrumMode::kHaarPure;
  } else if (!args.spectrum.empty()) {
    cfg.mode = SpectrumMode::kFixed;
    cfg.fixed_spectrum = parse_double_list(args.spectrum);
  } else if (args.engineered) {
    cfg.mode = SpectrumMode::kEngineered;
  } else {
    cfg.mode = SpectrumMode::kDirichlet;
  }

  const auto campaign = pick_campaign(args, cfg.dims);
  CampaignResult result;
  if (campaign == "bipartite") {
    result = run_bipartite_campaign(cfg);
  } else if (campaign == "tripartite") {
    result = run_tripartite_campaign(cfg);
  } else {
    result = run_pure_multipartite_campaign(cfg);
  }
  emit(dump_json(campaign_json(cfg, result)), args.output, out);
  return result.clean() ? kExitOk : kExitViolation;
}

int do_scan(const ScanArgs& args, std::ostream& out) {
  ScanConfig cfg;
  cfg.checker = args.checker == "pure-multi" ? ScanChecker::kPureMultipartite : ScanChecker::kThreeQutrit;
  cfg.parties = args.parties;
  cfg.local_dim = args.dim;
  cfg.resolution = args.resolution;
  cfg.achievable_samples = args.samples;
  cfg.seed = args.seed;
  cfg.tol = args.tol;
  const auto result = scan_polytope(cfg);
  emit(scan_csv(result), args.output, out);
  return result.containment_violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral compatibility checks for quantum marginals", "qmarg"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Evaluate a condition suite on a spectra file");
  check_cmd->add_option("input", check.input, "Spectra file (JSON)")->required();
  check_cmd->add_option("--suite", check.request.suite, "Condition suite")
      ->required()
      ->check(CLI::IsMember({"two-qubit", "bipartite", "tripartite", "pure-multi", "qutrit-polytope"}));
  check_cmd->add_option("--tol", check.request.tol, "Slack tolerance")->capture_default_str();
  check_cmd->add_option("--rank-tol", check.request.rank_tol, "Relative numerical-rank threshold")
      ->capture_default_str();
  check_cmd->add_option("--bracket", check.bracket, "Integer part in the rank bound")
      ->check(CLI::IsMember({"strict", "floor"}))
      ->capture_default_str();
  check_cmd->add_option("-o,--output", check.output, "Report path (default stdout)");

  ReduceArgs reduce;
  auto* reduce_cmd = app.add_subcommand("reduce", "Partial trace of a matrix file");
  reduce_cmd->add_option("input", reduce.input, "Matrix file (JSON)")->required();
  reduce_cmd->add_option("--keep", reduce.keep, "Subsystems to keep, e.g. 0,2")->required();
  reduce_cmd->add_option("-o,--output", reduce.output, "Output path (default stdout)");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample states and check every necessary condition");
  sample_cmd->add_option("--dims", sample.dims, "Local dimensions, e.g. 2,3")->required();
  sample_cmd->add_option("-n,--n", sample.n, "Number of samples")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Campaign seed")->capture_default_str();
  auto* pure_flag = sample_cmd->add_flag("--pure", sample.pure, "Haar-random pure states");
  auto* spectrum_opt = sample_cmd->add_option("--spectrum", sample.spectrum, "Fixed global spectrum");
  auto* dirichlet_flag = sample_cmd->add_flag("--dirichlet", sample.dirichlet, "Flat-Dirichlet spectra (default)");
  auto* engineered_flag =
      sample_cmd->add_flag("--engineered", sample.engineered, "Planted rank deficiencies (three subsystems)");
  pure_flag->excludes(spectrum_opt, dirichlet_flag, engineered_flag);
  spectrum_opt->excludes(dirichlet_flag, engineered_flag);
  dirichlet_flag->excludes(engineered_flag);
  sample_cmd->add_option("--campaign", sample.campaign, "Campaign kind")
      ->check(CLI::IsMember({"auto", "bipartite", "tripartite", "pure-multi"}))
      ->capture_default_str();
  sample_cmd->add_option("--workers", sample.workers, "Worker threads")->capture_default_str();
  sample_cmd->add_option("--tol", sample.tol, "Slack tolerance")->capture_default_str();
  sample_cmd->add_option("--rank-tol", sample.rank_tol, "Relative numerical-rank threshold")->capture_default_str();
  sample_cmd->add_option("--bracket", sample.bracket, "Integer part in the rank bound")
      ->check(CLI::IsMember({"strict", "floor"}))
      ->capture_default_str();
  sample_cmd->add_option("-o,--output", sample.output, "Result path (default stdout)");

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate a checker over a simplex grid (CSV)");
  scan_cmd->add_option("--checker", scan.checker, "Checker")
      ->check(CLI::IsMember({"three-qutrit", "pure-multi"}))
      ->capture_default_str();
  scan_cmd->add_option("--parties", scan.parties, "Number of parties")->capture_default_str();
  scan_cmd->add_option("--dim", scan.dim, "Local dimension")->capture_default_str();
  scan_cmd->add_option("--resolution", scan.resolution, "Grid denominator")->capture_default_str();
  scan_cmd->add_option("--samples", scan.samples, "Pure states binned onto the grid")->capture_default_str();
  scan_cmd->add_option("--seed", scan.seed, "Sampling seed")->capture_default_str();
  scan_cmd->add_option("--tol", scan.tol, "Slack tolerance")->capture_default_str();
  scan_cmd->add_option("-o,--output", scan.output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*check_cmd) return do_check(check, out);
    if (*reduce_cmd) return do_reduce(reduce, out);
    if (*sample_cmd) return do_sample(sample, out);
    if (*scan_cmd) return do_scan(scan, out);
  } catch (const std::exception& e) {
    err << "qmarg: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace qmarg::cli
