#include "qmarg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <thread>

#include "qmarg/errors.hpp"
#include "qmarg/linalg.hpp"

namespace qmarg {

std::string_view to_string(SpectrumMode mode) {
  switch (mode) {
    case SpectrumMode::kHaarPure: return "haar-pure";
    case SpectrumMode::kFixed: return "fixed-spectrum";
    case SpectrumMode::kDirichlet: return "dirichlet";
    case SpectrumMode::kEngineered: return "engineered-support";
  }
  return "?";
}

void CampaignConfig::validate() const {
  if (samples == 0) throw ArgumentError("campaign: samples must be >= 1");
  if (dims.count() == 0) throw ArgumentError("campaign: dims are empty");
  if (mode == SpectrumMode::kFixed) {
    if (fixed_spectrum.size() != dims.total()) {
      throw ArgumentError("campaign: fixed spectrum has length " + std::to_string(fixed_spectrum.size()) +
                          ", expected " + std::to_string(dims.total()));
    }
    (void)Spectrum(fixed_spectrum);
  }
  if (mode == SpectrumMode::kEngineered && dims.count() != 3) {
    throw ArgumentError("campaign: engineered-support mode needs three subsystems");
  }
  if (workers == 0) throw ArgumentError("campaign: workers must be >= 1");
}

namespace {

struct SampleContext {
  std::size_t index;
  std::uint64_t seed;
};

void fold_record(CampaignResult& out, const InequalityRecord& rec, const SampleContext& ctx) {
  auto [it, inserted] = out.records.try_emplace(rec.name);
  auto& agg = it->second;
  if (inserted) {
    agg.role = rec.role;
    agg.min_slack = std::numeric_limits<double>::infinity();
    agg.max_slack = -std::numeric_limits<double>::infinity();
  }
  ++agg.evaluations;
  if (rec.verdict == Verdict::kViolated) {
    ++agg.violation_count;
    ++out.total_violations;
  }
  if (rec.verdict == Verdict::kEqualityWithinTol) ++agg.equality_count;
  if (rec.slack < agg.min_slack || (rec.slack == agg.min_slack && ctx.index < agg.argmin_sample)) {
    agg.min_slack = rec.slack;
    agg.argmin_sample = ctx.index;
    agg.argmin_seed = ctx.seed;
  }
  agg.max_slack = std::max(agg.max_slack, rec.slack);
}

void fold_report(CampaignResult& out, const CompatReport& report, const SampleContext& ctx) {
  for (const auto& rec : report.records) fold_record(out, rec, ctx);
}

// Associative and commutative in everything but wall clock.
void merge_into(CampaignResult& into, const CampaignResult& from) {
  for (const auto& [name, agg] : from.records) {
    auto [it, inserted] = into.records.try_emplace(name, agg);
    if (inserted) continue;
    auto& dst = it->second;
    dst.evaluations += agg.evaluations;
    dst.violation_count += agg.violation_count;
    dst.equality_count += agg.equality_count;
    if (agg.min_slack < dst.min_slack || (agg.min_slack == dst.min_slack && agg.argmin_sample < dst.argmin_sample)) {
      dst.min_slack = agg.min_slack;
      dst.argmin_sample = agg.argmin_sample;
      dst.argmin_seed = agg.argmin_seed;
    }
    dst.max_slack = std::max(dst.max_slack, agg.max_slack);
  }
  into.total_samples += from.total_samples;
  into.total_violations += from.total_violations;
  into.rank_theorem.applicable += from.rank_theorem.applicable;
  into.rank_theorem.not_applicable += from.rank_theorem.not_applicable;
  into.rank_theorem.violated += from.rank_theorem.violated;
  into.max_marginal_gap = std::max(into.max_marginal_gap, from.max_marginal_gap);
  into.polytope_chain_inconsistencies += from.polytope_chain_inconsistencies;
}

using SampleFn = std::function<void(Rng&, const SampleContext&, CampaignResult&)>;

CampaignResult run_campaign(const CampaignConfig& cfg, std::string kind, const SampleFn& per_sample) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t workers = std::min(cfg.workers, cfg.samples);
  std::vector<CampaignResult> partial(workers);

  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < cfg.samples; i += workers) {
      const SampleContext ctx{i, sample_seed(cfg.seed, i)};
      Rng rng(ctx.seed);
      per_sample(rng, ctx, partial[w]);
      ++partial[w].total_samples;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }

  CampaignResult result;
  result.kind = std::move(kind);
  for (const auto& p : partial) merge_into(result, p);
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

DensityMatrix draw_state(const CampaignConfig& cfg, Rng& rng) {
  switch (cfg.mode) {
    case SpectrumMode::kHaarPure:
      return random_pure_state(cfg.dims, rng);
    case SpectrumMode::kFixed:
      return random_fixed_spectrum_state(cfg.dims, Spectrum(cfg.fixed_spectrum), rng);
    case SpectrumMode::kDirichlet:
      return random_fixed_spectrum_state(cfg.dims, Spectrum(random_simplex_point(cfg.dims.total(), rng)), rng);
    case SpectrumMode::kEngineered:
      break;
  }
  throw ArgumentError("campaign: engineered-support states are only drawn by the tripartite campaign");
}

Spectrum reduced_spectrum(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, SubsetSpec(keep, rho.dims())).spectrum();
}

// Zero-pads the shorter increasing spectrum at the low end.
double marginal_gap(const Spectrum& a, const Spectrum& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + a.size() >= n ? a[i + a.size() - n] : 0.0;
    const double y = i + b.size() >= n ? b[i + b.size() - n] : 0.0;
    gap = std::max(gap, std::abs(x - y));
  }
  return gap;
}

// Admissible (ab_deficiency, bc_deficiency) requests for engineered states.
std::vector<std::pair<std::size_t, std::size_t>> engineered_requests(const SubsystemDims& dims) {
  const std::size_t l = dims[0], m = dims[1], n = dims[2];
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < l * m; ++r)
    for (std::size_t s = 0; s < m * n; ++s)
      if (n * r <= l * s) out.emplace_back(r, s);
  return out;
}

}  // namespace

CampaignResult run_bipartite_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  if (cfg.dims.count() != 2) throw ArgumentError("bipartite campaign: expected two subsystems");
  if (cfg.mode == SpectrumMode::kEngineered) throw ArgumentError("bipartite campaign: unsupported mode");
  const bool two_qubit = cfg.dims[0] == 2 && cfg.dims[1] == 2;
  const CheckOptions opts{cfg.slack_tol};

  auto result = run_campaign(cfg, "bipartite", [&](Rng& rng, const SampleContext& ctx, CampaignResult& out) {
    const auto rho = draw_state(cfg, rng);
    const auto a = reduced_spectrum(rho, {0});
    const auto b = reduced_spectrum(rho, {1});
    const auto ab = rho.spectrum();
    fold_report(out, check_bipartite(a, b, ab, opts), ctx);
    if (two_qubit) fold_report(out, check_two_qubit(a, b, ab, opts), ctx);
    if (cfg.mode == SpectrumMode::kHaarPure) out.max_marginal_gap = std::max(out.max_marginal_gap, marginal_gap(a, b));
  });
  return result;
}

CampaignResult run_tripartite_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  if (cfg.dims.count() != 3) throw ArgumentError("tripartite campaign: expected three subsystems");
  const CheckOptions opts{cfg.slack_tol};
  const auto requests = cfg.mode == SpectrumMode::kEngineered ? engineered_requests(cfg.dims)
                                                               : std::vector<std::pair<std::size_t, std::size_t>>{};

  return run_campaign(cfg, "tripartite", [&](Rng& rng, const SampleContext& ctx, CampaignResult& out) {
    std::optional<DensityMatrix> rho;
    if (cfg.mode == SpectrumMode::kEngineered) {
      const auto [r, s] = requests[rng.below(requests.size())];
      rho.emplace(engineered_support_state(cfg.dims, r, s, rng, cfg.rank_tol).state);
    } else {
      rho.emplace(draw_state(cfg, rng));
    }
    const auto rho_ab = partial_trace(*rho, SubsetSpec({0, 1}, rho->dims()));
    const auto rho_bc = partial_trace(*rho, SubsetSpec({1, 2}, rho->dims()));
    const auto rho_b = partial_trace(*rho, SubsetSpec({1}, rho->dims()));

    const auto ev_abc = eigvalsh(rho->matrix());
    const auto ev_ab = eigvalsh(rho_ab.matrix());
    const auto ev_bc = eigvalsh(rho_bc.matrix());
    const auto ev_b = eigvalsh(rho_b.matrix());

    fold_report(out,
                check_tripartite(Spectrum(ev_ab), Spectrum(ev_bc), Spectrum(ev_b), Spectrum(ev_abc), cfg.dims, opts),
                ctx);

    const TripartiteRanks ranks{numerical_rank(ev_abc, cfg.rank_tol), numerical_rank(ev_ab, cfg.rank_tol),
                                numerical_rank(ev_bc, cfg.rank_tol), numerical_rank(ev_b, cfg.rank_tol)};
    const auto rank_report = check_rank_theorem(ranks, cfg.dims, cfg.bracket);
    switch (rank_report.status) {
      case RankStatus::kNotApplicable: ++out.rank_theorem.not_applicable; break;
      case RankStatus::kSatisfied: ++out.rank_theorem.applicable; break;
      case RankStatus::kViolated:
        ++out.rank_theorem.applicable;
        ++out.rank_theorem.violated;
        break;
    }
  });
}

CampaignResult run_pure_multipartite_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const std::size_t parties = cfg.dims.count();
  if (parties < 2) throw ArgumentError("pure multipartite campaign: need at least two parties");
  const std::size_t m = cfg.dims[0];
  for (const auto d : cfg.dims.values()) {
    if (d != m) throw ArgumentError("pure multipartite campaign: all parties must have the same dimension");
  }
  if (cfg.mode != SpectrumMode::kHaarPure) throw ArgumentError("pure multipartite campaign: requires haar-pure mode");
  const bool qutrits = parties == 3 && m == 3;
  const CheckOptions opts{cfg.slack_tol};

  return run_campaign(cfg, "pure-multipartite", [&](Rng& rng, const SampleContext& ctx, CampaignResult& out) {
    const auto rho = random_pure_state(cfg.dims, rng);
    std::vector<Spectrum> spectra;
    spectra.reserve(parties);
    for (std::size_t j = 0; j < parties; ++j) spectra.push_back(reduced_spectrum(rho, {j}));
    const auto chain = check_pure_multipartite(spectra, opts);
    fold_report(out, chain, ctx);
    if (qutrits) {
      const auto polytope = check_three_qutrit_polytope(spectra[0], spectra[1], spectra[2], opts);
      fold_report(out, polytope, ctx);
      if (polytope.compatible() && !chain.compatible()) ++out.polytope_chain_inconsistencies;
    }
    if (parties == 2) out.max_marginal_gap = std::max(out.max_marginal_gap, marginal_gap(spectra[0], spectra[1]));
  });
}

namespace {

// LN × kN matrix whose i-th block of N columns is u_i ⊗ I_N.
ComplexMatrix left_structured(const ComplexMatrix& u, std::size_t n) {
  const std::size_t l = u.rows();
  ComplexMatrix out(l * n, u.cols() * n);
  for (std::size_t i = 0; i < u.cols(); ++i)
    for (std::size_t p = 0; p < l; ++p)
      for (std::size_t q = 0; q < n; ++q) out(p * n + q, i * n + q) = u(p, i);
  return out;
}

// LN × lL matrix whose j-th block of L columns is I_L ⊗ v_j.
ComplexMatrix right_structured(const ComplexMatrix& v, std::size_t l) {
  const std::size_t n = v.rows();
  ComplexMatrix out(l * n, v.cols() * l);
  for (std::size_t j = 0; j < v.cols(); ++j)
    for (std::size_t p = 0; p < l; ++p)
      for (std::size_t q = 0; q < n; ++q) out(p * n + q, j * l + p) = v(q, j);
  return out;
}

}  // namespace

WitnessReport lemma_bound_witness(const DensityMatrix& rho, std::size_t k, std::size_t l, std::size_t trials,
                                  Rng& rng, double tol) {
  if (rho.dims().count() != 2) throw ArgumentError("lemma_bound_witness: expected a bipartite state");
  const std::size_t dim_a = rho.dims()[0];
  const std::size_t dim_b = rho.dims()[1];
  if (k < 1 || k >= dim_a || l < 1 || l >= dim_b) {
    throw ArgumentError("lemma_bound_witness: need 1 <= k < L and 1 <= l < N");
  }

  const auto rho_a = partial_trace(rho, SubsetSpec({0}, rho.dims()));
  const auto rho_b = partial_trace(rho, SubsetSpec({1}, rho.dims()));
  const auto ab = rho.spectrum();

  WitnessReport w;
  w.k = k;
  w.l = l;
  w.trials = trials;
  w.lower_bound = lemma2_lower_bound(ab, k * dim_b + l * dim_a, k * l);
  w.min_trial_trace = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const ComplexMatrix& u, const ComplexMatrix& v) {
    const auto u1 = left_structured(u, dim_b);
    const auto u2 = right_structured(v, dim_a);
    const double kappa = overlap_count(u1, u2);
    w.max_overlap_defect = std::max(w.max_overlap_defect, std::abs(kappa - static_cast<double>(k * l)));
    return compressed_trace(rho.matrix(), u1) + compressed_trace(rho.matrix(), u2);
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const auto u = random_isometry(dim_a, k, rng);
    const auto v = random_isometry(dim_b, l, rng);
    const double trace = evaluate(u.matrix(), v.matrix());
    w.min_trial_trace = std::min(w.min_trial_trace, trace);
    if (trace < w.lower_bound - tol) ++w.violations;
  }

  const auto best_a = min_trace_isometry(rho_a.matrix(), k);
  const auto best_b = min_trace_isometry(rho_b.matrix(), l);
  w.marginal_sum = best_a.value + best_b.value;
  w.eigenvector_trace = evaluate(best_a.achiever.matrix(), best_b.achiever.matrix());
  if (w.eigenvector_trace < w.lower_bound - tol) ++w.violations;
  return w;
}

std::vector<std::vector<std::size_t>> sorted_compositions(std::size_t total, std::size_t parts) {
  std::vector<std::vector<std::size_t>> out;
  if (parts == 0) return out;
  std::vector<std::size_t> current;
  // Nondecreasing sequences of `parts` integers summing to `total`.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t remaining, std::size_t min_value) {
    const std::size_t slots = parts - current.size();
    if (slots == 1) {
      if (remaining >= min_value) {
        current.push_back(remaining);
        out.push_back(current);
        current.pop_back();
      }
      return;
    }
    for (std::size_t v = min_value; v * slots <= remaining; ++v) {
      current.push_back(v);
      rec(remaining - v, v);
      current.pop_back();
    }
  };
  rec(total, 0);
  return out;
}

namespace {

// Largest-remainder rounding of a probability vector onto multiples of 1/R,
// returned sorted increasing.
std::vector<std::size_t> round_to_grid(std::span<const double> p, std::size_t resolution) {
  const std::size_t n = p.size();
  std::vector<std::size_t> counts(n);
  std::vector<std::pair<double, std::size_t>> remainders(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = std::max(0.0, p[i]) * static_cast<double>(resolution);
    counts[i] = static_cast<std::size_t>(std::floor(scaled));
    remainders[i] = {scaled - std::floor(scaled), i};
    assigned += counts[i];
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
  for (std::size_t j = 0; assigned < resolution && j < n; ++j, ++assigned) ++counts[remainders[j].second];
  while (assigned > resolution) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::sort(counts.begin(), counts.end());
  return counts;
}

CompatReport evaluate_checker(const ScanConfig& cfg, const std::vector<Spectrum>& spectra) {
  const CheckOptions opts{cfg.tol};
  if (cfg.checker == ScanChecker::kThreeQutrit) {
    return check_three_qutrit_polytope(spectra[0], spectra[1], spectra[2], opts);
  }
  return check_pure_multipartite(spectra, opts);
}

}  // namespace

ScanResult scan_polytope(const ScanConfig& cfg) {
  if (cfg.resolution < 2) throw ArgumentError("scan_polytope: resolution must be >= 2");
  if (cfg.checker == ScanChecker::kThreeQutrit && (cfg.parties != 3 || cfg.local_dim != 3)) {
    throw ArgumentError("scan_polytope: the three-qutrit checker needs 3 parties of dimension 3");
  }
  if (cfg.parties < 2 || cfg.local_dim < 2) throw ArgumentError("scan_polytope: need >= 2 parties of dimension >= 2");

  const std::size_t parties = cfg.parties;
  const std::size_t m = cfg.local_dim;
  const auto comps = sorted_compositions(cfg.resolution, m);
  const double r = static_cast<double>(cfg.resolution);

  ScanResult out;
  for (std::size_t j = 0; j < parties; ++j)
    for (std::size_t i = 1; i <= m; ++i) out.coordinate_names.push_back("p" + std::to_string(j) + "_l" + std::to_string(i));
  out.lipschitz = cfg.checker == ScanChecker::kThreeQutrit ? three_qutrit_lipschitz()
                                                           : static_cast<double>(parties * (m - 1));

  std::map<std::vector<std::size_t>, std::size_t> row_of;
  std::vector<std::size_t> digits(parties, 0);
  for (;;) {
    std::vector<Spectrum> spectra;
    ScanRow row;
    std::vector<std::size_t> key;
    for (std::size_t j = 0; j < parties; ++j) {
      std::vector<double> values;
      for (const auto c : comps[digits[j]]) {
        values.push_back(static_cast<double>(c) / r);
        key.push_back(c);
      }
      row.coords.insert(row.coords.end(), values.begin(), values.end());
      spectra.emplace_back(std::move(values), Spectrum::kZeroClamp, 1e-9);
    }
    const auto report = evaluate_checker(cfg, spectra);
    row.verdict = report.overall;
    row.min_slack = report.min_slack;
    row_of.emplace(std::move(key), out.rows.size());
    out.rows.push_back(std::move(row));

    bool wrapped = true;
    for (std::size_t pos = parties; pos-- > 0;) {
      if (++digits[pos] < comps.size()) {
        wrapped = false;
        break;
      }
      digits[pos] = 0;
    }
    if (wrapped) break;
  }

  if (cfg.achievable_samples > 0) {
    const SubsystemDims dims(std::vector<std::size_t>(parties, m));
    for (std::size_t i = 0; i < cfg.achievable_samples; ++i) {
      Rng rng(sample_seed(cfg.seed, i));
      const auto rho = random_pure_state(dims, rng);
      std::vector<std::size_t> key;
      double rounding = 0.0;
      for (std::size_t j = 0; j < parties; ++j) {
        const auto spec = partial_trace(rho, SubsetSpec({j}, dims)).spectrum();
        const auto grid = round_to_grid(spec.values(), cfg.resolution);
        for (std::size_t e = 0; e < m; ++e) {
          rounding = std::max(rounding, std::abs(spec[e] - static_cast<double>(grid[e]) / r));
          key.push_back(grid[e]);
        }
      }
      auto& row = out.rows.at(row_of.at(key));
      ++row.achievable_hits;
      row.max_rounding = std::max(row.max_rounding, rounding);
    }
    for (const auto& row : out.rows) {
      if (row.achievable_hits > 0 && row.min_slack < -(out.lipschitz * row.max_rounding + cfg.tol)) {
        ++out.containment_violations;
      }
    }
  }
  return out;
}

}  // namespace qmarg
