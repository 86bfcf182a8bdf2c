#include "sparsekit/stats.hpp"

#include <algorithm>
#include <cmath>

namespace sparsekit {

namespace {

nlohmann::json real_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::json iteration_json(const IterationRecord& it) {
  return {
      {"j", it.j},
      {"N", it.N},
      {"draws", it.draws},
      {"sum_r", it.sum_r},
      {"du", it.du},
      {"dl", it.dl},
      {"u", it.u},
      {"ell", it.ell},
      {"phi_before", real_or_null(it.phi_before)},
      {"phi_after", real_or_null(it.phi_after)},
      {"half_barrier", it.half_barrier},
      {"resamples", it.resamples},
      {"alpha", real_or_null(it.alpha)},
      {"beta", real_or_null(it.beta)},
  };
}

}  // namespace

nlohmann::json sparsify_record(const SparsifierResult& r, const RunShape& shape,
                               bool include_log, double wall_clock_s) {
  const bool bss = r.algorithm == Algorithm::kRandomizedBss;
  nlohmann::json j = {
      {"record", "sparsify"},
      {"schema_version", kStatsSchemaVersion},
      {"algorithm", to_string(r.algorithm)},
      {"mode", to_string(r.mode)},
      {"n", r.dim},
      {"n_vertices", shape.n_vertices > 0 ? nlohmann::json(shape.n_vertices)
                                          : nlohmann::json(nullptr)},
      {"m", shape.m},
      {"q", r.q},
      {"eps", r.eps},
      {"seed", r.seed},
      {"iterations", r.iterations},
      {"total_samples", r.total_samples},
      {"nonzero_count", r.nonzero_count},
      {"initial_u", r.initial_u},
      {"initial_ell", r.initial_ell},
      {"final_u", r.final_u},
      {"final_ell", r.final_ell},
      {"gap_ratio", (r.final_u - r.final_ell) / r.final_u},
      {"rescale", r.rescale},
      {"aborted", r.aborted},
      {"abort_reason", r.abort_reason},
      {"iteration_cap", r.iteration_cap},
      {"sample_cap", r.sample_cap},
      {"iteration_bound",
       bss ? nlohmann::json(nullptr)
           : nlohmann::json(iteration_bound(r.dim, r.q, r.eps))},
      {"sample_bound", bss ? 40.0 * r.dim / (r.eps * r.eps)
                           : sample_bound(r.dim, r.q, r.eps)},
      {"half_barrier_checked", r.half_barrier_checked},
      {"half_barrier_failures", r.half_barrier_failures},
      {"taylor_degree", r.mode == Mode::kFast ? nlohmann::json(r.taylor_degree)
                                              : nlohmann::json(nullptr)},
      {"eta", r.mode == Mode::kFast ? nlohmann::json(r.eta)
                                    : nlohmann::json(nullptr)},
      {kWallClockField, wall_clock_s},
  };
  if (include_log) {
    nlohmann::json log = nlohmann::json::array();
    for (const IterationRecord& it : r.log) log.push_back(iteration_json(it));
    j["log"] = std::move(log);
  }
  return j;
}

nlohmann::json verify_record(const VerificationReport& rep, double threshold) {
  nlohmann::json lo = nullptr, hi = nullptr;
  if (!rep.quad_form_samples.empty()) {
    const auto [mn, mx] = std::minmax_element(rep.quad_form_samples.begin(),
                                              rep.quad_form_samples.end());
    lo = *mn;
    hi = *mx;
  }
  return {
      {"record", "verify"},
      {"schema_version", kStatsSchemaVersion},
      {"lambda_lo", rep.lambda_lo},
      {"lambda_hi", rep.lambda_hi},
      {"epsilon_achieved", rep.epsilon_achieved},
      {"edges_in", rep.edges_in},
      {"edges_out", rep.edges_out},
      {"n_probe", rep.quad_form_samples.size()},
      {"probe_min", lo},
      {"probe_max", hi},
      {"quad_form_samples", rep.quad_form_samples},
      {"threshold", threshold},
      {"pass", rep.epsilon_achieved <= threshold},
  };
}

nlohmann::json without_wall_clock(const nlohmann::json& record) {
  nlohmann::json out = record;
  out.erase(kWallClockField);
  return out;
}

}  // namespace sparsekit
