#include "gfc/ilc.hpp"

#include <cmath>
#include <random>

#include "gfc/errors.hpp"
#include "gfc/simulate.hpp"

namespace gfc {

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kNormPlateau: return "norm_plateau";
    case StopReason::kDivergence: return "divergence";
  }
  return "unknown";
}

IterationRecord run_trial(const TrialConfig& config, const Signal& uf, std::uint64_t seed) {
  const Signal& r = config.reference;
  if (uf.size() != r.size()) throw DomainError("learning signal length must match the reference");
  const TransferFunction plant_tf = config.plant_true.minreal();
  if (plant_tf.relative_degree() < 1)
    throw DomainError("trial plant must be strictly proper (no direct feedthrough)");

  DifferenceEquation controller(config.design.controller.minreal());
  DifferenceEquation plant(plant_tf);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t n = r.size();
  std::vector<double> e(n), y(n), u(n);
  for (std::size_t k = 0; k < n; ++k) {
    // The plant has no direct feedthrough, so its output at k is known
    // before u(k); advance it with a placeholder input and patch u(k) in
    // once the loop closes.
    double yk = plant.step(0.0);
    if (config.noise_std > 0.0) yk += config.noise_std * noise(rng);
    if (config.quantization_step > 0.0)
      yk = config.quantization_step * std::round(yk / config.quantization_step);
    if (!std::isfinite(yk))
      throw DivergenceError("trial diverged at sample " + std::to_string(k),
                            static_cast<long>(k));

    e[k] = r[k] - yk;
    u[k] = controller.step(e[k] + uf[k]);
    if (!std::isfinite(u[k]))
      throw DivergenceError("controller output diverged at sample " + std::to_string(k),
                            static_cast<long>(k));
    plant.set_latest_input(u[k]);
    y[k] = yk;
  }

  IterationRecord rec{0, uf, Signal(std::move(e), r.sample_time()),
                      Signal(std::move(y), r.sample_time()),
                      Signal(std::move(u), r.sample_time()), 0.0};
  rec.error_norm = rec.e.norm();
  return rec;
}

IterationRecord run_trial(const TrialConfig& config, const Signal& uf) {
  return run_trial(config, uf, config.seed);
}

Signal update_learning_signal(const IterationRecord& prev, const DesignBundle& design) {
  const Signal learned = apply_acausal(design.learning, prev.e);
  return zero_phase_filter(design.robustness, prev.uf + learned);
}

Signal predict_next_error(const Signal& e_j, const DesignBundle& design) {
  const TransferFunction one = TransferFunction::constant(1.0, design.plant.sample_time());
  const TransferFunction contraction = one + design.tu * design.learning;
  return apply_acausal(contraction, e_j);
}

CampaignResult run_campaign(const TrialConfig& config, const StopRule& stop) {
  if (stop.max_iters < 1) throw DomainError("campaign needs max_iters >= 1");

  CampaignResult result;
  Signal uf = Signal::zeros(config.reference.size(), config.reference.sample_time());
  double norm0 = 0.0;

  for (int j = 0; j < stop.max_iters; ++j) {
    // Decorrelate per-iteration noise while keeping the campaign seeded.
    const std::uint64_t trial_seed = config.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(j);
    std::optional<IterationRecord> trial;
    try {
      trial = run_trial(config, uf, trial_seed);
    } catch (const DivergenceError&) {
      result.stop_reason = StopReason::kDivergence;
      return result;
    }
    trial->index = j;
    result.iterations.push_back(*trial);
    const IterationRecord& rec = result.iterations.back();

    if (j == 0) norm0 = rec.error_norm;
    if (j > 0 && rec.error_norm > stop.divergence_factor * norm0) {
      result.stop_reason = StopReason::kDivergence;
      return result;
    }
    if (stop.plateau_tol > 0.0 && result.iterations.size() >= 3) {
      const auto& it = result.iterations;
      const double n2 = it[it.size() - 3].error_norm;
      const double n1 = it[it.size() - 2].error_norm;
      const double n0 = it[it.size() - 1].error_norm;
      const bool flat1 = std::abs(n1 - n2) <= stop.plateau_tol * std::max(n2, 1e-300);
      const bool flat0 = std::abs(n0 - n1) <= stop.plateau_tol * std::max(n1, 1e-300);
      if (flat1 && flat0) {
        result.stop_reason = StopReason::kNormPlateau;
        result.converged_at = j;
        return result;
      }
    }
    if (j + 1 < stop.max_iters) uf = update_learning_signal(rec, config.design);
  }
  result.stop_reason = StopReason::kMaxIters;
  return result;
}

std::vector<SweepRow> robustness_sweep(const TrialConfig& base, const StopRule& stop,
                                       const std::vector<TransferFunction>& perturbations) {
  std::vector<SweepRow> rows;
  const auto omegas = probe_frequencies(base.design.plant.sample_time(), 200);

  int index = 0;
  for (const auto& pert : perturbations) {
    TrialConfig with_d = base;
    with_d.plant_true = (base.design.plant * pert).minreal();
    if (!is_stable(with_d.plant_true))
      throw DomainError("perturbation destabilizes the plant model");

    TrialConfig no_d = with_d;
    no_d.design.robustness = TransferFunction::constant(1.0, base.design.plant.sample_time());

    SweepRow row;
    row.label = "perturbation_" + std::to_string(index++);

    // Contraction margin sup_w |1 + Tu_true L D_eff| with D_eff = |D|^2 for
    // the zero-phase application.
    const LoopTfs loop = compute_loop_tfs(with_d.plant_true, base.design.controller);
    const auto tu_resp = freq_response(loop.tu, omegas);
    const auto l_resp = freq_response(base.design.learning, omegas);
    const auto d_resp = freq_response(base.design.robustness, omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const auto tul = tu_resp[i] * l_resp[i];
      const double d2 = std::norm(d_resp[i]);
      row.margin_no_d = std::max(row.margin_no_d, std::abs(1.0 + tul));
      row.margin_with_d = std::max(row.margin_with_d, std::abs(1.0 + tul * d2));
    }

    const CampaignResult run_d = run_campaign(with_d, stop);
    const CampaignResult run_nd = run_campaign(no_d, stop);
    row.diverged_with_d = run_d.stop_reason == StopReason::kDivergence;
    row.diverged_no_d = run_nd.stop_reason == StopReason::kDivergence;
    if (!run_d.iterations.empty()) row.final_norm_with_d = run_d.iterations.back().error_norm;
    if (!run_nd.iterations.empty()) row.final_norm_no_d = run_nd.iterations.back().error_norm;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gfc
