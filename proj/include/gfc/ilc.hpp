#ifndef GFC_ILC_HPP
#define GFC_ILC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfc/signal.hpp"
#include "gfc/synthesis.hpp"

namespace gfc {

/// One simulated grasp-trial setup. plant_true is the simulation truth and
/// may differ from the design model to exercise mismatch robustness.
struct TrialConfig {
  Signal reference;  // target force trajectory, Newtons
  TransferFunction plant_true;
  DesignBundle design;
  double noise_std = 0.0;          // Newtons
  double quantization_step = 0.0;  // Newtons
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int index = 0;
  Signal uf;  // learning signal injected at the reference junction
  Signal e;   // tracking error r - y
  Signal y;   // measured force
  Signal u;   // controller output
  double error_norm = 0.0;
};

enum class StopReason { kMaxIters, kNormPlateau, kDivergence };

struct StopRule {
  int max_iters = 8;
  double plateau_tol = 0.05;       // relative norm change; 0 disables
  double divergence_factor = 10.0; // stop when norm exceeds factor * |e0|
};

struct CampaignResult {
  std::vector<IterationRecord> iterations;
  std::optional<int> converged_at;
  StopReason stop_reason = StopReason::kMaxIters;
};

const char* stop_reason_name(StopReason reason);

/// One closed-loop trial: s(k) = r(k) + uf(k) - y(k) feeds the controller,
/// the true plant produces y with seeded Gaussian noise and quantization.
/// e = r - y is the recorded tracking error (uf excluded).
IterationRecord run_trial(const TrialConfig& config, const Signal& uf, std::uint64_t seed);
IterationRecord run_trial(const TrialConfig& config, const Signal& uf);

/// uf_j = D(uf_{j-1} + L e_{j-1}); L applied acausally, D zero-phase.
Signal update_learning_signal(const IterationRecord& prev, const DesignBundle& design);

/// e_{j+1} = (1 + Tu L) e_j applied as one acausal filter.
Signal predict_next_error(const Signal& e_j, const DesignBundle& design);

/// Iteration 0 runs with uf = 0; later trials use the adaptation law.
CampaignResult run_campaign(const TrialConfig& config, const StopRule& stop);

struct SweepRow {
  std::string label;
  double margin_with_d = 0.0;  // sup_w |1 + Tu_true L |D|^2|
  double margin_no_d = 0.0;    // sup_w |1 + Tu_true L|
  double final_norm_with_d = 0.0;
  double final_norm_no_d = 0.0;
  bool diverged_with_d = false;
  bool diverged_no_d = false;
};

/// Reruns the campaign per multiplicative plant perturbation, with and
/// without the robustness filter, and reports contraction margins.
std::vector<SweepRow> robustness_sweep(const TrialConfig& base, const StopRule& stop,
                                       const std::vector<TransferFunction>& perturbations);

}  // namespace gfc

#endif  // GFC_ILC_HPP
