#ifndef GFC_SYNTHESIS_HPP
#define GFC_SYNTHESIS_HPP

#include <string>
#include <vector>

#include "gfc/transfer_function.hpp"

namespace gfc {

enum class DiscretizeMethod { kZoh, kTustin };

/// Continuous-to-discrete conversion. ZOH is exact for distinct poles via
/// partial fractions; Tustin uses s = (2/Ts)(z-1)/(z+1).
TransferFunction discretize(const TransferFunction& g_continuous, double ts,
                            DiscretizeMethod method);

/// Q = Gc*(1 + P*C0)/P - C0. With strict=true an unstable or improper Q
/// throws, naming the offending poles or degrees.
TransferFunction design_q(const TransferFunction& plant, const TransferFunction& c0,
                          const TransferFunction& gc, bool strict = true);

/// C = (C0 + Q)/(1 - P*Q).
TransferFunction design_controller(const TransferFunction& plant, const TransferFunction& c0,
                                   const TransferFunction& q);

/// L = (1 + P*C0)/(P*(C0 + Q)); may be improper (applied acausally offline).
TransferFunction design_learning_filter(const TransferFunction& plant,
                                        const TransferFunction& c0, const TransferFunction& q);

struct LoopTfs {
  TransferFunction tu;  // learning signal -> tracking error
  TransferFunction tr;  // reference -> tracking error
};

/// Tu = -(1+PC)^{-1} PC, Tr = (1+PC)^{-1}.
LoopTfs compute_loop_tfs(const TransferFunction& plant, const TransferFunction& controller);

/// First-order discrete low-pass (1-alpha)/(z-alpha), alpha = e^{-2 pi f Ts};
/// unity DC gain by construction.
TransferFunction design_lowpass_d(double ts, double cutoff_hz);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct DesignBundle {
  TransferFunction plant;       // P
  TransferFunction c0;          // baseline controller
  TransferFunction gc;          // target closed loop
  TransferFunction q;           // Youla parameter
  TransferFunction controller;  // C
  TransferFunction learning;    // L
  TransferFunction robustness;  // D
  TransferFunction tu;
  TransferFunction tr;
  std::vector<CheckResult> validation;

  bool all_checks_pass() const;
};

/// Full synthesis: Q, C, L, loop transfer functions and validation report.
/// Tu comes from the parameterized identity -P(C0+Q)/(1+PC0) so that the
/// learning product Tu*L reduces exactly.
DesignBundle synthesize_bundle(const TransferFunction& plant, const TransferFunction& c0,
                               const TransferFunction& gc, const TransferFunction& d);

std::vector<CheckResult> validate_design(const DesignBundle& bundle);

std::string validation_to_text(const std::vector<CheckResult>& checks);
std::string validation_to_csv(const std::vector<CheckResult>& checks);

/// Scales the numerator so the DC gain is exactly 1.
TransferFunction normalize_dc(const TransferFunction& g);

void write_bundle(const DesignBundle& bundle, const std::string& path);
DesignBundle read_bundle(const std::string& path);

}  // namespace gfc

#endif  // GFC_SYNTHESIS_HPP
