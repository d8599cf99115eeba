#ifndef GFC_REFERENCE_HPP
#define GFC_REFERENCE_HPP

#include "gfc/transfer_function.hpp"

namespace gfc::reference {

// Nominal thumb-grasp design values used for cross-checking synthesized
// results in reports and tests.

inline constexpr double kSampleTime = 0.0568;     // seconds
inline constexpr double kTargetForce = 10.0;      // Newtons
inline constexpr double kSensorSpan = 19.62;      // Newtons
inline constexpr double kQuantizationStep = 0.0192;  // 10-bit ADC over the span

/// Identified second-order grasp plant, servo command to fingertip force.
inline TransferFunction plant() {
  return TransferFunction(Polynomial({0.7902, 0.6208}),
                          Polynomial({1.0, -0.9748, 0.3442}), kSampleTime);
}

/// Target closed loop, entered directly (DC gain 1.025 as printed).
inline TransferFunction target_closed_loop() {
  return TransferFunction(Polynomial({0.013, 0.0116}),
                          Polynomial({1.0, -1.687, 0.711, 0.0}), kSampleTime);
}

/// Continuous second-order prototype behind the target closed loop.
inline TransferFunction target_prototype_continuous() {
  return TransferFunction(Polynomial({9.0}), Polynomial({1.0, 3.0, 9.0}), kContinuousTime);
}

/// Published Youla parameter, as printed. The denominator's z^2 term is a
/// suspected sign typo; exact recomputation is authoritative.
inline TransferFunction published_q() {
  return TransferFunction(Polynomial({0.013, -0.0012, -0.0069, 0.004, 0.0}),
                          Polynomial({0.784, -0.737, 0.430, 0.416, 0.0}), kSampleTime);
}

/// Published reduced controller, as printed.
inline TransferFunction published_controller() {
  return TransferFunction(Polynomial({0.017, -0.0159, 0.0053}),
                          Polynomial({1.0, -1.676, 0.676}), kSampleTime);
}

/// Published learning filter, as printed (relative degree differs by one
/// from exact recomputation; suspected typo).
inline TransferFunction published_learning() {
  return TransferFunction(
      Polynomial({14.98, -39.84, 40.18, -18.65, 3.413, 0.0467}),
      Polynomial({1.0, -0.1865, -0.3842, 0.2336, 0.0}), kSampleTime);
}

}  // namespace gfc::reference

#endif  // GFC_REFERENCE_HPP
