#ifndef GFC_SYSID_HPP
#define GFC_SYSID_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "gfc/signal.hpp"
#include "gfc/transfer_function.hpp"

namespace gfc {

/// Logged input/output record of one grasp: servo command u (device units)
/// and fingertip force y (Newtons).
struct IoDataset {
  Signal u;
  Signal y;
  std::string label;

  IoDataset(Signal u_in, Signal y_in, std::string label_in = "");
  double sample_time() const { return u.sample_time(); }
  std::size_t size() const { return u.size(); }
};

/// ARX structure: na denominator coefficients, nb numerator coefficients,
/// input delay in samples.
struct ArxSpec {
  int na = 2;
  int nb = 2;
  int delay = 1;

  void validate() const;
  int regressor_length() const { return na + nb; }
};

/// Recursive-least-squares state: theta = [a_1..a_na, b_1..b_nb].
struct RlsState {
  Eigen::VectorXd theta;
  Eigen::MatrixXd covariance;
  double forgetting = 1.0;
  long samples_seen = 0;

  static RlsState initial(int dim, double p0 = 1e6, double forgetting = 1.0);
};

/// One RLS update with forgetting; covariance symmetrized after the update.
RlsState rls_step(const RlsState& state, const Eigen::VectorXd& regressor, double y_k);

struct FitReport {
  double residual_rms = 0.0;
  double fit_percent = 0.0;  // 100*(1 - |y - yhat| / |y - mean(y)|), free-run yhat
  std::string to_text() const;
  std::string to_csv_row() const;
};

struct IdentifyResult {
  TransferFunction model;
  RlsState rls;
  FitReport fit;
};

/// Fits an ARX model by RLS over the dataset and returns the transfer
/// function with monic denominator. Throws DataError on insufficient data
/// and SingularError when the input is persistently non-exciting.
IdentifyResult identify(const IoDataset& data, const ArxSpec& spec,
                        double forgetting = 1.0);

struct IngestOptions {
  std::optional<double> trim_contact_threshold;  // drop samples before y exceeds this
  std::string label;
};

/// Reads a `k,t,u,y` CSV. Sample time is the median spacing of t; a jitter
/// warning is recorded when spacing deviates by more than 1%.
struct IngestResult {
  IoDataset dataset;
  std::vector<std::string> warnings;
};

IngestResult ingest_csv(const std::string& path, const IngestOptions& options = {});

}  // namespace gfc

#endif  // GFC_SYSID_HPP
