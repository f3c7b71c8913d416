#include "fdmimo/precoding.hpp"

#include <cmath>
#include <string>

namespace fdmimo {

Precoder zero_forcing(const CMatrix& estimate) {
  if (estimate.rows() != estimate.cols())
    throw std::invalid_argument("zero forcing expects a square estimate");
  // Square and full rank: the right pseudo-inverse is the inverse.
  const Eigen::PartialPivLU<CMatrix> lu(estimate);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kMaxConditionNumber))
    throw SingularEstimateError("channel estimate is singular (rcond " +
                                std::to_string(rcond) + ")");
  Precoder p{lu.inverse()};
  p.beams.colwise().normalize();
  return p;
}

Precoder zero_forcing(const ChannelEstimate& estimate) {
  return zero_forcing(estimate.estimate);
}

LinkPowers link_powers(const CMatrix& truth, const Precoder& precoder,
                       double power) {
  const auto m = truth.rows();
  const double stream_power = power / static_cast<double>(precoder.beams.cols());
  const Eigen::MatrixXd gains =
      (truth * precoder.beams).cwiseAbs2() * stream_power;
  LinkPowers out;
  out.signal = gains.diagonal();
  out.ibi = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < gains.cols(); ++j)
      if (j != k) out.ibi(k) += gains(k, j);
  return out;
}

LinkPowers link_powers(const ChannelBlock& truth, const Precoder& precoder,
                       const SystemConfig& cfg) {
  return link_powers(truth.downlink, precoder, cfg.power);
}

}  // namespace fdmimo
