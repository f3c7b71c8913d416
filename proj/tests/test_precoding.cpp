#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fdmimo/channel.hpp"
#include "fdmimo/precoding.hpp"
#include "fdmimo/stats.hpp"

using namespace fdmimo;

namespace {

double max_leak(const CMatrix& estimate, const Precoder& p) {
  const CMatrix prod = estimate * p.beams;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < prod.rows(); ++i)
    for (Eigen::Index j = 0; j < prod.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(prod(i, j)));
  return worst;
}

double max_norm_error(const Precoder& p) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p.beams.cols(); ++j)
    worst = std::max(worst, std::abs(p.beams.col(j).norm() - 1.0));
  return worst;
}

}  // namespace

TEST_CASE("identity estimate gives identity beams") {
  const Precoder p = zero_forcing(CMatrix::Identity(4, 4));
  CHECK(p.beams.isApprox(CMatrix::Identity(4, 4)));
}

TEST_CASE("unitary estimate gives its conjugate transpose") {
  RandomStream rng(3);
  SystemConfig cfg;
  cfg.users = 4;
  const ChannelBlock b = sample_block(cfg, rng);
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(b.downlink).householderQ();
  const Precoder p = zero_forcing(q);
  CHECK((p.beams - q.adjoint()).norm() < 1e-12);
  CHECK(max_norm_error(p) < 1e-12);
}

TEST_CASE("random estimates satisfy ZF post-conditions") {
  for (int m : {2, 4, 8}) {
    SystemConfig cfg;
    cfg.users = m;
    for (int i = 0; i < 200; ++i) {
      RandomStream rng(100 + m, i);
      const ChannelBlock b = sample_block(cfg, rng);
      const ChannelEstimate est = mmse_update(b, 1 + i % 7, cfg, rng);
      const Precoder p = zero_forcing(est);
      CHECK(max_leak(est.estimate, p) < 1e-8);
      CHECK(max_norm_error(p) < 1e-10);
    }
  }
}

TEST_CASE("singular estimates are rejected") {
  CMatrix rank_deficient = CMatrix::Ones(3, 3);
  CHECK_THROWS_AS(zero_forcing(rank_deficient), SingularEstimateError);
  CHECK_THROWS_AS(zero_forcing(CMatrix::Zero(2, 2)), SingularEstimateError);
  CHECK_THROWS_AS(zero_forcing(CMatrix::Identity(2, 3)), std::invalid_argument);
}

TEST_CASE("decoupled channels split power equally") {
  const CMatrix h = CMatrix::Identity(2, 2);
  const Precoder p{CMatrix::Identity(2, 2)};
  const LinkPowers lp = link_powers(h, p, 4.0);
  CHECK(lp.signal(0) == doctest::Approx(2.0));
  CHECK(lp.signal(1) == doctest::Approx(2.0));
  CHECK(lp.ibi(0) == 0.0);
  CHECK(lp.ibi(1) == 0.0);
  // Unit effective gains: total transmit power is P.
  CHECK(lp.signal.sum() == doctest::Approx(4.0));
}

TEST_CASE("perfect CSI has no inter-beam interference") {
  SystemConfig cfg;
  cfg.users = 8;
  cfg.power = 100.0;
  for (int i = 0; i < 50; ++i) {
    RandomStream rng(8, i);
    const ChannelBlock b = sample_block(cfg, rng);
    const LinkPowers lp = link_powers(b, zero_forcing(b.downlink), cfg);
    CHECK(lp.ibi.maxCoeff() < 1e-8 * cfg.power);
    CHECK(lp.signal.minCoeff() > 0.0);
  }
}

TEST_CASE("IBI is permutation equivariant") {
  SystemConfig cfg;
  cfg.users = 5;
  RandomStream rng(21);
  const ChannelBlock b = sample_block(cfg, rng);
  const ChannelEstimate est = mmse_update(b, 2, cfg, rng);
  const LinkPowers base = link_powers(b, zero_forcing(est), cfg);

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 3, 0, 4, 1, 2;
  const CMatrix h = perm * b.downlink;
  const CMatrix hhat = perm * est.estimate;
  const LinkPowers permuted = link_powers(h, zero_forcing(hhat), cfg.power);
  for (int k = 0; k < 5; ++k) {
    CHECK(permuted.ibi(perm.indices()(k)) == doctest::Approx(base.ibi(k)).epsilon(1e-9));
    CHECK(permuted.signal(perm.indices()(k)) == doctest::Approx(base.signal(k)).epsilon(1e-9));
  }
}

TEST_CASE("mean IBI stays within the (P/M)(M-1) err_var scaling") {
  SystemConfig cfg;
  cfg.users = 8;
  cfg.power = 10.0;
  cfg.feedback_fraction = 0.1;
  const double err_var = mmse_error_variance(5, cfg.pilot_power());
  const double scale = cfg.stream_power() * (cfg.users - 1) * err_var;
  std::vector<double> ibi;
  for (int i = 0; i < 10000; ++i) {
    RandomStream rng(55, i);
    const ChannelBlock b = sample_block(cfg, rng);
    const LinkPowers lp =
        link_powers(b, zero_forcing(mmse_update(b, 5, cfg, rng)), cfg);
    ibi.push_back(lp.ibi(0));
  }
  const Estimate e = mean_and_error(ibi);
  CHECK(e.mean <= scale + 3.0 * e.std_error);
}

TEST_CASE("mean IBI decreases with more pilots") {
  SystemConfig cfg;
  cfg.users = 4;
  cfg.power = 10.0;
  cfg.feedback_fraction = 0.1;
  std::vector<double> means;
  for (int beta : {1, 2, 4, 8, 16}) {
    double sum = 0.0;
    constexpr int kTrials = 3000;
    for (int i = 0; i < kTrials; ++i) {
      RandomStream rng(66, i);  // shared seeds across beta
      const ChannelBlock b = sample_block(cfg, rng);
      const LinkPowers lp =
          link_powers(b, zero_forcing(mmse_update(b, beta, cfg, rng)), cfg);
      sum += lp.ibi.mean();
    }
    means.push_back(sum / kTrials);
  }
  for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] < means[i - 1]);
}
