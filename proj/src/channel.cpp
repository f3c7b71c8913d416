#include "fdmimo/channel.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fdmimo {

namespace {

CMatrix gaussian_matrix(int rows, int cols, double variance,
                        RandomStream& rng) {
  CMatrix m(rows, cols);
  // Row-major fill so the draw order matches the dump layout.
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian(variance);
  return m;
}

constexpr std::array<char, 4> kMagic{'F', 'D', 'M', 'B'};

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated channel dump");
  return value;
}

void write_matrix(std::ostream& out, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      write_raw(out, m(i, j).real());
      write_raw(out, m(i, j).imag());
    }
}

CMatrix read_matrix(std::istream& in, int size) {
  CMatrix m(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      const double re = read_raw<double>(in);
      const double im = read_raw<double>(in);
      m(i, j) = {re, im};
    }
  return m;
}

}  // namespace

ChannelBlock sample_block(const SystemConfig& cfg, RandomStream& rng) {
  ChannelBlock block;
  block.downlink = gaussian_matrix(cfg.users, cfg.users, 1.0, rng);
  block.user_to_user = gaussian_matrix(cfg.users, cfg.users, 1.0, rng);
  for (int i = 0; i < cfg.users; ++i) block.user_to_user(i, i) = 0.0;
  return block;
}

double mmse_error_variance(int pilot_cycles, double pilot_power) {
  return 1.0 / (1.0 + pilot_cycles * pilot_power);
}

ChannelEstimate mmse_from_statistic(const CMatrix& observation_sum,
                                    int pilot_cycles, double pilot_power) {
  ChannelEstimate est;
  est.pilot_cycles = pilot_cycles;
  est.error_variance = mmse_error_variance(pilot_cycles, pilot_power);
  // E[h | s] = sqrt(fP) s / (1 + beta fP) for s = beta sqrt(fP) h + noise
  const double gain = std::sqrt(pilot_power) * est.error_variance;
  est.estimate = gain * observation_sum;
  return est;
}

ChannelEstimate mmse_update(const ChannelBlock& truth, int pilot_cycles,
                            const SystemConfig& cfg, RandomStream& rng) {
  if (pilot_cycles < 0) throw std::invalid_argument("pilot cycles must be >= 0");
  const auto m = truth.downlink.rows();
  if (pilot_cycles == 0)
    return {CMatrix::Zero(m, truth.downlink.cols()), 0, 1.0};
  const double fp = cfg.pilot_power();
  CMatrix sum = (pilot_cycles * std::sqrt(fp)) * truth.downlink +
                gaussian_matrix(static_cast<int>(m),
                                static_cast<int>(truth.downlink.cols()),
                                static_cast<double>(pilot_cycles), rng);
  return mmse_from_statistic(sum, pilot_cycles, fp);
}

PilotAccumulator::PilotAccumulator(const CMatrix& truth, double pilot_power)
    : truth_(&truth),
      pilot_power_(pilot_power),
      pilot_amplitude_(std::sqrt(pilot_power)),
      observation_sum_(CMatrix::Zero(truth.rows(), truth.cols())) {}

void PilotAccumulator::add_cycle(RandomStream& rng) {
  // One TDMA cycle: every user sends one pilot, observed on all antennas.
  for (Eigen::Index i = 0; i < observation_sum_.rows(); ++i)
    for (Eigen::Index j = 0; j < observation_sum_.cols(); ++j)
      observation_sum_(i, j) +=
          pilot_amplitude_ * (*truth_)(i, j) + rng.complex_gaussian();
  ++cycles_;
}

ChannelEstimate PilotAccumulator::estimate() const {
  if (cycles_ == 0)
    return {CMatrix::Zero(observation_sum_.rows(), observation_sum_.cols()), 0,
            1.0};
  return mmse_from_statistic(observation_sum_, cycles_, pilot_power_);
}

void write_blocks(std::ostream& out, std::span<const ChannelBlock> blocks) {
  const std::uint32_t m =
      blocks.empty() ? 0u : static_cast<std::uint32_t>(blocks[0].downlink.rows());
  out.write(kMagic.data(), kMagic.size());
  write_raw(out, m);
  write_raw(out, static_cast<std::uint64_t>(blocks.size()));
  for (const auto& b : blocks) {
    if (b.downlink.rows() != m || b.user_to_user.rows() != m)
      throw std::invalid_argument("channel dump requires equal block sizes");
    write_matrix(out, b.downlink);
    write_matrix(out, b.user_to_user);
  }
}

std::vector<ChannelBlock> read_blocks(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("not a channel dump");
  const auto m = static_cast<int>(read_raw<std::uint32_t>(in));
  const auto count = read_raw<std::uint64_t>(in);
  std::vector<ChannelBlock> blocks;
  blocks.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ChannelBlock b;
    b.downlink = read_matrix(in, m);
    b.user_to_user = read_matrix(in, m);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace fdmimo
