#include "refprior/sampling.hpp"

#include <cmath>

#include "refprior/errors.hpp"

namespace refprior {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 output function; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform in [2^-53, 1 - 2^-53]; the upper bound holds by construction, the
// lower clamp removes the single zero word.
inline double to_unit(std::uint64_t z) {
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return u < 0x1.0p-53 ? 0x1.0p-53 : u;
}

// Counter-based draw: entry depends only on the key hash and the flat index.
inline double stream_value(std::uint64_t key_hash, std::uint64_t index) {
  return to_unit(mix64(key_hash + (index + 1) * kGamma));
}

}  // namespace

StreamKey StreamKey::child(std::uint64_t index) const {
  StreamKey out = *this;
  out.path.push_back(index);
  return out;
}

std::uint64_t StreamKey::hash() const {
  std::uint64_t h = mix64(master_seed + kGamma);
  for (std::uint64_t p : path) h = mix64(h + kGamma + mix64(p + kGamma));
  return h;
}

UniformMatrix::UniformMatrix(StreamKey key, std::size_t rows, std::size_t cols)
    : key_(std::move(key)), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0)
    throw DomainError("UniformMatrix: rows and cols must be positive");
  data_.resize(rows * cols);
  const std::uint64_t h = key_.hash();
  for (std::size_t idx = 0; idx < data_.size(); ++idx)
    data_[idx] = stream_value(h, idx);
}

UniformMatrix uniform_matrix(const StreamKey& key, std::size_t m,
                             std::size_t k) {
  return UniformMatrix(key, m, k);
}

std::vector<double> uniform_row(const StreamKey& key, std::size_t j,
                                std::size_t k) {
  if (k == 0) throw DomainError("uniform_row: k must be positive");
  std::vector<double> row(k);
  const std::uint64_t h = key.hash();
  const std::uint64_t base = static_cast<std::uint64_t>(j) * k;
  for (std::size_t i = 0; i < k; ++i) row[i] = stream_value(h, base + i);
  return row;
}

std::vector<Sample> sample_matrix(const Model& model, const UniformMatrix& u,
                                  double theta) {
  std::vector<Sample> out;
  out.reserve(u.rows());
  for (std::size_t j = 0; j < u.rows(); ++j) {
    std::vector<double> values(u.cols());
    for (std::size_t i = 0; i < u.cols(); ++i)
      values[i] = model.inverse_cdf(u(j, i), theta);
    out.emplace_back(std::move(values));
  }
  return out;
}

Sample sample_row(const Model& model, const StreamKey& key, std::size_t j,
                  std::size_t k, double theta) {
  std::vector<double> values = uniform_row(key, j, k);
  for (double& v : values) v = model.inverse_cdf(v, theta);
  return Sample(std::move(values));
}

}  // namespace refprior
