#ifndef REFPRIOR_SAMPLING_HPP
#define REFPRIOR_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "refprior/model.hpp"

namespace refprior {

// Address of one deterministic substream: a master seed plus a path of
// indices, e.g. {replication, theta_index, stream}. Generation is
// counter-based (splitmix-style hash of the key and a flat counter), so a
// value depends only on (key, position): results are independent of
// evaluation order and worker count, and distinct paths give independent
// streams.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> path;

  StreamKey child(std::uint64_t index) const;
  std::uint64_t hash() const;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

// Row-major m x k matrix of uniforms, clamped to [2^-53, 1 - 2^-53] so that
// inverse CDFs stay finite at both ends.
class UniformMatrix {
 public:
  UniformMatrix(StreamKey key, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t j, std::size_t i) const {
    return data_[j * cols_ + i];
  }
  const StreamKey& key() const { return key_; }
  std::span<const double> data() const { return data_; }

 private:
  StreamKey key_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

UniformMatrix uniform_matrix(const StreamKey& key, std::size_t m,
                             std::size_t k);

// Row j of the m x k matrix addressed by key, without materializing the
// rest: uniform_row(key, j, k)[i] == uniform_matrix(key, m, k)(j, i) bitwise.
std::vector<double> uniform_row(const StreamKey& key, std::size_t j,
                                std::size_t k);

// Applies the model inverse CDF entrywise; one Sample per matrix row.
std::vector<Sample> sample_matrix(const Model& model, const UniformMatrix& u,
                                  double theta);

// Streaming equivalent of one sample_matrix row.
Sample sample_row(const Model& model, const StreamKey& key, std::size_t j,
                  std::size_t k, double theta);

}  // namespace refprior

#endif
