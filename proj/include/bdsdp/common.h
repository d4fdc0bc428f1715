#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bdsdp {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Raised when a computation hits NaN/Inf or a numerically degenerate state.
class NumericalError : public Error {
public:
  using Error::Error;
};

void check_shape(const char *where, Index rows, Index cols, Index want_rows,
                 Index want_cols);

/// Block layout shared by every module: m blocks of side d, n = m*d.
struct BlockSpec {
  Index m = 1;
  Index d = 1;

  BlockSpec() = default;
  BlockSpec(Index m_, Index d_);

  Index n() const { return m * d; }
  bool operator==(const BlockSpec &) const = default;
};

} // namespace bdsdp

namespace bdsdp {

/// One step of the splitmix64 generator; used to derive independent
/// per-task seeds from a master seed: seed_k = splitmix64(master + k).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(master + k);
}

} // namespace bdsdp
