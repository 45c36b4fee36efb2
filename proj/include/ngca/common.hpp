#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ngca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Rows are samples, columns are coordinates.
using DataMatrix = Matrix;

enum class Errc {
  empty_input,
  dimension,
  singular_covariance,
  parse,
  numeric,
  configuration,
  rank_deficiency,
  metric,
  insufficient_functions,
  frame_mismatch,
  fit,
  io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(Seed, Seed) = default;
};

using Rng = std::mt19937_64;

inline Rng make_rng(Seed seed) { return Rng(seed.value); }

// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);
Seed derive_seed(Seed parent, std::uint64_t salt);

enum class Frame { whitened, original };

std::string_view to_string(Frame frame);
Frame frame_from_string(std::string_view text);

/// Orthonormal basis (d_x x d_s) of a linear subspace.
struct Subspace {
  Matrix basis;
  Frame frame = Frame::original;
  // Set when the eigen-split that produced the basis was not resolvable.
  bool degenerate_gap = false;

  Index ambient_dim() const { return basis.rows(); }
  Index dim() const { return basis.cols(); }
};

// Throws Errc::numeric when any entry is NaN/inf.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

}  // namespace ngca
