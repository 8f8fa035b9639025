#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

#include "fdrelay/types.hpp"

namespace fdrelay {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-streams consumed inside one Monte-Carlo trial.
enum class Stream : std::uint64_t { channel = 0, draw = 1 };

/// Seed of stream `stream` of item `index` under `master`. Distinct triples give
/// (with overwhelming probability) unrelated generator states.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^
                    (stream + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    Stream stream) noexcept {
  return derive_seed(master, index, static_cast<std::uint64_t>(stream));
}

/// Circularly-symmetric complex Gaussian generator. The ziggurat sampler from
/// Boost gives the same sequence on every platform for a given seed.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double standard() { return normal_(engine_); }

  /// One CN(0, variance) draw: real and imaginary parts each N(0, variance/2).
  Complex circular(double variance) {
    const double scale = std::sqrt(variance / 2.0);
    const double re = standard();
    const double im = standard();
    return {scale * re, scale * im};
  }

  void fill(std::span<Complex> out, double variance) {
    const double scale = std::sqrt(variance / 2.0);
    for (auto& z : out) {
      const double re = standard();
      const double im = standard();
      z = Complex(scale * re, scale * im);
    }
  }

  /// Column-major fill; column k gets variance `column_variance[k]`.
  void fill_columns(CMatrix& out, const RVector& column_variance) {
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      fill({out.col(k).data(), static_cast<std::size_t>(out.rows())}, column_variance[k]);
    }
  }

  void fill(CMatrix& out, double variance) {
    fill({out.data(), static_cast<std::size_t>(out.size())}, variance);
  }

  void fill(CVector& out, double variance) {
    fill({out.data(), static_cast<std::size_t>(out.size())}, variance);
  }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace fdrelay
