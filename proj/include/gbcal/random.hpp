#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace gbcal {

// Philox 4x64 with 10 rounds, the counter-based generator of Salmon et al.
// (matches the variant shipped in numpy.random, which is the KAT source for
// the unit tests).  A stream is a pure function of (key, counter), so draws
// are reproducible regardless of execution order or thread count.
struct Philox4x64 {
  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> key);
};

// Splittable stream keyed by (base_seed, path).  The path is a list of
// integer labels; extending the path with child() yields a stream that is
// independent of the parent and of any sibling, and does not depend on how
// much the parent has been consumed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t base_seed);
  RandomStream(std::uint64_t base_seed, std::initializer_list<std::uint64_t> path);
  RandomStream(std::uint64_t base_seed, const std::vector<std::uint64_t>& path);

  RandomStream child(std::uint64_t label) const;

  std::uint64_t next_u64();
  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform();
  double normal();
  // Marsaglia-Tsang; shape > 0, unit scale.
  double gamma(double shape);
  double chi_squared(double dof);
  double student_t(double dof);
  // Uniform on {0, 1, ..., n-1}, unbiased.
  std::uint64_t uniform_int(std::uint64_t n);

 private:
  RandomStream() = default;

  std::uint64_t chain_ = 0;              // absorbed (base_seed, path) digest
  std::array<std::uint64_t, 2> key_{};   // Philox key derived from chain_
  std::array<std::uint64_t, 4> ctr_{};   // block counter
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_ = 4;                      // 4 == buffer exhausted

  void absorb(std::uint64_t label);
  void refill();
};

}  // namespace gbcal
