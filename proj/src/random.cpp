#include "gbcal/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gbcal {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b, std::uint64_t* lo) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  *lo = static_cast<std::uint64_t>(prod);
  return static_cast<std::uint64_t>(prod >> 64);
}

inline std::array<std::uint64_t, 4> philox_round(std::array<std::uint64_t, 4> c,
                                                 std::array<std::uint64_t, 2> k) {
  std::uint64_t lo0, lo1;
  const std::uint64_t hi0 = mulhi(kPhiloxM0, c[0], &lo0);
  const std::uint64_t hi1 = mulhi(kPhiloxM1, c[2], &lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// SplitMix64 finalizer; used only for key derivation, never as the stream.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = philox_round(ctr, key);
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t base_seed) {
  chain_ = mix64(base_seed);
  key_ = {chain_, mix64(chain_ ^ 0x5CA1AB1E0DDBA11ULL)};
}

RandomStream::RandomStream(std::uint64_t base_seed,
                           std::initializer_list<std::uint64_t> path)
    : RandomStream(base_seed) {
  for (std::uint64_t label : path) absorb(label);
}

RandomStream::RandomStream(std::uint64_t base_seed,
                           const std::vector<std::uint64_t>& path)
    : RandomStream(base_seed) {
  for (std::uint64_t label : path) absorb(label);
}

void RandomStream::absorb(std::uint64_t label) {
  chain_ = mix64(chain_ ^ mix64(label));
  key_ = {chain_, mix64(chain_ ^ 0x5CA1AB1E0DDBA11ULL)};
  ctr_ = {0, 0, 0, 0};
  buf_pos_ = 4;
}

RandomStream RandomStream::child(std::uint64_t label) const {
  RandomStream s;
  s.chain_ = chain_;
  s.key_ = key_;
  s.absorb(label);
  return s;
}

void RandomStream::refill() {
  buf_ = Philox4x64::block(ctr_, key_);
  for (int i = 0; i < 4; ++i) {
    if (++ctr_[i] != 0) break;
  }
  buf_pos_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (buf_pos_ == 4) refill();
  return buf_[buf_pos_++];
}

double RandomStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

double RandomStream::student_t(double dof) {
  const double z = normal();
  return z / std::sqrt(chi_squared(dof) / dof);
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

}  // namespace gbcal
