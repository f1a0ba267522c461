#include "panotrack/random.hpp"

#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/geometry.hpp"

namespace panotrack {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxCounter KeyedRng::block(std::uint64_t index, std::uint64_t stream) const {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  return philox4x32_10(ctr, key);
}

double KeyedRng::uniform(std::uint64_t index, std::uint64_t stream) const {
  const auto b = block(index, stream);
  return to_unit(b[0], b[1]);
}

double KeyedRng::uniform(double lo, double hi, std::uint64_t index, std::uint64_t stream) const {
  return lo + (hi - lo) * uniform(index, stream);
}

std::int64_t KeyedRng::uniform_int(std::int64_t lo, std::int64_t hi, std::uint64_t index,
                                   std::uint64_t stream) const {
  if (lo > hi) throw InvalidArgument("uniform_int: empty range");
  const auto b = block(index, stream);
  const std::uint64_t word = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  const auto span = static_cast<unsigned __int128>(static_cast<std::uint64_t>(hi - lo)) + 1;
  const auto offset = static_cast<std::uint64_t>((static_cast<unsigned __int128>(word) * span) >> 64);
  return lo + static_cast<std::int64_t>(offset);
}

double KeyedRng::normal(std::uint64_t index, std::uint64_t stream) const {
  const auto b = block(index, stream);
  const double u1 = 1.0 - to_unit(b[0], b[1]);  // (0, 1]
  const double u2 = to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t KeyedRng::derive(std::uint64_t index, std::uint64_t stream) const {
  const auto b = block(index, stream);
  return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

}  // namespace panotrack
