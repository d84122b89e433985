#include "mpp/util.hpp"

#include <cstdio>

namespace mpp {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  return fnv1a64_bytes(data.data(), data.size(), seed);
}

std::uint64_t fnv1a64_bytes(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf);
}

bool next_assignment(std::vector<int>& digits, int radix) {
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (++*it < radix) return true;
    *it = 0;
  }
  return false;
}

int argmax_first(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<int> argmax_set(std::span<const double> values, double tolerance) {
  double best = values[argmax_first(values)];
  std::vector<int> result;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (values[i] >= best - tolerance) result.push_back(i);
  }
  return result;
}

std::string format9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return std::string(buf);
}

}  // namespace mpp
