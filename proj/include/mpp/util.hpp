#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpp {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64_bytes(const void* data, std::size_t size,
                            std::uint64_t seed = 0xcbf29ce484222325ull);
std::string to_hex(std::uint64_t value);

/// Advances a fixed-radix digit vector in place (last digit fastest).
/// Returns false once all combinations have been produced and the vector
/// has wrapped back to all zeros. An empty vector yields exactly one
/// combination.
bool next_assignment(std::vector<int>& digits, int radix);

/// Index of the largest value; ties go to the earliest index.
int argmax_first(std::span<const double> values);

/// All indices whose value is within `tolerance` of the maximum.
std::vector<int> argmax_set(std::span<const double> values, double tolerance);

/// Fixed-point formatting with 9 decimal places.
std::string format9(double value);

}  // namespace mpp
