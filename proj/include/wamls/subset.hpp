#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "wamls/errors.hpp"

namespace wamls {

using Weight = std::int64_t;
using Weights = std::vector<Weight>;

// Universes are bit-vector encoded; element u is bit u.
inline constexpr int kMaxUniverse = 64;

// A subset of {0..n-1}. Ordering is the numeric order of the bitmask, which
// is what "lexicographically least" means throughout the library.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  static constexpr Subset full(int n) {
    return Subset(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr Subset singleton(int u) { return Subset(std::uint64_t{1} << u); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int u) const { return (bits_ >> u) & 1U; }
  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr Subset& insert(int u) {
    bits_ |= std::uint64_t{1} << u;
    return *this;
  }
  constexpr Subset& erase(int u) {
    bits_ &= ~(std::uint64_t{1} << u);
    return *this;
  }

  friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
  friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
  // Set difference a \ b.
  friend constexpr Subset operator-(Subset a, Subset b) { return Subset(a.bits_ & ~b.bits_); }
  constexpr Subset& operator|=(Subset o) {
    bits_ |= o.bits_;
    return *this;
  }

  friend constexpr bool operator==(Subset, Subset) = default;
  friend constexpr auto operator<=>(Subset a, Subset b) { return a.bits_ <=> b.bits_; }

  // Calls f(u) for each member in increasing order.
  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int u) { out.push_back(u); });
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

inline Weight weight_of(Subset s, std::span<const Weight> w) {
  Weight total = 0;
  s.for_each([&](int u) { total += w[static_cast<std::size_t>(u)]; });
  return total;
}

// Canonical ordering of candidate solutions: minimum weight, then minimum
// cardinality, then the smaller bitmask.
inline bool better_solution(Subset a, Weight wa, Subset b, Weight wb) {
  if (wa != wb) return wa < wb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string to_hex(Subset s);
Subset subset_from_hex(const std::string& hex);

// Enumeration caps. WAMLS_MAX_N overrides both when set.
inline constexpr int kDefaultFamilyCap = 20;
inline constexpr int kDefaultExactCap = 22;

inline int cap_from_env(int fallback) {
  if (const char* v = std::getenv("WAMLS_MAX_N"); v != nullptr && *v != '\0') {
    char* end = nullptr;
    const long parsed = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && parsed >= 0 && parsed <= kMaxUniverse) return static_cast<int>(parsed);
  }
  return fallback;
}
inline int family_cap() { return cap_from_env(kDefaultFamilyCap); }
inline int exact_cap() { return cap_from_env(kDefaultExactCap); }

inline void require_within_cap(int n, int cap, const char* what) {
  if (n > cap || n > kMaxUniverse) {
    throw ResourceError(std::string(what) + ": universe size " + std::to_string(n) +
                        " exceeds enumeration cap " + std::to_string(cap));
  }
}

// Calls f(mask) for every k-subset of {0..n-1} in increasing bitmask order.
template <typename F>
void for_each_k_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    f(Subset{});
    return;
  }
  const std::uint64_t limit = n >= 64 ? 0 : (std::uint64_t{1} << n);
  std::uint64_t x = (k >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  while (true) {
    f(Subset(x));
    // Gosper's hack.
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    if (r == 0) break;
    x = (((r ^ x) >> 2) / c) | r;
    if (limit != 0 && x >= limit) break;
  }
}

}  // namespace wamls
