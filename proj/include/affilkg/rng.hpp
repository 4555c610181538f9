#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace affilkg {

// Substream identifiers. A perturbation draws each phase from its own stream
// so that, e.g., changing e_add never changes which true edges are kept.
enum class Stream : std::uint64_t {
  Removal = 1,
  Addition = 2,
  Endpoint = 3,
  Redirect = 4,
  Reconcile = 5,
  Sample = 6,
  Generate = 7,
};

// Counter-based generator: the i-th output of stream s under seed k is
//   mix64(key(k, s) + (i + 1) * 0x9e3779b97f4a7c15)
// with mix64 the SplitMix64 finalizer and
//   key(k, s) = mix64(k ^ mix64(s * 0xd1b54a32d192ed03 + 1)).
// Outputs depend only on (seed, stream, counter), so streams are
// reproducible on every platform regardless of threading.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;
  CounterRng(std::uint64_t seed, Stream stream) noexcept
      : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  // Uniform integer in [0, bound). bound must be > 0. Lemire's
  // multiply-shift with rejection, so no modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double unit() noexcept;

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  // Child generator with a key hashed from this key and `child`.
  CounterRng split(std::uint64_t child) const noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// k distinct indices drawn uniformly from [0, n), in draw order
// (partial Fisher-Yates). k > n is clamped to n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    CounterRng& rng);

template <typename T>
void shuffle(std::span<T> items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace affilkg
