#pragma once

// Small fixed-degree permutations. Degree is a template parameter because
// every use below is S4 or S5; everything stays on the stack.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "psl2/common.hpp"

namespace psl2 {

// Permutation of {0,...,N-1}; img[i] is the image of point i.
template <std::size_t N>
struct Perm {
  std::array<uint8_t, N> img{};

  static Perm identity() {
    Perm p;
    std::iota(p.img.begin(), p.img.end(), uint8_t{0});
    return p;
  }

  uint8_t operator()(uint8_t x) const { return img[x]; }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;
};

// Composition acts on the left: (a * b)(x) = a(b(x)).
template <std::size_t N>
inline Perm<N> operator*(const Perm<N>& a, const Perm<N>& b) {
  Perm<N> r;
  for (std::size_t i = 0; i < N; ++i) r.img[i] = a.img[b.img[i]];
  return r;
}

template <std::size_t N>
inline Perm<N> inverse(const Perm<N>& a) {
  Perm<N> r;
  for (std::size_t i = 0; i < N; ++i) r.img[a.img[i]] = static_cast<uint8_t>(i);
  return r;
}

template <std::size_t N>
inline uint32_t order(const Perm<N>& a) {
  uint32_t ord = 1;
  std::array<bool, N> seen{};
  for (std::size_t i = 0; i < N; ++i) {
    if (seen[i]) continue;
    uint32_t len = 0;
    for (std::size_t j = i; !seen[j]; j = a.img[j]) {
      seen[j] = true;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

template <std::size_t N>
inline bool is_even(const Perm<N>& a) {
  // Parity is (N - #cycles) mod 2.
  std::array<bool, N> seen{};
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = a.img[j]) seen[j] = true;
  }
  return (N - cycles) % 2 == 0;
}

// Lehmer rank: position of the image array in lexicographic order.
template <std::size_t N>
inline uint32_t perm_rank(const Perm<N>& a) {
  uint32_t rank = 0;
  for (std::size_t i = 0; i < N; ++i) {
    uint32_t smaller = 0;
    for (std::size_t j = i + 1; j < N; ++j)
      if (a.img[j] < a.img[i]) ++smaller;
    rank = rank * static_cast<uint32_t>(N - i) + smaller;
  }
  return rank;
}

template <std::size_t N>
inline Perm<N> perm_unrank(uint32_t rank) {
  std::array<uint32_t, N> code{};
  for (std::size_t i = N; i-- > 0;) {
    code[i] = rank % static_cast<uint32_t>(N - i);
    rank /= static_cast<uint32_t>(N - i);
  }
  check(rank == 0, "perm_unrank: rank out of range");
  std::vector<uint8_t> pool(N);
  std::iota(pool.begin(), pool.end(), uint8_t{0});
  Perm<N> p;
  for (std::size_t i = 0; i < N; ++i) {
    p.img[i] = pool[code[i]];
    pool.erase(pool.begin() + code[i]);
  }
  return p;
}

// All N! permutations in lexicographic (= rank) order.
template <std::size_t N>
inline std::vector<Perm<N>> symmetric_group() {
  std::vector<Perm<N>> all;
  Perm<N> p = Perm<N>::identity();
  do {
    all.push_back(p);
  } while (std::next_permutation(p.img.begin(), p.img.end()));
  return all;
}

template <std::size_t N>
inline std::vector<Perm<N>> alternating_group() {
  std::vector<Perm<N>> evens;
  for (const Perm<N>& p : symmetric_group<N>())
    if (is_even(p)) evens.push_back(p);
  return evens;
}

}  // namespace psl2
