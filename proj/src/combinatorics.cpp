#include "jlolab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace jlolab {

int signature_by_cycles(std::span<const std::size_t> images) {
  const std::size_t n = images.size();
  std::vector<bool> seen(n, false);
  std::size_t cycles = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (std::size_t i = start; !seen[i]; i = images[i]) seen[i] = true;
  }
  return ((n - cycles) % 2 == 0) ? 1 : -1;
}

int signature_by_inversions(std::span<const std::size_t> images) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i] > images[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

SignedPermutation::SignedPermutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || hit[v]) throw std::invalid_argument("SignedPermutation: not a bijection");
    hit[v] = true;
  }
  sign_ = signature_by_cycles(images_);
}

SignedPermutation SignedPermutation::identity(std::size_t n) {
  std::vector<std::size_t> images(n);
  std::iota(images.begin(), images.end(), std::size_t{0});
  return SignedPermutation(std::move(images));
}

std::vector<std::size_t> SignedPermutation::preimage() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return inv;
}

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  double prev = 0.0;
  for (double c : coords_) {
    if (!(c >= prev) || c > 1.0) throw std::invalid_argument("SimplexPoint: coordinates must satisfy 0 <= t1 <= ... <= 1");
    prev = c;
  }
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // result * (n - k + i) / i without an overflowing intermediate.
    const std::uint64_t g = std::gcd(result, std::uint64_t{i});
    if (__builtin_mul_overflow(result / g, (n - k + i) / (i / g), &result))
      throw std::overflow_error("binomial overflows 64 bits");
  }
  return result;
}

std::uint64_t multinomial(std::span<const unsigned> parts) {
  std::uint64_t result = 1;
  unsigned total = 0;
  for (unsigned p : parts) {
    total += p;
    if (__builtin_mul_overflow(result, binomial(total, p), &result))
      throw std::overflow_error("multinomial overflows 64 bits");
  }
  return result;
}

std::uint64_t cyclic_shuffle_count(std::span<const unsigned> block_degrees) {
  std::vector<unsigned> parts;
  parts.push_back(static_cast<unsigned>(block_degrees.size()));
  parts.insert(parts.end(), block_degrees.begin(), block_degrees.end());
  return multinomial(parts);
}

std::vector<SignedPermutation> enumerate_shuffles(unsigned p, unsigned q) {
  const unsigned n = p + q;
  std::vector<SignedPermutation> out;
  out.reserve(binomial(n, p));
  // mask[k] == true: position k is taken by the first block.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + p, true);
  do {
    std::vector<std::size_t> images(n);
    std::size_t a = 0, b = p;
    for (std::size_t pos = 0; pos < n; ++pos) {
      if (mask[pos])
        images[a++] = pos;
      else
        images[b++] = pos;
    }
    out.emplace_back(std::move(images));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

namespace {

struct CyclicEnumerator {
  std::vector<std::size_t> sizes;    // p_i + 1
  std::vector<std::size_t> offsets;  // lex index of (0, i)
  std::vector<std::vector<std::size_t>> sequences;  // rotated block orders
  std::vector<std::size_t> zero_slot;               // where element 0 sits in each sequence
  std::vector<std::size_t> cursor;
  std::vector<std::size_t> images;
  std::size_t total = 0;
  std::vector<SignedPermutation>* out = nullptr;

  void interleave(std::size_t position, std::size_t next_zero) {
    if (position == total) {
      out->emplace_back(images);
      return;
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (cursor[i] == sizes[i]) continue;
      const bool placing_zero = cursor[i] == zero_slot[i];
      if (placing_zero && i != next_zero) continue;
      images[offsets[i] + sequences[i][cursor[i]]] = position;
      ++cursor[i];
      interleave(position + 1, placing_zero ? next_zero + 1 : next_zero);
      --cursor[i];
    }
  }
};

}  // namespace

std::vector<SignedPermutation> enumerate_cyclic_shuffles(std::span<const unsigned> block_degrees) {
  if (block_degrees.empty()) throw std::invalid_argument("enumerate_cyclic_shuffles: r must be >= 1");
  const std::size_t r = block_degrees.size();
  CyclicEnumerator e;
  std::vector<SignedPermutation> out;
  out.reserve(cyclic_shuffle_count(block_degrees));
  e.out = &out;
  e.sizes.resize(r);
  e.offsets.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    e.sizes[i] = block_degrees[i] + 1;
    e.offsets[i] = e.total;
    e.total += e.sizes[i];
  }
  e.sequences.assign(r, {});
  e.zero_slot.assign(r, 0);
  e.cursor.assign(r, 0);
  e.images.assign(e.total, 0);

  std::vector<std::size_t> rotation(r, 0);
  while (true) {
    for (std::size_t i = 0; i < r; ++i) {
      auto& seq = e.sequences[i];
      seq.resize(e.sizes[i]);
      for (std::size_t m = 0; m < e.sizes[i]; ++m) seq[m] = (rotation[i] + m) % e.sizes[i];
      e.zero_slot[i] = (e.sizes[i] - rotation[i]) % e.sizes[i];
    }
    e.interleave(0, 0);
    // Odometer over rotation offsets, last block fastest.
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (++rotation[i] < e.sizes[i]) break;
      rotation[i] = 0;
      if (i == 0) return out;
    }
    if (r == 0) break;
  }
  return out;
}

bool is_shuffle(const SignedPermutation& chi, unsigned p, unsigned q) {
  if (chi.degree() != static_cast<std::size_t>(p) + q) return false;
  for (std::size_t i = 1; i < p; ++i)
    if (chi.image(i - 1) >= chi.image(i)) return false;
  for (std::size_t i = p + 1; i < static_cast<std::size_t>(p) + q; ++i)
    if (chi.image(i - 1) >= chi.image(i)) return false;
  return true;
}

bool is_cyclic_shuffle(const SignedPermutation& sigma, std::span<const unsigned> block_degrees) {
  std::size_t total = 0;
  for (unsigned p : block_degrees) total += p + 1;
  if (sigma.degree() != total) return false;
  std::size_t offset = 0;
  std::size_t previous_zero = 0;
  for (std::size_t i = 0; i < block_degrees.size(); ++i) {
    const std::size_t m = block_degrees[i] + 1;
    const std::size_t zero = sigma.image(offset);
    if (i > 0 && zero <= previous_zero) return false;
    previous_zero = zero;
    if (m >= 2) {
      std::size_t descents = 0;
      for (std::size_t l = 0; l < m; ++l)
        if (sigma.image(offset + l) > sigma.image(offset + (l + 1) % m)) ++descents;
      if (descents != 1) return false;
    }
    offset += m;
  }
  return true;
}

bool shuffle_region_contains(const SignedPermutation& chi, const SimplexPoint& s, const SimplexPoint& t) {
  const std::size_t n = s.degree() + t.degree();
  if (chi.degree() != n) throw std::invalid_argument("shuffle_region_contains: degree mismatch");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < s.degree(); ++i) u[chi.image(i)] = s[i];
  for (std::size_t i = 0; i < t.degree(); ++i) u[chi.image(s.degree() + i)] = t[i];
  return std::is_sorted(u.begin(), u.end());
}

std::optional<SignedPermutation> cyclic_region_locate(std::span<const unsigned> block_degrees, const SimplexPoint& s,
                                                      std::span<const SimplexPoint> t) {
  const std::size_t r = block_degrees.size();
  if (s.degree() != r || t.size() != r) throw std::invalid_argument("cyclic_region_locate: need r base and r fibre points");
  std::vector<double> x;
  for (std::size_t i = 0; i < r; ++i) {
    if (t[i].degree() != block_degrees[i]) throw std::invalid_argument("cyclic_region_locate: fibre degree mismatch");
    x.push_back(s[i]);
    for (std::size_t l = 0; l < t[i].degree(); ++l) {
      double v = s[i] + t[i][l];
      if (v >= 1.0) v -= 1.0;
      x.push_back(v);
    }
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (x[order[k]] == x[order[k - 1]]) return std::nullopt;
  std::vector<std::size_t> images(x.size());
  for (std::size_t k = 0; k < order.size(); ++k) images[order[k]] = k;
  SignedPermutation sigma(std::move(images));
  if (!is_cyclic_shuffle(sigma, block_degrees)) return std::nullopt;
  return sigma;
}

}  // namespace jlolab
