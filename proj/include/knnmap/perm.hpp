#pragma once

/**
 * @file perm.hpp
 * @brief Exact permutations on {0, ..., m-1} and brute-force group closure.
 *
 * Composition convention: compose(p, q)(i) = p(q(i)), i.e. the right factor
 * acts first. Every product in the library (R = r * t, L = t * ell, right
 * translations in derived maps) is written in this one convention.
 *
 * Groups are closed by breadth-first right multiplication from the identity.
 * There is no stabilizer chain: every group handled here has order at most a
 * few times n^2 on 2n points, so a hash set of image arrays is enough.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "knnmap/errors.hpp"

namespace knnmap {

using point_t = std::uint32_t;

class Perm {
 public:
  struct unchecked_t {};
  static constexpr unchecked_t unchecked{};

  Perm() = default;

  /// Validates that `image` is a bijection of {0, ..., size-1}.
  explicit Perm(std::vector<point_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (point_t v : image_) {
      if (v >= image_.size() || seen[v]) throw DomainError("image array is not a bijection");
      seen[v] = true;
    }
  }

  /// Trusted construction for hot paths; the caller guarantees bijectivity.
  Perm(std::vector<point_t> image, unchecked_t) : image_(std::move(image)) {}

  static Perm identity(std::size_t m) {
    std::vector<point_t> img(m);
    std::iota(img.begin(), img.end(), point_t{0});
    return Perm(std::move(img), unchecked);
  }

  /// Builds a permutation of degree m from disjoint cycles, e.g. {{0, 1}, {2, 3, 4}}.
  static Perm from_cycles(std::size_t m, std::initializer_list<std::initializer_list<point_t>> cycles) {
    std::vector<point_t> img(m);
    std::iota(img.begin(), img.end(), point_t{0});
    std::vector<bool> used(m, false);
    for (const auto& cyc : cycles) {
      std::vector<point_t> c(cyc);
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] >= m || used[c[j]]) throw DomainError("cycles are not disjoint points of the domain");
        used[c[j]] = true;
        img[c[j]] = c[(j + 1) % c.size()];
      }
    }
    return Perm(std::move(img), unchecked);
  }

  std::size_t degree() const noexcept { return image_.size(); }
  point_t operator()(point_t i) const { return image_[i]; }
  std::span<const point_t> image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (image_[i] != i) return false;
    return true;
  }

  /// p * p = identity (the identity itself counts).
  bool is_involution() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (image_[image_[i]] != i) return false;
    return true;
  }

  bool has_fixed_point() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (image_[i] == i) return true;
    return false;
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.image_ <=> b.image_; }

 private:
  std::vector<point_t> image_;
};

/// result(i) = p(q(i)).
inline Perm compose(const Perm& p, const Perm& q) {
  if (p.degree() != q.degree())
    throw DegreeError("compose: degree " + std::to_string(p.degree()) + " vs " + std::to_string(q.degree()));
  std::vector<point_t> img(p.degree());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = p(q(static_cast<point_t>(i)));
  return Perm(std::move(img), Perm::unchecked);
}

inline Perm operator*(const Perm& p, const Perm& q) { return compose(p, q); }

inline Perm inverse(const Perm& p) {
  std::vector<point_t> img(p.degree());
  for (std::size_t i = 0; i < img.size(); ++i) img[p(static_cast<point_t>(i))] = static_cast<point_t>(i);
  return Perm(std::move(img), Perm::unchecked);
}

/// p^e for any integer e; negative exponents use the inverse.
inline Perm power(const Perm& p, long long e) {
  Perm base = e < 0 ? inverse(p) : p;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
  Perm result = Perm::identity(p.degree());
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    base = compose(base, base);
    k >>= 1;
  }
  return result;
}

/// Cycles in order of their smallest point, each starting at that point.
inline std::vector<std::vector<point_t>> cycles(const Perm& p) {
  std::vector<std::vector<point_t>> out;
  std::vector<bool> seen(p.degree(), false);
  for (point_t s = 0; s < p.degree(); ++s) {
    if (seen[s]) continue;
    std::vector<point_t> c;
    for (point_t x = s; !seen[x]; x = p(x)) {
      seen[x] = true;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// k, p(k), p^2(k), ... up to (not including) the first repetition.
inline std::vector<point_t> orbit(const Perm& p, point_t k) {
  if (k >= p.degree()) throw DomainError("orbit: point outside the domain");
  std::vector<point_t> out{k};
  for (point_t x = p(k); x != k; x = p(x)) out.push_back(x);
  return out;
}

/// Least k >= 1 with p^k = identity, as the lcm of the cycle lengths.
inline std::uint64_t order(const Perm& p) {
  std::uint64_t l = 1;
  for (const auto& c : cycles(p)) l = std::lcm(l, static_cast<std::uint64_t>(c.size()));
  return l;
}

namespace detail {

inline std::uint64_t hash_points(std::span<const point_t> s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull ^ (s.size() * 0x9e3779b97f4a7c15ull);
  for (point_t v : s) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0x100000001b3ull;
  }
  return h ^ (h >> 31);
}

/// Insertion-ordered set of equal-degree image arrays stored in one flat buffer.
class PermTable {
 public:
  explicit PermTable(std::size_t degree) : degree_(degree), slots_(64, 0), mask_(63) {}

  std::size_t size() const noexcept { return hashes_.size(); }
  std::size_t degree() const noexcept { return degree_; }

  std::span<const point_t> at(std::size_t i) const noexcept {
    return {data_.data() + i * degree_, degree_};
  }

  std::optional<std::size_t> find(std::span<const point_t> img) const noexcept {
    const std::uint64_t h = hash_points(img);
    for (std::size_t s = h & mask_;; s = (s + 1) & mask_) {
      const std::uint32_t slot = slots_[s];
      if (slot == 0) return std::nullopt;
      const std::size_t idx = slot - 1;
      if (hashes_[idx] == h && std::equal(img.begin(), img.end(), at(idx).begin())) return idx;
    }
  }

  /// Returns the index of `img` and whether it was newly inserted.
  std::pair<std::size_t, bool> insert(std::span<const point_t> img) {
    const std::uint64_t h = hash_points(img);
    std::size_t s = h & mask_;
    for (;; s = (s + 1) & mask_) {
      const std::uint32_t slot = slots_[s];
      if (slot == 0) break;
      const std::size_t idx = slot - 1;
      if (hashes_[idx] == h && std::equal(img.begin(), img.end(), at(idx).begin())) return {idx, false};
    }
    const std::size_t idx = hashes_.size();
    data_.insert(data_.end(), img.begin(), img.end());
    hashes_.push_back(h);
    slots_[s] = static_cast<std::uint32_t>(idx + 1);
    if (2 * hashes_.size() > slots_.size()) rehash();
    return {idx, true};
  }

 private:
  void rehash() {
    std::vector<std::uint32_t> fresh(slots_.size() * 2, 0);
    const std::size_t mask = fresh.size() - 1;
    for (std::size_t idx = 0; idx < hashes_.size(); ++idx) {
      std::size_t s = hashes_[idx] & mask;
      while (fresh[s] != 0) s = (s + 1) & mask;
      fresh[s] = static_cast<std::uint32_t>(idx + 1);
    }
    slots_ = std::move(fresh);
    mask_ = mask;
  }

  std::size_t degree_;
  std::vector<point_t> data_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;
  std::size_t mask_;
};

}  // namespace detail

enum class ClosureStatus { Complete, Overflow };

/**
 * Elements of <generators> in breadth-first discovery order (identity first,
 * generators tried in the order given). When Complete, right_multiply(i, j)
 * is the index of element(i) * generator(j).
 */
class GroupClosure {
 public:
  ClosureStatus status() const noexcept { return status_; }
  bool complete() const noexcept { return status_ == ClosureStatus::Complete; }
  std::size_t size() const noexcept { return table_.size(); }
  std::size_t degree() const noexcept { return table_.degree(); }
  const std::vector<Perm>& generators() const noexcept { return generators_; }

  std::span<const point_t> image(std::size_t i) const { return table_.at(i); }
  Perm element(std::size_t i) const {
    auto img = table_.at(i);
    return Perm(std::vector<point_t>(img.begin(), img.end()), Perm::unchecked);
  }

  std::optional<std::size_t> index_of(const Perm& p) const {
    if (p.degree() != degree()) return std::nullopt;
    return table_.find(p.image());
  }
  bool contains(const Perm& p) const { return index_of(p).has_value(); }

  std::size_t right_multiply(std::size_t i, std::size_t j) const {
    if (!complete()) throw OverflowError("right_multiply on an incomplete closure");
    return right_[i * generators_.size() + j];
  }

 private:
  friend GroupClosure close_group(std::span<const Perm> generators, std::size_t cap);
  explicit GroupClosure(std::size_t degree) : table_(degree) {}

  std::vector<Perm> generators_;
  detail::PermTable table_;
  std::vector<std::size_t> right_;
  ClosureStatus status_ = ClosureStatus::Complete;
};

/**
 * Breadth-first closure of <generators> starting from the identity. Stops with
 * status Overflow as soon as more than `cap` elements have been found; the
 * element set then holds cap + 1 elements.
 */
inline GroupClosure close_group(std::span<const Perm> generators, std::size_t cap) {
  if (generators.empty()) throw DomainError("close_group: no generators");
  if (cap == 0) throw DomainError("close_group: cap must be positive");
  const std::size_t m = generators.front().degree();
  for (const auto& g : generators)
    if (g.degree() != m) throw DegreeError("close_group: generators of different degree");

  GroupClosure out(m);
  out.generators_.assign(generators.begin(), generators.end());
  const std::size_t ng = generators.size();

  const Perm id = Perm::identity(m);
  out.table_.insert(id.image());
  std::vector<point_t> scratch(m);
  for (std::size_t i = 0; i < out.table_.size(); ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      auto cur = out.table_.at(i);
      auto gen = generators[j].image();
      for (std::size_t k = 0; k < m; ++k) scratch[k] = cur[gen[k]];
      auto [idx, fresh] = out.table_.insert(scratch);
      out.right_.push_back(idx);
      if (fresh && out.table_.size() > cap) {
        out.status_ = ClosureStatus::Overflow;
        return out;
      }
    }
  }
  return out;
}

inline GroupClosure close_group(std::initializer_list<Perm> generators, std::size_t cap) {
  return close_group(std::span<const Perm>(generators.begin(), generators.size()), cap);
}

}  // namespace knnmap
