#pragma once

/**
 * @file flagmap.hpp
 * @brief Combinatorial maps (F; lambda, rho, tau) and their surface invariants.
 *
 * Vertices, edges and faces are the orbits of <rho, tau>, <lambda, tau> and
 * <rho, lambda>. A map is nonorientable iff the even-word subgroup
 * <rho tau, tau lambda> is transitive on flags.
 */

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knnmap/errors.hpp"
#include "knnmap/perm.hpp"

namespace knnmap {

class FlagMap;
FlagMap validate(Perm lambda, Perm rho, Perm tau);

class FlagMap {
 public:
  std::size_t flag_count() const noexcept { return lambda_.degree(); }
  const Perm& lambda() const noexcept { return lambda_; }
  const Perm& rho() const noexcept { return rho_; }
  const Perm& tau() const noexcept { return tau_; }

  friend bool operator==(const FlagMap&, const FlagMap&) = default;

 private:
  friend FlagMap validate(Perm lambda, Perm rho, Perm tau);
  FlagMap(Perm l, Perm r, Perm t) : lambda_(std::move(l)), rho_(std::move(r)), tau_(std::move(t)) {}

  Perm lambda_, rho_, tau_;
};

struct MapInvariants {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t faces = 0;
  std::int64_t euler_characteristic = 0;
  bool orientable = false;
  std::uint64_t genus_or_crosscaps = 0;  // genus if orientable, crosscap number otherwise
  std::uint64_t valency = 0;             // half the flags of the root vertex
  std::uint64_t covalency = 0;           // half the flags of the root face
  bool equivelar = false;                // all vertex orbits equal and all face orbits equal
  friend bool operator==(const MapInvariants&, const MapInvariants&) = default;
};

/// Orbit partition of {0, ..., m-1} under a set of permutations.
struct OrbitPartition {
  std::vector<std::uint32_t> label;  // orbit index of each point, numbered by first point
  std::vector<std::uint64_t> sizes;
  std::size_t count() const noexcept { return sizes.size(); }
};

inline OrbitPartition orbit_partition(std::size_t m, std::initializer_list<const Perm*> gens) {
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  OrbitPartition out{std::vector<std::uint32_t>(m, kUnset), {}};
  std::vector<point_t> stack;
  for (point_t s = 0; s < m; ++s) {
    if (out.label[s] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(out.sizes.size());
    std::uint64_t size = 0;
    out.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const point_t x = stack.back();
      stack.pop_back();
      ++size;
      for (const Perm* g : gens) {
        const point_t y = (*g)(x);
        if (out.label[y] == kUnset) {
          out.label[y] = id;
          stack.push_back(y);
        }
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

/**
 * Checks the map axioms: lambda, rho, tau fixed-point-free involutions,
 * lambda tau = tau lambda, and <lambda, rho, tau> transitive.
 */
inline FlagMap validate(Perm lambda, Perm rho, Perm tau) {
  const std::size_t m = lambda.degree();
  if (m == 0) throw DomainError("validate: empty flag set");
  if (rho.degree() != m || tau.degree() != m) throw DegreeError("validate: involutions of different degree");
  const std::pair<const Perm*, const char*> named[] = {{&lambda, "lambda"}, {&rho, "rho"}, {&tau, "tau"}};
  for (const auto& [p, name] : named)
    if (!p->is_involution() || p->has_fixed_point())
      throw FixedPointError(std::string(name) + " is not a fixed-point-free involution");
  if (compose(lambda, tau) != compose(tau, lambda)) throw CommutationError("lambda tau != tau lambda");
  if (orbit_partition(m, {&lambda, &rho, &tau}).count() != 1)
    throw NotTransitiveError("<lambda, rho, tau> is not transitive on flags");
  return FlagMap(std::move(lambda), std::move(rho), std::move(tau));
}

/// Number of orbits of the even-word subgroup <rho tau, tau lambda>.
inline std::size_t even_word_orbit_count(const FlagMap& m) {
  const Perm rt = compose(m.rho(), m.tau());
  const Perm tl = compose(m.tau(), m.lambda());
  return orbit_partition(m.flag_count(), {&rt, &tl}).count();
}

inline bool is_orientable(const FlagMap& m) { return even_word_orbit_count(m) >= 2; }

namespace detail {

/**
 * Extends root1 -> root2 along lambda, rho, tau. Returns the full flag
 * correspondence if it is consistent, which for transitive maps of equal size
 * is exactly a map isomorphism.
 */
inline std::optional<std::vector<point_t>> extend_correspondence(const FlagMap& a, point_t root_a, const FlagMap& b,
                                                                 point_t root_b) {
  const std::size_t m = a.flag_count();
  if (b.flag_count() != m) return std::nullopt;
  constexpr point_t kUnset = ~point_t{0};
  std::vector<point_t> phi(m, kUnset);
  std::vector<point_t> queue;
  queue.reserve(m);
  phi[root_a] = root_b;
  queue.push_back(root_a);
  const Perm* ga[] = {&a.lambda(), &a.rho(), &a.tau()};
  const Perm* gb[] = {&b.lambda(), &b.rho(), &b.tau()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const point_t x = queue[head];
    for (int g = 0; g < 3; ++g) {
      const point_t y = (*ga[g])(x);
      const point_t image = (*gb[g])(phi[x]);
      if (phi[y] == kUnset) {
        phi[y] = image;
        queue.push_back(y);
      } else if (phi[y] != image) {
        return std::nullopt;
      }
    }
  }
  return phi;
}

}  // namespace detail

/// Every flag is the image of flag 0 under some automorphism.
inline bool is_regular(const FlagMap& m) {
  for (point_t f = 0; f < m.flag_count(); ++f)
    if (!detail::extend_correspondence(m, 0, m, f)) return false;
  return true;
}

inline bool isomorphic(const FlagMap& a, const FlagMap& b) {
  if (a.flag_count() != b.flag_count()) return false;
  for (point_t f = 0; f < b.flag_count(); ++f)
    if (detail::extend_correspondence(a, 0, b, f)) return true;
  return false;
}

inline MapInvariants invariants(const FlagMap& m) {
  const std::size_t nf = m.flag_count();
  const auto verts = orbit_partition(nf, {&m.rho(), &m.tau()});
  const auto edges = orbit_partition(nf, {&m.lambda(), &m.tau()});
  const auto faces = orbit_partition(nf, {&m.rho(), &m.lambda()});

  MapInvariants inv;
  inv.vertices = verts.count();
  inv.edges = edges.count();
  inv.faces = faces.count();
  inv.euler_characteristic = static_cast<std::int64_t>(inv.vertices) - static_cast<std::int64_t>(inv.edges) +
                             static_cast<std::int64_t>(inv.faces);
  inv.orientable = is_orientable(m);
  const std::int64_t deficit = 2 - inv.euler_characteristic;
  inv.genus_or_crosscaps = static_cast<std::uint64_t>(inv.orientable ? deficit / 2 : deficit);
  inv.valency = verts.sizes[verts.label[0]] / 2;
  inv.covalency = faces.sizes[faces.label[0]] / 2;
  auto uniform = [](const OrbitPartition& p) {
    for (auto s : p.sizes)
      if (s != p.sizes.front()) return false;
    return true;
  };
  inv.equivelar = uniform(verts) && uniform(faces);
  return inv;
}

}  // namespace knnmap
