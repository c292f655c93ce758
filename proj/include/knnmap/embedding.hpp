#pragma once

/**
 * @file embedding.hpp
 * @brief Maps of K_{n,n} given as signed rotation systems.
 *
 * This is a second, group-free description of embeddings, used where the
 * normal-form triple degenerates (valency 2, where t is trivial) and as an
 * independent cross-check at tiny n.
 *
 * Darts: u -> (n + j) is u * n + j, and (n + j) -> i is n^2 + j * n + i.
 * Edge {i, j'} has index i * n + j. Flags are (dart, side), numbered 2 * dart + side:
 *
 *   tau(d, s)    = (d, 1 - s)
 *   rho(d, 0)    = (succ d, 1),  rho(d, 1) = (pred d, 0)
 *   lambda(d, s) = (rev d, 1 - s) on a plain edge, (rev d, s) on a twisted one
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/perm.hpp"

namespace knnmap::embedding {

struct GraphEmbedding {
  std::uint32_t n = 0;
  Perm rotation;             // on the 2n^2 darts; each cycle is the darts leaving one vertex
  std::vector<bool> twisted; // per edge
};

inline std::uint32_t dart_out(std::uint32_t n, std::uint32_t u, std::uint32_t j) { return u * n + j; }
inline std::uint32_t dart_in(std::uint32_t n, std::uint32_t j, std::uint32_t i) { return n * n + j * n + i; }

inline std::uint32_t reverse_dart(std::uint32_t n, std::uint32_t d) {
  const std::uint32_t half = n * n;
  return d < half ? dart_in(n, d % n, d / n) : dart_out(n, (d - half) % n, (d - half) / n);
}

inline std::uint32_t edge_of(std::uint32_t n, std::uint32_t d) {
  const std::uint32_t half = n * n;
  return d < half ? d : ((d - half) % n) * n + (d - half) / n;
}

inline FlagMap embedding_map(const GraphEmbedding& e) {
  const std::uint32_t n = e.n;
  const std::uint32_t darts = 2 * n * n;
  if (n < 1 || e.rotation.degree() != darts || e.twisted.size() != std::size_t{n} * n)
    throw DomainError("embedding_map: malformed rotation system");
  const Perm pred = inverse(e.rotation);
  std::vector<point_t> lam(2 * darts), rho(2 * darts), tau(2 * darts);
  for (point_t d = 0; d < darts; ++d) {
    const point_t f0 = 2 * d, f1 = 2 * d + 1;
    tau[f0] = f1;
    tau[f1] = f0;
    rho[f0] = 2 * e.rotation(d) + 1;
    rho[f1] = 2 * pred(d);
    const point_t r = reverse_dart(n, d);
    const bool tw = e.twisted[edge_of(n, d)];
    lam[f0] = 2 * r + (tw ? 0 : 1);
    lam[f1] = 2 * r + (tw ? 1 : 0);
  }
  return validate(Perm(std::move(lam)), Perm(std::move(rho)), Perm(std::move(tau)));
}

namespace detail {

// All cyclic orders of {0, ..., n-1} as successor arrays, with 0 first in cycle notation.
inline std::vector<std::vector<std::uint32_t>> cyclic_orders(std::uint32_t n) {
  std::vector<std::uint32_t> rest(n > 0 ? n - 1 : 0);
  std::iota(rest.begin(), rest.end(), 1u);
  std::vector<std::vector<std::uint32_t>> out;
  do {
    std::vector<std::uint32_t> succ(n);
    std::uint32_t prev = 0;
    for (auto v : rest) {
      succ[prev] = v;
      prev = v;
    }
    succ[prev] = 0;
    out.push_back(std::move(succ));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

inline bool is_tree_edge(std::uint32_t n, std::uint32_t i, std::uint32_t j) { return i == 0 || (j == 0 && i < n); }

}  // namespace detail

/**
 * Visits every signed rotation system of K_{n,n} whose spanning-tree edges
 * (0, j') and (i, 0') are untwisted. Every map of K_{n,n} is isomorphic to at
 * least one of them.
 */
inline void for_each_embedding(std::uint32_t n, const std::function<void(const GraphEmbedding&)>& visit) {
  if (n < 1) throw DomainError("for_each_embedding: n must be positive");
  const auto orders = detail::cyclic_orders(n);
  const std::uint32_t vertices = 2 * n;
  std::vector<std::uint32_t> free_edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (!detail::is_tree_edge(n, i, j)) free_edges.push_back(i * n + j);
  if (free_edges.size() >= 32) throw BudgetExceeded("for_each_embedding: too many signatures");

  std::vector<std::size_t> choice(vertices, 0);
  GraphEmbedding e{n, Perm(), std::vector<bool>(std::size_t{n} * n, false)};
  std::vector<point_t> rot(2 * n * n);
  while (true) {
    for (std::uint32_t v = 0; v < vertices; ++v) {
      const auto& succ = orders[choice[v]];
      for (std::uint32_t k = 0; k < n; ++k) {
        if (v < n)
          rot[dart_out(n, v, k)] = dart_out(n, v, succ[k]);
        else
          rot[dart_in(n, v - n, k)] = dart_in(n, v - n, succ[k]);
      }
    }
    e.rotation = Perm(rot, Perm::unchecked);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_edges.size()); ++mask) {
      for (std::size_t b = 0; b < free_edges.size(); ++b) e.twisted[free_edges[b]] = (mask >> b) & 1;
      visit(e);
    }
    std::uint32_t v = 0;
    while (v < vertices && ++choice[v] == orders.size()) choice[v++] = 0;
    if (v == vertices) break;
  }
}

/// Nonorientable regular maps of K_{n,n}, one per isomorphism class, in discovery order.
inline std::vector<FlagMap> nonorientable_regular_embeddings(std::uint32_t n) {
  std::vector<FlagMap> classes;
  for_each_embedding(n, [&](const GraphEmbedding& e) {
    FlagMap m = embedding_map(e);
    if (is_orientable(m) || !is_regular(m)) return;
    for (const auto& c : classes)
      if (isomorphic(c, m)) return;
    classes.push_back(std::move(m));
  });
  return classes;
}

/// K_{2,2} on the projective plane: the 4-cycle with one twisted edge.
inline FlagMap projective_k22() {
  GraphEmbedding e{2, Perm(), std::vector<bool>(4, false)};
  std::vector<point_t> rot(8);
  for (std::uint32_t d = 0; d < 8; ++d) rot[d] = d ^ 1u;  // two darts per vertex
  e.rotation = Perm(std::move(rot));
  e.twisted[1 * 2 + 1] = true;
  return embedding_map(e);
}

}  // namespace knnmap::embedding
