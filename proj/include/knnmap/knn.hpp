#pragma once

/**
 * @file knn.hpp
 * @brief Regular embeddings of K_{n,n} in normal form.
 *
 * Vertices are 0..n-1 for one part and n..2n-1 for the other (i' is n + i).
 * Residues are taken mod n with representatives 0..n-1; "-k" means n - k mod n.
 *
 * A normal-form triple (ell, r_delta, t) is fixed by an involution delta of
 * [n] with delta(0) = 0:
 *
 *   ell     : i <-> (-i)'
 *   r_delta : i -> delta(i),  k' -> (1 - k)'
 *   t       : i -> -i,        k' -> (-k)'
 *
 * With compose(p, q) = p after q, R = r_delta * t acts as deltabar on [n]
 * and as k' -> (k + 1)' on [n]', and L = t * ell swaps i <-> i'.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/numthy.hpp"
#include "knnmap/perm.hpp"

namespace knnmap::knn {

inline point_t neg(std::uint32_t n, std::uint64_t k) { return static_cast<point_t>((n - k % n) % n); }
inline point_t add(std::uint32_t n, std::uint64_t a, std::uint64_t b) { return static_cast<point_t>((a + b) % n); }

/// ell: i <-> (-i)'.
inline Perm longitudinal(std::uint32_t n) {
  std::vector<point_t> img(2 * n);
  for (point_t i = 0; i < n; ++i) {
    img[i] = n + neg(n, i);
    img[n + neg(n, i)] = i;
  }
  return Perm(std::move(img), Perm::unchecked);
}

/// t: negation inside each part.
inline Perm transversal(std::uint32_t n) {
  std::vector<point_t> img(2 * n);
  for (point_t i = 0; i < n; ++i) {
    img[i] = neg(n, i);
    img[n + i] = n + neg(n, i);
  }
  return Perm(std::move(img), Perm::unchecked);
}

/// L = t * ell: i <-> i'.
inline Perm edge_reversal(std::uint32_t n) {
  std::vector<point_t> img(2 * n);
  for (point_t i = 0; i < n; ++i) {
    img[i] = n + i;
    img[n + i] = i;
  }
  return Perm(std::move(img), Perm::unchecked);
}

/// The negation map iota: k -> -k on [n].
inline Perm negation(std::uint32_t n) {
  std::vector<point_t> img(n);
  for (point_t k = 0; k < n; ++k) img[k] = neg(n, k);
  return Perm(std::move(img), Perm::unchecked);
}

struct Triple {
  std::uint32_t n = 0;
  Perm ell, r, t;

  static constexpr point_t root_vertex = 0;
  std::pair<point_t, point_t> root_edge() const { return {0, n}; }
};

namespace detail {
inline void require_delta(std::uint32_t n, const Perm& delta, const char* who) {
  if (n < 2) throw DomainError(std::string(who) + ": n must be at least 2");
  if (delta.degree() != n) throw DomainError(std::string(who) + ": delta must act on [n]");
  if (delta(0) != 0) throw DomainError(std::string(who) + ": delta must fix 0");
  if (!delta.is_involution()) throw DomainError(std::string(who) + ": delta must be an involution");
}
}  // namespace detail

inline Triple canonical_triple(std::uint32_t n, const Perm& delta) {
  detail::require_delta(n, delta, "canonical_triple");
  std::vector<point_t> r(2 * n);
  for (point_t i = 0; i < n; ++i) {
    r[i] = delta(i);
    r[n + i] = n + add(n, 1, neg(n, i));
  }
  return Triple{n, longitudinal(n), Perm(std::move(r), Perm::unchecked), transversal(n)};
}

/**
 * A permutation of [n] fixing 0. The library's invariant for members of the
 * construction is the skew condition deltabar^-1(-k) = -deltabar(k), which is
 * equivalent to delta = deltabar * iota being an involution. `rotation()`
 * builds one without that requirement (used only for the orientable-side
 * multiplier family, whose members are in general chiral).
 */
class DeltaBar {
 public:
  static DeltaBar make(Perm p) {
    DeltaBar d(std::move(p));
    if (!d.skew_) throw DomainError("deltabar violates the skew condition");
    return d;
  }

  static DeltaBar rotation(Perm p) { return DeltaBar(std::move(p)); }

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(perm_.degree()); }
  const Perm& perm() const noexcept { return perm_; }
  std::uint64_t order() const noexcept { return order_; }
  bool skew() const noexcept { return skew_; }
  point_t operator()(point_t k) const { return perm_(k); }

  friend bool operator==(const DeltaBar& a, const DeltaBar& b) { return a.perm_ == b.perm_; }
  friend auto operator<=>(const DeltaBar& a, const DeltaBar& b) { return a.perm_ <=> b.perm_; }

 private:
  explicit DeltaBar(Perm p) : perm_(std::move(p)) {
    const auto n = static_cast<std::uint32_t>(perm_.degree());
    if (n < 2) throw DomainError("deltabar needs n >= 2");
    if (perm_(0) != 0) throw DomainError("deltabar must fix 0");
    order_ = knnmap::order(perm_);
    const Perm inv = inverse(perm_);
    skew_ = true;
    for (point_t k = 0; k < n && skew_; ++k) skew_ = inv(neg(n, k)) == neg(n, perm_(k));
  }

  Perm perm_;
  std::uint64_t order_ = 1;
  bool skew_ = false;
};

/// deltabar = delta * iota, i.e. deltabar(k) = delta(-k).
inline DeltaBar deltabar_of_delta(std::uint32_t n, const Perm& delta) {
  detail::require_delta(n, delta, "deltabar_of_delta");
  return DeltaBar::make(compose(delta, negation(n)));
}

inline Perm delta_of_deltabar(const DeltaBar& db) {
  if (!db.skew()) throw DomainError("delta_of_deltabar: deltabar violates the skew condition");
  Perm delta = compose(db.perm(), negation(db.n()));
  if (!delta.is_involution()) throw DomainError("delta_of_deltabar: result is not an involution");
  return delta;
}

struct RotationPair {
  Perm R;  // deltabar on [n], k' -> (k + 1)' on [n]'
  Perm L;  // i <-> i'
};

inline RotationPair build_R_L(const DeltaBar& db) {
  const std::uint32_t n = db.n();
  std::vector<point_t> r(2 * n);
  for (point_t k = 0; k < n; ++k) {
    r[k] = db(k);
    r[n + k] = n + add(n, k, 1);
  }
  return {Perm(std::move(r), Perm::unchecked), edge_reversal(n)};
}

inline std::size_t nonorientable_order(std::uint32_t n) { return 4 * std::size_t{n} * n; }

/// |<R, L>| = 4n^2 and t in <R, L>, closing with the given element cap.
inline bool in_Mnon_by_group(const DeltaBar& db, std::size_t cap) {
  if (!db.skew()) return false;
  const auto [R, L] = build_R_L(db);
  const auto g = close_group({R, L}, cap);
  return g.complete() && g.size() == nonorientable_order(db.n()) && g.contains(transversal(db.n()));
}

inline bool in_Mnon_by_group(const DeltaBar& db) { return in_Mnon_by_group(db, nonorientable_order(db.n()) + 1); }

/**
 * deltabar^e(k) in O(1) for any integer e, from the cycle decomposition.
 */
class PowerTable {
 public:
  explicit PowerTable(const Perm& p) : cycle_of_(p.degree()), pos_(p.degree()) {
    cycles_ = knnmap::cycles(p);
    for (std::size_t c = 0; c < cycles_.size(); ++c)
      for (std::size_t j = 0; j < cycles_[c].size(); ++j) {
        cycle_of_[cycles_[c][j]] = static_cast<std::uint32_t>(c);
        pos_[cycles_[c][j]] = static_cast<std::uint32_t>(j);
      }
  }

  point_t operator()(long long e, point_t k) const {
    const auto& c = cycles_[cycle_of_[k]];
    const auto len = static_cast<long long>(c.size());
    long long j = (pos_[k] + e) % len;
    if (j < 0) j += len;
    return c[static_cast<std::size_t>(j)];
  }

 private:
  std::vector<std::vector<point_t>> cycles_;
  std::vector<std::uint32_t> cycle_of_;
  std::vector<std::uint32_t> pos_;
};

enum class StarVariant { Star1, Star2, Fail };

inline const char* to_string(StarVariant v) {
  switch (v) {
    case StarVariant::Star1: return "star1";
    case StarVariant::Star2: return "star2";
    case StarVariant::Fail: return "fail";
  }
  return "unknown";
}

/**
 * One row of the star-equation calculus. For variant Star1, for all k:
 *   deltabar(k + i) = deltabar^b(k) + a,   deltabar^i(k) + 1 = deltabar^a(k + b)
 * and for Star2, for all k:
 *   deltabar(k + i) = deltabar^b(-k) + a,  deltabar^i(k) + 1 = deltabar^a(-k + b).
 * `b_back` is deltabar^(-a)(1), which must equal b whenever the row holds.
 */
struct StarWitness {
  point_t i = 0;
  point_t a = 0;
  point_t b = 0;
  point_t b_back = 0;
  StarVariant variant = StarVariant::Fail;
  friend bool operator==(const StarWitness&, const StarWitness&) = default;
};

/// Tests the star equations at row i for the given (a, b) pair.
inline bool star_holds(const DeltaBar& db, const PowerTable& pw, StarVariant v, point_t i, point_t a, point_t b) {
  const std::uint32_t n = db.n();
  const bool mirrored = v == StarVariant::Star2;
  for (point_t k = 0; k < n; ++k) {
    const point_t s = mirrored ? neg(n, k) : k;
    if (db(add(n, k, i)) != add(n, pw(b, s), a)) return false;
    if (add(n, pw(i, k), 1) != pw(a, add(n, s, b))) return false;
  }
  return true;
}

inline std::vector<StarWitness> star_witnesses(const DeltaBar& db) {
  if (!db.skew()) throw DomainError("star_witnesses: deltabar violates the skew condition");
  const std::uint32_t n = db.n();
  const PowerTable pw(db.perm());
  std::vector<StarWitness> out;
  out.reserve(n);
  for (point_t i = 0; i < n; ++i) {
    StarWitness w;
    w.i = i;
    w.a = db(i);
    w.b_back = pw(-static_cast<long long>(w.a), 1 % n);
    const point_t forward = pw(i, 1 % n);
    if (star_holds(db, pw, StarVariant::Star1, i, w.a, forward)) {
      w.b = forward;
      w.variant = StarVariant::Star1;
    } else if (star_holds(db, pw, StarVariant::Star2, i, w.a, neg(n, forward))) {
      w.b = neg(n, forward);
      w.variant = StarVariant::Star2;
    } else {
      w.b = forward;
      w.variant = StarVariant::Fail;
    }
    out.push_back(w);
  }
  return out;
}

inline bool in_Mnon_by_star(const DeltaBar& db) {
  if (!db.skew()) return false;
  bool any_star2 = false;
  for (const auto& w : star_witnesses(db)) {
    if (w.variant == StarVariant::Fail) return false;
    any_star2 = any_star2 || w.variant == StarVariant::Star2;
  }
  return any_star2;
}

/// deltabar_{n,x}: 0 fixed, 2k <-> -2k, odd m -> m + x.
inline DeltaBar deltabar_nx(std::uint32_t n, std::uint32_t x) {
  if (n % 2 != 0 || x % 2 != 0) throw DomainError("deltabar_nx: n and x must be even");
  if (!(n > x && x > 3)) throw DomainError("deltabar_nx: need n > x > 3");
  if (std::gcd(n, x) != 2) throw DomainError("deltabar_nx: gcd(n, x) must be 2");
  std::vector<point_t> img(n);
  for (point_t k = 0; k < n; ++k) img[k] = k % 2 == 0 ? neg(n, k) : add(n, k, x);
  return DeltaBar::make(Perm(std::move(img)));
}

/// The constructive family for n, sorted by x ascending.
inline std::vector<DeltaBar> enumerate_Nnon(std::uint32_t n) {
  if (n < 2) throw DomainError("enumerate_Nnon: n must be at least 2");
  std::vector<DeltaBar> out;
  if (n % 2 != 0) return out;
  for (auto x : numthy::solve_x2_eq_2(n).solutions)
    if (x % 2 == 0 && x > 3 && x < n) out.push_back(deltabar_nx(n, static_cast<std::uint32_t>(x)));
  return out;
}

/// Recovers x from a member of the constructive family (deltabar(1) = 1 + x).
inline std::uint32_t family_parameter(const DeltaBar& db) { return add(db.n(), db(1), db.n() - 1); }

/**
 * The (mod m)-reduction k -> deltabar(k) mod m on [m]. Throws
 * CongruenceError unless k1 = k2 (mod m) implies deltabar(k1) = deltabar(k2) (mod m).
 */
inline DeltaBar reduction(const DeltaBar& db, std::uint32_t m) {
  const std::uint32_t n = db.n();
  if (m < 2 || n % m != 0) throw DomainError("reduction: m must be a divisor of n with m >= 2");
  for (point_t k = 0; k < n; ++k)
    if (db(k) % m != db(k % m) % m)
      throw CongruenceError("reduction: " + std::to_string(k) + " = " + std::to_string(k % m) + " (mod " +
                            std::to_string(m) + ") but their images differ mod m");
  std::vector<point_t> img(m);
  for (point_t k = 0; k < m; ++k) img[k] = db(k) % m;
  Perm p(std::move(img));
  return db.skew() ? DeltaBar::make(std::move(p)) : DeltaBar::rotation(std::move(p));
}

/// deltabar(k) = k (1 + r d), requiring the multiplier to have order d in Z_n^*.
inline DeltaBar linear_family(std::uint32_t n, std::uint32_t d, std::uint64_t r) {
  if (n < 2 || d == 0 || n % d != 0) throw DomainError("linear_family: d must divide n");
  const std::uint64_t u = (1 + (r % n) * d) % n;
  if (numthy::multiplicative_order(u, n) != d)
    throw DomainError("linear_family: 1 + r d has order " + std::to_string(numthy::multiplicative_order(u, n)) +
                      " in Z_n^*, expected " + std::to_string(d));
  std::vector<point_t> img(n);
  for (point_t k = 0; k < n; ++k) img[k] = static_cast<point_t>((std::uint64_t{k} * u) % n);
  Perm p(std::move(img));
  const DeltaBar probe = DeltaBar::rotation(p);
  return probe.skew() ? DeltaBar::make(std::move(p)) : probe;
}

struct DerivedMap {
  FlagMap map;
  std::size_t group_order = 0;
};

namespace detail {

// Orbit of the root arc (0, 0') under the generators; arcs are encoded u * 2n + v.
inline std::size_t root_arc_orbit_size(std::uint32_t n, std::initializer_list<const Perm*> gens) {
  const std::size_t m = 2 * std::size_t{n};
  std::vector<bool> seen(m * m, false);
  std::vector<std::pair<point_t, point_t>> stack{{0, n}};
  seen[n] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    ++count;
    for (const Perm* g : gens) {
      const point_t gu = (*g)(u), gv = (*g)(v);
      if (!seen[gu * m + gv]) {
        seen[gu * m + gv] = true;
        stack.push_back({gu, gv});
      }
    }
  }
  return count;
}

inline bool is_bipartite_automorphism(std::uint32_t n, const Perm& p) {
  const bool swaps = p(0) >= n;
  for (point_t v = 0; v < 2 * n; ++v)
    if (((p(v) >= n) != (v >= n)) != swaps) return false;
  return true;
}

}  // namespace detail

/**
 * The derived map of an admissible triple: flags are the elements of
 * Gamma = <ell, r, t> in breadth-first order from the identity (generators in
 * the order ell, r, t) and lambda, rho, tau are right translations.
 */
inline DerivedMap derived_map(const Triple& tr) {
  using C = AdmissibilityCondition;
  const std::uint32_t n = tr.n;
  const std::size_t expected = nonorientable_order(n);

  for (const Perm* p : {&tr.ell, &tr.r, &tr.t})
    if (p->degree() != 2 * n || !p->is_involution() || p->is_identity() || !detail::is_bipartite_automorphism(n, *p))
      throw NotAdmissibleError(C::Involutions, "generators must be nontrivial involutory automorphisms of K_{n,n}");

  const std::size_t arcs = detail::root_arc_orbit_size(n, {&tr.ell, &tr.r, &tr.t});
  if (arcs != 2 * std::size_t{n} * n)
    throw NotAdmissibleError(C::ArcTransitivity, "root arc orbit has " + std::to_string(arcs) + " arcs");

  const Perm rt = compose(tr.r, tr.t);
  const auto dihedral = close_group({tr.r, tr.t}, 2 * std::size_t{n} + 1);
  if (!dihedral.complete() || dihedral.size() != 2 * std::size_t{n} || order(rt) != n)
    throw NotAdmissibleError(C::VertexStabilizer, "<r, t> is not dihedral of order 2n");
  if (rt(0) != 0 || orbit(rt, n).size() != n)
    throw NotAdmissibleError(C::VertexStabilizer, "<rt> is not regular on the arcs at the root vertex");

  const Perm lt = compose(tr.ell, tr.t);
  if (tr.ell == tr.t || lt != compose(tr.t, tr.ell) || !(tr.ell(0) == n && tr.t(0) == 0 && tr.t(n) == n))
    throw NotAdmissibleError(C::EdgeStabilizer, "<ell, t> is not a Klein four-group fixing the root edge");

  const auto gamma = close_group({tr.ell, tr.r, tr.t}, expected + 1);
  if (!gamma.complete())
    throw OverflowError("|<ell, r, t>| exceeds " + std::to_string(expected + 1) + " elements");

  std::size_t vertex_stab = 0, edge_stab = 0;
  for (std::size_t g = 0; g < gamma.size(); ++g) {
    const auto img = gamma.image(g);
    if (img[0] == 0) ++vertex_stab;
    if ((img[0] == 0 && img[n] == n) || (img[0] == n && img[n] == 0)) ++edge_stab;
  }
  if (vertex_stab != 2 * std::size_t{n})
    throw NotAdmissibleError(C::VertexStabilizer, "vertex stabilizer has order " + std::to_string(vertex_stab));
  if (edge_stab != 4)
    throw NotAdmissibleError(C::EdgeStabilizer, "edge stabilizer has order " + std::to_string(edge_stab));
  if (gamma.size() != expected)
    throw NotAdmissibleError(C::GroupOrder, "|<ell, r, t>| = " + std::to_string(gamma.size()));

  const std::size_t nf = gamma.size();
  std::vector<point_t> lam(nf), rho(nf), tau(nf);
  for (std::size_t g = 0; g < nf; ++g) {
    lam[g] = static_cast<point_t>(gamma.right_multiply(g, 0));
    rho[g] = static_cast<point_t>(gamma.right_multiply(g, 1));
    tau[g] = static_cast<point_t>(gamma.right_multiply(g, 2));
  }
  return {validate(Perm(std::move(lam)), Perm(std::move(rho)), Perm(std::move(tau))), nf};
}

/**
 * The orientable map carried by a rotation R and edge reversal L: flags are
 * pairs (g, s) with g in <R, L> and s in {0, 1}, indexed 2g + s;
 *   tau(g, s) = (g, 1-s), rho(g, 0) = (gR, 1), rho(g, 1) = (gR^-1, 0),
 *   lambda(g, s) = (gL, 1-s).
 * Every generator flips s, so the result is orientable by construction.
 */
inline FlagMap rotary_map(const Perm& R, const Perm& L, std::size_t cap) {
  const auto g = close_group({R, L}, cap);
  if (!g.complete()) throw OverflowError("rotary_map: |<R, L>| exceeds cap");
  const std::size_t m = g.size();
  std::vector<point_t> r_inv(m);
  for (std::size_t i = 0; i < m; ++i) r_inv[g.right_multiply(i, 0)] = static_cast<point_t>(i);
  std::vector<point_t> lam(2 * m), rho(2 * m), tau(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto f0 = static_cast<point_t>(2 * i), f1 = static_cast<point_t>(2 * i + 1);
    tau[f0] = f1;
    tau[f1] = f0;
    rho[f0] = static_cast<point_t>(2 * g.right_multiply(i, 0) + 1);
    rho[f1] = static_cast<point_t>(2 * r_inv[i]);
    lam[f0] = static_cast<point_t>(2 * g.right_multiply(i, 1) + 1);
    lam[f1] = static_cast<point_t>(2 * g.right_multiply(i, 1));
  }
  return validate(Perm(std::move(lam)), Perm(std::move(rho)), Perm(std::move(tau)));
}

}  // namespace knnmap::knn
