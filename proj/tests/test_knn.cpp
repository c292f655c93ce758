#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "knnmap/classify.hpp"
#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/knn.hpp"
#include "knnmap/perm.hpp"

using namespace knnmap;
using namespace knnmap::knn;

namespace {

Perm from_list(std::vector<point_t> v) { return Perm(std::move(v)); }

// Direct evaluation of deltabar^e(k) by repeated application, as an oracle for PowerTable.
point_t slow_power(const Perm& p, long long e, point_t k) {
  const Perm q = e < 0 ? inverse(p) : p;
  for (long long s = 0; s < (e < 0 ? -e : e); ++s) k = q(k);
  return k;
}

// Does any (a, b) at all satisfy the star equations at row i?
bool some_pair_works(const DeltaBar& db, const PowerTable& pw, StarVariant v, point_t i) {
  for (point_t a = 0; a < db.n(); ++a)
    for (point_t b = 0; b < db.n(); ++b)
      if (star_holds(db, pw, v, i, a, b)) return true;
  return false;
}

Perm random_involution_fixing_0(std::uint32_t n, std::mt19937& rng) {
  std::vector<point_t> pts;
  for (point_t k = 1; k < n; ++k) pts.push_back(k);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<point_t> img(n);
  for (point_t k = 0; k < n; ++k) img[k] = k;
  const std::size_t pairs = rng() % (pts.size() / 2 + 1);
  for (std::size_t j = 0; j < pairs; ++j) {
    img[pts[2 * j]] = pts[2 * j + 1];
    img[pts[2 * j + 1]] = pts[2 * j];
  }
  return Perm(std::move(img));
}

}  // namespace

TEST(CanonicalTriple, HandComputedN4) {
  const Triple tr = canonical_triple(4, Perm::identity(4));
  EXPECT_EQ(tr.ell, from_list({4, 7, 6, 5, 0, 3, 2, 1}));
  EXPECT_EQ(tr.ell(1), 7u);
  EXPECT_EQ(tr.r, from_list({0, 1, 2, 3, 5, 4, 7, 6}));
  EXPECT_EQ(tr.t, from_list({0, 3, 2, 1, 4, 7, 6, 5}));
  EXPECT_EQ(tr.root_vertex, 0u);
  EXPECT_EQ(tr.root_edge(), (std::pair<point_t, point_t>{0, 4}));
}

TEST(CanonicalTriple, ProductsUnderTheCompositionConvention) {
  // R = r t and L = t ell, each image worked out by hand for n = 4, delta = identity.
  const Triple tr = canonical_triple(4, Perm::identity(4));
  EXPECT_EQ(compose(tr.r, tr.t), from_list({0, 3, 2, 1, 5, 6, 7, 4}));
  EXPECT_EQ(compose(tr.t, tr.ell), from_list({4, 5, 6, 7, 0, 1, 2, 3}));
  const auto [R, L] = build_R_L(deltabar_of_delta(4, Perm::identity(4)));
  EXPECT_EQ(R, compose(tr.r, tr.t));
  EXPECT_EQ(L, compose(tr.t, tr.ell));
}

TEST(CanonicalTriple, EllCommutesWithT) {
  std::mt19937 rng(8);
  for (std::uint32_t n = 2; n <= 30; ++n) {
    const Triple tr = canonical_triple(n, random_involution_fixing_0(n, rng));
    EXPECT_EQ(compose(tr.ell, tr.t), compose(tr.t, tr.ell));
    EXPECT_TRUE(tr.ell.is_involution() && tr.r.is_involution() && tr.t.is_involution());
    const auto [R, L] = build_R_L(deltabar_of_delta(n, Perm(std::vector<point_t>(tr.r.image().begin(),
                                                                                  tr.r.image().begin() + n))));
    EXPECT_EQ(R, compose(tr.r, tr.t));
    EXPECT_EQ(L, compose(tr.t, tr.ell));
  }
}

TEST(CanonicalTriple, Errors) {
  EXPECT_THROW(canonical_triple(4, Perm::from_cycles(4, {{0, 1}})), DomainError);
  EXPECT_THROW(canonical_triple(4, Perm::from_cycles(4, {{1, 2, 3}})), DomainError);
  EXPECT_THROW(canonical_triple(4, Perm::identity(5)), DomainError);
  EXPECT_THROW(canonical_triple(1, Perm::identity(1)), DomainError);
}

TEST(DeltaBarTest, OfIdentityIsNegation) {
  const DeltaBar db = deltabar_of_delta(5, Perm::identity(5));
  EXPECT_EQ(db.perm(), from_list({0, 4, 3, 2, 1}));
  EXPECT_EQ(db.order(), 2u);
  EXPECT_TRUE(db.skew());
}

TEST(DeltaBarTest, DeltaOfNx) {
  const Perm delta = delta_of_deltabar(deltabar_nx(14, 4));
  EXPECT_TRUE(delta.is_involution());
  for (point_t k = 0; k < 14; ++k) EXPECT_EQ(delta(k), k % 2 == 0 ? k : (4 + 14 - k) % 14);
}

TEST(DeltaBarTest, RoundTrip) {
  std::mt19937 rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t n = 2 + rng() % 30;
    const Perm delta = random_involution_fixing_0(n, rng);
    const DeltaBar db = deltabar_of_delta(n, delta);
    EXPECT_TRUE(db.skew());
    EXPECT_EQ(delta_of_deltabar(db), delta);
    EXPECT_EQ(deltabar_of_delta(n, delta_of_deltabar(db)), db);
  }
}

TEST(DeltaBarTest, SkewConditionEnforced) {
  EXPECT_NO_THROW(DeltaBar::make(from_list({0, 2, 3, 1})));
  EXPECT_THROW(DeltaBar::make(from_list({0, 2, 1, 3})), DomainError);  // delta would be a 3-cycle
  EXPECT_THROW(DeltaBar::make(from_list({1, 0, 2})), DomainError);     // does not fix 0
  EXPECT_FALSE(DeltaBar::rotation(from_list({0, 4, 8, 3, 7, 2, 6, 1, 5})).skew());
  EXPECT_THROW(deltabar_of_delta(4, Perm::from_cycles(4, {{1, 2, 3}})), DomainError);
}

TEST(BuildRL, Basics) {
  for (std::uint32_t n : {3u, 7u, 14u}) {
    const auto [R, L] = build_R_L(DeltaBar::make(Perm::identity(n)));
    EXPECT_TRUE(compose(L, L).is_identity());
    for (point_t k = 0; k < n; ++k) {
      EXPECT_EQ(R(k), k);
      EXPECT_EQ(L(k), n + k);
    }
    EXPECT_EQ(orbit(R, n).size(), n);
  }
  const auto [R, L] = build_R_L(deltabar_nx(14, 4));
  EXPECT_EQ(order(compose(L, R)), 8u);
}

TEST(BuildRL, LROrderEightAcrossFamily) {
  for (std::uint32_t n = 2; n <= 200; ++n)
    for (const auto& db : enumerate_Nnon(n)) {
      const auto [R, L] = build_R_L(db);
      EXPECT_TRUE(power(compose(L, R), 8).is_identity()) << n;
      EXPECT_EQ(order(compose(L, R)), 8u) << n;
    }
}

TEST(InMnonByGroup, Examples) {
  EXPECT_TRUE(in_Mnon_by_group(deltabar_nx(14, 4)));
  EXPECT_TRUE(in_Mnon_by_group(deltabar_nx(14, 10)));
  EXPECT_FALSE(in_Mnon_by_group(DeltaBar::make(Perm::identity(5))));
  EXPECT_FALSE(in_Mnon_by_group(deltabar_of_delta(6, Perm::identity(6))));
  const auto [R, L] = build_R_L(DeltaBar::make(Perm::identity(5)));
  EXPECT_EQ(close_group({R, L}, 101).size(), 50u);
}

TEST(PowerTableTest, MatchesRepeatedApplication) {
  const Perm p = deltabar_nx(34, 6).perm();
  const PowerTable pw(p);
  for (long long e = -40; e <= 40; e += 3)
    for (point_t k = 0; k < 34; ++k) EXPECT_EQ(pw(e, k), slow_power(p, e, k));
}

TEST(StarWitnesses, N14Rows) {
  const auto w = star_witnesses(deltabar_nx(14, 4));
  ASSERT_EQ(w.size(), 14u);
  EXPECT_EQ(w[2].variant, StarVariant::Star1);
  EXPECT_EQ(w[2].a, 12u);
  EXPECT_EQ(w[2].b, 9u);
  EXPECT_EQ(w[1].variant, StarVariant::Star2);
  EXPECT_EQ(w[1].a, 5u);
  EXPECT_EQ(w[1].b, 9u);
  for (const auto& s : w) EXPECT_EQ(s.variant, s.i % 2 == 1 ? StarVariant::Star2 : StarVariant::Star1);
}

TEST(StarWitnesses, NegationIsAllStar1ForEvenN) {
  for (std::uint32_t n = 3; n <= 20; ++n) {
    const DeltaBar iota = deltabar_of_delta(n, Perm::identity(n));
    const auto w = star_witnesses(iota);
    // odd n: the order 2 does not divide n, so the rows depend on exponent representatives
    if (n % 2 == 0) {
      for (const auto& s : w) EXPECT_EQ(s.variant, StarVariant::Star1) << n << " " << s.i;
    }
    EXPECT_FALSE(in_Mnon_by_star(iota));
  }
}

TEST(StarWitnesses, RejectsNonSkew) {
  EXPECT_THROW(star_witnesses(linear_family(9, 3, 1)), DomainError);
  EXPECT_FALSE(in_Mnon_by_star(linear_family(9, 3, 1)));
}

TEST(StarWitnesses, FormulaChoiceLosesNothing) {
  // If any (a, b) solves a row, the closed-form (a, b) solves it too.
  for (std::uint32_t n = 3; n <= 8; ++n)
    classify::for_each_involution(n, [&](const Perm& delta) {
      const DeltaBar db = deltabar_of_delta(n, delta);
      const PowerTable pw(db.perm());
      for (const auto& w : star_witnesses(db)) {
        const bool any = some_pair_works(db, pw, StarVariant::Star1, w.i) ||
                         some_pair_works(db, pw, StarVariant::Star2, w.i);
        EXPECT_EQ(any, w.variant != StarVariant::Fail) << n << " row " << w.i;
      }
    });
}

TEST(StarWitnesses, RowsNeverSatisfyBothVariantsForMembers) {
  for (std::uint32_t n : {14u, 34u, 46u, 62u, 94u, 98u})
    for (const auto& db : enumerate_Nnon(n)) {
      const PowerTable pw(db.perm());
      for (const auto& w : star_witnesses(db)) {
        const point_t fwd = pw(w.i, 1);
        EXPECT_FALSE(star_holds(db, pw, StarVariant::Star1, w.i, w.a, fwd) &&
                     star_holds(db, pw, StarVariant::Star2, w.i, w.a, neg(n, fwd)));
      }
    }
}

TEST(Routes, GroupAndStarAgreeExhaustively) {
  for (std::uint32_t n = 2; n <= 12; ++n) {
    std::size_t members = 0;
    classify::for_each_involution(n, [&](const Perm& delta) {
      const DeltaBar db = deltabar_of_delta(n, delta);
      const bool g = in_Mnon_by_group(db);
      EXPECT_EQ(g, in_Mnon_by_star(db)) << n;
      members += g;
    });
    EXPECT_EQ(members, 0u) << n;
  }
}

TEST(Routes, AgreeOnFamilyMembersAndNeighbours) {
  for (std::uint32_t n : {14u, 34u, 46u})
    for (std::uint32_t x = 4; x < n; x += 2) {
      if (std::gcd(n, x) != 2) continue;
      const DeltaBar db = deltabar_nx(n, x);
      const bool expected = (std::uint64_t{x} * x) % n == 2;
      EXPECT_EQ(in_Mnon_by_star(db), expected) << n << " " << x;
      EXPECT_EQ(in_Mnon_by_group(db), expected) << n << " " << x;
    }
}

TEST(DeltaBarNx, Definition) {
  const DeltaBar db = deltabar_nx(14, 4);
  const auto cyc = cycles(db.perm());
  const std::vector<std::vector<point_t>> expected{{0}, {1, 5, 9, 13, 3, 7, 11}, {2, 12}, {4, 10}, {6, 8}};
  EXPECT_EQ(cyc, expected);
  EXPECT_TRUE(db.skew());
  const Perm inv = inverse(db.perm());
  for (point_t k = 0; k < 14; ++k) EXPECT_EQ(inv(neg(14, k)), neg(14, db(k)));
}

TEST(DeltaBarNx, PreconditionsAndNecessity) {
  EXPECT_NO_THROW(deltabar_nx(14, 6));
  EXPECT_FALSE(in_Mnon_by_star(deltabar_nx(14, 6)));
  EXPECT_FALSE(in_Mnon_by_group(deltabar_nx(14, 6)));
  EXPECT_THROW(deltabar_nx(12, 4), DomainError);
  EXPECT_THROW(deltabar_nx(14, 5), DomainError);
  EXPECT_THROW(deltabar_nx(15, 4), DomainError);
  EXPECT_THROW(deltabar_nx(14, 2), DomainError);
  EXPECT_THROW(deltabar_nx(14, 16), DomainError);
}

TEST(EnumerateNnon, Examples) {
  const auto m14 = enumerate_Nnon(14);
  ASSERT_EQ(m14.size(), 2u);
  EXPECT_EQ(m14[0], deltabar_nx(14, 4));
  EXPECT_EQ(m14[1], deltabar_nx(14, 10));
  EXPECT_EQ(family_parameter(m14[1]), 10u);
  EXPECT_TRUE(enumerate_Nnon(12).empty());
  EXPECT_TRUE(enumerate_Nnon(13).empty());
  EXPECT_TRUE(enumerate_Nnon(7).empty());  // 4^2 = 2 (mod 7), but n is odd
  EXPECT_TRUE(enumerate_Nnon(2).empty());
  EXPECT_THROW(enumerate_Nnon(1), DomainError);
}

TEST(EnumerateNnon, EveryMemberPassesBothRoutes) {
  for (std::uint32_t n = 2; n <= 120; ++n)
    for (const auto& db : enumerate_Nnon(n)) {
      EXPECT_TRUE(in_Mnon_by_star(db)) << n;
      EXPECT_TRUE(in_Mnon_by_group(db)) << n;
    }
}

TEST(Reduction, Examples) {
  const DeltaBar db = deltabar_nx(14, 4);
  EXPECT_EQ(reduction(db, 14), db);
  const DeltaBar iota12 = deltabar_of_delta(12, Perm::identity(12));
  EXPECT_EQ(reduction(iota12, 4), deltabar_of_delta(4, Perm::identity(4)));
  for (std::uint32_t m : {2u, 3u, 6u}) EXPECT_EQ(reduction(iota12, m), deltabar_of_delta(m, Perm::identity(m)));
}

TEST(Reduction, CongruenceViolation) {
  // delta = (1 2) on [8]: deltabar(1) = 7 and deltabar(7) = 2 disagree mod 2
  const DeltaBar db = deltabar_of_delta(8, Perm::from_cycles(8, {{1, 2}}));
  EXPECT_EQ(db(1), 7u);
  EXPECT_EQ(db(7), 2u);
  EXPECT_THROW(reduction(db, 2), CongruenceError);
  EXPECT_THROW(reduction(db, 3), DomainError);
  EXPECT_THROW(reduction(db, 1), DomainError);
}

TEST(Reduction, FamilyReducesModItsOrderOnlyTrivially) {
  // members of the family have order n, so the reduction is the identity transcription
  for (std::uint32_t n : {14u, 34u, 62u})
    for (const auto& db : enumerate_Nnon(n)) {
      EXPECT_EQ(db.order(), n);
      EXPECT_EQ(reduction(db, static_cast<std::uint32_t>(db.order())), db);
    }
}

TEST(LinearFamily, Examples) {
  struct Case {
    std::uint32_t n, d;
    std::uint64_t r;
    bool skew;
  };
  for (const auto& c : {Case{5, 1, 5, true}, Case{9, 3, 1, false}, Case{9, 3, 2, false}, Case{8, 2, 1, true}}) {
    const DeltaBar db = linear_family(c.n, c.d, c.r);
    EXPECT_EQ(db.skew(), c.skew);
    EXPECT_EQ(db.order(), c.d);
    const auto [R, L] = build_R_L(db);
    const auto g = close_group({R, L}, nonorientable_order(c.n) + 1);
    EXPECT_TRUE(g.complete());
    EXPECT_EQ(g.size(), 2u * c.n * c.n);
    EXPECT_FALSE(g.contains(transversal(c.n)));
    EXPECT_TRUE(is_orientable(rotary_map(R, L, nonorientable_order(c.n))));
  }
  EXPECT_EQ(linear_family(9, 3, 1).perm(), from_list({0, 4, 8, 3, 7, 2, 6, 1, 5}));
  EXPECT_THROW(linear_family(9, 3, 3), DomainError);  // multiplier 10 = 1 has order 1
  EXPECT_THROW(linear_family(9, 2, 1), DomainError);
}

TEST(DerivedMap, N14) {
  const auto dm = derived_map(canonical_triple(14, delta_of_deltabar(deltabar_nx(14, 4))));
  EXPECT_EQ(dm.group_order, 784u);
  EXPECT_EQ(dm.map.flag_count(), 784u);
  EXPECT_TRUE(is_regular(dm.map));
  EXPECT_FALSE(is_orientable(dm.map));
}

TEST(DerivedMap, StandardOrientableN5) {
  const auto dm = derived_map(canonical_triple(5, negation(5)));
  EXPECT_EQ(dm.map.flag_count(), 100u);
  EXPECT_TRUE(is_regular(dm.map));
  EXPECT_TRUE(is_orientable(dm.map));
}

TEST(DerivedMap, GoldenFailures) {
  try {
    derived_map(canonical_triple(4, Perm::from_cycles(4, {{1, 2}})));
    ADD_FAILURE() << "expected rejection";
  } catch (const NotAdmissibleError& e) {
    EXPECT_EQ(e.condition(), AdmissibilityCondition::VertexStabilizer);
  }
  // delta = identity gives deltabar = negation, of order 2 on [5]: <r, t> has order 20
  try {
    derived_map(canonical_triple(5, Perm::identity(5)));
    ADD_FAILURE() << "expected rejection";
  } catch (const NotAdmissibleError& e) {
    EXPECT_EQ(e.condition(), AdmissibilityCondition::VertexStabilizer);
  }
  const Perm id4 = Perm::identity(4);
  Triple bad{2, id4, id4, id4};
  EXPECT_THROW(derived_map(bad), NotAdmissibleError);
}

TEST(DerivedMap, FlagsAreGroupElementsInBfsOrder) {
  const Triple tr = canonical_triple(6, negation(6));
  const auto dm = derived_map(tr);
  const auto g = close_group({tr.ell, tr.r, tr.t}, 4 * 36 + 1);
  ASSERT_EQ(g.size(), dm.map.flag_count());
  for (std::size_t f = 0; f < g.size(); ++f) {
    EXPECT_EQ(g.element(dm.map.lambda()(static_cast<point_t>(f))), g.element(f) * tr.ell);
    EXPECT_EQ(g.element(dm.map.rho()(static_cast<point_t>(f))), g.element(f) * tr.r);
    EXPECT_EQ(g.element(dm.map.tau()(static_cast<point_t>(f))), g.element(f) * tr.t);
  }
}

TEST(DerivedMap, AgreesWithGroupRouteExhaustively) {
  for (std::uint32_t n = 3; n <= 8; ++n)
    classify::for_each_involution(n, [&](const Perm& delta) {
      bool nonorientable = false;
      try {
        const auto dm = derived_map(canonical_triple(n, delta));
        EXPECT_TRUE(is_regular(dm.map));
        nonorientable = !is_orientable(dm.map);
      } catch (const NotAdmissibleError&) {
      } catch (const OverflowError&) {
      }
      EXPECT_EQ(nonorientable, in_Mnon_by_group(deltabar_of_delta(n, delta)));
    });
}

TEST(DerivedMap, IsomorphicOnlyInTheShiftedCase) {
  // Distinct admissible delta give isomorphic maps only if n is even and
  // delta2(k) = delta1(k + n/2) + n/2. Over n <= 10 neither happens.
  for (std::uint32_t n = 3; n <= 10; ++n) {
    std::vector<std::pair<Perm, FlagMap>> adm;
    classify::for_each_involution(n, [&](const Perm& delta) {
      try {
        adm.emplace_back(delta, derived_map(canonical_triple(n, delta)).map);
      } catch (const Error&) {
      }
    });
    std::size_t shifted = 0, iso = 0;
    for (std::size_t i = 0; i < adm.size(); ++i)
      for (std::size_t j = i + 1; j < adm.size(); ++j) {
        bool shift = n % 2 == 0;
        for (point_t k = 0; shift && k < n; ++k)
          shift = adm[j].first(k) == add(n, adm[i].first(add(n, k, n / 2)), n / 2);
        const bool same = isomorphic(adm[i].second, adm[j].second);
        if (same) {
          EXPECT_TRUE(shift) << n;
        }
        shifted += shift;
        iso += same;
      }
    EXPECT_EQ(iso, 0u) << n;
    EXPECT_EQ(shifted, 0u) << n;
  }
}

TEST(RotaryMap, ShapeOfTheOrientableSide) {
  for (const auto& db : {linear_family(9, 3, 1), linear_family(8, 2, 1), DeltaBar::make(Perm::identity(7))}) {
    const auto [R, L] = build_R_L(db);
    const FlagMap m = rotary_map(R, L, 10000);
    const auto inv = invariants(m);
    EXPECT_EQ(m.flag_count(), 4u * db.n() * db.n());
    EXPECT_TRUE(inv.orientable);
    EXPECT_EQ(inv.vertices, 2u * db.n());
    EXPECT_EQ(inv.edges, std::uint64_t{db.n()} * db.n());
    EXPECT_EQ(inv.valency, db.n());
  }
  const auto [R, L] = build_R_L(linear_family(9, 3, 1));
  EXPECT_THROW(rotary_map(R, L, 100), OverflowError);
}
