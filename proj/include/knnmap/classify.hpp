#pragma once

/**
 * @file classify.hpp
 * @brief Brute-force and constructive classification of nonorientable regular
 *        embeddings of K_{n,n}, and their comparison with the counting formula.
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "knnmap/embedding.hpp"
#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/knn.hpp"
#include "knnmap/numthy.hpp"
#include "knnmap/perm.hpp"

namespace knnmap::classify {

struct Config {
  std::uint32_t brute_limit = 14;         // largest n brute_force_Mnon accepts
  std::size_t closure_cap = 0;            // 0 means 4n^2 + 1
  unsigned workers = 1;
  std::uint32_t isomorphism_budget = 34;  // structural isomorphism / regularity checks up to this n
  std::uint32_t map_limit = 128;          // derived maps are built only up to this n
  bool order_filter = true;               // skip closures that cannot reach 4n^2
};

inline std::size_t effective_cap(const Config& cfg, std::uint32_t n) {
  return cfg.closure_cap != 0 ? cfg.closure_cap : knn::nonorientable_order(n) + 1;
}

/**
 * Calls visit(delta) for every involution of [n] fixing 0 (identity included),
 * in the order of recursive partial matchings on {1, ..., n-1}: the smallest
 * unmatched point is first left fixed, then paired with each larger point.
 */
inline void for_each_involution(std::uint32_t n, const std::function<void(const Perm&)>& visit) {
  if (n < 1) throw DomainError("for_each_involution: n must be positive");
  std::vector<point_t> img(n);
  std::vector<bool> done(n, false);
  for (point_t i = 0; i < n; ++i) img[i] = i;
  done[0] = true;

  std::function<void(point_t)> rec = [&](point_t from) {
    point_t p = from;
    while (p < n && done[p]) ++p;
    if (p == n) {
      visit(Perm(img, Perm::unchecked));
      return;
    }
    done[p] = true;
    rec(p + 1);
    for (point_t q = p + 1; q < n; ++q) {
      if (done[q]) continue;
      done[q] = true;
      img[p] = q;
      img[q] = p;
      rec(p + 1);
      img[p] = p;
      img[q] = q;
      done[q] = false;
    }
    done[p] = false;
  };
  rec(1);
}

/// Number of involutions of [n] fixing 0, i.e. of S_{n-1}.
inline std::uint64_t involution_count(std::uint32_t n) {
  std::uint64_t a = 1, b = 1;  // I(0), I(1)
  if (n <= 2) return 1;
  for (std::uint32_t m = 2; m < n; ++m) {
    const std::uint64_t c = b + (m - 1) * a;
    a = b;
    b = c;
  }
  return b;
}

/**
 * Necessary condition for membership: R fixes vertex 0, whose stabilizer in a
 * vertex-transitive group of order 4n^2 on 2n points has order 2n, so the
 * order of R (lcm of ord(deltabar) and n) must divide 2n.
 */
inline bool passes_order_filter(const knn::DeltaBar& db) {
  const std::uint64_t n = db.n();
  return (2 * n) % std::lcm(db.order(), n) == 0;
}

struct BruteForceStats {
  std::uint64_t candidates = 0;
  std::uint64_t skew = 0;
  std::uint64_t closures = 0;
};

/**
 * All deltabar in M^non_n, sorted by image array. Every involution delta fixing
 * 0 is tried and membership is decided by closing <R, L>.
 *
 * At n = 2 the normal form degenerates (t is the identity), so the search runs
 * over signed rotation systems instead and returns the unique deltabar of [2]
 * once per nonorientable regular class found.
 */
inline std::vector<knn::DeltaBar> brute_force_Mnon(std::uint32_t n, const Config& cfg = {},
                                                   BruteForceStats* stats = nullptr) {
  if (n < 2) throw DomainError("brute_force_Mnon: n must be at least 2");
  if (n > cfg.brute_limit)
    throw BudgetExceeded("brute_force_Mnon: n = " + std::to_string(n) + " exceeds the limit " +
                         std::to_string(cfg.brute_limit));
  if (n == 2) {
    const auto classes = embedding::nonorientable_regular_embeddings(2);
    if (stats) *stats = {1, 1, 0};
    return std::vector<knn::DeltaBar>(classes.size(), knn::DeltaBar::make(Perm::identity(2)));
  }

  const unsigned workers = std::max(1u, cfg.workers);
  const std::size_t cap = effective_cap(cfg, n);
  std::vector<std::vector<knn::DeltaBar>> found(workers);
  std::vector<BruteForceStats> local(workers);

  auto shard = [&](unsigned w) {
    std::uint64_t index = 0;
    for_each_involution(n, [&](const Perm& delta) {
      if (index++ % workers != w) return;
      ++local[w].candidates;
      const auto db = knn::DeltaBar::rotation(compose(delta, knn::negation(n)));
      if (!db.skew()) return;
      ++local[w].skew;
      if (cfg.order_filter && !passes_order_filter(db)) return;
      ++local[w].closures;
      if (knn::in_Mnon_by_group(db, cap)) found[w].push_back(db);
    });
  };

  if (workers == 1) {
    shard(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(shard, w);
    for (auto& th : pool) th.join();
  }

  std::vector<knn::DeltaBar> out;
  BruteForceStats total;
  for (unsigned w = 0; w < workers; ++w) {
    out.insert(out.end(), found[w].begin(), found[w].end());
    total.candidates += local[w].candidates;
    total.skew += local[w].skew;
    total.closures += local[w].closures;
  }
  std::sort(out.begin(), out.end());
  if (stats) *stats = total;
  return out;
}

enum class Source { Constructive, BruteForce, Both };

inline const char* to_string(Source s) {
  switch (s) {
    case Source::Constructive: return "constructive";
    case Source::BruteForce: return "brute_force";
    case Source::Both: return "both";
  }
  return "unknown";
}

struct EmbeddingRecord {
  std::uint32_t n = 0;
  std::optional<std::uint32_t> x;  // empty for K_{2,2}
  std::uint64_t group_order = 0;
  std::optional<MapInvariants> invariants;  // empty above Config::map_limit
  std::uint32_t class_id = 0;
  Source source = Source::Constructive;
  std::optional<FlagMap> map;
  knn::DeltaBar deltabar = knn::DeltaBar::make(Perm::identity(2));
};

/**
 * One record per member of N^non_n (plus the projective K_{2,2} at n = 2),
 * ordered by x. Classes are distinct by parameter; when n is within the
 * isomorphism budget this is confirmed structurally and any coincidence merges
 * the class ids.
 */
inline std::vector<EmbeddingRecord> classify_constructive(std::uint32_t n, const Config& cfg = {}) {
  if (n < 2) throw DomainError("classify_constructive: n must be at least 2");
  std::vector<EmbeddingRecord> out;
  if (n == 2) {
    EmbeddingRecord rec;
    rec.n = 2;
    rec.group_order = knn::nonorientable_order(2);
    rec.map = embedding::projective_k22();
    rec.invariants = knnmap::invariants(*rec.map);
    rec.deltabar = knn::DeltaBar::make(Perm::identity(2));
    out.push_back(std::move(rec));
    return out;
  }
  for (const auto& db : knn::enumerate_Nnon(n)) {
    EmbeddingRecord rec;
    rec.n = n;
    rec.x = knn::family_parameter(db);
    rec.group_order = knn::nonorientable_order(n);
    rec.deltabar = db;
    if (n <= cfg.map_limit) {
      auto dm = knn::derived_map(knn::canonical_triple(n, knn::delta_of_deltabar(db)));
      rec.group_order = dm.group_order;
      rec.invariants = knnmap::invariants(dm.map);
      rec.map = std::move(dm.map);
    }
    rec.class_id = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(rec));
  }
  if (n <= cfg.isomorphism_budget && n <= cfg.map_limit) {
    for (std::size_t j = 1; j < out.size(); ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (isomorphic(*out[i].map, *out[j].map)) {
          out[j].class_id = out[i].class_id;
          break;
        }
  }
  return out;
}

inline std::size_t class_count(const std::vector<EmbeddingRecord>& recs) {
  std::vector<std::uint32_t> ids;
  for (const auto& r : recs) ids.push_back(r.class_id);
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

struct VerificationReport {
  std::uint32_t n = 0;
  std::uint64_t predicted = 0;
  std::uint64_t constructive_count = 0;
  std::optional<std::uint64_t> brute_count;
  bool agreement = false;
  std::chrono::milliseconds wall_time{0};
  std::vector<std::string> notes;
};

/**
 * Per-n comparison of the counting formula, the constructive family and (for
 * n <= brute_max) exhaustive search. Agreement additionally requires the
 * brute-force set of deltabar to coincide with the constructive one.
 */
inline VerificationReport verify_one(std::uint32_t n, std::uint32_t brute_max, const Config& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.n = n;
  rep.predicted = numthy::predicted_count(n);
  const auto recs = classify_constructive(n, cfg);
  rep.constructive_count = class_count(recs);
  rep.agreement = rep.predicted == rep.constructive_count;
  if (rep.constructive_count != recs.size()) rep.notes.push_back("constructive records collapse under isomorphism");

  for (const auto& r : recs) {
    if (!r.invariants) continue;
    if (r.invariants->orientable) {
      rep.agreement = false;
      rep.notes.push_back("constructive record is orientable");
    }
    if (r.map && n <= cfg.isomorphism_budget && !is_regular(*r.map)) {
      rep.agreement = false;
      rep.notes.push_back("constructive record is not regular");
    }
  }

  if (n <= brute_max) {
    Config bcfg = cfg;
    bcfg.brute_limit = std::max(bcfg.brute_limit, brute_max);
    BruteForceStats stats;
    const auto brute = brute_force_Mnon(n, bcfg, &stats);
    rep.brute_count = brute.size();
    std::vector<knn::DeltaBar> expected;
    for (const auto& r : recs) expected.push_back(r.deltabar);
    std::sort(expected.begin(), expected.end());
    if (brute != expected) {
      rep.agreement = false;
      rep.notes.push_back("brute-force set differs from the constructive set");
    }
    for (const auto& db : brute) {
      if (n < 3 || std::binary_search(expected.begin(), expected.end(), db)) continue;
      if (db.order() == 2) rep.notes.push_back("member of order 2 found");
      try {
        const auto reduced = knn::reduction(db, static_cast<std::uint32_t>(db.order()));
        if (!knn::in_Mnon_by_group(reduced)) rep.notes.push_back("reduction of an extra member leaves M^non");
      } catch (const Error& e) {
        rep.notes.push_back(std::string("reduction of an extra member failed: ") + e.what());
      }
    }
    rep.notes.push_back("candidates " + std::to_string(stats.candidates) + ", closures " +
                        std::to_string(stats.closures));
  }
  rep.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return rep;
}

inline std::vector<VerificationReport> verify_theorem(std::uint32_t n_low, std::uint32_t n_high,
                                                      std::uint32_t brute_max, const Config& cfg = {},
                                                      const std::function<void(const VerificationReport&)>& on_report = {}) {
  if (n_low < 2 || n_low > n_high) throw DomainError("verify_theorem: need 2 <= n_low <= n_high");
  std::vector<VerificationReport> out;
  for (std::uint32_t n = n_low; n <= n_high; ++n) {
    out.push_back(verify_one(n, brute_max, cfg));
    if (on_report) on_report(out.back());
  }
  return out;
}

inline bool all_agree(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.agreement; });
}

}  // namespace knnmap::classify
