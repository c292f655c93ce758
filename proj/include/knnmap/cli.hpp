#pragma once

/**
 * @file cli.hpp
 * @brief The knnmap command line, callable in-process for tests.
 *
 * Exit codes: 0 success, 1 mathematical disagreement, 2 usage or domain
 * error, 3 I/O error.
 */

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knnmap/classify.hpp"
#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/knn.hpp"
#include "knnmap/numthy.hpp"
#include "knnmap/serialize.hpp"

namespace knnmap::cli {

enum ExitCode : int { kOk = 0, kDisagreement = 1, kUsage = 2, kIo = 3 };

/// Worker count from KNNMAP_WORKERS, or 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("KNNMAP_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Why (n, x) does not name a member of N^non_n, or nullopt if it does.
inline std::optional<std::string> rejection_reason(std::uint64_t n, std::uint64_t x) {
  if (n < 2) return "n must be at least 2";
  if (n % 2 != 0) return "n is odd";
  if (x % 2 != 0) return "x is odd";
  if (!(x > 3 && x < n)) return "need n > x > 3";
  if (std::gcd(n, x) != 2) return "gcd(n, x) = " + std::to_string(std::gcd(n, x)) + ", not 2";
  const auto sq = numthy::mulmod(x, x, n);
  if (sq != 2 % n)
    return "x²≡2 fails: " + std::to_string(x) + "² ≡ " + std::to_string(sq) + " (mod " + std::to_string(n) + ")";
  return std::nullopt;
}

inline std::string record_filename(const classify::EmbeddingRecord& r) {
  return r.x ? "knn_" + std::to_string(r.n) + "_x" + std::to_string(*r.x) + ".json"
             : "knn_" + std::to_string(r.n) + ".json";
}

inline bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path.string() << " for writing\n";
    return false;
  }
  f << text;
  f.close();
  if (!f) {
    err << "error: failed writing " << path.string() << "\n";
    return false;
  }
  return true;
}

inline std::string text_line(const classify::VerificationReport& r) {
  std::ostringstream s;
  s << "n=" << r.n << " predicted=" << r.predicted << " constructive=" << r.constructive_count
    << " brute=" << (r.brute_count ? std::to_string(*r.brute_count) : "-") << (r.agreement ? " ok" : " MISMATCH");
  for (const auto& note : r.notes) s << " [" << note << "]";
  return s.str();
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Nonorientable regular embeddings of K_{n,n}", "knnmap"};
  app.require_subcommand(1);

  std::uint64_t n = 0, x = 0, low = 0, high = 0;
  std::uint32_t brute = 0;
  unsigned workers = default_workers();
  std::string format = "text", export_dir, out_path, in_path;
  bool timing = false;

  auto* count = app.add_subcommand("count", "Number of classes predicted by the counting formula");
  count->add_option("n", n, "Valency")->required();
  count->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* enumerate = app.add_subcommand("enumerate", "Constructive classification as a JSON array");
  enumerate->add_option("n", n)->required();
  enumerate->add_option("--export", export_dir, "Directory for one flag-map file per record");

  auto* verify = app.add_subcommand("verify", "Compare formula, construction and exhaustive search");
  verify->add_option("low", low)->required();
  verify->add_option("high", high)->required();
  verify->add_option("--brute", brute, "Run exhaustive search for n up to this bound");
  verify->add_option("--workers", workers)->check(CLI::PositiveNumber);
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--timing", timing, "Include wall time in JSON reports");

  auto* inv = app.add_subcommand("invariants", "Surface invariants of the map for deltabar_{n,x}");
  inv->add_option("n", n)->required();
  inv->add_option("x", x)->required();

  auto* exp = app.add_subcommand("export", "Write the flag map for (n, x) as JSON");
  exp->add_option("n", n)->required();
  exp->add_option("x", x, "Defaults to the smallest admissible x");
  exp->add_option("-o,--output", out_path);

  auto* val = app.add_subcommand("validate", "Reload a flag-map file and report its invariants");
  val->add_option("file", in_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*count) {
      if (n < 2) {
        err << "error: n must be at least 2\n";
        return kUsage;
      }
      if (format == "json")
        out << serialize::count_record(n).dump() << "\n";
      else
        out << numthy::predicted_count(n) << "\n";
      return kOk;
    }

    if (*enumerate) {
      if (n < 2 || n > UINT32_MAX) {
        err << "error: n must be at least 2\n";
        return kUsage;
      }
      classify::Config cfg;
      if (!export_dir.empty()) cfg.map_limit = std::max<std::uint32_t>(cfg.map_limit, static_cast<std::uint32_t>(n));
      const auto recs = classify::classify_constructive(static_cast<std::uint32_t>(n), cfg);
      serialize::json arr = serialize::json::array();
      for (const auto& r : recs) arr.push_back(serialize::to_json(r));
      if (!export_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(export_dir, ec);
        if (ec) {
          err << "error: cannot create " << export_dir << ": " << ec.message() << "\n";
          return kIo;
        }
        for (const auto& r : recs)
          if (!write_file(std::filesystem::path(export_dir) / record_filename(r),
                          serialize::to_json(*r.map).dump() + "\n", err))
            return kIo;
      }
      out << arr.dump(2) << "\n";
      return kOk;
    }

    if (*verify) {
      if (low < 2 || low > high || high > UINT32_MAX) {
        err << "error: need 2 <= low <= high\n";
        return kUsage;
      }
      classify::Config cfg;
      cfg.workers = workers;
      cfg.brute_limit = std::max(cfg.brute_limit, brute);
      std::vector<std::uint32_t> bad;
      classify::verify_theorem(static_cast<std::uint32_t>(low), static_cast<std::uint32_t>(high), brute, cfg,
                               [&](const classify::VerificationReport& r) {
                                 if (format == "json")
                                   out << serialize::to_json(r, timing).dump() << "\n";
                                 else
                                   out << text_line(r) << "\n";
                                 out.flush();
                                 if (!r.agreement) bad.push_back(r.n);
                               });
      if (!bad.empty()) {
        err << "disagreement at n =";
        for (auto b : bad) err << " " << b;
        err << "\n";
        return kDisagreement;
      }
      return kOk;
    }

    if (*inv || *exp) {
      if (*exp && exp->count("x") == 0) {
        if (n == 2) {
          x = 0;
        } else {
          const auto members = n >= 2 && n <= UINT32_MAX ? knn::enumerate_Nnon(static_cast<std::uint32_t>(n))
                                                         : std::vector<knn::DeltaBar>{};
          if (members.empty()) {
            err << "error: no nonorientable regular embedding of K_{" << n << "," << n << "}\n";
            return kUsage;
          }
          x = knn::family_parameter(members.front());
        }
      }
      FlagMap map = embedding::projective_k22();
      if (!(n == 2 && x == 0)) {
        if (const auto why = rejection_reason(n, x)) {
          err << "error: (" << n << ", " << x << ") rejected: " << *why << "\n";
          return kUsage;
        }
        const auto db = knn::deltabar_nx(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(x));
        map = knn::derived_map(knn::canonical_triple(db.n(), knn::delta_of_deltabar(db))).map;
      }
      if (*inv) {
        out << serialize::to_json(invariants(map)).dump(2) << "\n";
        return kOk;
      }
      const std::string text = serialize::to_json(map).dump() + "\n";
      if (out_path.empty()) {
        out << text;
        return kOk;
      }
      return write_file(out_path, text, err) ? kOk : kIo;
    }

    if (*val) {
      std::ifstream f(in_path, std::ios::binary);
      if (!f) {
        err << "error: cannot read " << in_path << "\n";
        return kIo;
      }
      std::stringstream buf;
      buf << f.rdbuf();
      const FlagMap map = serialize::flagmap_from_string(buf.str());
      auto j = serialize::to_json(invariants(map));
      j["regular"] = is_regular(map);
      out << j.dump(2) << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace knnmap::cli
