#pragma once
//
// Command-line front end. dispatch() is the whole program minus main(), so
// tests can drive it in-process.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input, 3 invariant or exact-claim
// violation.
//

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlcensus/census.hpp"
#include "dlcensus/errors.hpp"
#include "dlcensus/numtheory.hpp"
#include "dlcensus/oracle.hpp"
#include "dlcensus/parallel.hpp"
#include "dlcensus/predictor.hpp"
#include "dlcensus/report.hpp"
#include "dlcensus/residue_tables.hpp"

namespace dlc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitViolation = 3;

inline constexpr u64 kPrimeLimit = u64{1} << 40;
inline constexpr const char* kThreadsEnv = "DLCENSUS_THREADS";

namespace detail {

inline unsigned env_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return default_workers();
}

inline void check_prime(u64 p) {
  if (p < 2 || p >= kPrimeLimit)
    throw InputError("prime " + std::to_string(p) + " out of range [2, 2^40)");
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
}

inline std::vector<Equation> equations(const std::string& name) {
  if (name == "all") return {Equation::FP, Equation::HA, Equation::TC};
  return {*parse_equation(name)};
}

inline const CountMatrix& pick(const Census& c, Equation e) {
  switch (e) {
    case Equation::FP: return c.fp;
    case Equation::HA: return c.ha;
    case Equation::TC: return c.tc;
  }
  return c.fp;
}

// Strips the header line from every CSV block but the first.
inline std::string join_csv(const std::vector<std::string>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i == 0) {
      out += blocks[i];
    } else {
      const auto nl = blocks[i].find('\n');
      out += blocks[i].substr(nl == std::string::npos ? blocks[i].size() : nl + 1);
    }
  }
  return out;
}

struct PrimeComparison {
  std::vector<ComparisonReport> reports;
  std::vector<ExactClaim> cross;
  bool ok = true;
};

inline PrimeComparison compare_prime(const ResidueTables& tables, const Census& census,
                                     const std::vector<Equation>& eqs) {
  PrimeComparison out;
  const auto ctx = make_prime_context(tables.p());
  const auto counts = class_counts(tables);
  for (auto e : eqs) {
    out.reports.push_back(compare(pick(census, e), predict_matrix(e, ctx), counts));
    out.ok = out.ok && out.reports.back().all_claims_pass();
  }
  if (eqs.size() == 3) {
    out.cross = cross_claims(census.fp, census.ha, census.tc);
    const auto law = completion_law(build_ha_buckets(tables), tables);
    for (auto& c : completion_claims(law, census.tc)) out.cross.push_back(std::move(c));
    for (const auto& c : out.cross) out.ok = out.ok && c.pass();
  }
  return out;
}

inline nlohmann::ordered_json claims_json(const std::vector<ExactClaim>& claims) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : claims)
    arr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass()}});
  return arr;
}

inline std::string render_comparison(const PrimeComparison& pc, Format fmt, const RenderOptions& opt) {
  std::vector<std::string> blocks;
  switch (fmt) {
    case Format::Json: {
      if (pc.reports.size() == 1 && pc.cross.empty()) return render(pc.reports[0], fmt, opt);
      nlohmann::ordered_json j;
      j["p"] = pc.reports.front().p;
      j["reports"] = nlohmann::ordered_json::array();
      for (const auto& r : pc.reports) j["reports"].push_back(report_json(r, opt));
      j["cross_claims"] = claims_json(pc.cross);
      return j.dump(2) + "\n";
    }
    case Format::Csv:
      for (const auto& r : pc.reports) blocks.push_back(render_csv(r, opt));
      return join_csv(blocks);
    case Format::Text: {
      std::string out;
      for (const auto& r : pc.reports) out += render_text(r, opt) + "\n";
      if (!pc.cross.empty()) {
        out += "cross-equation claims\n";
        for (const auto& c : pc.cross)
          out += std::string(c.pass() ? "  [ok]   " : "  [FAIL] ") + c.name + ": " +
                 std::to_string(c.lhs) + (c.pass() ? " = " : " != ") + std::to_string(c.rhs) + "\n";
      }
      return out;
    }
  }
  return {};
}

inline std::string failed_claim_summary(const PrimeComparison& pc) {
  auto describe = [](const ExactClaim& c) {
    return c.name + " (" + std::to_string(c.lhs) + " != " + std::to_string(c.rhs) + ")";
  };
  for (const auto& r : pc.reports)
    for (const auto& c : r.claims)
      if (!c.pass()) return describe(c);
  for (const auto& c : pc.cross)
    if (!c.pass()) return describe(c);
  return "none";
}

inline bool mismatch(const CountMatrix& a, const CountMatrix& b) { return !(a == b); }

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Census of discrete-logarithm fixed points and two-cycles modulo a prime", "dlcensus"};
  app.require_subcommand(1);

  const std::vector<std::string> eq_names = {"fp", "ha", "tc", "all"};
  const std::vector<std::string> fmt_names = {"text", "csv", "json"};

  u64 prime = 0;
  std::string equation = "all";
  std::string format = "text";
  unsigned threads = detail::env_threads();
  unsigned precision = 3;
  std::string out_path;
  u64 sweep_start = 100000;
  std::size_t sweep_count = 5;
  u64 max_prime = 311;
  u64 max_n = 2000;
  u64 max_q = 10000;

  auto add_prime = [&](CLI::App* sc) { sc->add_option("--prime", prime, "Prime modulus p")->required(); };
  auto add_eq = [&](CLI::App* sc) {
    sc->add_option("--equation", equation, "fp, ha, tc or all")->check(CLI::IsMember(eq_names));
  };
  auto add_fmt = [&](CLI::App* sc) {
    sc->add_option("--format", format, "text, csv or json")->check(CLI::IsMember(fmt_names));
  };
  auto add_threads = [&](CLI::App* sc) {
    sc->add_option("--threads", threads, "Worker threads (default: $" + std::string(kThreadsEnv) +
                                             " or hardware concurrency)")
        ->check(CLI::PositiveNumber);
  };
  auto add_precision = [&](CLI::App* sc) {
    sc->add_option("--precision", precision, "Fractional digits for decimals")->check(CLI::Range(0u, 30u));
  };

  auto* count = app.add_subcommand("count", "Exact solution counts");
  add_prime(count);
  add_eq(count);
  add_threads(count);
  add_fmt(count);

  auto* predict = app.add_subcommand("predict", "Predicted values, exact");
  add_prime(predict);
  add_eq(predict);
  add_fmt(predict);
  add_precision(predict);

  auto* cmp = app.add_subcommand("compare", "Observed against predicted, with exact claims");
  add_prime(cmp);
  add_eq(cmp);
  add_threads(cmp);
  add_fmt(cmp);
  add_precision(cmp);
  cmp->add_option("--out", out_path, "Append result records (JSONL) to FILE");

  auto* sweep = app.add_subcommand("sweep", "Compare every equation on consecutive primes");
  sweep->add_option("--start", sweep_start, "First candidate")->capture_default_str();
  sweep->add_option("--count", sweep_count, "Number of primes")->capture_default_str()->check(CLI::PositiveNumber);
  add_threads(sweep);
  sweep->add_option("--out", out_path, "Append result records (JSONL) to FILE")->required();

  auto* oracle_check = app.add_subcommand("oracle-check", "Census against brute force on small primes");
  oracle_check->add_option("--max-prime", max_prime, "Largest prime checked")
      ->capture_default_str()
      ->check(CLI::Range(u64{2}, oracle::kOracleLimit));

  auto* identities = app.add_subcommand("identities", "Exact identities between the predictor forms");
  identities->add_option("--max-n", max_n, "Check n = 1..N")->capture_default_str()->check(CLI::PositiveNumber);
  identities->add_option("--max-q", max_q, "Check primes q <= Q")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto fmt = *parse_format(format);
  const RenderOptions opt{precision};

  try {
    if (*count) {
      detail::check_prime(prime);
      const auto census = census_all(build_tables(prime), threads);
      const auto eqs = detail::equations(equation);
      if (fmt == Format::Json && eqs.size() > 1) {
        auto arr = nlohmann::ordered_json::array();
        for (auto e : eqs) arr.push_back(counts_json(detail::pick(census, e)));
        out << arr.dump(2) << "\n";
      } else {
        std::vector<std::string> blocks;
        for (auto e : eqs) blocks.push_back(render_counts(detail::pick(census, e), fmt));
        if (fmt == Format::Csv) {
          out << detail::join_csv(blocks);
        } else {
          for (const auto& b : blocks) out << b;
        }
      }
      return kExitOk;
    }

    if (*predict) {
      detail::check_prime(prime);
      const auto ctx = make_prime_context(prime);
      const auto eqs = detail::equations(equation);
      if (fmt == Format::Json && eqs.size() > 1) {
        auto arr = nlohmann::ordered_json::array();
        for (auto e : eqs) arr.push_back(nlohmann::ordered_json::parse(render_prediction(predict_matrix(e, ctx), fmt, opt)));
        out << arr.dump(2) << "\n";
      } else {
        std::vector<std::string> blocks;
        for (auto e : eqs) blocks.push_back(render_prediction(predict_matrix(e, ctx), fmt, opt));
        if (fmt == Format::Csv) {
          out << detail::join_csv(blocks);
        } else {
          for (const auto& b : blocks) out << b;
        }
      }
      return kExitOk;
    }

    if (*cmp) {
      detail::check_prime(prime);
      const auto tables = build_tables(prime);
      const auto census = census_all(tables, threads);
      const auto pc = detail::compare_prime(tables, census, detail::equations(equation));
      out << detail::render_comparison(pc, fmt, opt);
      if (!out_path.empty()) {
        const auto stamp = utc_timestamp();
        for (const auto& r : pc.reports) append_records(out_path, records_from_report(r, stamp));
      }
      if (!pc.ok) {
        err << "exact claim violated at p=" << prime << ": " << detail::failed_claim_summary(pc) << "\n";
        return kExitViolation;
      }
      return kExitOk;
    }

    if (*sweep) {
      const auto primes = next_primes(sweep_start, sweep_count);
      bool ok = true;
      const auto sweep_begin = std::chrono::steady_clock::now();
      for (u64 p : primes) {
        detail::check_prime(p);
        const auto t0 = std::chrono::steady_clock::now();
        const auto tables = build_tables(p);
        const auto census = census_all(tables, threads);
        const auto pc = detail::compare_prime(tables, census, detail::equations("all"));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto stamp = utc_timestamp();
        for (const auto& r : pc.reports) append_records(out_path, records_from_report(r, stamp));
        using C = ConditionClass;
        out << "p=" << p << " fp=" << census.fp.get(census.fp.total, C::Any, C::Any)
            << " ha=" << census.ha.get(census.ha.nontrivial, C::Any, C::Any)
            << " tc=" << census.tc.get(census.tc.nontrivial, C::Any, C::Any)
            << " claims=" << (pc.ok ? "ok" : "FAIL") << " seconds=" << std::fixed
            << std::setprecision(3) << secs << "\n";
        if (!pc.ok) {
          err << "exact claim violated at p=" << p << ": " << detail::failed_claim_summary(pc) << "\n";
          ok = false;
        }
      }
      const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_begin).count();
      out << "primes=" << primes.size() << " seconds=" << std::fixed << std::setprecision(3) << total
          << " records=" << out_path << "\n";
      return ok ? kExitOk : kExitViolation;
    }

    if (*oracle_check) {
      std::size_t checked = 0;
      for (u64 p = 2; p <= max_prime; ++p) {
        if (!is_prime(p)) continue;
        const auto census = census_all(build_tables(p), 1);
        const std::pair<const CountMatrix*, CountMatrix> pairs[] = {
            {&census.fp, oracle::oracle_fp(p)},
            {&census.ha, oracle::oracle_ha(p)},
            {&census.tc, oracle::oracle_tc(p)}};
        for (const auto& [fast, slow] : pairs) {
          if (detail::mismatch(*fast, slow)) {
            err << "oracle mismatch: equation " << equation_name(slow.equation) << " p=" << p << "\n";
            return kExitViolation;
          }
        }
        ++checked;
      }
      out << "oracle-check: census equals brute force for " << checked << " primes <= " << max_prime << "\n";
      return kExitOk;
    }

    if (*identities) {
      std::size_t checked_n = 0, squarefree_n = 0, checked_q = 0;
      for (u64 n = 1; n <= max_n; ++n) {
        const auto f = factorize(n);
        const auto sum = ha_sum_form(f);
        if (sum != ha_geneq_form(f) || sum != ha_geneq_closed_form(f)) {
          err << "identity violated: divisor-sum form vs prime-power form at n=" << n << "\n";
          return kExitViolation;
        }
        if (f.squarefree()) {
          if (sum != ha_squarefree_form(f)) {
            err << "identity violated: divisor-sum form vs squarefree product at n=" << n << "\n";
            return kExitViolation;
          }
          ++squarefree_n;
        }
        ++checked_n;
      }
      for (u64 q = 2; q <= max_q; ++q) {
        if (!is_prime(q)) continue;
        if (squarefree_factor_expanded(q) != squarefree_factor(q)) {
          err << "identity violated: per-prime factor at q=" << q << "\n";
          return kExitViolation;
        }
        ++checked_q;
      }
      out << "identities: " << checked_n << " n (" << squarefree_n << " squarefree), " << checked_q
          << " primes q, all exact\n";
      return kExitOk;
    }
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitViolation;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::overflow_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}

}  // namespace dlc::cli
