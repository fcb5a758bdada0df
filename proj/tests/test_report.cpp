#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "dlcensus/report.hpp"

using namespace dlc;
using C = ConditionClass;

namespace {

struct Fixture {
  ResidueTables tables;
  Census census;
  PrimeContext ctx;
  ClassCounts counts;

  explicit Fixture(u64 p)
      : tables(build_tables(p)), census(census_all(tables)), ctx(make_prime_context(p)),
        counts(class_counts(tables)) {}

  const CountMatrix& of(Equation e) const {
    return e == Equation::FP ? census.fp : e == Equation::HA ? census.ha : census.tc;
  }
  ComparisonReport report(Equation e) const { return compare(of(e), predict_matrix(e, ctx), counts); }
};

const Fixture& reference() {
  static const Fixture f(100057);
  return f;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dlcensus_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST(Compare, FpCellAtReferencePrime) {
  const auto rep = reference().report(Equation::FP);
  const auto* cell = rep.find("ANY", "ANY", Part::Total);
  ASSERT_NE(cell, nullptr);
  EXPECT_EQ(cell->observed, 98506u);
  EXPECT_EQ(*cell->predicted, Rational(100056));
  EXPECT_EQ(to_decimal(*cell->ratio, 4), "0.9845");
  EXPECT_EQ(rep.cells.size(), 16u);
  EXPECT_TRUE(rep.all_claims_pass());
}

TEST(Compare, HaCellAtReferencePrime) {
  const auto rep = reference().report(Equation::HA);
  const auto* cell = rep.find("ANY", "ANY", Part::Nontrivial);
  ASSERT_NE(cell, nullptr);
  EXPECT_EQ(cell->observed, 190526u);
  EXPECT_EQ(to_decimal(*cell->predicted, 1), "190822.0");
  EXPECT_EQ(to_decimal(*cell->ratio, 4), "0.9984");
  // Total prediction adds the exact diagonal count p-1.
  const auto* total = rep.find("ANY", "ANY", Part::Total);
  EXPECT_EQ(*total->predicted, *cell->predicted + 100056);
  EXPECT_EQ(total->observed, 190526u + 100056u);
  EXPECT_FALSE(rep.find("ANY", "ANY", Part::Trivial)->predicted.has_value());
  EXPECT_TRUE(rep.all_claims_pass());
}

TEST(Compare, TcOrdRowAtReferencePrime) {
  const auto rep = reference().report(Equation::TC);
  const auto* ord = rep.find("ORD", "ANY", Part::Nontrivial);
  ASSERT_NE(ord, nullptr);
  EXPECT_EQ(ord->observed, 30291u);
  EXPECT_EQ(*ord->predicted, Rational(30240));
  EXPECT_EQ(rep.find("ORD", "RP", Part::Nontrivial)->observed, 9086u);
  EXPECT_EQ(rep.find("ORD", "ANY", Part::Trivial)->observed, 30240u);
  EXPECT_FALSE(rep.find("SAMEORD", "ANY", Part::Nontrivial)->predicted.has_value());
  EXPECT_TRUE(rep.all_claims_pass());
}

TEST(Compare, AllClaimsPassOnSmallPrimes) {
  for (u64 p : {2u, 3u, 5u, 101u, 307u}) {
    const Fixture f(p);
    for (auto e : {Equation::FP, Equation::HA, Equation::TC}) {
      const auto rep = f.report(e);
      EXPECT_TRUE(rep.all_claims_pass()) << p << " " << equation_name(e);
    }
    for (const auto& c : cross_claims(f.census.fp, f.census.ha, f.census.tc)) EXPECT_TRUE(c.pass()) << c.name;
  }
}

TEST(Compare, FailedClaimCarriesBothValues) {
  auto fp = reference().census.fp;
  fp.total[idx(C::Any)][idx(C::RP)] += 1;
  fp.nontrivial[idx(C::Any)][idx(C::RP)] += 1;
  const auto rep = compare(fp, predict_matrix(Equation::FP, reference().ctx), reference().counts);
  EXPECT_FALSE(rep.all_claims_pass());
  bool found = false;
  for (const auto& c : rep.claims)
    if (c.name == "fp(ANY,RP) = phi(p-1)") {
      found = true;
      EXPECT_FALSE(c.pass());
      EXPECT_EQ(c.lhs, 30241u);
      EXPECT_EQ(c.rhs, 30240u);
    }
  EXPECT_TRUE(found);
}

TEST(Compare, RejectsMismatchedInputs) {
  const auto& f = reference();
  EXPECT_THROW(compare(f.census.fp, predict_matrix(Equation::HA, f.ctx), f.counts), InputError);
  EXPECT_THROW(compare(f.census.fp, predict_matrix(Equation::FP, make_prime_context(101)), f.counts),
               InputError);
}

TEST(Compare, IsPure) {
  EXPECT_EQ(reference().report(Equation::TC), reference().report(Equation::TC));
}

TEST(CrossClaims, CompletionLawAtReferencePrime) {
  const auto& f = reference();
  const auto law = completion_law(build_ha_buckets(f.tables), f.tables);
  for (const auto& c : completion_claims(law, f.census.tc)) EXPECT_TRUE(c.pass()) << c.name;
  EXPECT_GT(law.pairs_with_multiple, 0u);
}

TEST(Render, TextShowsTableCells) {
  const auto text = render(reference().report(Equation::FP), Format::Text);
  EXPECT_NE(text.find("30240"), std::string::npos);
  EXPECT_NE(text.find("g \\ h"), std::string::npos);
  EXPECT_NE(text.find("9139.458"), std::string::npos);
  EXPECT_EQ(text.find("[FAIL]"), std::string::npos);

  const auto ha = render(reference().report(Equation::HA), Format::Text, {1});
  EXPECT_NE(ha.find("a \\ h"), std::string::npos);
  EXPECT_NE(ha.find("190822.0"), std::string::npos);
}

TEST(Render, CsvSchema) {
  const auto csv = render(reference().report(Equation::FP), Format::Csv);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kCsvHeader);
  std::size_t rows = 0;
  bool saw = false;
  while (std::getline(is, line)) {
    const auto f = split(line, ',');
    ASSERT_EQ(f.size(), 9u) << line;
    if (f[2] == "ANY" && f[3] == "RP") {
      saw = true;
      EXPECT_EQ(f[5], "30240");
      EXPECT_EQ(f[6], "30240");
      EXPECT_EQ(f[7], "1");
      EXPECT_EQ(f[8], "1.000");
    }
    ++rows;
  }
  EXPECT_EQ(rows, 16u);
  EXPECT_TRUE(saw);
}

TEST(Render, CsvAndJsonCarryTheSameNumbers) {
  for (auto e : {Equation::FP, Equation::HA, Equation::TC}) {
    const auto rep = reference().report(e);
    const auto j = nlohmann::json::parse(render(rep, Format::Json));
    EXPECT_EQ(j["p"], 100057u);
    std::istringstream is(render(rep, Format::Csv));
    std::string line;
    std::getline(is, line);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
      const auto f = split(line, ',');
      const auto& cell = j["matrices"][f[4]][f[2]][f[3]];
      ASSERT_FALSE(cell.is_null()) << line;
      EXPECT_EQ(std::to_string(cell["observed"].get<u64>()), f[5]);
      EXPECT_EQ(cell["predicted_num"].is_null() ? "" : cell["predicted_num"].get<std::string>(), f[6]);
      EXPECT_EQ(cell["predicted_den"].is_null() ? "" : cell["predicted_den"].get<std::string>(), f[7]);
      EXPECT_EQ(cell["ratio"].is_null() ? "" : cell["ratio"].get<std::string>(), f[8]);
      ++rows;
    }
    EXPECT_EQ(rows, rep.cells.size());
  }
}

TEST(Render, CountsJsonIsKeyedByClass) {
  const auto j = counts_json(reference().census.tc);
  EXPECT_EQ(j["nontrivial"]["ANY"]["ANY"], 100860u);
  EXPECT_EQ(j["nontrivial"]["RPPR"]["RPPR"], 916u);
  EXPECT_EQ(j["ord"]["nontrivial"]["ANY"], 30291u);
}

TEST(Records, RoundTripFromReport) {
  const auto path = temp_file("roundtrip");
  const auto records = records_from_report(reference().report(Equation::TC), "2026-01-01T00:00:00Z");
  append_records(path, records);
  EXPECT_EQ(read_records(path), records);
  append_records(path, records);
  EXPECT_EQ(read_records(path).size(), 2 * records.size());
  std::filesystem::remove(path);
}

TEST(Records, RandomRecordsRoundTrip) {
  std::mt19937_64 rng(20021);
  const auto path = temp_file("random");
  std::vector<ResultRecord> written;
  const std::array<const char*, 3> eqs = {"fp", "ha", "tc"};
  const std::array<const char*, 6> rows = {"ANY", "PR", "RP", "RPPR", "ORD", "SAMEORD"};
  for (int i = 0; i < 200; ++i) {
    ResultRecord r;
    r.p = rng() >> 1;
    r.equation = eqs[rng() % 3];
    r.part = std::string(part_name(static_cast<Part>(rng() % 3)));
    r.row_class = rows[rng() % rows.size()];
    r.col_class = rows[rng() % 4];
    r.observed = rng();
    if (rng() % 3) {
      r.predicted_num = std::to_string(rng()) + std::to_string(rng());
      r.predicted_den = std::to_string(rng() | 1);
    }
    r.timestamp = "2026-10-14T12:00:" + std::to_string(10 + i % 50) + "Z";
    written.push_back(r);
  }
  append_records(path, written);
  EXPECT_EQ(read_records(path), written);
  std::filesystem::remove(path);
}

TEST(Records, EmptyFileReadsAsEmpty) {
  const auto path = temp_file("empty");
  std::ofstream(path).close();
  EXPECT_TRUE(read_records(path).empty());
  std::filesystem::remove(path);
}

TEST(Records, MalformedLineIsNamed) {
  const auto path = temp_file("malformed");
  ResultRecord r;
  r.p = 7;
  r.equation = "fp";
  r.part = "total";
  r.row_class = "ANY";
  r.col_class = "ANY";
  r.observed = 6;
  r.timestamp = "t";
  append_records(path, {r, r});
  {
    std::ofstream out(path, std::ios::app);
    out << "{not json\n";
  }
  try {
    read_records(path);
    FAIL() << "expected RecordError";
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(Records, UnknownSchemaVersionRejected) {
  const auto path = temp_file("schema");
  {
    std::ofstream out(path);
    out << R"({"schema_version":2,"p":7,"equation":"fp","part":"total","row_class":"ANY",)"
        << R"("col_class":"ANY","observed":6,"predicted_num":null,"predicted_den":null,"timestamp":"t"})"
        << "\n";
  }
  EXPECT_THROW(read_records(path), RecordError);
  std::filesystem::remove(path);
}

TEST(Records, MissingFileIsAnInputError) {
  EXPECT_THROW(read_records("/nonexistent/dir/records.jsonl"), InputError);
  EXPECT_THROW(append_records("/nonexistent/dir/records.jsonl", {}), InputError);
}
