#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hirschfa/errors.hpp"
#include "hirschfa/report.hpp"
#include "hirschfa/table.hpp"

using namespace hirschfa;
using namespace hirschfa::report;

TEST_CASE("long citation format") {
  std::istringstream in("scientist,citations\nann,3\nbob,7\nann,10\nann,8\nann,5\nann,4\n");
  const auto recs = parse_citations(in, CitationFormat::long_format);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].label == "ann");
  CHECK(recs[0].counts == std::vector<std::int64_t>{10, 8, 5, 4, 3});
  CHECK(recs[1].counts == std::vector<std::int64_t>{7});

  std::istringstream typo("scientist,citation\nann,3\n");
  CHECK_THROWS_AS(parse_citations(typo, CitationFormat::long_format), ValidationError);
  std::istringstream neg("scientist,citations\nann,-3\n");
  CHECK_THROWS_WITH_AS(parse_citations(neg, CitationFormat::long_format), doctest::Contains("line 2"),
                       ValidationError);
  std::istringstream text("scientist,citations\nann,x\n");
  CHECK_THROWS_AS(parse_citations(text, CitationFormat::long_format), ValidationError);
}

TEST_CASE("wide citation format") {
  std::istringstream in("ann,10,8,5,4,3\nbob,7\ncy\n");
  const auto recs = parse_citations(in, CitationFormat::wide_format);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].counts.size() == 5);
  CHECK(recs[2].counts.empty());
  std::istringstream dup("ann,1\nann,2\n");
  CHECK_THROWS_WITH_AS(parse_citations(dup, CitationFormat::wide_format), doctest::Contains("line 2"),
                       ValidationError);
}

TEST_CASE("indicator table from records") {
  std::istringstream in("ann,10,8,5,4,3\n");
  const auto t = indicator_table(parse_citations(in, CitationFormat::wide_format));
  CHECK(t.at(0, "h") == 4);
  CHECK(t.at(0, "h2") == 2);
  CHECK(t.at(0, "g") == 5);
  CHECK(t.at(0, "A") == doctest::Approx(6.75));
  CHECK(t.at(0, "m") == doctest::Approx(6.5));
  CHECK(t.at(0, "R") == doctest::Approx(5.196).epsilon(1e-3));
  CHECK(t.at(0, "hw") == doctest::Approx(4.243).epsilon(1e-3));
  CHECK(t.at(0, "N") == 5);
  CHECK(t.at(0, "S") == 30);
  CHECK(t.at(0, "C") == doctest::Approx(6.0));
}

TEST_CASE("indicator csv round trip and checksum") {
  const auto& f = fixture();
  CHECK(f.rows() == 26);
  CHECK(f.cols() == 10);
  CHECK(table_checksum(f) == kFixtureChecksum);
  const auto again = parse_indicator_table(to_csv(f));
  CHECK(again == f);
  CHECK(table_checksum(again) == kFixtureChecksum);

  auto tweaked = f;
  tweaked.at(0, "h") += 1.0;
  CHECK(table_checksum(tweaked) != kFixtureChecksum);

  CHECK_THROWS_AS(parse_indicator_table("scientist,hh\nA,3\n"), ValidationError);
  CHECK_THROWS_AS(parse_indicator_table("scientist,h\nA,3\nA,4\n"), ValidationError);
  CHECK_THROWS_AS(parse_indicator_table("scientist,h\nA,x\n"), ValidationError);
  CHECK(parse_indicator_table("scientist,h(2)\nA,3\n").columns()[0] == "h2");
}

TEST_CASE("variable sets") {
  CHECK(variable_set("7") == kCoreIndicators);
  CHECK(variable_set("7+NS").size() == 9);
  CHECK(variable_set("7+NSC").back() == "C");
  CHECK(variable_set("h,g,N") == std::vector<std::string>{"h", "g", "N"});
  CHECK_THROWS_AS(variable_set("h,zz"), ValidationError);
}

TEST_CASE("half-even rounding") {
  CHECK(format_fixed(0.125, 2) == "0.12");
  CHECK(format_fixed(0.375, 2) == "0.38");
  CHECK(format_fixed(2.5, 0) == "2");
  CHECK(format_fixed(3.5, 0) == "4");
  CHECK(format_fixed(-0.125, 2) == "-0.12");
  CHECK(round_half_even(1.005, 2) == doctest::Approx(1.0));
}

TEST_CASE("verify on the fixture") {
  const auto rep = verify();
  CHECK(rep.binding_checks > 500);
  int counted = 0;
  for (const auto& c : rep.checks) {
    if (c.binding) ++counted;
    CHECK(c.criterion >= 1);
    CHECK(c.criterion <= 13);
  }
  CHECK(counted == rep.binding_checks);
  // criteria tied to the tables with exact agreement stay green
  for (int crit : {2, 4, 5, 6, 7, 9}) {
    CAPTURE(crit);
    for (const auto& c : rep.for_criterion(crit)) {
      if (c.binding) CHECK(c.pass);
    }
  }
}

TEST_CASE("verify catches a perturbed fixture cell") {
  auto t = fixture();
  t.at(0, "h") = 20.0;
  VerifyOptions o;
  o.table = t;
  const auto rep = verify(o);
  CHECK_FALSE(rep.pass);
  bool descriptive_hit = false;
  for (const auto& c : rep.for_criterion(2)) descriptive_hit |= !c.pass;
  CHECK(descriptive_hit);
}

TEST_CASE("zero tolerance exposes rounded cells") {
  VerifyOptions o;
  o.tolerance = 0.0;
  const auto rep = verify(o);
  CHECK(rep.binding_failures > verify().binding_failures);
}
