#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hirschfa/errors.hpp"
#include "hirschfa/indices.hpp"
#include "oracles.hpp"

using namespace hirschfa;
using namespace hirschfa::indices;

namespace {

CitationRecord rec(std::vector<std::int64_t> c) { return normalize_record("x", c); }

}  // namespace

TEST_CASE("h-type indices on small records") {
  const auto r = rec({10, 8, 5, 4, 3});
  CHECK(h_index(r) == 4);
  CHECK(h2_index(r) == 2);
  CHECK(g_index(r) == 5);
  CHECK(a_index(r) == doctest::Approx(6.75));
  CHECK(m_index(r) == doctest::Approx(6.5));
  CHECK(r_index(r) == doctest::Approx(std::sqrt(27.0)));
  CHECK(hw_index(r) == doctest::Approx(std::sqrt(18.0)));
  const auto t = totals(r);
  CHECK(t.N == 5);
  CHECK(t.S == 30);
  CHECK(t.C == doctest::Approx(6.0));
}

TEST_CASE("g convention") {
  const auto r = rec({25});
  CHECK(g_index(r, GIndexConvention::padded) == 5);
  CHECK(g_index(r, GIndexConvention::capped) == 1);
}

TEST_CASE("weighted h") {
  CHECK(hw_index(rec({5, 5, 5, 4})) == doctest::Approx(std::sqrt(15.0)));
  CHECK(hw_index(rec({7})) == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("interpolated indices") {
  CHECK(interpolated_set(rec({6, 5, 4, 2})).h_tilde == doctest::Approx(10.0 / 3.0));
  CHECK(interpolated_set(rec({5, 4, 3})).h_tilde == doctest::Approx(3.0));
  CHECK(interpolated_set(rec({10, 8, 5, 4, 3})).g_tilde == doctest::Approx(std::sqrt(30.0)));
}

TEST_CASE("empty core and bad input") {
  const auto zero = rec({0, 0});
  CHECK(h_index(zero) == 0);
  CHECK(r_index(zero) == 0.0);
  CHECK_THROWS_AS(a_index(zero), UndefinedCoreError);
  CHECK_THROWS_AS(m_index(zero), UndefinedCoreError);
  CHECK_THROWS_AS(hw_index(zero), UndefinedCoreError);
  CHECK_THROWS_AS(interpolated_set(zero), UndefinedCoreError);
  CHECK(indicator_set(zero).empty_core);
  CHECK_THROWS_AS(totals(rec({})), UndefinedCoreError);
  const std::vector<std::int64_t> bad{3, -1};
  CHECK_THROWS_AS(normalize_record("x", bad), ValidationError);
}

TEST_CASE("random records agree with brute-force oracles") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = oracle::random_record(rng);
    const auto r = rec(c);
    CAPTURE(trial);
    REQUIRE(h_index(r) == oracle::h(c));
    REQUIRE(h2_index(r) == oracle::h2(c));
    REQUIRE(g_index(r, GIndexConvention::padded) == oracle::g(c, false));
    REQUIRE(g_index(r, GIndexConvention::capped) == oracle::g(c, true));
    REQUIRE(oracle::g(c, false) == oracle::g_by_average(c));
    REQUIRE(r_index(r) == doctest::Approx(oracle::r(c)).epsilon(1e-12));
    if (oracle::h(c) == 0) continue;
    REQUIRE(std::abs(a_index(r) - oracle::a(c)) <= 1e-9);
    REQUIRE(std::abs(m_index(r) - oracle::m(c)) <= 1e-9);
    REQUIRE(std::abs(hw_index(r) - oracle::hw(c)) <= 1e-9);
    const auto it = interpolated_set(r);
    REQUIRE(std::abs(it.h_tilde - oracle::h_tilde(c)) <= 1e-9);
    REQUIRE(std::abs(it.h2_tilde - oracle::h2_tilde(c)) <= 1e-9);
    REQUIRE(std::abs(it.g_tilde - oracle::g_tilde(c)) <= 1e-9);
  }
}

TEST_CASE("ordering invariants") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = oracle::random_record(rng);
    const auto r = rec(c);
    const auto s = indicator_set(r);
    CHECK(s.h2 <= s.h);
    CHECK(s.h <= s.g);
    CHECK(g_index(r, GIndexConvention::capped) <= s.g);
    if (s.h == 0) continue;
    CHECK(s.A >= static_cast<double>(s.h));
    CHECK(s.R >= static_cast<double>(s.h));
    CHECK(std::abs(s.R - std::sqrt(s.A * static_cast<double>(s.h))) <= 1e-12 * s.R);
    const auto it = interpolated_set(r);
    CHECK(it.h_tilde >= static_cast<double>(s.h));
    CHECK(it.h_tilde < static_cast<double>(s.h + 1));
    CHECK(it.h2_tilde >= static_cast<double>(s.h2));
    CHECK(it.h2_tilde < static_cast<double>(s.h2 + 1));
    CHECK(it.g_tilde >= static_cast<double>(s.g));
    CHECK(it.g_tilde < static_cast<double>(s.g + 1));

    // input order does not matter
    std::shuffle(c.begin(), c.end(), rng);
    const auto s2 = indicator_set(rec(c));
    CHECK(s2.h == s.h);
    CHECK(s2.g == s.g);
    CHECK(s2.hw == s.hw);
    CHECK(s2.m == s.m);
  }
}
