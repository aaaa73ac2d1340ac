#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "rom/markov.hpp"

using namespace rom;

TEST_CASE("generators are the 2^n sign patterns of H and are orthogonal") {
  const auto gens = hd_generators(2);
  REQUIRE(gens.size() == 4);
  std::set<GroupElement> distinct(gens.begin(), gens.end());
  CHECK(distinct.size() == 4);
  for (const auto& g : gens) CHECK(g.is_orthogonal());
}

TEST_CASE("state closure at n = 2 has 16 orthogonal elements") {
  const auto states = enumerate_states(2);
  CHECK(states.size() == 16);
  for (const auto& s : states) CHECK(s.is_orthogonal());

  // closure is a fixed point under one more generator application
  std::set<GroupElement> set(states.begin(), states.end());
  for (const auto& g : hd_generators(2))
    for (const auto& s : states) CHECK(set.count(group_multiply(g, s)) == 1);
}

TEST_CASE("closure cap is enforced") {
  CHECK_THROWS_AS((void)enumerate_states(2, 10), std::length_error);
}

TEST_CASE("exact distributions") {
  const auto d0 = exact_distribution(2, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0.begin()->first == GroupElement::identity(2));
  CHECK(d0.begin()->second == Rational{1, 1});

  const auto d1 = exact_distribution(2, 1);
  CHECK(d1.size() == 4);
  for (const auto& [g, p] : d1) CHECK(p == Rational{1, 4});

  const auto d3 = exact_distribution(2, 3);
  CHECK(d3.size() == 8);
  for (const auto& [g, p] : d3) CHECK(p == Rational{1, 8});

  // probabilities sum to one exactly at every step
  for (std::size_t steps = 0; steps <= 6; ++steps) {
    const auto d = exact_distribution(2, steps);
    // common denominator is the lcm; all dens are powers of two
    std::uint64_t lcm = 1;
    for (const auto& [g, p] : d) lcm = std::max(lcm, p.den);
    std::uint64_t total = 0;
    for (const auto& [g, p] : d) total += p.num * (lcm / p.den);
    CHECK(total == lcm);
  }
}

TEST_CASE("period two: steps 3 and 5 coincide, parity supports partition the space") {
  CHECK(exact_distribution(2, 3) == exact_distribution(2, 5));
  const auto d3 = exact_distribution(2, 3);
  const auto d4 = exact_distribution(2, 4);
  std::set<GroupElement> odd, even;
  for (const auto& [g, p] : d3) odd.insert(g);
  for (const auto& [g, p] : d4) even.insert(g);
  std::set<GroupElement> inter;
  std::set_intersection(odd.begin(), odd.end(), even.begin(), even.end(),
                        std::inserter(inter, inter.begin()));
  CHECK(inter.empty());
  CHECK(odd.size() + even.size() == 16);
}

TEST_CASE("cayley distances") {
  const auto dist = cayley_distances(2);
  CHECK(dist.size() == 16);
  CHECK(dist.at(GroupElement::identity(2)) == 0);
  std::size_t diameter = 0;
  for (const auto& [g, d] : dist) diameter = std::max(diameter, d);
  CHECK(diameter == 3);
}

TEST_CASE("full analysis at n = 2") {
  const ChainReport rep = analyze(2);
  CHECK(rep.state_count == 16);
  CHECK(rep.period == 2);
  CHECK(rep.cayley_diameter == 3);
  CHECK(rep.mixing_step == 3);
  REQUIRE(rep.per_step_supports.size() >= 4);
  CHECK(rep.per_step_supports[0] == 1);
  CHECK(rep.per_step_supports[1] == 4);
  CHECK(rep.per_step_supports[2] == 8);
  CHECK(rep.per_step_supports[3] == 8);
}

TEST_CASE("n = 4 closure works; exact mixing never occurs there") {
  CHECK(enumerate_states(4).size() == 384);
  const auto d2 = exact_distribution(4, 2);
  CHECK(d2.size() == 128);
  // the n=4 walk only mixes asymptotically, so exact detection must give up
  CHECK_THROWS_AS((void)analyze(4), std::runtime_error);
}

TEST_CASE("dimension validation") {
  CHECK_THROWS_AS((void)enumerate_states(3), std::invalid_argument);
  CHECK_THROWS_AS((void)enumerate_states(0), std::invalid_argument);
  CHECK_THROWS_AS((void)exact_distribution(2, 40), std::invalid_argument);
}
