#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rom/dense.hpp"

namespace rom {

// Element of the group generated by H D with H the normalized Hadamard
// matrix and D a +-1 diagonal. Stored exactly as an integer matrix divided
// by (sqrt 2)^scale_exp; the representation is canonical (entries are
// halved and scale_exp reduced by 2 while all entries are even), so
// equality and ordering are exact.
struct GroupElement {
  std::size_t n = 0;
  int scale_exp = 0;
  std::vector<long long> ints;  // row-major n x n

  static GroupElement identity(std::size_t n);

  long long at(std::size_t i, std::size_t j) const { return ints[i * n + j]; }

  // true iff M M^T = I holds exactly in scaled-integer arithmetic
  bool is_orthogonal() const;

  DenseMatrix to_double() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

// Canonical product of two group elements.
GroupElement group_multiply(const GroupElement& a, const GroupElement& b);

// The 2^n generators H D over all +-1 diagonals D.
std::vector<GroupElement> hd_generators(std::size_t n);

// Closure of {I} under left multiplication by every generator.
// Throws std::length_error if the closure exceeds state_cap.
std::vector<GroupElement> enumerate_states(std::size_t n, std::size_t state_cap = 65536);

// Exact probability, reduced to lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Exact push-forward of the point mass at I through `steps` applications of
// X -> H D X; denominators are powers of 2^n.
std::map<GroupElement, Rational> exact_distribution(std::size_t n, std::size_t steps);

// BFS distance from the identity in the Cayley graph with generator set {HD}.
std::map<GroupElement, std::size_t> cayley_distances(std::size_t n);

struct ChainReport {
  std::size_t state_count = 0;
  std::size_t period = 0;
  std::size_t cayley_diameter = 0;
  // first step by which every residue class mod the period has reached a
  // uniform distribution on its stable support
  std::size_t mixing_step = 0;
  std::vector<std::size_t> per_step_supports;  // support sizes from step 0
};

// Full exact analysis of the walk. Throws std::runtime_error if mixing is
// not detected within the step cap.
ChainReport analyze(std::size_t n, std::size_t step_cap = 24);

}  // namespace rom
