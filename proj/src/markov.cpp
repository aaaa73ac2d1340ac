#include "rom/markov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rom {

namespace {

std::size_t checked_log2(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n))
    throw std::invalid_argument("markov: n must be a power of two >= 2");
  return static_cast<std::size_t>(std::countr_zero(n));
}

void canonicalize(GroupElement& g) {
  while (g.scale_exp >= 2 &&
         std::all_of(g.ints.begin(), g.ints.end(),
                     [](long long v) { return v % 2 == 0; })) {
    for (long long& v : g.ints) v /= 2;
    g.scale_exp -= 2;
  }
}

// transition table: succ[s * g + j] = index of generator j applied to state s
struct Closure {
  std::vector<GroupElement> states;
  std::vector<std::size_t> succ;
  std::size_t n_gen = 0;
};

Closure build_closure(std::size_t n, std::size_t state_cap) {
  const auto gens = hd_generators(n);
  Closure c;
  c.n_gen = gens.size();
  std::map<GroupElement, std::size_t> index;
  std::deque<std::size_t> frontier;
  const GroupElement id = GroupElement::identity(n);
  index.emplace(id, 0);
  c.states.push_back(id);
  frontier.push_back(0);
  std::vector<std::vector<std::size_t>> succ_rows;
  succ_rows.emplace_back();
  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop_front();
    const GroupElement cur = c.states[s];  // copy: states may reallocate
    succ_rows[s].resize(c.n_gen);
    for (std::size_t j = 0; j < c.n_gen; ++j) {
      GroupElement next = group_multiply(gens[j], cur);
      auto [it, inserted] = index.emplace(std::move(next), c.states.size());
      if (inserted) {
        if (c.states.size() >= state_cap)
          throw std::length_error("markov: closure exceeds state cap");
        c.states.push_back(it->first);
        succ_rows.emplace_back();
        frontier.push_back(it->second);
      }
      succ_rows[s][j] = it->second;
    }
  }
  c.succ.resize(c.states.size() * c.n_gen);
  for (std::size_t s = 0; s < c.states.size(); ++s)
    for (std::size_t j = 0; j < c.n_gen; ++j) c.succ[s * c.n_gen + j] = succ_rows[s][j];
  return c;
}

std::vector<std::size_t> bfs_distances(const Closure& c) {
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(c.states.size(), kUnseen);
  std::deque<std::size_t> q;
  dist[0] = 0;
  q.push_back(0);
  while (!q.empty()) {
    const std::size_t s = q.front();
    q.pop_front();
    for (std::size_t j = 0; j < c.n_gen; ++j) {
      const std::size_t t = c.succ[s * c.n_gen + j];
      if (dist[t] == kUnseen) {
        dist[t] = dist[s] + 1;
        q.push_back(t);
      }
    }
  }
  return dist;
}

// one exact DP step: every state splits its mass equally over its successors
std::vector<std::uint64_t> dp_step(const Closure& c, const std::vector<std::uint64_t>& cur) {
  std::vector<std::uint64_t> next(cur.size(), 0);
  for (std::size_t s = 0; s < cur.size(); ++s) {
    if (cur[s] == 0) continue;
    for (std::size_t j = 0; j < c.n_gen; ++j) next[c.succ[s * c.n_gen + j]] += cur[s];
  }
  return next;
}

}  // namespace

GroupElement GroupElement::identity(std::size_t n) {
  checked_log2(n);
  GroupElement g;
  g.n = n;
  g.scale_exp = 0;
  g.ints.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) g.ints[i * n + i] = 1;
  return g;
}

bool GroupElement::is_orthogonal() const {
  // M M^T = (A A^T) / 2^scale_exp must equal I, i.e. A A^T = 2^scale_exp I
  if (scale_exp < 0 || scale_exp > 62) return false;
  const long long diag = 1ll << scale_exp;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long long acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += at(i, c) * at(j, c);
      if (acc != (i == j ? diag : 0)) return false;
    }
  return true;
}

DenseMatrix GroupElement::to_double() const {
  DenseMatrix m(n, n);
  const double scale = std::pow(std::numbers::sqrt2_v<double>, -scale_exp);
  for (std::size_t i = 0; i < n * n; ++i) m.a[i] = static_cast<double>(ints[i]) * scale;
  return m;
}

GroupElement group_multiply(const GroupElement& a, const GroupElement& b) {
  if (a.n != b.n) throw std::invalid_argument("group_multiply: dimension mismatch");
  GroupElement c;
  c.n = a.n;
  c.scale_exp = a.scale_exp + b.scale_exp;
  c.ints.assign(a.n * a.n, 0);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k) {
      const long long aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < a.n; ++j) c.ints[i * a.n + j] += aik * b.at(k, j);
    }
  canonicalize(c);
  return c;
}

std::vector<GroupElement> hd_generators(std::size_t n) {
  const std::size_t log2n = checked_log2(n);
  if (n > 16) throw std::length_error("hd_generators: n too large for exact closure");
  // unnormalized Hadamard entry: (-1)^popcount(i & j)
  std::vector<GroupElement> gens;
  gens.reserve(std::size_t{1} << n);
  for (std::size_t signs = 0; signs < (std::size_t{1} << n); ++signs) {
    GroupElement g;
    g.n = n;
    g.scale_exp = static_cast<int>(log2n);
    g.ints.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const long long h = (std::popcount(i & j) % 2 == 0) ? 1 : -1;
        const long long d = ((signs >> j) & 1u) ? -1 : 1;
        g.ints[i * n + j] = h * d;
      }
    canonicalize(g);
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<GroupElement> enumerate_states(std::size_t n, std::size_t state_cap) {
  return build_closure(n, state_cap).states;
}

std::map<GroupElement, Rational> exact_distribution(std::size_t n, std::size_t steps) {
  if (n * steps > 62)
    throw std::invalid_argument("exact_distribution: steps too large for exact arithmetic");
  const Closure c = build_closure(n, 65536);
  std::vector<std::uint64_t> num(c.states.size(), 0);
  num[0] = 1;
  for (std::size_t k = 0; k < steps; ++k) num = dp_step(c, num);
  const std::uint64_t den = std::uint64_t{1} << (n * steps);
  std::map<GroupElement, Rational> out;
  for (std::size_t s = 0; s < c.states.size(); ++s) {
    if (num[s] == 0) continue;
    const std::uint64_t g = std::gcd(num[s], den);
    out.emplace(c.states[s], Rational{num[s] / g, den / g});
  }
  return out;
}

std::map<GroupElement, std::size_t> cayley_distances(std::size_t n) {
  const Closure c = build_closure(n, 65536);
  const auto dist = bfs_distances(c);
  std::map<GroupElement, std::size_t> out;
  for (std::size_t s = 0; s < c.states.size(); ++s) out.emplace(c.states[s], dist[s]);
  return out;
}

ChainReport analyze(std::size_t n, std::size_t step_cap) {
  const Closure c = build_closure(n, 65536);
  const auto dist = bfs_distances(c);

  ChainReport rep;
  rep.state_count = c.states.size();
  rep.cayley_diameter = *std::max_element(dist.begin(), dist.end());

  // period = gcd over edges (u -> v) of d(u) + 1 - d(v)
  std::size_t period = 0;
  for (std::size_t s = 0; s < c.states.size(); ++s)
    for (std::size_t j = 0; j < c.n_gen; ++j) {
      const std::size_t t = c.succ[s * c.n_gen + j];
      const std::size_t cycle = dist[s] + 1 - dist[t];
      period = std::gcd(period, cycle);
    }
  rep.period = period;

  // exact step distributions; uint64 numerators over (2^n)^k
  const std::size_t max_steps = std::min(step_cap + 2, 62 / n);
  std::vector<std::vector<std::uint64_t>> dists;
  dists.reserve(max_steps + 1);
  std::vector<std::uint64_t> cur(c.states.size(), 0);
  cur[0] = 1;
  dists.push_back(cur);
  for (std::size_t k = 1; k <= max_steps; ++k) {
    cur = dp_step(c, cur);
    dists.push_back(cur);
  }

  auto uniform_on_support = [](const std::vector<std::uint64_t>& d) {
    std::uint64_t v = 0;
    for (std::uint64_t x : d) {
      if (x == 0) continue;
      if (v == 0) v = x;
      else if (x != v) return false;
    }
    return true;
  };
  auto same_support = [](const std::vector<std::uint64_t>& a,
                         const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if ((a[i] == 0) != (b[i] == 0)) return false;
    return true;
  };

  // the chain is mixed once every residue class mod the period has reached
  // a uniform distribution on its stable support; report the latest of the
  // per-class first-mixed steps
  const std::size_t p = std::max<std::size_t>(period, 1);
  std::size_t mixing = 0;
  for (std::size_t r = 0; r < p; ++r) {
    std::size_t first = static_cast<std::size_t>(-1);
    for (std::size_t k = r; k + p <= max_steps; k += p) {
      if (uniform_on_support(dists[k]) && same_support(dists[k], dists[k + p])) {
        first = k;
        break;
      }
    }
    if (first == static_cast<std::size_t>(-1))
      throw std::runtime_error("analyze: mixing not detected within step cap");
    mixing = std::max(mixing, first);
  }
  rep.mixing_step = mixing;

  const std::size_t record = std::min(max_steps, mixing + 2);
  rep.per_step_supports.reserve(record + 1);
  for (std::size_t k = 0; k <= record; ++k) {
    std::size_t sup = 0;
    for (std::uint64_t x : dists[k])
      if (x != 0) ++sup;
    rep.per_step_supports.push_back(sup);
  }
  return rep;
}

}  // namespace rom
