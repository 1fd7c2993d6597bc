#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's own quadrature or pricing code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "deflator/filtration.hpp"

namespace oracle {

inline double pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// E f(Z), Z ~ N(0,1): composite 20-point Gauss-Legendre on unit cells of
// [-12, 12], with extra cuts at the kinks of f.
inline double normal_expectation(const std::function<double(double)>& f, std::vector<double> kinks = {}) {
  std::vector<double> cuts;
  for (int i = -12; i <= 12; ++i) cuts.push_back(i);
  for (double k : kinks) {
    if (k > -12.0 && k < 12.0) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double z) { return f(z) * pdf(z); }, cuts[i], cuts[i + 1]);
  }
  return total;
}

// Random tree of the given depth; every node has 1..max_children children.
// Atoms are the leaves; the time-j block of an atom is its depth-j ancestor.
inline deflator::Filtration random_tree(std::size_t depth, std::size_t max_children, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> kids(1, max_children);
  // One path of node indices per node at the current depth.
  std::vector<std::vector<std::size_t>> paths = {{0}};
  for (std::size_t j = 0; j < depth; ++j) {
    std::vector<std::vector<std::size_t>> next;
    std::size_t counter = 0;
    for (const auto& p : paths) {
      const std::size_t c = kids(rng);
      for (std::size_t i = 0; i < c; ++i) {
        next.push_back(p);
        next.back().push_back(counter++);
      }
    }
    paths = std::move(next);
  }
  std::vector<deflator::Algebra> algs;
  for (std::size_t j = 0; j <= depth; ++j) {
    std::vector<std::size_t> block_of;
    for (const auto& p : paths) block_of.push_back(p[j]);
    algs.emplace_back(std::move(block_of));
  }
  return deflator::Filtration(std::move(algs));
}

// Children of every time-j block, found by scanning atoms.
inline std::vector<std::vector<std::size_t>> kids_of(const deflator::Filtration& f, std::size_t j) {
  std::vector<std::vector<std::size_t>> out(f.at(j).block_count());
  for (std::size_t a = 0; a < f.atom_count(); ++a) {
    auto& v = out[f.at(j).block_of(a)];
    const std::size_t c = f.at(j + 1).block_of(a);
    if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
  }
  return out;
}

}  // namespace oracle
