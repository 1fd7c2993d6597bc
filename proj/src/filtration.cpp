#include "deflator/filtration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "deflator/error.hpp"

namespace deflator {
namespace {

void require_same(const Algebra& a, const Algebra& b, const char* what) {
  if (a != b) throw Error(ErrorCode::AlgebraMismatch, std::string(what) + ": algebras differ");
}

}  // namespace

Algebra::Algebra(std::vector<std::size_t> block_of) : block_of_(std::move(block_of)) {
  if (block_of_.empty()) throw Error(ErrorCode::InvalidInput, "algebra needs at least one atom");
  block_count_ = *std::max_element(block_of_.begin(), block_of_.end()) + 1;
  std::vector<bool> used(block_count_, false);
  for (std::size_t b : block_of_) used[b] = true;
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::InvalidInput, "block indices must be contiguous from 0");
  }
}

Algebra Algebra::trivial(std::size_t atoms) { return Algebra(std::vector<std::size_t>(atoms, 0)); }

Algebra Algebra::discrete(std::size_t atoms) {
  std::vector<std::size_t> map(atoms);
  for (std::size_t a = 0; a < atoms; ++a) map[a] = a;
  return Algebra(std::move(map));
}

std::vector<std::vector<std::size_t>> Algebra::blocks() const {
  std::vector<std::vector<std::size_t>> out(block_count_);
  for (std::size_t a = 0; a < block_of_.size(); ++a) out[block_of_[a]].push_back(a);
  return out;
}

bool Algebra::refines(const Algebra& coarser) const {
  if (coarser.atom_count() != atom_count()) return false;
  std::vector<std::size_t> parent(block_count_, coarser.block_count());
  for (std::size_t a = 0; a < block_of_.size(); ++a) {
    std::size_t& p = parent[block_of_[a]];
    if (p == coarser.block_count()) {
      p = coarser.block_of_[a];
    } else if (p != coarser.block_of_[a]) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> Algebra::coarsening_map(const Algebra& coarser) const {
  if (coarser.atom_count() != atom_count()) {
    throw Error(ErrorCode::NotCoarser, "algebras live on different outcome sets");
  }
  std::vector<std::size_t> parent(block_count_, coarser.block_count());
  for (std::size_t a = 0; a < block_of_.size(); ++a) {
    std::size_t& p = parent[block_of_[a]];
    if (p == coarser.block_count()) {
      p = coarser.block_of_[a];
    } else if (p != coarser.block_of_[a]) {
      throw Error(ErrorCode::NotCoarser, "block " + std::to_string(block_of_[a]) +
                                             " straddles two blocks of the target algebra");
    }
  }
  return parent;
}

Filtration::Filtration(std::vector<Algebra> algebras, bool relaxed)
    : algebras_(std::move(algebras)), relaxed_(relaxed) {
  if (algebras_.empty()) throw Error(ErrorCode::InvalidInput, "filtration needs at least one algebra");
  for (std::size_t j = 1; j < algebras_.size(); ++j) {
    if (algebras_[j].atom_count() != algebras_[0].atom_count()) {
      throw Error(ErrorCode::InvalidInput, "algebras live on different outcome sets");
    }
    if (!relaxed_ && !algebras_[j].refines(algebras_[j - 1])) {
      throw Error(ErrorCode::InvalidInput,
                  "algebra " + std::to_string(j) + " does not refine algebra " + std::to_string(j - 1));
    }
  }
}

Filtration Filtration::binary_tree(std::size_t steps) {
  if (steps > 24) throw Error(ErrorCode::InvalidInput, "binary tree too deep");
  const std::size_t atoms = std::size_t{1} << steps;
  std::vector<Algebra> algebras;
  for (std::size_t j = 0; j <= steps; ++j) {
    std::vector<std::size_t> map(atoms);
    for (std::size_t a = 0; a < atoms; ++a) map[a] = a >> (steps - j);
    algebras.emplace_back(std::move(map));
  }
  return Filtration(std::move(algebras));
}

FAMeasure::FAMeasure(Algebra algebra, std::vector<double> weights)
    : algebra_(std::move(algebra)), weights_(std::move(weights)) {
  if (weights_.size() != algebra_.block_count()) {
    throw Error(ErrorCode::DimensionMismatch, "measure needs one weight per block");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::InvalidInput, "measure weights must be finite");
  }
}

FAMeasure FAMeasure::on_atoms(std::vector<double> weights) {
  const std::size_t n = weights.size();
  return FAMeasure(Algebra::discrete(n), std::move(weights));
}

double FAMeasure::total() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

bool FAMeasure::nonnegative() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w >= 0.0; });
}

SimpleFunction::SimpleFunction(Algebra algebra, std::vector<double> values)
    : algebra_(std::move(algebra)), values_(std::move(values)) {
  if (values_.size() != algebra_.block_count()) {
    throw Error(ErrorCode::DimensionMismatch, "simple function needs one value per block");
  }
}

SimpleFunction SimpleFunction::constant(Algebra algebra, double value) {
  const std::size_t n = algebra.block_count();
  return SimpleFunction(std::move(algebra), std::vector<double>(n, value));
}

VectorFunction::VectorFunction(Algebra algebra, Eigen::MatrixXd values)
    : algebra_(std::move(algebra)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != algebra_.block_count()) {
    throw Error(ErrorCode::DimensionMismatch, "vector function needs one row per block");
  }
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidInput, "values must be finite");
}

VectorFunction VectorFunction::zero(Algebra algebra, Eigen::Index dim) {
  const auto rows = static_cast<Eigen::Index>(algebra.block_count());
  return VectorFunction(std::move(algebra), Eigen::MatrixXd::Zero(rows, dim));
}

VectorMeasure::VectorMeasure(Algebra algebra, Eigen::MatrixXd weights)
    : algebra_(std::move(algebra)), weights_(std::move(weights)) {
  if (static_cast<std::size_t>(weights_.rows()) != algebra_.block_count()) {
    throw Error(ErrorCode::DimensionMismatch, "vector measure needs one row per block");
  }
}

FAMeasure product(const SimpleFunction& f, const FAMeasure& mu) {
  require_same(f.algebra(), mu.algebra(), "product");
  std::vector<double> w(mu.weights().size());
  for (std::size_t b = 0; b < w.size(); ++b) w[b] = f[b] * mu[b];
  return FAMeasure(mu.algebra(), std::move(w));
}

VectorMeasure product(const VectorFunction& f, const FAMeasure& mu) {
  require_same(f.algebra(), mu.algebra(), "product");
  Eigen::Map<const Eigen::VectorXd> w(mu.weights().data(), static_cast<Eigen::Index>(mu.weights().size()));
  return VectorMeasure(mu.algebra(), w.asDiagonal() * f.values());
}

FAMeasure restrict(const FAMeasure& mu, const Algebra& coarser) {
  const auto parent = mu.algebra().coarsening_map(coarser);
  std::vector<double> w(coarser.block_count(), 0.0);
  for (std::size_t b = 0; b < parent.size(); ++b) w[parent[b]] += mu[b];
  return FAMeasure(coarser, std::move(w));
}

VectorMeasure restrict(const VectorMeasure& mu, const Algebra& coarser) {
  const auto parent = mu.algebra().coarsening_map(coarser);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(coarser.block_count()), mu.weights().cols());
  for (std::size_t b = 0; b < parent.size(); ++b) {
    w.row(static_cast<Eigen::Index>(parent[b])) += mu.weights().row(static_cast<Eigen::Index>(b));
  }
  return VectorMeasure(coarser, std::move(w));
}

SimpleFunction lift(const SimpleFunction& f, const Algebra& finer) {
  if (finer == f.algebra()) return f;
  const auto parent = finer.coarsening_map(f.algebra());
  std::vector<double> v(finer.block_count());
  for (std::size_t b = 0; b < v.size(); ++b) v[b] = f[parent[b]];
  return SimpleFunction(finer, std::move(v));
}

VectorFunction lift(const VectorFunction& f, const Algebra& finer) {
  if (finer == f.algebra()) return f;
  const auto parent = finer.coarsening_map(f.algebra());
  Eigen::MatrixXd v(static_cast<Eigen::Index>(finer.block_count()), f.dim());
  for (std::size_t b = 0; b < parent.size(); ++b) {
    v.row(static_cast<Eigen::Index>(b)) = f.values().row(static_cast<Eigen::Index>(parent[b]));
  }
  return VectorFunction(finer, std::move(v));
}

double pair(const SimpleFunction& g, const FAMeasure& mu) {
  const SimpleFunction on_mu = lift(g, mu.algebra());
  double s = 0.0;
  for (std::size_t b = 0; b < mu.weights().size(); ++b) s += on_mu[b] * mu[b];
  return s;
}

SimpleFunction divide(const FAMeasure& mu, const FAMeasure& nu) {
  require_same(mu.algebra(), nu.algebra(), "divide");
  std::vector<double> v(mu.weights().size());
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (nu[b] == 0.0) {
      throw Error(ErrorCode::DeflatorZeroBlock, "measure vanishes on block " + std::to_string(b));
    }
    v[b] = mu[b] / nu[b];
  }
  return SimpleFunction(mu.algebra(), std::move(v));
}

VectorFunction divide(const VectorMeasure& mu, const FAMeasure& nu) {
  require_same(mu.algebra(), nu.algebra(), "divide");
  Eigen::MatrixXd v = mu.weights();
  for (std::size_t b = 0; b < nu.weights().size(); ++b) {
    if (nu[b] == 0.0) {
      throw Error(ErrorCode::DeflatorZeroBlock, "measure vanishes on block " + std::to_string(b));
    }
    v.row(static_cast<Eigen::Index>(b)) /= nu[b];
  }
  return VectorFunction(mu.algebra(), std::move(v));
}

FAMeasure scale(const FAMeasure& mu, double factor) {
  std::vector<double> w = mu.weights();
  for (double& x : w) x *= factor;
  return FAMeasure(mu.algebra(), std::move(w));
}

FAMeasure add(const FAMeasure& a, const FAMeasure& b) {
  require_same(a.algebra(), b.algebra(), "add");
  std::vector<double> w = a.weights();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += b[i];
  return FAMeasure(a.algebra(), std::move(w));
}

VectorMeasure add(const VectorMeasure& a, const VectorMeasure& b) {
  require_same(a.algebra(), b.algebra(), "add");
  return VectorMeasure(a.algebra(), a.weights() + b.weights());
}

SimpleFunction multiply(const SimpleFunction& a, const SimpleFunction& b) {
  require_same(a.algebra(), b.algebra(), "multiply");
  std::vector<double> v = a.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= b[i];
  return SimpleFunction(a.algebra(), std::move(v));
}

ConditionalCheck conditional_price_check(const SimpleFunction& Y, const FAMeasure& P,
                                         const SimpleFunction& X, const FAMeasure& Q,
                                         double tol) {
  require_same(Y.algebra(), P.algebra(), "conditional_price_check (Y, P)");
  require_same(X.algebra(), Q.algebra(), "conditional_price_check (X, Q)");
  const FAMeasure lhs = product(Y, P);
  const FAMeasure rhs = restrict(product(X, Q), P.algebra());
  ConditionalCheck out;
  for (std::size_t b = 0; b < lhs.weights().size(); ++b) {
    out.max_violation = std::max(out.max_violation, std::abs(lhs[b] - rhs[b]));
  }
  out.holds = out.max_violation <= tol;
  return out;
}

SimpleFunction random_walk(std::size_t steps, std::size_t j) {
  if (j > steps) throw Error(ErrorCode::InvalidInput, "time index beyond the walk length");
  const Filtration tree = Filtration::binary_tree(steps);
  const Algebra& alg = tree.at(j);
  std::vector<double> z(alg.block_count());
  for (std::size_t b = 0; b < z.size(); ++b) {
    z[b] = 2.0 * static_cast<double>(std::popcount(b)) - static_cast<double>(j);
  }
  return SimpleFunction(alg, std::move(z));
}

Algebra recombining_algebra(std::size_t steps, std::size_t j) {
  if (j > steps) throw Error(ErrorCode::InvalidInput, "time index beyond the walk length");
  const std::size_t atoms = std::size_t{1} << steps;
  std::vector<std::size_t> map(atoms);
  for (std::size_t a = 0; a < atoms; ++a) map[a] = static_cast<std::size_t>(std::popcount(a >> (steps - j)));
  return Algebra(std::move(map));
}

}  // namespace deflator
