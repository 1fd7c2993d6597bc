#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace deflator {

// A finite algebra stored as the partition generated by its atoms:
// block_of[a] is the block containing outcome a. Block indices are
// contiguous from 0.
class Algebra {
 public:
  explicit Algebra(std::vector<std::size_t> block_of);

  static Algebra trivial(std::size_t atoms);
  static Algebra discrete(std::size_t atoms);

  std::size_t atom_count() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return block_count_; }
  std::size_t block_of(std::size_t atom) const { return block_of_.at(atom); }
  const std::vector<std::size_t>& block_map() const noexcept { return block_of_; }

  // Atoms of each block, in increasing order.
  std::vector<std::vector<std::size_t>> blocks() const;

  // True when every block of *this lies inside a single block of `coarser`.
  bool refines(const Algebra& coarser) const;

  // For each block of *this, the block of `coarser` containing it. Throws
  // NotCoarser when `coarser` does not coarsen *this.
  std::vector<std::size_t> coarsening_map(const Algebra& coarser) const;

  friend bool operator==(const Algebra& a, const Algebra& b) { return a.block_of_ == b.block_of_; }
  friend bool operator!=(const Algebra& a, const Algebra& b) { return !(a == b); }

 private:
  std::vector<std::size_t> block_of_;
  std::size_t block_count_ = 0;
};

// Sequence of algebras A_0, ..., A_n on one outcome set. Unless relaxed,
// each A_{j+1} must refine A_j.
class Filtration {
 public:
  explicit Filtration(std::vector<Algebra> algebras, bool relaxed = false);

  // Outcomes (w_1..w_n) in {0,1}^n encoded most significant bit first; the
  // time-j blocks are the length-j prefixes.
  static Filtration binary_tree(std::size_t steps);

  std::size_t size() const noexcept { return algebras_.size(); }
  std::size_t last() const noexcept { return algebras_.size() - 1; }
  std::size_t atom_count() const noexcept { return algebras_.front().atom_count(); }
  const Algebra& at(std::size_t j) const { return algebras_.at(j); }
  const std::vector<Algebra>& algebras() const noexcept { return algebras_; }
  bool relaxed() const noexcept { return relaxed_; }

 private:
  std::vector<Algebra> algebras_;
  bool relaxed_ = false;
};

// Finitely additive measure on an algebra, stored blockwise.
class FAMeasure {
 public:
  FAMeasure(Algebra algebra, std::vector<double> weights);

  // Measure with the given weight on every atom, taken on the discrete algebra.
  static FAMeasure on_atoms(std::vector<double> weights);

  const Algebra& algebra() const noexcept { return algebra_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](std::size_t block) const { return weights_.at(block); }
  double total() const;
  bool nonnegative() const;

 private:
  Algebra algebra_;
  std::vector<double> weights_;
};

// Scalar simple function, constant on the blocks of its algebra.
class SimpleFunction {
 public:
  SimpleFunction(Algebra algebra, std::vector<double> values);
  static SimpleFunction constant(Algebra algebra, double value);

  const Algebra& algebra() const noexcept { return algebra_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t block) const { return values_.at(block); }
  double at_atom(std::size_t atom) const { return values_[algebra_.block_of(atom)]; }

 private:
  Algebra algebra_;
  std::vector<double> values_;
};

// R^m valued simple function: row b holds the value on block b.
class VectorFunction {
 public:
  VectorFunction(Algebra algebra, Eigen::MatrixXd values);
  static VectorFunction zero(Algebra algebra, Eigen::Index dim);

  const Algebra& algebra() const noexcept { return algebra_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::MatrixXd& values() noexcept { return values_; }
  Eigen::Index dim() const noexcept { return values_.cols(); }
  Eigen::VectorXd row(std::size_t block) const { return values_.row(static_cast<Eigen::Index>(block)).transpose(); }

 private:
  Algebra algebra_;
  Eigen::MatrixXd values_;
};

// R^m valued measure (one FAMeasure per component), stored blockwise.
class VectorMeasure {
 public:
  VectorMeasure(Algebra algebra, Eigen::MatrixXd weights);

  const Algebra& algebra() const noexcept { return algebra_; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }

 private:
  Algebra algebra_;
  Eigen::MatrixXd weights_;
};

// (f mu)(B) = f(B) mu(B); algebras must match (AlgebraMismatch).
FAMeasure product(const SimpleFunction& f, const FAMeasure& mu);
VectorMeasure product(const VectorFunction& f, const FAMeasure& mu);

// Sum of fine-block weights inside each block of `coarser` (NotCoarser
// unless `coarser` is coarsened from mu's algebra).
FAMeasure restrict(const FAMeasure& mu, const Algebra& coarser);
VectorMeasure restrict(const VectorMeasure& mu, const Algebra& coarser);

// Re-expresses f on a finer algebra (NotCoarser if `finer` does not refine f's algebra).
SimpleFunction lift(const SimpleFunction& f, const Algebra& finer);
VectorFunction lift(const VectorFunction& f, const Algebra& finer);

// <g, mu>: g must be measurable with respect to mu's algebra.
double pair(const SimpleFunction& g, const FAMeasure& mu);

// Blockwise ratio mu / nu on a shared algebra; DeflatorZeroBlock where nu
// vanishes on a block.
SimpleFunction divide(const FAMeasure& mu, const FAMeasure& nu);
VectorFunction divide(const VectorMeasure& mu, const FAMeasure& nu);

FAMeasure scale(const FAMeasure& mu, double factor);
FAMeasure add(const FAMeasure& a, const FAMeasure& b);
VectorMeasure add(const VectorMeasure& a, const VectorMeasure& b);
SimpleFunction multiply(const SimpleFunction& a, const SimpleFunction& b);

struct ConditionalCheck {
  bool holds = false;
  double max_violation = 0.0;
};

// Y P == (X Q)|_A blockwise, where A is the algebra of Y and P.
ConditionalCheck conditional_price_check(const SimpleFunction& Y, const FAMeasure& P,
                                         const SimpleFunction& X, const FAMeasure& Q,
                                         double tol);

// Z_j = 2 W_j - j on the time-j algebra of Filtration::binary_tree(steps).
SimpleFunction random_walk(std::size_t steps, std::size_t j);

// Partition {W_j = i}, 0 <= i <= j, of the binary-tree outcomes; these do
// not increase with j and model a recombining tree.
Algebra recombining_algebra(std::size_t steps, std::size_t j);

}  // namespace deflator
