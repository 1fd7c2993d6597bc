#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace deflator {

enum class ErrorCode {
  InvalidInput,
  DimensionMismatch,
  NonConvergence,
  ZeroCost,
  SingularGram,
  NoArbitrageViolation,
  AlgebraMismatch,
  NotCoarser,
  NotClosedOut,
  NotSelfFinancing,
  DeflatorZeroBlock,
  NonpositiveRate,
  MissingMaturity,
  NonPredictableDeflator,
  InvalidInterval,
  TruncationFailure,
  ArbitrageInInput,
};

const char* to_string(ErrorCode code) noexcept;

// Every library failure is reported through this type; callers that need to
// branch on the failure mode inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Gram matrix of the hedge instruments is singular; redundant() lists the
// instrument columns that are linear combinations of earlier ones.
class SingularGramError : public Error {
 public:
  SingularGramError(std::vector<std::size_t> redundant, const std::string& what)
      : Error(ErrorCode::SingularGram, what), redundant_(std::move(redundant)) {}

  const std::vector<std::size_t>& redundant() const noexcept { return redundant_; }

 private:
  std::vector<std::size_t> redundant_;
};

class NotSelfFinancingError : public Error {
 public:
  NotSelfFinancingError(std::size_t time, std::size_t block, double amount)
      : Error(ErrorCode::NotSelfFinancing,
              "interior account entry " + std::to_string(amount) + " at time index " +
                  std::to_string(time) + ", block " + std::to_string(block)),
        time_(time),
        block_(block) {}

  std::size_t time() const noexcept { return time_; }
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t time_;
  std::size_t block_;
};

}  // namespace deflator
