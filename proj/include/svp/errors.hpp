#ifndef SVP_ERRORS_HPP
#define SVP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace svp {

// Error categories, used by the CLI to pick exit codes
// (config -> 2, budget -> 3, invariant -> 4).
enum class ErrorCode {
  NonSquare,
  EmptyRowOrColumn,
  NonIrreducible,
  StateBudgetExceeded,
  BudgetExceeded,
  Overflow,
  EmptyWord,
  BlockMismatch,
  SOutOfRange,
  Singular,
  SpecNotSuperAdditive,
  IncompatibleMeasure,
  NotContracting,
  NotExpanding,
  NotMarkov,
  EmptyDigitSet,
  InvariantBroken,
  EmptySubset,
  DepthBudget,
  BadInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::EmptyRowOrColumn: return "EmptyRowOrColumn";
    case ErrorCode::NonIrreducible: return "NonIrreducible";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::EmptyWord: return "EmptyWord";
    case ErrorCode::BlockMismatch: return "BlockMismatch";
    case ErrorCode::SOutOfRange: return "SOutOfRange";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SpecNotSuperAdditive: return "SpecNotSuperAdditive";
    case ErrorCode::IncompatibleMeasure: return "IncompatibleMeasure";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::NotMarkov: return "NotMarkov";
    case ErrorCode::EmptyDigitSet: return "EmptyDigitSet";
    case ErrorCode::InvariantBroken: return "InvariantBroken";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::DepthBudget: return "DepthBudget";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, std::string(error_code_name(code)) + ": " + msg);
}

}  // namespace svp

#endif
