#pragma once

#include <stdexcept>
#include <string>

namespace wittlift {

// Base class for all library errors.  Subclasses carry the machine-readable
// error name used in CLI error documents.
struct error : std::runtime_error {
    error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define WITTLIFT_ERROR(cls, tag)                                   \
    struct cls : error {                                           \
        explicit cls(const std::string& what) : error(tag, what) {} \
    }

WITTLIFT_ERROR(non_monic, "NonMonic");
WITTLIFT_ERROR(not_eisenstein, "NotEisenstein");
WITTLIFT_ERROR(uniformizer_not_valuation_one, "UniformizerNotValuationOne");
WITTLIFT_ERROR(precision_too_small, "PrecisionTooSmall");
WITTLIFT_ERROR(precision_exhausted, "PrecisionExhausted");
WITTLIFT_ERROR(not_divisible, "NotDivisible");
WITTLIFT_ERROR(integrality_failure, "IntegralityFailure");
WITTLIFT_ERROR(length_mismatch, "LengthMismatch");
WITTLIFT_ERROR(ring_mismatch, "RingMismatch");
WITTLIFT_ERROR(length_too_short, "LengthTooShort");
WITTLIFT_ERROR(wrong_characteristic, "WrongCharacteristic");
WITTLIFT_ERROR(compatibility_violation, "CompatibilityViolation");
WITTLIFT_ERROR(depth_exhausted, "DepthExhausted");
WITTLIFT_ERROR(insufficient_depth, "InsufficientDepth");
WITTLIFT_ERROR(depth_budget_exceeded, "DepthBudgetExceeded");
WITTLIFT_ERROR(norm_incompatible, "NormIncompatible");
WITTLIFT_ERROR(no_match_within_depth, "NoMatchWithinDepth");
WITTLIFT_ERROR(resonance_division_by_zero, "ResonanceDivisionByZero");
WITTLIFT_ERROR(invalid_multiset, "InvalidMultiset");
WITTLIFT_ERROR(degenerate_input, "DegenerateInput");
WITTLIFT_ERROR(bad_descriptor, "BadDescriptor");

#undef WITTLIFT_ERROR

} // namespace wittlift
