#pragma once

#include <stdexcept>
#include <string>

namespace knnmap {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument's value failed (not prime, not an involution, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class FixedPointError : public Error {
 public:
  using Error::Error;
};

class CommutationError : public Error {
 public:
  using Error::Error;
};

class NotTransitiveError : public Error {
 public:
  using Error::Error;
};

class CongruenceError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Which of the admissible-triple conditions rejected a triple.
enum class AdmissibilityCondition {
  Involutions,       // ell, r, t must be involutory graph automorphisms
  ArcTransitivity,   // <ell, r, t> transitive on the arcs
  VertexStabilizer,  // stabilizer of the root vertex is <r, t> ~ D_n, <rt> regular on its arcs
  EdgeStabilizer,    // stabilizer of the root edge is <ell, t> ~ Z2 x Z2
  GroupOrder,        // |<ell, r, t>| = 4 |E|
};

inline const char* to_string(AdmissibilityCondition c) {
  switch (c) {
    case AdmissibilityCondition::Involutions: return "involutions";
    case AdmissibilityCondition::ArcTransitivity: return "arc-transitivity";
    case AdmissibilityCondition::VertexStabilizer: return "vertex-stabilizer";
    case AdmissibilityCondition::EdgeStabilizer: return "edge-stabilizer";
    case AdmissibilityCondition::GroupOrder: return "group-order";
  }
  return "unknown";
}

class NotAdmissibleError : public Error {
 public:
  NotAdmissibleError(AdmissibilityCondition which, const std::string& detail)
      : Error(std::string("triple not admissible (") + to_string(which) + "): " + detail),
        condition_(which) {}

  AdmissibilityCondition condition() const noexcept { return condition_; }

 private:
  AdmissibilityCondition condition_;
};

}  // namespace knnmap
