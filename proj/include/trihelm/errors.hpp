#pragma once

#include <stdexcept>
#include <string>

namespace trihelm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// region axiom failures (validate_region)
struct DisjointnessViolation : Error { using Error::Error; };
struct InteriorNeighborhoodViolation : Error { using Error::Error; };
struct BoundaryContactViolation : Error { using Error::Error; };
struct Disconnected : Error { using Error::Error; };

struct ConeConditionViolation : Error {
  long long w1, w2;
  ConeConditionViolation(long long a, long long b)
      : Error("cone condition fails at (" + std::to_string(a) + "," + std::to_string(b) + ")"),
        w1(a), w2(b) {}
};

struct EmptyBoundary : Error { using Error::Error; };
struct SideMismatch : Error { using Error::Error; };
struct CaseMismatch : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

struct SingularStep : Error {
  int shell;
  explicit SingularStep(int n)
      : Error("recursion step " + std::to_string(n) + " is numerically singular"), shell(n) {}
};

struct ToleranceNotReached : Error { using Error::Error; };
struct NumericallySingular : Error { using Error::Error; };

struct NoConvergence : Error {
  double alpha, k;
  NoConvergence(double a, double kk)
      : Error("dispersion solve failed at alpha=" + std::to_string(a) + ", k=" + std::to_string(kk)),
        alpha(a), k(kk) {}
};

struct InsufficientSamples : Error { using Error::Error; };
struct NonConvergent : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

}  // namespace trihelm
