#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mactab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class Err {
  DivisionByZero,
  LevelMismatch,
  LimitExceeded,
  NotPrimePower,
  CapExceeded,
  NotIrreducible,
  NotCuspidal,
  NotGeneric,
  NotUnitriangular,
  Singular,
  ZeroElement,
  ShapeMismatch,
  ConventionNotPinned,
  AmbiguousLabel,
  NoMatch,
  MultipleMatch,
  NotProportional,
  ZeroDenominator,
  IllDefined,
  Unsupported,
  Internal,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DivisionByZero: return "DivisionByZero";
    case Err::LevelMismatch: return "LevelMismatch";
    case Err::LimitExceeded: return "LimitExceeded";
    case Err::NotPrimePower: return "NotPrimePower";
    case Err::CapExceeded: return "CapExceeded";
    case Err::NotIrreducible: return "NotIrreducible";
    case Err::NotCuspidal: return "NotCuspidal";
    case Err::NotGeneric: return "NotGeneric";
    case Err::NotUnitriangular: return "NotUnitriangular";
    case Err::Singular: return "Singular";
    case Err::ZeroElement: return "ZeroElement";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::ConventionNotPinned: return "ConventionNotPinned";
    case Err::AmbiguousLabel: return "AmbiguousLabel";
    case Err::NoMatch: return "NoMatch";
    case Err::MultipleMatch: return "MultipleMatch";
    case Err::NotProportional: return "NotProportional";
    case Err::ZeroDenominator: return "ZeroDenominator";
    case Err::IllDefined: return "IllDefined";
    case Err::Unsupported: return "Unsupported";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what)
      : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, Err kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

inline int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }
inline int64_t lcm64(int64_t a, int64_t b) { return a / std::gcd(a, b) * b; }

// x^e with 64-bit overflow left to the caller's invariants (exponents stay small here).
inline int64_t ipow(int64_t x, int64_t e) {
  int64_t r = 1;
  while (e-- > 0) r *= x;
  return r;
}

inline int64_t mod_pos(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace mactab
