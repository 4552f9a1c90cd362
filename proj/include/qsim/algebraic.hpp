/// @file  algebraic.hpp
/// @brief Exact amplitudes (a·ω³ + b·ω² + c·ω + d)/√2^k and probabilities in ℚ[√2]

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace qsim {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Exact complex value (a·ω³ + b·ω² + c·ω + d) / √2^k with ω = e^{iπ/4}.
///
/// `operator==` is structural. Two tuples with different k can still denote
/// the same value; use `equivalent()` for value equality.
struct AlgebraicAmplitude {
  BigInt a, b, c, d;
  std::int64_t k = 0;

  AlgebraicAmplitude() = default;
  AlgebraicAmplitude(BigInt a_, BigInt b_, BigInt c_, BigInt d_, std::int64_t k_ = 0)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), k(k_) {}

  [[nodiscard]] bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

  /// Same k, value multiplied by ω: (a,b,c,d) → (b,c,d,−a).
  [[nodiscard]] AlgebraicAmplitude times_omega() const;
  /// Same value, exponent raised to `target` (>= k). Each step of two doubles
  /// the coefficients; an odd step applies the √2 identity
  /// √2·(a,b,c,d) = (b−d, a+c, b+d, c−a).
  [[nodiscard]] AlgebraicAmplitude with_k(std::int64_t target) const;

  /// "a b c d k" in decimal.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const AlgebraicAmplitude &, const AlgebraicAmplitude &) = default;
};

AlgebraicAmplitude operator+(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y);
AlgebraicAmplitude operator-(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y);
AlgebraicAmplitude operator-(const AlgebraicAmplitude &x);

/// Value equality after normalizing both sides to a common k.
[[nodiscard]] bool equivalent(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y);

/// Floating view (re, im). Output only; computed at 256-bit precision and rounded.
[[nodiscard]] std::pair<double, double> amplitude_to_complex(const AlgebraicAmplitude &alpha);

/// Element u + v·√2 of ℚ[√2].
class ExactProb {
public:
  ExactProb() = default;
  ExactProb(Rational u, Rational v = 0) : u_(std::move(u)), v_(std::move(v)) {
    u_.canonicalize();
    v_.canonicalize();
  }
  ExactProb(long value) : u_(value), v_(0) {}

  [[nodiscard]] const Rational &rational_part() const noexcept { return u_; }
  [[nodiscard]] const Rational &sqrt2_part() const noexcept { return v_; }

  [[nodiscard]] bool is_zero() const { return u_ == 0 && v_ == 0; }
  /// Exact sign of u + v·√2.
  [[nodiscard]] int sign() const;
  /// Value times 2^exponent (exponent may be negative).
  [[nodiscard]] ExactProb scaled_pow2(long exponent) const;
  /// Multiplicative inverse; throws std::domain_error for zero.
  [[nodiscard]] ExactProb inverse() const;

  [[nodiscard]] double to_double() const;
  /// "U/D" when the √2 part vanishes, else "U/D + V/D *sqrt2" over a common denominator.
  [[nodiscard]] std::string to_string() const;

  ExactProb &operator+=(const ExactProb &rhs);
  ExactProb &operator-=(const ExactProb &rhs);
  ExactProb &operator*=(const ExactProb &rhs);
  ExactProb &operator/=(const ExactProb &rhs) { return *this *= rhs.inverse(); }

  friend ExactProb operator+(ExactProb lhs, const ExactProb &rhs) { return lhs += rhs; }
  friend ExactProb operator-(ExactProb lhs, const ExactProb &rhs) { return lhs -= rhs; }
  friend ExactProb operator*(ExactProb lhs, const ExactProb &rhs) { return lhs *= rhs; }
  friend ExactProb operator/(ExactProb lhs, const ExactProb &rhs) { return lhs /= rhs; }
  friend bool operator==(const ExactProb &lhs, const ExactProb &rhs) {
    return lhs.u_ == rhs.u_ && lhs.v_ == rhs.v_;
  }
  friend bool operator<(const ExactProb &lhs, const ExactProb &rhs) { return (lhs - rhs).sign() < 0; }
  friend bool operator<=(const ExactProb &lhs, const ExactProb &rhs) { return (lhs - rhs).sign() <= 0; }

private:
  Rational u_{0};
  Rational v_{0};
};

/// Numerator (a²+b²+c²+d²) + √2·(ab+bc+cd−ad) of |α|²·2^k, as integers.
struct Abs2Numerator {
  BigInt u;
  BigInt v;
};
[[nodiscard]] Abs2Numerator abs2_numerator(const AlgebraicAmplitude &alpha);

/// |α|² exactly: numerator / 2^k.
[[nodiscard]] ExactProb abs2_exact(const AlgebraicAmplitude &alpha);

} // namespace qsim
