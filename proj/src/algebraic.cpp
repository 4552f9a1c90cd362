#include "qsim/algebraic.hpp"

#include <stdexcept>

namespace qsim {

namespace {

constexpr mp_bitcnt_t kFloatBits = 256;

mpf_class sqrt2_f() {
  mpf_class two(2, kFloatBits);
  return sqrt(two);
}

// 2^{-k/2} as a float with kFloatBits of precision.
mpf_class inv_sqrt2_pow(std::int64_t k) {
  mpf_class scale(1, kFloatBits);
  const std::int64_t half = k / 2;
  if (half >= 0) mpf_div_2exp(scale.get_mpf_t(), scale.get_mpf_t(), static_cast<mp_bitcnt_t>(half));
  else mpf_mul_2exp(scale.get_mpf_t(), scale.get_mpf_t(), static_cast<mp_bitcnt_t>(-half));
  if (k % 2 != 0) {
    const mpf_class s2 = sqrt2_f();
    if (k > 0) scale /= s2;
    else scale *= s2;
  }
  return scale;
}

} // namespace

AlgebraicAmplitude AlgebraicAmplitude::times_omega() const { return {b, c, d, -a, k}; }

AlgebraicAmplitude AlgebraicAmplitude::with_k(std::int64_t target) const {
  if (target < k) throw std::invalid_argument("with_k: target exponent below current exponent");
  AlgebraicAmplitude out = *this;
  std::int64_t diff = target - k;
  if (diff % 2 != 0) {
    out = AlgebraicAmplitude{b - d, a + c, b + d, c - a, k + 1};
    --diff;
  }
  if (diff > 0) {
    const auto shift = static_cast<mp_bitcnt_t>(diff / 2);
    for (BigInt *x : {&out.a, &out.b, &out.c, &out.d}) mpz_mul_2exp(x->get_mpz_t(), x->get_mpz_t(), shift);
  }
  out.k = target;
  return out;
}

std::string AlgebraicAmplitude::to_string() const {
  return a.get_str() + ' ' + b.get_str() + ' ' + c.get_str() + ' ' + d.get_str() + ' ' + std::to_string(k);
}

AlgebraicAmplitude operator+(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y) {
  if (x.k != y.k) {
    const std::int64_t k = std::max(x.k, y.k);
    return x.with_k(k) + y.with_k(k);
  }
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d, x.k};
}

AlgebraicAmplitude operator-(const AlgebraicAmplitude &x) { return {-x.a, -x.b, -x.c, -x.d, x.k}; }

AlgebraicAmplitude operator-(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y) { return x + (-y); }

bool equivalent(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y) {
  const std::int64_t k = std::max(x.k, y.k);
  const AlgebraicAmplitude nx = x.with_k(k), ny = y.with_k(k);
  return nx.a == ny.a && nx.b == ny.b && nx.c == ny.c && nx.d == ny.d;
}

std::pair<double, double> amplitude_to_complex(const AlgebraicAmplitude &alpha) {
  const mpf_class s2 = sqrt2_f();
  const mpf_class a(alpha.a, kFloatBits), b(alpha.b, kFloatBits), c(alpha.c, kFloatBits),
      d(alpha.d, kFloatBits);
  const mpf_class scale = inv_sqrt2_pow(alpha.k);
  const mpf_class re = (d + (c - a) / s2) * scale;
  const mpf_class im = (b + (c + a) / s2) * scale;
  return {re.get_d(), im.get_d()};
}

// ---------------------------------------------------------------------------

int ExactProb::sign() const {
  const int su = sgn(u_), sv = sgn(v_);
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  // opposite signs: compare u² with 2v²
  const Rational lhs = u_ * u_, rhs = 2 * v_ * v_;
  return lhs > rhs ? su : sv;
}

ExactProb ExactProb::scaled_pow2(long exponent) const {
  ExactProb out = *this;
  for (Rational *x : {&out.u_, &out.v_}) {
    if (exponent >= 0) mpq_mul_2exp(x->get_mpq_t(), x->get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
    else mpq_div_2exp(x->get_mpq_t(), x->get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return out;
}

ExactProb ExactProb::inverse() const {
  if (is_zero()) throw std::domain_error("ExactProb: inverse of zero");
  const Rational norm = u_ * u_ - 2 * v_ * v_;  // nonzero since √2 is irrational
  return ExactProb(u_ / norm, -v_ / norm);
}

ExactProb &ExactProb::operator+=(const ExactProb &rhs) {
  u_ += rhs.u_;
  v_ += rhs.v_;
  return *this;
}

ExactProb &ExactProb::operator-=(const ExactProb &rhs) {
  u_ -= rhs.u_;
  v_ -= rhs.v_;
  return *this;
}

ExactProb &ExactProb::operator*=(const ExactProb &rhs) {
  Rational u = u_ * rhs.u_ + 2 * v_ * rhs.v_;
  Rational v = u_ * rhs.v_ + v_ * rhs.u_;
  u_ = std::move(u);
  v_ = std::move(v);
  return *this;
}

double ExactProb::to_double() const {
  const mpf_class u(u_, kFloatBits), v(v_, kFloatBits);
  const mpf_class value = u + v * sqrt2_f();
  return value.get_d();
}

std::string ExactProb::to_string() const {
  if (v_ == 0) return u_.get_str();
  BigInt den;
  mpz_lcm(den.get_mpz_t(), u_.get_den_mpz_t(), v_.get_den_mpz_t());
  const Rational scaled_u = u_ * den, scaled_v = v_ * den;
  return scaled_u.get_num().get_str() + '/' + den.get_str() + " + " + scaled_v.get_num().get_str() + '/' +
         den.get_str() + " *sqrt2";
}

Abs2Numerator abs2_numerator(const AlgebraicAmplitude &x) {
  return {x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d, x.a * x.b + x.b * x.c + x.c * x.d - x.a * x.d};
}

ExactProb abs2_exact(const AlgebraicAmplitude &alpha) {
  auto [u, v] = abs2_numerator(alpha);
  return ExactProb(Rational(u), Rational(v)).scaled_pow2(-static_cast<long>(alpha.k));
}

} // namespace qsim
