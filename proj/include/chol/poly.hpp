#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chol {

// Exact a + b*i with a, b arbitrary-precision rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value), im_(0) {}  // NOLINT(implicit)
  GaussianRational(mpq_class re, mpq_class im = 0);

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);  // throws on zero

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

// Exponent vector, one slot per chart coordinate. Ordered graded
// lexicographically: total degree first, then slot 0 dominates slot 1, ...
class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<Exponent> exps);

  static Monomial unit(std::size_t nvars, std::size_t slot);

  std::size_t size() const noexcept { return exps_.size(); }
  unsigned degree() const noexcept { return degree_; }
  Exponent operator[](std::size_t slot) const { return exps_[slot]; }
  const std::vector<Exponent>& exponents() const noexcept { return exps_; }

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  // Requires divides(*this) by `other`.
  Monomial operator/(const Monomial& other) const;

  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

 private:
  std::vector<Exponent> exps_;
  unsigned degree_ = 0;
};

// Sparse multivariate polynomial in canonical form: no stored coefficient is
// zero, so structural equality is polynomial equality. Immutable in practice:
// every operation returns a new value.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, GaussianRational>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const GaussianRational& c);
  static Polynomial variable(std::size_t nvars, std::size_t slot);
  static Polynomial monomial(const Monomial& m, const GaussianRational& c);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  // Degree of the zero polynomial is reported as 0.
  unsigned degree() const;
  bool is_homogeneous() const;
  // Coefficient of the constant monomial (zero if absent).
  GaussianRational constant_term() const;

  // Precondition: !is_zero().
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const GaussianRational& leading_coefficient() const { return terms_.rbegin()->second; }

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial scaled(const GaussianRational& c) const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Terms from the leading monomial downward, e.g. "x^2*w - x*y*z".
  std::string to_string(std::span<const std::string> names) const;

 private:
  void add_term(const Monomial& m, const GaussianRational& c);

  std::size_t nvars_;
  TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial pow(const Polynomial& p, unsigned exponent);

// Exact quotient when d divides p; std::nullopt otherwise. Throws
// DivisionByZero when d is the zero polynomial.
std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& d);

// True when p = c * q for a nonzero constant c (both nonzero).
bool equal_up_to_constant(const Polynomial& p, const Polynomial& q);

std::complex<double> eval(const Polynomial& p, std::span<const std::complex<double>> point);
std::vector<Polynomial> grad(const Polynomial& p);

// Floating-point image of a polynomial for repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  std::size_t nvars() const noexcept { return nvars_; }
  std::complex<double> operator()(std::span<const std::complex<double>> point) const;
  // Value and full gradient in one pass.
  std::complex<double> value_and_gradient(std::span<const std::complex<double>> point,
                                          std::span<std::complex<double>> gradient) const;

 private:
  struct Term {
    std::vector<Monomial::Exponent> exps;
    std::complex<double> coefficient;
  };
  std::size_t nvars_ = 0;
  unsigned max_exponent_ = 0;
  std::vector<Term> terms_;
};

using PolyGrid = std::vector<std::vector<Polynomial>>;

inline constexpr std::size_t kMaxSymbolicSize = 12;

// Exact determinant of a square grid. Division-free Laplace expansion
// memoized over column subsets; grids above kMaxSymbolicSize throw
// CapacityExceeded.
Polynomial det_poly(const PolyGrid& grid);

// Pfaffian of a skew-symmetric grid of even size (uses the strict upper
// triangle only).
Polynomial pfaffian_poly(const PolyGrid& grid);

// Reads expressions such as "x*(x*w - y*z)" or "2*a11^2 - 3/4*b" over the
// given variable names. Throws MalformedInput with the offending position.
Polynomial parse_polynomial(std::string_view text, std::span<const std::string> names);

struct PolyFactor {
  Polynomial poly;
  int multiplicity = 1;
};

// "x^2*(x*w - y*z)": single-term factors bare, others parenthesized.
std::string factored_string(std::span<const PolyFactor> factors,
                            std::span<const std::string> names);

}  // namespace chol
