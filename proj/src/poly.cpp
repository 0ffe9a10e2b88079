#include "chol/poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "chol/error.hpp"

namespace chol {

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division of a coefficient by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / norm;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return imag;
  std::string out = "(" + re_.get_str();
  if (imag.front() != '-') out += "+";
  return out + imag + ")";
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {
  for (auto e : exps_) degree_ += e;
}

Monomial Monomial::unit(std::size_t nvars, std::size_t slot) {
  Monomial m(nvars);
  m.exps_.at(slot) = 1;
  m.degree_ = 1;
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] += other.exps_[i];
  out.degree_ += other.degree_;
  return out;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial out(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] -= other.exps_[i];
  out.degree_ -= other.degree_;
  return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.exps_.begin(), a.exps_.end(), b.exps_.begin(),
                                                b.exps_.end());
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

void require_same_nvars(const Polynomial& p, const Polynomial& q) {
  if (p.nvars() != q.nvars()) {
    throw Error(ErrorKind::ShapeMismatch, "polynomials over " + std::to_string(p.nvars()) +
                                              " and " + std::to_string(q.nvars()) + " variables");
  }
}

}  // namespace

Polynomial Polynomial::constant(std::size_t nvars, const GaussianRational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t slot) {
  if (slot >= nvars) throw Error(ErrorKind::InvalidArgument, "variable slot out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::unit(nvars, slot), 1);
  return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const GaussianRational& c) {
  Polynomial p(m.size());
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

unsigned Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = terms_.begin()->first.degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return t.first.degree() == d; });
}

GaussianRational Polynomial::constant_term() const {
  if (terms_.empty() || terms_.begin()->first.degree() != 0) return {};
  return terms_.begin()->second;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_nvars(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_nvars(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_nvars(a, b);
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial Polynomial::scaled(const GaussianRational& c) const {
  if (c.is_zero()) return Polynomial(nvars_);
  Polynomial out(*this);
  for (auto& [m, coef] : out.terms_) coef *= c;
  return out;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (names.size() != nvars_) {
    throw Error(ErrorKind::ShapeMismatch, "variable name count does not match polynomial");
  }
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, coef] = *it;
    std::string body;
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (mono[v] == 0) continue;
      if (!body.empty()) body += "*";
      body += names[v];
      if (mono[v] > 1) body += "^" + std::to_string(mono[v]);
    }
    bool negative = false;
    std::string coef_text;
    if (coef.is_real()) {
      negative = sgn(coef.re()) < 0;
      const mpq_class mag = abs(coef.re());
      if (mag != 1 || body.empty()) coef_text = mag.get_str();
    } else {
      coef_text = coef.to_string();
      if (coef_text.front() != '(') coef_text = "(" + coef_text + ")";
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (!coef_text.empty()) {
      os << coef_text;
      if (!body.empty()) os << "*";
    }
    os << body;
  }
  return os.str();
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }

Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial pow(const Polynomial& p, unsigned exponent) {
  Polynomial out = Polynomial::constant(p.nvars(), 1);
  for (unsigned i = 0; i < exponent; ++i) out *= p;
  return out;
}

std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& d) {
  require_same_nvars(p, d);
  if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "try_divide by the zero polynomial");
  Polynomial quotient(p.nvars());
  Polynomial rest = p;
  const Monomial& lead = d.leading_monomial();
  const GaussianRational& lead_coef = d.leading_coefficient();
  while (!rest.is_zero()) {
    const Monomial& top = rest.leading_monomial();
    // If d | p then lm(d) | lm(r) for every intermediate remainder r.
    if (!lead.divides(top)) return std::nullopt;
    Polynomial step = Polynomial::monomial(top / lead, rest.leading_coefficient() / lead_coef);
    rest -= step * d;
    quotient += step;
  }
  return quotient;
}

bool equal_up_to_constant(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return false;
  auto ratio = try_divide(p, q);
  return ratio && ratio->is_constant() && !ratio->is_zero();
}

std::complex<double> eval(const Polynomial& p, std::span<const std::complex<double>> point) {
  return CompiledPolynomial(p)(point);
}

std::vector<Polynomial> grad(const Polynomial& p) {
  const std::size_t n = p.nvars();
  std::vector<Polynomial> out(n, Polynomial(n));
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [mono, coef] : p.terms()) {
      if (mono[v] == 0) continue;
      std::vector<Monomial::Exponent> exps = mono.exponents();
      const long e = exps[v];
      --exps[v];
      out[v] += Polynomial::monomial(Monomial(std::move(exps)), coef * GaussianRational(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CompiledPolynomial

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
  terms_.reserve(p.term_count());
  for (const auto& [mono, coef] : p.terms()) {
    terms_.push_back({mono.exponents(), coef.to_complex()});
    for (auto e : mono.exponents()) max_exponent_ = std::max<unsigned>(max_exponent_, e);
  }
}

namespace {

std::vector<std::complex<double>> power_table(std::span<const std::complex<double>> point,
                                              unsigned max_exponent) {
  const std::size_t stride = max_exponent + 1;
  std::vector<std::complex<double>> table(point.size() * stride);
  for (std::size_t v = 0; v < point.size(); ++v) {
    table[v * stride] = 1.0;
    for (unsigned e = 1; e <= max_exponent; ++e) {
      table[v * stride + e] = table[v * stride + e - 1] * point[v];
    }
  }
  return table;
}

}  // namespace

std::complex<double> CompiledPolynomial::operator()(std::span<const std::complex<double>> point) const {
  if (point.size() != nvars_) {
    throw Error(ErrorKind::ShapeMismatch, "evaluation point has " + std::to_string(point.size()) +
                                              " coordinates, polynomial has " +
                                              std::to_string(nvars_) + " variables");
  }
  const auto table = power_table(point, max_exponent_);
  const std::size_t stride = max_exponent_ + 1;
  std::complex<double> sum = 0.0;
  for (const auto& term : terms_) {
    std::complex<double> value = term.coefficient;
    for (std::size_t v = 0; v < nvars_; ++v) value *= table[v * stride + term.exps[v]];
    sum += value;
  }
  return sum;
}

std::complex<double> CompiledPolynomial::value_and_gradient(
    std::span<const std::complex<double>> point, std::span<std::complex<double>> gradient) const {
  if (point.size() != nvars_ || gradient.size() != nvars_) {
    throw Error(ErrorKind::ShapeMismatch, "gradient evaluation size mismatch");
  }
  const auto table = power_table(point, max_exponent_);
  const std::size_t stride = max_exponent_ + 1;
  std::fill(gradient.begin(), gradient.end(), std::complex<double>(0.0));
  std::complex<double> sum = 0.0;
  for (const auto& term : terms_) {
    std::complex<double> value = term.coefficient;
    for (std::size_t v = 0; v < nvars_; ++v) value *= table[v * stride + term.exps[v]];
    sum += value;
    for (std::size_t v = 0; v < nvars_; ++v) {
      const auto e = term.exps[v];
      if (e == 0) continue;
      std::complex<double> partial = term.coefficient * static_cast<double>(e);
      for (std::size_t w = 0; w < nvars_; ++w) {
        partial *= table[w * stride + (w == v ? e - 1 : term.exps[w])];
      }
      gradient[v] += partial;
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Determinants

namespace {

std::size_t check_square(const PolyGrid& grid) {
  const std::size_t n = grid.size();
  for (const auto& row : grid) {
    if (row.size() != n) throw Error(ErrorKind::ShapeMismatch, "polynomial grid is not square");
  }
  if (n > kMaxSymbolicSize) {
    throw Error(ErrorKind::CapacityExceeded,
                "symbolic determinant of size " + std::to_string(n) + " exceeds " +
                    std::to_string(kMaxSymbolicSize));
  }
  std::size_t nvars = n == 0 ? 0 : grid[0][0].nvars();
  for (const auto& row : grid) {
    for (const auto& p : row) {
      if (p.nvars() != nvars) throw Error(ErrorKind::ShapeMismatch, "mixed variable counts in grid");
    }
  }
  return nvars;
}

}  // namespace

Polynomial det_poly(const PolyGrid& grid) {
  const std::size_t nvars = check_square(grid);
  const std::size_t n = grid.size();
  if (n == 0) return Polynomial::constant(0, 1);

  // minors[mask] = det(rows 0..r-1, columns in mask), r = popcount(mask).
  std::vector<std::optional<Polynomial>> minors(std::size_t{1} << n);
  minors[0] = Polynomial::constant(nvars, 1);
  for (std::size_t row = 0; row < n; ++row) {
    std::vector<std::optional<Polynomial>> next(minors.size());
    for (std::size_t mask = 0; mask < minors.size(); ++mask) {
      if (!minors[mask] || minors[mask]->is_zero()) continue;
      for (std::size_t col = 0; col < n; ++col) {
        const std::size_t bit = std::size_t{1} << col;
        if ((mask & bit) != 0 || grid[row][col].is_zero()) continue;
        // Expanding along the last row: sign counts chosen columns right of col.
        const int later = std::popcount(mask & ~((bit << 1) - 1));
        Polynomial term = grid[row][col] * *minors[mask];
        auto& slot = next[mask | bit];
        if (!slot) slot = Polynomial(nvars);
        if (later % 2 == 0) {
          *slot += term;
        } else {
          *slot -= term;
        }
      }
    }
    minors = std::move(next);
  }
  auto& full = minors.back();
  return full ? *full : Polynomial(nvars);
}

Polynomial pfaffian_poly(const PolyGrid& grid) {
  const std::size_t nvars = check_square(grid);
  const std::size_t n = grid.size();
  if (n % 2 != 0) throw Error(ErrorKind::ShapeMismatch, "pfaffian needs an even-sized grid");
  if (n == 0) return Polynomial::constant(0, 1);

  std::map<std::size_t, Polynomial> memo;
  auto rec = [&](auto&& self, std::size_t mask) -> Polynomial {
    if (mask == 0) return Polynomial::constant(nvars, 1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    }
    Polynomial sum(nvars);
    const std::size_t first = idx[0];
    for (std::size_t k = 1; k < idx.size(); ++k) {
      const auto& entry = grid[first][idx[k]];
      if (entry.is_zero()) continue;
      const std::size_t rest = mask & ~(std::size_t{1} << first) & ~(std::size_t{1} << idx[k]);
      Polynomial term = entry * self(self, rest);
      if (k % 2 == 1) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    memo.emplace(mask, sum);
    return sum;
  };
  return rec(rec, (std::size_t{1} << n) - 1);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedInput,
                what + " at position " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"",
                {static_cast<int>(pos_)});
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        Polynomial divisor = unary();
        if (!divisor.is_constant() || divisor.is_zero()) fail("division by a non-constant or zero");
        acc = acc.scaled(GaussianRational(1) / divisor.constant_term());
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an integer exponent");
      base = pow(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class value(std::string(text_.substr(start, pos_ - start)));
      return Polynomial::constant(names_.size(), GaussianRational(mpq_class(value)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t v = 0; v < names_.size(); ++v) {
        if (names_[v] == name) return Polynomial::variable(names_.size(), v);
      }
      if (name == "i") return Polynomial::constant(names_.size(), GaussianRational(0, 1));
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::span<const std::string> names) {
  return Parser(text, names).parse();
}

std::string factored_string(std::span<const PolyFactor> factors, std::span<const std::string> names) {
  std::string out;
  for (const auto& f : factors) {
    if (f.multiplicity == 0) continue;
    if (!out.empty()) out += "*";
    std::string body = f.poly.to_string(names);
    const bool bare = f.poly.term_count() == 1 &&
                      f.poly.leading_coefficient() == GaussianRational(1) &&
                      (f.multiplicity == 1 || body.find_first_of("*^") == std::string::npos);
    out += bare ? body : "(" + body + ")";
    if (f.multiplicity > 1) out += "^" + std::to_string(f.multiplicity);
  }
  return out.empty() ? "1" : out;
}

}  // namespace chol
