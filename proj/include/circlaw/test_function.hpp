#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace circlaw {

using Cplx = std::complex<double>;

// Polynomial in z and zbar: sum of c * z^a * zbar^b terms.
class PolyZZbar {
 public:
  struct Term {
    int a = 0, b = 0;
    Cplx c;
  };

  PolyZZbar() = default;
  explicit PolyZZbar(std::vector<Term> terms) { for (auto& t : terms) add(t.a, t.b, t.c); }

  static PolyZZbar constant(Cplx c) {
    PolyZZbar p;
    p.add(0, 0, c);
    return p;
  }
  static PolyZZbar monomial(int a, int b, Cplx c = 1.0) {
    PolyZZbar p;
    p.add(a, b, c);
    return p;
  }

  void add(int a, int b, Cplx c) {
    if (a < 0 || b < 0) throw std::invalid_argument("monomial exponents must be >= 0");
    if (c == 0.0) return;
    auto& slot = coef_[{a, b}];
    slot += c;
    if (slot == 0.0) coef_.erase({a, b});
  }

  const std::map<std::pair<int, int>, Cplx>& terms() const { return coef_; }
  bool empty() const { return coef_.empty(); }

  Cplx eval(Cplx z) const {
    Cplx zb = std::conj(z);
    Cplx s = 0.0;
    for (const auto& [ab, c] : coef_) s += c * ipow(z, ab.first) * ipow(zb, ab.second);
    return s;
  }

  PolyZZbar dz() const {
    PolyZZbar out;
    for (const auto& [ab, c] : coef_)
      if (ab.first > 0) out.add(ab.first - 1, ab.second, c * static_cast<double>(ab.first));
    return out;
  }

  PolyZZbar dzbar() const {
    PolyZZbar out;
    for (const auto& [ab, c] : coef_)
      if (ab.second > 0) out.add(ab.first, ab.second - 1, c * static_cast<double>(ab.second));
    return out;
  }

  PolyZZbar conjugated() const {
    PolyZZbar out;
    for (const auto& [ab, c] : coef_) out.add(ab.second, ab.first, std::conj(c));
    return out;
  }

  // real iff coefficients satisfy c(b,a) = conj(c(a,b))
  bool is_real(double tol = 1e-12) const {
    for (const auto& [ab, c] : coef_) {
      auto it = coef_.find({ab.second, ab.first});
      Cplx mirror = (it == coef_.end()) ? Cplx(0.0) : it->second;
      if (std::abs(mirror - std::conj(c)) > tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
  }

  bool is_analytic() const {
    for (const auto& [ab, c] : coef_)
      if (ab.second != 0) return false;
    return true;
  }

  int max_degree() const {
    int d = 0;
    for (const auto& [ab, c] : coef_) d = std::max(d, ab.first + ab.second);
    return d;
  }

  PolyZZbar operator*(const PolyZZbar& o) const {
    PolyZZbar out;
    for (const auto& [ab, c] : coef_)
      for (const auto& [ab2, c2] : o.coef_)
        out.add(ab.first + ab2.first, ab.second + ab2.second, c * c2);
    return out;
  }
  PolyZZbar operator+(const PolyZZbar& o) const {
    PolyZZbar out = *this;
    for (const auto& [ab, c] : o.coef_) out.add(ab.first, ab.second, c);
    return out;
  }
  PolyZZbar operator-(const PolyZZbar& o) const {
    PolyZZbar out = *this;
    for (const auto& [ab, c] : o.coef_) out.add(ab.first, ab.second, -c);
    return out;
  }
  PolyZZbar operator*(Cplx s) const {
    PolyZZbar out;
    for (const auto& [ab, c] : coef_) out.add(ab.first, ab.second, c * s);
    return out;
  }

 private:
  static Cplx ipow(Cplx z, int k) {
    Cplx r = 1.0;
    while (k-- > 0) r *= z;
    return r;
  }
  std::map<std::pair<int, int>, Cplx> coef_;
};

class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A C^1 test function: either a polynomial in (z, zbar) with exact Wirtinger
// derivatives, or a blackbox with value/derivative callbacks defined on
// |z| <= domain_radius. Blackboxes may also carry a laplacian and a compact
// support radius for the field-pairing workflow.
class TestFunction {
 public:
  using Fn = std::function<Cplx(Cplx)>;

  static TestFunction poly(PolyZZbar p, std::string name = "poly") {
    TestFunction f;
    f.poly_ = std::move(p);
    f.is_poly_ = true;
    f.name_ = std::move(name);
    f.real_valued_ = f.poly_->is_real();
    return f;
  }

  static TestFunction blackbox(Fn value, Fn dz, Fn dzbar, bool real_valued,
                               double domain_radius = 1.1, std::string name = "blackbox") {
    TestFunction f;
    f.value_ = std::move(value);
    f.dz_ = std::move(dz);
    f.dzbar_ = std::move(dzbar);
    f.real_valued_ = real_valued;
    f.domain_radius_ = domain_radius;
    f.name_ = std::move(name);
    return f;
  }

  bool is_poly() const { return is_poly_; }
  const PolyZZbar& as_poly() const {
    if (!is_poly_) throw CapabilityError("test function is not a polynomial");
    return *poly_;
  }
  bool real_valued() const { return real_valued_; }
  const std::string& name() const { return name_; }
  double domain_radius() const { return is_poly_ ? 1e300 : domain_radius_; }

  std::optional<double> support_radius() const { return support_radius_; }
  void set_support_radius(double r) { support_radius_ = r; }
  void set_laplacian(std::function<double(Cplx)> lap) { laplacian_ = std::move(lap); }

  Cplx eval(Cplx z) const {
    check_domain(z);
    return is_poly_ ? poly_->eval(z) : value_(z);
  }

  Cplx wirtinger_dz(Cplx z) const {
    check_domain(z);
    if (is_poly_) return poly_->dz().eval(z);
    if (!dz_) throw CapabilityError("blackbox lacks a dz callback");
    return dz_(z);
  }

  Cplx wirtinger_dzbar(Cplx z) const {
    check_domain(z);
    if (is_poly_) return poly_->dzbar().eval(z);
    if (!dzbar_) throw CapabilityError("blackbox lacks a dzbar callback");
    return dzbar_(z);
  }

  bool has_derivatives() const { return is_poly_ || (dz_ && dzbar_); }

  // distributional Laplacian, 4 d/dz d/dzbar
  double laplacian(Cplx z) const {
    if (is_poly_) {
      Cplx v = poly_->dz().dzbar().eval(z) * 4.0;
      return v.real();
    }
    if (!laplacian_) throw CapabilityError("blackbox lacks a laplacian callback");
    return laplacian_(z);
  }
  bool has_laplacian() const { return is_poly_ || static_cast<bool>(laplacian_); }

  // restriction to the unit circle
  Cplx boundary(double theta) const { return eval(std::polar(1.0, theta)); }

 private:
  void check_domain(Cplx z) const {
    if (!is_poly_ && std::abs(z) > domain_radius_ + 1e-12)
      throw std::domain_error("point outside the test function domain");
  }

  bool is_poly_ = false;
  std::optional<PolyZZbar> poly_;
  Fn value_, dz_, dzbar_;
  std::function<double(Cplx)> laplacian_;
  bool real_valued_ = false;
  double domain_radius_ = 1.1;
  std::optional<double> support_radius_;
  std::string name_;
};

// Radial bump c (1 - r^2/R^2)^3 on |z| <= R, zero outside. C^2 with a
// continuous Laplacian, compactly supported inside the disk for R < 1.
inline TestFunction radial_bump(double R = 0.8, double amplitude = 1.0) {
  auto u = [R](Cplx z) { return std::norm(z) / (R * R); };
  auto value = [u, amplitude](Cplx z) -> Cplx {
    double s = u(z);
    if (s >= 1.0) return 0.0;
    double w = 1.0 - s;
    return amplitude * w * w * w;
  };
  auto dz = [u, R, amplitude](Cplx z) -> Cplx {
    double s = u(z);
    if (s >= 1.0) return 0.0;
    double w = 1.0 - s;
    return amplitude * (-3.0 * w * w / (R * R)) * std::conj(z);
  };
  auto dzbar = [u, R, amplitude](Cplx z) -> Cplx {
    double s = u(z);
    if (s >= 1.0) return 0.0;
    double w = 1.0 - s;
    return amplitude * (-3.0 * w * w / (R * R)) * z;
  };
  TestFunction f = TestFunction::blackbox(value, dz, dzbar, true, 1e300,
                                          "bump(R=" + std::to_string(R) + ")");
  f.set_support_radius(R);
  f.set_laplacian([u, R, amplitude](Cplx z) -> double {
    double s = u(z);
    if (s >= 1.0) return 0.0;
    return amplitude * (12.0 / (R * R)) * (1.0 - s) * (3.0 * s - 1.0);
  });
  return f;
}

namespace detail {

// Recursive-descent parser for polynomial expressions in z and zbar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*'? factor)*
//   factor := number | 'i' | 'z' ['^' int] | 'zbar' ['^' int]
//           | 'Re' factor | 'Im' factor | '(' expr ')'
// Numbers may be complex literals like 2+3i when parenthesized.
class PolyParser {
 public:
  explicit PolyParser(std::string s) : s_(std::move(s)) {}

  PolyZZbar parse() {
    PolyZZbar p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("test function parse error at position " +
                                std::to_string(pos_) + ": " + why + " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_word(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  PolyZZbar expr() {
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    else eat('+');
    PolyZZbar acc = term();
    if (neg) acc = acc * Cplx(-1.0);
    for (;;) {
      skip_ws();
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  PolyZZbar term() {
    PolyZZbar acc = factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        acc = acc * factor();
        continue;
      }
      // implicit product, e.g. "2 z zbar^2"
      if (pos_ < s_.size() &&
          (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(' ||
           std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
        acc = acc * factor();
        continue;
      }
      return acc;
    }
  }

  int exponent() {
    if (!eat('^')) return 1;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  PolyZZbar factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat_word("zbar")) return PolyZZbar::monomial(0, exponent());
    if (eat_word("z")) return PolyZZbar::monomial(exponent(), 0);
    if (eat_word("i")) return PolyZZbar::constant(Cplx(0.0, 1.0));
    if (eat_word("Re")) {
      PolyZZbar p = factor();
      return (p + p.conjugated()) * Cplx(0.5);
    }
    if (eat_word("Im")) {
      PolyZZbar p = factor();
      return (p - p.conjugated()) * Cplx(0.0, -0.5);
    }
    if (eat('(')) {
      PolyZZbar p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
              s_[pos_] == 'e' || s_[pos_] == 'E' ||
              ((s_[pos_] == '+' || s_[pos_] == '-') &&
               (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
        ++pos_;
      double v = std::stod(s_.substr(start, pos_ - start));
      if (eat_word("i")) return PolyZZbar::constant(Cplx(0.0, v));
      return PolyZZbar::constant(Cplx(v, 0.0));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses either a polynomial expression or a named builtin ("bump",
// "bump:R" with support radius R).
inline TestFunction parse_test_function(const std::string& spec) {
  std::string s = spec;
  auto strip = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  strip(s);
  if (s.rfind("bump", 0) == 0) {
    double R = 0.8;
    auto colon = s.find(':');
    if (colon != std::string::npos) R = std::stod(s.substr(colon + 1));
    if (!(R > 0.0 && R < 1.0))
      throw std::invalid_argument("bump radius must lie in (0,1)");
    return radial_bump(R);
  }
  return TestFunction::poly(detail::PolyParser(s).parse(), s);
}

}  // namespace circlaw
