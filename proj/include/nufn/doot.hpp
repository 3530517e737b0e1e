#pragma once

/// Matrix elements of operator expressions under diagonal normal ordering.
///
/// Inside #...# the raising and lowering operators A+ and A- commute and
/// behave as c-numbers, so an expression can be canonicalized with plain
/// commutative rewriting (products of exponentials merge, (e^X)^k becomes
/// e^{kX}) and then evaluated between coherent states by the eigenvalue
/// rules  A-|z> = z|z>,  <z|A+ = conj(z)<z|.
///
/// Text syntax, used by the command-line front end:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?             exponent must be a real constant
///   primary := number | number 'i' | 'i' | 'Ap' | 'Am' | variable
///            | 'conj' '(' expr ')'                argument must be a constant
///            | 'exp' '(' expr ')'
///            | 'nu' '[' p ',' q ';' a-list ';' b-list ']' '(' expr ')'
///            | '#' expr '#' | '(' expr ')'
///
/// e.g.  nu[1,1;1;2](#exp(z*Ap - conj(z)*Am)#)  or  #Ap^2*Am# + 0.5i.
/// Nested #...# is rejected by the parser; it carries no extra meaning.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nufn/coherent.hpp"
#include "nufn/error.hpp"
#include "nufn/format.hpp"
#include "nufn/nu.hpp"
#include "nufn/quadrature.hpp"
#include "nufn/special.hpp"

namespace nufn::doot {

/// Immutable expression tree over A+, A-, complex scalars and the wrappers
/// exp, nu_{p,q} and #...#. Copies share structure.
class Expr {
 public:
  enum class Kind { raise, lower, scalar, sum, product, power, exp, nu, ordered };

  static Expr raise() { return Expr(Node{Kind::raise}); }
  static Expr lower() { return Expr(Node{Kind::lower}); }
  static Expr scalar(complex v) {
    Node n{Kind::scalar};
    n.value = v;
    return Expr(std::move(n));
  }
  static Expr sum(std::vector<Expr> terms) {
    if (terms.empty()) return scalar(0.0);
    if (terms.size() == 1) return terms.front();
    Node n{Kind::sum};
    n.children = std::move(terms);
    return Expr(std::move(n));
  }
  static Expr product(std::vector<Expr> factors) {
    if (factors.empty()) return scalar(1.0);
    if (factors.size() == 1) return factors.front();
    Node n{Kind::product};
    n.children = std::move(factors);
    return Expr(std::move(n));
  }
  static Expr power(Expr base, double exponent) {
    Node n{Kind::power};
    n.exponent = exponent;
    n.children = {std::move(base)};
    return Expr(std::move(n));
  }
  static Expr exp(Expr arg) { return unary(Kind::exp, std::move(arg)); }
  static Expr ordered(Expr inner) { return unary(Kind::ordered, std::move(inner)); }
  static Expr nu(StructureFn family, Expr arg) {
    Node n{Kind::nu};
    n.family = std::move(family);
    n.children = {std::move(arg)};
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_scalar() const { return kind() == Kind::scalar; }
  complex value() const { return node_->value; }
  double exponent() const { return node_->exponent; }
  const StructureFn& family() const { return node_->family; }
  const std::vector<Expr>& children() const { return node_->children; }
  const Expr& child() const { return node_->children.front(); }

  friend bool operator==(const Expr& x, const Expr& y) {
    if (x.node_ == y.node_) return true;
    const Node& a = *x.node_;
    const Node& b = *y.node_;
    return a.kind == b.kind && a.value == b.value && a.exponent == b.exponent && a.family == b.family &&
           a.children == b.children;
  }

  std::string to_string() const {
    switch (kind()) {
      case Kind::raise: return "Ap";
      case Kind::lower: return "Am";
      case Kind::scalar: {
        complex v = value();
        if (v.imag() == 0.0) return format_number(v.real());
        if (v.real() == 0.0) return format_number(v.imag()) + "i";
        return "(" + format_complex(v) + ")";
      }
      case Kind::sum: {
        std::string out;
        for (std::size_t i = 0; i < children().size(); ++i) out += (i ? " + " : "") + children()[i].to_string();
        return out;
      }
      case Kind::product: {
        std::string out;
        for (std::size_t i = 0; i < children().size(); ++i) {
          const Expr& c = children()[i];
          out += (i ? "*" : "") + (c.kind() == Kind::sum ? "(" + c.to_string() + ")" : c.to_string());
        }
        return out;
      }
      case Kind::power: {
        const Expr& b = child();
        bool atom = b.kind() == Kind::raise || b.kind() == Kind::lower || b.kind() == Kind::exp ||
                    b.kind() == Kind::nu || b.kind() == Kind::ordered ||
                    (b.is_scalar() && b.value().imag() == 0.0 && b.value().real() >= 0.0);
        return (atom ? b.to_string() : "(" + b.to_string() + ")") + "^" + format_number(exponent());
      }
      case Kind::exp: return "exp(" + child().to_string() + ")";
      case Kind::nu: {
        const auto& hp = family().params();
        std::string out = "nu[" + std::to_string(hp.p()) + "," + std::to_string(hp.q()) + ";";
        for (std::size_t i = 0; i < hp.a.size(); ++i) out += (i ? "," : "") + format_number(hp.a[i]);
        out += ";";
        for (std::size_t i = 0; i < hp.b.size(); ++i) out += (i ? "," : "") + format_number(hp.b[i]);
        return out + "](" + child().to_string() + ")";
      }
      case Kind::ordered: return "#" + child().to_string() + "#";
    }
    return "?";
  }

 private:
  struct Node {
    Kind kind;
    complex value{};
    double exponent = 1.0;
    std::vector<Expr> children{};
    StructureFn family{};
  };

  explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  static Expr unary(Kind k, Expr arg) {
    Node n{k};
    n.children = {std::move(arg)};
    return Expr(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr x, Expr y) { return Expr::sum({std::move(x), std::move(y)}); }
inline Expr operator*(Expr x, Expr y) { return Expr::product({std::move(x), std::move(y)}); }
inline Expr operator-(Expr x) { return Expr::product({Expr::scalar(-1.0), std::move(x)}); }
inline Expr operator-(Expr x, Expr y) { return std::move(x) + -std::move(y); }

namespace detail {

// Exponents of A+ and A- carried by a canonical monomial.
inline std::pair<double, double> symbol_degrees(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::raise: return {1.0, 0.0};
    case Expr::Kind::lower: return {0.0, 1.0};
    case Expr::Kind::power:
      if (e.child().kind() == Expr::Kind::raise) return {e.exponent(), 0.0};
      if (e.child().kind() == Expr::Kind::lower) return {0.0, e.exponent()};
      return {0.0, 0.0};
    case Expr::Kind::product: {
      std::pair<double, double> acc{0.0, 0.0};
      for (const auto& c : e.children()) {
        auto [i, j] = symbol_degrees(c);
        acc.first += i;
        acc.second += j;
      }
      return acc;
    }
    default: return {0.0, 0.0};
  }
}

inline Expr symbol_power(Expr::Kind k, double exponent) {
  Expr sym = k == Expr::Kind::raise ? Expr::raise() : Expr::lower();
  return exponent == 1.0 ? sym : Expr::power(sym, exponent);
}

Expr canonical(const Expr& e);

inline Expr canonical_product(const std::vector<Expr>& raw) {
  std::vector<Expr> flat;
  auto push = [&](auto&& self, const Expr& f) -> void {
    if (f.kind() == Expr::Kind::product)
      for (const auto& c : f.children()) self(self, c);
    else
      flat.push_back(f);
  };
  for (const auto& f : raw) push(push, canonical(f));

  complex coef{1.0, 0.0};
  double raise_deg = 0.0, lower_deg = 0.0;
  std::vector<Expr> exp_args;
  std::vector<Expr> others;
  for (const auto& f : flat) {
    switch (f.kind()) {
      case Expr::Kind::scalar: coef *= f.value(); break;
      case Expr::Kind::raise: raise_deg += 1.0; break;
      case Expr::Kind::lower: lower_deg += 1.0; break;
      case Expr::Kind::power:
        if (f.child().kind() == Expr::Kind::raise) {
          raise_deg += f.exponent();
          break;
        }
        if (f.child().kind() == Expr::Kind::lower) {
          lower_deg += f.exponent();
          break;
        }
        others.push_back(f);
        break;
      case Expr::Kind::exp: exp_args.push_back(f.child()); break;
      default: others.push_back(f);
    }
  }
  if (coef == complex{}) return Expr::scalar(0.0);

  std::vector<Expr> out;
  if (!exp_args.empty()) {
    Expr merged = canonical(Expr::sum(exp_args));
    if (merged.is_scalar())
      coef *= std::exp(merged.value());
    else
      others.push_back(Expr::exp(merged));
  }
  if (coef != complex{1.0, 0.0}) out.push_back(Expr::scalar(coef));
  if (raise_deg != 0.0) out.push_back(symbol_power(Expr::Kind::raise, raise_deg));
  if (lower_deg != 0.0) out.push_back(symbol_power(Expr::Kind::lower, lower_deg));
  std::stable_sort(others.begin(), others.end(),
                   [](const Expr& x, const Expr& y) { return x.to_string() < y.to_string(); });
  for (auto& o : others) out.push_back(std::move(o));
  if (out.empty()) return Expr::scalar(coef);
  return Expr::product(std::move(out));
}

inline Expr canonical_sum(const std::vector<Expr>& raw) {
  std::vector<Expr> flat;
  auto push = [&](auto&& self, const Expr& t) -> void {
    if (t.kind() == Expr::Kind::sum)
      for (const auto& c : t.children()) self(self, c);
    else
      flat.push_back(t);
  };
  for (const auto& t : raw) push(push, canonical(t));

  complex constant{};
  struct Group {
    std::string key;
    std::vector<Expr> rest;
    complex coef;
    double raise_deg, lower_deg;
  };
  std::vector<Group> groups;
  for (const auto& t : flat) {
    if (t.is_scalar()) {
      constant += t.value();
      continue;
    }
    complex coef{1.0, 0.0};
    std::vector<Expr> rest;
    if (t.kind() == Expr::Kind::product && t.children().front().is_scalar()) {
      coef = t.children().front().value();
      rest.assign(t.children().begin() + 1, t.children().end());
    } else if (t.kind() == Expr::Kind::product) {
      rest = t.children();
    } else {
      rest = {t};
    }
    Expr monomial = Expr::product(rest);
    std::string key = monomial.to_string();
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.key == key; });
    if (it != groups.end()) {
      it->coef += coef;
    } else {
      auto [i, j] = symbol_degrees(monomial);
      groups.push_back({key, std::move(rest), coef, i, j});
    }
  }
  std::stable_sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) {
    if (x.raise_deg != y.raise_deg) return x.raise_deg > y.raise_deg;
    if (x.lower_deg != y.lower_deg) return x.lower_deg < y.lower_deg;
    return x.key < y.key;
  });

  std::vector<Expr> out;
  for (auto& g : groups) {
    if (g.coef == complex{}) continue;
    std::vector<Expr> factors;
    if (g.coef != complex{1.0, 0.0}) factors.push_back(Expr::scalar(g.coef));
    for (auto& r : g.rest) factors.push_back(r);
    out.push_back(Expr::product(std::move(factors)));
  }
  if (constant != complex{} || out.empty()) out.push_back(Expr::scalar(constant));
  return Expr::sum(std::move(out));
}

inline Expr canonical(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::raise:
    case K::lower:
    case K::scalar: return e;
    case K::sum: return canonical_sum(e.children());
    case K::product: return canonical_product(e.children());
    case K::power: {
      double k = e.exponent();
      Expr base = canonical(e.child());
      if (k == 0.0) return Expr::scalar(1.0);
      if (k == 1.0) return base;
      if (base.is_scalar()) {
        if (base.value() == complex{} && k < 0.0) throw domain_error("zero raised to a negative power");
        return Expr::scalar(complex_pow(base.value(), k));
      }
      if (base.kind() == K::exp) return canonical(Expr::exp(Expr::scalar(k) * base.child()));
      if (base.kind() == K::power && std::floor(k) == k &&
          (base.child().kind() == K::raise || base.child().kind() == K::lower))
        return symbol_power(base.child().kind(), base.exponent() * k);
      if (base.kind() == K::product && std::floor(k) == k) {
        // Integer powers distribute over commuting factors.
        std::vector<Expr> factors;
        for (const auto& c : base.children()) factors.push_back(Expr::power(c, k));
        return canonical_product(factors);
      }
      return Expr::power(base, k);
    }
    case K::exp: {
      Expr arg = canonical(e.child());
      if (arg.is_scalar()) return Expr::scalar(std::exp(arg.value()));
      return Expr::exp(arg);
    }
    case K::nu: return Expr::nu(e.family(), canonical(e.child()));
    case K::ordered: {
      Expr inner = canonical(e.child());
      if (inner.is_scalar() || inner.kind() == K::ordered) return inner;
      return Expr::ordered(inner);
    }
  }
  throw unsupported_node("normal_order: unknown node kind");
}

}  // namespace detail

/// Canonical form under commuting A+/A-: sums and products flattened,
/// constants folded, A+ powers ahead of A- powers, exponentials merged into
/// one exp(X + Y + ...), (e^X)^k rewritten as e^{kX}. Idempotent.
inline Expr normal_order(const Expr& e) { return detail::canonical(e); }

struct MatrixElementQuery {
  complex bra_label;
  complex ket_label;
  Expr expr;
};

/// Numeric value of an expression with A+ -> raise_value and A- -> lower_value.
inline complex evaluate(const Expr& e, complex raise_value, complex lower_value, const QuadSpec& spec = {}) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::raise: return raise_value;
    case K::lower: return lower_value;
    case K::scalar: return e.value();
    case K::sum: {
      complex acc{};
      for (const auto& c : e.children()) acc += evaluate(c, raise_value, lower_value, spec);
      return acc;
    }
    case K::product: {
      complex acc{1.0, 0.0};
      for (const auto& c : e.children()) acc *= evaluate(c, raise_value, lower_value, spec);
      return acc;
    }
    case K::power: return complex_pow(evaluate(e.child(), raise_value, lower_value, spec), e.exponent());
    case K::exp: return std::exp(evaluate(e.child(), raise_value, lower_value, spec));
    case K::nu: return nu_general(e.family(), evaluate(e.child(), raise_value, lower_value, spec), spec);
    case K::ordered: return evaluate(e.child(), raise_value, lower_value, spec);
  }
  throw unsupported_node("evaluate: unknown node kind");
}

/// <bra| expr |ket> for coherent states of family `sf`: the expression is
/// normal-ordered, A+ is replaced by conj(bra) and A- by ket, and the result
/// is multiplied by the overlap <bra|ket> when the labels differ.
inline complex scalarize(const MatrixElementQuery& q, const StructureFn& sf, const QuadSpec& spec = {}) {
  Expr ordered = normal_order(q.expr);
  complex v = evaluate(ordered, std::conj(q.bra_label), q.ket_label, spec);
  if (q.bra_label != q.ket_label) v *= overlap_continuous(sf, q.bra_label, q.ket_label, spec);
  return v;
}

/// The displacement operator #exp(z A+ - conj(z) A-)#.
inline Expr displacement(complex z) {
  return Expr::ordered(
      Expr::exp(Expr::scalar(z) * Expr::raise() - Expr::scalar(std::conj(z)) * Expr::lower()));
}

/// <z| nu_{p,q}(D(z)) |z>. Under the ordering the exponent scalarizes to
/// |z|^2 - |z|^2 = 0, so the E-integrand is 1/rho(E) and the result is
/// nu_{p,q}(1) for every z.
inline complex displacement_expectation(const StructureFn& sf, complex z, const QuadSpec& spec = {}) {
  if (convergence_domain(sf) != ConvergenceDomain::entire)
    throw domain_error("displacement_expectation: needs an entire family (p <= q)");
  return scalarize({z, z, Expr::nu(sf, displacement(z))}, sf, spec);
}

/// One matrix element computed two ways: by scalarizing the operator
/// expression, and from the closed form built on nu(e^{+-|z|^2}) <z|z2>.
struct MatrixElementPair {
  std::string expression;
  complex direct;
  complex factored;
};

struct ExpArgumentReport {
  complex overlap;  // <z|z2>; exactly 1 when z2 == z
  std::array<MatrixElementPair, 4> elements;
};

/// The elements <z|nu(e^{-conj(z) A-})|z2>, <z|nu(e^{z A+})|z2>,
/// <z|#nu(e^{z A+}) nu(e^{-conj(z) A-})#|z2> and its diagonal z2 = z.
/// The closed forms assume the eigenvalue of A- is z; off the diagonal the
/// scalarized value carries conj(z) z2 instead, and the two differ.
inline ExpArgumentReport exp_argument_matrix_elements(const StructureFn& sf, complex z, complex z2,
                                                      const QuadSpec& spec = {}) {
  if (convergence_domain(sf) != ConvergenceDomain::entire)
    throw domain_error("exp_argument_matrix_elements: needs an entire family (p <= q)");
  const double r2 = std::norm(z);
  const complex nu_plus = nu_general(sf, std::exp(r2), spec);
  const complex nu_minus = nu_general(sf, std::exp(-r2), spec);

  Expr lower_part = Expr::nu(sf, Expr::exp(Expr::scalar(-std::conj(z)) * Expr::lower()));
  Expr raise_part = Expr::nu(sf, Expr::exp(Expr::scalar(z) * Expr::raise()));
  Expr both = Expr::ordered(raise_part * lower_part);

  ExpArgumentReport r;
  r.overlap = (z == z2) ? complex{1.0, 0.0} : overlap_continuous(sf, z, z2, spec);
  r.elements[0] = {"nu(exp(-conj(z)*Am))", scalarize({z, z2, lower_part}, sf, spec), nu_minus * r.overlap};
  r.elements[1] = {"nu(exp(z*Ap))", scalarize({z, z2, raise_part}, sf, spec), nu_plus * r.overlap};
  r.elements[2] = {"#nu(exp(z*Ap))*nu(exp(-conj(z)*Am))#", scalarize({z, z2, both}, sf, spec),
                   nu_plus * nu_minus * r.overlap};
  r.elements[3] = {"#nu(exp(z*Ap))*nu(exp(-conj(z)*Am))# (diagonal)", scalarize({z, z, both}, sf, spec),
                   nu_plus * nu_minus};
  return r;
}

/// Named constants available to the parser, e.g. {"z", 0.5+0.5i}.
using Bindings = std::map<std::string, complex, std::less<>>;

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, const Bindings& vars) : src_(src), vars_(vars) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw parse_error("parse error: " + what, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_space();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    std::vector<Expr> terms{parse_term()};
    while (true) {
      if (accept('+'))
        terms.push_back(parse_term());
      else if (accept('-'))
        terms.push_back(-parse_term());
      else
        break;
    }
    return Expr::sum(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors{parse_unary()};
    while (true) {
      if (accept('*')) {
        factors.push_back(parse_unary());
      } else if (accept('/')) {
        factors.push_back(Expr::power(parse_unary(), -1.0));
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      std::size_t at = pos_;
      Expr k = normal_order(parse_unary());
      if (!k.is_scalar() || k.value().imag() != 0.0) {
        pos_ = at;
        fail("exponent must be a real constant");
      }
      return Expr::power(base, k.value().real());
    }
    return base;
  }

  double parse_number_literal() {
    skip_space();
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ == start || (pos_ == start + 1 && src_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;
    }
    return std::strtod(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr);
  }

  std::string parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::vector<double> parse_list(char terminator) {
    std::vector<double> out;
    if (peek(terminator)) return out;
    while (true) {
      bool negative = accept('-');
      double v = parse_number_literal();
      out.push_back(negative ? -v : v);
      if (!accept(',')) break;
    }
    return out;
  }

  Expr parse_nu() {
    std::size_t at = pos_;
    expect('[');
    double p = parse_number_literal();
    expect(',');
    double q = parse_number_literal();
    expect(';');
    std::vector<double> a = parse_list(';');
    expect(';');
    std::vector<double> b = parse_list(']');
    expect(']');
    if (p != std::floor(p) || q != std::floor(q) || a.size() != static_cast<std::size_t>(p) ||
        b.size() != static_cast<std::size_t>(q)) {
      pos_ = at;
      fail("nu[p,q;a;b] needs p a-values and q b-values");
    }
    StructureFn family;
    try {
      family = StructureFn(std::move(a), std::move(b));
    } catch (const domain_error& e) {
      pos_ = at;
      fail(e.what());
    }
    expect('(');
    Expr arg = parse_sum();
    expect(')');
    return Expr::nu(std::move(family), std::move(arg));
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = parse_number_literal();
      if (pos_ < src_.size() && src_[pos_] == 'i' &&
          (pos_ + 1 == src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
        ++pos_;
        return Expr::scalar({0.0, v});
      }
      return Expr::scalar(v);
    }
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (c == '#') {
      if (in_order_) fail("nested normal ordering");
      ++pos_;
      in_order_ = true;
      Expr inner = parse_sum();
      expect('#');
      in_order_ = false;
      return Expr::ordered(std::move(inner));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t at = pos_;
      std::string name = parse_identifier();
      if (name == "Ap") return Expr::raise();
      if (name == "Am") return Expr::lower();
      if (name == "exp") {
        expect('(');
        Expr arg = parse_sum();
        expect(')');
        return Expr::exp(std::move(arg));
      }
      if (name == "conj") {
        expect('(');
        std::size_t arg_at = pos_;
        Expr arg = normal_order(parse_sum());
        expect(')');
        if (!arg.is_scalar()) {
          pos_ = arg_at;
          fail("conj() takes a constant argument");
        }
        return Expr::scalar(std::conj(arg.value()));
      }
      if (name == "nu") return parse_nu();
      if (auto it = vars_.find(name); it != vars_.end()) return Expr::scalar(it->second);
      if (name == "i") return Expr::scalar({0.0, 1.0});
      pos_ = at;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view src_;
  const Bindings& vars_;
  std::size_t pos_ = 0;
  bool in_order_ = false;
};

}  // namespace detail

/// Parses the text syntax described at the top of this header.
inline Expr parse_expression(std::string_view text, const Bindings& vars = {}) {
  return detail::Parser(text, vars).parse_all();
}

/// Parses a constant such as "1+2i", "z" or "conj(z)".
inline complex parse_scalar(std::string_view text, const Bindings& vars = {}) {
  Expr e = normal_order(parse_expression(text, vars));
  if (!e.is_scalar()) throw parse_error("expected a constant", 0);
  return e.value();
}

}  // namespace nufn::doot
