#pragma once

// Random structure functions and operator polynomials for property tests.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "nufn/doot.hpp"
#include "oracles.hpp"

namespace gen {

inline nufn::StructureFn entire_family(std::mt19937_64& g) {
  switch (std::uniform_int_distribution<int>(0, 3)(g)) {
    case 0: return nufn::StructureFn::gamma();
    case 1: return nufn::StructureFn({1.0}, {oracle::uniform(g, 0.5, 3.0)});
    case 2: return nufn::StructureFn({}, {oracle::uniform(g, 0.5, 3.0)});
    default:
      return nufn::StructureFn({oracle::uniform(g, 0.3, 2.0)},
                               {oracle::uniform(g, 0.5, 3.0), oracle::uniform(g, 0.5, 3.0)});
  }
}

struct Monomial {
  std::complex<double> coef;
  int raise_deg, lower_deg;
};

/// A polynomial of total degree <= max_degree in A+ and A-.
inline std::vector<Monomial> polynomial(std::mt19937_64& g, int max_degree) {
  std::vector<Monomial> out;
  int terms = std::uniform_int_distribution<int>(1, 6)(g);
  for (int k = 0; k < terms; ++k) {
    int total = std::uniform_int_distribution<int>(0, max_degree)(g);
    int i = std::uniform_int_distribution<int>(0, total)(g);
    out.push_back({{oracle::uniform(g, -2.0, 2.0), oracle::uniform(g, -2.0, 2.0)}, i, total - i});
  }
  return out;
}

/// The polynomial as an expression tree with its factors in shuffled order,
/// so normal ordering has real work to do.
inline nufn::doot::Expr as_expression(const std::vector<Monomial>& poly, std::mt19937_64& g) {
  using nufn::doot::Expr;
  std::vector<Expr> terms;
  for (const auto& m : poly) {
    std::vector<Expr> factors{Expr::scalar(m.coef)};
    for (int i = 0; i < m.raise_deg; ++i) factors.push_back(Expr::raise());
    for (int j = 0; j < m.lower_deg; ++j) factors.push_back(Expr::lower());
    std::shuffle(factors.begin(), factors.end(), g);
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::ordered(Expr::sum(std::move(terms)));
}

/// P(conj z, z) and the sum of term magnitudes, for a relative error scale.
inline std::pair<std::complex<double>, double> evaluate(const std::vector<Monomial>& poly, std::complex<double> z) {
  std::complex<double> acc{};
  double scale = 0.0;
  for (const auto& m : poly) {
    std::complex<double> t = m.coef * std::pow(std::conj(z), m.raise_deg) * std::pow(z, m.lower_deg);
    acc += t;
    scale += std::abs(t);
  }
  return {acc, scale};
}

}  // namespace gen
