#include "gauduchon/polynomial.hpp"

namespace gauduchon {

GaussPoly to_gauss(const RationalPoly& p) {
  std::vector<GaussRational> c;
  c.reserve(p.coefficients().size());
  for (const auto& q : p.coefficients()) c.emplace_back(q);
  return GaussPoly(std::move(c));
}

GaussPoly conj(const GaussPoly& p) {
  std::vector<GaussRational> c;
  c.reserve(p.coefficients().size());
  for (const auto& z : p.coefficients()) c.push_back(conj(z));
  return GaussPoly(std::move(c));
}

}  // namespace gauduchon
