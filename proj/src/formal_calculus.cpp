#include "gauduchon/formal_calculus.hpp"

namespace gauduchon {

FormalPoint<GaussPoly> lck_symbolic(const std::vector<GaussRational>& a) { return lck_torsion(a, GaussPoly::s()); }

}  // namespace gauduchon
