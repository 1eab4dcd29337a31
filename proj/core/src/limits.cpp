#include "esq/limits.hpp"

namespace esq {

ClassicalLimit classical_limit_table(Sign sign, int n) {
  ClassicalLimit out;
  out.sign = sign;
  out.n = n;
  const auto a = calculus_coefficients(sign, n);
  for (std::size_t k = 0; k < 4; ++k) out.a[k] = limit_q1(a[k]);

  const StructureTensors& st = structure(n);
  bool classical = true;
  for (int i = 1; i <= n && classical; ++i) {
    classical = limit_q1(st.C.row_entry(i)) == 1;
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
          const bool flip = k == j && l == i;
          const bool kk = k == prime(l, n) && i == prime(j, n);
          classical = classical && limit_q1(st.Rinv.at(k, l, i, j)) == (flip ? 1 : 0) &&
                      limit_q1(st.K.at(k, l, i, j)) == (kk ? 1 : 0);
        }
  }
  out.tensors_classical = classical;
  out.noncommutative = !(out.a[0] == 1 && out.a[1] == 0 && out.a[2] == 0 && out.a[3] == 0);

  const SphereAlgebra x(n);
  const FirstOrderCalculus g(x, sign);
  out.theta_commutator = limit_q1(g.theta_commutator_coefficient());
  return out;
}

std::array<Rational, 4> expected_classical_coefficients(Sign sign, int n) {
  if (sign == Sign::plus) {
    Rational c(2, n - 1);
    c.canonicalize();
    return {Rational(1), Rational(0), -c, c};
  }
  return {Rational(-1), Rational(-2), Rational(0), Rational(2)};
}

Rational expected_theta_commutator_limit(Sign sign) { return sign == Sign::plus ? Rational(0) : Rational(-2); }

std::string to_string(const ClassicalLimit& l) {
  const std::array<std::string, 4> bodies{"x_j*dx_i", "x_i*dx_j", "delta_{ij'}*theta", "x_i*x_j*theta"};
  std::string out = "dx_i*x_j = ";
  bool first = true;
  for (std::size_t k = 0; k < 4; ++k) {
    if (l.a[k] == 0) continue;
    const bool neg = l.a[k] < 0;
    const Rational mag = abs(l.a[k]);
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (mag != 1) out += rational_string(mag) + "*";
    out += bodies[k];
    first = false;
  }
  if (first) out += "0";
  return out;
}

}  // namespace esq
