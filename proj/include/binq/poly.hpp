#pragma once

#include <vector>

#include "binq/gf2m.hpp"

namespace binq {

// Dense univariate polynomial, coefficients low to high, no trailing zeros.
using Poly = std::vector<u64>;

namespace poly {

void trim(Poly& p);
int deg(const Poly& p);
Poly add(const Poly& a, const Poly& b);
Poly mul(const Field& F, const Poly& a, const Poly& b);
Poly scale(const Field& F, const Poly& a, u64 s);
void divmod(const Field& F, const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly mod(const Field& F, const Poly& a, const Poly& b);
Poly div_exact(const Field& F, const Poly& a, const Poly& b);
Poly monic(const Field& F, const Poly& a);
Poly gcd(const Field& F, Poly a, Poly b);
Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m);
// a^(2^k) mod m
Poly frobmod(const Field& F, Poly a, long k, const Poly& m);
u64 eval(const Field& F, const Poly& p, u64 x);
Poly deriv(const Poly& p);

// All distinct roots of p lying in F, sorted.
std::vector<u64> roots(const Field& F, const Poly& p);
// Distinct-degree split: factor j (index j-1) is the product of the monic
// irreducible factors of degree j of the squarefree part, for j <= maxdeg.
// x^(2^(step*j)) is the relevant Frobenius, step = log2 of the base field size
// over which p is considered (p must have coefficients in that subfield).
std::vector<Poly> distinct_degree(const Field& F, const Poly& p, int step, int maxdeg);

}  // namespace poly
}  // namespace binq
