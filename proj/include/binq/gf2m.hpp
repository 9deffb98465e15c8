#pragma once

#include <cstdint>
#include <vector>

namespace binq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Packed polynomials over F2: bit i is the coefficient of x^i.
u128 clmul(u64 a, u64 b);
int bitdeg(u64 p);
int bitdeg128(u128 p);

// a*b mod f, deg f = m <= 63, deg a,b < m. f need not be irreducible.
u64 mulmod_f2(u64 a, u64 b, u64 f, int m);
u64 gcd_f2(u64 a, u64 b);

bool is_irreducible_f2(u64 f);
bool is_primitive_f2(u64 f);
u64 least_irreducible_f2(int m);
u64 least_primitive_f2(int m);
// Default defining polynomial used by the tower: least primitive up to
// degree 32, least irreducible above.
u64 default_modulus(int m);

std::vector<u64> prime_factors(u64 n);

// GF(2^m), m <= 63, polynomial basis.
class Field {
public:
    Field() = default;
    Field(int m, u64 modulus);

    int m() const { return m_; }
    u64 modulus() const { return poly_; }
    u64 size() const { return u64(1) << m_; }
    u64 mask() const { return mask_; }

    u64 mul(u64 a, u64 b) const {
        if (tables_) {
            if (!a || !b) return 0;
            u64 s = u64(log_[a]) + log_[b];
            return exp_[s];
        }
        return reduce(clmul(a, b));
    }
    u64 sqr(u64 a) const { return mul(a, a); }
    u64 inv(u64 a) const;
    u64 div(u64 a, u64 b) const { return mul(a, inv(b)); }
    u64 pow(u64 a, u64 e) const;
    // x^(2^k)
    u64 frob2(u64 a, int k) const;
    u64 sqrt(u64 a) const;
    int trace(u64 a) const { return __builtin_parityll(a & trmask_); }
    // a generator of the multiplicative group
    u64 generator() const { return gen_; }
    bool has_tables() const { return tables_; }

    u64 reduce(u128 p) const;

private:
    int m_ = 0;
    u64 poly_ = 0, tail_ = 0, mask_ = 0, gen_ = 0, trmask_ = 0;
    bool tables_ = false;
    std::vector<std::uint32_t> log_, exp_;
    std::vector<u64> sqrt_basis_;
};

}  // namespace binq
