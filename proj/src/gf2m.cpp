#include "binq/gf2m.hpp"

#include <stdexcept>

namespace binq {

u128 clmul(u64 a, u64 b) {
    if (!a || !b) return 0;
    u128 t[16];
    t[0] = 0;
    t[1] = a;
    for (int i = 2; i < 16; i++) t[i] = (i & 1) ? (t[i - 1] ^ a) : (t[i >> 1] << 1);
    int top = bitdeg(b) & ~3;
    u128 r = 0;
    for (int i = top; i >= 0; i -= 4) r = (r << 4) ^ t[(b >> i) & 15];
    return r;
}

int bitdeg(u64 p) { return p ? 63 - __builtin_clzll(p) : -1; }

int bitdeg128(u128 p) {
    u64 hi = u64(p >> 64);
    if (hi) return 64 + bitdeg(hi);
    return bitdeg(u64(p));
}

static u64 rem128(u128 a, u64 f, int m) {
    int d;
    while ((d = bitdeg128(a)) >= m) a ^= u128(f) << (d - m);
    return u64(a);
}

u64 mulmod_f2(u64 a, u64 b, u64 f, int m) { return rem128(clmul(a, b), f, m); }

u64 gcd_f2(u64 a, u64 b) {
    while (b) {
        int db = bitdeg(b), d;
        while ((d = bitdeg(a)) >= db) a ^= b << (d - db);
        std::swap(a, b);
    }
    return a;
}

// Ben-Or: f irreducible iff gcd(x^(2^i) - x, f) = 1 for i <= m/2.
bool is_irreducible_f2(u64 f) {
    int m = bitdeg(f);
    if (m < 1) return false;
    if (m == 1) return true;
    if (!(f & 1)) return false;
    u64 x = 2, p = 2;
    for (int i = 1; i <= m / 2; i++) {
        p = mulmod_f2(p, p, f, m);
        if (gcd_f2(f, p ^ x) != 1) return false;
    }
    return true;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p * p <= n; p++) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

static u64 powmod_f2(u64 a, u64 e, u64 f, int m) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod_f2(r, a, f, m);
        a = mulmod_f2(a, a, f, m);
        e >>= 1;
    }
    return r;
}

bool is_primitive_f2(u64 f) {
    int m = bitdeg(f);
    if (!is_irreducible_f2(f)) return false;
    if (m == 1) return true;
    u64 ord = (u64(1) << m) - 1;
    u64 x = (m == 1) ? 1 : 2;
    for (u64 p : prime_factors(ord))
        if (powmod_f2(x, ord / p, f, m) == 1) return false;
    return true;
}

u64 least_irreducible_f2(int m) {
    if (m < 1 || m > 63) throw std::invalid_argument("degree out of range");
    if (m == 1) return 3;  // x+1, so that x = 1 generates F2*
    for (u64 low = 1;; low += 2) {
        u64 f = (u64(1) << m) | low;
        if (is_irreducible_f2(f)) return f;
    }
}

u64 least_primitive_f2(int m) {
    if (m < 1 || m > 63) throw std::invalid_argument("degree out of range");
    if (m == 1) return 3;
    for (u64 low = 1;; low += 2) {
        u64 f = (u64(1) << m) | low;
        if (is_primitive_f2(f)) return f;
    }
}

u64 default_modulus(int m) { return m <= 32 ? least_primitive_f2(m) : least_irreducible_f2(m); }

Field::Field(int m, u64 modulus) : m_(m), poly_(modulus) {
    if (m < 1 || m > 63 || bitdeg(modulus) != m) throw std::invalid_argument("bad field degree");
    if (!is_irreducible_f2(modulus)) throw std::invalid_argument("defining polynomial is reducible");
    tail_ = poly_ ^ (u64(1) << m);
    mask_ = (m == 64) ? ~u64(0) : ((u64(1) << m) - 1);

    // generator: x if primitive, otherwise search
    u64 ord = mask_;
    auto facs = prime_factors(ord);
    auto is_gen = [&](u64 g) {
        for (u64 p : facs)
            if (pow(g, ord / p) == 1) return false;
        return true;
    };
    if (m == 1) {
        gen_ = 1;
    } else {
        if (m <= 32) {
            for (u64 g = 2; g <= mask_; g++)
                if (is_gen(g)) { gen_ = g; break; }
        }
    }

    if (m <= 16) {
        u64 n = mask_;
        exp_.assign(2 * n + 1, 0);
        log_.assign(n + 1, 0);
        u64 v = 1;
        for (u64 i = 0; i < n; i++) {
            exp_[i] = std::uint32_t(v);
            log_[v] = std::uint32_t(i);
            v = reduce(clmul(v, gen_));
        }
        for (u64 i = n; i < 2 * n + 1; i++) exp_[i] = exp_[i - n];
        tables_ = true;
    }

    // trace mask: Tr(x^j) for each basis vector
    for (int j = 0; j < m; j++) {
        u64 a = u64(1) << j, s = 0, t = a;
        for (int i = 0; i < m; i++) {
            s ^= t;
            t = mul(t, t);
        }
        if (s & 1) trmask_ |= u64(1) << j;
    }
    sqrt_basis_.resize(m);
    for (int j = 0; j < m; j++) sqrt_basis_[j] = frob2(u64(1) << j, m - 1);
}

u64 Field::reduce(u128 p) const {
    // deg p <= 2m-2, so the high part fits in a word
    u64 hi = u64(p >> m_);
    u64 lo = u64(p) & mask_;
    while (hi) {
        u128 t = clmul(hi, tail_);
        lo ^= u64(t) & mask_;
        hi = u64(t >> m_);
    }
    return lo;
}

u64 Field::pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 Field::inv(u64 a) const {
    if (!a) throw std::domain_error("inverse of zero");
    if (tables_) return exp_[mask_ - log_[a]];
    return pow(a, mask_ - 1);
}

u64 Field::frob2(u64 a, int k) const {
    for (int i = 0; i < k; i++) a = mul(a, a);
    return a;
}

u64 Field::sqrt(u64 a) const {
    if (sqrt_basis_.empty()) return frob2(a, m_ - 1);
    u64 r = 0;
    while (a) {
        int j = __builtin_ctzll(a);
        r ^= sqrt_basis_[j];
        a &= a - 1;
    }
    return r;
}

}  // namespace binq
