#include "binq/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace binq::poly {

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const Poly& p) { return int(p.size()) - 1; }

Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); i++) r[i] ^= a[i];
    for (size_t i = 0; i < b.size(); i++) r[i] ^= b[i];
    trim(r);
    return r;
}

Poly mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); j++) r[i + j] ^= F.mul(a[i], b[j]);
    }
    trim(r);
    return r;
}

Poly scale(const Field& F, const Poly& a, u64 s) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); i++) r[i] = F.mul(a[i], s);
    trim(r);
    return r;
}

void divmod(const Field& F, const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    r = a;
    trim(r);
    int db = deg(b);
    if (deg(r) < db) {
        q.clear();
        return;
    }
    q.assign(r.size() - db, 0);
    u64 li = F.inv(b.back());
    for (int i = deg(r); i >= db; i--) {
        u64 c = r[i];
        if (!c) continue;
        c = F.mul(c, li);
        q[i - db] = c;
        for (int j = 0; j <= db; j++) r[i - db + j] ^= F.mul(c, b[j]);
    }
    trim(q);
    trim(r);
}

Poly mod(const Field& F, const Poly& a, const Poly& b) {
    Poly q, r;
    divmod(F, a, b, q, r);
    return r;
}

Poly div_exact(const Field& F, const Poly& a, const Poly& b) {
    Poly q, r;
    divmod(F, a, b, q, r);
    if (!r.empty()) throw std::logic_error("inexact polynomial division");
    return q;
}

Poly monic(const Field& F, const Poly& a) {
    if (a.empty()) return a;
    return scale(F, a, F.inv(a.back()));
}

Poly gcd(const Field& F, Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

Poly frobmod(const Field& F, Poly a, long k, const Poly& m) {
    a = mod(F, a, m);
    for (long i = 0; i < k; i++) {
        // squaring is coefficientwise in characteristic 2
        Poly s(a.empty() ? 0 : 2 * a.size() - 1, 0);
        for (size_t j = 0; j < a.size(); j++) s[2 * j] = F.sqr(a[j]);
        a = mod(F, s, m);
    }
    return a;
}

u64 eval(const Field& F, const Poly& p, u64 x) {
    u64 r = 0;
    for (int i = deg(p); i >= 0; i--) r = F.mul(r, x) ^ p[i];
    return r;
}

Poly deriv(const Poly& p) {
    Poly r(p.size() > 1 ? p.size() - 1 : 0, 0);
    for (size_t i = 1; i < p.size(); i++)
        if (i & 1) r[i - 1] = p[i];
    trim(r);
    return r;
}

static void split_roots(const Field& F, const Poly& g, std::vector<u64>& out) {
    int d = deg(g);
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(F.div(g[0], g[1]));
        return;
    }
    // trace splitting: gcd(g, Tr(beta X)) for beta running over a basis
    for (int j = 0; j < F.m(); j++) {
        Poly t, acc;
        t = mod(F, Poly{0, u64(1) << j}, g);
        acc = t;
        for (int i = 1; i < F.m(); i++) {
            t = frobmod(F, t, 1, g);
            acc = add(acc, t);
        }
        Poly h = gcd(F, g, acc);
        if (deg(h) > 0 && deg(h) < d) {
            split_roots(F, h, out);
            split_roots(F, div_exact(F, g, h), out);
            return;
        }
    }
    throw std::logic_error("root splitting failed");
}

std::vector<u64> roots(const Field& F, const Poly& p0) {
    Poly p = p0;
    trim(p);
    std::vector<u64> out;
    if (deg(p) <= 0) return out;
    Poly x{0, 1};
    Poly xq = frobmod(F, x, F.m(), p);
    Poly g = gcd(F, p, add(xq, x));
    split_roots(F, g, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Poly> distinct_degree(const Field& F, const Poly& p0, int step, int maxdeg) {
    std::vector<Poly> out(maxdeg);
    Poly p = monic(F, p0);
    if (deg(p) <= 0) return out;
    Poly x{0, 1};
    Poly h = mod(F, x, p);
    for (int j = 1; j <= maxdeg && deg(p) > 0; j++) {
        h = frobmod(F, h, step, p);
        Poly g = gcd(F, p, add(h, x));
        if (deg(g) > 0) {
            out[j - 1] = g;
            // strip these factors with their multiplicities
            for (;;) {
                Poly c = gcd(F, p, g);
                if (deg(c) <= 0) break;
                p = div_exact(F, p, c);
            }
            h = mod(F, h, p);
        }
    }
    return out;
}

}  // namespace binq::poly
