#include "binq/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "binq/gf2lin.hpp"

namespace binq {

PowerClasses power_class_data(const Tower& T, int e) {
    const Field& K = T.k();
    u64 q1 = T.q() - 1;
    u64 g = std::gcd(u64(e), q1);
    PowerClasses pc;
    std::map<u64, u64> seen;
    for (u64 x = 1; x <= K.mask(); x++) {
        if (K.pow(x, e) == 1) pc.mu.push_back(x);
        u64 key = K.pow(x, q1 / g);
        if (!seen.count(key)) {
            seen[key] = x;
            pc.reps.push_back(x);
        }
    }
    return pc;
}

std::vector<u64> additive_kernel(const Tower& T, u64 c, u64 f) {
    const Field& K = T.k();
    int m = K.m();
    std::vector<BitVec> cols;
    for (int j = 0; j < m; j++) {
        u64 x = u64(1) << j;
        u64 y = K.mul(c, K.sqr(x)) ^ K.mul(f, x) ^ K.sqrt(x);
        BitVec v(m);
        for (int i = 0; i < m; i++)
            if ((y >> i) & 1) v.set(i);
        cols.push_back(v);
    }
    auto sol = solve_f2(cols, BitVec(m));
    std::vector<u64> basis;
    for (auto& k : sol->kernel) {
        u64 x = 0;
        for (int i = 0; i < m; i++)
            if (k.get(i)) x |= u64(1) << i;
        basis.push_back(x);
    }
    std::vector<u64> out;
    for (u64 s = 0; s < (u64(1) << basis.size()); s++) {
        u64 x = 0;
        for (size_t i = 0; i < basis.size(); i++)
            if ((s >> i) & 1) x ^= basis[i];
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

static Poly septic_poly(const Septic& f) { return Poly{f.c, f.b, 0, f.a, 0, 0, 0, 1}; }

bool septic_irreducible(const Tower& T, const Septic& f) {
    const Field& K = T.k();
    Poly p = septic_poly(f);
    Poly x{0, 1};
    // prime degree: no root in k and x^(q^7) = x mod p
    Poly xq = poly::frobmod(K, x, T.n(), p);
    if (poly::deg(poly::gcd(K, p, poly::add(xq, x))) > 0) return false;
    Poly x7 = poly::frobmod(K, x, 7L * T.n(), p);
    return poly::add(x7, x).empty();
}

SepticSets septic_sets(const Tower& T) {
    const Field& K = T.k();
    SepticSets out;
    Poly x{0, 1};
    for (u64 a = 0; a <= K.mask(); a++)
        for (u64 b = 0; b <= K.mask(); b++)
            for (u64 c = 1; c <= K.mask(); c++) {
                Septic f{a, b, c};
                if (!septic_irreducible(T, f)) continue;
                Poly p = septic_poly(f);
                Poly x1 = poly::frobmod(K, x, T.n(), p);
                Poly x2 = poly::frobmod(K, x1, T.n(), p);
                Poly x3 = poly::frobmod(K, x2, T.n(), p);
                if (poly::add(poly::add(x3, x1), x).empty()) out.s0.push_back(f);
                if (poly::add(poly::add(x3, x2), x).empty()) out.s1.push_back(f);
            }
    return out;
}

// l = z x + z' y + z'' z must give three independent conjugate lines
static bool septic_frame_ok(const Tower& T, u64 z) {
    const Field& K7 = T.F(7);
    u64 w[5];
    w[0] = z;
    for (int i = 1; i < 5; i++) w[i] = T.frob(w[i - 1], 7);
    auto m = [&](int i, int j) { return w[i + j]; };
    u64 det = K7.mul(m(0, 0), K7.mul(m(1, 1), m(2, 2)) ^ K7.mul(m(1, 2), m(2, 1))) ^
              K7.mul(m(0, 1), K7.mul(m(1, 0), m(2, 2)) ^ K7.mul(m(1, 2), m(2, 0))) ^
              K7.mul(m(0, 2), K7.mul(m(1, 0), m(2, 1)) ^ K7.mul(m(1, 1), m(2, 0)));
    return det != 0;
}

Generators find_family_generators(const Tower& T) {
    const Field& K = T.k();
    Generators g;
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::logic_error(std::string("generator check failed: ") + what);
    };

    // r, u
    for (u64 r = 1; r <= K.mask(); r++)
        if (!T.in_artin_schreier(r)) { g.r = r; break; }
    need(g.r != 0, "r");
    {
        const Field& K2 = T.F(2);
        u64 r2 = T.embed(g.r, 1, 2);
        auto u = T.solve_as(r2, 2);
        need(u.has_value(), "u");
        g.u = *u;
        need((K2.sqr(g.u) ^ g.u) == r2, "u^2+u=r");
    }

    // cubic generators; t chosen so that the closed conjugate formula holds when possible
    const Field& K3 = T.F(3);
    // prefers an s for which the conjugate formula holds; falls back to the first irreducible one
    auto cubic = [&](bool square_term, u64& s_out, u64& t_out, u64& v_out) {
        bool found = false;
        for (int pass = 0; pass < 2 && !found; pass++)
        for (u64 s = 1; s <= K.mask(); s++) {
            u64 s3 = T.embed(s, 1, 3);
            Poly p = square_term ? Poly{s3, 0, 1, 1} : Poly{s3, 1, 0, 1};
            // irreducible over k iff no root in k
            Poly pk = square_term ? Poly{s, 0, 1, 1} : Poly{s, 1, 0, 1};
            if (!poly::roots(K, pk).empty()) continue;
            u64 rhs = K.inv(s) ^ 1;  // t^2 + t = 1/s + 1
            auto ts = poly::roots(K, Poly{rhs, 1, 1});
            if (ts.empty()) continue;
            auto vs = poly::roots(K3, p);
            need(vs.size() == 3, "cubic splits in k3");
            u64 v = vs.front();
            u64 v1 = T.frob(v, 3);
            u64 pick = ts.front();
            bool holds = false;
            for (u64 t : ts) {
                u64 t3 = T.embed(t, 1, 3);
                u64 cand = square_term ? K3.div(K3.sqr(v), K3.mul(t3, v) ^ 1)
                                       : (K3.mul(K3.inv(s3), K3.sqr(v)) ^ K3.mul(t3, v));
                if (cand == v1) { pick = t; holds = true; break; }
            }
            if (pass == 0 && !holds) continue;
            s_out = s;
            t_out = pick;
            v_out = v;
            found = true;
            break;
        }
        need(found, "cubic generator");
    };
    cubic(true, g.s3, g.t3, g.v3);
    cubic(false, g.s3b, g.t3b, g.v3b);

    // quartic generator
    const Field& K4 = T.F(4);
    for (u64 t = 1; t <= K.mask(); t++)
        if (!T.in_artin_schreier(K.inv(t))) { g.t4 = t; break; }
    need(g.t4 != 0, "t for the quartic generator");
    {
        u64 t = T.embed(g.t4, 1, 4);
        Poly p{1, K4.sqr(t), t ^ K4.sqr(t), 0, 1};
        auto ws = poly::roots(K4, p);
        for (u64 w : ws)
            if (T.frob(w, 4, 2) != w) { g.w = w; break; }
        need(g.w != 0, "w");
        g.alpha = g.w ^ T.frob(g.w, 4);
        need((g.w ^ T.frob(g.w, 4, 2)) == t, "w + w'' = t");
        need((K4.sqr(g.alpha) ^ K4.mul(t, g.alpha)) == t, "alpha^2 + t alpha = t");
    }

    // septics
    const Field& K7 = T.F(7);
    auto first = [&](int which, Septic& f, u64& z) {
        const Field& Kf = K;
        Poly x{0, 1};
        for (u64 a = 0; a <= Kf.mask(); a++)
            for (u64 b = 0; b <= Kf.mask(); b++)
                for (u64 c = 1; c <= Kf.mask(); c++) {
                    Septic s{a, b, c};
                    if (!septic_irreducible(T, s)) continue;
                    Poly p = septic_poly(s);
                    Poly x1 = poly::frobmod(Kf, x, T.n(), p);
                    Poly x2 = poly::frobmod(Kf, x1, T.n(), p);
                    Poly x3 = poly::frobmod(Kf, x2, T.n(), p);
                    Poly lhs = poly::add(poly::add(x3, which ? x2 : x1), x);
                    if (!lhs.empty()) continue;
                    Poly p7{T.embed(c, 1, 7), T.embed(b, 1, 7), 0, T.embed(a, 1, 7), 0, 0, 0, 1};
                    auto zs = poly::roots(K7, p7);
                    need(zs.size() == 7, "septic splits in k7");
                    // fails e.g. for x^7 + c when 7 | q - 1
                    if (!septic_frame_ok(T, zs.front())) continue;
                    f = s;
                    z = zs.front();
                    return;
                }
        need(false, "septic");
    };
    first(0, g.f0, g.zeta0);
    first(1, g.f1, g.zeta1);
    // case relations: z + z''' = z' (case 0), z + z''' = z'' (case 1)
    need((g.zeta0 ^ T.frob(g.zeta0, 7, 3)) == T.frob(g.zeta0, 7, 1), "case 0 relation");
    need((g.zeta1 ^ T.frob(g.zeta1, 7, 3)) == T.frob(g.zeta1, 7, 2), "case 1 relation");
    check_generators(T, g);
    return g;
}

void check_generators(const Tower& T, const Generators& g) {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("generator check failed: ") + what);
    };
    const Field& K = T.k();
    auto in = [&](u64 x, int level) { return x <= T.F(level).mask(); };
    need(in(g.r, 1) && g.r && !T.in_artin_schreier(g.r), "r in k, not in AS(k)");
    const Field& K2 = T.F(2);
    need(in(g.u, 2) && (K2.sqr(g.u) ^ g.u) == T.embed(g.r, 1, 2), "u^2 + u = r");
    const Field& K3 = T.F(3);
    auto cubic = [&](bool sq, u64 s, u64 t, u64 v, const char* what) {
        need(in(s, 1) && in(t, 1) && in(v, 3) && s, what);
        u64 s3 = T.embed(s, 1, 3);
        u64 val = K3.mul(K3.sqr(v), v) ^ (sq ? K3.sqr(v) : v) ^ s3;
        need(val == 0 && T.frob(v, 3) != v, what);
        need((K.sqr(t) ^ t ^ 1) == K.inv(s), what);
    };
    cubic(true, g.s3, g.t3, g.v3, "v^3 + v^2 = s, t^2 + t + 1 = 1/s");
    cubic(false, g.s3b, g.t3b, g.v3b, "v^3 + v = s, t^2 + t + 1 = 1/s");
    need(in(g.t4, 1) && g.t4 && !T.in_artin_schreier(K.inv(g.t4)), "1/t not in AS(k)");
    const Field& K4 = T.F(4);
    u64 t = T.embed(g.t4, 1, 4);
    need(in(g.w, 4) && poly::eval(K4, Poly{1, K4.sqr(t), t ^ K4.sqr(t), 0, 1}, g.w) == 0, "w^4 + (t+t^2) w^2 + t^2 w = 1");
    need((g.w ^ T.frob(g.w, 4, 2)) == t, "w + w'' = t");
    auto septic = [&](const Septic& f, u64 z, int which, const char* what) {
        need(in(f.a, 1) && in(f.b, 1) && in(f.c, 1) && in(z, 7) && septic_irreducible(T, f), what);
        Poly p7{T.embed(f.c, 1, 7), T.embed(f.b, 1, 7), 0, T.embed(f.a, 1, 7), 0, 0, 0, 1};
        need(poly::eval(T.F(7), p7, z) == 0, what);
        need((z ^ T.frob(z, 7, 3)) == T.frob(z, 7, which ? 2 : 1), what);
        need(septic_frame_ok(T, z), what);
    };
    septic(g.f0, g.zeta0, 0, "septic of case 0");
    septic(g.f1, g.zeta1, 1, "septic of case 1");
}

Generators parse_generators(const Tower& T, const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got " + tok);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto get = [&](const char* k) -> std::string {
        auto it = kv.find(k);
        if (it == kv.end()) throw std::invalid_argument(std::string("missing generator ") + k);
        return it->second;
    };
    auto hx = [&](const std::string& v) -> u64 {
        size_t pos = 0;
        u64 x = std::stoull(v, &pos, 16);
        if (pos != v.size()) throw std::invalid_argument("bad hex value " + v);
        return x;
    };
    auto septic = [&](const char* k) {
        std::string v = get(k);
        if (v.size() < 2 || v.front() != '(' || v.back() != ')') throw std::invalid_argument("bad septic " + v);
        std::vector<u64> c;
        std::istringstream ss(v.substr(1, v.size() - 2));
        std::string part;
        while (std::getline(ss, part, ',')) c.push_back(hx(part));
        if (c.size() != 3) throw std::invalid_argument("bad septic " + v);
        return Septic{c[0], c[1], c[2]};
    };
    if (kv.count("q") && std::stoull(kv["q"]) != T.q()) throw std::invalid_argument("generators are for another q");
    Generators g;
    try {
        g.r = hx(get("r")), g.u = hx(get("u"));
        g.s3 = hx(get("s3")), g.t3 = hx(get("t3")), g.v3 = hx(get("v3"));
        g.s3b = hx(get("s3b")), g.t3b = hx(get("t3b")), g.v3b = hx(get("v3b"));
        g.t4 = hx(get("t4")), g.w = hx(get("w"));
        g.f0 = septic("f0"), g.zeta0 = hx(get("zeta0"));
        g.f1 = septic("f1"), g.zeta1 = hx(get("zeta1"));
    } catch (const std::logic_error& e) {
        throw std::invalid_argument(std::string("bad generator table: ") + e.what());
    }
    g.alpha = g.w ^ T.frob(g.w, 4);
    check_generators(T, g);
    return g;
}

std::string Generators::describe(const Tower& T) const {
    std::ostringstream os;
    os << std::hex << "q=" << std::dec << T.q() << std::hex << " r=" << r << " u=" << u << " s3=" << s3 << " t3=" << t3
       << " v3=" << v3 << " s3b=" << s3b << " t3b=" << t3b << " v3b=" << v3b << " t4=" << t4 << " w=" << w
       << " f0=(" << f0.a << "," << f0.b << "," << f0.c << ") zeta0=" << zeta0 << " f1=(" << f1.a << "," << f1.b
       << "," << f1.c << ") zeta1=" << zeta1;
    return os.str();
}

}  // namespace binq
