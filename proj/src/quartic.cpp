#include "binq/quartic.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "binq/plane.hpp"

namespace binq {

const char* stratum_name(Stratum s) {
    switch (s) {
    case Stratum::Ordinary: return "ordinary";
    case Stratum::Rank2: return "rank2";
    case Stratum::Rank1: return "rank1";
    case Stratum::Type13: return "type1/3";
    case Stratum::Supersingular: return "supersingular";
    }
    return "?";
}

std::optional<Stratum> parse_stratum(const std::string& s) {
    for (int i = 0; i < 5; i++)
        if (s == stratum_name(Stratum(i))) return Stratum(i);
    return std::nullopt;
}

int bitangents_for_rank(int rank) {
    static const int b[] = {1, 2, 4, 7};
    return b[rank];
}

Form wall_rhs(int bitangents) {
    Form f = form::zero(4);
    auto set = [&](int i, int j) { f.c[form::index(4, i, j)] ^= 1; };
    switch (bitangents) {
    case 7: set(2, 1), set(1, 2), set(1, 1); break;  // x^2yz + xy^2z + xyz^2
    case 4: set(1, 2), set(1, 1); break;             // xy^2z + xyz^2
    case 2: set(1, 3), set(2, 1); break;             // xy^3 + x^2yz
    case 1: set(1, 3), set(3, 0); break;             // xy^3 + x^3z
    default: throw std::invalid_argument("bitangent count must be 7, 4, 2 or 1");
    }
    return f;
}

Form wall_model(const Field& F, int bitangents, const Quad& Q) {
    return form::add(form::square(F, quad::to_form(Q)), wall_rhs(bitangents));
}

bool is_admissible(const Field&, int bitangents, const Quad& Q) {
    u64 a = Q[0], b = Q[1], c = Q[2], d = Q[3], e = Q[4], f = Q[5];
    switch (bitangents) {
    case 7: return a && b && c && (a ^ b ^ d) && (b ^ c ^ e) && (a ^ c ^ f) && (a ^ b ^ c ^ d ^ e ^ f) != 1;
    case 4: return a && b && c && (b ^ c ^ e);
    case 2: return a && c;
    case 1: return c != 0;
    }
    throw std::invalid_argument("bitangent count must be 7, 4, 2 or 1");
}

std::optional<Quad> quartic_sqrt(const Field& F, const Form& f) {
    if (f.deg != 4) return std::nullopt;
    auto r = form::sqrt(F, f);
    if (!r) return std::nullopt;
    return quad::from_form(*r);
}

// ---------------------------------------------------------------- resultants

using BiPoly = std::vector<Poly>;  // index = power of the eliminated variable

static bool bzero(const BiPoly& a) {
    for (auto& p : a)
        if (!p.empty()) return false;
    return true;
}

static void btrim(BiPoly& a) {
    for (auto& p : a) poly::trim(p);
    while (!a.empty() && a.back().empty()) a.pop_back();
}

Poly resultant(const Field& F, const std::vector<Poly>& a0, const std::vector<Poly>& b0) {
    BiPoly a = a0, b = b0;
    btrim(a);
    btrim(b);
    if (a.empty() || b.empty()) return {};
    int m = int(a.size()) - 1, n = int(b.size()) - 1;
    auto pw = [&](const Poly& p, int e) {
        Poly r{1};
        for (int i = 0; i < e; i++) r = poly::mul(F, r, p);
        return r;
    };
    if (m == 0) return pw(a[0], n);
    if (n == 0) return pw(b[0], m);
    int N = m + n;
    std::vector<std::vector<Poly>> M(N, std::vector<Poly>(N));
    for (int i = 0; i < n; i++)
        for (int j = 0; j <= m; j++) M[i][i + j] = a[m - j];
    for (int i = 0; i < m; i++)
        for (int j = 0; j <= n; j++) M[n + i][i + j] = b[n - j];
    Poly prev{1};
    for (int k = 0; k < N - 1; k++) {
        if (M[k][k].empty()) {
            int s = -1;
            for (int i = k + 1; i < N; i++)
                if (!M[i][k].empty()) { s = i; break; }
            if (s < 0) return {};
            std::swap(M[k], M[s]);  // sign is irrelevant in characteristic 2
        }
        for (int i = k + 1; i < N; i++) {
            for (int j = k + 1; j < N; j++) {
                Poly t = poly::add(poly::mul(F, M[k][k], M[i][j]), poly::mul(F, M[i][k], M[k][j]));
                M[i][j] = poly::div_exact(F, t, prev);
            }
            M[i][k].clear();
        }
        prev = M[k][k];
    }
    Poly r = M[N - 1][N - 1];
    poly::trim(r);
    return r;
}

// ---------------------------------------------------------------- smoothness

// G(x, 1, z) as polynomial in z over k[x]
static BiPoly chart_y1(const Form& G) {
    BiPoly r(G.deg + 1);
    for (int s = 0; s < form::nmono(G.deg); s++) {
        if (!G.c[s]) continue;
        auto e = form::expo(G.deg, s);
        Poly& p = r[e[2]];
        if (int(p.size()) <= e[0]) p.resize(e[0] + 1, 0);
        p[e[0]] ^= G.c[s];
    }
    btrim(r);
    return r;
}

// G(x, 0, 1) in x
static Poly line_y0(const Form& G) {
    Poly p(G.deg + 1, 0);
    for (int s = 0; s < form::nmono(G.deg); s++) {
        auto e = form::expo(G.deg, s);
        if (e[1] == 0) p[e[0]] ^= G.c[s];
    }
    poly::trim(p);
    return p;
}

static Poly embed_poly(const Tower& T, const Poly& p, int from, int to) {
    Poly r = p;
    for (auto& c : r) c = T.embed(c, from, to);
    return r;
}

static Poly specialize(const Tower& T, const BiPoly& b, int d, u64 x0) {
    const Field& K = T.F(d);
    Poly r(b.size(), 0);
    for (size_t l = 0; l < b.size(); l++) r[l] = poly::eval(K, embed_poly(T, b[l], 1, d), x0);
    poly::trim(r);
    return r;
}

// gcd of a list of polynomials, ignoring zero ones; nullopt if all are zero
static std::optional<Poly> gcd_all(const Field& K, const std::vector<Poly>& ps) {
    std::optional<Poly> g;
    for (auto& p : ps) {
        if (p.empty()) continue;
        g = g ? poly::gcd(K, *g, p) : poly::monic(K, p);
    }
    return g;
}

static std::vector<int> levels_upto(const Tower& T, int maxd) {
    std::vector<int> v;
    for (int d = 1; d <= maxd; d++)
        if (T.has(d)) v.push_back(d);
    return v;
}

// a root of g (over level d) at some level that is a multiple of d, up to 6
static std::optional<std::pair<int, u64>> some_root(const Tower& T, const Poly& g, int d) {
    for (int e : levels_upto(T, 6)) {
        if (e % d) continue;
        auto rs = poly::roots(T.F(e), embed_poly(T, g, d, e));
        if (!rs.empty()) return std::make_pair(e, rs.front());
    }
    return std::nullopt;
}

std::optional<SingularPoint> singular_point(const Tower& T, const Form& F) {
    const Field& K = T.k();
    if (F.deg != 4 || form::is_zero(F)) throw std::invalid_argument("expected a nonzero quartic");
    std::vector<Form> G{F, form::partial(F, 0), form::partial(F, 1), form::partial(F, 2)};

    if (form::is_zero(G[1]) && form::is_zero(G[2]) && form::is_zero(G[3])) {
        // a square: every point of the conic is singular, and a conic has a rational point
        for (const Vec3& p : projective_points(K))
            if (form::eval(K, F, p) == 0) return SingularPoint{1, p};
        throw std::logic_error("conic without rational point");
    }
    auto all_vanish = [&](const Vec3& p) {
        for (auto& g : G)
            if (form::eval(K, g, p)) return false;
        return true;
    };
    if (all_vanish({1, 0, 0})) return SingularPoint{1, {1, 0, 0}};

    // line y = 0, z = 1
    {
        std::vector<Poly> ps;
        for (auto& g : G) ps.push_back(line_y0(g));
        auto g = gcd_all(K, ps);
        if (!g) return SingularPoint{1, {0, 0, 1}};
        if (poly::deg(*g) >= 1) {
            auto r = some_root(T, *g, 1);
            if (!r) throw std::logic_error("singular point of too large degree");
            return SingularPoint{r->first, {r->second, 0, 1}};
        }
    }

    // chart y = 1
    std::vector<BiPoly> B;
    for (auto& g : G) B.push_back(chart_y1(g));
    auto point_over = [&](int d, u64 x0) -> std::optional<SingularPoint> {
        std::vector<Poly> ps;
        for (auto& b : B) ps.push_back(specialize(T, b, d, x0));
        auto g = gcd_all(T.F(d), ps);
        if (!g) return SingularPoint{d, {x0, 1, 0}};
        if (poly::deg(*g) < 1) return std::nullopt;
        auto r = some_root(T, *g, d);
        if (!r) throw std::logic_error("singular point of too large degree");
        return SingularPoint{r->first, {T.embed(x0, d, r->first), 1, r->second}};
    };

    std::optional<Poly> R;
    bool degenerate = false;
    for (int i = 1; i < 4; i++) {
        if (bzero(B[i])) continue;
        Poly r = resultant(K, B[0], B[i]);
        if (r.empty()) {
            degenerate = true;
            break;
        }
        R = R ? poly::gcd(K, *R, r) : poly::monic(K, r);
    }
    if (degenerate || bzero(B[0])) {
        // F shares a component with a partial: singular along a curve; find a witness by scanning
        for (int d : levels_upto(T, 4)) {
            const Field& Kd = T.F(d);
            if (Kd.m() > 16) break;
            for (u64 x0 = 0; x0 <= Kd.mask(); x0++)
                if (auto p = point_over(d, x0)) return p;
        }
        throw std::logic_error("no singular witness found for a degenerate quartic");
    }
    if (!R || poly::deg(*R) < 1) return std::nullopt;
    for (int d : levels_upto(T, 6)) {
        for (u64 x0 : poly::roots(T.F(d), embed_poly(T, *R, 1, d))) {
            if (T.level_of(x0, d) != d) continue;
            if (auto p = point_over(d, x0)) return p;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- bitangents

std::array<u64, 5> restrict_to_line(const Field& F, const Form& f, const Vec3& l) {
    Vec3 P1, P2;
    if (l[2]) {
        P1 = {l[2], 0, l[0]};
        P2 = {0, l[2], l[1]};
    } else if (l[1]) {
        P1 = {l[1], l[0], 0};
        P2 = {0, 0, 1};
    } else if (l[0]) {
        P1 = {0, 1, 0};
        P2 = {0, 0, 1};
    } else {
        throw std::invalid_argument("zero line");
    }
    Mat3 M;
    for (int i = 0; i < 3; i++) {
        M(i, 0) = P1[i];
        M(i, 1) = P2[i];
    }
    Form g = form::substitute(F, f, M);
    std::array<u64, 5> r{};
    for (int j = 0; j <= 4; j++) r[j] = g.c[form::index(4, 4 - j, j)];
    return r;
}

bool is_bitangent(const Field& F, const Form& f, const Vec3& line) {
    auto r = restrict_to_line(F, f, line);
    return r[1] == 0 && r[3] == 0 && (r[0] || r[2] || r[4]);
}

static int line_level(const Tower& T, const Vec3& l, int d) {
    int lv = 1;
    for (u64 c : l) lv = std::lcm(lv, T.level_of(c, d));
    return lv;
}

std::vector<Bitangent> find_bitangents(const Tower& T, const Form& F, int max_degree) {
    const Field& K = T.k();
    std::vector<Bitangent> out;
    auto fail = [] { throw std::domain_error("infinitely many bitangent candidates: quartic is not smooth"); };
    auto keep = [&](int d, Vec3 l) {
        l = vec::normalize(T.F(d), l);
        if (line_level(T, l, d) == d && is_bitangent(T.F(d), form::embed(T, F, 1, d), l)) out.push_back({d, l});
    };

    // z = a x + b y: odd coefficients of F(x, y, a x + b y) as polynomials in b over k[a]
    std::array<BiPoly, 5> P;
    for (auto& p : P) p.assign(5, Poly(5, 0));
    for (int s = 0; s < 15; s++) {
        u64 c = F.c[s];
        if (!c) continue;
        auto e = form::expo(4, s);
        int l = e[2];
        for (int m = 0; m <= l; m++) {
            if (((l & m) != m)) continue;  // binomial(l, m) odd
            int j = e[1] + l - m;
            P[j][l - m][m] ^= c;
        }
    }
    btrim(P[1]);
    btrim(P[3]);
    if (bzero(P[1]) || bzero(P[3])) fail();
    Poly R = resultant(K, P[1], P[3]);
    if (R.empty()) fail();

    // y = a x: F(x, a x, z), coefficient of x^(4-j) z^j is a polynomial in a
    std::array<Poly, 5> S;
    for (auto& p : S) p.assign(5, 0);
    for (int s = 0; s < 15; s++) {
        auto e = form::expo(4, s);
        S[e[2]][e[1]] ^= F.c[s];
    }
    for (auto& p : S) poly::trim(p);
    std::optional<Poly> gS = gcd_all(K, {S[1], S[3]});
    if (!gS) fail();

    for (int d : {1, 2, 3, 4, 7}) {
        if (d > max_degree || !T.has(d)) continue;
        const Field& Kd = T.F(d);
        for (u64 a : poly::roots(Kd, embed_poly(T, R, 1, d))) {
            Poly g1 = specialize(T, P[1], d, a), g3 = specialize(T, P[3], d, a);
            auto g = gcd_all(Kd, {g1, g3});
            if (!g) fail();
            if (poly::deg(*g) < 1) continue;
            for (u64 b : poly::roots(Kd, *g)) keep(d, {a, b, 1});
        }
        if (poly::deg(*gS) >= 1)
            for (u64 a : poly::roots(Kd, embed_poly(T, *gS, 1, d))) keep(d, {a, 1, 0});
        if (d == 1) keep(1, {1, 0, 0});
    }
    std::sort(out.begin(), out.end(), [](const Bitangent& x, const Bitangent& y) {
        return std::tie(x.level, x.line) < std::tie(y.level, y.line);
    });
    return out;
}

int common_level(const std::vector<Bitangent>& b) {
    int L = 1;
    for (auto& x : b) L = std::lcm(L, x.level);
    return L;
}

bool is_fano(const Tower& T, const std::vector<Bitangent>& b) {
    if (b.size() != 7) return false;
    int L = common_level(b);
    if (!T.has(L)) return false;
    const Field& F = T.F(L);
    std::vector<Vec3> ls;
    for (auto& x : b) ls.push_back(vec::normalize(F, vec::embed(T, x.line, x.level, L)));
    std::sort(ls.begin(), ls.end());
    // three independent lines, then try each remaining line as their full sum
    for (int i = 0; i < 7; i++)
        for (int j = i + 1; j < 7; j++)
            for (int k = j + 1; k < 7; k++) {
                Mat3 A = mat::from_rows(ls[i], ls[j], ls[k]);
                if (!mat::det(F, A)) continue;
                Mat3 Ai = mat::inverse(F, A);
                for (int t = 0; t < 7; t++) {
                    if (t == i || t == j || t == k) continue;
                    Vec3 c = mat::apply_line(F, ls[t], Ai);  // ls[t] = c . rows(A), up to scalar
                    if (!c[0] || !c[1] || !c[2]) continue;
                    auto sc = [&](const Vec3& v, u64 s) { return Vec3{F.mul(v[0], s), F.mul(v[1], s), F.mul(v[2], s)}; };
                    if (fano_closure(F, sc(ls[i], c[0]), sc(ls[j], c[1]), sc(ls[k], c[2])) == ls) return true;
                }
                return false;
            }
    return false;
}

// ---------------------------------------------------------------- zeta

static long long count_roots(const Field& K, const Poly& p0) {
    Poly p = p0;
    poly::trim(p);
    if (p.empty()) return (long long)K.size();
    if (poly::deg(p) == 0) return 0;
    Poly x{0, 1};
    Poly xq = poly::frobmod(K, x, K.m(), p);
    return poly::deg(poly::gcd(K, p, poly::add(xq, x)));
}

long long count_points(const Tower& T, const Form& F0, int i) {
    const Field& K = T.F(i);
    Form F = form::embed(T, F0, 1, i);
    // coefficient of x^a in F(x, y, 1) as polynomial in y
    std::array<Poly, 5> C;
    for (auto& p : C) p.assign(5, 0);
    for (int s = 0; s < 15; s++) {
        auto e = form::expo(4, s);
        C[e[0]][e[1]] ^= F.c[s];
    }
    long long N = 0;
    Poly px(5);
    for (u64 y = 0; y <= K.mask(); y++) {
        for (int a = 0; a <= 4; a++) px[a] = poly::eval(K, C[a], y);
        N += count_roots(K, px);
    }
    // (x : 1 : 0)
    Poly inf(5, 0);
    for (int s = 0; s < 15; s++) {
        auto e = form::expo(4, s);
        if (e[2] == 0) inf[e[0]] ^= F.c[s];
    }
    N += count_roots(K, inf);
    if (F.c[form::index(4, 4, 0)] == 0) N++;
    return N;
}

LPoly l_polynomial(long long N1, long long N2, long long N3, long long q) {
    __int128 p1 = q + 1 - N1, p2 = (__int128)q * q + 1 - N2, p3 = (__int128)q * q * q + 1 - N3;
    __int128 e1 = p1;
    __int128 t2 = e1 * p1 - p2;
    if (t2 % 2) throw std::domain_error("point counts do not give an integral L-polynomial");
    __int128 e2 = t2 / 2;
    __int128 t3 = e2 * p1 - e1 * p2 + p3;
    if (t3 % 3) throw std::domain_error("point counts do not give an integral L-polynomial");
    __int128 e3 = t3 / 3;
    LPoly L;
    L.c = {1, (long long)-e1, (long long)e2, (long long)-e3, (long long)(q * e2), (long long)(-q * q * e1), q * q * q};
    // Weil bound on a1
    if ((double)e1 * (double)e1 > 36.0 * (double)q + 1e-9) throw std::domain_error("Weil bound violated");
    return L;
}

LPoly l_polynomial(const Tower& T, const Form& F) {
    long long q = (long long)T.q();
    return l_polynomial(count_points(T, F, 1), count_points(T, F, 2), count_points(T, F, 3), q);
}

static int v2(long long x) { return __builtin_ctzll((unsigned long long)(x < 0 ? -x : x)); }

std::vector<Slope> newton_slopes(const LPoly& L, long long q) {
    int n = __builtin_ctzll((unsigned long long)q);
    std::vector<std::pair<int, int>> pts;
    for (int i = 0; i <= 6; i++)
        if (L.c[i]) pts.push_back({i, v2(L.c[i])});
    std::vector<Slope> out;
    size_t cur = 0;
    while (pts[cur].first < 6) {
        size_t best = cur + 1;
        for (size_t j = cur + 1; j < pts.size(); j++) {
            // slope (vj - vc)/(xj - xc) minimal; ties go to the farthest point
            long long lhs = (long long)(pts[j].second - pts[cur].second) * (pts[best].first - pts[cur].first);
            long long rhs = (long long)(pts[best].second - pts[cur].second) * (pts[j].first - pts[cur].first);
            if (lhs <= rhs) best = j;
        }
        int dx = pts[best].first - pts[cur].first, dy = pts[best].second - pts[cur].second;
        for (int t = 0; t < dx; t++) out.push_back(Slope(dy, (long long)dx * n));
        cur = best;
    }
    return out;
}

int two_rank(const LPoly& L) {
    int r = 0;
    for (int i = 1; i <= 3; i++)
        if (L.c[i] && L.c[i] % 2) r = i;
    return r;
}

Stratum stratum_of(const LPoly& L, long long q) {
    switch (two_rank(L)) {
    case 3: return Stratum::Ordinary;
    case 2: return Stratum::Rank2;
    case 1: return Stratum::Rank1;
    }
    for (const Slope& s : newton_slopes(L, q))
        if (s != Slope(1, 2)) return Stratum::Type13;
    return Stratum::Supersingular;
}

std::string to_hex(const Form& f) {
    std::ostringstream os;
    os << std::hex;
    for (size_t i = 0; i < f.c.size(); i++) os << (i ? " " : "") << f.c[i];
    return os.str();
}

std::optional<Form> parse_quartic(const std::vector<std::string>& hex, const Field& F) {
    if (hex.size() != 15) return std::nullopt;
    Form f = form::zero(4);
    for (int i = 0; i < 15; i++) {
        try {
            size_t pos = 0;
            unsigned long long v = std::stoull(hex[i], &pos, 16);
            if (pos != hex[i].size() || v > F.mask()) return std::nullopt;
            f.c[i] = v;
        } catch (...) {
            return std::nullopt;
        }
    }
    return f;
}

}  // namespace binq
