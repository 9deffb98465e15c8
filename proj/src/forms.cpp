#include "binq/forms.hpp"

#include <sstream>
#include <stdexcept>

namespace binq {

namespace mat {

Mat3 identity() {
    Mat3 I;
    I(0, 0) = I(1, 1) = I(2, 2) = 1;
    return I;
}

Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 A;
    for (int j = 0; j < 3; j++) {
        A(0, j) = r0[j];
        A(1, j) = r1[j];
        A(2, j) = r2[j];
    }
    return A;
}

Mat3 mul(const Field& F, const Mat3& A, const Mat3& B) {
    Mat3 C;
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) {
            u64 s = 0;
            for (int k = 0; k < 3; k++) s ^= F.mul(A(i, k), B(k, j));
            C(i, j) = s;
        }
    return C;
}

u64 det(const Field& F, const Mat3& A) {
    auto m = [&](int i, int j) { return A(i, j); };
    u64 t0 = F.mul(m(0, 0), F.mul(m(1, 1), m(2, 2)) ^ F.mul(m(1, 2), m(2, 1)));
    u64 t1 = F.mul(m(0, 1), F.mul(m(1, 0), m(2, 2)) ^ F.mul(m(1, 2), m(2, 0)));
    u64 t2 = F.mul(m(0, 2), F.mul(m(1, 0), m(2, 1)) ^ F.mul(m(1, 1), m(2, 0)));
    return t0 ^ t1 ^ t2;
}

Mat3 adjugate(const Field& F, const Mat3& A) {
    Mat3 C;
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            C(i, j) = F.mul(A(r0, c0), A(r1, c1)) ^ F.mul(A(r0, c1), A(r1, c0));
        }
    return C;
}

Mat3 inverse(const Field& F, const Mat3& A) {
    if (!det(F, A)) throw std::domain_error("singular matrix");
    return normalize(F, adjugate(F, A));
}

Mat3 normalize(const Field& F, const Mat3& A) {
    for (u64 x : A.m)
        if (x) {
            if (x == 1) return A;
            u64 s = F.inv(x);
            Mat3 B;
            for (int i = 0; i < 9; i++) B.m[i] = F.mul(A.m[i], s);
            return B;
        }
    return A;
}

Vec3 apply(const Field& F, const Mat3& A, const Vec3& p) {
    Vec3 r{};
    for (int i = 0; i < 3; i++) r[i] = F.mul(A(i, 0), p[0]) ^ F.mul(A(i, 1), p[1]) ^ F.mul(A(i, 2), p[2]);
    return r;
}

Vec3 apply_line(const Field& F, const Vec3& c, const Mat3& A) {
    Vec3 r{};
    for (int j = 0; j < 3; j++) r[j] = F.mul(c[0], A(0, j)) ^ F.mul(c[1], A(1, j)) ^ F.mul(c[2], A(2, j));
    return r;
}

Mat3 embed(const Tower& T, const Mat3& A, int from, int to) {
    Mat3 B;
    for (int i = 0; i < 9; i++) B.m[i] = T.embed(A.m[i], from, to);
    return B;
}

std::optional<Mat3> descend(const Tower& T, const Mat3& A, int from, int to) {
    Mat3 B;
    for (int i = 0; i < 9; i++) {
        auto x = T.descend(A.m[i], from, to);
        if (!x) return std::nullopt;
        B.m[i] = *x;
    }
    return B;
}

Mat3 frob(const Tower& T, const Mat3& A, int level, int i) {
    Mat3 B;
    for (int j = 0; j < 9; j++) B.m[j] = T.frob(A.m[j], level, i);
    return B;
}

bool equal_projective(const Field& F, const Mat3& A, const Mat3& B) { return normalize(F, A) == normalize(F, B); }

int order(const Field& F, const Mat3& A, int limit) {
    Mat3 N = normalize(F, A), P = N, I = identity();
    for (int k = 1; k <= limit; k++) {
        if (normalize(F, P) == I) return k;
        P = normalize(F, mul(F, P, N));
    }
    return 0;
}

}  // namespace mat

namespace vec {

Vec3 normalize(const Field& F, const Vec3& p) {
    for (u64 x : p)
        if (x) {
            u64 s = F.inv(x);
            return {F.mul(p[0], s), F.mul(p[1], s), F.mul(p[2], s)};
        }
    return p;
}

bool is_zero(const Vec3& p) { return !p[0] && !p[1] && !p[2]; }

Vec3 embed(const Tower& T, const Vec3& p, int from, int to) {
    return {T.embed(p[0], from, to), T.embed(p[1], from, to), T.embed(p[2], from, to)};
}

}  // namespace vec

namespace form {

int nmono(int D) { return (D + 1) * (D + 2) / 2; }

// descending lex: x^D first; for fixed x-exponent i, y-exponent descends
int index(int D, int i, int j) {
    int a = D - i;  // number of monomials before block i is sum_{t<a} (t+1)
    return a * (a + 1) / 2 + (D - i - j);
}

std::array<int, 3> expo(int D, int idx) {
    int a = 0;
    while ((a + 1) * (a + 2) / 2 <= idx) a++;
    int i = D - a;
    int r = idx - a * (a + 1) / 2;
    int j = D - i - r;
    return {i, j, D - i - j};
}

Form zero(int D) { return Form{D, std::vector<u64>(nmono(D), 0)}; }

Form monomial(int D, int i, int j, u64 coef) {
    Form f = zero(D);
    f.c[index(D, i, j)] = coef;
    return f;
}

Form linear(const Vec3& l) { return Form{1, {l[0], l[1], l[2]}}; }

bool is_zero(const Form& f) {
    for (u64 x : f.c)
        if (x) return false;
    return true;
}

Form add(const Form& a, const Form& b) {
    if (a.deg != b.deg) throw std::invalid_argument("adding forms of different degree");
    Form r = a;
    for (size_t i = 0; i < r.c.size(); i++) r.c[i] ^= b.c[i];
    return r;
}

Form mul(const Field& F, const Form& a, const Form& b) {
    Form r = zero(a.deg + b.deg);
    for (int s = 0; s < nmono(a.deg); s++) {
        if (!a.c[s]) continue;
        auto ea = expo(a.deg, s);
        for (int t = 0; t < nmono(b.deg); t++) {
            if (!b.c[t]) continue;
            auto eb = expo(b.deg, t);
            r.c[index(r.deg, ea[0] + eb[0], ea[1] + eb[1])] ^= F.mul(a.c[s], b.c[t]);
        }
    }
    return r;
}

Form scale(const Field& F, const Form& a, u64 s) {
    Form r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return r;
}

Form pow(const Field& F, const Form& a, int e) {
    Form r = Form{0, {1}};
    for (int i = 0; i < e; i++) r = mul(F, r, a);
    return r;
}

Form square(const Field& F, const Form& a) {
    Form r = zero(2 * a.deg);
    for (int s = 0; s < nmono(a.deg); s++) {
        if (!a.c[s]) continue;
        auto e = expo(a.deg, s);
        r.c[index(r.deg, 2 * e[0], 2 * e[1])] = F.sqr(a.c[s]);
    }
    return r;
}

std::optional<Form> sqrt(const Field& F, const Form& a) {
    if (a.deg % 2) return std::nullopt;
    Form r = zero(a.deg / 2);
    for (int s = 0; s < nmono(a.deg); s++) {
        if (!a.c[s]) continue;
        auto e = expo(a.deg, s);
        if (e[0] % 2 || e[1] % 2 || e[2] % 2) return std::nullopt;
        r.c[index(r.deg, e[0] / 2, e[1] / 2)] = F.sqrt(a.c[s]);
    }
    return r;
}

Form substitute(const Field& F, const Form& a, const Mat3& M) {
    int D = a.deg;
    std::array<std::vector<Form>, 3> P;
    for (int v = 0; v < 3; v++) {
        Form l = linear({M(v, 0), M(v, 1), M(v, 2)});
        P[v].push_back(Form{0, {1}});
        for (int e = 1; e <= D; e++) P[v].push_back(mul(F, P[v].back(), l));
    }
    Form r = zero(D);
    for (int s = 0; s < nmono(D); s++) {
        if (!a.c[s]) continue;
        auto e = expo(D, s);
        Form t = mul(F, mul(F, P[0][e[0]], P[1][e[1]]), P[2][e[2]]);
        for (size_t i = 0; i < t.c.size(); i++) r.c[i] ^= F.mul(a.c[s], t.c[i]);
    }
    return r;
}

u64 eval(const Field& F, const Form& a, const Vec3& p) {
    int D = a.deg;
    std::array<std::array<u64, 9>, 3> pw;
    for (int v = 0; v < 3; v++) {
        pw[v][0] = 1;
        for (int e = 1; e <= D; e++) pw[v][e] = F.mul(pw[v][e - 1], p[v]);
    }
    u64 s = 0;
    for (int t = 0; t < nmono(D); t++) {
        if (!a.c[t]) continue;
        auto e = expo(D, t);
        s ^= F.mul(a.c[t], F.mul(pw[0][e[0]], F.mul(pw[1][e[1]], pw[2][e[2]])));
    }
    return s;
}

Form partial(const Form& a, int var) {
    if (a.deg == 0) return Form{0, {0}};
    Form r = zero(a.deg - 1);
    for (int s = 0; s < nmono(a.deg); s++) {
        if (!a.c[s]) continue;
        auto e = expo(a.deg, s);
        if (e[var] % 2 == 0) continue;
        e[var]--;
        r.c[index(r.deg, e[0], e[1])] ^= a.c[s];
    }
    return r;
}

Form frob(const Tower& T, const Form& a, int level, int i) {
    Form r = a;
    for (auto& x : r.c) x = T.frob(x, level, i);
    return r;
}

Form embed(const Tower& T, const Form& a, int from, int to) {
    Form r = a;
    for (auto& x : r.c) x = T.embed(x, from, to);
    return r;
}

std::optional<Form> descend(const Tower& T, const Form& a, int from, int to) {
    Form r = a;
    for (auto& x : r.c) {
        auto y = T.descend(x, from, to);
        if (!y) return std::nullopt;
        x = *y;
    }
    return r;
}

Form odd_part(const Form& a) {
    Form r = zero(a.deg);
    for (int s = 0; s < nmono(a.deg); s++) {
        auto e = expo(a.deg, s);
        if (e[0] % 2 || e[1] % 2 || e[2] % 2) r.c[s] = a.c[s];
    }
    return r;
}

Form even_part(const Form& a) { return add(a, odd_part(a)); }

std::optional<u64> proportional(const Field& F, const Form& a, const Form& b) {
    if (a.deg != b.deg) return std::nullopt;
    for (size_t i = 0; i < b.c.size(); i++)
        if (b.c[i]) {
            u64 s = F.div(a.c[i], b.c[i]);
            for (size_t j = 0; j < b.c.size(); j++)
                if (a.c[j] != F.mul(s, b.c[j])) return std::nullopt;
            return s;
        }
    return std::nullopt;
}

std::string to_string(const Form& a) {
    std::ostringstream os;
    bool first = true;
    for (int s = 0; s < nmono(a.deg); s++) {
        if (!a.c[s]) continue;
        auto e = expo(a.deg, s);
        if (!first) os << " + ";
        first = false;
        bool unit = a.c[s] == 1 && a.deg > 0;
        if (!unit) os << std::hex << a.c[s] << std::dec;
        const char* v = "xyz";
        for (int t = 0; t < 3; t++) {
            if (!e[t]) continue;
            os << v[t];
            if (e[t] > 1) os << '^' << e[t];
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace form

namespace quad {

// Quad slot -> index in degree-2 descending lex (x2, xy, xz, y2, yz, z2)
static const int kSlot[6] = {0, 3, 5, 1, 4, 2};

Form to_form(const Quad& q) {
    Form f = form::zero(2);
    for (int i = 0; i < 6; i++) f.c[kSlot[i]] = q[i];
    return f;
}

Quad from_form(const Form& f) {
    if (f.deg != 2) throw std::invalid_argument("not a quadratic form");
    Quad q;
    for (int i = 0; i < 6; i++) q[i] = f.c[kSlot[i]];
    return q;
}

Quad add(const Quad& a, const Quad& b) {
    Quad r;
    for (int i = 0; i < 6; i++) r[i] = a[i] ^ b[i];
    return r;
}

Quad scale(const Field& F, const Quad& a, u64 s) {
    Quad r;
    for (int i = 0; i < 6; i++) r[i] = F.mul(a[i], s);
    return r;
}

Quad embed(const Tower& T, const Quad& a, int from, int to) {
    Quad r;
    for (int i = 0; i < 6; i++) r[i] = T.embed(a[i], from, to);
    return r;
}

std::optional<Quad> descend(const Tower& T, const Quad& a, int from, int to) {
    Quad r;
    for (int i = 0; i < 6; i++) {
        auto x = T.descend(a[i], from, to);
        if (!x) return std::nullopt;
        r[i] = *x;
    }
    return r;
}

Quad frob(const Tower& T, const Quad& a, int level, int i) {
    Quad r;
    for (int j = 0; j < 6; j++) r[j] = T.frob(a[j], level, i);
    return r;
}

u64 eval(const Field& F, const Quad& q, const Vec3& p) {
    u64 x = p[0], y = p[1], z = p[2];
    return F.mul(q[0], F.sqr(x)) ^ F.mul(q[1], F.sqr(y)) ^ F.mul(q[2], F.sqr(z)) ^ F.mul(q[3], F.mul(x, y)) ^
           F.mul(q[4], F.mul(y, z)) ^ F.mul(q[5], F.mul(z, x));
}

Quad substitute(const Field& F, const Quad& q, const Mat3& M) { return from_form(form::substitute(F, to_form(q), M)); }

}  // namespace quad

Quad AffineQ::apply(const Field& F, const Quad& q) const {
    Quad r = h;
    for (int j = 0; j < 6; j++) {
        u64 s = r[j];
        for (int i = 0; i < 6; i++) {
            u64 m = M[j][i];
            if (!m || !q[i]) continue;
            s ^= (m == 1) ? q[i] : F.mul(m, q[i]);
        }
        r[j] = s;
    }
    return r;
}

AffineQ AffineQ::identity() {
    AffineQ a;
    for (int i = 0; i < 6; i++) a.M[i][i] = 1;
    return a;
}

}  // namespace binq
