#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "binq/tower.hpp"

namespace binq {

// a x^2 + b y^2 + c z^2 + d xy + e yz + f zx
struct Quad {
    std::array<u64, 6> v{};
    u64& operator[](int i) { return v[i]; }
    u64 operator[](int i) const { return v[i]; }
    auto operator<=>(const Quad&) const = default;
    bool operator==(const Quad&) const = default;
};

struct QuadHash {
    size_t operator()(const Quad& q) const {
        u64 h = 0x9e3779b97f4a7c15ULL;
        for (u64 x : q.v) h = (h ^ x) * 0xff51afd7ed558ccdULL + (h >> 29);
        return size_t(h);
    }
};

// 3x3 matrix, row-major. As a map of P^2 it sends p to M p; rows are the
// linear forms l_i and F^M(x,y,z) = F(l_1, l_2, l_3).
struct Mat3 {
    std::array<u64, 9> m{};
    u64& operator()(int i, int j) { return m[3 * i + j]; }
    u64 operator()(int i, int j) const { return m[3 * i + j]; }
    auto operator<=>(const Mat3&) const = default;
    bool operator==(const Mat3&) const = default;
};

using Vec3 = std::array<u64, 3>;

namespace mat {
Mat3 identity();
Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2);
Mat3 mul(const Field& F, const Mat3& A, const Mat3& B);
u64 det(const Field& F, const Mat3& A);
Mat3 adjugate(const Field& F, const Mat3& A);
// inverse up to scalar (adjugate, then normalized)
Mat3 inverse(const Field& F, const Mat3& A);
// first nonzero entry in row-major order scaled to 1
Mat3 normalize(const Field& F, const Mat3& A);
Vec3 apply(const Field& F, const Mat3& A, const Vec3& p);
// row vector times matrix: the line c . (x,y,z) pulled back, (c M)
Vec3 apply_line(const Field& F, const Vec3& c, const Mat3& A);
Mat3 embed(const Tower& T, const Mat3& A, int from, int to);
std::optional<Mat3> descend(const Tower& T, const Mat3& A, int from, int to);
Mat3 frob(const Tower& T, const Mat3& A, int level, int i = 1);
bool equal_projective(const Field& F, const Mat3& A, const Mat3& B);
// order in PGL_3, up to limit (0 if larger)
int order(const Field& F, const Mat3& A, int limit = 64);
}  // namespace mat

namespace vec {
Vec3 normalize(const Field& F, const Vec3& p);
bool is_zero(const Vec3& p);
Vec3 embed(const Tower& T, const Vec3& p, int from, int to);
}  // namespace vec

// Homogeneous form of degree D in x,y,z. Coefficients in descending lex order
// of the exponent triple: x^D, x^(D-1) y, x^(D-1) z, ..., z^D.
struct Form {
    int deg = 0;
    std::vector<u64> c;
    bool operator==(const Form&) const = default;
};

namespace form {
int nmono(int D);
int index(int D, int i, int j);  // exponents (i, j, D-i-j)
std::array<int, 3> expo(int D, int idx);

Form zero(int D);
Form monomial(int D, int i, int j, u64 coef = 1);
Form linear(const Vec3& l);
bool is_zero(const Form& f);
Form add(const Form& a, const Form& b);
Form mul(const Field& F, const Form& a, const Form& b);
Form scale(const Field& F, const Form& a, u64 s);
Form pow(const Field& F, const Form& a, int e);
// a^2, coefficientwise Frobenius with doubled exponents
Form square(const Field& F, const Form& a);
// square root when all exponents are even
std::optional<Form> sqrt(const Field& F, const Form& a);
// F(M p)
Form substitute(const Field& F, const Form& a, const Mat3& M);
u64 eval(const Field& F, const Form& a, const Vec3& p);
Form partial(const Form& a, int var);
Form frob(const Tower& T, const Form& a, int level, int i = 1);
Form embed(const Tower& T, const Form& a, int from, int to);
std::optional<Form> descend(const Tower& T, const Form& a, int from, int to);
// monomials with some odd exponent vs all even
Form odd_part(const Form& a);
Form even_part(const Form& a);
// scalar s with a = s b, if any (b nonzero)
std::optional<u64> proportional(const Field& F, const Form& a, const Form& b);
std::string to_string(const Form& a);
}  // namespace form

namespace quad {
Form to_form(const Quad& q);
Quad from_form(const Form& f);
Quad add(const Quad& a, const Quad& b);
Quad scale(const Field& F, const Quad& a, u64 s);
Quad embed(const Tower& T, const Quad& a, int from, int to);
std::optional<Quad> descend(const Tower& T, const Quad& a, int from, int to);
Quad frob(const Tower& T, const Quad& a, int level, int i = 1);
u64 eval(const Field& F, const Quad& q, const Vec3& p);
Quad substitute(const Field& F, const Quad& q, const Mat3& M);
}  // namespace quad

// Affine map Q -> M Q + h on sextuples over one level.
struct AffineQ {
    std::array<std::array<u64, 6>, 6> M{};
    Quad h;
    Quad apply(const Field& F, const Quad& q) const;
    static AffineQ identity();
};

}  // namespace binq
