#include "binq/plane.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace binq {

static const Field& f2() {
    static Field F(1, default_modulus(1));
    return F;
}

static int code_of(const Mat3& M) {
    int c = 0;
    for (int i = 0; i < 9; i++)
        if (M.m[i]) c |= 1 << i;
    return c;
}

const GammaGroup& GammaGroup::get() {
    static GammaGroup G;
    return G;
}

GammaGroup::GammaGroup() {
    const Field& F = f2();
    code_.fill(-1);
    for (int c = 0; c < 512; c++) {
        Mat3 M;
        for (int i = 0; i < 9; i++) M.m[i] = (c >> i) & 1;
        if (mat::det(F, M)) {
            code_[c] = int(el_.size());
            el_.push_back(M);
        }
    }
    int n = size();
    mul_.assign(n, std::vector<int>(n));
    inv_.resize(n);
    order_.resize(n);
    cls_.resize(n);
    cent_.resize(n);
    id_ = index(mat::identity());
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++) mul_[a][b] = code_[code_of(mat::mul(F, el_[a], el_[b]))];
    for (int a = 0; a < n; a++) {
        for (int b = 0; b < n; b++)
            if (mul_[a][b] == id_) inv_[a] = b;
        int p = a, k = 1;
        while (p != id_) {
            p = mul_[p][a];
            k++;
        }
        order_[a] = k;
        for (int b = 0; b < n; b++)
            if (mul_[a][b] == mul_[b][a]) cent_[a].push_back(b);
    }
    for (int cls = C1; cls <= C7_1; cls++) rep_[cls] = index(gamma_rep(cls));
    for (int a = 0; a < n; a++) {
        int c = 0;
        switch (order_[a]) {
        case 1: c = C1; break;
        case 2: c = C2; break;
        case 3: c = C3; break;
        case 4: c = C4; break;
        default: {
            // order 7 classes are told apart by the trace
            const Mat3& M = el_[a];
            c = ((M(0, 0) ^ M(1, 1) ^ M(2, 2)) & 1) ? C7_1 : C7_0;
        }
        }
        cls_[a] = c;
        members_[c].push_back(a);
    }
    tau_ = index(Mat3{{1, 0, 0, 0, 1, 0, 1, 1, 1}});
    rho_ = index(Mat3{{1, 0, 1, 0, 1, 1, 1, 1, 1}});
}

int GammaGroup::index(const Mat3& M) const {
    for (u64 x : M.m)
        if (x > 1) return -1;
    return code_[code_of(M)];
}

const char* GammaGroup::class_name(int cls) {
    static const char* names[] = {"1", "gamma2", "gamma3", "gamma4", "gamma7_0", "gamma7_1"};
    return names[cls];
}

Mat3 gamma_rep(int cls) {
    switch (cls) {
    case GammaGroup::C1: return mat::identity();
    case GammaGroup::C2: return Mat3{{0, 1, 0, 1, 0, 0, 0, 0, 1}};
    case GammaGroup::C3: return Mat3{{0, 1, 0, 0, 0, 1, 1, 0, 0}};
    case GammaGroup::C4: return Mat3{{0, 1, 0, 0, 0, 1, 1, 1, 1}};
    case GammaGroup::C7_0: return Mat3{{0, 1, 0, 0, 0, 1, 1, 1, 0}};
    case GammaGroup::C7_1: return Mat3{{0, 1, 0, 0, 0, 1, 1, 0, 1}};
    }
    throw std::out_of_range("class id");
}

std::vector<Vec3> fano_closure(const Field& F, const Vec3& l1, const Vec3& l2, const Vec3& l3) {
    if (!mat::det(F, mat::from_rows(l1, l2, l3))) throw std::invalid_argument("dependent lines");
    std::vector<Vec3> out;
    for (int m = 1; m < 8; m++) {
        Vec3 s{};
        for (int j = 0; j < 3; j++) {
            if (m & 1) s[j] ^= l1[j];
            if (m & 2) s[j] ^= l2[j];
            if (m & 4) s[j] ^= l3[j];
        }
        out.push_back(vec::normalize(F, s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// matrix with columns p0,p1,p2 scaled so that it sends (1,1,1) to p3
static Mat3 frame(const Field& F, const std::array<Vec3, 4>& p) {
    Mat3 A;
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) A(i, j) = p[j][i];
    u64 d = mat::det(F, A);
    if (!d) throw std::invalid_argument("degenerate frame");
    Mat3 adj = mat::adjugate(F, A);
    Vec3 lam = mat::apply(F, adj, p[3]);  // A^{-1} p3 up to 1/d
    for (int j = 0; j < 3; j++) {
        if (!lam[j]) throw std::invalid_argument("degenerate frame");
        for (int i = 0; i < 3; i++) A(i, j) = F.mul(A(i, j), lam[j]);
    }
    return A;
}

Mat3 map_from_correspondence(const Field& F, const std::array<Vec3, 4>& src, const std::array<Vec3, 4>& dst) {
    Mat3 A = frame(F, src), B = frame(F, dst);
    return mat::normalize(F, mat::mul(F, B, mat::adjugate(F, A)));
}

std::vector<Vec3> projective_points(const Field& F) {
    std::vector<Vec3> pts;
    u64 q = F.size();
    for (u64 y = 0; y < q; y++)
        for (u64 z = 0; z < q; z++) pts.push_back({1, y, z});
    for (u64 z = 0; z < q; z++) pts.push_back({0, 1, z});
    pts.push_back({0, 0, 1});
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<Mat3> pgl3(const Field& F) {
    // rows: first row canonical (first nonzero entry 1), others arbitrary
    std::vector<Vec3> canon = projective_points(F);
    std::vector<Vec3> all;
    u64 q = F.size();
    for (u64 a = 0; a < q; a++)
        for (u64 b = 0; b < q; b++)
            for (u64 c = 0; c < q; c++) all.push_back({a, b, c});
    std::vector<Mat3> out;
    for (const Vec3& r0 : canon)
        for (const Vec3& r1 : all) {
            // r1 independent of r0
            Vec3 cr{F.mul(r0[1], r1[2]) ^ F.mul(r0[2], r1[1]), F.mul(r0[2], r1[0]) ^ F.mul(r0[0], r1[2]),
                    F.mul(r0[0], r1[1]) ^ F.mul(r0[1], r1[0])};
            if (vec::is_zero(cr)) continue;
            for (const Vec3& r2 : all) {
                u64 d = F.mul(cr[0], r2[0]) ^ F.mul(cr[1], r2[1]) ^ F.mul(cr[2], r2[2]);
                if (d) out.push_back(mat::from_rows(r0, r1, r2));
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

BinaryQuarticMap binary_quartic_map(const Mat3& M) {
    const Field& F = f2();
    BinaryQuarticMap bm;
    for (int j = 0; j < 15; j++) {
        Form f = form::zero(4);
        f.c[j] = 1;
        Form g = form::substitute(F, f, M);
        uint32_t m = 0;
        for (int i = 0; i < 15; i++)
            if (g.c[i]) m |= 1u << i;
        bm.col[j] = m;
    }
    return bm;
}

std::string to_hex(const Mat3& M) {
    std::ostringstream os;
    os << std::hex;
    for (int i = 0; i < 9; i++) os << (i ? " " : "") << M.m[i];
    return os.str();
}

}  // namespace binq
