#include "binq/families.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "binq/plane.hpp"
#include "binq/poly.hpp"

namespace binq {

using F_ = FamilyId;

const std::vector<FamilyId>& all_families() {
    static const std::vector<FamilyId> v{F_::O1,   F_::O2,   F_::O3,   F_::O4,   F_::O7_0, F_::O7_1, F_::N4_1,
                                         F_::N4_2, F_::N4_3, F_::N2_1, F_::N2_0, F_::N1_1, F_::S};
    return v;
}

std::string family_name(FamilyId f) {
    static const char* n[] = {"O_1",  "O_2",  "O_3",  "O_4",  "O_7_0", "O_7_1", "N4_1",
                              "N4_2", "N4_3", "N2_1", "N2_0", "N1_1",  "S"};
    return n[int(f)];
}

static std::string squash(const std::string& s) {
    std::string r;
    for (char c : s)
        if (std::isalnum((unsigned char)c)) r += char(std::toupper((unsigned char)c));
    return r;
}

std::optional<FamilyId> parse_family(const std::string& s) {
    std::string t = squash(s);
    for (FamilyId f : all_families())
        if (squash(family_name(f)) == t) return f;
    // N4_1 may also be written N1^(4) style: N(4)1 -> N41 already; accept "NS" = S
    return std::nullopt;
}

Stratum family_stratum(FamilyId f) {
    switch (f) {
    case F_::N4_1: case F_::N4_2: case F_::N4_3: return Stratum::Rank2;
    case F_::N2_1: case F_::N2_0: return Stratum::Rank1;
    case F_::N1_1: return Stratum::Type13;
    case F_::S: return Stratum::Supersingular;
    default: return Stratum::Ordinary;
    }
}

int family_bitangents(FamilyId f) {
    switch (family_stratum(f)) {
    case Stratum::Ordinary: return 7;
    case Stratum::Rank2: return 4;
    case Stratum::Rank1: return 2;
    default: return 1;
    }
}

long long family_count_formula(FamilyId f, long long q) {
    using I = __int128;
    I Q = q, q2 = Q * Q, q3 = q2 * Q, q4 = q3 * Q, q5 = q4 * Q, q6 = q5 * Q;
    auto ex = [](I num, I den) -> long long {
        if (num % den) throw std::domain_error("class count formula is not integral");
        return (long long)(num / den);
    };
    long long mu3 = std::gcd(3LL, q - 1), mu9 = std::gcd(9LL, q - 1);
    switch (f) {
    case F_::O1: return ex(q6 - 7 * q5 + 42 * q4 - 140 * q3 + 343 * q2 - 462 * Q + 328, 168);
    case F_::O2: return ex(q6 - 3 * q5 + 6 * q4 - 12 * q3 + 15 * q2 - 6 * Q, 8);
    case F_::O3: return ex(q6 - q5 - 2 * q3 + 4 * q2 - 6 * Q + 7, 3);
    case F_::O4: return ex(q6 - q5 - q2 - 2 * Q + 4, 4);
    case F_::O7_0: case F_::O7_1: return ex(q6 + 6, 7);
    case F_::N4_1: return ex(q5 - 3 * q4 + 6 * q3 - 7 * q2 + 5 * Q - 2, 6);
    case F_::N4_2: return ex(q5 - q4 - q2 + Q, 2);
    case F_::N4_3: return ex(q5 - q2 + 2 * Q - 2, 3);
    case F_::N2_1: return ex((Q - 1) * (Q - 1) * Q * (Q + 1), 1);
    case F_::N2_0: case F_::N1_1: return ex((Q - 1) * q2, 1);
    case F_::S: {
        long long delta = mu3 - 1, eps = mu9 - mu3;
        return ex((Q + delta) * (2 * Q - 1) + eps, 1);
    }
    }
    throw std::logic_error("family");
}

long long family_count_corrected(FamilyId f, long long q) {
    long long c = family_count_formula(f, q);
    if ((q - 1) % 3) return c;
    // fixed points of (rotation, t), t^3 = 1 != t: N (q-1) q each, 2 resp. 4 such elements
    if (f == F_::N4_1) return c + 2 * q * (q - 1) / 3;
    if (f == F_::N4_3) return c + 4 * q * (q - 1) / 3;
    return c;
}

std::optional<ModelTransform> model_transform(const Field& F, const Form& R, const Mat3& g) {
    Mat3 gi = mat::inverse(F, g);
    Form Rg = form::substitute(F, R, gi);
    auto lam = form::proportional(F, form::odd_part(Rg), form::odd_part(R));
    if (!lam || !*lam) return std::nullopt;
    auto H = form::sqrt(F, form::add(Rg, form::scale(F, R, *lam)));
    if (!H) return std::nullopt;
    u64 s = F.inv(F.sqrt(*lam));
    ModelTransform t;
    t.lambda = *lam;
    for (int i = 0; i < 6; i++) {
        Quad e;
        e[i] = 1;
        Quad img = quad::substitute(F, e, gi);
        for (int j = 0; j < 6; j++) t.map.M[j][i] = F.mul(img[j], s);
    }
    t.map.h = quad::scale(F, quad::from_form(*H), s);
    return t;
}

// ---------------------------------------------------------------- construction

static Vec3 frob_vec(const Tower& T, const Vec3& v, int level, int i = 1) {
    Vec3 r;
    for (int j = 0; j < 3; j++) r[j] = T.frob(v[j], level, i);
    return r;
}

static Vec3 cross(const Field& F, const Vec3& a, const Vec3& b) {
    return {F.mul(a[1], b[2]) ^ F.mul(a[2], b[1]), F.mul(a[2], b[0]) ^ F.mul(a[0], b[2]),
            F.mul(a[0], b[1]) ^ F.mul(a[1], b[0])};
}

static Form product(const Field& F, const std::vector<Vec3>& lines) {
    Form r = form::monomial(0, 0, 0, 1);
    for (auto& l : lines) r = form::mul(F, r, form::linear(l));
    return r;
}

static Mat3 gamma_tuv(const Field& K, u64 t, u64 u, u64 v) {
    // (t^3 x, t^-1 (y + u x), t^-9 (z + u^2 y + v x))
    u64 t3 = K.pow(t, 3), ti = K.inv(t), t9 = K.inv(K.pow(t, 9));
    return mat::from_rows({t3, 0, 0}, {K.mul(ti, u), ti, 0}, {K.mul(t9, v), K.mul(t9, K.sqr(u)), t9});
}

static Mat3 gamma_tu(const Field& K, u64 t, u64 u) {
    // (t^3 x, t^-1 y, t^-5 (z + u y))
    u64 t5 = K.inv(K.pow(t, 5));
    return mat::from_rows({K.pow(t, 3), 0, 0}, {0, K.inv(t), 0}, {0, K.mul(t5, u), t5});
}

Family::Family(const Tower& T, const Generators& gen, FamilyId id) : T_(&T), gen_(gen), id_(id) {
    reps_ = power_class_data(T, id == F_::N1_1 || id == F_::S ? 9 : 3).reps;
    mu3_ = power_class_data(T, 3).mu;
    mu9_ = power_class_data(T, 9).mu;
    const Field& K = T.k();
    switch (id) {
    case F_::O1: case F_::O2: case F_::O3: case F_::O4: case F_::O7_0: case F_::O7_1:
        build_o_family();
        return;
    case F_::N4_1: case F_::N4_2: case F_::N4_3:
        build_n4_family();
        return;
    case F_::N2_1: case F_::N2_0:
        R_ = wall_rhs(2);
        lines_ = {{0, 1, 0}, {1, 0, 0}};
        if (id == F_::N2_0) {
            for (u64 t : mu3_) add_element(gamma_tu(K, t, 0));
        } else {
            for (u64 t : mu3_)
                for (u64 u = 0; u < T.q(); u++) {
                    Mat3 M = gamma_tu(K, t, u);
                    auto tr = model_transform(K, R_, M);
                    if (!tr || tr->lambda != 1) throw std::logic_error("gamma_(t,u) does not preserve the model");
                    n2_mats_.push_back(M);
                    n2_maps_.push_back(tr->map);
                }
            order_ = 2 * int(mu3_.size());
        }
        break;
    case F_::N1_1:
        R_ = wall_rhs(1);
        lines_ = {{1, 0, 0}};
        for (u64 t : mu9_) add_element(gamma_tuv(K, t, 0, 0));
        break;
    case F_::S:
        R_ = wall_rhs(1);
        lines_ = {{1, 0, 0}};
        for (u64 t : mu9_)
            for (u64 v = 0; v < T.q(); v++) add_element(gamma_tuv(K, t, 0, v));
        break;
    }
    std::sort(lines_.begin(), lines_.end());
}

void Family::add_element(const Mat3& M) {
    const Field& F = T_->F(qlevel_);
    Mat3 Ml = mat::embed(*T_, M, 1, qlevel_);
    auto tr = model_transform(F, R_, Ml);
    if (!tr) throw std::logic_error("group element does not preserve the model");
    mats_.push_back(mat::normalize(T_->k(), M));
    maps_.push_back(tr->map);
    order_ = int(mats_.size());
}

void Family::build_o_family() {
    const Tower& T = *T_;
    Vec3 l;
    switch (id_) {
    case F_::O1: llevel_ = 1; break;
    case F_::O2: llevel_ = 2; l = {gen_.u, T.frob(gen_.u, 2), 0}; break;
    case F_::O3: llevel_ = 3; l = {gen_.v3, T.frob(gen_.v3, 3), T.frob(gen_.v3, 3, 2)}; break;
    case F_::O4: llevel_ = 4; l = {gen_.w, T.frob(gen_.w, 4), T.frob(gen_.w, 4, 2)}; break;
    case F_::O7_0: llevel_ = 7; l = {gen_.zeta0, T.frob(gen_.zeta0, 7), T.frob(gen_.zeta0, 7, 2)}; break;
    default: llevel_ = 7; l = {gen_.zeta1, T.frob(gen_.zeta1, 7), T.frob(gen_.zeta1, 7, 2)}; break;
    }
    int L = llevel_;
    const Field& FL = T.F(L);
    if (id_ == F_::O1) triple_ = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    else if (id_ == F_::O2) triple_ = {l, frob_vec(T, l, L), Vec3{0, 0, 1}};
    else triple_ = {l, frob_vec(T, l, L), frob_vec(T, l, L, 2)};
    lines_ = fano_closure(FL, triple_[0], triple_[1], triple_[2]);
    // Galois stable
    std::set<Vec3> ls(lines_.begin(), lines_.end());
    for (auto& b : lines_)
        if (!ls.count(vec::normalize(FL, frob_vec(T, b, L)))) throw std::logic_error("bitangent set is not Galois stable");
    Vec3 sum{};
    for (auto& t : triple_)
        for (int j = 0; j < 3; j++) sum[j] ^= t[j];
    Form RL = product(FL, {triple_[0], triple_[1], triple_[2], sum});
    qlevel_ = (id_ == F_::O7_0 || id_ == F_::O7_1) ? 7 : 1;
    auto Rd = form::descend(T, RL, L, qlevel_);
    if (!Rd) throw std::logic_error("model right-hand side not defined over the base");
    R_ = *Rd;
    std::set<Vec3> pts;
    for (size_t i = 0; i < lines_.size(); i++)
        for (size_t j = i + 1; j < lines_.size(); j++) pts.insert(vec::normalize(FL, cross(FL, lines_[i], lines_[j])));
    fano_pts_.assign(pts.begin(), pts.end());
    if (fano_pts_.size() != 7) throw std::logic_error("not a Fano configuration");

    if (qlevel_ > 1) {
        const Field& F7 = T.F(qlevel_);
        Form D = form::add(R_, form::frob(T, R_, qlevel_));
        auto s = form::sqrt(F7, D);
        if (!s) throw std::logic_error("R + R' is not a square");
        Quad Dq = quad::from_form(*s);
        for (int i = 0; i < 6; i++) {
            auto x = T.additive_h90(Dq[i], qlevel_);
            if (!x) throw std::logic_error("Q + Q' = D has no solution");
            Q0_[i] = *x;
        }
    }

    // Aut_k(B): conjugates of Gamma by the frame that descend to k
    Mat3 Lam = mat::from_rows(triple_[0], triple_[1], triple_[2]);
    Mat3 LamInv = mat::inverse(FL, Lam);
    const GammaGroup& G = GammaGroup::get();
    for (int g = 0; g < G.size(); g++) {
        Mat3 M = mat::normalize(FL, mat::mul(FL, LamInv, mat::mul(FL, mat::embed(T, G[g], 1, L), Lam)));
        auto Mk = mat::descend(T, M, L, 1);
        if (Mk) add_element(*Mk);
    }
}

void Family::build_n4_family() {
    const Tower& T = *T_;
    const Field& K = T.k();
    std::vector<Vec3> conc;  // three lines through (1:0:0)
    if (id_ == F_::N4_1) {
        llevel_ = 1;
        conc = {{0, 1, 0}, {0, 0, 1}, {0, 1, 1}};
    } else if (id_ == F_::N4_2) {
        llevel_ = 2;
        Vec3 l{0, gen_.u, 1};
        conc = {{0, 1, 0}, l, frob_vec(T, l, 2)};
    } else {
        llevel_ = 3;
        const Field& K3 = T.F(3);
        u64 v = gen_.v3b;
        Vec3 l{0, 1, K3.div(T.frob(v, 3), v)};
        conc = {l, frob_vec(T, l, 3), frob_vec(T, l, 3, 2)};
    }
    int L = llevel_;
    const Field& FL = T.F(L);
    std::vector<Vec3> all = conc;
    all.push_back({1, 0, 0});
    auto RL = product(FL, all);
    auto Rd = form::descend(T, RL, L, 1);
    if (!Rd) throw std::logic_error("model right-hand side not defined over k");
    R_ = *Rd;
    for (auto& c : conc) c = vec::normalize(FL, c);
    std::sort(conc.begin(), conc.end());
    lines_ = conc;
    lines_.push_back({1, 0, 0});
    std::sort(lines_.begin(), lines_.end());
    // block matrices diag(1, A) permuting the concurrent lines, scaled so that lambda = 1
    u64 q = T.q();
    std::vector<std::array<u64, 4>> pgl2;
    for (u64 a = 0; a < q; a++)
        for (u64 b = 0; b < q; b++)
            for (u64 c = 0; c < q; c++)
                for (u64 d = 0; d < q; d++) {
                    if ((K.mul(a, d) ^ K.mul(b, c)) == 0) continue;
                    u64 lead = a ? a : b;
                    if (lead != 1) continue;
                    pgl2.push_back({a, b, c, d});
                }
    for (auto& A : pgl2) {
        Mat3 M = mat::from_rows({1, 0, 0}, {0, A[0], A[1]}, {0, A[2], A[3]});
        Mat3 ML = mat::embed(T, M, 1, L), Minv = mat::inverse(FL, ML);
        std::vector<Vec3> img;
        for (auto& c : conc) img.push_back(vec::normalize(FL, mat::apply_line(FL, c, Minv)));
        std::sort(img.begin(), img.end());
        if (img != conc) continue;
        for (u64 s = 1; s < q; s++) {
            Mat3 Ms = mat::from_rows({1, 0, 0}, {0, K.mul(s, A[0]), K.mul(s, A[1])}, {0, K.mul(s, A[2]), K.mul(s, A[3])});
            auto tr = model_transform(K, R_, Ms);
            if (tr && tr->lambda == 1) add_element(Ms);
        }
    }
}

// ---------------------------------------------------------------- domain

std::vector<Quad> Family::raw_space() const {
    const Tower& T = *T_;
    u64 q = T.q();
    u64 total = 1;
    for (int i = 0; i < 6; i++) total *= q;
    std::vector<Quad> out;
    out.reserve(total);
    for (u64 code = 0; code < total; code++) {
        Quad Q;
        u64 c = code;
        for (int i = 0; i < 6; i++) Q[i] = c % q, c /= q;
        if (qlevel_ > 1) {
            Q = quad::add(quad::embed(T, Q, 1, qlevel_), Q0_);
        }
        out.push_back(Q);
    }
    return out;
}

bool Family::admissible(const Quad& Q) const {
    const Field& K = T_->k();
    u64 a = Q[0], b = Q[1], c = Q[2], e = Q[4];
    switch (id_) {
    case F_::N4_1: return a && b && c && (b ^ c ^ e);
    case F_::N4_2: return a && c && !(b == K.mul(c, gen_.r) && e == c);
    case F_::N4_3: return a && (b || c || e);
    case F_::N2_1: case F_::N2_0: return a && c;
    case F_::N1_1: case F_::S: return c != 0;
    default: break;
    }
    const Tower& T = *T_;
    const Field& FL = T.F(llevel_);
    Quad QL = quad::embed(T, Q, qlevel_, llevel_);
    Form RL = form::embed(T, R_, qlevel_, llevel_);
    for (auto& P : fano_pts_)
        if ((FL.sqr(quad::eval(FL, QL, P)) ^ form::eval(FL, RL, P)) == 0) return false;
    return true;
}

bool Family::in_domain(const Quad& Q) const {
    const Tower& T = *T_;
    const Field& K = T.k();
    if (qlevel_ > 1) {
        if (!quad::descend(T, quad::add(Q, Q0_), qlevel_, 1)) return false;
    } else {
        for (u64 x : Q.v)
            if (x > K.mask()) return false;
    }
    if (!admissible(Q)) return false;
    auto isrep = [&](u64 x) { return std::find(reps_.begin(), reps_.end(), x) != reps_.end(); };
    switch (id_) {
    case F_::N4_1: case F_::N4_2: case F_::N4_3: return isrep(Q[0]);
    case F_::N2_1: return isrep(Q[0]) && Q[5] && (Q[3] == 0 || Q[3] == K.div(gen_.r, Q[5]));
    case F_::N2_0: return isrep(Q[0]) && !Q[3] && !Q[5];
    case F_::N1_1: return isrep(Q[2]) && !Q[3] && !Q[5] && Q[4];
    case F_::S: return isrep(Q[2]) && !Q[1] && !Q[4];
    default: return true;
    }
}

std::vector<Quad> Family::enumerate() const {
    const Tower& T = *T_;
    const Field& K = T.k();
    u64 q = T.q();
    std::vector<Quad> out;
    auto push = [&](const Quad& Q) {
        if (admissible(Q)) out.push_back(Q);
    };
    switch (id_) {
    case F_::N4_1: case F_::N4_2: case F_::N4_3:
        for (u64 a : reps_)
            for (u64 b = 0; b < q; b++)
                for (u64 c = 0; c < q; c++)
                    for (u64 d = 0; d < q; d++)
                        for (u64 e = 0; e < q; e++)
                            for (u64 f = 0; f < q; f++) push(Quad{{a, b, c, d, e, f}});
        break;
    case F_::N2_1:
        for (u64 a : reps_)
            for (u64 b = 0; b < q; b++)
                for (u64 c = 1; c < q; c++)
                    for (u64 e = 0; e < q; e++)
                        for (u64 f = 1; f < q; f++)
                            for (u64 d : {u64(0), K.div(gen_.r, f)}) push(Quad{{a, b, c, d, e, f}});
        break;
    case F_::N2_0:
        for (u64 a : reps_)
            for (u64 b = 0; b < q; b++)
                for (u64 c = 1; c < q; c++)
                    for (u64 e = 0; e < q; e++) push(Quad{{a, b, c, 0, e, 0}});
        break;
    case F_::N1_1:
        for (u64 c : reps_)
            for (u64 a = 0; a < q; a++)
                for (u64 b = 0; b < q; b++)
                    for (u64 e = 1; e < q; e++) push(Quad{{a, b, c, 0, e, 0}});
        break;
    case F_::S:
        for (u64 c : reps_)
            for (u64 a = 0; a < q; a++)
                for (u64 d = 0; d < q; d++)
                    for (u64 f = 0; f < q; f++) push(Quad{{a, 0, c, d, 0, f}});
        break;
    default:
        for (const Quad& Q : raw_space()) push(Q);
    }
    sort_points(out);
    return out;
}

long long Family::domain_size() const { return (long long)enumerate().size(); }

Form Family::quartic(const Quad& Q) const {
    const Tower& T = *T_;
    const Field& F = T.F(qlevel_);
    Form N = form::add(form::square(F, quad::to_form(Q)), R_);
    auto d = form::descend(T, N, qlevel_, 1);
    if (!d) throw std::domain_error("model quartic is not defined over k");
    return *d;
}

// ---------------------------------------------------------------- action

static int n2_index(const Family& fam, const std::vector<u64>& mu3, int g, const Quad& Q, u64& u) {
    const Field& K = fam.tower().k();
    int ti = g / 2;
    u = (g % 2) ? K.inv(K.sqr(Q[5])) : 0;
    (void)mu3;
    return ti * int(fam.tower().q()) + int(u);
}

Quad Family::act(int g, const Quad& Q) const {
    if (id_ == F_::N2_1) {
        u64 u;
        int idx = n2_index(*this, mu3_, g, Q, u);
        return n2_maps_[idx].apply(T_->k(), Q);
    }
    return maps_[g].apply(T_->F(qlevel_), Q);
}

Mat3 Family::group_matrix(int g, const Quad& Q) const {
    if (id_ == F_::N2_1) {
        u64 u;
        return n2_mats_[n2_index(*this, mu3_, g, Q, u)];
    }
    return mats_[g];
}

GroupAction Family::action() const {
    GroupAction A;
    A.label = name();
    A.order = order_;
    A.points = enumerate();
    A.act = [this](int g, const Quad& Q) { return act(g, Q); };
    return A;
}

// element orders of C2^e x (mu_3 part)
static std::string abelian_name(int two_rank, int three) {
    std::vector<int> ord;
    for (int x = 0; x < (1 << two_rank); x++)
        for (int y = 0; y < three; y++) {
            int o = 1;
            if (x) o *= 2;
            if (y) o *= 3;
            ord.push_back(o);
        }
    return structure_name(ord);
}

std::optional<AutDescription> Family::aut_table(const Quad& Q) const {
    const Field& K = T_->k();
    u64 a = Q[0], b = Q[1], c = Q[2], d = Q[3], e = Q[4], f = Q[5];
    auto desc = [](long long o, std::string s) { return AutDescription{o, std::move(s)}; };
    switch (id_) {
    case F_::O1: return std::nullopt;
    case F_::O2:
        if (a == b && d == 1 && c == e && e == f) return desc(8, "D8");
        if (a == b && d == 1 && e == f && f != c) return desc(4, "C2^2");
        if (a == b && d != 1 && c == e && e == f) return desc(4, "C2^2");
        if (a == (b ^ e ^ f) && d == 1 && e != f) return desc(2, "C2");
        if (a == b && (d ^ e ^ f) == 1 && e != f) return desc(2, "C2");
        if (c == e && e == f && a != b) return desc(2, "C2");
        if (e == f && f == (a ^ b ^ c) && a != b) return desc(2, "C2");
        if (a == b && e == f && f != c && d != 1) return desc(2, "C2");
        return desc(1, "1");
    case F_::O3:
        if (a == b && b == c && d == e && e == f) return desc(3, "C3");
        return desc(1, "1");
    case F_::O4:
        if (a == b && b == c && f == 0 && d == e) return desc(4, "C4");
        if (a == c && (d ^ e ^ f) == 0 && (f != 0 || b != c)) return desc(2, "C2");
        return desc(1, "1");
    case F_::O7_0: case F_::O7_1:
        if (Q == klein_twist()) return desc(7, "C7");
        return desc(1, "1");
    case F_::N4_1:
        if (b == c && c == e && d == 0 && f == 0) return desc(6, "S3");
        if (c == e && f == 0 && d != 0) return desc(2, "C2");
        if (b == c && d == f && d != 0) return desc(2, "C2");
        if (b == e && d == 0 && f != 0) return desc(2, "C2");
        return desc(1, "1");
    case F_::N4_2:
        if (c == e && f == 0) return desc(2, "C2");
        return desc(1, "1");
    case F_::N4_3:
        if (b == c && c == e && d == 0 && f == 0) return desc(3, "C3");
        return desc(1, "1");
    case F_::N2_1:
        if (e == K.mul(c, K.inv(K.sqr(f)))) return desc(2, "C2");
        return desc(1, "1");
    case F_::N2_0: case F_::N1_1: return desc(1, "1");
    case F_::S: {
        auto ker = additive_kernel(*T_, c, f);
        int r = 0;
        while ((size_t(1) << r) < ker.size()) r++;
        int m3 = int(mu3_.size());
        if (d != 0) return desc((long long)ker.size(), abelian_name(r, 1));
        if (f != 0) return desc((long long)ker.size() * m3, abelian_name(r, m3));
        auto ker0 = additive_kernel(*T_, c, 0);
        long long extra = 0;
        for (u64 t : mu9_) {
            u64 t3 = K.pow(t, 3);
            if (t3 == 1) continue;
            u64 target = K.mul(t3, a);
            for (u64 v = 0; v < T_->q(); v++)
                if ((K.mul(c, K.sqr(v)) ^ K.sqrt(v)) == target) extra++;
        }
        if (extra == 0) return desc((long long)ker0.size() * m3, abelian_name(r, m3));
        return desc((long long)ker0.size() * m3 + extra, "");
    }
    }
    return std::nullopt;
}

std::optional<AutDescription> Family::aut_table_corrected(const Quad& Q) const {
    if (id_ != F_::N4_1 && id_ != F_::N4_3) return aut_table(Q);
    const Field& K = T_->k();
    u64 b = Q[1], c = Q[2], d = Q[3], e = Q[4], f = Q[5];
    auto desc = [](long long o, const char* s) { return AutDescription{o, s}; };
    if (b == c && c == e && d == 0 && f == 0) return id_ == F_::N4_1 ? desc(6, "S3") : desc(3, "C3");
    for (u64 t : mu3_)
        if (t != 1 && e == 0 && c == K.mul(K.sqr(t), b) && f == K.mul(t, d)) return desc(3, "C3");
    if (id_ == F_::N4_1 && ((c == e && f == 0) || (b == c && d == f) || (b == e && d == 0))) return desc(2, "C2");
    return desc(1, "1");
}

AutDescription Family::stabilizer_aut(const Quad& Q) const {
    std::vector<int> ord;
    const Field& K = T_->k();
    for (int g = 0; g < order_; g++)
        if (act(g, Q) == Q) ord.push_back(mat::order(K, group_matrix(g, Q)));
    return AutDescription{(long long)ord.size(), structure_name(ord)};
}

Quad Family::klein_twist() const {
    if (id_ != F_::O7_0 && id_ != F_::O7_1) throw std::logic_error("Klein twist only for O_7");
    const Field& F = T_->F(7);
    Form l0 = form::linear(triple_[0]), l1 = form::linear(triple_[1]), l2 = form::linear(triple_[2]);
    Form s = form::add(form::add(form::mul(F, l0, l0), form::mul(F, l1, l1)), form::mul(F, l2, l2));
    s = form::add(s, form::add(form::add(form::mul(F, l0, l1), form::mul(F, l1, l2)), form::mul(F, l0, l2)));
    return quad::from_form(s);
}

// ---------------------------------------------------------------- table

FamilyTable::FamilyTable(const Tower& T) : FamilyTable(T, find_family_generators(T)) {}

FamilyTable::FamilyTable(const Tower& T, const Generators& gen) : T_(&T), gen_(gen) {
    for (FamilyId f : all_families()) fam_.push_back(std::make_unique<Family>(T, gen_, f));
}

// ---------------------------------------------------------------- classification

static const std::vector<Mat3>& pgl3_cached(const Field& K) {
    static std::mutex m;
    static std::map<std::pair<int, u64>, std::vector<Mat3>> cache;
    std::lock_guard<std::mutex> lk(m);
    auto key = std::make_pair(K.m(), K.modulus());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, pgl3(K)).first;
    return it->second;
}

Identification reduce_to_family(const FamilyTable& fams, const Form& F) {
    const Tower& T = fams.tower();
    const Field& K = T.k();
    if (auto sp = singular_point(T, F)) throw std::domain_error("quartic is singular");
    auto bits = find_bitangents(T, F);
    int n = int(bits.size());
    int L = common_level(bits);
    std::optional<Identification> best;
    for (FamilyId fid : all_families()) {
        const Family& fam = fams[fid];
        if (family_bitangents(fid) != n || fam.line_level() != L) continue;
        const Field& FL = T.F(L);
        std::vector<Vec3> src;
        for (auto& b : bits) src.push_back(vec::embed(T, b.line, b.level, L));
        const auto& target = fam.bitangents();
        int ql = fam.q_level();
        const Field& FQ = T.F(ql);
        Form oddR = form::odd_part(fam.R());
        for (const Mat3& eta : pgl3_cached(K)) {
            Mat3 eL = mat::embed(T, eta, 1, L);
            bool ok = true;
            for (auto& c : src)
                if (!std::binary_search(target.begin(), target.end(), vec::normalize(FL, mat::apply_line(FL, c, eL)))) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Form G = form::embed(T, form::substitute(K, F, eta), 1, ql);
            auto mu = form::proportional(FQ, form::odd_part(G), oddR);
            if (!mu) continue;
            Form sq = form::add(form::scale(FQ, G, FQ.inv(*mu)), fam.R());
            auto Q = quartic_sqrt(FQ, sq);
            if (!Q || !fam.in_domain(*Q)) continue;
            if (!best || std::tie(best->family, best->Q) > std::tie(fid, *Q)) best = Identification{fid, *Q, eta};
        }
        if (best) break;
    }
    if (!best) throw std::runtime_error("no normal model found for the bitangent configuration");
    return *best;
}

// ---------------------------------------------------------------- supersingular quotient

SupersingularQuotient supersingular_quotient(const Tower& T, const Quad& Q) {
    const Field& K = T.k();
    if (Q[1] || Q[4] || !Q[2]) throw std::invalid_argument("not an S-model");
    SupersingularQuotient s;
    s.A = K.sqr(Q[0]);
    s.C = K.sqr(Q[2]);
    s.D = K.sqr(Q[3]);
    s.F = K.sqr(Q[5]);
    for (int L : {1, 3}) {
        const Field& FL = T.F(L);
        Poly p{1, T.embed(s.F, 1, L), 0, T.embed(s.C, 1, L)};
        auto r = poly::roots(FL, p);
        if (r.empty()) continue;
        s.level = L;
        s.C = T.embed(s.C, 1, L);
        s.F = T.embed(s.F, 1, L);
        s.D = T.embed(s.D, 1, L);
        s.A = T.embed(s.A, 1, L);
        s.v = r.front();
        s.vinv = FL.inv(s.v);
        return s;
    }
    throw std::logic_error("cubic without a root in k or k_3");
}

bool quotient_identity_holds(const Tower& T, const SupersingularQuotient& s) {
    const Field& F = T.F(s.level);
    Poly u{0, s.v, 1};  // z^2 + v z
    Poly lhs = poly::add(poly::scale(F, poly::mul(F, u, u), s.C), poly::scale(F, u, s.vinv));
    Poly rhs{0, 1, s.F, 0, s.C};
    poly::trim(rhs);
    poly::trim(lhs);
    return lhs == rhs && s.v != 0;
}

bool quotient_involution_holds(const Tower& T, const Quad& Q, const SupersingularQuotient& s) {
    const Field& F = T.F(s.level);
    Form N = form::embed(T, wall_model(T.k(), 1, Q), 1, s.level);
    Mat3 M = mat::from_rows({1, 0, 0}, {0, 1, 0}, {s.v, 0, 1});
    return form::substitute(F, N, M) == N;
}

bool quotient_is_elliptic(const SupersingularQuotient& s) {
    // d/du of C u^2 + u/v is 1/v, so the affine part is smooth; at infinity the
    // closure C u^2 w + (1/v) u w^2 + y^3 + D y^2 w + A w^3 has d/dw = C at (1:0:0)
    return s.vinv != 0 && s.C != 0;
}

}  // namespace binq
