#include <doctest.h>

#include <random>
#include <set>

#include "binq/plane.hpp"
#include "binq/quartic.hpp"

using namespace binq;

static Quad Qv(u64 a, u64 b, u64 c, u64 d, u64 e, u64 f) { return Quad{{a, b, c, d, e, f}}; }

static Form random_quartic(const Field& F, std::mt19937_64& rng) {
    Form f = form::zero(4);
    for (auto& c : f.c) c = rng() & F.mask();
    return f;
}

// brute-force singular point search over k_d, d <= maxd
static bool brute_singular(const Tower& T, const Form& F, int maxd) {
    std::vector<Form> G{F, form::partial(F, 0), form::partial(F, 1), form::partial(F, 2)};
    for (int d = 1; d <= maxd; d++) {
        const Field& K = T.F(d);
        std::vector<Form> Gd;
        for (auto& g : G) Gd.push_back(form::embed(T, g, 1, d));
        for (const Vec3& p : projective_points(K)) {
            bool all = true;
            for (auto& g : Gd)
                if (form::eval(K, g, p)) { all = false; break; }
            if (all) return true;
        }
    }
    return false;
}

static long long brute_count(const Tower& T, const Form& F, int i) {
    const Field& K = T.F(i);
    Form g = form::embed(T, F, 1, i);
    long long n = 0;
    for (const Vec3& p : projective_points(K)) n += form::eval(K, g, p) == 0;
    return n;
}

static std::set<Vec3> line_set(const std::vector<Bitangent>& b) {
    std::set<Vec3> s;
    for (auto& x : b) s.insert(x.line);
    return s;
}

TEST_CASE("model right-hand sides and admissibility") {
    Tower T(1);
    const Field& F = T.k();
    Form f = wall_model(F, 1, Qv(0, 0, 1, 0, 0, 0));
    Form g = form::zero(4);
    g.c[form::index(4, 0, 0)] = 1;  // z^4
    g.c[form::index(4, 1, 3)] = 1;  // x y^3
    g.c[form::index(4, 3, 0)] = 1;  // x^3 z
    CHECK(f == g);
    CHECK(is_smooth(T, f));
    CHECK(is_admissible(F, 7, Qv(1, 1, 1, 1, 1, 1)));
    CHECK(!is_admissible(F, 7, Qv(1, 1, 1, 0, 0, 1)));
    CHECK(!is_admissible(F, 4, Qv(1, 1, 1, 0, 0, 0)));
    CHECK(is_admissible(F, 4, Qv(1, 1, 1, 0, 1, 0)));
    CHECK(is_admissible(F, 2, Qv(1, 0, 1, 0, 0, 0)));
    CHECK(!is_admissible(F, 1, Qv(1, 1, 0, 1, 1, 1)));
}

TEST_CASE("admissibility matches smoothness of the models over small fields") {
    for (int n : {1, 2}) {
        Tower T(n);
        const Field& F = T.k();
        u64 q = F.size();
        long long total = 0;
        for (int B : {7, 4, 2, 1}) {
            for (u64 code = 0; code < (u64(1) << (6 * n)); code++) {
                Quad Q;
                for (int i = 0; i < 6; i++) Q.v[i] = (code >> (n * i)) & (q - 1);
                bool sm = is_smooth(T, wall_model(F, B, Q));
                CHECK(sm == is_admissible(F, B, Q));
                total += sm;
            }
        }
        CHECK(total > 0);
    }
}

TEST_CASE("singular examples and witnesses") {
    Tower T(1);
    const Field& F = T.k();
    Form xyzs = wall_rhs(7);  // xyz(x+y+z), four lines
    auto sp = singular_point(T, xyzs);
    REQUIRE(sp);
    Form h = form::embed(T, xyzs, 1, sp->level);
    for (int i = 0; i < 3; i++) CHECK(form::eval(T.F(sp->level), form::partial(h, i), sp->p) == 0);
    // (x^2 + yz)^2
    Form c = form::zero(2);
    c.c[form::index(2, 2, 0)] = 1;
    c.c[form::index(2, 0, 1)] = 1;
    Form sq = form::square(F, c);
    sp = singular_point(T, sq);
    REQUIRE(sp);
    CHECK(form::eval(T.F(sp->level), form::embed(T, sq, 1, sp->level), sp->p) == 0);
    CHECK(is_smooth(T, wall_model(F, 7, Qv(1, 1, 1, 1, 1, 1))));
}

TEST_CASE("smoothness agrees with brute force at q = 2") {
    Tower T(1);
    std::mt19937_64 rng(11);
    int smooth = 0;
    for (int it = 0; it < 300; it++) {
        Form f = random_quartic(T.k(), rng);
        if (form::is_zero(f)) continue;
        auto sp = singular_point(T, f);
        bool brute = brute_singular(T, f, 6);
        CHECK(sp.has_value() == brute);
        if (sp) {
            const Field& K = T.F(sp->level);
            Form g = form::embed(T, f, 1, sp->level);
            CHECK(form::eval(K, g, sp->p) == 0);
            for (int i = 0; i < 3; i++) CHECK(form::eval(K, form::partial(g, i), sp->p) == 0);
        } else {
            smooth++;
        }
    }
    CHECK(smooth > 50);
}

TEST_CASE("smoothness witnesses at q = 4") {
    Tower T(2);
    std::mt19937_64 rng(12);
    for (int it = 0; it < 100; it++) {
        Form f = random_quartic(T.k(), rng);
        if (form::is_zero(f)) continue;
        auto sp = singular_point(T, f);
        if (sp) {
            const Field& K = T.F(sp->level);
            Form g = form::embed(T, f, 1, sp->level);
            CHECK(form::eval(K, g, sp->p) == 0);
            for (int i = 0; i < 3; i++) CHECK(form::eval(K, form::partial(g, i), sp->p) == 0);
        } else {
            CHECK(!brute_singular(T, f, 3));
        }
    }
}

TEST_CASE("square roots of quartics") {
    Tower T(3);
    const Field& F = T.k();
    std::mt19937_64 rng(3);
    for (int it = 0; it < 50; it++) {
        Quad Q;
        for (auto& x : Q.v) x = rng() & F.mask();
        CHECK(*quartic_sqrt(F, form::square(F, quad::to_form(Q))) == Q);
    }
    CHECK(!quartic_sqrt(F, wall_rhs(7)));
}

TEST_CASE("bitangents of the four models") {
    Tower T(1);
    const Field& F = T.k();
    // 7: the Fano plane x, y, z, x+y, y+z, x+z, x+y+z
    auto b7 = find_bitangents(T, wall_model(F, 7, Qv(1, 1, 1, 1, 1, 1)));
    REQUIRE(b7.size() == 7);
    CHECK(line_set(b7) == std::set<Vec3>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
    CHECK(is_fano(T, b7));
    auto b4 = find_bitangents(T, wall_model(F, 4, Qv(1, 1, 1, 0, 1, 0)));
    CHECK(line_set(b4) == std::set<Vec3>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}});
    auto b2 = find_bitangents(T, wall_model(F, 2, Qv(1, 0, 1, 0, 0, 0)));
    CHECK(line_set(b2) == std::set<Vec3>{{1, 0, 0}, {0, 1, 0}});
    auto b1 = find_bitangents(T, wall_model(F, 1, Qv(0, 0, 1, 0, 0, 0)));
    CHECK(line_set(b1) == std::set<Vec3>{{1, 0, 0}});
    CHECK(!is_fano(T, b4));
}

TEST_CASE("bitangent search agrees with brute force over small extensions") {
    Tower T(1);
    std::mt19937_64 rng(5);
    int tested = 0;
    while (tested < 60) {
        Form f = random_quartic(T.k(), rng);
        if (form::is_zero(f) || !is_smooth(T, f)) continue;
        tested++;
        auto found = find_bitangents(T, f, 3);
        std::set<std::pair<int, Vec3>> a, b;
        for (auto& x : found) a.insert({x.level, x.line});
        for (int d = 1; d <= 3; d++) {
            const Field& K = T.F(d);
            Form g = form::embed(T, f, 1, d);
            for (const Vec3& l : projective_points(K)) {
                int lv = 1;
                for (u64 c : l) lv = std::lcm(lv, T.level_of(c, d));
                if (lv == d && is_bitangent(K, g, l)) b.insert({d, l});
            }
        }
        CHECK(a == b);
        auto all = find_bitangents(T, f);
        LPoly L = l_polynomial(T, f);
        CHECK(int(all.size()) == bitangents_for_rank(two_rank(L)));
        if (all.size() == 7) CHECK(is_fano(T, all));
    }
}

TEST_CASE("point counts and L-polynomials") {
    Tower T(1);
    std::mt19937_64 rng(9);
    int tested = 0;
    while (tested < 40) {
        Form f = random_quartic(T.k(), rng);
        if (form::is_zero(f) || !is_smooth(T, f)) continue;
        tested++;
        for (int i = 1; i <= 4; i++) CHECK(count_points(T, f, i) == brute_count(T, f, i));
        LPoly L = l_polynomial(T, f);
        // N4 predicted by the L-polynomial
        std::array<__int128, 7> c;
        for (int i = 0; i < 7; i++) c[i] = L.c[i];
        // power sums from coefficients via Newton: p_k = -sum...
        std::array<__int128, 5> p{}, e{1, -c[1], c[2], -c[3], c[4]};
        for (int k = 1; k <= 4; k++) {
            __int128 s = (k % 2 ? 1 : -1) * k * e[k];
            for (int i = 1; i < k; i++) s += ((i % 2) ? 1 : -1) * e[i] * p[k - i];
            p[k] = s;
        }
        CHECK((long long)(16 + 1 - p[4]) == brute_count(T, f, 4));
    }
    Tower T4(2);
    Form f = wall_model(T4.k(), 7, Qv(1, 1, 2, 1, 1, 1));
    REQUIRE(is_smooth(T4, f));
    for (int i = 1; i <= 2; i++) CHECK(count_points(T4, f, i) == brute_count(T4, f, i));
}

TEST_CASE("Newton slopes and strata") {
    auto s = [](std::array<long long, 7> c, long long q) { return stratum_of(LPoly{c}, q); };
    CHECK(s({1, 0, 0, 1, 0, 0, 8}, 2) == Stratum::Ordinary);
    CHECK(s({1, 0, 1, 0, 2, 0, 8}, 2) == Stratum::Rank2);
    CHECK(s({1, 1, 0, 0, 0, 4, 8}, 2) == Stratum::Rank1);
    CHECK(s({1, 2, 2, 2, 4, 8, 8}, 2) == Stratum::Type13);
    CHECK(s({1, 0, 6, 0, 12, 0, 8}, 2) == Stratum::Supersingular);
    auto sl = newton_slopes(LPoly{{1, 2, 2, 2, 4, 8, 8}}, 2);
    CHECK(sl == std::vector<Slope>{Slope(1, 3), Slope(1, 3), Slope(1, 3), Slope(2, 3), Slope(2, 3), Slope(2, 3)});
    auto sl4 = newton_slopes(LPoly{{1, 0, 12, 0, 48, 0, 64}}, 4);
    for (auto x : sl4) CHECK(x == Slope(1, 2));
    CHECK_THROWS_AS(l_polynomial(100, 0, 0, 2), std::domain_error);
}

TEST_CASE("hex round trip") {
    Tower T(3);
    std::mt19937_64 rng(1);
    Form f = random_quartic(T.k(), rng);
    std::vector<std::string> parts;
    std::string h = to_hex(f), tok;
    for (char ch : h + " ") {
        if (ch == ' ') parts.push_back(tok), tok.clear();
        else tok += ch;
    }
    CHECK(*parse_quartic(parts, T.k()) == f);
    parts[0] = "zz";
    CHECK(!parse_quartic(parts, T.k()));
    parts[0] = "8";
    CHECK(!parse_quartic(parts, T.k()));
}
