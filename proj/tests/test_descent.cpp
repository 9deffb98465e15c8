#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "binq/descent.hpp"
#include "binq/quartic.hpp"

using namespace binq;

static const GammaGroup& G() { return GammaGroup::get(); }

static Quad random_quad(const Field& F, std::mt19937_64& rng) {
    Quad Q;
    for (auto& x : Q.v) x = rng() & F.mask();
    return Q;
}

TEST_CASE("cocycle values and identity") {
    CHECK(cocycle_H(mat::identity()) == Quad{});
    CHECK(cocycle_H(gamma_rep(GammaGroup::C3)) == Quad{});
    CHECK(cocycle_H(gamma_rep(GammaGroup::C2)) == Quad{});
    // (x+z, x, y): product differs by (xy)^2
    CHECK(cocycle_H(Mat3{{1, 0, 1, 1, 0, 0, 0, 1, 0}}) == Quad{{0, 0, 0, 1, 0, 0}});
    Field F(1, default_modulus(1));
    int zero = 0;
    for (int g = 0; g < G().size(); g++) {
        Quad Hg = cocycle_H(G()[g]);
        zero += Hg == Quad{};
        for (int r = 0; r < G().size(); r++) {
            Quad lhs = cocycle_H(G()[G().mul(g, r)]);
            Quad rhs = quad::add(quad::substitute(F, Hg, G()[r]), cocycle_H(G()[r]));
            REQUIRE(lhs == rhs);
        }
    }
    // H = 0 exactly on the stabilizer of the four lines x, y, z, x+y+z (a copy of S4)
    CHECK(zero == 24);
}

TEST_CASE("twisted action is a left action compatible with the curves") {
    Tower T(2);
    const Field& F = T.F(2);
    std::mt19937_64 rng(1);
    for (int it = 0; it < 4; it++) {
        Quad Q = random_quad(F, rng);
        for (int a = 0; a < G().size(); a++)
            for (int b = 0; b < G().size(); b++) REQUIRE(twisted_act(G().mul(a, b), Q) == twisted_act(a, twisted_act(b, Q)));
        CHECK(twisted_act(G().identity(), Q) == Q);
        for (int g = 0; g < G().size(); g++) {
            // C_{g(Q)} = (C_Q)^(g^-1)
            Form lhs = wall_model(F, 7, twisted_act(g, Q));
            Form rhs = form::substitute(F, wall_model(F, 7, Q), G()[G().inv(g)]);
            REQUIRE(lhs == rhs);
        }
    }
    Quad K{{1, 1, 1, 1, 1, 1}};
    for (int g = 0; g < G().size(); g++) CHECK(twisted_act(g, K) == K);
}

TEST_CASE("orbits of single forms under Gamma") {
    Tower T(3);
    std::mt19937_64 rng(2);
    for (int it = 0; it < 5; it++) {
        Quad Q = random_quad(T.k(), rng);
        std::set<Quad> orb;
        int stab = 0;
        for (int g = 0; g < G().size(); g++) {
            Quad R = twisted_act(g, Q);
            orb.insert(R);
            stab += R == Q;
        }
        CHECK(orb.size() * stab == 168);
    }
}

TEST_CASE("pair counts") {
    for (int n = 1; n <= 4; n++) {
        long long q = 1LL << n, c = 0;
        for (long long a = 1; a < q; a++)
            for (long long b = 1; b < q; b++) c += (a ^ b) != 1;
        CHECK(c == q * q - 3 * q + 3);
    }
}

TEST_CASE("descent sets: parameters agree with solving, sizes with the polynomials") {
    for (int n : {1, 2}) {
        Tower T(n);
        for (int cls = 0; cls < 6; cls++) {
            auto a = descent_set(T, cls);
            auto b = descent_set_by_solving(T, cls);
            CHECK_MESSAGE(a == b, "class ", cls, " q=", T.q());
            CHECK((long long)a.size() == descent_size_formula(cls, T.q()));
        }
    }
    Tower T(1);
    CHECK(descent_set(T, GammaGroup::C1).size() == 1);
    CHECK(descent_set(T, GammaGroup::C2).size() == 5);
    CHECK(descent_set(T, GammaGroup::C7_0).size() == 64);
    // membership: gamma(Q) = sigma(Q)
    for (int cls = 0; cls < 6; cls++) {
        int L = class_level(cls);
        for (const Quad& Q : descent_set(T, cls)) {
            Quad s;
            for (int i = 0; i < 6; i++) s[i] = T.frob(Q[i], L, 1);
            REQUIRE(twisted_act(G().rep(cls), Q) == s);
        }
    }
}

TEST_CASE("fixed points in the descent sets") {
    for (int n : {1, 2}) {
        Tower T(n);
        long long q = T.q();
        auto D1 = descent_set(T, GammaGroup::C1);
        auto fix = [&](const std::vector<Quad>& D, int g) {
            long long c = 0;
            for (auto& Q : D) c += twisted_act(g, Q) == Q;
            return c;
        };
        long long ab = q * q - 3 * q + 3;
        CHECK(fix(D1, G().rep(GammaGroup::C2)) == ab * (q - 1) * (q - 1));
        CHECK(fix(D1, G().rep(GammaGroup::C3)) == ab);
        CHECK(fix(D1, G().rep(GammaGroup::C4)) == (q - 1) * (q - 1));
        CHECK(fix(D1, G().rep(GammaGroup::C7_0)) == 1);
        CHECK(fix(D1, G().rep(GammaGroup::C7_1)) == 1);

        auto D2 = descent_set(T, GammaGroup::C2);
        int tau = G().tau(), rho = G().rho();
        CHECK(fix(D2, rho) == (q - 1) * (q - 1));
        CHECK(fix(D2, tau) == (q * q - 1) * ab);
        CHECK(fix(D2, G().mul(rho, tau)) == (q * q - q - 1) * (q - 1) * (q - 1));
        CHECK(fix(D2, G().rep(GammaGroup::C2)) == ab * (q - 1) * (q - 1));

        auto D4 = descent_set(T, GammaGroup::C4);
        int g4 = G().rep(GammaGroup::C4);
        CHECK(fix(D4, g4) == (q - 1) * (q - 1));
        CHECK(fix(D4, G().mul(g4, g4)) == q * q * q * q - q * q * q - 2 * q * q + q + 1);

        for (int cls : {GammaGroup::C7_0, GammaGroup::C7_1}) {
            auto D7 = descent_set(T, cls);
            int g = G().rep(cls), p = g;
            for (int i = 1; i < 7; i++, p = G().mul(p, g)) CHECK(fix(D7, p) == 1);
        }
    }
}

TEST_CASE("the centralizer of gamma2") {
    int g2 = G().rep(GammaGroup::C2), tau = G().tau(), rho = G().rho();
    CHECK(G().mul(tau, tau) == G().identity());
    CHECK(G().mul(rho, rho) == g2);
    auto& c = G().centralizer(g2);
    CHECK(std::count(c.begin(), c.end(), tau) == 1);
    CHECK(std::count(c.begin(), c.end(), rho) == 1);
}

TEST_CASE("Burnside equals orbit enumeration; ordinary class counts at q = 2") {
    Tower T(1);
    long long expect[] = {1, 2, 9, 7, 10, 10};
    for (int cls = 0; cls < 6; cls++) {
        GroupAction A = descent_action(T, cls);
        auto orb = orbits(A, 2);
        CHECK(burnside_count(A, 2) == (long long)orb.size());
        CHECK((long long)orb.size() == expect[cls]);
        long long tot = 0;
        for (auto& o : orb) tot += o.size;
        CHECK(tot == (long long)A.points.size());
    }
    // trivial group
    GroupAction A;
    A.order = 1;
    A.points = descent_set(Tower(2), GammaGroup::C3);
    A.act = [](int, const Quad& Q) { return Q; };
    CHECK(burnside_count(A, 1) == (long long)A.points.size());
}

TEST_CASE("ordinary class counts at q = 4") {
    Tower T(2);
    long long q = 4;
    long long q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q, q6 = q5 * q;
    long long expect[] = {(q6 - 7 * q5 + 42 * q4 - 140 * q3 + 343 * q2 - 462 * q + 328) / 168,
                          (q6 - 3 * q5 + 6 * q4 - 12 * q3 + 15 * q2 - 6 * q) / 8,
                          (q6 - q5 - 2 * q3 + 4 * q2 - 6 * q + 7) / 3,
                          (q6 - q5 - q2 - 2 * q + 4) / 4,
                          (q6 + 6) / 7,
                          (q6 + 6) / 7};
    for (int cls = 0; cls < 6; cls++) {
        GroupAction A = descent_action(T, cls);
        long long b = burnside_count(A, 4);
        CHECK(b == expect[cls]);
        CHECK((long long)orbits(A, 4).size() == b);
    }
}

TEST_CASE("equivalence of descent data") {
    Tower T(2);
    auto D = descent_set(T, GammaGroup::C2);
    int g2 = G().rep(GammaGroup::C2);
    DescentDatum d{2, D[0], g2};
    CHECK(descent_equivalent(T, d, d));
    for (int r = 0; r < G().size(); r += 17) {
        DescentDatum e{2, twisted_act(r, D[0]), G().mul(G().mul(r, g2), G().inv(r))};
        CHECK(descent_equivalent(T, d, e));
    }
    auto D3 = descent_set(Tower(1), GammaGroup::C3);
    CHECK(!descent_equivalent(Tower(1), DescentDatum{1, Quad{{1, 1, 1, 1, 1, 1}}, G().identity()},
                              DescentDatum{3, D3[0], G().rep(GammaGroup::C3)}));
    // within D_gamma, equivalence is the centralizer orbit relation
    GroupAction A = descent_action(T, GammaGroup::C2);
    auto orb = orbits(A, 1);
    CHECK(descent_equivalent(T, DescentDatum{2, orb[0].rep, g2}, DescentDatum{2, A.act(3, orb[0].rep), g2}));
    CHECK(!descent_equivalent(T, DescentDatum{2, orb[0].rep, g2}, DescentDatum{2, orb[1].rep, g2}));
}

TEST_CASE("group structure names and reports") {
    CHECK(structure_name({1}) == "1");
    CHECK(structure_name({1, 2}) == "C2");
    CHECK(structure_name({1, 7, 7, 7, 7, 7, 7}) == "C7");
    CHECK(structure_name({1, 2, 2, 2, 2, 2, 4, 4}) == "D8");
    CHECK(structure_name({1, 2, 2, 2, 3, 3}) == "S3");
    CHECK(structure_name({1, 2, 2, 2}) == "C2^2");
    CHECK(structure_name({1, 2, 4, 4}) == "C4");
    CHECK(structure_name({1, 2, 2, 2, 4, 4, 4, 4}) == "C2xC4");
    CHECK(structure_name({1, 2, 2, 2, 3, 3, 6, 6, 6, 6, 6, 6}) == "C2^2xC3");
    CHECK(structure_name({1, 2, 3, 3, 6, 6}) == "C6");
    Orbit o;
    o.rep = Quad{{1, 2, 3, 10, 0, 15}};
    o.size = 4;
    o.stabilizer = 2;
    CHECK(orbit_report_json("gamma2", o) ==
          R"({"gamma":"gamma2","representative":["1","2","3","a","0","f"],"orbit_size":4,"stabilizer_order":2})");
}
