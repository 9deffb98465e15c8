#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "binq/families.hpp"
#include "binq/plane.hpp"

using namespace binq;

static Quad rq(const Field& F, std::mt19937_64& rng) {
    Quad Q;
    for (auto& x : Q.v) x = rng() & F.mask();
    return Q;
}

static std::vector<FamilyId> o_families() {
    return {FamilyId::O1, FamilyId::O2, FamilyId::O3, FamilyId::O4, FamilyId::O7_0, FamilyId::O7_1};
}

TEST_CASE("names round trip") {
    for (FamilyId f : all_families()) CHECK(parse_family(family_name(f)) == f);
    CHECK(parse_family("o2") == FamilyId::O2);
    CHECK(parse_family("O_7,0") == FamilyId::O7_0);
    CHECK(!parse_family("O_5"));
}

TEST_CASE("group orders") {
    for (int n : {1, 2, 3}) {
        Tower T(n);
        FamilyTable fams(T);
        int q = int(T.q());
        int m3 = std::gcd(3, q - 1), m9 = std::gcd(9, q - 1);
        std::map<FamilyId, int> expect{{FamilyId::O1, 168},  {FamilyId::O2, 8},        {FamilyId::O3, 3},
                                       {FamilyId::O4, 4},    {FamilyId::O7_0, 7},      {FamilyId::O7_1, 7},
                                       {FamilyId::N4_1, 6 * m3}, {FamilyId::N4_2, 2 * m3}, {FamilyId::N4_3, 3 * m3},
                                       {FamilyId::N2_1, 2 * m3}, {FamilyId::N2_0, m3},     {FamilyId::N1_1, m9},
                                       {FamilyId::S, m9 * q}};
        for (auto [f, o] : expect) CHECK_MESSAGE(fams[f].group_order() == o, family_name(f), " q=", q);
    }
}

TEST_CASE("the split family acts by the twisted action") {
    Tower T(2);
    FamilyTable fams(T);
    const Family& O1 = fams[FamilyId::O1];
    std::mt19937_64 rng(3);
    Quad Q = rq(T.k(), rng);
    std::multiset<Quad> a, b;
    for (int g = 0; g < 168; g++) a.insert(O1.act(g, Q)), b.insert(twisted_act(g, Q));
    CHECK(a == b);
}

TEST_CASE("model right-hand sides match the closed forms") {
    for (int n : {1, 2, 3, 4}) {
        Tower T(n);
        const Field& K = T.k();
        Generators gen = find_family_generators(T);
        // x (y^3 + t y^2 z + (t+1) y z^2 + z^3) for lines y + v' v^-1 z, v^3 + v = s
        Family N43(T, gen, FamilyId::N4_3);
        Form g = form::zero(4);
        u64 t = gen.t3b;
        g.c[form::index(4, 1, 3)] = 1;
        g.c[form::index(4, 1, 2)] = t;
        g.c[form::index(4, 1, 1)] = t ^ 1;
        g.c[form::index(4, 1, 0)] = 1;
        // only valid when v' = s^-1 v^2 + t v; for v^3 + v = s that fails for every s at q = 8
        const Field& K3 = T.F(3);
        u64 v = gen.v3b, s3 = T.embed(gen.s3b, 1, 3);
        bool conj = (K3.mul(K3.inv(s3), K3.sqr(v)) ^ K3.mul(T.embed(t, 1, 3), v)) == T.frob(v, 3);
        CHECK(conj == (n != 3));
        if (conj) CHECK(N43.R() == g);
        else CHECK(N43.R() != g);
        // (x+y+z)(s(x^3+y^3+z^3) + xyz + st(xy^2+x^2z+yz^2) + s(t+1)(xz^2+x^2y+y^2z)), v^3 + v^2 = s
        Family O3(T, gen, FamilyId::O3);
        u64 s = gen.s3, st = K.mul(gen.s3, gen.t3), st1 = K.mul(gen.s3, gen.t3 ^ 1);
        Form cub = form::zero(3);
        auto set = [&](int i, int j, u64 v) { cub.c[form::index(3, i, j)] = v; };
        set(3, 0, s), set(0, 3, s), set(0, 0, s), set(1, 1, 1);
        set(1, 2, st), set(2, 0, st), set(0, 1, st);
        set(1, 0, st1), set(2, 1, st1), set(0, 2, st1);
        Form r = form::mul(K, form::linear({1, 1, 1}), cub);
        CHECK(O3.R() == r);
        // xy(r y^2 + yz + z^2)
        Family N42(T, gen, FamilyId::N4_2);
        Form h = form::zero(4);
        h.c[form::index(4, 1, 3)] = gen.r;
        h.c[form::index(4, 1, 2)] = 1;
        h.c[form::index(4, 1, 1)] = 1;
        CHECK(N42.R() == h);
    }
}

// some group element acts on random Q as the formula does
static bool some_element_matches(const Family& fam, const std::function<Quad(const Quad&)>& formula, int trials,
                                 std::mt19937_64& rng) {
    const Tower& T = fam.tower();
    std::vector<Quad> qs;
    for (int i = 0; i < trials; i++) {
        Quad Q = rq(T.k(), rng);
        if (fam.q_level() > 1) Q = quad::add(quad::embed(T, Q, 1, fam.q_level()), fam.base_point());
        qs.push_back(Q);
    }
    for (int g = 0; g < fam.group_order(); g++) {
        bool all = true;
        for (auto& Q : qs)
            if (fam.act(g, Q) != formula(Q)) { all = false; break; }
        if (all) return true;
    }
    return false;
}

TEST_CASE("displayed orbit formulas of the ordinary families") {
    for (int n : {1, 2, 3}) {
        Tower T(n);
        FamilyTable fams(T);
        std::mt19937_64 rng(n);
        CHECK(some_element_matches(
            fams[FamilyId::O2],
            [](const Quad& Q) {
                return Quad{{Q[0] ^ Q[2] ^ Q[5], Q[1] ^ Q[2] ^ Q[4], Q[2], Q[3] ^ Q[4] ^ Q[5], Q[4], Q[5]}};
            },
            6, rng));
        CHECK(some_element_matches(
            fams[FamilyId::O3], [](const Quad& Q) { return Quad{{Q[1], Q[2], Q[0], Q[4], Q[5], Q[3]}}; }, 6, rng));
        CHECK(some_element_matches(
            fams[FamilyId::O4],
            [](const Quad& Q) {
                u64 s = Q[0] ^ Q[1] ^ Q[2] ^ Q[3] ^ Q[4] ^ Q[5];
                return Quad{{s, Q[0], Q[1], Q[3] ^ Q[5], Q[3], Q[3] ^ Q[4]}};
            },
            6, rng));
        auto fr = [&T](const Quad& Q) { return quad::frob(T, Q, 7); };
        CHECK(some_element_matches(
            fams[FamilyId::O7_0],
            [&](const Quad& Q0) {
                Quad Q = fr(Q0);
                return Quad{{Q[0] ^ Q[2] ^ Q[5], Q[0], Q[1], Q[5], Q[3], Q[3] ^ Q[4]}};
            },
            4, rng));
        CHECK(some_element_matches(
            fams[FamilyId::O7_1],
            [&](const Quad& Q0) {
                Quad Q = fr(Q0);
                return Quad{{Q[1] ^ Q[2] ^ Q[4], Q[0], Q[1], Q[3] ^ Q[5], Q[3], Q[4]}};
            },
            4, rng));
    }
}

TEST_CASE("displayed orbit formulas of the four-bitangent family") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        const Field& K = T.k();
        std::mt19937_64 rng(10 + n);
        const Family& N41 = fams[FamilyId::N4_1];
        CHECK(some_element_matches(
            N41, [](const Quad& Q) { return Quad{{Q[0], Q[1] ^ Q[2] ^ Q[4], Q[2], Q[3] ^ Q[5], Q[4], Q[5]}}; }, 6, rng));
        for (u64 t : power_class_data(T, 3).mu) {
            CHECK(some_element_matches(
                N41,
                [&](const Quad& Q) {
                    u64 t2 = K.sqr(t);
                    return Quad{{Q[0], K.mul(t2, Q[1]), K.mul(t2, Q[2]), K.mul(t, Q[3]), K.mul(t2, Q[4]), K.mul(t, Q[5])}};
                },
                6, rng));
        }
    }
}

TEST_CASE("displayed orbit formulas for two and one bitangents") {
    for (int n : {1, 2, 3}) {
        Tower T(n);
        const Field& K = T.k();
        std::mt19937_64 rng(20 + n);
        Form R2 = wall_rhs(2), R1 = wall_rhs(1);
        for (int it = 0; it < 30; it++) {
            u64 t = 1 + rng() % K.mask(), u = rng() & K.mask(), v = rng() & K.mask();
            Quad Q = rq(K, rng);
            auto [a, b, c, d, e, f] = Q.v;
            u64 ti = K.inv(t);
            auto tp = [&](int k) { return k >= 0 ? K.pow(t, k) : K.pow(ti, -k); };
            // (t^3 x, t^-1 y, t^-5 (z + u y))
            Mat3 M2 = mat::from_rows({tp(3), 0, 0}, {0, tp(-1), 0}, {0, K.mul(tp(-5), u), tp(-5)});
            auto tr = model_transform(K, R2, M2);
            REQUIRE(tr);
            Quad want{{K.mul(a, tp(-6)), K.mul(b ^ K.mul(e, u) ^ K.mul(c, K.sqr(u)), tp(2)), K.mul(c, tp(10)),
                       K.mul(d ^ K.sqrt(u) ^ K.mul(f, u), tp(-2)), K.mul(e, tp(6)), K.mul(f, tp(2))}};
            CHECK(tr->map.apply(K, Q) == want);
            // (t^3 x, t^-1 (y + u x), t^-9 (z + u^2 y + v x))
            Mat3 M1 = mat::from_rows({tp(3), 0, 0}, {K.mul(tp(-1), u), tp(-1), 0},
                                     {K.mul(tp(-9), v), K.mul(tp(-9), K.sqr(u)), tp(-9)});
            auto t1 = model_transform(K, R1, M1);
            REQUIRE(t1);
            u64 w = v ^ K.pow(u, 3), eu = K.mul(e, u) ^ f;
            Quad want1{{K.mul(a ^ K.mul(b, K.sqr(u)) ^ K.mul(c, K.sqr(w)) ^ K.mul(d, u) ^ K.mul(eu, w) ^ K.sqrt(v), tp(-6)),
                        K.mul(b ^ K.mul(e, K.sqr(u)) ^ K.mul(c, K.pow(u, 4)), tp(2)), K.mul(c, tp(18)),
                        K.mul(d ^ K.mul(e, v) ^ K.mul(f, K.sqr(u)) ^ K.sqrt(u), tp(-2)), K.mul(e, tp(10)),
                        K.mul(eu, tp(6))}};
            CHECK(t1->map.apply(K, Q) == want1);
        }
        // the S action with t^9 = 1
        FamilyTable fams(T);
        const Family& S = fams[FamilyId::S];
        for (u64 t : power_class_data(T, 9).mu)
            for (u64 v = 0; v < T.q(); v++) {
                Quad Q = rq(K, rng);
                Q[1] = Q[4] = 0;
                if (!Q[2]) Q[2] = 1;
                u64 ti = K.inv(t);
                u64 a = K.mul(Q[0] ^ K.mul(Q[2], K.sqr(v)) ^ K.mul(Q[5], v) ^ K.sqrt(v), K.pow(t, 3));
                Quad want{{a, 0, Q[2], K.mul(Q[3], K.sqr(ti)), 0, K.mul(Q[5], K.pow(ti, 3))}};
                bool found = false;
                for (int g = 0; g < S.group_order(); g++) found |= S.act(g, Q) == want;
                CHECK(found);
            }
    }
}

TEST_CASE("admissibility is smoothness on the raw parameter spaces") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        for (FamilyId f : all_families()) {
            const Family& fam = fams[f];
            long long good = 0, bad = 0;
            for (const Quad& Q : fam.raw_space()) {
                bool adm = fam.admissible(Q);
                bool sm = is_smooth(T, fam.quartic(Q));
                if (adm != sm) bad++;
                good += adm;
            }
            CHECK_MESSAGE(bad == 0, family_name(f), " q=", T.q());
            CHECK(good > 0);
        }
    }
}

TEST_CASE("domain sizes") {
    Tower T(1);
    FamilyTable fams(T);
    CHECK(fams[FamilyId::S].domain_size() == 8);
    CHECK(fams[FamilyId::N2_1].domain_size() == 8);
    CHECK(fams[FamilyId::O1].domain_size() == descent_size_formula(GammaGroup::C1, 2));
    Tower T4(2);
    FamilyTable f4(T4);
    long long q = 4, N = 3;
    CHECK(f4[FamilyId::N2_1].domain_size() == 2 * N * (q - 1) * (q - 1) * q * q);
    CHECK(f4[FamilyId::N2_0].domain_size() == N * (q - 1) * q * q);
    CHECK(f4[FamilyId::S].domain_size() == N * q * q * q);
    // the O families have |D_gamma| points
    int cls[] = {GammaGroup::C1, GammaGroup::C2, GammaGroup::C3, GammaGroup::C4, GammaGroup::C7_0, GammaGroup::C7_1};
    auto of = o_families();
    for (int i = 0; i < 6; i++) CHECK(f4[of[i]].domain_size() == descent_size_formula(cls[i], q));
}

TEST_CASE("class counts: Burnside, orbits and closed forms") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        for (FamilyId f : all_families()) {
            GroupAction A = fams[f].action();
            long long b = burnside_count(A, 2);
            auto orb = orbits(A, 2);
            CHECK_MESSAGE(b == (long long)orb.size(), family_name(f), " q=", T.q());
            CHECK_MESSAGE(b == family_count_corrected(f, T.q()), family_name(f), " q=", T.q());
        }
    }
    // the closed forms for N4_1, N4_3 miss the mixed elements when 3 | q - 1
    CHECK(family_count_formula(FamilyId::N4_1, 4) == 91);
    CHECK(family_count_corrected(FamilyId::N4_1, 4) == 99);
    CHECK(family_count_formula(FamilyId::N4_3, 4) == 338);
    CHECK(family_count_corrected(FamilyId::N4_3, 4) == 354);
    for (long long q : {2, 8, 32})
        for (FamilyId f : all_families()) CHECK(family_count_formula(f, q) == family_count_corrected(f, q));
    long long q2[] = {1, 2, 9, 7, 10, 10, 2, 7, 10, 6, 4, 4, 6};
    for (FamilyId f : all_families()) CHECK(family_count_formula(f, 2) == q2[int(f)]);
}

TEST_CASE("automorphism tables agree with stabilizers") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        for (FamilyId f : all_families()) {
            const Family& fam = fams[f];
            long long checked = 0, mism = 0;
            for (const Quad& Q : fam.enumerate()) {
                AutDescription st = fam.stabilizer_aut(Q);
                auto tab = fam.aut_table_corrected(Q);
                if (!tab) continue;
                checked++;
                bool ok = tab->order == st.order && (tab->structure.empty() || tab->structure == st.structure);
                if (!ok) {
                    mism++;
                    if (mism < 4)
                        MESSAGE(family_name(f), " q=", T.q(), " Q=", to_hex(Q)[0], ",", to_hex(Q)[1], ",", to_hex(Q)[2],
                                ",", to_hex(Q)[3], ",", to_hex(Q)[4], ",", to_hex(Q)[5], " table ", tab->order, " ",
                                tab->structure, " stab ", st.order, " ", st.structure);
                }
            }
            CHECK_MESSAGE(mism == 0, family_name(f), " q=", T.q());
            if (f != FamilyId::O1) CHECK(checked > 0);
        }
    }
}

TEST_CASE("literal N4 tables disagree only where the corrections apply") {
    Tower T(2);
    FamilyTable fams(T);
    for (FamilyId f : all_families()) {
        const Family& fam = fams[f];
        long long diff = 0;
        for (const Quad& Q : fam.enumerate()) {
            auto a = fam.aut_table(Q), b = fam.aut_table_corrected(Q);
            if (a.has_value() != b.has_value() || (a && (a->order != b->order || a->structure != b->structure))) diff++;
        }
        if (f == FamilyId::N4_1 || f == FamilyId::N4_3) CHECK(diff > 0);
        else CHECK(diff == 0);
    }
    // stabilizer C3 on a model the literal table calls trivial
    Quad Q{{1, 1, 2, 0, 0, 0}};
    CHECK(fams[FamilyId::N4_1].stabilizer_aut(Q).order == 3);
    CHECK(fams[FamilyId::N4_1].aut_table(Q)->order == 1);
    // tau_2 fixes (a, b, b, 0, e, 0) although d = f = 0
    Quad P{{1, 1, 1, 0, 2, 0}};
    CHECK(fams[FamilyId::N4_1].stabilizer_aut(P).order == 2);
}

TEST_CASE("the Klein twist is the only class with automorphisms in the O_7 families") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        for (FamilyId f : {FamilyId::O7_0, FamilyId::O7_1}) {
            const Family& fam = fams[f];
            Quad K = fam.klein_twist();
            CHECK(fam.in_domain(K));
            CHECK(fam.stabilizer_aut(K).order == 7);
            int with7 = 0;
            for (auto& o : orbits(fam.action(), 1)) {
                CHECK((o.stabilizer == 1 || o.stabilizer == 7));
                with7 += o.stabilizer == 7;
            }
            CHECK(with7 == 1);
        }
    }
}

TEST_CASE("strata and bitangent counts of every model at q = 2") {
    Tower T(1);
    FamilyTable fams(T);
    for (FamilyId f : all_families()) {
        const Family& fam = fams[f];
        for (const Quad& Q : fam.enumerate()) {
            Form N = fam.quartic(Q);
            LPoly L = l_polynomial(T, N);
            CHECK(stratum_of(L, 2) == family_stratum(f));
            auto b = find_bitangents(T, N);
            CHECK(int(b.size()) == family_bitangents(f));
            CHECK(common_level(b) == fam.line_level());
            std::vector<Vec3> ls;
            for (auto& x : b) ls.push_back(vec::embed(T, x.line, x.level, fam.line_level()));
            std::sort(ls.begin(), ls.end());
            CHECK(ls == fam.bitangents());
        }
    }
}

TEST_CASE("classification returns the orbit representative with a witness") {
    for (int n : {1, 2}) {
        Tower T(n);
        const Field& K = T.k();
        FamilyTable fams(T);
        std::mt19937_64 rng(40 + n);
        auto all = pgl3(K);
        for (FamilyId f : all_families()) {
            const Family& fam = fams[f];
            auto orb = orbits(fam.action(), 2);
            int step = std::max<int>(1, int(orb.size()) / (n == 1 ? 100 : 6));
            for (size_t i = 0; i < orb.size(); i += step) {
                Form N = fam.quartic(orb[i].rep);
                const Mat3& g = all[rng() % all.size()];
                Form F = form::substitute(K, N, g);
                Identification id = reduce_to_family(fams, F);
                CHECK_MESSAGE(id.family == f, family_name(f), " -> ", family_name(id.family));
                CHECK(id.Q == orb[i].rep);
                CHECK(form::proportional(K, form::substitute(K, F, id.witness), fam.quartic(id.Q)).has_value());
            }
        }
    }
    Tower T(1);
    FamilyTable fams(T);
    // (x^2 + yz)^2 is singular
    Form c = form::zero(2);
    c.c[form::index(2, 2, 0)] = 1;
    c.c[form::index(2, 0, 1)] = 1;
    CHECK_THROWS_AS(reduce_to_family(fams, form::square(T.k(), c)), std::domain_error);
    // a normal model is its own representative via the identity when it is least in its orbit
    Quad Q = fams[FamilyId::O1].enumerate().front();
    auto id = reduce_to_family(fams, fams[FamilyId::O1].quartic(Q));
    CHECK(id.family == FamilyId::O1);
    CHECK(id.Q == Q);
}

TEST_CASE("supersingular quotient") {
    for (int n : {1, 2, 3}) {
        Tower T(n);
        FamilyTable fams(T);
        const Family& S = fams[FamilyId::S];
        auto pts = S.enumerate();
        std::mt19937_64 rng(50);
        int step = n < 3 ? 1 : 37;
        for (size_t i = 0; i < pts.size(); i += step) {
            auto s = supersingular_quotient(T, pts[i]);
            CHECK(quotient_identity_holds(T, s));
            CHECK(quotient_involution_holds(T, pts[i], s));
            CHECK(quotient_is_elliptic(s));
        }
    }
}

TEST_CASE("generator tables: text round trip and validation") {
    for (int n : {1, 2, 3}) {
        Tower T(n);
        Generators g = find_family_generators(T);
        std::string d = g.describe(T);
        Generators h = parse_generators(T, d);
        CHECK(h.describe(T) == d);
        CHECK(h.alpha == g.alpha);
        // a wrong u breaks u^2 + u = r
        Generators bad = g;
        bad.u = 0;
        CHECK_THROWS_AS(check_generators(T, bad), std::invalid_argument);
        std::string broken = d;
        broken.replace(broken.find(" w="), 3, " x=");
        CHECK_THROWS_AS(parse_generators(T, broken), std::invalid_argument);
    }
    Tower T4(2);
    CHECK_THROWS_AS(parse_generators(T4, find_family_generators(Tower(1)).describe(Tower(1))), std::invalid_argument);
}
