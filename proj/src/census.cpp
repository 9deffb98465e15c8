#include "binq/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "binq/plane.hpp"

namespace binq {

namespace {

using F_ = FamilyId;

std::vector<long long> D(std::initializer_list<long long> desc) {
    std::vector<long long> v(desc);
    std::reverse(v.begin(), v.end());
    return v;
}

CountFormula::Bracket br(std::vector<long long> p, long long mod, long long res) { return {std::move(p), mod, res}; }

const char* kRows[] = {"ordinary", "rank2", "rank1", "type1/3", "supersingular"};

std::vector<CountFormula> build_formulas() {
    std::vector<CountFormula> v;
    auto add = [&](std::string id, std::vector<long long> p, long long den = 1,
                   std::vector<CountFormula::Bracket> b = {}, bool lit = false) {
        CountFormula f;
        f.id = std::move(id);
        f.poly = std::move(p);
        f.denom = den;
        f.brackets = std::move(b);
        f.literature = lit;
        v.push_back(std::move(f));
    };
    auto mixed = br(D({4, -4, 0}), 3, 1);
    auto ss = std::vector<CountFormula::Bracket>{br(D({4, -2}), 3, 1), br({6}, 9, 1)};
    add("family.O_1", D({1, -7, 42, -140, 343, -462, 328}), 168);
    add("family.O_2", D({1, -3, 6, -12, 15, -6, 0}), 8);
    add("family.O_3", D({1, -1, 0, -2, 4, -6, 7}), 3);
    add("family.O_4", D({1, -1, 0, 0, -1, -2, 4}), 4);
    add("family.O_7_0", D({1, 0, 0, 0, 0, 0, 6}), 7);
    add("family.O_7_1", D({1, 0, 0, 0, 0, 0, 6}), 7);
    add("family.N4_1", D({1, -3, 6, -7, 5, -2}), 6);
    add("family.N4_1.corrected", D({1, -3, 6, -7, 5, -2}), 6, {mixed});
    add("family.N4_2", D({1, -1, 0, -1, 1, 0}), 2);
    add("family.N4_3", D({1, 0, 0, -1, 2, -2}), 3);
    add("family.N4_3.corrected", D({1, 0, 0, -1, 2, -2}), 3, {br(D({4, -4, 0}), 3, 1)});
    add("family.N2_1", D({1, -1, -1, 1, 0}));
    add("family.N2_0", D({1, -1, 0, 0}));
    add("family.N1_1", D({1, -1, 0, 0}));
    add("family.S", D({2, -1, 0}), 1, ss);

    add("total.ordinary", D({1, -1, 1, -3, 5, -6, 7}));
    add("total.rank2", D({1, -1, 1, -2, 2, -1}));
    add("total.rank2.corrected", D({1, -1, 1, -2, 2, -1}), 1, {br(D({2, -2, 0}), 3, 1)});
    add("total.rank1", D({1, 0, -2, 1, 0}));
    add("total.type1/3", D({1, -1, 0, 0}));
    add("total.supersingular", D({2, -1, 0}), 1, ss);
    add("total", D({1, 0, 1, -1, 2, 0, 4}), 1, {br(D({-4, 2}), 3, 2), br({6}, 9, 1)});
    add("total.corrected", D({1, 0, 1, -1, 2, 0, 4}), 1,
        {br(D({-4, 2}), 3, 2), br({6}, 9, 1), br(D({2, -2, 0}), 3, 1)});

    add("curves.ordinary", D({1, 1, -1, -1, 1, -4, 7}), 1, {}, true);
    add("curves.rank2", D({1, 1, -3, 1, 1, -1}), 1, {}, true);
    add("curves.rank1", D({1, 4, -4, 1, -2}), 1, {}, true);
    add("curves.type1/3", D({1, 1, 0, 0}), 1, {br({12}, 7, 1)}, true);
    add("curves.supersingular", D({2, -1, 0}), 1, ss, true);
    add("curves", D({1, 2, 1, 1, 1, 1, 2}), 1, {br(D({-4, 2}), 3, 2), br({6}, 9, 1), br({12}, 7, 1)}, true);

    add("mass.nh.ordinary", D({1, -1, 0, 0, 0, 0, 1}));
    add("mass.nh.rank2", D({1, -1, 0, 0, 0, 0}));
    add("mass.nh.rank1", D({1, -1, 0, 0, 0}));
    add("mass.nh.type1/3", D({1, -1, 0, 0}));
    add("mass.nh.supersingular", D({1, 0, 0}));
    add("mass.nh", D({1, 0, 0, 0, 0, 0, 1}));
    add("mass.h.ordinary", D({1, -1, 0, 0, 0, 0}), 1, {}, true);
    add("mass.h.rank2", D({1, -2, 1, 0, 0}), 1, {}, true);
    add("mass.h.rank1", D({2, -2, 0, 0}), 1, {}, true);
    add("mass.h.type1/3", D({1, 0, 0}), 1, {}, true);
    add("mass.h.supersingular", {0}, 1, {}, true);
    add("mass.h", D({1, 0, 0, 0, 0, 0}), 1, {}, true);
    add("mass.ordinary", D({1, 0, -1, 0, 0, 0, 1}), 1, {}, true);
    add("mass.rank2", D({1, 0, -2, 1, 0, 0}), 1, {}, true);
    add("mass.rank1", D({1, 1, -2, 0, 0}), 1, {}, true);
    add("mass.type1/3", D({1, 0, 0, 0}), 1, {}, true);
    add("mass.supersingular", D({1, 0, 0}), 1, {}, true);
    add("mass", D({1, 1, 0, 0, 0, 0, 1}), 1, {}, true);
    return v;
}

__int128 eval_poly(const std::vector<long long>& p, long long q) {
    __int128 r = 0;
    for (size_t i = p.size(); i-- > 0;) r = r * q + p[i];
    return r;
}

std::string poly_text(const std::vector<long long>& p) {
    std::string s;
    for (size_t i = p.size(); i-- > 0;) {
        long long c = p[i];
        if (!c) continue;
        if (s.empty()) s += c < 0 ? "-" : "";
        else s += c < 0 ? " - " : " + ";
        long long a = c < 0 ? -c : c;
        if (a != 1 || i == 0) s += std::to_string(a);
        if (i >= 1) s += "q";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

std::string hex(u64 x) {
    char b[24];
    std::snprintf(b, sizeof b, "%llx", (unsigned long long)x);
    return b;
}

std::string quad_text(const Quad& Q) {
    std::string s = "(";
    for (int i = 0; i < 6; i++) s += (i ? "," : "") + hex(Q[i]);
    return s + ")";
}

std::string rational_text(const Rational& r) {
    std::ostringstream o;
    o << r;
    return o.str();
}


}  // namespace

// ---------------------------------------------------------------- formulas

long long CountFormula::eval(long long q) const {
    if (q < 1 || q > 1024) throw std::overflow_error("q out of range for exact evaluation");
    __int128 v = eval_poly(poly, q);
    for (auto& b : brackets)
        if (q % b.mod == b.residue % b.mod) v += eval_poly(b.poly, q);
    if (v % denom) throw std::domain_error(id + " is not integral at q = " + std::to_string(q));
    return (long long)(v / denom);
}

std::string CountFormula::text() const {
    std::string s = poly_text(poly);
    if (denom != 1) s = "(" + s + ")/" + std::to_string(denom);
    for (auto& b : brackets) {
        std::string t = poly_text(b.poly);
        bool neg = t[0] == '-';
        if (neg) {
            std::vector<long long> m = b.poly;
            for (auto& c : m) c = -c;
            t = poly_text(m);
        }
        s += std::string(neg ? " - " : " + ") + "[" + t + "]_{q=" + std::to_string(b.residue) + " mod " +
             std::to_string(b.mod) + "}";
        if (denom != 1) s += "/" + std::to_string(denom);
    }
    return s;
}

const std::vector<CountFormula>& count_formulas() {
    static const std::vector<CountFormula> v = build_formulas();
    return v;
}

const CountFormula& count_formula(const std::string& id) {
    for (auto& f : count_formulas())
        if (f.id == id) return f;
    throw std::invalid_argument("unknown formula " + id);
}

long long eval_formula(const std::string& id, long long q) { return count_formula(id).eval(q); }

long long ordinary_total_formula(long long q) {
    long long s = 0;
    for (FamilyId f : all_families())
        if (family_stratum(f) == Stratum::Ordinary) s += family_count_formula(f, q);
    return s;
}

// ---------------------------------------------------------------- family census

Rational FamilyCensus::aut_mass() const {
    Rational m = 0;
    for (auto& o : orbits) m += Rational(1, o.stabilizer);
    return m;
}

int FamilyCensus::classes_with_aut_order(long long n) const {
    int c = 0;
    for (auto& o : orbits) c += o.stabilizer == n;
    return c;
}

FamilyCensus census_family(const Family& fam, const FamilyCensusOptions& opt) {
    FamilyCensus c;
    c.id = fam.id();
    GroupAction A = fam.action();
    c.domain = (long long)A.points.size();
    c.group_order = A.order;
    long long q = fam.tower().q();
    c.burnside = burnside_count(A, opt.threads);
    c.formula = family_count_formula(c.id, q);
    c.corrected = family_count_corrected(c.id, q);
    if (opt.orbits) c.orbits = orbits(A, opt.threads);
    if (opt.tables) {
        std::atomic<long long> checked{0}, bad{0}, bad2{0};
        std::mutex mu;
        parallel_for(c.domain, opt.threads, [&](long long lo, long long hi, int) {
            long long ch = 0, b1 = 0, b2 = 0;
            std::string wit;
            for (long long i = lo; i < hi; i++) {
                const Quad& Q = A.points[i];
                auto tab = fam.aut_table(Q);
                if (!tab) continue;
                AutDescription st = fam.stabilizer_aut(Q);
                auto same = [&](const AutDescription& t) {
                    return t.order == st.order && (t.structure.empty() || t.structure == st.structure);
                };
                ch++;
                if (!same(*tab)) {
                    b1++;
                    if (wit.empty())
                        wit = "Q=" + quad_text(Q) + " table " + std::to_string(tab->order) + " " + tab->structure +
                              ", stabilizer " + std::to_string(st.order) + " " + st.structure;
                }
                if (!same(*fam.aut_table_corrected(Q))) b2++;
            }
            checked += ch, bad += b1, bad2 += b2;
            if (!wit.empty()) {
                std::lock_guard<std::mutex> g(mu);
                if (c.table_witness.empty() || wit < c.table_witness) c.table_witness = wit;
            }
        });
        c.table_checked = checked, c.table_mismatch = bad, c.corrected_mismatch = bad2;
    }
    return c;
}

// ---------------------------------------------------------------- records

CurveClassRecord make_record(const Family& fam, const Orbit& o) {
    const Tower& T = fam.tower();
    CurveClassRecord r;
    r.q = T.q();
    r.family = fam.id();
    r.Q = o.rep;
    r.quartic = fam.quartic(o.rep);
    AutDescription a = fam.stabilizer_aut(o.rep);
    r.aut_order = a.order;
    r.aut_structure = a.structure;
    r.lpoly = l_polynomial(T, r.quartic);
    r.stratum = stratum_of(r.lpoly, r.q);
    return r;
}

std::string record_json(const CurveClassRecord& r) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["family"] = family_name(r.family);
    auto& Q = j["Q"] = nlohmann::ordered_json::array();
    for (int i = 0; i < 6; i++) Q.push_back(hex(r.Q[i]));
    auto& F = j["quartic"] = nlohmann::ordered_json::array();
    for (int i = 0; i < 15; i++) F.push_back(hex(r.quartic.c[i]));
    j["aut_order"] = r.aut_order;
    j["aut_structure"] = r.aut_structure;
    j["stratum"] = stratum_name(r.stratum);
    auto& L = j["lpoly"] = nlohmann::ordered_json::array();
    for (long long c : r.lpoly.c) L.push_back(c);
    return j.dump();
}

CurveClassRecord parse_record_json(const std::string& line, const Tower& T) {
    try {
        auto j = nlohmann::json::parse(line);
        CurveClassRecord r;
        r.q = j.at("q").get<long long>();
        if (r.q != (long long)T.q()) throw std::invalid_argument("record is for another field");
        auto f = parse_family(j.at("family").get<std::string>());
        if (!f) throw std::invalid_argument("unknown family");
        r.family = *f;
        auto& Q = j.at("Q");
        if (Q.size() != 6) throw std::invalid_argument("Q needs 6 entries");
        for (int i = 0; i < 6; i++) r.Q[i] = std::stoull(Q[i].get<std::string>(), nullptr, 16);
        std::vector<std::string> h;
        for (auto& x : j.at("quartic")) h.push_back(x.get<std::string>());
        auto F = parse_quartic(h, T.k());
        if (!F) throw std::invalid_argument("bad quartic");
        r.quartic = *F;
        r.aut_order = j.at("aut_order").get<long long>();
        r.aut_structure = j.at("aut_structure").get<std::string>();
        auto s = parse_stratum(j.at("stratum").get<std::string>());
        if (!s) throw std::invalid_argument("unknown stratum");
        r.stratum = *s;
        auto& L = j.at("lpoly");
        if (L.size() != 7) throw std::invalid_argument("lpoly needs 7 entries");
        for (int i = 0; i < 7; i++) r.lpoly.c[i] = L[i].get<long long>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed record: ") + e.what());
    }
}

// ---------------------------------------------------------------- checks

Check make_check(const std::string& group, const std::string& name, long long expected, long long got,
                 const std::string& note) {
    return Check{group, name, std::to_string(expected), std::to_string(got), expected == got, note};
}

Check make_check(const std::string& group, const std::string& name, const Rational& expected, const Rational& got,
                 const std::string& note) {
    return Check{group, name, rational_text(expected), rational_text(got), expected == got, note};
}

std::vector<Check> descent_size_checks(const Tower& T) {
    std::vector<Check> out;
    long long q = T.q();
    for (int cls = 0; cls < 6; cls++)
        out.push_back(make_check("descent", std::string("|D_") + GammaGroup::class_name(cls) + "|",
                                 descent_size_formula(cls, q), (long long)descent_set(T, cls).size()));
    return out;
}

namespace {

long long fix_count(const std::vector<Quad>& D, int g) {
    long long c = 0;
    for (auto& Q : D) c += twisted_act(g, Q) == Q;
    return c;
}

// every element of `els` has `expected` fixed points
Check fix_all(const std::string& name, const std::vector<long long>& fix, const std::vector<int>& els,
              long long expected) {
    long long got = expected;
    std::string note;
    for (int g : els)
        if (fix[g] != expected) {
            got = fix[g];
            note = "element " + std::to_string(g);
            break;
        }
    if (els.empty()) {
        got = -1;
        note = "no such element";
    }
    return make_check("fixed points", name, expected, got, note);
}

}  // namespace

std::vector<Check> fixed_point_checks(const FamilyTable& fams, int threads) {
    const Tower& T = fams.tower();
    const GammaGroup& G = GammaGroup::get();
    long long q = T.q(), ab = q * q - 3 * q + 3;
    std::vector<Check> out;
    auto add = [&](const std::string& n, long long e, long long g) { out.push_back(make_check("fixed points", n, e, g)); };

    auto D1 = descent_set(T, GammaGroup::C1);
    add("|Q_k(gamma2)|", ab * (q - 1) * (q - 1), fix_count(D1, G.rep(GammaGroup::C2)));
    add("|Q_k(gamma3)|", ab, fix_count(D1, G.rep(GammaGroup::C3)));
    add("|Q_k(gamma4)|", (q - 1) * (q - 1), fix_count(D1, G.rep(GammaGroup::C4)));
    add("|Q_k(gamma7,0)|", 1, fix_count(D1, G.rep(GammaGroup::C7_0)));
    add("|Q_k(gamma7,1)|", 1, fix_count(D1, G.rep(GammaGroup::C7_1)));
    auto D2 = descent_set(T, GammaGroup::C2);
    int tau = G.tau(), rho = G.rho();
    add("|D_gamma2(rho)|", (q - 1) * (q - 1), fix_count(D2, rho));
    add("|D_gamma2(tau)|", (q * q - 1) * ab, fix_count(D2, tau));
    add("|D_gamma2(rho tau)|", (q * q - q - 1) * (q - 1) * (q - 1), fix_count(D2, G.mul(rho, tau)));
    auto D4 = descent_set(T, GammaGroup::C4);
    int g4 = G.rep(GammaGroup::C4);
    add("|D_gamma4(gamma4)|", (q - 1) * (q - 1), fix_count(D4, g4));
    add("|D_gamma4(gamma4^2)|", q * q * q * q - q * q * q - 2 * q * q + q + 1, fix_count(D4, G.mul(g4, g4)));
    for (int cls : {GammaGroup::C7_0, GammaGroup::C7_1}) {
        auto D7 = descent_set(T, cls);
        int g = G.rep(cls), p = g;
        long long worst = 1;
        for (int i = 1; i < 7; i++, p = G.mul(p, g))
            if (fix_count(D7, p) != 1) worst = fix_count(D7, p);
        add(std::string("|D_") + GammaGroup::class_name(cls) + "(gamma^i)|, i=1..6", 1, worst);
    }

    const Field& K = T.k();
    long long N3 = (long long)fams[F_::N4_1].mu3().size(), N9 = (long long)fams[F_::S].mu9().size();
    // N4: the pure permutations are the stabilizer of a model with Aut >= the permutation group
    auto n4 = [&](F_ id, const Quad& Qs, long long dom) {
        const Family& fam = fams[id];
        GroupAction A = fam.action();
        auto fix = fixed_point_counts(A, threads);
        std::string nm = family_name(id);
        add("|Q(" + nm + ")|", dom, (long long)A.points.size());
        std::vector<int> inv, rot;
        for (int g = 0; g < A.order; g++) {
            if (fam.act(g, Qs) != Qs) continue;
            int o = mat::order(K, fam.group_matrix(g, Qs));
            if (o == 2) inv.push_back(g);
            if (o == 3) rot.push_back(g);
        }
        if (id != F_::N4_3) out.push_back(fix_all("|Q(" + nm + ")(tau)| for each transposition", fix, inv, N3 * (q - 1) * (q - 1) * q));
        if (id != F_::N4_2) out.push_back(fix_all("|Q(" + nm + ")(rho)| for each rotation", fix, rot, N3 * (q - 1)));
    };
    n4(F_::N4_1, Quad{{1, 1, 1, 0, 1, 0}}, N3 * (q - 1) * (q - 1) * (q - 1) * q * q);
    n4(F_::N4_2, Quad{{1, 0, 1, 0, 1, 0}}, N3 * (q - 1) * (q * q - 1) * q * q);
    n4(F_::N4_3, Quad{{1, 1, 1, 0, 1, 0}}, N3 * (q * q * q - 1) * q * q);

    {
        const Family& fam = fams[F_::N2_1];
        GroupAction A = fam.action();
        auto fix = fixed_point_counts(A, threads);
        add("|N2_1|", 2 * N3 * (q - 1) * (q - 1) * q * q, (long long)A.points.size());
        out.push_back(fix_all("|N2_1(gamma_(1,f^-2))|", fix, {1}, 2 * N3 * (q - 1) * (q - 1) * q));
        std::vector<int> rest;
        for (int g = 2; g < A.order; g++) rest.push_back(g);
        if (!rest.empty()) out.push_back(fix_all("|N2_1(g)| for the other elements", fix, rest, 0));
    }
    for (F_ id : {F_::N2_0, F_::N1_1}) {
        const Family& fam = fams[id];
        GroupAction A = fam.action();
        auto fix = fixed_point_counts(A, threads);
        long long N = id == F_::N2_0 ? N3 : N9;
        add("|" + family_name(id) + "|", N * (q - 1) * q * q, (long long)A.points.size());
        std::vector<int> rest;
        for (int g = 1; g < A.order; g++) rest.push_back(g);
        if (!rest.empty()) out.push_back(fix_all("|" + family_name(id) + "(g)|, g != 1", fix, rest, 0));
    }
    {
        const Family& fam = fams[F_::S];
        GroupAction A = fam.action();
        auto fix = fixed_point_counts(A, threads);
        add("|S|", N9 * q * q * q, (long long)A.points.size());
        const auto& mu9 = fam.mu9();
        std::map<std::string, std::pair<std::vector<int>, long long>> kinds;
        for (int g = 0; g < A.order; g++) {
            u64 t = mu9[g / q], v = g % q;
            long long Nv = v == 0 ? q : 1;
            u64 t3 = K.pow(t, 3);
            std::string kind;
            long long e;
            if (t == 1) kind = "t=1", e = N9 * q * q * Nv;
            else if (t3 == 1) kind = "t^3=1!=t", e = N9 * q * Nv;
            else kind = "t^3!=1", e = N9;
            kind += v == 0 ? ", v=0" : ", v!=0";
            kinds[kind].first.push_back(g);
            kinds[kind].second = e;
        }
        for (auto& [k, p] : kinds) out.push_back(fix_all("|S(gamma_(t,0,v))|, " + k, fix, p.first, p.second));
    }
    return out;
}

std::vector<Check> formula_checks(long long q) {
    std::vector<Check> out;
    auto add = [&](const std::string& n, long long e, long long g, const std::string& note = "") {
        out.push_back(make_check("formulas", n, e, g, note));
    };
    for (auto& f : count_formulas()) {
        bool ok = true;
        std::string err;
        try {
            f.eval(q);
        } catch (const std::exception& e) {
            ok = false;
            err = e.what();
        }
        out.push_back(Check{"formulas", f.id + " integral", "integral", ok ? "integral" : "not integral", ok, err});
    }
    auto sum_stratum = [&](Stratum s, bool corr) {
        long long t = 0;
        for (FamilyId f : all_families())
            if (family_stratum(f) == s) t += corr ? family_count_corrected(f, q) : family_count_formula(f, q);
        return t;
    };
    long long tot = 0, totc = 0, cor = 0, nh = 0, h = 0, all = 0;
    for (int i = 0; i < 5; i++) {
        std::string r = kRows[i];
        long long row = eval_formula("total." + r, q);
        add("family sum = total." + r, row, sum_stratum(Stratum(i), false));
        long long rowc = i == 1 ? eval_formula("total.rank2.corrected", q) : row;
        add("corrected family sum = total." + r + " (corrected)", rowc, sum_stratum(Stratum(i), true));
        tot += row, totc += rowc;
        long long c = eval_formula("curves." + r, q);
        add("curves." + r + " - total." + r + " >= 0", 1, c - row >= 0 ? 1 : 0, "hyperelliptic classes " + std::to_string(c - row));
        cor += c;
        long long a = eval_formula("mass.nh." + r, q), b = eval_formula("mass.h." + r, q), m = eval_formula("mass." + r, q);
        add("mass.nh." + r + " + mass.h." + r + " = mass." + r, m, a + b);
        nh += a, h += b, all += m;
    }
    add("sum of rows = total", eval_formula("total", q), tot);
    add("sum of corrected rows = total (corrected)", eval_formula("total.corrected", q), totc);
    add("sum of rows = curves", eval_formula("curves", q), cor);
    add("mass.nh column sum = q^6+1", q * q * q * q * q * q + 1, nh);
    add("mass.nh", eval_formula("mass.nh", q), nh);
    add("mass.h column sum", eval_formula("mass.h", q), h);
    add("mass column sum = q^6+q^5+1", q * q * q * q * q * q + q * q * q * q * q + 1, all);
    return out;
}

std::vector<Check> stratum_checks(const FamilyTable& fams, long long samples, uint64_t seed, int threads) {
    const Tower& T = fams.tower();
    long long q = T.q();
    std::vector<Check> out;
    for (FamilyId f : all_families()) {
        const Family& fam = fams[f];
        auto pts = fam.enumerate();
        std::vector<Quad> pick;
        if (samples == 0 || samples >= (long long)pts.size()) pick = pts;
        else {
            std::mt19937_64 rng(seed * 1000003 + int(f));
            std::uniform_int_distribution<size_t> d(0, pts.size() - 1);
            for (long long i = 0; i < samples; i++) pick.push_back(pts[d(rng)]);
        }
        std::atomic<long long> ok{0}, bit_ok{0}, bit_n{0};
        std::mutex mu;
        std::string wit;
        Stratum want = family_stratum(f);
        // bitangents are slower; every model at q = 2, a tenth of the samples otherwise
        long long every = q == 2 ? 1 : 10;
        parallel_for((long long)pick.size(), threads, [&](long long lo, long long hi, int) {
            long long a = 0, b = 0, n = 0;
            for (long long i = lo; i < hi; i++) {
                Form F = fam.quartic(pick[i]);
                LPoly L = l_polynomial(T, F);
                Stratum s = stratum_of(L, q);
                if (s == want) a++;
                else {
                    std::lock_guard<std::mutex> g(mu);
                    if (wit.empty()) wit = "Q=" + quad_text(pick[i]) + " stratum " + stratum_name(s);
                }
                if (i % every == 0) {
                    n++;
                    auto bt = find_bitangents(T, F);
                    int nb = int(bt.size());
                    bool good = nb == family_bitangents(f) && nb == bitangents_for_rank(two_rank(L));
                    if (nb == 7) good = good && is_fano(T, bt);
                    b += good;
                }
            }
            ok += a, bit_ok += b, bit_n += n;
        });
        out.push_back(make_check("strata", family_name(f) + " Newton polygon = " + stratum_name(want),
                                 (long long)pick.size(), ok, wit));
        out.push_back(make_check("bitangents",
                                 family_name(f) + " " + std::to_string(family_bitangents(f)) + " bitangents = 2-rank" +
                                     (family_bitangents(f) == 7 ? ", Fano" : ""),
                                 bit_n, bit_ok));
    }
    return out;
}

std::vector<Check> quotient_checks(const FamilyTable& fams, long long samples, uint64_t seed) {
    const Tower& T = fams.tower();
    const Family& S = fams[F_::S];
    auto pts = S.enumerate();
    std::mt19937_64 rng(seed ^ 0x5151);
    std::uniform_int_distribution<size_t> d(0, pts.size() - 1);
    long long id = 0, inv = 0, ell = 0;
    for (long long i = 0; i < samples; i++) {
        const Quad& Q = pts[d(rng)];
        auto s = supersingular_quotient(T, Q);
        id += quotient_identity_holds(T, s);
        inv += quotient_involution_holds(T, Q, s);
        ell += quotient_is_elliptic(s);
    }
    return {make_check("quotient", "C u^2 + u/v = C z^4 + F z^2 + z, u = z(z+v)", samples, id),
            make_check("quotient", "(x,y,z) -> (x,y,z+vx) preserves the model", samples, inv),
            make_check("quotient", "quotient curve is elliptic", samples, ell)};
}

std::vector<Check> cocycle_checks() {
    const GammaGroup& G = GammaGroup::get();
    Field F(1, default_modulus(1));
    long long ok = 0;
    for (int g = 0; g < G.size(); g++) {
        Quad Hg = cocycle_H(G[g]);
        for (int r = 0; r < G.size(); r++)
            ok += cocycle_H(G[G.mul(g, r)]) == quad::add(quad::substitute(F, Hg, G[r]), cocycle_H(G[r]));
    }
    long long left = 0, n = 0;
    std::mt19937_64 rng(7);
    for (int it = 0; it < 4; it++) {
        Quad Q;
        for (auto& x : Q.v) x = rng() & 1;
        for (int a = 0; a < G.size(); a++)
            for (int b = 0; b < G.size(); b += 7, n++) left += twisted_act(G.mul(a, b), Q) == twisted_act(a, twisted_act(b, Q));
    }
    return {make_check("cocycle", "H_(g r) = H_g^r + H_r on all pairs", 168LL * 168, ok),
            make_check("cocycle", "twisted action is a left action (sampled pairs)", n, left)};
}

// ---------------------------------------------------------------- sweep

bool SweepResult::exact() const {
    return problems.empty() && unmatched == 0 && duplicated == 0 && orbit_stabilizer_mismatch == 0 &&
           bitangent_rank_mismatch == 0 && non_fano == 0;
}

SweepResult sweep_q2(const FamilyTable& fams, const std::vector<FamilyCensus>& census, int threads) {
    const Tower& T = fams.tower();
    if (T.q() != 2) throw std::invalid_argument("the exhaustive sweep is only for q = 2");
    const GammaGroup& G = GammaGroup::get();
    std::vector<BinaryQuarticMap> maps;
    for (int g = 0; g < G.size(); g++) maps.push_back(binary_quartic_map(G[g]));
    const uint32_t total = (1u << 15) - 1;
    std::vector<uint8_t> seen(total + 1, 0);
    struct Orb {
        uint32_t rep;
        std::vector<uint32_t> members;
    };
    std::vector<Orb> orbs;
    for (uint32_t f = 1; f <= total; f++) {
        if (seen[f]) continue;
        std::set<uint32_t> m;
        for (auto& M : maps) m.insert(M.apply(f));
        for (uint32_t x : m) seen[x] = 1;
        orbs.push_back({*m.begin(), std::vector<uint32_t>(m.begin(), m.end())});
    }
    auto form_of = [](uint32_t code) {
        Form F = form::zero(4);
        for (int i = 0; i < 15; i++) F.c[i] = (code >> i) & 1;
        return F;
    };

    SweepResult r;
    r.forms = total;
    r.classes_per_family.assign(kFamilyCount, 0);
    r.per_stratum.assign(5, 0);
    r.forms_per_bitangents.assign(8, 0);
    std::map<std::pair<int, Quad>, const Orbit*> reps;
    for (auto& c : census)
        for (auto& o : c.orbits) reps[{int(c.id), o.rep}] = &o;
    std::map<std::pair<int, Quad>, int> hits;
    std::mutex mu;
    std::atomic<long long> smooth{0}, sing{0}, sm_orb{0}, btr{0}, nf{0}, osm{0};
    std::vector<std::atomic<long long>> per_bt(8);
    parallel_for((long long)orbs.size(), threads, [&](long long lo, long long hi, int) {
        for (long long i = lo; i < hi; i++) {
            const Orb& o = orbs[i];
            Form F = form_of(o.rep);
            if (!is_smooth(T, F)) {
                sing++;
                continue;
            }
            sm_orb++;
            smooth += (long long)o.members.size();
            LPoly L = l_polynomial(T, F);
            int want = bitangents_for_rank(two_rank(L));
            for (uint32_t x : o.members) {
                auto bt = find_bitangents(T, form_of(x));
                int nb = int(bt.size());
                if (nb <= 7) per_bt[nb]++;
                if (nb != want) btr++;
                if (nb == 7 && !is_fano(T, bt)) nf++;
            }
            std::string problem;
            try {
                Identification id = reduce_to_family(fams, F);
                const Family& fam = fams[id.family];
                Form model = fam.quartic(id.Q);
                if (!form::proportional(T.k(), form::substitute(T.k(), F, id.witness), model))
                    problem = "witness does not map the form onto the model";
                Stratum st = stratum_of(L, 2);
                if (st != family_stratum(id.family)) problem = "stratum differs from the family";
                std::lock_guard<std::mutex> g(mu);
                auto key = std::make_pair(int(id.family), id.Q);
                auto it = reps.find(key);
                if (it == reps.end()) problem = "not an orbit representative";
                else if ((long long)o.members.size() * it->second->stabilizer != 168)
                    osm++;
                hits[key]++;
                r.classes_per_family[int(id.family)]++;
                r.per_stratum[int(st)]++;
            } catch (const std::exception& e) {
                problem = e.what();
            }
            if (!problem.empty()) {
                std::lock_guard<std::mutex> g(mu);
                char b[16];
                std::snprintf(b, sizeof b, "%04x", o.rep);
                r.problems.push_back(std::string("form ") + b + ": " + problem);
            }
        }
    });
    r.smooth = smooth, r.singular_orbits = sing, r.smooth_orbits = sm_orb;
    r.bitangent_rank_mismatch = btr, r.non_fano = nf, r.orbit_stabilizer_mismatch = osm;
    for (int i = 0; i < 8; i++) r.forms_per_bitangents[i] = per_bt[i];
    for (auto& [k, o] : reps) {
        auto it = hits.find(k);
        if (it == hits.end()) r.unmatched++;
        else if (it->second > 1) r.duplicated++;
    }
    std::sort(r.problems.begin(), r.problems.end());
    return r;
}

// ---------------------------------------------------------------- verify

std::optional<Depth> parse_depth(const std::string& s) {
    if (s == "formulas-only" || s == "formulas") return Depth::Formulas;
    if (s == "enumerate") return Depth::Enumerate;
    if (s == "exhaustive-sweep" || s == "sweep") return Depth::Sweep;
    return std::nullopt;
}

const char* depth_name(Depth d) {
    switch (d) {
    case Depth::Formulas: return "formulas-only";
    case Depth::Enumerate: return "enumerate";
    case Depth::Sweep: return "exhaustive-sweep";
    }
    return "?";
}

bool VerifyReport::ok() const { return failures() == 0; }

long long VerifyReport::failures() const {
    long long n = 0;
    for (auto& c : checks) n += !c.ok;
    return n;
}

VerifyReport verify(const FamilyTable& fams, const VerifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    const Tower& T = fams.tower();
    long long q = T.q();
    VerifyReport rep;
    rep.q = q;
    rep.depth = opt.depth;
    rep.generators = fams.generators().describe(T);
    auto& out = rep.checks;
    auto append = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
    if (opt.depth == Depth::Sweep && q != 2) throw std::invalid_argument("exhaustive-sweep needs q = 2");

    append(formula_checks(q));
    if (opt.depth != Depth::Formulas) {
        append(cocycle_checks());
        append(descent_size_checks(T));
        for (int cls = 0; cls < 6; cls++) {
            GroupAction A = descent_action(T, cls);
            long long b = burnside_count(A, opt.threads);
            long long o = (long long)orbits(A, opt.threads).size();
            std::string nm = std::string("Gamma_") + GammaGroup::class_name(cls) + "\\D";
            out.push_back(make_check("descent", nm + " Burnside = orbits", b, o));
            out.push_back(make_check("descent", nm + " = class count", family_count_formula(all_families()[cls], q), o));
        }
        append(fixed_point_checks(fams, opt.threads));

        std::vector<FamilyCensus> cen;
        FamilyCensusOptions fo;
        fo.orbits = true;
        fo.tables = q <= 8;
        fo.threads = opt.threads;
        for (FamilyId f : all_families()) {
            if (opt.only && *opt.only != f) continue;
            cen.push_back(census_family(fams[f], fo));
            const auto& c = cen.back();
            std::string nm = family_name(f);
            out.push_back(make_check("classes", nm + " Burnside = orbits", c.burnside, (long long)c.orbits.size()));
            std::string note;
            if (c.formula != c.corrected)
                note = "closed form misses the mixed elements; corrected value " + std::to_string(c.corrected);
            out.push_back(make_check("classes", nm + " = closed form", c.formula, c.burnside, note));
            if (c.formula != c.corrected)
                out.push_back(make_check("classes", nm + " = corrected closed form", c.corrected, c.burnside));
            out.push_back(make_check("mass", nm + " |N|/|G| = sum 1/|Aut|", c.mass(), c.aut_mass()));
            if (fo.tables && f != FamilyId::O1) {
                out.push_back(make_check("aut", nm + " table = stabilizer on every model", c.table_checked,
                                         c.table_checked - c.table_mismatch, c.table_witness));
                if (f == FamilyId::N4_1 || f == FamilyId::N4_3)
                    out.push_back(make_check("aut", nm + " corrected table = stabilizer", c.table_checked,
                                             c.table_checked - c.corrected_mismatch));
            }
            if (f == FamilyId::O7_0 || f == FamilyId::O7_1) {
                out.push_back(make_check("aut", nm + " classes with |Aut| = 7", 1, c.classes_with_aut_order(7)));
                const Family& fam = fams[f];
                out.push_back(make_check("aut", nm + " Klein twist has |Aut| = 7", 7,
                                         fam.in_domain(fam.klein_twist()) ? fam.stabilizer_aut(fam.klein_twist()).order : 0));
            }
        }
        if (!opt.only) {
            long long total = 0;
            Rational mnh_all = 0;
            for (int s = 0; s < 5; s++) {
                long long n = 0;
                Rational m = 0, ma = 0;
                for (auto& c : cen)
                    if (int(family_stratum(c.id)) == s) n += c.burnside, m += c.mass(), ma += c.aut_mass();
                std::string r = kRows[s];
                long long lit = eval_formula("total." + r, q);
                long long cor = s == 1 ? eval_formula("total.rank2.corrected", q) : lit;
                out.push_back(make_check("totals", "classes " + r + " = total." + r, lit, n,
                                         lit != cor ? "corrected value " + std::to_string(cor) : ""));
                if (lit != cor) out.push_back(make_check("totals", "classes " + r + " = corrected", cor, n));
                Rational want(eval_formula("mass.nh." + r, q));
                out.push_back(make_check("mass", "sum |N|/|G| " + r + " = mass.nh." + r, want, m));
                out.push_back(make_check("mass", "sum 1/|Aut| " + r + " = mass.nh." + r, want, ma));
                total += n;
                mnh_all += m;
            }
            long long lit = eval_formula("total", q), cor = eval_formula("total.corrected", q);
            out.push_back(make_check("totals", "all classes = total", lit, total,
                                     lit != cor ? "corrected value " + std::to_string(cor) : ""));
            if (lit != cor) out.push_back(make_check("totals", "all classes = corrected total", cor, total));
            out.push_back(make_check("mass", "M3nh column = q^6+1", Rational(q * q * q * q * q * q + 1), mnh_all));
            Rational h = eval_formula("mass.h", q);
            out.push_back(make_check("mass", "M3nh + hyperelliptic constants = q^6+q^5+1",
                                     Rational(q * q * q * q * q * q + q * q * q * q * q + 1), mnh_all + h,
                                     "hyperelliptic column is a literature constant"));
        }
        append(stratum_checks(fams, q == 2 ? 0 : opt.samples, opt.seed, opt.threads));
        append(quotient_checks(fams, 1000, opt.seed));

        if (opt.depth == Depth::Sweep && !opt.only) {
            SweepResult s = sweep_q2(fams, cen, opt.threads);
            out.push_back(make_check("sweep", "nonzero quartics over F2", 32767, s.forms));
            long long cls = 0;
            for (long long x : s.classes_per_family) cls += x;
            out.push_back(make_check("sweep", "smooth classes = total", eval_formula("total", 2), cls));
            out.push_back(make_check("sweep", "smooth orbits = classified orbits", s.smooth_orbits, cls));
            for (FamilyId f : all_families())
                out.push_back(make_check("sweep", family_name(f) + " classes found", cen[int(f)].burnside,
                                         s.classes_per_family[int(f)]));
            out.push_back(make_check("sweep", "family representatives not reached", 0, s.unmatched));
            out.push_back(make_check("sweep", "family representatives reached twice", 0, s.duplicated));
            out.push_back(make_check("sweep", "orbit size * |Aut| != 168", 0, s.orbit_stabilizer_mismatch));
            out.push_back(make_check("sweep", "smooth forms = 168 * mass", 168 * (64 + 1), s.smooth));
            out.push_back(make_check("sweep", "bitangent count != 2-rank count", 0, s.bitangent_rank_mismatch));
            out.push_back(make_check("sweep", "7 bitangents but not a Fano plane", 0, s.non_fano));
            out.push_back(make_check("sweep", "identification problems", 0, (long long)s.problems.size(),
                                     s.problems.empty() ? "" : s.problems.front()));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string report_markdown(const VerifyReport& r) {
    std::ostringstream o;
    o << "# verify q=" << r.q << " depth=" << depth_name(r.depth) << "\n\n";
    o << "generators: " << r.generators << "\n\n";
    o << "| group | check | expected | got | status | note |\n|---|---|---|---|---|---|\n";
    for (auto& c : r.checks)
        o << "| " << c.group << " | " << c.name << " | " << c.expected << " | " << c.got << " | "
          << (c.ok ? "PASS" : "FAIL") << " | " << c.note << " |\n";
    char b[64];
    std::snprintf(b, sizeof b, "%.1f", r.seconds);
    o << "\n" << r.checks.size() << " checks, " << r.failures() << " failed, " << b << " s\n";
    return o.str();
}

std::string report_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["depth"] = depth_name(r.depth);
    j["generators"] = r.generators;
    auto& a = j["checks"] = nlohmann::ordered_json::array();
    for (auto& c : r.checks) {
        nlohmann::ordered_json x;
        x["group"] = c.group;
        x["name"] = c.name;
        x["expected"] = c.expected;
        x["got"] = c.got;
        x["ok"] = c.ok;
        x["note"] = c.note;
        a.push_back(x);
    }
    j["failures"] = r.failures();
    return j.dump(1) + "\n";
}

std::string report_csv(const VerifyReport& r) {
    auto esc = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string t = "\"";
        for (char c : s) t += c == '"' ? std::string("\"\"") : std::string(1, c);
        return t + "\"";
    };
    std::ostringstream o;
    o << "# generators: " << r.generators << "\n";
    o << "group,check,expected,got,status,note\n";
    for (auto& c : r.checks)
        o << esc(c.group) << "," << esc(c.name) << "," << esc(c.expected) << "," << esc(c.got) << ","
          << (c.ok ? "PASS" : "FAIL") << "," << esc(c.note) << "\n";
    return o.str();
}

}  // namespace binq
