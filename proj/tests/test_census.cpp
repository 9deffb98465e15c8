#include <doctest.h>

#include <set>

#include "binq/census.hpp"

using namespace binq;

TEST_CASE("formula evaluation") {
    CHECK(eval_formula("total.ordinary", 2) == 39);
    CHECK(ordinary_total_formula(2) == 39);
    CHECK(eval_formula("total", 2) == 78);
    CHECK(eval_formula("total.supersingular", 4) == 42);
    CHECK(eval_formula("family.S", 2) == 6);
    CHECK(eval_formula("family.N4_1", 2) == 2);
    CHECK(eval_formula("family.O_7_0", 2) == 10);
    CHECK(eval_formula("family.O_2", 8) == 22898);
    const char* rows[] = {"ordinary", "rank2", "rank1", "type1/3", "supersingular"};
    long long nh[] = {33, 16, 8, 4, 4};
    for (int i = 0; i < 5; i++) CHECK(eval_formula(std::string("mass.nh.") + rows[i], 2) == nh[i]);
    // brackets: q = 4 is 1 mod 3, q = 64 is 1 mod 9 and 1 mod 7
    CHECK(eval_formula("total", 4) == 4096 + 256 - 64 + 32 + 4);
    CHECK(eval_formula("total.supersingular", 64) == 2 * 4096 - 64 + 254 + 6);
    CHECK(eval_formula("curves.type1/3", 8) == 512 + 64 + 12);
    CHECK(eval_formula("family.N4_1.corrected", 4) == 99);
    CHECK(eval_formula("family.N4_3.corrected", 16) == family_count_corrected(FamilyId::N4_3, 16));
    CHECK_THROWS_AS(eval_formula("nope", 2), std::invalid_argument);
    CountFormula bad;
    bad.id = "bad";
    bad.poly = {1, 1};
    bad.denom = 4;
    CHECK_THROWS_AS(bad.eval(2), std::domain_error);
    CHECK(count_formula("family.O_1").text() == "(q^6 - 7q^5 + 42q^4 - 140q^3 + 343q^2 - 462q + 328)/168");
    CHECK(count_formula("total").text() == "q^6 + q^4 - q^3 + 2q^2 + 4 - [4q - 2]_{q=2 mod 3} + [6]_{q=1 mod 9}");
}

TEST_CASE("family formulas agree with the table entries") {
    for (FamilyId f : all_families())
        for (long long q : {2, 4, 8, 16, 32, 64}) {
            CHECK(eval_formula("family." + family_name(f), q) == family_count_formula(f, q));
            if (f == FamilyId::N4_1 || f == FamilyId::N4_3)
                CHECK(eval_formula("family." + family_name(f) + ".corrected", q) == family_count_corrected(f, q));
        }
}

TEST_CASE("count tables are consistent at the formula level") {
    for (long long q : {2, 4, 8, 16, 32, 64, 128, 256, 512}) {
        for (auto& c : formula_checks(q)) CHECK_MESSAGE(c.ok, c.name, " q=", q, " ", c.expected, " vs ", c.got);
        CHECK(eval_formula("mass", q) == q * q * q * q * q * q + q * q * q * q * q + 1);
        CHECK(eval_formula("total.corrected", q) - eval_formula("total", q) == ((q - 1) % 3 ? 0 : 2 * q * (q - 1)));
    }
}

TEST_CASE("family census at q = 2") {
    Tower T(1);
    FamilyTable fams(T);
    long long tot = 0;
    Rational mass = 0;
    for (FamilyId f : all_families()) {
        FamilyCensusOptions o;
        o.tables = true;
        auto c = census_family(fams[f], o);
        CHECK(c.burnside == (long long)c.orbits.size());
        CHECK(c.burnside == c.formula);
        CHECK(c.mass() == c.aut_mass());
        CHECK(c.table_mismatch == 0);
        tot += c.burnside;
        mass += c.mass();
    }
    CHECK(tot == 78);
    CHECK(mass == 65);
}

TEST_CASE("fixed-point counts and descent sizes") {
    for (int n : {1, 2}) {
        Tower T(n);
        FamilyTable fams(T);
        for (auto& c : descent_size_checks(T)) CHECK_MESSAGE(c.ok, c.name);
        auto fp = fixed_point_checks(fams, 1);
        CHECK(fp.size() > 20);
        for (auto& c : fp) CHECK_MESSAGE(c.ok, c.name, " q=", T.q(), " ", c.expected, " vs ", c.got, " ", c.note);
    }
}

TEST_CASE("records: JSON shape and round trip") {
    Tower T(1);
    FamilyTable fams(T);
    const Family& S = fams[FamilyId::S];
    auto c = census_family(S, {});
    REQUIRE(c.orbits.size() == 6);
    std::set<std::string> lines;
    for (auto& o : c.orbits) {
        CurveClassRecord r = make_record(S, o);
        CHECK(r.stratum == Stratum::Supersingular);
        std::string j = record_json(r);
        CHECK(j.rfind("{\"q\":2,\"family\":\"S\",\"Q\":[", 0) == 0);
        CHECK(j.find("\"lpoly\":[1,") != std::string::npos);
        CurveClassRecord back = parse_record_json(j, T);
        CHECK(record_json(back) == j);
        lines.insert(j);
    }
    CHECK(lines.size() == 6);
    CHECK_THROWS_AS(parse_record_json("{\"q\":2}", T), std::invalid_argument);
    CHECK_THROWS_AS(parse_record_json("not json", T), std::invalid_argument);
}

TEST_CASE("exhaustive sweep over F2") {
    Tower T(1);
    FamilyTable fams(T);
    std::vector<FamilyCensus> cen;
    for (FamilyId f : all_families()) cen.push_back(census_family(fams[f], {}));
    SweepResult s = sweep_q2(fams, cen, 1);
    CHECK(s.exact());
    CHECK(s.forms == 32767);
    CHECK(s.smooth == 168 * 65);
    CHECK(s.smooth_orbits == 78);
    long long per[] = {1, 2, 9, 7, 10, 10, 2, 7, 10, 6, 4, 4, 6};
    for (FamilyId f : all_families()) CHECK(s.classes_per_family[int(f)] == per[int(f)]);
    long long st[] = {39, 19, 10, 4, 6};
    for (int i = 0; i < 5; i++) CHECK(s.per_stratum[i] == st[i]);
    CHECK(s.forms_per_bitangents[0] == 0);
    CHECK(s.forms_per_bitangents[3] == 0);
    CHECK(s.forms_per_bitangents[1] + s.forms_per_bitangents[2] + s.forms_per_bitangents[4] +
              s.forms_per_bitangents[7] == s.smooth);
    Tower T4(2);
    CHECK_THROWS_AS(sweep_q2(FamilyTable(T4), cen, 1), std::invalid_argument);
}

TEST_CASE("verify reports") {
    Tower T(1);
    FamilyTable fams(T);
    VerifyOptions o;
    o.depth = Depth::Sweep;
    auto r = verify(fams, o);
    CHECK(r.ok());
    CHECK(r.checks.size() > 200);
    CHECK(report_json(r) == report_json(verify(fams, o)));
    CHECK(report_json(r).find("\"generators\"") != std::string::npos);
    CHECK(report_markdown(r).find("0 failed") != std::string::npos);
    CHECK(report_csv(r).rfind("# generators: q=2", 0) == 0);

    // q = 4: exactly the N4 closed forms and tables and the totals built on them
    Tower T4(2);
    FamilyTable f4(T4);
    o.depth = Depth::Enumerate;
    o.samples = 50;
    auto r4 = verify(f4, o);
    std::set<std::string> failed;
    for (auto& c : r4.checks)
        if (!c.ok) failed.insert(c.name);
    CHECK(failed == std::set<std::string>{"N4_1 = closed form", "N4_3 = closed form",
                                          "N4_1 table = stabilizer on every model",
                                          "N4_3 table = stabilizer on every model", "classes rank2 = total.rank2",
                                          "all classes = total"});
    for (auto& c : r4.checks)
        if (c.name.find("corrected") != std::string::npos) CHECK_MESSAGE(c.ok, c.name);

    o.depth = Depth::Formulas;
    CHECK(verify(f4, o).ok());
    CHECK(parse_depth("formulas-only") == Depth::Formulas);
    CHECK(parse_depth("exhaustive-sweep") == Depth::Sweep);
    CHECK(!parse_depth("deep"));
    o.depth = Depth::Sweep;
    CHECK_THROWS(verify(f4, o));
}
