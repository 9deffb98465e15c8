#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "binq/descent.hpp"
#include "binq/families.hpp"
#include "binq/quartic.hpp"

namespace binq {

using Rational = boost::multiprecision::cpp_rational;

// (poly(q) + sum of active brackets) / denom; polynomials are ascending coefficient lists
struct CountFormula {
    struct Bracket {
        std::vector<long long> poly;
        long long mod = 1, residue = 0;  // active iff q = residue (mod mod)
    };
    std::string id;
    std::vector<long long> poly;
    long long denom = 1;
    std::vector<Bracket> brackets;
    bool literature = false;  // hyperelliptic constants, taken as given

    // throws std::domain_error if the division is not exact, std::overflow_error past 2^62
    long long eval(long long q) const;
    std::string text() const;
};

// ids:
//   family.<name>            closed class counts (family.N4_1.corrected, family.N4_3.corrected too)
//   total.<stratum>, total   smooth plane quartics (total.rank2.corrected, total.corrected)
//   curves.<stratum>, curves   all genus three curves, hyperelliptic included
//   mass.nh.<stratum>, mass.h.<stratum>, mass.<stratum>; mass.nh, mass.h, mass
// with <stratum> one of ordinary, rank2, rank1, type1/3, supersingular
const std::vector<CountFormula>& count_formulas();
const CountFormula& count_formula(const std::string& id);
long long eval_formula(const std::string& id, long long q);
// sum of the ordinary family formulas
long long ordinary_total_formula(long long q);

struct FamilyCensusOptions {
    bool orbits = true;   // enumerate orbits (classes and their stabilizers)
    bool tables = false;  // compare the Aut tables with stabilizers on every model
    int threads = 1;
};

struct FamilyCensus {
    FamilyId id{};
    long long domain = 0;
    int group_order = 1;
    long long burnside = 0;
    long long formula = 0;    // literal closed form
    long long corrected = 0;  // closed form with the mixed-element terms
    std::vector<Orbit> orbits;
    long long table_checked = 0, table_mismatch = 0, corrected_mismatch = 0;
    std::string table_witness;  // first literal mismatch, if any

    Rational mass() const { return Rational(domain, group_order); }
    Rational aut_mass() const;  // sum of 1/|stabilizer| over orbits
    int classes_with_aut_order(long long n) const;
};
FamilyCensus census_family(const Family& fam, const FamilyCensusOptions& opt);

// Exported unit: one k-isomorphism class.
struct CurveClassRecord {
    long long q = 2;
    FamilyId family{};
    Quad Q;
    Form quartic;
    long long aut_order = 1;
    std::string aut_structure;
    Stratum stratum{};
    LPoly lpoly;
};
CurveClassRecord make_record(const Family& fam, const Orbit& o);
// {q, family, Q, quartic, aut_order, aut_structure, stratum, lpoly}, one line
std::string record_json(const CurveClassRecord& r);
// throws std::invalid_argument on malformed input
CurveClassRecord parse_record_json(const std::string& line, const Tower& T);

// One comparison of an enumerated value with a formula value.
struct Check {
    std::string group;  // e.g. "descent", "fixed points", "classes"
    std::string name;
    std::string expected, got;
    bool ok = false;
    std::string note;
};
Check make_check(const std::string& group, const std::string& name, long long expected, long long got,
                 const std::string& note = "");
Check make_check(const std::string& group, const std::string& name, const Rational& expected, const Rational& got,
                 const std::string& note = "");

// Descent-set sizes and every displayed fixed-point count: Q_k(gamma), D_gamma(rho), and the
// family sets of N4, N2, N1 and S.
std::vector<Check> descent_size_checks(const Tower& T);
std::vector<Check> fixed_point_checks(const FamilyTable& fams, int threads);

// Formula-level consistency of the count tables (no enumeration).
std::vector<Check> formula_checks(long long q);

// Newton polygon of sampled models against the family stratum; every model if samples == 0.
std::vector<Check> stratum_checks(const FamilyTable& fams, long long samples, uint64_t seed, int threads);

// S-models sampled with replacement: quotient identity, involution, elliptic quotient.
std::vector<Check> quotient_checks(const FamilyTable& fams, long long samples, uint64_t seed);
// cocycle identity on all 168^2 pairs of GL_3(F2); left action on sampled pairs
std::vector<Check> cocycle_checks();

// Exhaustive classification of all 2^15 - 1 nonzero quartics over F2.
struct SweepResult {
    long long forms = 0, smooth = 0, singular_orbits = 0, smooth_orbits = 0;
    std::vector<long long> classes_per_family;  // indexed by FamilyId
    std::vector<long long> per_stratum;         // classes, indexed by Stratum
    std::vector<long long> forms_per_bitangents; // smooth forms with 0..7 bitangents
    long long bitangent_rank_mismatch = 0, non_fano = 0;
    long long orbit_stabilizer_mismatch = 0;  // orbit size * |Aut| != 168
    long long unmatched = 0, duplicated = 0;  // against the family orbit representatives
    std::vector<std::string> problems;
    bool exact() const;
};
SweepResult sweep_q2(const FamilyTable& fams, const std::vector<FamilyCensus>& census, int threads);

enum class Depth { Formulas, Enumerate, Sweep };
std::optional<Depth> parse_depth(const std::string& s);
const char* depth_name(Depth d);

struct VerifyOptions {
    Depth depth = Depth::Enumerate;
    int threads = 1;
    uint64_t seed = 1;
    long long samples = 1000;     // stratum samples per family (q > 2)
    std::optional<FamilyId> only;  // restrict family checks
};
struct VerifyReport {
    long long q = 2;
    Depth depth = Depth::Enumerate;
    std::string generators;
    std::vector<Check> checks;
    double seconds = 0;
    bool ok() const;
    long long failures() const;
};
VerifyReport verify(const FamilyTable& fams, const VerifyOptions& opt);
std::string report_markdown(const VerifyReport& r);
std::string report_json(const VerifyReport& r);
std::string report_csv(const VerifyReport& r);

}  // namespace binq
