#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "binq/census.hpp"
#include "binq/families.hpp"
#include "binq/quartic.hpp"

using namespace binq;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    long long q = 2;
    std::string depth;
    std::string family;
    int threads = default_threads();
    std::string format;  // empty: json lines for enumerate, markdown otherwise
    std::string out;
    uint64_t seed = 1;
    std::string generators;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* kRows[] = {"ordinary", "rank2", "rank1", "type1/3", "supersingular"};

int log2_exact(long long q) {
    if (q < 2 || (q & (q - 1))) throw UsageError("--q must be a power of 2, got " + std::to_string(q));
    int n = 0;
    while ((1LL << n) < q) n++;
    return n;
}

Depth depth_of(const RunConfig& c, Depth dflt) {
    if (c.depth.empty()) return dflt;
    auto d = parse_depth(c.depth);
    if (!d) throw UsageError("--depth must be formulas-only, enumerate or exhaustive-sweep");
    return *d;
}

void check_q(long long q, bool enumerating) {
    log2_exact(q);
    if (enumerating && q > 16) throw UsageError("enumeration needs 2 <= q <= 16");
    if (q > 1024) throw UsageError("formulas are evaluated for q <= 1024");
}

std::optional<FamilyId> family_of(const RunConfig& c) {
    if (c.family.empty() || c.family == "all") return std::nullopt;
    auto f = parse_family(c.family);
    if (!f) throw UsageError("unknown family " + c.family);
    return f;
}

// a describe() line, a report carrying one ("generators: ..." or "# generators: ..."),
// or a JSON object with a "generators" string
std::string read_generator_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    auto j = json::parse(s, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
        if (j.contains("generators") && j["generators"].is_string()) return j["generators"];
        if (j.contains("header") && j["header"].contains("generators")) return j["header"]["generators"];
    }
    std::istringstream ls(s);
    std::string line;
    while (std::getline(ls, line)) {
        auto h = json::parse(line, nullptr, false);
        if (!h.is_discarded() && h.is_object() && h.contains("header")) return h["header"]["generators"];
        auto p = line.find("generators:");
        if (p != std::string::npos) return line.substr(p + 11);
        if (line.find("r=") != std::string::npos) return line;
    }
    throw UsageError("no generator table in " + path);
}

struct Context {
    std::unique_ptr<Tower> T;
    std::unique_ptr<FamilyTable> fams;
};

Context make_context(const RunConfig& c) {
    Context ctx;
    ctx.T = std::make_unique<Tower>(log2_exact(c.q));
    if (c.generators.empty()) {
        ctx.fams = std::make_unique<FamilyTable>(*ctx.T);
    } else {
        Generators g = parse_generators(*ctx.T, read_generator_text(c.generators));
        ctx.fams = std::make_unique<FamilyTable>(*ctx.T, g);
    }
    return ctx;
}

std::string generator_text(const Context& ctx) {
    if (!ctx.fams) return "none (formulas only)";
    return ctx.fams->generators().describe(*ctx.T);
}

json rational_cell(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).convert_to<long long>();
    return r.str();
}

struct Table {
    std::string title;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> cols;
    std::vector<std::vector<json>> rows;
    std::vector<std::string> notes;
};

std::string cell_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) return v.dump();
    std::string s;
    for (auto& x : v) s += (s.empty() ? "" : " ") + (x.is_string() ? x.get<std::string>() : x.dump());
    return s;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string t = "\"";
    for (char ch : s) t += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return t + "\"";
}

std::string render(const Table& t, const std::string& format) {
    std::ostringstream o;
    if (format == "json") {
        json j;
        j["title"] = t.title;
        for (auto& [k, v] : t.meta) j[k] = v;
        j["columns"] = t.cols;
        auto& rows = j["rows"] = json::array();
        for (auto& r : t.rows) {
            json x;
            for (size_t i = 0; i < t.cols.size(); i++) x[t.cols[i]] = r[i];
            rows.push_back(x);
        }
        j["notes"] = t.notes;
        return j.dump(1) + "\n";
    }
    if (format == "csv") {
        for (auto& [k, v] : t.meta) o << "# " << k << ": " << v << "\n";
        for (size_t i = 0; i < t.cols.size(); i++) o << (i ? "," : "") << csv_escape(t.cols[i]);
        o << "\n";
        for (auto& r : t.rows) {
            for (size_t i = 0; i < r.size(); i++) o << (i ? "," : "") << csv_escape(cell_text(r[i]));
            o << "\n";
        }
        for (auto& n : t.notes) o << "# " << n << "\n";
        return o.str();
    }
    o << "# " << t.title << "\n\n";
    for (auto& [k, v] : t.meta) o << k << ": " << v << "  \n";
    o << "\n|";
    for (auto& c : t.cols) o << " " << c << " |";
    o << "\n|";
    for (size_t i = 0; i < t.cols.size(); i++) o << "---|";
    o << "\n";
    for (auto& r : t.rows) {
        o << "|";
        for (auto& v : r) o << " " << cell_text(v) << " |";
        o << "\n";
    }
    if (!t.notes.empty()) o << "\n";
    for (auto& n : t.notes) o << "- " << n << "\n";
    return o.str();
}

void emit(const RunConfig& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    f << text;
}

void check_format(const RunConfig& c) {
    if (c.format != "markdown" && c.format != "json" && c.format != "csv")
        throw UsageError("--format must be markdown, json or csv");
}

// per-family census for every family passing the filter
std::vector<FamilyCensus> run_census(const Context& ctx, const RunConfig& c, std::optional<FamilyId> only) {
    std::vector<FamilyCensus> out;
    FamilyCensusOptions o;
    o.threads = c.threads;
    for (FamilyId f : all_families())
        if (!only || *only == f) out.push_back(census_family((*ctx.fams)[f], o));
    return out;
}

int cmd_count(const RunConfig& c, bool strata) {
    Depth d = depth_of(c, Depth::Formulas);
    check_q(c.q, d != Depth::Formulas);
    if (d == Depth::Sweep && c.q != 2) throw UsageError("exhaustive-sweep needs q = 2");
    auto only = family_of(c);
    if (only && strata) throw UsageError("--strata and --family do not combine");
    Context ctx;
    if (d != Depth::Formulas || c.q <= 16) ctx = make_context(c);
    std::vector<FamilyCensus> cen;
    std::optional<SweepResult> sw;
    if (d != Depth::Formulas) cen = run_census(ctx, c, d == Depth::Sweep ? std::nullopt : only);
    if (d == Depth::Sweep) sw = sweep_q2(*ctx.fams, cen, c.threads);
    if (d == Depth::Sweep && only) {
        auto keep = std::move(cen);
        cen.clear();
        for (auto& x : keep)
            if (x.id == *only) cen.push_back(std::move(x));
    }
    bool fix = (c.q - 1) % 3 == 0;  // the N4 closed forms need the mixed-element terms

    Table t;
    t.title = strata ? "moduli counts per stratum" : "class counts";
    t.meta = {{"q", std::to_string(c.q)}, {"depth", depth_name(d)}, {"generators", generator_text(ctx)}};
    if (strata) {
        t.cols = {"stratum", "classes formula", "M3nh formula"};
        if (d != Depth::Formulas) t.cols.insert(t.cols.end(), {"classes enumerated", "M3nh enumerated"});
        if (sw) t.cols.push_back("classes swept");
        long long tc = 0, tm = 0, ec = 0;
        Rational em = 0;
        for (int s = 0; s < 5; s++) {
            std::string row = kRows[s];
            long long fc = eval_formula("total." + row, c.q), fm = eval_formula("mass.nh." + row, c.q);
            tc += fc, tm += fm;
            std::vector<json> r{row, fc, fm};
            if (d != Depth::Formulas) {
                long long n = 0;
                Rational m = 0;
                for (auto& x : cen)
                    if (int(family_stratum(x.id)) == s) n += (long long)x.orbits.size(), m += x.aut_mass();
                ec += n, em += m;
                r.push_back(n);
                r.push_back(rational_cell(m));
            }
            if (sw) r.push_back(sw->per_stratum[s]);
            t.rows.push_back(r);
        }
        std::vector<json> r{"total", tc, tm};
        if (d != Depth::Formulas) r.insert(r.end(), {ec, rational_cell(em)});
        if (sw) r.push_back(sw->smooth_orbits);
        t.rows.push_back(r);
        t.notes.push_back("M3nh: sum of 1/|Aut| over the classes of smooth plane quartics");
    } else {
        t.cols = {"row", "stratum", "formula"};
        if (fix) t.cols.push_back("formula corrected");
        if (d != Depth::Formulas) t.cols.push_back("enumerated");
        if (sw) t.cols.push_back("swept");
        for (FamilyId f : all_families()) {
            if (only && *only != f) continue;
            std::string nm = family_name(f);
            std::vector<json> r{nm, stratum_name(family_stratum(f)), family_count_formula(f, c.q)};
            if (fix) r.push_back(family_count_corrected(f, c.q));
            if (d != Depth::Formulas)
                for (auto& x : cen)
                    if (x.id == f) r.push_back((long long)x.orbits.size());
            if (sw) r.push_back(sw->classes_per_family[int(f)]);
            t.rows.push_back(r);
        }
        if (!only) {
            long long etot = 0;
            for (int s = 0; s < 5; s++) {
                std::string row = kRows[s];
                std::vector<json> r{"total " + row, row, eval_formula("total." + row, c.q)};
                if (fix) r.push_back(eval_formula(row == "rank2" ? "total.rank2.corrected" : "total." + row, c.q));
                if (d != Depth::Formulas) {
                    long long n = 0;
                    for (auto& x : cen)
                        if (int(family_stratum(x.id)) == s) n += (long long)x.orbits.size();
                    etot += n;
                    r.push_back(n);
                }
                if (sw) r.push_back(sw->per_stratum[s]);
                t.rows.push_back(r);
            }
            std::vector<json> r{"total", "all", eval_formula("total", c.q)};
            if (fix) r.push_back(eval_formula("total.corrected", c.q));
            if (d != Depth::Formulas) r.push_back(etot);
            if (sw) r.push_back(sw->smooth_orbits);
            t.rows.push_back(r);
        }
        if (fix)
            t.notes.push_back("q = 1 mod 3: the N4_1 and N4_3 closed forms omit the elements (rotation, t) with t^3 = 1 != t; "
                              "the corrected column includes them");
    }
    if (sw && !sw->exact()) t.notes.push_back("sweep partition is NOT exact");
    emit(c, render(t, c.format));
    return sw && !sw->exact() ? 1 : 0;
}

int cmd_strata(const RunConfig& c) {
    Depth d = depth_of(c, Depth::Formulas);
    check_q(c.q, d != Depth::Formulas);
    Context ctx;
    if (d != Depth::Formulas || c.q <= 16) ctx = make_context(c);
    std::vector<FamilyCensus> cen;
    if (d != Depth::Formulas) cen = run_census(ctx, c, std::nullopt);
    Table t;
    t.title = "strata of M3";
    t.meta = {{"q", std::to_string(c.q)}, {"depth", depth_name(d)}, {"generators", generator_text(ctx)}};
    t.cols = {"stratum", "M3nh", "M3h", "M3", "M3nh formula", "M3h formula"};
    if (d != Depth::Formulas) t.cols.push_back("M3nh enumerated");
    long long sn = 0, sh = 0, sm = 0;
    Rational se = 0;
    bool ok = true;
    for (int s = 0; s < 5; s++) {
        std::string row = kRows[s];
        long long nh = eval_formula("mass.nh." + row, c.q), h = eval_formula("mass.h." + row, c.q),
                  m = eval_formula("mass." + row, c.q);
        sn += nh, sh += h, sm += m;
        std::vector<json> r{row, nh, h, m, count_formula("mass.nh." + row).text(), count_formula("mass.h." + row).text()};
        if (d != Depth::Formulas) {
            Rational e = 0;
            for (auto& x : cen)
                if (int(family_stratum(x.id)) == s) e += x.aut_mass();
            se += e;
            ok = ok && e == nh;
            r.push_back(rational_cell(e));
        }
        t.rows.push_back(r);
    }
    std::vector<json> r{"total", sn, sh, sm, count_formula("mass.nh").text(), count_formula("mass.h").text()};
    if (d != Depth::Formulas) r.push_back(rational_cell(se));
    t.rows.push_back(r);
    t.notes.push_back("M3h (hyperelliptic) entries are literature constants, not recomputed");
    t.notes.push_back("M3 = M3nh + M3h; total " + std::to_string(sm) + " = q^6 + q^5 + 1");
    emit(c, render(t, c.format));
    return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
    Depth d = depth_of(c, Depth::Enumerate);
    check_q(c.q, d != Depth::Formulas);
    VerifyReport rep;
    if (d == Depth::Formulas && c.q > 16) {
        rep.q = c.q;
        rep.depth = d;
        rep.generators = "none (formulas only)";
        rep.checks = formula_checks(c.q);
    } else {
        Context ctx = make_context(c);
        VerifyOptions o;
        o.depth = d;
        o.threads = c.threads;
        o.seed = c.seed;
        o.only = family_of(c);
        rep = verify(*ctx.fams, o);
    }
    if (c.format == "json") emit(c, report_json(rep));
    else if (c.format == "csv") emit(c, report_csv(rep));
    else emit(c, report_markdown(rep));
    return rep.ok() ? 0 : 1;
}

std::string header_line(const Context& ctx, const std::string& family) {
    json h;
    h["header"]["q"] = ctx.T->q();
    h["header"]["family"] = family;
    h["header"]["generators"] = generator_text(ctx);
    return h.dump() + "\n";
}

int cmd_enumerate(const RunConfig& c) {
    Depth d = depth_of(c, Depth::Enumerate);
    if (d == Depth::Formulas) throw UsageError("enumerate needs depth enumerate");
    check_q(c.q, true);
    auto only = family_of(c);
    Context ctx = make_context(c);
    std::ostringstream o;
    std::vector<CurveClassRecord> recs;
    FamilyCensusOptions fo;
    fo.threads = c.threads;
    for (FamilyId f : all_families()) {
        if (only && *only != f) continue;
        const Family& fam = (*ctx.fams)[f];
        for (auto& orb : census_family(fam, fo).orbits) recs.push_back(make_record(fam, orb));
    }
    if (c.format == "json") {
        o << header_line(ctx, only ? family_name(*only) : "all");
        for (auto& r : recs) o << record_json(r) << "\n";
    } else {
        Table t;
        t.title = "class representatives";
        t.meta = {{"q", std::to_string(c.q)}, {"family", only ? family_name(*only) : "all"},
                  {"generators", generator_text(ctx)}};
        t.cols = {"family", "Q", "aut_order", "aut_structure", "stratum", "lpoly"};
        for (auto& r : recs) {
            auto j = json::parse(record_json(r));
            t.rows.push_back({j["family"], j["Q"], r.aut_order, r.aut_structure, j["stratum"], j["lpoly"]});
        }
        emit(c, render(t, c.format));
        return 0;
    }
    emit(c, o.str());
    return 0;
}

struct Identified {
    CurveClassRecord rec;
    Mat3 witness;
    bool witness_ok = false;
};

Identified identify_form(const Context& ctx, const Form& F) {
    const Field& K = ctx.T->k();
    Identification id = reduce_to_family(*ctx.fams, F);
    const Family& fam = (*ctx.fams)[id.family];
    Orbit o;
    o.rep = id.Q;
    Identified r{make_record(fam, o), id.witness, false};
    r.witness_ok = form::proportional(K, form::substitute(K, F, id.witness), r.rec.quartic).has_value();
    return r;
}

// enumerate output (header plus records) in, same lines out after re-deriving each record
int reimport(const RunConfig& c, const Context& ctx, const std::string& path) {
    std::ifstream fin;
    std::istream* in = &std::cin;
    if (path != "-") {
        fin.open(path);
        if (!fin) throw UsageError("cannot read " + path);
        in = &fin;
    }
    std::ostringstream o;
    std::string line;
    long long n = 0, bad = 0;
    std::string gens = generator_text(ctx);
    while (std::getline(*in, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (!j.is_discarded() && j.is_object() && j.contains("header")) {
            auto& h = j["header"];
            if (h.value("q", 0LL) != c.q) throw UsageError("records are for q=" + h["q"].dump());
            if (h.value("generators", std::string()) != gens)
                throw UsageError("records were made with other generators; pass them with --generators");
            o << line << "\n";
            continue;
        }
        n++;
        CurveClassRecord r = parse_record_json(line, *ctx.T);
        const Family& fam = (*ctx.fams)[r.family];
        std::string why;
        if (!fam.in_domain(r.Q)) why = "Q outside the family domain";
        else {
            Orbit orb;
            orb.rep = r.Q;
            if (record_json(make_record(fam, orb)) != line) why = "record does not recompute";
            else if (c.q <= 4) {
                Identified id = identify_form(ctx, r.quartic);
                if (id.rec.family != r.family || id.rec.Q != r.Q) why = "quartic identifies as another class";
                else if (!id.witness_ok) why = "witness check failed";
            }
        }
        if (!why.empty()) {
            bad++;
            std::cerr << "record " << n << ": " << why << "\n";
        }
        o << line << "\n";
    }
    emit(c, o.str());
    std::cerr << n << " records, " << bad << " failed\n";
    return bad ? 1 : 0;
}

int cmd_identify(const RunConfig& c, const std::vector<std::string>& coeffs, const std::string& records) {
    check_q(c.q, true);
    Context ctx = make_context(c);
    if (!records.empty()) {
        if (!coeffs.empty()) throw UsageError("give either coefficients or --records");
        return reimport(c, ctx, records);
    }
    const Tower& T = *ctx.T;
    auto F = parse_quartic(coeffs, T.k());
    if (!F) throw UsageError("identify needs 15 hex coefficients in k (x^4, x^3y, x^3z, ..., z^4)");

    json j;
    j["q"] = c.q;
    j["generators"] = generator_text(ctx);
    j["input"] = to_hex(*F);
    if (auto sp = singular_point(T, *F)) {
        std::ostringstream p;
        p << std::hex << "(" << sp->p[0] << ":" << sp->p[1] << ":" << sp->p[2] << ")";
        j["error"] = "singular";
        j["singular_point"] = p.str();
        j["point_level"] = sp->level;
        if (c.format == "json") emit(c, j.dump(1) + "\n");
        else
            emit(c, "singular: point " + p.str() + " over k_" + std::to_string(sp->level) + " (hex coordinates)\n");
        return 3;
    }
    Table t;
    t.title = "identify";
    t.cols = {"field", "value"};
    auto row = [&](const std::string& k, const json& v) { t.rows.push_back({k, v}); };
    if (c.q > 4) {
        // no family search past q = 4: the PGL_3 scan is too large
        LPoly L = l_polynomial(T, *F);
        Stratum s = stratum_of(L, c.q);
        j["stratum"] = stratum_name(s);
        j["two_rank"] = two_rank(L);
        j["lpoly"] = L.c;
        j["note"] = "stratum only for q > 4";
    } else {
        Identified id = identify_form(ctx, *F);
        j["record"] = json::parse(record_json(id.rec));
        j["witness"] = to_hex(id.witness);
        j["witness_check"] = id.witness_ok;
    }
    int rc = j.contains("witness_check") && !j["witness_check"].get<bool>() ? 1 : 0;
    if (c.format == "json") {
        emit(c, j.dump(1) + "\n");
        return rc;
    }
    t.meta = {{"q", std::to_string(c.q)}, {"generators", j["generators"]}};
    for (auto& [k, v] : j.items()) {
        if (k == "q" || k == "generators") continue;
        if (k == "record")
            for (auto& [rk, rv] : v.items()) {
                if (rk != "q") row(rk, rv);
            }
        else row(k, v);
    }
    emit(c, render(t, c.format));
    return rc;
}

void add_common(CLI::App* s, RunConfig& c, bool with_depth = true, bool with_family = true) {
    s->add_option("--q", c.q, "field size, a power of 2")->required();
    if (with_depth) s->add_option("--depth", c.depth, "formulas-only | enumerate | exhaustive-sweep");
    if (with_family) s->add_option("--family", c.family, "family id, e.g. O_2, N4_1, S");
    s->add_option("--threads", c.threads, "worker threads (default BINQ_THREADS or hardware)");
    s->add_option("--format", c.format, "markdown | json | csv (enumerate defaults to json lines)");
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--seed", c.seed, "seed for sampled checks");
    s->add_option("--generators", c.generators, "generator table file (a describe line or any report)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification of smooth plane quartics over F_q, q = 2^n"};
    app.require_subcommand(1);
    RunConfig cfg;
    bool strata = false;
    std::vector<std::string> coeffs;
    std::string records;

    auto* count = app.add_subcommand("count", "class counts: formulas, and enumeration if the depth allows");
    add_common(count, cfg);
    count->add_flag("--strata", strata, "per-stratum classes and M3nh masses");
    auto* verify = app.add_subcommand("verify", "compare every formula with enumeration");
    add_common(verify, cfg);
    auto* enumerate = app.add_subcommand("enumerate", "class representatives as JSON lines");
    add_common(enumerate, cfg);
    auto* identify = app.add_subcommand("identify", "family, class and witness of a quartic");
    add_common(identify, cfg, false, false);
    identify->add_option("coeffs", coeffs, "15 hex coefficients, x^4 x^3y x^3z x^2y^2 ... z^4");
    identify->add_option("--records", records, "re-verify enumerate output (file or -)");
    auto* strat = app.add_subcommand("strata", "mass table of M3 by Newton stratum");
    add_common(strat, cfg, true, false);

    CLI11_PARSE(app, argc, argv);
    try {
        if (cfg.format.empty()) cfg.format = *enumerate ? "json" : "markdown";
        check_format(cfg);
        if (cfg.threads < 1) throw UsageError("--threads must be positive");
        if (*count) return cmd_count(cfg, strata);
        if (*verify) return cmd_verify(cfg);
        if (*enumerate) return cmd_enumerate(cfg);
        if (*identify) return cmd_identify(cfg, coeffs, records);
        if (*strat) return cmd_strata(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
