#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "binq/descent.hpp"
#include "binq/forms.hpp"
#include "binq/generators.hpp"
#include "binq/quartic.hpp"

namespace binq {

enum class FamilyId { O1 = 0, O2, O3, O4, O7_0, O7_1, N4_1, N4_2, N4_3, N2_1, N2_0, N1_1, S };
inline constexpr int kFamilyCount = 13;

const std::vector<FamilyId>& all_families();
// "O_1", "O_2", "O_3", "O_4", "O_7_0", "O_7_1", "N4_1", "N4_2", "N4_3", "N2_1", "N2_0", "N1_1", "S"
std::string family_name(FamilyId f);
// accepts the names above, case-insensitive, with or without '_' / ',' separators
std::optional<FamilyId> parse_family(const std::string& s);
Stratum family_stratum(FamilyId f);
int family_bitangents(FamilyId f);
// closed-form number of classes; throws if a division is not exact
long long family_count_formula(FamilyId f, long long q);
// same, with the N4_1 / N4_3 Burnside sums including the elements (rotation, t), t != 1
long long family_count_corrected(FamilyId f, long long q);

// For a projectivity g with R^(g^-1) = lambda R + H^2, the map
// Q -> (Q^(g^-1) + H) / sqrt(lambda), so that g(C_Q) = C_(g(Q)) where C_Q: Q^2 = R.
struct ModelTransform {
    AffineQ map;
    u64 lambda = 1;
};
std::optional<ModelTransform> model_transform(const Field& F, const Form& R, const Mat3& g);

struct AutDescription {
    long long order = 1;
    std::string structure;  // empty if the table does not name it
};

class Family {
public:
    Family(const Tower& T, const Generators& gen, FamilyId id);

    FamilyId id() const { return id_; }
    std::string name() const { return family_name(id_); }
    const Tower& tower() const { return *T_; }
    int q_level() const { return qlevel_; }     // where Q lives (7 for O_7, else 1)
    int line_level() const { return llevel_; }  // common level of the bitangents
    const Form& R() const { return R_; }        // at q_level
    const std::vector<Vec3>& bitangents() const { return lines_; }  // at line_level, sorted

    // parameters before normalization: k^6, or Q0 + k^6 for O_7
    std::vector<Quad> raw_space() const;
    bool admissible(const Quad& Q) const;
    bool in_domain(const Quad& Q) const;
    std::vector<Quad> enumerate() const;  // sorted
    long long domain_size() const;
    Form quartic(const Quad& Q) const;    // Q^2 + R over k

    int group_order() const { return order_; }
    // element indices: N2_1 2 t_index + (u != 0), N2_0 and N1_1 t_index, S t_index q + v,
    // t running over mu_3 (resp. mu_9) in increasing order, so t = 1 comes first
    Quad act(int g, const Quad& Q) const;
    const std::vector<u64>& mu3() const { return mu3_; }
    const std::vector<u64>& mu9() const { return mu9_; }
    // the projectivity over k acting as g on C_Q
    Mat3 group_matrix(int g, const Quad& Q) const;
    GroupAction action() const;

    std::optional<AutDescription> aut_table(const Quad& Q) const;
    // as aut_table, with the N4_1 / N4_3 cases fixed: equalities allowed in the C2 cases,
    // and the C3 fixed by (rotation, t) with t a nontrivial cube root of unity
    std::optional<AutDescription> aut_table_corrected(const Quad& Q) const;
    AutDescription stabilizer_aut(const Quad& Q) const;

    // particular solution of Q + sigma(Q) = sqrt(R + sigma(R)) (zero unless O_7)
    const Quad& base_point() const { return Q0_; }
    // Q = l^2 + l'^2 + l''^2 + l l' + l' l'' + l l'' (O_7 only)
    Quad klein_twist() const;

private:
    const Tower* T_;
    Generators gen_;
    FamilyId id_;
    int qlevel_ = 1, llevel_ = 1;
    Form R_;
    std::vector<Vec3> lines_, fano_pts_;
    std::array<Vec3, 3> triple_{};  // l, l', l'' for the O families
    Quad Q0_;
    std::vector<u64> reps_, mu3_, mu9_;
    int order_ = 1;
    std::vector<Mat3> mats_;
    std::vector<AffineQ> maps_;
    // N2_1: transforms of gamma_(t,u), index t_index * q + u
    std::vector<Mat3> n2_mats_;
    std::vector<AffineQ> n2_maps_;

    void build_o_family();
    void build_n4_family();
    void add_element(const Mat3& M);
};

// All thirteen families over one field, sharing one generator set.
class FamilyTable {
public:
    explicit FamilyTable(const Tower& T);
    FamilyTable(const Tower& T, const Generators& gen);
    const Tower& tower() const { return *T_; }
    const Generators& generators() const { return gen_; }
    const Family& operator[](FamilyId f) const { return *fam_[int(f)]; }

private:
    const Tower* T_;
    Generators gen_;
    std::vector<std::unique_ptr<Family>> fam_;
};

struct Identification {
    FamilyId family;
    Quad Q;         // least member of its class in the family
    Mat3 witness;   // over k, with F^witness proportional to the model quartic
};
// F smooth over k. Searches PGL_3(k) for maps carrying the bitangents of F onto those of
// a model, so only practical for q <= 4. Throws std::domain_error on singular input.
Identification reduce_to_family(const FamilyTable& fams, const Form& F);

// Quotient of an S-model by its involution: affine model C z^4 + Fz^2 + z = y^3 + D y^2 + A
// (capitals are the squares of the coefficients of Q), v a nonzero root of C z^4 + F z^2 + z,
// and the elliptic curve C u^2 + u / v = y^3 + D y^2 + A with u = z (z + v).
struct SupersingularQuotient {
    int level = 1;  // v lives in k_level
    u64 C = 0, F = 0, D = 0, A = 0, v = 0, vinv = 0;
};
SupersingularQuotient supersingular_quotient(const Tower& T, const Quad& Q);
// C u^2 + u/v = C z^4 + F z^2 + z after u = z (z + v), as polynomials in z over k_level
bool quotient_identity_holds(const Tower& T, const SupersingularQuotient& s);
// (x, y, z) -> (x, y, z + v x) preserves the quartic
bool quotient_involution_holds(const Tower& T, const Quad& Q, const SupersingularQuotient& s);
// the cubic model u^2 + ... is smooth: C != 0 and v != 0
bool quotient_is_elliptic(const SupersingularQuotient& s);

}  // namespace binq
