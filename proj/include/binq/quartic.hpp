#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "binq/forms.hpp"

namespace binq {

enum class Stratum { Ordinary = 0, Rank2, Rank1, Type13, Supersingular };
const char* stratum_name(Stratum s);
std::optional<Stratum> parse_stratum(const std::string& s);
// 7, 4, 2, 1 bitangents <-> 2-rank 3, 2, 1, 0
int bitangents_for_rank(int rank);

// Right-hand sides xyz(x+y+z), xyz(y+z), xy(y^2+xz), x(y^3+x^2 z), keyed by bitangent count.
Form wall_rhs(int bitangents);
Form wall_model(const Field& F, int bitangents, const Quad& Q);
bool is_admissible(const Field& F, int bitangents, const Quad& Q);
std::optional<Quad> quartic_sqrt(const Field& F, const Form& f);

struct SingularPoint {
    int level = 1;  // coordinates live in k_level
    Vec3 p{};
};
// F over k. Returns a singular point over some k_d (d <= 6) or nothing if F is smooth.
std::optional<SingularPoint> singular_point(const Tower& T, const Form& F);
inline bool is_smooth(const Tower& T, const Form& F) { return !singular_point(T, F).has_value(); }

// Binary quartic c4 s^4 + c3 s^3 t + ... + c0 t^4 as {c4, c3, c2, c1, c0}.
std::array<u64, 5> restrict_to_line(const Field& F, const Form& f, const Vec3& line);
// restriction is a nonzero square
bool is_bitangent(const Field& F, const Form& f, const Vec3& line);

struct Bitangent {
    int level = 1;  // minimal field of definition
    Vec3 line{};    // normalized, coordinates in k_level
};
// All bitangents of F (over k) defined over k_d, d in {1,2,3,4,7}, d <= max_degree.
std::vector<Bitangent> find_bitangents(const Tower& T, const Form& F, int max_degree = 7);
// lcm of the levels, and whether the lines (embedded there) form a Fano plane
int common_level(const std::vector<Bitangent>& b);
bool is_fano(const Tower& T, const std::vector<Bitangent>& b);

// Points of V(F) in P^2(k_i).
long long count_points(const Tower& T, const Form& F, int i);

struct LPoly {
    std::array<long long, 7> c{};  // 1, a1, a2, a3, q a2, q^2 a1, q^3
    bool operator==(const LPoly&) const = default;
};
// throws std::domain_error when the counts do not come from an integral L-polynomial
LPoly l_polynomial(long long N1, long long N2, long long N3, long long q);
LPoly l_polynomial(const Tower& T, const Form& F);
using Slope = boost::rational<long long>;
std::vector<Slope> newton_slopes(const LPoly& L, long long q);
int two_rank(const LPoly& L);
Stratum stratum_of(const LPoly& L, long long q);

// resultant in t of two polynomials whose t^j coefficients are polynomials in s
Poly resultant(const Field& F, const std::vector<Poly>& a, const std::vector<Poly>& b);

std::string to_hex(const Form& f);
std::optional<Form> parse_quartic(const std::vector<std::string>& hex, const Field& F);

}  // namespace binq
