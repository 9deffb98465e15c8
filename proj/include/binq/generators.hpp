#pragma once

#include <string>
#include <vector>

#include "binq/tower.hpp"

namespace binq {

struct PowerClasses {
    std::vector<u64> reps;  // fixed coset representatives of k*/(k*)^e
    std::vector<u64> mu;    // e-th roots of unity in k
};
PowerClasses power_class_data(const Tower& T, int e);

// ker(x -> c x^2 + f x + sqrt(x)) on k, sorted
std::vector<u64> additive_kernel(const Tower& T, u64 c, u64 f);

struct Septic {
    u64 a = 0, b = 0, c = 0;  // x^7 + a x^3 + b x + c over k
};
struct SepticSets {
    std::vector<Septic> s0, s1;
};
SepticSets septic_sets(const Tower& T);
bool septic_irreducible(const Tower& T, const Septic& f);

// Every element is checked against its defining equation on construction.
struct Generators {
    u64 r = 0;       // k: trace one, not in AS(k)
    u64 u = 0;       // k2: u^2 + u = r
    // cubic generator with v^3 + v^2 = s, t^2 + t + 1 = 1/s
    u64 s3 = 0, t3 = 0, v3 = 0;
    // cubic generator with v^3 + v = s, t^2 + t + 1 = 1/s
    u64 s3b = 0, t3b = 0, v3b = 0;
    // quartic generator: w^4 + (t+t^2) w^2 + t^2 w = 1, 1/t not in AS(k)
    u64 t4 = 0, w = 0, alpha = 0;
    // septic generators of cases 0 and 1
    Septic f0, f1;
    u64 zeta0 = 0, zeta1 = 0;

    std::string describe(const Tower& T) const;
};
Generators find_family_generators(const Tower& T);
// throws std::invalid_argument naming the first failed defining equation
void check_generators(const Tower& T, const Generators& g);
// the format of Generators::describe
Generators parse_generators(const Tower& T, const std::string& text);

}  // namespace binq
