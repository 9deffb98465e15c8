#pragma once

#include <functional>
#include <string>
#include <vector>

#include "binq/forms.hpp"
#include "binq/plane.hpp"

namespace binq {

// H with l1 l2 l3 (l1+l2+l3) = xyz(x+y+z) + H^2, l_i the rows of M (entries 0/1).
Quad cocycle_H(const Mat3& M);

// gamma(Q) = Q^(gamma^-1) + H_(gamma^-1) for gamma in Gamma, as an affine map with 0/1 entries.
const AffineQ& twisted_map(int g);
Quad twisted_act(int g, const Quad& Q);

// Q is nonsingular for the split model xyz(x+y+z) + Q^2 (over any field).
bool nonsingular_split(const Quad& Q);

// order of the class representative (= level of D_gamma)
int class_level(int cls);
// D_gamma over k_level, from explicit parameters
std::vector<Quad> descent_set(const Tower& T, int cls);
// same set from solving gamma(Q) = sigma(Q) as an affine system over F2, then filtering
std::vector<Quad> descent_set_by_solving(const Tower& T, int cls);
long long descent_size_formula(int cls, long long q);

struct DescentDatum {
    int level = 1;  // Q lives in k_level
    Quad Q;
    int gamma = 0;  // element of Gamma
};
// some rho in Gamma with rho(Q1) = Q2 and gamma2 = rho gamma1 rho^-1
bool descent_equivalent(const Tower& T, const DescentDatum& a, const DescentDatum& b);

// A finite group (elements 0..order-1) acting on a finite set of sextuples.
struct GroupAction {
    std::string label;
    int order = 1;
    std::vector<Quad> points;  // sorted, distinct
    std::function<Quad(int, const Quad&)> act;
};
struct Orbit {
    Quad rep;  // least member
    long long size = 0;
    long long stabilizer = 0;
    std::vector<int> stab;  // stabilizer elements of rep
};
void sort_points(std::vector<Quad>& pts);
// |X(g)| for every g
std::vector<long long> fixed_point_counts(const GroupAction& A, int threads);
long long burnside_count(const GroupAction& A, int threads);
// throws if the action leaves the point set
std::vector<Orbit> orbits(const GroupAction& A, int threads);

// Gamma_gamma acting on D_gamma by the twisted action
GroupAction descent_action(const Tower& T, int cls);

// Name of a small group from the multiset of element orders ("1", "C2", "D8", "S3", "C2^3", ...).
std::string structure_name(const std::vector<int>& element_orders);

std::vector<std::string> to_hex(const Quad& Q);
std::string orbit_report_json(const std::string& gamma, const Orbit& o);

int default_threads();
void parallel_for(long long n, int threads, const std::function<void(long long, long long, int)>& body);

}  // namespace binq
