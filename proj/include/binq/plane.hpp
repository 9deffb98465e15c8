#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "binq/forms.hpp"

namespace binq {

// GL(3, F2) = PGL(3, F2), 168 elements, as a precomputed table.
class GammaGroup {
public:
    enum ClassId { C1 = 0, C2, C3, C4, C7_0, C7_1 };
    static const GammaGroup& get();

    int size() const { return int(el_.size()); }
    const Mat3& operator[](int i) const { return el_[i]; }
    int index(const Mat3& M) const;  // entries in {0,1}; -1 if not invertible
    int mul(int a, int b) const { return mul_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int identity() const { return id_; }
    int order(int a) const { return order_[a]; }
    int class_of(int a) const { return cls_[a]; }
    // class representative gamma_2, ... as an element index
    int rep(int cls) const { return rep_[cls]; }
    const std::vector<int>& centralizer(int a) const { return cent_[a]; }
    const std::vector<int>& class_members(int cls) const { return members_[cls]; }
    static const char* class_name(int cls);

    // named elements used in tables: tau and rho generating the centralizer of gamma_2
    int tau() const { return tau_; }
    int rho() const { return rho_; }

private:
    GammaGroup();
    std::vector<Mat3> el_;
    std::array<int, 512> code_{};
    std::vector<std::vector<int>> mul_;
    std::vector<int> inv_, order_, cls_;
    std::vector<std::vector<int>> cent_;
    std::array<int, 6> rep_{};
    std::array<std::vector<int>, 6> members_;
    int id_ = 0, tau_ = 0, rho_ = 0;
};

// Class representatives as matrices.
Mat3 gamma_rep(int cls);

// Canonical 7-line set generated by three independent lines, sorted.
std::vector<Vec3> fano_closure(const Field& F, const Vec3& l1, const Vec3& l2, const Vec3& l3);

// The unique projectivity sending src[i] to dst[i] (points in general position).
Mat3 map_from_correspondence(const Field& F, const std::array<Vec3, 4>& src, const std::array<Vec3, 4>& dst);

// All points of P^2(F), canonical, in lexicographic order of coordinates.
std::vector<Vec3> projective_points(const Field& F);
// All of PGL(3, F), normalized. Size q^3 (q^3-1)(q^2-1).
std::vector<Mat3> pgl3(const Field& F);

// F2-linear action of a matrix over F2 on quartic coefficient vectors over F2,
// as 15 column bitmasks: bit i of col[j] is coefficient i of (monomial j)^M.
struct BinaryQuarticMap {
    std::array<uint32_t, 15> col{};
    uint32_t apply(uint32_t f) const {
        uint32_t r = 0;
        while (f) {
            int j = __builtin_ctz(f);
            r ^= col[j];
            f &= f - 1;
        }
        return r;
    }
};
BinaryQuarticMap binary_quartic_map(const Mat3& M);

std::string to_hex(const Mat3& M);

}  // namespace binq
