#pragma once
#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace q8ss {

// Quaternion group elements encoded as 2*axis + neg, axes ordered 1, i, j, k:
//   0:1  1:-1  2:i  3:-i  4:j  5:-j  6:k  7:-k
using Q8Elt = uint8_t;

namespace q8detail {
// axis products: row*col -> (axis, negative?)
struct AxisMul {
    uint8_t axis;
    bool neg;
};
inline constexpr AxisMul axis_mul[4][4] = {
    {{0, false}, {1, false}, {2, false}, {3, false}},
    {{1, false}, {0, true}, {3, false}, {2, true}},
    {{2, false}, {3, true}, {0, true}, {1, false}},
    {{3, false}, {2, false}, {1, true}, {0, true}},
};
} // namespace q8detail

inline Q8Elt q8_mul(Q8Elt g, Q8Elt h)
{
    auto m = q8detail::axis_mul[g >> 1][h >> 1];
    unsigned neg = (g & 1) ^ (h & 1) ^ unsigned(m.neg);
    return Q8Elt((m.axis << 1) | neg);
}

inline Q8Elt q8_inv(Q8Elt g)
{
    // axis elements square to -1, so the inverse is the negation; +-1 are involutions
    if ((g >> 1) == 0)
        return g;
    return Q8Elt(g ^ 1u);
}

inline Q8Elt q8_neg(Q8Elt g) { return Q8Elt(g ^ 1u); }

inline const char* q8_name(Q8Elt g)
{
    static const char* names[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    return names[g];
}

inline constexpr Q8Elt kOne = 0, kMinusOne = 1, kI = 2, kJ = 4, kK = 6;

// Sign characters; kernels are the three C4 subgroups.
enum class Sector { integer, sigma_i, sigma_j, sigma_k };

inline int sector_sign(Sector s, Q8Elt g)
{
    uint8_t axis = g >> 1;
    switch (s) {
    case Sector::integer: return 1;
    case Sector::sigma_i: return (axis == 0 || axis == 1) ? 1 : -1;
    case Sector::sigma_j: return (axis == 0 || axis == 2) ? 1 : -1;
    case Sector::sigma_k: return (axis == 0 || axis == 3) ? 1 : -1;
    }
    return 1;
}

inline std::string sector_name(Sector s)
{
    switch (s) {
    case Sector::integer: return "integer";
    case Sector::sigma_i: return "sigma_i";
    case Sector::sigma_j: return "sigma_j";
    case Sector::sigma_k: return "sigma_k";
    }
    return "?";
}

// C4 subgroups by generating axis, with the fixed coset representative used
// for restriction and transfer ({1, j} for <i>, {1, i} for <j> and <k>).
struct C4Subgroup {
    Q8Elt gen;
    std::array<Q8Elt, 4> elements;
    Q8Elt coset_rep;
    std::string name;
};

inline C4Subgroup c4_subgroup(Q8Elt axis_gen)
{
    C4Subgroup s;
    s.gen = axis_gen;
    s.elements = {kOne, axis_gen, kMinusOne, q8_neg(axis_gen)};
    s.coset_rep = (axis_gen == kI) ? kJ : kI;
    s.name = std::string("C4<") + q8_name(axis_gen) + ">";
    return s;
}

// Integral group ring Z[Q8], dense over the 8 elements.
struct GroupRing {
    std::array<int64_t, 8> c{};

    GroupRing() = default;
    static GroupRing unit(Q8Elt g, int64_t n = 1)
    {
        GroupRing r;
        r.c[g] = n;
        return r;
    }
    static GroupRing all_elements()
    {
        GroupRing r;
        r.c.fill(1);
        return r;
    }
    bool is_zero() const
    {
        for (auto v : c)
            if (v)
                return false;
        return true;
    }
    friend GroupRing operator+(const GroupRing& x, const GroupRing& y)
    {
        GroupRing r;
        for (int g = 0; g < 8; ++g)
            r.c[g] = x.c[g] + y.c[g];
        return r;
    }
    friend GroupRing operator-(const GroupRing& x, const GroupRing& y)
    {
        GroupRing r;
        for (int g = 0; g < 8; ++g)
            r.c[g] = x.c[g] - y.c[g];
        return r;
    }
    friend GroupRing operator*(const GroupRing& x, const GroupRing& y)
    {
        GroupRing r;
        for (int g = 0; g < 8; ++g) {
            if (!x.c[g])
                continue;
            for (int h = 0; h < 8; ++h)
                if (y.c[h])
                    r.c[q8_mul(Q8Elt(g), Q8Elt(h))] += x.c[g] * y.c[h];
        }
        return r;
    }
    std::string str() const
    {
        std::string s;
        for (int g = 0; g < 8; ++g) {
            if (!c[g])
                continue;
            if (!s.empty() && c[g] > 0)
                s += "+";
            if (c[g] == -1)
                s += "-";
            else if (c[g] != 1)
                s += std::to_string(c[g]) + "*";
            s += q8_name(Q8Elt(g));
        }
        return s.empty() ? "0" : s;
    }
};

inline GroupRing gr(Q8Elt g) { return GroupRing::unit(g); }
inline GroupRing gr_one() { return GroupRing::unit(kOne); }

// Matrix of group-ring coefficients: d(x_j) = sum_i entry(i,j) x_i.
struct ChainMatrix {
    int rows = 0, cols = 0;
    std::vector<GroupRing> a;
    ChainMatrix() = default;
    ChainMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
    GroupRing& at(int i, int j) { return a[size_t(i) * cols + j]; }
    const GroupRing& at(int i, int j) const { return a[size_t(i) * cols + j]; }
};

// Free period-4 resolution of Z over Z[Q8]; ranks 1,2,2,1 repeating.
inline int resolution_rank(int n)
{
    assert(n >= 0);
    int m = n % 4;
    return (m == 1 || m == 2) ? 2 : 1;
}

// Differential X_n -> X_{n-1} for n >= 1.
inline ChainMatrix resolution_differential(int n)
{
    assert(n >= 1);
    ChainMatrix d(resolution_rank(n - 1), resolution_rank(n));
    switch (n % 4) {
    case 1:
        // d b_1 = (i-1) a, d b_2 = (j-1) a
        d.at(0, 0) = gr(kI) - gr_one();
        d.at(0, 1) = gr(kJ) - gr_one();
        break;
    case 2:
        // d c_1 = (1+i) b_1 - (1+j) b_2, d c_2 = (1+ij) b_1 + (i-1) b_2
        d.at(0, 0) = gr_one() + gr(kI);
        d.at(1, 0) = GroupRing() - gr_one() - gr(kJ);
        d.at(0, 1) = gr_one() + gr(kK);
        d.at(1, 1) = gr(kI) - gr_one();
        break;
    case 3:
        // d e = (i-1) c_1 - (ij-1) c_2
        d.at(0, 0) = gr(kI) - gr_one();
        d.at(1, 0) = gr_one() - gr(kK);
        break;
    case 0:
        // d a_{k+1} = (sum over Q8) e_k
        d.at(0, 0) = GroupRing::all_elements();
        break;
    }
    return d;
}

// Coefficients of the composite d_{n-1} . d_n; zero iff the complex squares to zero.
inline ChainMatrix compose_chain(const ChainMatrix& dn1, const ChainMatrix& dn)
{
    assert(dn1.cols == dn.rows);
    ChainMatrix r(dn1.rows, dn.cols);
    for (int l = 0; l < dn1.rows; ++l)
        for (int j = 0; j < dn.cols; ++j) {
            GroupRing acc;
            // module convention: coefficients multiply on the left,
            // d(d x_j) = sum_i r_ij * d(x_i)
            for (int i = 0; i < dn.rows; ++i)
                acc = acc + dn.at(i, j) * dn1.at(l, i);
            r.at(l, j) = acc;
        }
    return r;
}

// Rewrites a free Z[Q8]-matrix over a subgroup H with coset representatives
// reps (reps[0] must be 1): basis x_j expands to {rho x_j}, and each entry
// splits as sum_rho p_rho * rho with p_rho supported on H.
struct SubgroupView {
    std::vector<Q8Elt> elements; // subgroup elements
    std::vector<Q8Elt> reps;     // coset representatives, reps[0] == 1
    std::string name;
};

inline SubgroupView c4_view(Q8Elt axis_gen)
{
    C4Subgroup s = c4_subgroup(axis_gen);
    SubgroupView v;
    v.elements.assign(s.elements.begin(), s.elements.end());
    v.reps = {kOne, s.coset_rep};
    v.name = s.name;
    return v;
}

inline SubgroupView c2_center_view()
{
    SubgroupView v;
    v.elements = {kOne, kMinusOne};
    v.reps = {kOne, kI, kJ, kK};
    v.name = "C2<-1>";
    return v;
}

inline bool in_subgroup(const SubgroupView& H, Q8Elt g)
{
    for (auto e : H.elements)
        if (e == g)
            return true;
    return false;
}

// r = sum_rho part[rho] * rho with part[rho] in Z[H].
inline std::vector<GroupRing> split_over_subgroup(const SubgroupView& H, const GroupRing& r)
{
    std::vector<GroupRing> parts(H.reps.size());
    for (int g = 0; g < 8; ++g) {
        if (!r.c[g])
            continue;
        bool placed = false;
        for (size_t t = 0; t < H.reps.size(); ++t) {
            Q8Elt h = q8_mul(Q8Elt(g), q8_inv(H.reps[t]));
            if (in_subgroup(H, h)) {
                parts[t].c[h] += r.c[g];
                placed = true;
                break;
            }
        }
        assert(placed);
        (void)placed;
    }
    return parts;
}

// The restricted chain matrix: ranks multiply by the number of cosets, and the
// new basis of X_n is {x_0, rho x_0, x_1, rho x_1, ...} (reps innermost).
inline ChainMatrix restrict_chain(const ChainMatrix& d, const SubgroupView& H)
{
    int f = int(H.reps.size());
    ChainMatrix r(d.rows * f, d.cols * f);
    for (int j = 0; j < d.cols; ++j)
        for (int t = 0; t < f; ++t) {
            // d(rho x_j) = sum_i (rho * entry(i,j)) x_i
            for (int i = 0; i < d.rows; ++i) {
                GroupRing e = GroupRing::unit(H.reps[t]) * d.at(i, j);
                auto parts = split_over_subgroup(H, e);
                for (int u = 0; u < f; ++u)
                    r.at(i * f + u, j * f + t) = r.at(i * f + u, j * f + t) + parts[u];
            }
        }
    return r;
}

} // namespace q8ss
