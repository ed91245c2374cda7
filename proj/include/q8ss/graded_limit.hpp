#pragma once
#include <array>
#include <map>
#include <tuple>

#include "cohomology.hpp"

namespace q8ss {

// Cochain assembly for sweeps over many coefficient levels.  The audited
// module builder re-verifies the group law per level, which is quadratic in
// the module rank; a window sweep touches levels far above the engine
// defaults, so this cache assembles the same matrices from the audited
// per-generator action and keeps only a sliding band of levels.
class ActionCache {
public:
    explicit ActionCache(int precision) : ring_(precision) {}

    const WRing& ring() const { return ring_; }

    const std::array<Mat<WRing>, 8>& actions(int n, Sector sec)
    {
        auto key = std::make_pair(n, (int)sec);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            for (auto c = cache_.begin(); c != cache_.end();)
                c = (c->first.first < n - 24) ? cache_.erase(c)
                                              : std::next(c);
            std::array<Mat<WRing>, 8> m;
            for (int g = 0; g < 8; ++g)
                m[size_t(g)] = action_matrix(ring_, gr(Q8Elt(g)), n, sec);
            it = cache_.emplace(key, std::move(m)).first;
        }
        return it->second;
    }

    // matrix of the degree-f cochain differential at coefficient level n
    Mat<WRing> cochain_map(int f, int n, Sector sec)
    {
        ChainMatrix d = resolution_differential(f + 1);
        const auto& act = actions(n, sec);
        int nb = n + 1;
        Mat<WRing> D(d.cols * nb, d.rows * nb);
        for (int j = 0; j < d.cols; ++j)
            for (int i = 0; i < d.rows; ++i) {
                const GroupRing& r = d.at(i, j);
                if (r.is_zero())
                    continue;
                for (int g = 0; g < 8; ++g) {
                    if (!r.c[g])
                        continue;
                    Witt cg = Witt(r.c[g]).reduced(ring_.N);
                    const Mat<WRing>& ag = act[size_t(g)];
                    for (int a = 0; a < nb; ++a)
                        for (int b = 0; b < nb; ++b) {
                            auto& dst = D.at(j * nb + a, i * nb + b);
                            dst = ring_.add(dst, ring_.mul(cg, ag.at(a, b)));
                        }
                }
            }
        return D;
    }

private:
    WRing ring_;
    std::map<std::pair<int, int>, std::array<Mat<WRing>, 8>> cache_;
};

// 2-adic graded profile of the window image in the coefficient cohomology.
// A bidegree of the localized algebra is compared at level n = t + 4M: its
// classes are the stable image of H^f at level n inside level n + 4L, and
// profile(f, n, sec)[w] is the F4-dimension of the w-th graded piece
// 2^w im / 2^{w+1} im of that image, computed at working precision and
// reported for w < 6.  Tower heights on the presentation side must
// reproduce these six numbers bidegree by bidegree.
class GradedLimit {
public:
    explicit GradedLimit(int precision = 12, int L = 4)
        : N_(precision), L_(L), cache_(precision)
    {
    }

    std::array<int, 6> profile(int f, int n, Sector sec)
    {
        PrecisionScope scope(N_);
        const WRing& ring = cache_.ring();
        int fr = cohdetail::reduced_degree(f);
        const Level& src = level(fr, n, sec);
        const Level& tgt = level(fr, n + 4 * L_, sec);
        std::array<int, 6> out{};
        if (src.orders.empty() || tgt.orders.empty())
            return out;

        StPoly DL = StPoly::monomial(0, 0);
        for (int i = 0; i < L_; ++i)
            DL = DL * class_D();

        // coordinates of the multiplied generators in the target summands
        if (tgt.slim)
            throw std::logic_error("graded limit target level already slim; "
                                   "sweep levels in ascending order");
        Mat<WRing> C((int)tgt.orders.size(), (int)src.orders.size());
        Mat<WRing> check = cache_.cochain_map(fr, n + 4 * L_, sec);
        for (int k = 0; k < (int)src.orders.size(); ++k) {
            std::vector<Witt> z(size_t(src.gens.rows));
            for (int i = 0; i < src.gens.rows; ++i)
                z[size_t(i)] = src.gens.at(i, k);
            std::vector<Witt> zz = multiply_cochain(DL, n, z);
            for (auto& v : mat_apply(ring, check, zz))
                if (!ring.is_zero(v))
                    throw std::runtime_error(
                        "window image is not a cocycle");
            auto co = tgt.hom.coords(ring, zz);
            for (size_t i = 0; i < co.size(); ++i)
                C.at((int)i, k) = co[i];
        }

        // log4 of |2^w im| from the presentation [2^w C | tower relations];
        // the graded dimension is the drop between consecutive w.
        std::array<long long, 8> logsize{};
        for (int w = 0; w <= 6; ++w) {
            int rows = C.rows;
            int tcols = 0;
            for (int e : tgt.orders)
                if (e < ring.nil_val())
                    ++tcols;
            Mat<WRing> M(rows, C.cols + tcols);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < C.cols; ++j)
                    M.at(i, j) = ring.shift(C.at(i, j), w);
            int c = C.cols;
            for (int i = 0; i < rows; ++i)
                if (tgt.orders[size_t(i)] < ring.nil_val())
                    M.at(i, c++).a = int64_t(1) << tgt.orders[size_t(i)];
            auto dv = snf(ring, M).divisors;
            long long ambient = 0, coker = 0;
            for (int i = 0; i < rows; ++i) {
                ambient += std::min(tgt.orders[size_t(i)], ring.nil_val());
                int d = (i < (int)dv.size()) ? dv[size_t(i)] : ring.nil_val();
                coker += std::min(d, ring.nil_val());
            }
            logsize[size_t(w)] = ambient - coker;
        }
        for (int w = 0; w < 6; ++w)
            out[size_t(w)] = int(logsize[size_t(w)] - logsize[size_t(w) + 1]);

        // levels strictly below the current source have served both roles
        for (auto& [key, lv] : levels_)
            if (std::get<1>(key) < n && !lv.slim) {
                lv.hom = Homology<WRing>{};
                lv.slim = true;
            }
        return out;
    }

private:
    struct Level {
        std::vector<int> orders;
        Mat<WRing> gens;
        Homology<WRing> hom; // cleared once the level is only a source
        bool slim = false;
    };

    const Level& level(int fr, int n, Sector sec)
    {
        auto key = std::make_tuple(fr, n, (int)sec);
        auto it = levels_.find(key);
        if (it != levels_.end())
            return it->second;
        for (auto c = levels_.begin(); c != levels_.end();)
            c = (std::get<1>(c->first) < n - 4 * L_ - 4) ? levels_.erase(c)
                                                         : std::next(c);
        const WRing& ring = cache_.ring();
        Mat<WRing> B = cache_.cochain_map(fr, n, sec);
        Mat<WRing> A = (fr == 0) ? Mat<WRing>(B.cols, 0)
                                 : cache_.cochain_map(fr - 1, n, sec);
        Level lv;
        lv.hom = homology(ring, B, A, 3);
        for (auto& a : lv.hom.alarms)
            throw std::runtime_error("graded limit level (" +
                                     std::to_string(fr) + "," +
                                     std::to_string(n) + "): " + a);
        lv.orders = lv.hom.orders;
        lv.gens = lv.hom.gens;
        return levels_.emplace(key, std::move(lv)).first->second;
    }

    int N_ = 12;
    int L_ = 4;
    ActionCache cache_;
    std::map<std::tuple<int, int, int>, Level> levels_;
};

} // namespace q8ss
