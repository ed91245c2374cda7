#pragma once
#include <q8ss/class_algebra.hpp>
#include <q8ss/graded_limit.hpp>

#include <map>
#include <tuple>

// Independent dimension oracle for the first-page algebra.  A class of the
// localized first page is born by coefficient level M when it is in the
// image of the mod-2 cohomology of the degree-(t+4M) coefficient module;
// that image is computed directly, as the rank of multiplication by a high
// power of the invertible invariant form on cochain representatives.  The
// presentation side must reproduce these ranks bidegree by bidegree.

namespace q8ss::testutil {

inline ActionCache& mod2_cache()
{
    static ActionCache cache(1);
    return cache;
}

// rank of  H^f(Sym^n / 2, twist) --*D^L--> H^f(Sym^{n+4L} / 2, twist),
// computed at the period-reduced resolution degree.
inline int image_rank(int f, int n, Sector sec, int L)
{
    static std::map<std::tuple<int, int, int, int>, int> cache;
    int fr = cohdetail::reduced_degree(f);
    auto key = std::make_tuple(fr, n, (int)sec, L);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;

    PrecisionScope scope(1);
    ActionCache& mats = mod2_cache();
    const WRing& ring = mats.ring();
    auto hom_at = [&](int nn) {
        Mat<WRing> B = mats.cochain_map(fr, nn, sec);
        Mat<WRing> A = (fr == 0) ? Mat<WRing>(B.cols, 0)
                                 : mats.cochain_map(fr - 1, nn, sec);
        return homology(ring, B, A, 0);
    };
    auto Hs = hom_at(n);
    auto Ht = hom_at(n + 4 * L);
    int rank = 0;
    if (!Hs.orders.empty() && !Ht.orders.empty()) {
        StPoly DL = StPoly::monomial(0, 0);
        for (int i = 0; i < L; ++i)
            DL = DL * class_D();
        Mat<WRing> M((int)Ht.orders.size(), (int)Hs.orders.size());
        for (size_t k = 0; k < Hs.orders.size(); ++k) {
            std::vector<Witt> z(size_t(Hs.gens.rows));
            for (int i = 0; i < Hs.gens.rows; ++i)
                z[size_t(i)] = Hs.gens.at(i, (int)k);
            std::vector<Witt> zz = multiply_cochain(DL, n, z);
            if (!Ht.in_kernel(ring, zz, 0))
                throw std::runtime_error(
                    "multiplication image is not a cocycle");
            auto co = Ht.coords(ring, zz);
            for (size_t i = 0; i < co.size(); ++i)
                M.at((int)i, (int)k) = co[i];
        }
        for (int v : snf(ring, M).divisors)
            if (v == 0)
                ++rank;
    }
    cache.emplace(key, rank);
    return rank;
}

// dimension of the bidegree born by level M, from the direct cohomology side
inline int oracle_dim(int stem, int f, bool sigma, int M, int L = 4)
{
    if ((stem + f) % 2 != 0 || f < 0)
        return 0;
    int t = (stem + f) / 2;
    int n = t + 4 * M;
    if (n < 0)
        throw std::runtime_error("oracle window under-ran the module level");
    return image_rank(f, n, sigma ? Sector::sigma_i : Sector::integer, L);
}

// the same dimension from the presentation side
inline int algebra_dim(const ClassAlgebra& A, int stem, int f, bool sigma,
                       int M)
{
    BasisOpts opts;
    opts.dmin = -M;
    opts.emax = 1 << 20;
    return (int)A.enumerate_basis(stem, f, sigma, opts).monos.size();
}

} // namespace q8ss::testutil
