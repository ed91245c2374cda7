#include <catch2/catch_amalgamated.hpp>

#include "q8ss/stpoly.hpp"

using namespace q8ss;

namespace {
StPoly st(int n, int t_exp) { return StPoly::monomial(n, t_exp); }
} // namespace

TEST_CASE("generator action formulas in degree one")
{
    StPoly t = class_u_inv(), s = class_s(), v1 = class_v1();
    Witt inv = zeta2_minus_zeta().inverse();

    // i(u^{-1}) = (v1 - u^{-1}) / (z^2 - z), which is the basis element s
    CHECK(act(kI, t) == s);
    CHECK(act(kI, t) == inv * (v1 - t));
    // i(v1) = (v1 + 2 u^{-1}) / (z^2 - z)
    CHECK(act(kI, v1) == inv * (v1 + Witt(2) * t));
    // j(u^{-1}) = (z v1 - u^{-1}) / (z^2 - z)
    CHECK(act(kJ, t) == inv * (Witt::zeta() * v1 - t));
    // j(v1) = (v1 + 2 z^2 u^{-1}) / (z^2 - z)
    CHECK(act(kJ, v1) == inv * (v1 + Witt(2) * Witt::zeta() * Witt::zeta() * t));
    // k(u^{-1}) = (z^2 v1 - u^{-1}) / (z^2 - z)
    CHECK(act(kK, t) == inv * (Witt::zeta() * Witt::zeta() * v1 - t));
    // applying i twice gives the central sign
    CHECK(act(kI, act(kI, t)) == -t);
}

TEST_CASE("sector twist flips signs off the kernel")
{
    StPoly t = class_u_inv();
    CHECK(act(kI, t, Sector::sigma_i) == act(kI, t));
    CHECK(act(kJ, t, Sector::sigma_i) == -act(kJ, t));
    CHECK(act(kK, t, Sector::sigma_i) == -act(kK, t));
    CHECK(act(kI, t, Sector::sigma_j) == -act(kI, t));
}

TEST_CASE("action axioms on monomial bases through degree 8")
{
    for (Sector sec : {Sector::integer, Sector::sigma_i, Sector::sigma_j, Sector::sigma_k})
        for (int n = 1; n <= 8; ++n)
            for (int e = 0; e <= n; ++e) {
                StPoly m = st(n, e);
                for (int g = 0; g < 8; ++g)
                    for (int h = 0; h < 8; ++h) {
                        StPoly lhs = act(q8_mul(Q8Elt(g), Q8Elt(h)), m, sec);
                        StPoly rhs = act(Q8Elt(g), act(Q8Elt(h), m, sec), sec);
                        CHECK(lhs == rhs);
                    }
            }
}

TEST_CASE("the center acts by the degree parity")
{
    for (int n = 1; n <= 8; ++n)
        for (int e = 0; e <= n; ++e) {
            StPoly m = st(n, e);
            StPoly c = act(kMinusOne, m);
            CHECK(c == ((n % 2) ? -m : m));
        }
}

TEST_CASE("presentation relations as operators")
{
    for (int n = 1; n <= 6; ++n)
        for (int e = 0; e <= n; ++e) {
            StPoly m = st(n, e);
            // i^4 = 1
            CHECK(act(kI, act(kI, act(kI, act(kI, m)))) == m);
            // j^2 = i^2
            CHECK(act(kJ, act(kJ, m)) == act(kI, act(kI, m)));
            // j i j^{-1} = i^{-1}
            StPoly lhs = act(kJ, act(kI, act(q8_inv(kJ), m)));
            CHECK(lhs == act(q8_inv(kI), m));
        }
}

TEST_CASE("D is an invariant in topological degree 8")
{
    StPoly D = class_D();
    CHECK(D.n == 4); // form degree 4, topological degree 2n = 8
    CHECK_FALSE(D.is_zero());
    for (int g = 0; g < 8; ++g)
        CHECK(act(Q8Elt(g), D) == D);
    // st(s^2 + (z - z^2) st - t^2) expanded
    Witt z = Witt::zeta(), z2 = z * z;
    StPoly s = class_s(), t = class_u_inv();
    StPoly inner = s * s - t * t + (z - z2) * (s * t);
    CHECK(D == s * t * inner);
}

TEST_CASE("worked kernel facts in degree four")
{
    StPoly s = class_s(), t = class_u_inv();
    StPoly s2t2 = s * s + t * t;
    CHECK(act(kI, s2t2, Sector::sigma_i) == s2t2);
    CHECK(act(kI, s * s) == t * t);
    CHECK(act(kI, s * t) == -(s * t));
}

TEST_CASE("round trip between the two degree bases")
{
    for (int n = 1; n <= 6; ++n)
        for (int a = 0; a <= n; ++a) {
            StPoly m = v1u_monomial(a, n - a);
            auto coords = to_v1u_coords(m);
            for (int e = 0; e <= n; ++e) {
                // index is the u-exponent, so the single entry sits at n - a
                CHECK(coords[size_t(e)] == (e == n - a ? Witt(1) : Witt()));
            }
        }
}

TEST_CASE("v1 is congruent to t^? only via the basis change")
{
    StPoly v1 = class_v1(), t = class_u_inv(), s = class_s();
    CHECK(v1 == zeta2_minus_zeta() * s + t);
    auto m2 = mod2(v1);
    // z^2 - z = -1 - 2z reduces to 1, so v1 = s + t mod 2
    CHECK(m2[0] == F4::one());
    CHECK(m2[1] == F4::one());
}
