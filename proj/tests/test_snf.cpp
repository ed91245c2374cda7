#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "q8ss/snf.hpp"

using namespace q8ss;

namespace {

template <class R>
void check_snf_transforms(const R& ring, const Mat<R>& A)
{
    SnfWant want;
    want.V = want.Vinv = want.U = want.Uinv = true;
    auto res = snf(ring, A, want);

    // divisors ascend
    for (size_t i = 1; i < res.divisors.size(); ++i)
        CHECK(res.divisors[i - 1] <= res.divisors[i]);

    // U A V is the diagonal of uniformizer powers
    auto D = mat_mul(ring, mat_mul(ring, res.U, A), res.V);
    for (int i = 0; i < D.rows; ++i)
        for (int j = 0; j < D.cols; ++j) {
            typename R::Elem expect = ring.zero();
            if (i == j && res.divisors[size_t(i)] < ring.nil_val())
                expect = ring.shift(ring.one(), res.divisors[size_t(i)]);
            CHECK(ring.is_zero(ring.sub(D.at(i, j), expect)));
        }

    // the recorded inverses really invert
    auto VVi = mat_mul(ring, res.V, res.Vinv);
    auto UUi = mat_mul(ring, res.U, res.Uinv);
    for (int i = 0; i < VVi.rows; ++i)
        for (int j = 0; j < VVi.cols; ++j)
            CHECK(ring.is_zero(ring.sub(VVi.at(i, j), i == j ? ring.one() : ring.zero())));
    for (int i = 0; i < UUi.rows; ++i)
        for (int j = 0; j < UUi.cols; ++j)
            CHECK(ring.is_zero(ring.sub(UUi.at(i, j), i == j ? ring.one() : ring.zero())));
}

} // namespace

TEST_CASE("small pivoting examples over Z/2^6")
{
    Z2k ring(6);

    Mat<Z2k> a(2, 2);
    a.at(0, 0) = 2;
    auto ra = snf(ring, a);
    CHECK(ra.divisors == std::vector<int>{1, 6});
    CHECK(ra.rank == 1);

    Mat<Z2k> b(2, 2);
    b.at(0, 0) = 1;
    b.at(0, 1) = 2;
    b.at(1, 0) = 2;
    b.at(1, 1) = 4;
    auto rb = snf(ring, b);
    CHECK(rb.divisors == std::vector<int>{0, 6});

    Mat<Z2k> c(1, 1);
    c.at(0, 0) = 4;
    auto rc = snf(ring, c);
    CHECK(rc.divisors == std::vector<int>{2});
}

TEST_CASE("transforms on random matrices over all three scalar rings")
{
    std::mt19937 rng(12345);
    const int shapes[5][2] = {{3, 5}, {5, 3}, {4, 4}, {1, 6}, {6, 1}};

    Z2k z8(8);
    for (auto& sh : shapes)
        for (int rep = 0; rep < 8; ++rep) {
            Mat<Z2k> A(sh[0], sh[1]);
            for (auto& e : A.a)
                e = z8.from_int(int64_t(rng() % 512) - 256);
            check_snf_transforms(z8, A);
        }

    WRing w8(8);
    for (auto& sh : shapes)
        for (int rep = 0; rep < 8; ++rep) {
            Mat<WRing> A(sh[0], sh[1]);
            for (auto& e : A.a)
                e = w8.make(int64_t(rng() % 512) - 256, int64_t(rng() % 512) - 256);
            check_snf_transforms(w8, A);
        }

    F4h f6(6);
    for (auto& sh : shapes)
        for (int rep = 0; rep < 8; ++rep) {
            Mat<F4h> A(sh[0], sh[1]);
            for (auto& e : A.a)
                e = uint64_t(rng()) & f6.mask();
            check_snf_transforms(f6, A);
        }
}

TEST_CASE("F4[h0] series arithmetic")
{
    F4h r(6);
    auto h = r.shift(r.one(), 1);
    // (1 + h)^{-1} = 1 + h + h^2 + ... in characteristic 2
    auto inv = r.unit_inverse(r.add(r.one(), h));
    uint64_t expect = 0;
    for (int t = 0; t < 6; ++t)
        expect |= uint64_t(1) << (2 * t);
    CHECK(inv == expect);
    CHECK(r.val(r.shift(r.one(), 5)) == 5);
    CHECK(r.val(r.zero()) == kValInf);
    // z * (1+z) = 1 in the coefficient field
    CHECK(r.mul(r.from_f4(F4::z()), r.from_f4(F4(3))) == r.one());
}

TEST_CASE("homology of simple complexes")
{
    WRing ring(8);

    SECTION("free rank one")
    {
        // C = W^2, outgoing [[2,0],[0,0]], nothing incoming: only the second
        // coordinate is lattice-kernel, nothing to quotient
        Mat<WRing> B(2, 2);
        B.at(0, 0) = ring.make(2, 0);
        Mat<WRing> A(2, 0);
        auto H = homology(ring, B, A);
        REQUIRE(H.orders.size() == 1);
        CHECK(H.free_summand[0]);
        CHECK(H.orders[0] == 8);
        CHECK(H.kernel_dim == 1);
        CHECK(H.alarms.empty());
    }

    SECTION("one torsion and one free summand")
    {
        Mat<WRing> B(2, 2); // zero map, kernel is everything
        Mat<WRing> A(2, 1);
        A.at(0, 0) = ring.make(2, 0);
        auto H = homology(ring, B, A);
        REQUIRE(H.orders.size() == 2);
        CHECK(H.orders[0] == 1);
        CHECK_FALSE(H.free_summand[0]);
        CHECK(H.orders[1] == 8);
        CHECK(H.free_summand[1]);
        CHECK(H.alarms.empty());

        // coordinates of an ambient cycle against the summand list
        auto y = H.coords(ring, {ring.make(1, 0), ring.make(1, 0)});
        REQUIRE(y.size() == 2);
        CHECK(ring.is_zero(ring.sub(y[0], ring.one())));
        CHECK(ring.is_zero(ring.sub(y[1], ring.one())));
    }

    SECTION("order eight")
    {
        Mat<WRing> B(1, 1);
        Mat<WRing> A(1, 1);
        A.at(0, 0) = ring.make(8, 0);
        auto H = homology(ring, B, A);
        REQUIRE(H.orders.size() == 1);
        CHECK(H.orders[0] == 3);
        CHECK_FALSE(H.free_summand[0]);
        CHECK(H.alarms.empty());
    }

    SECTION("kernel membership")
    {
        Mat<WRing> B(2, 2);
        B.at(0, 0) = ring.make(2, 0);
        Mat<WRing> A(2, 0);
        auto H = homology(ring, B, A);
        CHECK(H.in_kernel(ring, {ring.zero(), ring.make(5, 3)}));
        CHECK_FALSE(H.in_kernel(ring, {ring.one(), ring.zero()}));
    }

    SECTION("ghost zone raises an alarm")
    {
        Mat<WRing> B(1, 1);
        Mat<WRing> A(1, 1);
        A.at(0, 0) = ring.make(16, 0); // valuation 4 with torsion bound 3
        auto H = homology(ring, B, A);
        CHECK_FALSE(H.alarms.empty());
    }
}
