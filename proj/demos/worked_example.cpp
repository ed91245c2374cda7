// Walks through one sign-twisted cohomology group by hand: the ladder of
// H^f(Q8, pi_4 tensor sigma_i) up to the W/4 in filtration four, printing
// every intermediate object the engine uses.
#include <q8ss/cohomology.hpp>

#include <cstdio>

using namespace q8ss;

static void print_matrix(const char* name, const Mat<WRing>& m)
{
    std::printf("%s (%d x %d):\n", name, m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        std::printf("  [");
        for (int j = 0; j < m.cols; ++j)
            std::printf("%s%s", j ? ", " : "", m.at(i, j).str().c_str());
        std::printf("]\n");
    }
}

int main()
{
    PrecisionScope ps(6);
    WRing ring(6);

    std::printf("Coefficients: pi_4 = W{s^2, st, t^2} with the sigma_i sign twist.\n");
    std::printf("Generator actions on the form basis:\n");
    for (Q8Elt g : {kI, kJ}) {
        for (int e = 0; e <= 2; ++e) {
            StPoly b = StPoly::monomial(2, e);
            StPoly img = act(g, b, Sector::sigma_i);
            std::printf("  %s . %s = %s\n", q8_name(g), b.str().c_str(), img.str().c_str());
        }
    }

    std::printf("\nCochain rungs around filtration four (period-four resolution):\n");
    Mat<WRing> d3 = cochain_matrix(ring, GroupSel::q8, 3, 2, Sector::sigma_i);
    Mat<WRing> d4 = cochain_matrix(ring, GroupSel::q8, 4, 2, Sector::sigma_i);
    print_matrix("d_3 = twisted norm", d3);
    print_matrix("d_4 = (i - 1; j - 1)", d4);

    CohGroup h4 = cohomology_group(GroupSel::q8, 4, 2, Sector::sigma_i);
    {
        PrecisionScope work(h4.work);
        WRing wring(h4.work);
        std::printf("\nker d_4 has rank %d; s^2 + t^2 lies in it: %s\n", h4.hom->kernel_dim,
                    h4.hom->in_kernel(wring, {Witt(1), Witt(0), Witt(1)}) ? "yes" : "no");
    }
    std::printf("d_3 sends the dual of s^2 to 4(s^2 + t^2), the dual of st to 0,\n");
    std::printf("so the quotient of the kernel line by the image is W/4:\n\n");

    for (int f = 0; f <= 4; ++f)
        std::printf("  %s\n", cohomology_group(GroupSel::q8, f, 2, Sector::sigma_i).str().c_str());
    std::printf("  %s\n", cohomology_group(GroupSel::q8, 1, 0, Sector::sigma_i).str().c_str());

    std::printf("\nFull report for the filtration-four group:\n%s",
                coh_report(h4).c_str());
    return 0;
}
