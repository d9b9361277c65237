#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace ksbox;
using Catch::Matchers::WithinAbs;

TEST_CASE("eigenvalues_hermitian fixed points", "[linalg]")
{
    const auto id = eigenvalues_hermitian(CMatrix::Identity(4, 4));
    CHECK(id.eigenvalues == std::vector<double>{1, 1, 1, 1});

    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 1, -2, 3;
    const auto diag = eigenvalues_hermitian(d);
    CHECK(diag.eigenvalues == std::vector<double>{3, 1, -2});
}

TEST_CASE("eigenvalues_hermitian rejects non-Hermitian input", "[linalg]")
{
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(eigenvalues_hermitian(m), InvalidState);
    CHECK_THROWS_AS(eigenvalues_hermitian(CMatrix::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("Pauli Y is handled through the complex embedding", "[linalg]")
{
    const auto r = eigenvalues_hermitian(pauli_y());
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK_THAT(r.eigenvalues[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.eigenvalues[1], WithinAbs(-1.0, 1e-12));
}

TEST_CASE("random real symmetric 3x3 against characteristic polynomial", "[linalg][property]")
{
    Rng rng(314);
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::Matrix3d a;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) a(i, j) = a(j, i) = ksbox::testing::normal(rng);
        const auto roots = ksbox::testing::symmetric3_roots(a);
        const auto r = eigenvalues_hermitian(a.cast<Complex>());
        for (int k = 0; k < 3; ++k) CHECK_THAT(r.eigenvalues[k], WithinAbs(roots[k], 1e-8));
    }
}

TEST_CASE("random Hermitian spectra", "[linalg][property]")
{
    Rng rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(7));  // 2..8
        const CMatrix g = ksbox::testing::ginibre(d, d, rng);
        const CMatrix h = 0.5 * (g + g.adjoint());
        const auto r = eigenvalues_hermitian(h);
        REQUIRE(static_cast<int>(r.eigenvalues.size()) == d);
        CHECK(r.orthonormality_residual <= 1e-10);
        CHECK(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
        double sum = 0.0;
        for (double v : r.eigenvalues) sum += v;
        CHECK_THAT(sum, WithinAbs(h.trace().real(), 1e-10));

        Eigen::SelfAdjointEigenSolver<CMatrix> reference(h);
        for (int k = 0; k < d; ++k) CHECK_THAT(r.eigenvalues[k], WithinAbs(reference.eigenvalues()(d - 1 - k), 1e-9));
    }
}

TEST_CASE("kron", "[linalg]")
{
    const CMatrix zz = kron(pauli_z(), pauli_z());
    CMatrix expect = CMatrix::Zero(4, 4);
    expect.diagonal() << 1, -1, -1, 1;
    CHECK(max_abs(zz - expect) == 0.0);
    CHECK(kron(pauli_x(), CMatrix::Identity(2, 2))(0, 2) == Complex(1, 0));
}
