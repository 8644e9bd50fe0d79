#include "frrqr/linalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace frrqr;

TEST_CASE("permutation basics") {
    Permutation p = Permutation::identity(4);
    CHECK(p.is_identity());
    CHECK(p.is_bijection());
    p.swap(0, 3);
    CHECK_FALSE(p.is_identity());
    CHECK(p.is_bijection());
    const Matrix a{{1.0, 2.0, 3.0, 4.0}};
    CHECK(p.apply(a) == Matrix{{4.0, 2.0, 3.0, 1.0}});
    Permutation bad{{0, 0, 1}};
    CHECK_FALSE(bad.is_bijection());
}

TEST_CASE("singular values of simple matrices") {
    const Vector d = singular_values(Matrix{{3.0, 0.0}, {0.0, 1.0}});
    CHECK(d(0) == doctest::Approx(3.0));
    CHECK(d(1) == doctest::Approx(1.0));
    std::mt19937_64 rng(1);
    const Vector ones = singular_values(oracle::random_orthonormal(rng, 7, 3));
    CHECK(ones.size() == 3);
    CHECK((ones.array() - 1.0).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("singular values agree with the 2x2 closed form") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        const Matrix a = oracle::random_matrix(rng, 2, 2) * std::exp(std::normal_distribution<double>(0, 2)(rng));
        const auto [s1, s2] = oracle::svd2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
        const Vector sv = singular_values(a);
        CHECK(std::abs(sv(0) - s1) <= 1e-10 * s1);
        CHECK(std::abs(sv(1) - s2) <= 1e-10 * s1);
    }
}

TEST_CASE("singular values agree with Jacobi SVD on rectangular shapes") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const Index r = 1 + static_cast<Index>(rng() % 9);
        const Index c = 1 + static_cast<Index>(rng() % 9);
        const Matrix a = oracle::random_matrix(rng, r, c);
        const Vector got = singular_values(a);
        const Vector want = oracle::jacobi_sv(a);
        REQUIRE(got.size() == want.size());
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-8 * want(0));
        CHECK(spectral_norm(a) == doctest::Approx(want(0)).epsilon(1e-8));
    }
}

TEST_CASE("interlacing: singular values of a leading sub-block are sandwiched") {
    std::mt19937_64 rng(31);
    const std::vector<std::pair<Index, Index>> shapes{{3, 6}, {5, 8}, {8, 8}};
    for (const auto& [rows, cols] : shapes) {
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix a = oracle::random_matrix(rng, rows, cols);
            const Vector s = singular_values(a);
            const Index n = s.size();
            const Index kc = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(cols));
            const Vector b = singular_values(a.leftCols(kc));
            // Deleting cols - kc columns: sigma_j(A) >= sigma_j(B) >= sigma_{j + cols - kc}(A).
            for (Index j = 0; j < b.size(); ++j) {
                CHECK(b(j) <= s(j) * (1.0 + 1e-10) + 1e-12);
                const Index lower = j + (cols - kc);
                if (lower < n) CHECK(b(j) >= s(lower) * (1.0 - 1e-10) - 1e-12);
            }
        }
    }
}

TEST_CASE("symmetric eigen is sorted, clamped and sign-normalized") {
    std::mt19937_64 rng(41);
    const Matrix g = oracle::random_matrix(rng, 6, 3);
    const SymmetricEigen e = symmetric_eigen(g * g.transpose());
    for (Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) >= e.values(i));
    CHECK(e.values.minCoeff() >= 0.0);
    for (Index j = 0; j < e.vectors.cols(); ++j) {
        Index at = 0;
        e.vectors.col(j).cwiseAbs().maxCoeff(&at);
        CHECK(e.vectors(at, j) > 0.0);
    }
    CHECK(oracle::orthonormality_defect(e.vectors) <= 1e-10);
}
