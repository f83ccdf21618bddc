#include "fuzzgrain/spectral.hpp"

#include <doctest.h>

#include <cmath>

namespace {

using namespace fuzzgrain;

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("full_spectrum of the identity channel") {
    const SystemShape shape{3, 2};
    const auto ch = fuzzy_general(shape, {{1.0, Permutation::identity(3)}});
    const auto report = full_spectrum(ch);
    CHECK(report.eigenvalues.size() == 64);
    CHECK(report.unit_count == 64);
    CHECK(report.log_volume_ratio == doctest::Approx(0.0));
}

TEST_CASE("swap-mixture spectrum on two qubits") {
    const SystemShape shape{2, 2};
    const double p = 0.7;
    const auto ch = fuzzy_general(shape, {{p, Permutation::identity(2)},
                                          {1 - p, Permutation::swap(2, 0, 1)}});
    const auto report = full_spectrum(ch);
    CHECK(report.eigenvalues.size() == 16);
    CHECK(report.unit_count == 10);
    int rescaled = 0;
    for (const auto& lam : report.eigenvalues)
        if (std::abs(lam - (2 * p - 1)) < 1e-12) ++rescaled;
    CHECK(rescaled == 6);
    CHECK(report.spectral_gap == doctest::Approx(1.0 - (2 * p - 1)));
}

TEST_CASE("generic unit count matches the sector count") {
    const SystemShape shape{4, 2};
    const auto ch = fuzzy_random(shape, 0.5, FuzzyModel::General, 7);
    const auto report = full_spectrum(ch);
    CHECK(report.unit_count == 35);
    for (const auto& lam : report.eigenvalues) CHECK(std::abs(lam) <= 1.0 + 1e-9);
}

TEST_CASE("rescaled spectrum identity") {
    const SystemShape shape{3, 2};
    const auto ch = fuzzy_random(shape, 0.0, FuzzyModel::TwoBody, 13);
    CHECK(rescaled_spectrum_identity_check(ch, 0.0));
    CHECK(rescaled_spectrum_identity_check(ch, 0.3));

    const auto general = fuzzy_random({4, 2}, 0.2, FuzzyModel::TwoBody, 14);
    CHECK(rescaled_spectrum_identity_check(general, 0.3));
}

TEST_CASE("volume ratio against the dense determinant") {
    const SystemShape shape{2, 2};
    const double p = 0.8;
    const auto ch = fuzzy_general(shape, {{p, Permutation::identity(2)},
                                          {1 - p, Permutation::swap(2, 0, 1)}});
    CHECK(volume_ratio(ch) == doctest::Approx(std::pow(std::abs(2 * p - 1), 6)));

    const double dense_det = std::abs(superoperator(ch).determinant());
    CHECK(volume_ratio(ch) == doctest::Approx(dense_det).epsilon(1e-10));

    const auto id1 = fuzzy_general({1, 2}, {{1.0, Permutation::identity(1)}});
    CHECK(volume_ratio(id1) == doctest::Approx(1.0));
}

TEST_CASE("block determinants multiply to the dense determinant") {
    for (int n = 2; n <= 4; ++n) {
        const auto ch = fuzzy_random({n, 2}, 0.4, FuzzyModel::General, 20 + n);
        const auto report = full_spectrum(ch);
        const double dense = std::abs(superoperator(ch).determinant());
        REQUIRE(report.log_volume_ratio ==
                doctest::Approx(std::log(dense)).epsilon(1e-8));
    }
}

TEST_CASE("ansatz volume") {
    CHECK(ansatz_volume(2, 1, 0.37) == doctest::Approx(1.0));
    CHECK(log_ansatz_volume(2, 2, 0.5) == doctest::Approx(6.0 * std::log(0.5)));
    CHECK(log_ansatz_volume(2, 6, 0.5) == doctest::Approx(4012.0 * std::log(0.5)));
}

TEST_CASE("invariant states") {
    const SystemShape shape{2, 2};
    const auto top = invariant_state(GammaSignature::diagonal(2, {2, 0}), shape);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    CHECK(max_abs_diff(top.mat, expected) == 0.0);

    const auto mixed = invariant_state(GammaSignature::diagonal(2, {1, 1}), shape);
    CHECK(mixed.mat(1, 1).real() == doctest::Approx(0.5));
    CHECK(mixed.mat(2, 2).real() == doctest::Approx(0.5));

    for (int n = 2; n <= 4; ++n) {
        const SystemShape s{n, 2};
        const auto ch = fuzzy_random(s, 0.3, FuzzyModel::General, 30 + n);
        for (const auto& gamma : enumerate_sectors(s)) {
            const auto delta = invariant_state(gamma, s);
            REQUIRE(max_abs_diff(apply(ch, delta).mat, delta.mat) < 1e-12);
            // permutation invariance of the sector average
            for (const auto& t : ch.terms())
                REQUIRE(max_abs_diff(permute_particles(delta, t.perm).mat, delta.mat) < 1e-12);
        }
    }
}

TEST_CASE("check_group_invariance") {
    const SystemShape shape{3, 2};
    const auto ch = fuzzy_random(shape, 0.5, FuzzyModel::TwoBody, 41);
    const auto uniform = DenseOperator(shape, Matrix::Identity(8, 8) / 8.0);
    CHECK(check_group_invariance(ch, uniform));

    // symmetrized random state is invariant under all of S_3
    auto delta = DenseOperator::zero(shape);
    const auto rho = random_density(shape, 42);
    for (const auto& p : model_permutations(FuzzyModel::General, 3))
        delta.mat += permute_particles(rho, p).mat / 6.0;
    CHECK(check_group_invariance(ch, delta));

    // generic product state is not invariant
    const auto a = random_density({1, 2}, 43);
    const auto b = random_density({1, 2}, 44);
    const auto c = random_density({1, 2}, 45);
    const auto product = tensor(tensor(a, b), c);
    CHECK_FALSE(check_group_invariance(ch, product));

    // non-positive-definite input violates the theorem hypothesis
    const KetBra kb{{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(check_group_invariance(ch, kb.to_operator(shape)), std::domain_error);
}

TEST_CASE("majorization") {
    const SystemShape shape{2, 2};
    const auto ch = fuzzy_general(shape, {{0.5, Permutation::identity(2)},
                                          {0.5, Permutation::swap(2, 0, 1)}});
    const KetBra kb{{0, 1}, {0, 1}};
    const auto report = majorization_check(ch, kb.to_operator(shape));
    CHECK(report.majorized);
    CHECK(report.entropy_in == doctest::Approx(0.0));
    CHECK(report.entropy_out == doctest::Approx(std::log(2.0)));

    // symmetric pure state is a fixed point: equality throughout
    Matrix sym = Matrix::Zero(4, 4);
    sym(0, 0) = 1.0;
    const auto fixed = majorization_check(ch, DenseOperator(shape, sym));
    CHECK(fixed.majorized);
    CHECK(fixed.entropy_out == doctest::Approx(fixed.entropy_in));

    // Monte-Carlo sweep
    const SystemShape three{3, 2};
    for (int trial = 0; trial < 100; ++trial) {
        const auto random_ch =
            fuzzy_random(three, 0.3, FuzzyModel::General, split_seed(50, trial));
        const auto rho = random_density(three, split_seed(51, trial));
        const auto r = majorization_check(random_ch, rho);
        REQUIRE(r.majorized);
        REQUIRE(r.entropy_nondecreasing);
    }
}

TEST_CASE("ensemble spectrum") {
    const SystemShape shape{6, 2};
    const auto gamma = GammaSignature::diagonal(2, {5, 1});

    const auto single = ensemble_spectrum(FuzzyModel::General, shape, 0.5, gamma, 1, 3);
    CHECK(single.samples.size() == 5);  // sector size 6 minus the unit eigenvalue

    const auto chain = ensemble_spectrum(FuzzyModel::Chain, shape, 0.5, gamma, 20, 4);
    for (const auto& lam : chain.samples) CHECK(std::abs(lam.imag()) < 1e-9);

    const auto repeat = ensemble_spectrum(FuzzyModel::General, shape, 0.5, gamma, 10, 5);
    const auto repeat2 = ensemble_spectrum(FuzzyModel::General, shape, 0.5, gamma, 10, 5);
    CHECK(repeat.samples == repeat2.samples);
}

TEST_CASE("volume scan") {
    const auto rows = volume_scan(FuzzyModel::General, 2, 0.4, 1, 4, 8);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].log_ratio_measured == 0.0);
    CHECK(rows[0].log_ratio_ansatz == 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].log_ratio_measured < rows[i - 1].log_ratio_measured);

    // measured log volume equals the dense determinant for small n
    for (const auto& row : rows) {
        if (row.n == 1) continue;
        const auto ch =
            fuzzy_random({row.n, 2}, 0.4, FuzzyModel::General, split_seed(8, row.n));
        const double dense = std::abs(superoperator(ch).determinant());
        CHECK(row.log_ratio_measured == doctest::Approx(std::log(dense)).epsilon(1e-8));
    }
}

TEST_CASE("swap-only channels have real spectra") {
    const auto ch = fuzzy_random({4, 2}, 0.2, FuzzyModel::TwoBody, 71);
    for (const auto& lam : full_spectrum(ch).eigenvalues)
        CHECK(std::abs(lam.imag()) < 1e-10);
}
