#include "fuzzgrain/channels.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cstdlib>

namespace {

using namespace fuzzgrain;

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("fuzzy_general builds normalized canonical channels") {
    const SystemShape shape{2, 2};
    const auto id_ch = fuzzy_general(shape, {{1.0, Permutation::identity(2)}});
    CHECK(id_ch.terms().size() == 1);

    const auto renorm = fuzzy_general(shape, {{2.0, Permutation::identity(2)},
                                              {2.0, Permutation::swap(2, 0, 1)}});
    CHECK(renorm.terms().size() == 2);
    CHECK(renorm.terms()[0].weight == doctest::Approx(0.5));
    CHECK(renorm.terms()[1].weight == doctest::Approx(0.5));

    CHECK_THROWS_AS(fuzzy_general(shape, {}), std::invalid_argument);
    CHECK_THROWS_AS(fuzzy_general(shape, {{-0.5, Permutation::identity(2)}}),
                    std::invalid_argument);
}

TEST_CASE("two-particle mix on |01><01|") {
    const SystemShape shape{2, 2};
    const auto ch = fuzzy_general(shape, {{0.5, Permutation::identity(2)},
                                          {0.5, Permutation::swap(2, 0, 1)}});
    const KetBra kb{{0, 1}, {0, 1}};
    const auto out = apply(ch, kb.to_operator(shape));
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = 0.5;  // |01><01|
    expected(2, 2) = 0.5;  // |10><10|
    CHECK(max_abs_diff(out.mat, expected) < 1e-15);
}

TEST_CASE("fuzzy_two_body") {
    const SystemShape shape{3, 2};
    const auto identity = fuzzy_two_body(shape, 1.0, {{{0, 1}, 1.0}});
    CHECK(identity.terms().size() == 1);
    CHECK(identity.terms()[0].perm.is_identity());

    const std::map<std::pair<int, int>, double> uniform = {
        {{0, 1}, 1.0 / 3}, {{0, 2}, 1.0 / 3}, {{1, 2}, 1.0 / 3}};
    const auto ch = fuzzy_two_body(shape, 0.5, uniform);
    CHECK(ch.terms().size() == 4);
    for (const auto& t : ch.terms()) {
        if (t.perm.is_identity())
            CHECK(t.weight == doctest::Approx(0.5));
        else
            CHECK(t.weight == doctest::Approx(1.0 / 6));
    }

    CHECK_THROWS_AS(fuzzy_two_body(shape, 0.5, {{{1, 1}, 1.0}}), std::invalid_argument);

    // n=2 single pair reduces to the two-particle example channel
    const SystemShape two{2, 2};
    const auto pair_ch = fuzzy_two_body(two, 0.3, {{{0, 1}, 1.0}});
    const auto direct = fuzzy_general(two, {{0.3, Permutation::identity(2)},
                                            {0.7, Permutation::swap(2, 0, 1)}});
    CHECK(pair_ch == direct);
}

TEST_CASE("fuzzy_chain") {
    const SystemShape two{2, 2};
    const auto ring2 = fuzzy_chain(two, 0.4, {0.5, 0.5});
    // both neighbor swaps coincide on a 2-ring and merge
    CHECK(ring2.terms().size() == 2);
    for (const auto& t : ring2.terms())
        if (!t.perm.is_identity()) CHECK(t.weight == doctest::Approx(0.6));

    const SystemShape four{4, 2};
    const auto ch = fuzzy_chain(four, 0.8, {0.25, 0.25, 0.25, 0.25});
    CHECK(ch.terms().size() == 5);
    for (const auto& t : ch.terms())
        if (!t.perm.is_identity()) CHECK(t.weight == doctest::Approx(0.05));

    // permutation-symmetric states are fixed points
    const auto sym = DenseOperator::identity(four);
    const auto normalized = DenseOperator(four, sym.mat / 16.0);
    CHECK(max_abs_diff(apply(ch, normalized).mat, normalized.mat) < 1e-14);

    CHECK_THROWS_AS(fuzzy_chain({1, 2}, 0.5, {1.0}), std::invalid_argument);
}

TEST_CASE("fuzzy_random") {
    const SystemShape shape{3, 2};
    const auto identity = fuzzy_random(shape, 1.0, FuzzyModel::General, 1);
    CHECK(identity.terms().size() == 1);

    const auto general = fuzzy_random(shape, 0.5, FuzzyModel::General, 2);
    CHECK(general.terms().size() == 6);  // identity + |S_3| - 1

    const auto again = fuzzy_random(shape, 0.5, FuzzyModel::General, 2);
    CHECK(general == again);
    const auto other = fuzzy_random(shape, 0.5, FuzzyModel::General, 3);
    CHECK_FALSE(general == other);

    CHECK(fuzzy_random(shape, 0.5, FuzzyModel::TwoBody, 4).terms().size() == 4);
    CHECK(fuzzy_random(shape, 0.5, FuzzyModel::Chain, 4).terms().size() == 4);
    CHECK_THROWS_AS(parse_model("bogus"), std::invalid_argument);
}

TEST_CASE("cg_uniform_groups") {
    const SystemShape two{2, 2};
    const auto trivial = cg_uniform_groups(two, {1, 1});
    CHECK(trivial.traced.empty());

    const auto merge = cg_uniform_groups(two, {2});
    const KetBra kb{{0, 1}, {0, 1}};
    const auto out = apply_cg(merge, kb.to_operator(two));
    CHECK(out.mat(0, 0).real() == doctest::Approx(0.5));
    CHECK(out.mat(1, 1).real() == doctest::Approx(0.5));

    const auto sigma = random_density({1, 2}, 31);
    const auto product = tensor(sigma, sigma);
    CHECK(max_abs_diff(apply_cg(merge, product).mat, sigma.mat) < 1e-14);

    CHECK_THROWS_AS(cg_uniform_groups(two, {3}), std::invalid_argument);
}

TEST_CASE("cg over one group of three averages the marginals") {
    const SystemShape shape{3, 2};
    const auto rho = random_density(shape, 17);
    const auto cg = cg_uniform_groups(shape, {3});
    const auto out = apply_cg(cg, rho);

    Matrix avg = Matrix::Zero(2, 2);
    avg += partial_trace(rho, {1, 2}).mat;
    avg += partial_trace(rho, {0, 2}).mat;
    avg += partial_trace(rho, {0, 1}).mat;
    avg /= 3.0;
    CHECK(max_abs_diff(out.mat, avg) < 1e-13);
}

TEST_CASE("cg of six particles in two groups factorizes on product states") {
    std::vector<DenseOperator> sigma;
    for (int i = 0; i < 6; ++i) sigma.push_back(random_density({1, 2}, 100 + i));
    auto product = sigma[0];
    for (int i = 1; i < 6; ++i) product = tensor(product, sigma[i]);

    const auto cg = cg_uniform_groups({6, 2}, {3, 3});
    const auto out = apply_cg(cg, product);

    const Matrix avg_a = (sigma[0].mat + sigma[1].mat + sigma[2].mat) / 3.0;
    const Matrix avg_b = (sigma[3].mat + sigma[4].mat + sigma[5].mat) / 3.0;
    const auto expected = tensor(DenseOperator({1, 2}, avg_a), DenseOperator({1, 2}, avg_b));
    CHECK(max_abs_diff(out.mat, expected.mat) < 1e-13);
}

TEST_CASE("cg_alternating") {
    const SystemShape two{2, 2};
    const auto rho2 = random_density(two, 55);
    const auto plain = cg_alternating(two, 1.0, {0.5, 0.5});
    CHECK(max_abs_diff(apply_cg(plain, rho2).mat, partial_trace(rho2, {1}).mat) < 1e-14);

    const auto cg2p = cg_alternating(two, 0.7, {0.5, 0.5});
    const auto fm = fuzzy_general(two, {{0.7, Permutation::identity(2)},
                                        {0.3, Permutation::swap(2, 0, 1)}});
    CHECK(max_abs_diff(apply_cg(cg2p, rho2).mat,
                       partial_trace(apply(fm, rho2), {1}).mat) < 1e-14);

    // four-site chain on a product state vs direct dense evaluation
    const SystemShape four{4, 2};
    std::vector<DenseOperator> sigma;
    for (int i = 0; i < 4; ++i) sigma.push_back(random_density({1, 2}, 200 + i));
    auto product = sigma[0];
    for (int i = 1; i < 4; ++i) product = tensor(product, sigma[i]);
    const double p = 0.6;
    const auto cg = cg_alternating(four, p, {0.25, 0.25, 0.25, 0.25});
    const auto chain = fuzzy_chain(four, p, {0.25, 0.25, 0.25, 0.25});
    const auto oracle = partial_trace(apply(chain, product), {1, 3});
    CHECK(max_abs_diff(apply_cg(cg, product).mat, oracle.mat) < 1e-13);

    CHECK_THROWS_AS(cg_alternating({3, 2}, 0.5, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("apply expectation identity and self-composition") {
    const SystemShape shape{2, 2};
    const double p = 0.35;
    const auto ch = fuzzy_general(shape, {{p, Permutation::identity(2)},
                                          {1 - p, Permutation::swap(2, 0, 1)}});
    const auto rho = random_density(shape, 61);
    const auto a = random_density({1, 2}, 62);
    const auto b = random_density({1, 2}, 63);
    const auto ab = tensor(a, b);
    const auto ba = tensor(b, a);
    const Complex lhs = (ab.mat * apply(ch, rho).mat).trace();
    const Complex rhs = p * (rho.mat * ab.mat).trace() + (1 - p) * (rho.mat * ba.mat).trace();
    CHECK(std::abs(lhs - rhs) < 1e-13);

    // applying twice equals one application with convolved weights
    const auto twice = apply(ch, apply(ch, rho));
    const double q = p * p + (1 - p) * (1 - p);
    const auto squared = fuzzy_general(shape, {{q, Permutation::identity(2)},
                                               {1 - q, Permutation::swap(2, 0, 1)}});
    CHECK(max_abs_diff(twice.mat, apply(squared, rho).mat) < 1e-14);
    CHECK(compose(ch, ch) == squared);
}

TEST_CASE("channels are unital and trace preserving") {
    const SystemShape shape{3, 2};
    const auto ch = fuzzy_random(shape, 0.3, FuzzyModel::General, 77);
    const auto one = DenseOperator::identity(shape);
    CHECK(max_abs_diff(apply(ch, one).mat, one.mat) < 1e-13);

    const auto rho = random_density(shape, 78);
    CHECK(std::abs(apply(ch, rho).mat.trace() - rho.mat.trace()) < 1e-12);
}

TEST_CASE("level-relabeling covariance") {
    const SystemShape shape{3, 2};
    const auto ch = fuzzy_random(shape, 0.4, FuzzyModel::General, 81);
    const auto rho1 = random_density(shape, 82);
    const auto rho2 = random_density(shape, 83);

    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    Matrix q = x;
    for (int i = 1; i < 3; ++i) {
        Matrix next(q.rows() * 2, q.cols() * 2);
        next.setZero();
        next.block(0, q.cols(), q.rows(), q.cols()) = q;
        next.block(q.rows(), 0, q.rows(), q.cols()) = q;
        q = next;
    }
    const DenseOperator q1(shape, q * rho1.mat * q);
    const DenseOperator q2(shape, q * rho2.mat * q);
    CHECK(std::abs(hs_inner(rho1, apply(ch, rho2)) - hs_inner(q1, apply(ch, q2))) < 1e-12);
}

TEST_CASE("superoperator matrix") {
    const SystemShape one{1, 2};
    const auto id1 = fuzzy_general(one, {{1.0, Permutation::identity(1)}});
    CHECK(max_abs_diff(superoperator(id1), Matrix::Identity(4, 4)) == 0.0);

    const SystemShape two{2, 2};
    const double p = 0.8;
    const auto ch = fuzzy_general(two, {{p, Permutation::identity(2)},
                                        {1 - p, Permutation::swap(2, 0, 1)}});
    const Matrix m = superoperator(ch);

    // action agrees with apply through vec
    const auto rho = random_density(two, 91);
    Eigen::VectorXcd vec_rho = Eigen::Map<const Eigen::VectorXcd>(rho.mat.data(), 16);
    const Eigen::VectorXcd vec_out = m * vec_rho;
    const auto direct = apply(ch, rho);
    Eigen::VectorXcd vec_direct = Eigen::Map<const Eigen::VectorXcd>(direct.mat.data(), 16);
    CHECK((vec_out - vec_direct).cwiseAbs().maxCoeff() < 1e-13);

    // spectrum {1 x10, (2p-1) x6} from the S (x) S eigendecomposition
    Eigen::ComplexEigenSolver<Matrix> solver(m);
    int ones = 0, rescaled = 0;
    for (Eigen::Index i = 0; i < 16; ++i) {
        const Complex lam = solver.eigenvalues()(i);
        if (std::abs(lam - 1.0) < 1e-10) ++ones;
        if (std::abs(lam - (2 * p - 1)) < 1e-10) ++rescaled;
    }
    CHECK(ones == 10);
    CHECK(rescaled == 6);

    // trace preservation: columns of diagonal ket-bras sum to 1
    for (int c = 0; c < 4; ++c) {
        Complex sum = 0.0;
        for (int r = 0; r < 4; ++r) sum += m(r + 4 * r, c + 4 * c);
        CHECK(std::abs(sum - 1.0) < 1e-13);
    }
}

TEST_CASE("superoperator budget error") {
    const SystemShape shape{6, 2};
    const auto ch = fuzzy_chain(shape, 0.5, std::vector<double>(6, 1.0 / 6));
    setenv("FUZZGRAIN_MEM_BUDGET_MB", "1", 1);
    CHECK_THROWS_AS(superoperator(ch), BudgetError);
    unsetenv("FUZZGRAIN_MEM_BUDGET_MB");
}

TEST_CASE("channel JSON round trip") {
    const SystemShape shape{4, 2};
    const auto cg = cg_alternating(shape, 0.37, {0.1, 0.2, 0.3, 0.4});
    const auto text = to_json(cg);
    const auto back = channel_from_json(text);
    CHECK(back.fuzzy == cg.fuzzy);
    CHECK(back.traced == cg.traced);
    CHECK(channel_from_json(to_json(back)).fuzzy == cg.fuzzy);
}
