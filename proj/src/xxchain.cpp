#include "fuzzgrain/xxchain.hpp"

#include "fuzzgrain/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzgrain {
namespace xxchain {

namespace {
constexpr int kMaxBesselOrder = 512;
}

Scheme parse_scheme(const std::string& name) {
    if (name == "exact") return Scheme::Exact;
    if (name == "fuzzy") return Scheme::Fuzzy;
    if (name == "cg2") return Scheme::Cg2;
    if (name == "cg4") return Scheme::Cg4;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Exact: return "exact";
        case Scheme::Fuzzy: return "fuzzy";
        case Scheme::Cg2: return "cg2";
        case Scheme::Cg4: return "cg4";
    }
    throw std::logic_error("bad scheme enum");
}

double bessel_j(int order, double x) {
    if (std::abs(order) > kMaxBesselOrder)
        throw std::invalid_argument("bessel_j: order beyond budget");
    if (x < 0.0) return (order % 2 == 0 ? 1.0 : -1.0) * bessel_j(order, -x);
    if (order < 0) return (order % 2 == 0 ? 1.0 : -1.0) * bessel_j(-order, x);
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;

    // Miller's downward recurrence, normalized with J_0 + 2 sum_k J_2k = 1
    const int top = std::max(order, static_cast<int>(std::ceil(x)));
    int m = top + static_cast<int>(std::ceil(15.0 * std::sqrt(static_cast<double>(top + 1)))) + 24;
    if (m % 2 != 0) ++m;

    double jp1 = 0.0;
    double j = 1e-30;
    double result = (order == m) ? j : 0.0;
    double norm = 0.0;
    for (int k = m; k > 0; --k) {
        const double jm1 = (2.0 * k / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1 == order) result = j;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? j : 2.0 * j;
        if (std::abs(j) > 1e200) {
            j *= 1e-200;
            jp1 *= 1e-200;
            result *= 1e-200;
            norm *= 1e-200;
        }
    }
    return result / norm;
}

Complex ImpurityState::amplitude(int j) const {
    if (j < -half_width || j > half_width) return 0.0;
    return amp[static_cast<std::size_t>(j + half_width)];
}

double ImpurityState::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
}

ImpurityState ImpurityState::shifted(int offset) const {
    ImpurityState out;
    out.half_width = half_width;
    out.time = time;
    out.amp.assign(amp.size(), 0.0);
    for (int j = -half_width; j <= half_width; ++j) {
        const int src = j - offset;
        if (src >= -half_width && src <= half_width)
            out.amp[static_cast<std::size_t>(j + half_width)] = amplitude(src);
    }
    return out;
}

namespace {

Complex i_power(int j) {
    switch (((j % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

ImpurityState amplitudes_on(double t, int half_width) {
    ImpurityState state;
    state.half_width = half_width;
    state.time = t;
    state.amp.resize(2 * static_cast<std::size_t>(half_width) + 1);
    for (int j = -half_width; j <= half_width; ++j)
        state.amp[static_cast<std::size_t>(j + half_width)] = i_power(j) * bessel_j(j, t);
    return state;
}

}  // namespace

ImpurityState amplitudes(double t, int half_width, double eps) {
    auto state = amplitudes_on(t, half_width);
    if (std::abs(1.0 - state.norm_sq()) >= eps) {
        const int enlarged = std::max(half_width, static_cast<int>(std::ceil(t)) + 30);
        state = amplitudes_on(t, enlarged);
        if (std::abs(1.0 - state.norm_sq()) >= eps)
            throw std::runtime_error("amplitudes: window too small for requested tolerance");
    }
    return state;
}

WeightedStateMixture shift_fuzzy_mixture(const ImpurityState& state, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("shift_fuzzy_mixture: p outside [0,1]");
    WeightedStateMixture mix;
    if (p > 0.0) mix.components.push_back({p, state});
    if (p < 1.0) {
        mix.components.push_back({(1.0 - p) / 2.0, state.shifted(+1)});
        mix.components.push_back({(1.0 - p) / 2.0, state.shifted(-1)});
    }
    return mix;
}

Matrix reduced_pair_state(const WeightedStateMixture& mixture, int i, int j) {
    if (i == j) throw std::invalid_argument("reduced_pair_state: need two distinct sites");
    Matrix rho = Matrix::Zero(4, 4);
    for (const auto& [w, state] : mixture.components) {
        if (std::max(std::abs(i), std::abs(j)) > state.half_width)
            throw std::out_of_range("reduced_pair_state: site outside window");
        const Complex a = state.amplitude(i);
        const Complex b = state.amplitude(j);
        const double pa = std::norm(a);
        const double pb = std::norm(b);
        rho(0, 0) += w * (1.0 - pa - pb);  // |00><00|
        rho(1, 1) += w * pb;               // |01><01|
        rho(2, 2) += w * pa;               // |10><10|
        rho(2, 1) += w * a * std::conj(b); // |10><01|
        rho(1, 2) += w * std::conj(a) * b;
    }
    return rho;
}

namespace {

// Reduced state of the excitation state on a set of sites: a rank-2 mix of
// the in-group one-excitation vector and the vacuum.
DenseOperator group_reduced_state(const ImpurityState& state, const std::vector<int>& sites) {
    const int n = static_cast<int>(sites.size());
    const SystemShape shape{n, 2};
    const auto dim = static_cast<Eigen::Index>(shape.hilbert_dim());
    Eigen::VectorXcd excited = Eigen::VectorXcd::Zero(dim);
    double inside = 0.0;
    for (int k = 0; k < n; ++k) {
        const Complex phi = state.amplitude(sites[k]);
        excited(static_cast<Eigen::Index>(1) << (n - 1 - k)) = phi;
        inside += std::norm(phi);
    }
    Matrix rho = excited * excited.adjoint();
    rho(0, 0) += 1.0 - inside;  // excitation outside the group
    return DenseOperator(shape, std::move(rho));
}

}  // namespace

Matrix cg_pair_state(const WeightedStateMixture& mixture, const std::vector<int>& group_a,
                     const std::vector<int>& group_b) {
    for (int s : group_a)
        if (std::find(group_b.begin(), group_b.end(), s) != group_b.end())
            throw std::invalid_argument("cg_pair_state: overlapping groups");

    std::vector<int> sites = group_a;
    sites.insert(sites.end(), group_b.begin(), group_b.end());
    const SystemShape shape{static_cast<int>(sites.size()), 2};
    const auto cg = cg_uniform_groups(
        shape, {static_cast<int>(group_a.size()), static_cast<int>(group_b.size())});

    Matrix rho = Matrix::Zero(4, 4);
    for (const auto& [w, state] : mixture.components)
        rho += w * apply_cg(cg, group_reduced_state(state, sites)).mat;
    return rho;
}

double concurrence(const Matrix& rho4) {
    if (rho4.rows() != 4 || rho4.cols() != 4)
        throw std::invalid_argument("concurrence: need a 4x4 density matrix");
    if (!is_hermitian(rho4, 1e-8))
        throw std::invalid_argument("concurrence: input not Hermitian");
    if (hermitian_eigenvalues(rho4).minCoeff() < -1e-8)
        throw std::invalid_argument("concurrence: input not positive semidefinite");

    Matrix yy = Matrix::Zero(4, 4);  // sigma_y x sigma_y
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    // lambda_k are the singular values of the complex-symmetric matrix
    // S = V^T (sigma_y x sigma_y) V with rho = V V^dagger.  Unlike
    // sqrt(eig(rho * rho~)) this has no square roots of near-zero noise,
    // so exact zeros of the spectrum stay at machine precision.  Rank
    // directions below 1e-12 of the leading eigenvalue are discarded.
    Eigen::SelfAdjointEigenSolver<Matrix> rho_solver(rho4);
    if (rho_solver.info() != Eigen::Success)
        throw std::runtime_error("concurrence: eigensolver failed");
    const auto& evals = rho_solver.eigenvalues();
    const double cutoff = 1e-12 * evals.maxCoeff();
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < 4; ++k)
        if (evals(k) > cutoff) kept.push_back(k);

    Matrix v(4, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
        v.col(static_cast<Eigen::Index>(c)) =
            std::sqrt(evals(kept[c])) * rho_solver.eigenvectors().col(kept[c]);
    const Matrix s = v.transpose() * yy * v;
    Eigen::JacobiSVD<Matrix> svd(s);
    std::vector<double> lambdas(4, 0.0);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        lambdas[static_cast<std::size_t>(k)] = svd.singularValues()(k);
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

std::vector<std::vector<int>> symmetric_groups(int window, int group_size) {
    std::vector<std::vector<int>> positive;
    for (int start = 1; start <= window; start += group_size) {
        std::vector<int> g;
        for (int s = start; s <= std::min(start + group_size - 1, window); ++s) g.push_back(s);
        positive.push_back(std::move(g));
    }
    std::vector<std::vector<int>> groups;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
        std::vector<int> neg;
        for (int s : *it) neg.push_back(-s);
        std::reverse(neg.begin(), neg.end());
        groups.push_back(std::move(neg));
    }
    groups.push_back({0});
    for (const auto& g : positive) groups.push_back(g);
    return groups;
}

double ConcurrenceField::max_value() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.value);
    return m;
}

double ConcurrenceField::value_at(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (const auto& e : entries)
        if (e.i == i && e.j == j) return e.value;
    throw std::out_of_range("ConcurrenceField: pair not in map");
}

ConcurrenceField concurrence_map(double t, Scheme scheme, double p, int window) {
    ConcurrenceField field;
    field.scheme = scheme;
    field.time = t;
    field.p = p;
    field.window = window;

    const int half_width =
        std::max(window + 2, static_cast<int>(std::ceil(t)) + 30);
    const auto state = amplitudes(t, half_width);

    WeightedStateMixture mixture;
    if (scheme == Scheme::Fuzzy)
        mixture = shift_fuzzy_mixture(state, p);
    else
        mixture.components.push_back({1.0, state});

    if (scheme == Scheme::Exact || scheme == Scheme::Fuzzy) {
        for (int i = -window; i <= window; ++i)
            for (int j = i + 1; j <= window; ++j)
                field.entries.push_back({i, j, concurrence(reduced_pair_state(mixture, i, j))});
        return field;
    }

    field.group_indexed = true;
    const int m = scheme == Scheme::Cg2 ? 2 : 4;
    const auto groups = symmetric_groups(window, m);
    const int offset = (static_cast<int>(groups.size()) - 1) / 2;  // index of group {0}
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b)
            field.entries.push_back(
                {static_cast<int>(a) - offset, static_cast<int>(b) - offset,
                 concurrence(cg_pair_state(mixture, groups[a], groups[b]))});
    return field;
}

}  // namespace xxchain
}  // namespace fuzzgrain
