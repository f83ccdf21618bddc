#include "fuzzgrain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fuzzgrain {

namespace {

bool eig_less(const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-15) return ma > mb;
    return std::arg(a) < std::arg(b);
}

}  // namespace

std::vector<Complex> block_eigenvalues(const SectorBlock& blk) {
    if (blk.matrix.rows() == 1) return {Complex(blk.matrix(0, 0), 0.0)};
    Eigen::EigenSolver<RealMatrix> solver(blk.matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("block_eigenvalues: eigensolver failed");
    std::vector<Complex> eigs(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(eigs.begin(), eigs.end(), eig_less);
    return eigs;
}

SpectralReport full_spectrum(const FuzzyChannel& ch) {
    SpectralReport report;
    double max_non_unit = 0.0;
    double log_det_abs = 0.0;
    int sign = 1;
    for (const auto& gamma : enumerate_sectors(ch.shape())) {
        auto blk = block(ch, gamma);
        auto eigs = block_eigenvalues(blk);
        const double block_det = blk.matrix.rows() == 1
                                     ? blk.matrix(0, 0)
                                     : blk.matrix.determinant();
        if (block_det < 0.0) sign = -sign;
        for (const auto& lam : eigs) {
            report.eigenvalues.push_back(lam);
            const double mag = std::abs(lam);
            log_det_abs += std::log(mag);
            if (std::abs(lam - 1.0) < kUnitEigTol)
                ++report.unit_count;
            else
                max_non_unit = std::max(max_non_unit, mag);
        }
        report.per_block.emplace_back(gamma, std::move(eigs));
    }
    report.spectral_gap = 1.0 - max_non_unit;
    report.log_volume_ratio = log_det_abs;
    report.det_sign = sign;
    return report;
}

bool rescaled_spectrum_identity_check(const FuzzyChannel& ch, double p, double tol) {
    std::vector<FuzzyChannel::Term> terms = {{p, Permutation::identity(ch.shape().n)}};
    for (const auto& t : ch.terms()) terms.push_back({(1.0 - p) * t.weight, t.perm});
    const FuzzyChannel rescaled(ch.shape(), std::move(terms));

    auto lhs = full_spectrum(rescaled).eigenvalues;
    auto rhs = full_spectrum(ch).eigenvalues;
    for (auto& lam : rhs) lam = p + (1.0 - p) * lam;
    if (lhs.size() != rhs.size()) return false;
    // greedy nearest matching; robust against reordering of degenerate values
    for (const auto& lam : lhs) {
        std::size_t best = 0;
        double best_dist = 1e300;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            const double dist = std::abs(lam - rhs[i]);
            if (dist < best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        if (best_dist > tol) return false;
        rhs.erase(rhs.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return true;
}

double volume_ratio(const FuzzyChannel& ch) {
    return std::exp(full_spectrum(ch).log_volume_ratio);
}

double log_ansatz_volume(int d, int n, double p) {
    SystemShape shape{n, d};
    const double exponent =
        std::pow(static_cast<double>(d), 2.0 * n) - static_cast<double>(sector_count(shape));
    if (exponent == 0.0) return 0.0;
    return exponent * std::log(p);
}

double ansatz_volume(int d, int n, double p) {
    return std::exp(log_ansatz_volume(d, n, p));
}

DenseOperator invariant_state(const GammaSignature& gamma, SystemShape shape) {
    const auto basis = sector_basis(gamma, shape);
    auto out = DenseOperator::zero(shape);
    const double w = 1.0 / static_cast<double>(basis.size());
    for (const auto& kb : basis)
        out.mat(static_cast<Eigen::Index>(index_of(kb.x, shape.d)),
                static_cast<Eigen::Index>(index_of(kb.y, shape.d))) += w;
    return out;
}

bool check_group_invariance(const FuzzyChannel& ch, const DenseOperator& delta,
                            int product_samples, std::uint64_t seed, double tol) {
    if (!is_hermitian(delta.mat, tol))
        throw std::domain_error("check_group_invariance: delta must be Hermitian");
    const auto eigs = hermitian_eigenvalues(delta.mat);
    if (eigs.minCoeff() <= 0.0)
        throw std::domain_error("check_group_invariance: delta must be positive definite");

    if ((apply(ch, delta).mat - delta.mat).cwiseAbs().maxCoeff() > tol) return false;

    std::vector<Permutation> generators;
    for (const auto& t : ch.terms())
        if (t.weight > 0.0) generators.push_back(t.perm);
    for (const auto& p : generators)
        if ((permute_particles(delta, p).mat - delta.mat).cwiseAbs().maxCoeff() > tol)
            return false;

    // sample words in the generated group G_A
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, generators.size() - 1);
    std::uniform_int_distribution<int> length(2, 6);
    for (int s = 0; s < product_samples; ++s) {
        auto word = Permutation::identity(ch.shape().n);
        const int len = length(rng);
        for (int k = 0; k < len; ++k) word = compose(word, generators[pick(rng)]);
        if ((permute_particles(delta, word).mat - delta.mat).cwiseAbs().maxCoeff() > tol)
            return false;
    }
    return true;
}

double von_neumann_entropy(const DenseOperator& rho) {
    const auto eigs = hermitian_eigenvalues(rho.mat);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (eigs(i) > 1e-15) s -= eigs(i) * std::log(eigs(i));
    return s;
}

MajorizationReport majorization_check(const FuzzyChannel& ch, const DenseOperator& rho,
                                      double tol) {
    if (!is_hermitian(rho.mat, 1e-10) || std::abs(rho.mat.trace().real() - 1.0) > 1e-8)
        throw std::invalid_argument("majorization_check: rho is not a density matrix");
    const auto out = apply(ch, rho);

    auto sorted_desc = [](const DenseOperator& op) {
        const auto v = hermitian_eigenvalues(op.mat);
        std::vector<double> e(v.data(), v.data() + v.size());
        std::sort(e.begin(), e.end(), std::greater<>());
        return e;
    };
    const auto in_eigs = sorted_desc(rho);
    const auto out_eigs = sorted_desc(out);

    MajorizationReport report;
    report.majorized = true;
    double sum_in = 0.0, sum_out = 0.0;
    for (std::size_t k = 0; k < in_eigs.size(); ++k) {
        sum_in += in_eigs[k];
        sum_out += out_eigs[k];
        if (sum_out > sum_in + tol) report.majorized = false;
    }
    report.entropy_in = von_neumann_entropy(rho);
    report.entropy_out = von_neumann_entropy(out);
    report.entropy_nondecreasing = report.entropy_out >= report.entropy_in - tol;
    return report;
}

EnsembleSpectrum ensemble_spectrum(FuzzyModel model, SystemShape shape, double p,
                                   const GammaSignature& gamma, int realizations,
                                   std::uint64_t seed, SimplexSampling sampling) {
    if (realizations < 1)
        throw std::invalid_argument("ensemble_spectrum: realizations must be >= 1");
    EnsembleSpectrum ens;
    ens.model = model;
    ens.realizations = realizations;
    for (int r = 0; r < realizations; ++r) {
        const auto ch = fuzzy_random(shape, p, model, split_seed(seed, r), sampling);
        for (const auto& lam : block_eigenvalues(block(ch, gamma)))
            if (std::abs(lam - 1.0) >= kUnitEigTol) ens.samples.push_back(lam);
    }
    if (!ens.samples.empty()) {
        Complex sum = 0.0;
        for (const auto& lam : ens.samples) sum += lam;
        ens.mean = sum / static_cast<double>(ens.samples.size());
        double var = 0.0;
        for (const auto& lam : ens.samples) var += std::norm(lam - ens.mean);
        ens.stddev = std::sqrt(var / static_cast<double>(ens.samples.size()));
    }
    return ens;
}

std::vector<VolumeScanRow> volume_scan(FuzzyModel model, int d, double p, int n_min, int n_max,
                                       std::uint64_t seed) {
    std::vector<VolumeScanRow> rows;
    for (int n = n_min; n <= n_max; ++n) {
        VolumeScanRow row;
        row.n = n;
        row.log_ratio_ansatz = log_ansatz_volume(d, n, p);
        if (n == 1) {
            rows.push_back(row);  // no non-trivial permutations: identity map
            continue;
        }
        const SystemShape shape{n, d};
        const auto ch = fuzzy_random(shape, p, model, split_seed(seed, n));
        const auto report = full_spectrum(ch);
        row.log_ratio_measured = report.log_volume_ratio;

        Complex sum = 0.0;
        std::size_t non_unit = 0;
        for (const auto& lam : report.eigenvalues)
            if (std::abs(lam - 1.0) >= kUnitEigTol) {
                sum += lam;
                ++non_unit;
            }
        if (non_unit > 0) {
            const Complex center = sum / static_cast<double>(non_unit);
            row.log_ratio_empirical = static_cast<double>(non_unit) * std::log(std::abs(center));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fuzzgrain
