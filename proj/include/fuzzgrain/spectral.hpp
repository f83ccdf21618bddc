#pragma once

#include "fuzzgrain/channels.hpp"
#include "fuzzgrain/symmetry.hpp"

#include <cstdint>
#include <vector>

namespace fuzzgrain {

constexpr double kUnitEigTol = 1e-9;

/// Full superoperator spectrum, assembled block by block.
struct SpectralReport {
    std::vector<Complex> eigenvalues;  // all blocks merged
    std::vector<std::pair<GammaSignature, std::vector<Complex>>> per_block;
    int unit_count = 0;          // |lambda - 1| < kUnitEigTol
    double spectral_gap = 0.0;   // 1 - max{|lambda| : non-unit}
    double log_volume_ratio = 0.0;  // sum log|lambda|
    int det_sign = 1;            // sign of the (real) determinant
};

struct EnsembleSpectrum {
    FuzzyModel model;
    int realizations = 0;
    std::vector<Complex> samples;  // non-unit block eigenvalues, all realizations
    Complex mean{0.0, 0.0};
    double stddev = 0.0;  // sqrt(mean |lambda - mean|^2)
};

struct MajorizationReport {
    bool majorized = false;
    bool entropy_nondecreasing = false;
    double entropy_in = 0.0;
    double entropy_out = 0.0;
};

struct VolumeScanRow {
    int n = 0;
    double log_ratio_measured = 0.0;
    double log_ratio_ansatz = 0.0;
    double log_ratio_empirical = 0.0;
};

/// Eigenvalues of one sector block, sorted by descending magnitude then phase.
std::vector<Complex> block_eigenvalues(const SectorBlock& blk);

SpectralReport full_spectrum(const FuzzyChannel& ch);

/// Spec(p 1 + (1-p) F) = p + (1-p) Spec(F) as multisets, to tol.
bool rescaled_spectrum_identity_check(const FuzzyChannel& ch, double p, double tol = 1e-9);

/// prod |lambda|; underflows to 0 for large systems, use the report's
/// log_volume_ratio there.
double volume_ratio(const FuzzyChannel& ch);

/// p^(d^{2n} - binomial(d^2+n-1, n)).
double ansatz_volume(int d, int n, double p);
double log_ansatz_volume(int d, int n, double p);

/// Uniform mixture of the sector's ket-bra basis; fixed point of every
/// permutation term.
DenseOperator invariant_state(const GammaSignature& gamma, SystemShape shape);

/// For positive-definite delta: F[delta] = delta, and if so, P[delta] = delta
/// for every generator with positive weight and for sampled products of
/// generators.
bool check_group_invariance(const FuzzyChannel& ch, const DenseOperator& delta,
                            int product_samples = 20, std::uint64_t seed = 0,
                            double tol = 1e-10);

/// apply(ch, rho) majorized by rho, with von Neumann entropies.
MajorizationReport majorization_check(const FuzzyChannel& ch, const DenseOperator& rho,
                                      double tol = 1e-10);

EnsembleSpectrum ensemble_spectrum(FuzzyModel model, SystemShape shape, double p,
                                   const GammaSignature& gamma, int realizations,
                                   std::uint64_t seed,
                                   SimplexSampling sampling = SimplexSampling::Dirichlet1);

/// One random realization per n; measured, ansatz, and empirical
/// (cluster-center) log volume ratios.
std::vector<VolumeScanRow> volume_scan(FuzzyModel model, int d, double p, int n_min, int n_max,
                                       std::uint64_t seed);

double von_neumann_entropy(const DenseOperator& rho);

}  // namespace fuzzgrain
