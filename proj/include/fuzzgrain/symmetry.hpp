#pragma once

#include "fuzzgrain/channels.hpp"
#include "fuzzgrain/tensor.hpp"

#include <vector>

namespace fuzzgrain {

/// d x d matrix of non-negative integers counting how many particles of a
/// ket-bra carry each single-particle |l><l'|; entries sum to the particle
/// count. Labels one invariant sector of the channel.
class GammaSignature {
public:
    GammaSignature(int d, std::vector<int> counts);

    int d() const { return d_; }
    int n() const;
    int at(int l, int lp) const { return counts_[l * d_ + lp]; }
    int& at(int l, int lp) { return counts_[l * d_ + lp]; }
    const std::vector<int>& counts() const { return counts_; }

    GammaSignature transposed() const;
    /// gamma_{l,l'} -> gamma_{Q(l), Q'(l')} for level relabelings Q, Q'.
    GammaSignature relabeled(const Permutation& q_rows, const Permutation& q_cols) const;

    static GammaSignature diagonal(int d, const std::vector<int>& diag);

    bool operator==(const GammaSignature&) const = default;
    auto operator<=>(const GammaSignature&) const = default;

private:
    int d_;
    std::vector<int> counts_;  // row-major
};

/// The channel restricted to one gamma sector: ordered ket-bra basis plus the
/// real matrix of the map on it (a convex mixture of permutation matrices,
/// hence doubly stochastic).
struct SectorBlock {
    GammaSignature gamma;
    std::vector<KetBra> basis;
    RealMatrix matrix;
};

/// Qubit sector bookkeeping: excitation counts of ket and bra plus gamma_11,
/// and the block degeneracy under the identification group.
struct QubitSectorLabel {
    int alpha;
    int beta;
    int gamma11;
    int degeneracy;
};

GammaSignature gamma_of(const KetBra& kb, int d);

/// All signatures for the shape, lexicographic in row-major counts; there are
/// binomial(d^2+n-1, n) of them (stars and bars).
std::vector<GammaSignature> enumerate_sectors(SystemShape shape);

std::size_t sector_count(SystemShape shape);

/// All ket-bras with the given signature, sorted lexicographically in (x, y).
std::vector<KetBra> sector_basis(const GammaSignature& gamma, SystemShape shape);

std::size_t sector_size(const GammaSignature& gamma);

/// Block matrix entry (a, b) = sum of p_P over permutations mapping basis[b]
/// to basis[a].
SectorBlock block(const FuzzyChannel& ch, const GammaSignature& gamma);

/// Particles ordered as gamma_{0,0} copies of |0><0|, then gamma_{0,1} copies
/// of |0><1|, ..., row-major over (l, l').
KetBra reference_ketbra(const GammaSignature& gamma);

/// A permutation P with permute_ketbra(kb1, P) == kb2, built as P' after
/// P^{-1} through the reference ket-bra; deterministic (stable sort by
/// single-particle code, ties broken by particle index).
Permutation connecting_permutation(const KetBra& kb1, const KetBra& kb2, int d);

/// Lexicographically minimal element of the orbit of gamma under transpose and
/// independent row/column level relabelings. Block spectra agree across one
/// orbit.
GammaSignature canonical_gamma(const GammaSignature& gamma);

/// Orbit size under the same identification group.
int gamma_orbit_size(const GammaSignature& gamma);

/// d = 2 only.
QubitSectorLabel qubit_label(const GammaSignature& gamma);

}  // namespace fuzzgrain
