#pragma once

#include "fuzzgrain/tensor.hpp"

#include <string>
#include <vector>

namespace fuzzgrain {
namespace xxchain {

/// Detection scheme for the concurrence maps.
enum class Scheme { Exact, Fuzzy, Cg2, Cg4 };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme scheme);

/// Single spin-up excitation over sites j in [-L, L], amplitudes phi_j at a
/// fixed time (units hbar = J_ex = 1).
struct ImpurityState {
    int half_width = 0;
    double time = 0.0;
    std::vector<Complex> amp;  // index j + half_width

    Complex amplitude(int j) const;
    double norm_sq() const;
    /// phi'_j = phi_{j - offset}; amplitudes shifted past the window edge drop.
    ImpurityState shifted(int offset) const;
};

struct WeightedStateMixture {
    struct Component {
        double weight;
        ImpurityState state;
    };
    std::vector<Component> components;
};

struct ConcurrenceField {
    Scheme scheme = Scheme::Exact;
    double time = 0.0;
    double p = 1.0;
    int window = 0;
    bool group_indexed = false;  // cg schemes label pairs by group, not site
    struct Entry {
        int i;
        int j;
        double value;
    };
    std::vector<Entry> entries;  // (i, j) lexicographic, i < j

    double max_value() const;
    double value_at(int i, int j) const;
};

/// J_order(x) by Miller's downward recurrence, normalized via
/// J_0 + 2 sum J_2k = 1. Negative orders via J_{-m}(x) = (-1)^m J_m(x).
double bessel_j(int order, double x);

/// phi_j(t) = i^j J_j(t). Enlarges the window to ceil(t) + 30 when the
/// requested one leaves more than eps probability outside.
ImpurityState amplitudes(double t, int half_width, double eps = 1e-10);

/// Detector displaced one site left or right with probability (1-p)/2 each.
WeightedStateMixture shift_fuzzy_mixture(const ImpurityState& state, double p);

/// Two-site reduced density matrix on (i, j), basis |q_i q_j>.
Matrix reduced_pair_state(const WeightedStateMixture& mixture, int i, int j);

/// Effective two-qubit state after grouping: C_{|a|} x C_{|b|} applied to the
/// reduced state on group_a union group_b (dense operators on <= 8 sites).
Matrix cg_pair_state(const WeightedStateMixture& mixture, const std::vector<int>& group_a,
                     const std::vector<int>& group_b);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Matrix& rho4);

/// Symmetric grouping layout for the cg schemes: site 0 alone, then
/// +-{1..m}, +-{m+1..2m}, ... truncated at the window edge. Returned in
/// group-index order -G..G with group 0 = {0}.
std::vector<std::vector<int>> symmetric_groups(int window, int group_size);

ConcurrenceField concurrence_map(double t, Scheme scheme, double p, int window);

}  // namespace xxchain
}  // namespace fuzzgrain
