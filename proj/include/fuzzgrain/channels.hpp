#pragma once

#include "fuzzgrain/tensor.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fuzzgrain {

/// Restriction of the permutation set used by the random channel builders.
enum class FuzzyModel { General, TwoBody, Chain };

enum class SimplexSampling { Dirichlet1, NormalizedUniform };

FuzzyModel parse_model(const std::string& name);
std::string model_name(FuzzyModel model);

/// Convex mixture of particle permutations acting by conjugation:
/// F[rho] = sum_P p_P P rho P^dagger.
class FuzzyChannel {
public:
    struct Term {
        double weight;
        Permutation perm;
    };

    FuzzyChannel(SystemShape shape, std::vector<Term> terms);

    const SystemShape& shape() const { return shape_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool operator==(const FuzzyChannel& other) const;

private:
    SystemShape shape_;
    std::vector<Term> terms_;  // canonical: sorted by image, distinct, normalized
};

/// A FuzzyChannel followed by a partial trace over the particle set traced.
struct CoarseGraining {
    FuzzyChannel fuzzy;
    std::set<int> traced;
};

/// General FM channel from raw (weight, permutation) terms. Weights are
/// normalized and duplicate permutations merged.
FuzzyChannel fuzzy_general(SystemShape shape, std::vector<FuzzyChannel::Term> terms);

/// Identity with probability p, swap S_ij with probability (1-p)*p_ij.
FuzzyChannel fuzzy_two_body(SystemShape shape, double p,
                            const std::map<std::pair<int, int>, double>& pair_weights);

/// Periodic chain: identity with probability p, neighbor swap S_{i,i+1 mod n}
/// with probability (1-p)*site_weights[i].
FuzzyChannel fuzzy_chain(SystemShape shape, double p, const std::vector<double>& site_weights);

/// Random channel: identity weight p, remaining mass spread over the model's
/// non-identity permutation set with weights drawn on the simplex.
FuzzyChannel fuzzy_random(SystemShape shape, double p, FuzzyModel model, std::uint64_t seed,
                          SimplexSampling sampling = SimplexSampling::Dirichlet1);

/// All permutations of the model's set for the given shape (identity included).
std::vector<Permutation> model_permutations(FuzzyModel model, int n);

/// CG over consecutive groups of sizes m_k: within each group every particle
/// may be mistaken for the group head, then all but the heads are traced out.
CoarseGraining cg_uniform_groups(SystemShape shape, const std::vector<int>& group_sizes);

/// Same with explicit (disjoint) particle index sets per group.
CoarseGraining cg_groups(SystemShape shape, const std::vector<std::vector<int>>& groups);

/// Chain FM followed by a trace over the odd particles.
CoarseGraining cg_alternating(SystemShape shape, double p, const std::vector<double>& site_weights);

DenseOperator apply(const FuzzyChannel& ch, const DenseOperator& rho);
DenseOperator apply_cg(const CoarseGraining& cg, const DenseOperator& rho);

/// Composition as a channel: weights convolve over the permutation group.
FuzzyChannel compose(const FuzzyChannel& outer, const FuzzyChannel& inner);

/// Matrix M with M vec(rho) = vec(apply(ch, rho)) (column-stacking vec),
/// i.e. sum_P p_P (Pi_P kron Pi_P). Throws BudgetError beyond the memory budget.
Matrix superoperator(const FuzzyChannel& ch);

/// Dense-superoperator budget in bytes; FUZZGRAIN_MEM_BUDGET_MB overrides the
/// 2 GiB default.
std::size_t superoperator_budget_bytes();

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON round-trip: {"n", "d", "terms": [{"perm": [...], "weight": w}...],
/// "traced": [...]}. traced is empty for a plain FM.
std::string to_json(const FuzzyChannel& ch);
std::string to_json(const CoarseGraining& cg);
CoarseGraining channel_from_json(const std::string& text);

}  // namespace fuzzgrain
