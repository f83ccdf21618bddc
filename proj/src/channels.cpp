#include "fuzzgrain/channels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fuzzgrain {

namespace {
constexpr double kWeightTol = 1e-12;
}

FuzzyModel parse_model(const std::string& name) {
    if (name == "general") return FuzzyModel::General;
    if (name == "two-body" || name == "twobody") return FuzzyModel::TwoBody;
    if (name == "chain") return FuzzyModel::Chain;
    throw std::invalid_argument("unknown model: " + name);
}

std::string model_name(FuzzyModel model) {
    switch (model) {
        case FuzzyModel::General: return "general";
        case FuzzyModel::TwoBody: return "two-body";
        case FuzzyModel::Chain: return "chain";
    }
    throw std::logic_error("bad model enum");
}

FuzzyChannel::FuzzyChannel(SystemShape shape, std::vector<Term> terms) : shape_(shape) {
    if (terms.empty()) throw std::invalid_argument("FuzzyChannel: empty term list");
    double total = 0.0;
    for (const auto& t : terms) {
        if (t.weight < 0.0) throw std::invalid_argument("FuzzyChannel: negative weight");
        if (t.perm.size() != shape.n)
            throw std::invalid_argument("FuzzyChannel: permutation size mismatch");
        total += t.weight;
    }
    if (total <= 0.0) throw std::invalid_argument("FuzzyChannel: weights not normalizable");

    // canonical form: sorted by image, duplicates merged, normalized
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.perm < b.perm; });
    for (const auto& t : terms) {
        if (!terms_.empty() && terms_.back().perm == t.perm)
            terms_.back().weight += t.weight / total;
        else
            terms_.push_back({t.weight / total, t.perm});
    }
}

bool FuzzyChannel::operator==(const FuzzyChannel& other) const {
    if (shape_ != other.shape_ || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].perm != other.terms_[i].perm ||
            std::abs(terms_[i].weight - other.terms_[i].weight) > kWeightTol)
            return false;
    return true;
}

FuzzyChannel fuzzy_general(SystemShape shape, std::vector<FuzzyChannel::Term> terms) {
    return FuzzyChannel(shape, std::move(terms));
}

FuzzyChannel fuzzy_two_body(SystemShape shape, double p,
                            const std::map<std::pair<int, int>, double>& pair_weights) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("fuzzy_two_body: p outside [0,1]");
    double total = 0.0;
    for (const auto& [pair, w] : pair_weights) {
        if (pair.first == pair.second)
            throw std::invalid_argument("fuzzy_two_body: pair (i,i) is not a swap");
        if (w < 0.0) throw std::invalid_argument("fuzzy_two_body: negative pair weight");
        total += w;
    }
    if (total <= 0.0 && p < 1.0)
        throw std::invalid_argument("fuzzy_two_body: pair weights not normalizable");

    std::vector<FuzzyChannel::Term> terms;
    terms.push_back({p, Permutation::identity(shape.n)});
    if (p < 1.0)
        for (const auto& [pair, w] : pair_weights)
            terms.push_back({(1.0 - p) * w / total,
                             Permutation::swap(shape.n, pair.first, pair.second)});
    return FuzzyChannel(shape, std::move(terms));
}

FuzzyChannel fuzzy_chain(SystemShape shape, double p, const std::vector<double>& site_weights) {
    if (shape.n < 2) throw std::invalid_argument("fuzzy_chain: needs n >= 2");
    if (site_weights.size() != static_cast<std::size_t>(shape.n))
        throw std::invalid_argument("fuzzy_chain: need one weight per site");
    double total = std::accumulate(site_weights.begin(), site_weights.end(), 0.0);
    if (total <= 0.0 && p < 1.0)
        throw std::invalid_argument("fuzzy_chain: site weights not normalizable");

    std::vector<FuzzyChannel::Term> terms;
    terms.push_back({p, Permutation::identity(shape.n)});
    if (p < 1.0)
        for (int i = 0; i < shape.n; ++i)
            terms.push_back({(1.0 - p) * site_weights[i] / total,
                             Permutation::swap(shape.n, i, (i + 1) % shape.n)});
    return FuzzyChannel(shape, std::move(terms));
}

std::vector<Permutation> model_permutations(FuzzyModel model, int n) {
    std::vector<Permutation> perms;
    switch (model) {
        case FuzzyModel::General: {
            std::vector<int> img(n);
            std::iota(img.begin(), img.end(), 0);
            do {
                perms.emplace_back(img);
            } while (std::next_permutation(img.begin(), img.end()));
            break;
        }
        case FuzzyModel::TwoBody: {
            perms.push_back(Permutation::identity(n));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) perms.push_back(Permutation::swap(n, i, j));
            break;
        }
        case FuzzyModel::Chain: {
            perms.push_back(Permutation::identity(n));
            for (int i = 0; i < n; ++i) {
                auto s = Permutation::swap(n, i, (i + 1) % n);
                if (std::find(perms.begin(), perms.end(), s) == perms.end())
                    perms.push_back(s);
            }
            break;
        }
    }
    return perms;
}

FuzzyChannel fuzzy_random(SystemShape shape, double p, FuzzyModel model, std::uint64_t seed,
                          SimplexSampling sampling) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("fuzzy_random: p outside [0,1]");
    std::vector<FuzzyChannel::Term> terms;
    terms.push_back({p, Permutation::identity(shape.n)});
    if (p < 1.0) {
        auto perms = model_permutations(model, shape.n);
        std::erase_if(perms, [](const Permutation& q) { return q.is_identity(); });
        std::mt19937_64 rng(seed);
        std::vector<double> w(perms.size());
        if (sampling == SimplexSampling::Dirichlet1) {
            std::exponential_distribution<double> exp1(1.0);
            for (auto& v : w) v = exp1(rng);
        } else {
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            for (auto& v : w) v = uni(rng);
        }
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < perms.size(); ++i)
            terms.push_back({(1.0 - p) * w[i] / total, perms[i]});
    }
    return FuzzyChannel(shape, std::move(terms));
}

CoarseGraining cg_groups(SystemShape shape, const std::vector<std::vector<int>>& groups) {
    std::vector<char> used(shape.n, 0);
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("cg_groups: empty group");
        for (int i : g) {
            if (i < 0 || i >= shape.n) throw std::out_of_range("cg_groups: index out of range");
            if (used[i]) throw std::invalid_argument("cg_groups: overlapping groups");
            used[i] = 1;
        }
    }
    for (int i = 0; i < shape.n; ++i)
        if (!used[i]) throw std::invalid_argument("cg_groups: groups must cover all particles");

    // cross product of per-group uniform head swaps; permutations act on
    // disjoint supports so they compose freely
    std::vector<FuzzyChannel::Term> terms = {{1.0, Permutation::identity(shape.n)}};
    for (const auto& g : groups) {
        std::vector<FuzzyChannel::Term> next;
        for (const auto& t : terms)
            for (int member : g)
                next.push_back({t.weight / static_cast<double>(g.size()),
                                t.perm.then(Permutation::swap(shape.n, g.front(), member))});
        terms = std::move(next);
    }

    std::set<int> traced;
    for (const auto& g : groups)
        for (std::size_t i = 1; i < g.size(); ++i) traced.insert(g[i]);
    return CoarseGraining{FuzzyChannel(shape, std::move(terms)), std::move(traced)};
}

CoarseGraining cg_uniform_groups(SystemShape shape, const std::vector<int>& group_sizes) {
    const int total = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
    if (total != shape.n)
        throw std::invalid_argument("cg_uniform_groups: sizes must sum to n");
    std::vector<std::vector<int>> groups;
    int start = 0;
    for (int m : group_sizes) {
        if (m < 1) throw std::invalid_argument("cg_uniform_groups: group size must be positive");
        std::vector<int> g(m);
        std::iota(g.begin(), g.end(), start);
        groups.push_back(std::move(g));
        start += m;
    }
    return cg_groups(shape, groups);
}

CoarseGraining cg_alternating(SystemShape shape, double p,
                              const std::vector<double>& site_weights) {
    if (shape.n % 2 != 0) throw std::invalid_argument("cg_alternating: n must be even");
    std::set<int> odd;
    for (int i = 1; i < shape.n; i += 2) odd.insert(i);
    return CoarseGraining{fuzzy_chain(shape, p, site_weights), std::move(odd)};
}

DenseOperator apply(const FuzzyChannel& ch, const DenseOperator& rho) {
    if (rho.shape != ch.shape()) throw std::invalid_argument("apply: shape mismatch");
    auto out = DenseOperator::zero(ch.shape());
    for (const auto& t : ch.terms()) out.mat += t.weight * permute_particles(rho, t.perm).mat;
    return out;
}

DenseOperator apply_cg(const CoarseGraining& cg, const DenseOperator& rho) {
    return partial_trace(apply(cg.fuzzy, rho), cg.traced);
}

FuzzyChannel compose(const FuzzyChannel& outer, const FuzzyChannel& inner) {
    if (outer.shape() != inner.shape())
        throw std::invalid_argument("compose: shape mismatch");
    std::vector<FuzzyChannel::Term> terms;
    for (const auto& a : outer.terms())
        for (const auto& b : inner.terms())
            terms.push_back({a.weight * b.weight, compose(a.perm, b.perm)});
    return FuzzyChannel(outer.shape(), std::move(terms));
}

std::size_t superoperator_budget_bytes() {
    std::size_t mb = 2048;
    if (const char* env = std::getenv("FUZZGRAIN_MEM_BUDGET_MB")) {
        const long v = std::atol(env);
        if (v > 0) mb = static_cast<std::size_t>(v);
    }
    return mb * 1024 * 1024;
}

Matrix superoperator(const FuzzyChannel& ch) {
    const std::size_t dim = ch.shape().hilbert_dim();
    const std::size_t super_dim = dim * dim;
    if (16 * super_dim * super_dim > superoperator_budget_bytes())
        throw BudgetError("superoperator: dense matrix exceeds memory budget, "
                          "use block-wise spectral paths");

    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(super_dim),
                            static_cast<Eigen::Index>(super_dim));
    std::vector<int> out_digits(ch.shape().n);
    for (const auto& t : ch.terms()) {
        // Hilbert-index relabeling of this permutation
        std::vector<std::size_t> map(dim);
        for (std::size_t h = 0; h < dim; ++h) {
            const auto in = digits_of(h, ch.shape().n, ch.shape().d);
            for (int i = 0; i < ch.shape().n; ++i) out_digits[t.perm(i)] = in[i];
            map[h] = index_of(out_digits, ch.shape().d);
        }
        // column-stacking vec: vec(rho)_{r + c*dim} = rho(r,c)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                m(static_cast<Eigen::Index>(map[r] + map[c] * dim),
                  static_cast<Eigen::Index>(r + c * dim)) += t.weight;
    }
    return m;
}

std::string to_json(const CoarseGraining& cg) {
    nlohmann::json j;
    j["n"] = cg.fuzzy.shape().n;
    j["d"] = cg.fuzzy.shape().d;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : cg.fuzzy.terms())
        j["terms"].push_back({{"perm", t.perm.image()}, {"weight", t.weight}});
    j["traced"] = std::vector<int>(cg.traced.begin(), cg.traced.end());
    return j.dump();
}

std::string to_json(const FuzzyChannel& ch) {
    return to_json(CoarseGraining{ch, {}});
}

CoarseGraining channel_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SystemShape shape{j.at("n").get<int>(), j.at("d").get<int>()};
    std::vector<FuzzyChannel::Term> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({t.at("weight").get<double>(),
                         Permutation(t.at("perm").get<std::vector<int>>())});
    std::set<int> traced;
    if (j.contains("traced"))
        for (int i : j.at("traced")) traced.insert(i);
    return CoarseGraining{FuzzyChannel(shape, std::move(terms)), std::move(traced)};
}

}  // namespace fuzzgrain
