#include "fuzzgrain/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fuzzgrain {

GammaSignature::GammaSignature(int d, std::vector<int> counts)
    : d_(d), counts_(std::move(counts)) {
    if (d_ < 2) throw std::invalid_argument("GammaSignature: d must be >= 2");
    if (counts_.size() != static_cast<std::size_t>(d_) * d_)
        throw std::invalid_argument("GammaSignature: need d*d counts");
    for (int c : counts_)
        if (c < 0) throw std::invalid_argument("GammaSignature: negative count");
}

int GammaSignature::n() const {
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

GammaSignature GammaSignature::transposed() const {
    std::vector<int> t(counts_.size());
    for (int l = 0; l < d_; ++l)
        for (int lp = 0; lp < d_; ++lp) t[lp * d_ + l] = counts_[l * d_ + lp];
    return GammaSignature(d_, std::move(t));
}

GammaSignature GammaSignature::relabeled(const Permutation& q_rows,
                                         const Permutation& q_cols) const {
    if (q_rows.size() != d_ || q_cols.size() != d_)
        throw std::invalid_argument("GammaSignature: relabeling size must be d");
    std::vector<int> t(counts_.size());
    for (int l = 0; l < d_; ++l)
        for (int lp = 0; lp < d_; ++lp) t[q_rows(l) * d_ + q_cols(lp)] = counts_[l * d_ + lp];
    return GammaSignature(d_, std::move(t));
}

GammaSignature GammaSignature::diagonal(int d, const std::vector<int>& diag) {
    if (diag.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("GammaSignature: need d diagonal entries");
    std::vector<int> counts(static_cast<std::size_t>(d) * d, 0);
    for (int l = 0; l < d; ++l) counts[l * d + l] = diag[l];
    return GammaSignature(d, std::move(counts));
}

GammaSignature gamma_of(const KetBra& kb, int d) {
    std::vector<int> counts(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < kb.n(); ++i) ++counts[kb.code(i, d)];
    return GammaSignature(d, std::move(counts));
}

namespace {

void compositions(int remaining, int slot, int slots, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
    if (slot == slots - 1) {
        cur[slot] = remaining;
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        cur[slot] = v;
        compositions(remaining - v, slot + 1, slots, cur, out);
    }
}

}  // namespace

std::vector<GammaSignature> enumerate_sectors(SystemShape shape) {
    const int slots = shape.d * shape.d;
    std::vector<std::vector<int>> all;
    std::vector<int> cur(slots);
    compositions(shape.n, 0, slots, cur, all);
    std::vector<GammaSignature> out;
    out.reserve(all.size());
    for (auto& c : all) out.emplace_back(shape.d, std::move(c));
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t sector_count(SystemShape shape) {
    // binomial(d^2 + n - 1, n), stars and bars
    const int top = shape.d * shape.d + shape.n - 1;
    std::size_t result = 1;
    for (int k = 1; k <= shape.n; ++k)
        result = result * static_cast<std::size_t>(top - shape.n + k) / k;
    return result;
}

std::vector<KetBra> sector_basis(const GammaSignature& gamma, SystemShape shape) {
    if (gamma.d() != shape.d || gamma.n() != shape.n)
        throw std::invalid_argument("sector_basis: gamma inconsistent with shape");
    const int d = shape.d;
    std::vector<int> codes;
    for (int c = 0; c < d * d; ++c)
        codes.insert(codes.end(), gamma.counts()[c], c);

    std::vector<KetBra> basis;
    do {
        KetBra kb;
        kb.x.resize(codes.size());
        kb.y.resize(codes.size());
        for (std::size_t i = 0; i < codes.size(); ++i) {
            kb.x[i] = codes[i] / d;
            kb.y[i] = codes[i] % d;
        }
        basis.push_back(std::move(kb));
    } while (std::next_permutation(codes.begin(), codes.end()));
    std::sort(basis.begin(), basis.end());
    return basis;
}

std::size_t sector_size(const GammaSignature& gamma) {
    // multinomial n! / prod gamma_{l,l'}!
    std::size_t result = 1;
    int placed = 0;
    for (int c : gamma.counts()) {
        for (int k = 1; k <= c; ++k) {
            ++placed;
            result = result * static_cast<std::size_t>(placed) / k;
        }
    }
    return result;
}

SectorBlock block(const FuzzyChannel& ch, const GammaSignature& gamma) {
    auto basis = sector_basis(gamma, ch.shape());
    std::map<KetBra, int> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);

    RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(basis.size()),
                                    static_cast<Eigen::Index>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        for (const auto& t : ch.terms()) {
            const auto image = permute_ketbra(basis[b], t.perm);
            const auto it = index.find(image);
            if (it == index.end())
                throw std::logic_error("block: permutation left the sector");
            m(it->second, static_cast<Eigen::Index>(b)) += t.weight;
        }
    }
    return SectorBlock{gamma, std::move(basis), std::move(m)};
}

KetBra reference_ketbra(const GammaSignature& gamma) {
    const int d = gamma.d();
    KetBra kb;
    for (int l = 0; l < d; ++l)
        for (int lp = 0; lp < d; ++lp)
            for (int k = 0; k < gamma.at(l, lp); ++k) {
                kb.x.push_back(l);
                kb.y.push_back(lp);
            }
    return kb;
}

namespace {

// P with permute_ketbra(reference, P) == kb; stable sort by code, ties by
// particle index.
Permutation perm_from_reference(const KetBra& kb, int d) {
    std::vector<int> order(kb.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return kb.code(a, d) < kb.code(b, d); });
    return Permutation(std::move(order));
}

}  // namespace

Permutation connecting_permutation(const KetBra& kb1, const KetBra& kb2, int d) {
    if (!(gamma_of(kb1, d) == gamma_of(kb2, d)))
        throw std::invalid_argument(
            "connecting_permutation: ket-bras lie in different sectors");
    if (kb1 == kb2) return Permutation::identity(kb1.n());
    const auto p1 = perm_from_reference(kb1, d);
    const auto p2 = perm_from_reference(kb2, d);
    return compose(p2, p1.inverse());
}

namespace {

std::set<GammaSignature> gamma_orbit(const GammaSignature& gamma) {
    const int d = gamma.d();
    std::vector<Permutation> relabelings;
    {
        std::vector<int> img(d);
        std::iota(img.begin(), img.end(), 0);
        do {
            relabelings.emplace_back(img);
        } while (std::next_permutation(img.begin(), img.end()));
    }
    std::set<GammaSignature> orbit;
    const auto gt = gamma.transposed();
    for (const auto& q : relabelings)
        for (const auto& qp : relabelings) {
            orbit.insert(gamma.relabeled(q, qp));
            orbit.insert(gt.relabeled(q, qp));
        }
    return orbit;
}

}  // namespace

GammaSignature canonical_gamma(const GammaSignature& gamma) {
    return *gamma_orbit(gamma).begin();
}

int gamma_orbit_size(const GammaSignature& gamma) {
    return static_cast<int>(gamma_orbit(gamma).size());
}

QubitSectorLabel qubit_label(const GammaSignature& gamma) {
    if (gamma.d() != 2)
        throw std::invalid_argument("qubit_label: defined only for d = 2");
    QubitSectorLabel label;
    label.alpha = gamma.at(1, 0) + gamma.at(1, 1);
    label.beta = gamma.at(0, 1) + gamma.at(1, 1);
    label.gamma11 = gamma.at(1, 1);
    label.degeneracy = gamma_orbit_size(gamma);
    return label;
}

}  // namespace fuzzgrain
