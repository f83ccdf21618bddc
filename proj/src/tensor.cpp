#include "fuzzgrain/tensor.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace fuzzgrain {

std::size_t SystemShape::hilbert_dim() const {
    if (n < 0) throw std::invalid_argument("SystemShape: n must be >= 0");
    if (d < 2) throw std::invalid_argument("SystemShape: d must be >= 2");
    std::size_t dim = 1;
    for (int i = 0; i < n; ++i) {
        if (dim > (std::size_t(1) << 40) / static_cast<std::size_t>(d))
            throw std::invalid_argument("SystemShape: d^n exceeds addressable range");
        dim *= static_cast<std::size_t>(d);
    }
    return dim;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<char> seen(image_.size(), 0);
    for (int v : image_) {
        if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v])
            throw std::invalid_argument("Permutation: image is not a bijection");
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i;
    return Permutation(std::move(img));
}

Permutation Permutation::swap(int n, int i, int j) {
    auto p = identity(n);
    std::swap(p.image_[i], p.image_[j]);
    return p;
}

Permutation Permutation::cycle(int n, const std::vector<int>& cyc) {
    auto p = identity(n);
    for (std::size_t k = 0; k < cyc.size(); ++k)
        p.image_[cyc[k]] = cyc[(k + 1) % cyc.size()];
    return Permutation(p.image_);
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (image_[i] != i) return false;
    return true;
}

Permutation Permutation::then(const Permutation& other) const {
    if (size() != other.size())
        throw std::invalid_argument("Permutation: size mismatch in composition");
    std::vector<int> img(image_.size());
    for (int i = 0; i < size(); ++i) img[i] = other.image_[image_[i]];
    return Permutation(std::move(img));
}

DenseOperator::DenseOperator(SystemShape s, Matrix m) : shape(s), mat(std::move(m)) {
    const auto dim = static_cast<Eigen::Index>(shape.hilbert_dim());
    if (mat.rows() != dim || mat.cols() != dim)
        throw std::invalid_argument("DenseOperator: matrix size does not match shape");
}

DenseOperator DenseOperator::zero(SystemShape shape) {
    const auto dim = static_cast<Eigen::Index>(shape.hilbert_dim());
    return DenseOperator(shape, Matrix::Zero(dim, dim));
}

DenseOperator DenseOperator::identity(SystemShape shape) {
    const auto dim = static_cast<Eigen::Index>(shape.hilbert_dim());
    return DenseOperator(shape, Matrix::Identity(dim, dim));
}

std::size_t index_of(const std::vector<int>& digits, int d) {
    std::size_t idx = 0;
    for (int dig : digits) {
        if (dig < 0 || dig >= d) throw std::out_of_range("digit out of range");
        idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(dig);
    }
    return idx;
}

std::vector<int> digits_of(std::size_t index, int n, int d) {
    std::vector<int> digits(n);
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % static_cast<std::size_t>(d));
        index /= static_cast<std::size_t>(d);
    }
    return digits;
}

DenseOperator KetBra::to_operator(SystemShape shape) const {
    if (n() != shape.n || y.size() != x.size())
        throw std::invalid_argument("KetBra: length does not match shape");
    auto op = DenseOperator::zero(shape);
    op.mat(static_cast<Eigen::Index>(index_of(x, shape.d)),
           static_cast<Eigen::Index>(index_of(y, shape.d))) = 1.0;
    return op;
}

namespace {

// Hilbert-index relabeling induced by a particle permutation.
std::vector<std::size_t> hilbert_permutation(SystemShape shape, const Permutation& p) {
    const std::size_t dim = shape.hilbert_dim();
    std::vector<std::size_t> map(dim);
    std::vector<int> out(shape.n);
    for (std::size_t h = 0; h < dim; ++h) {
        const auto in = digits_of(h, shape.n, shape.d);
        for (int i = 0; i < shape.n; ++i) out[p(i)] = in[i];
        map[h] = index_of(out, shape.d);
    }
    return map;
}

}  // namespace

DenseOperator permute_particles(const DenseOperator& op, const Permutation& p) {
    if (p.size() != op.shape.n)
        throw std::invalid_argument("permute_particles: permutation size mismatch");
    if (p.is_identity()) return op;
    const auto map = hilbert_permutation(op.shape, p);
    auto out = DenseOperator::zero(op.shape);
    const auto dim = static_cast<Eigen::Index>(map.size());
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            out.mat(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
                op.mat(r, c);
    return out;
}

KetBra permute_ketbra(const KetBra& kb, const Permutation& p) {
    if (p.size() != kb.n())
        throw std::invalid_argument("permute_ketbra: permutation size mismatch");
    KetBra out;
    out.x.resize(kb.x.size());
    out.y.resize(kb.y.size());
    for (int i = 0; i < kb.n(); ++i) {
        out.x[p(i)] = kb.x[i];
        out.y[p(i)] = kb.y[i];
    }
    return out;
}

DenseOperator partial_trace(const DenseOperator& op, const std::set<int>& traced) {
    const int n = op.shape.n;
    const int d = op.shape.d;
    for (int t : traced)
        if (t < 0 || t >= n) throw std::out_of_range("partial_trace: index out of range");

    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
        if (!traced.count(i)) kept.push_back(i);

    if (kept.empty()) {
        // full trace: 1x1 result
        DenseOperator out;
        out.shape = SystemShape{0, d};
        out.mat = Matrix::Constant(1, 1, op.mat.trace());
        return out;
    }

    const int nk = static_cast<int>(kept.size());
    SystemShape out_shape{nk, d};
    auto out = DenseOperator::zero(out_shape);
    const std::size_t kept_dim = out_shape.hilbert_dim();
    std::size_t traced_dim = 1;
    for (std::size_t i = 0; i < traced.size(); ++i) traced_dim *= static_cast<std::size_t>(d);
    std::vector<int> tr(traced.begin(), traced.end());

    std::vector<int> full_r(n), full_c(n);
    for (std::size_t a = 0; a < kept_dim; ++a) {
        const auto da = digits_of(a, nk, d);
        for (std::size_t b = 0; b < kept_dim; ++b) {
            const auto db = digits_of(b, nk, d);
            Complex sum = 0.0;
            for (std::size_t t = 0; t < traced_dim; ++t) {
                const auto dt = digits_of(t, static_cast<int>(tr.size()), d);
                for (int i = 0; i < nk; ++i) {
                    full_r[kept[i]] = da[i];
                    full_c[kept[i]] = db[i];
                }
                for (std::size_t i = 0; i < tr.size(); ++i) {
                    full_r[tr[i]] = dt[i];
                    full_c[tr[i]] = dt[i];
                }
                sum += op.mat(static_cast<Eigen::Index>(index_of(full_r, d)),
                              static_cast<Eigen::Index>(index_of(full_c, d)));
            }
            out.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
        }
    }
    return out;
}

Complex hs_inner(const DenseOperator& a, const DenseOperator& b) {
    if (a.shape != b.shape) throw std::invalid_argument("hs_inner: shape mismatch");
    return (a.mat.adjoint() * b.mat).trace();
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
    if (a.shape.d != b.shape.d)
        throw std::invalid_argument("tensor: local dimensions differ");
    SystemShape shape{a.shape.n + b.shape.n, a.shape.d};
    Matrix m(a.mat.rows() * b.mat.rows(), a.mat.cols() * b.mat.cols());
    for (Eigen::Index r = 0; r < a.mat.rows(); ++r)
        for (Eigen::Index c = 0; c < a.mat.cols(); ++c)
            m.block(r * b.mat.rows(), c * b.mat.cols(), b.mat.rows(), b.mat.cols()) =
                a.mat(r, c) * b.mat;
    return DenseOperator(shape, std::move(m));
}

DenseOperator random_density(SystemShape shape, std::uint64_t seed) {
    const auto dim = static_cast<Eigen::Index>(shape.hilbert_dim());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(r, c) = Complex(re, im);
        }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DenseOperator(shape, std::move(rho));
}

bool is_hermitian(const Matrix& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
    return solver.eigenvalues();
}

std::uint64_t split_seed(std::uint64_t root, std::uint64_t counter) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace fuzzgrain
