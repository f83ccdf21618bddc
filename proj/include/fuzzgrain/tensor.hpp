#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstdint>
#include <set>
#include <vector>

namespace fuzzgrain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// n qudits, each of local dimension d. Row/column indices of operators are
/// base-d digit strings with particle 0 as the most significant digit.
struct SystemShape {
    int n = 1;
    int d = 2;

    std::size_t hilbert_dim() const;
    bool operator==(const SystemShape&) const = default;
};

/// Bijection on particle indices {0,...,n-1}. image()[i] is the position
/// particle i is sent to.
class Permutation {
public:
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);
    static Permutation swap(int n, int i, int j);
    static Permutation cycle(int n, const std::vector<int>& cyc);

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[i]; }
    const std::vector<int>& image() const { return image_; }

    Permutation inverse() const;
    bool is_identity() const;

    /// (a.then(b))(i) = b(a(i)): apply a first, then b.
    Permutation then(const Permutation& other) const;

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<int> image_;
};

/// Composition Q∘P: apply P first, then Q.
inline Permutation compose(const Permutation& q, const Permutation& p) {
    return p.then(q);
}

/// Dense operator on the n-qudit Hilbert space.
struct DenseOperator {
    SystemShape shape;
    Matrix mat;

    DenseOperator() = default;
    DenseOperator(SystemShape s, Matrix m);

    static DenseOperator zero(SystemShape shape);
    static DenseOperator identity(SystemShape shape);
};

/// |x><y| with x, y base-d digit strings of length n.
struct KetBra {
    std::vector<int> x;
    std::vector<int> y;

    int n() const { return static_cast<int>(x.size()); }
    /// Single-particle ket-bra code of particle i, flattened row-major: x_i*d + y_i.
    int code(int i, int d) const { return x[i] * d + y[i]; }

    DenseOperator to_operator(SystemShape shape) const;

    bool operator==(const KetBra&) const = default;
    auto operator<=>(const KetBra&) const = default;
};

/// Hilbert-space index of a digit string (particle 0 most significant).
std::size_t index_of(const std::vector<int>& digits, int d);
std::vector<int> digits_of(std::size_t index, int n, int d);

/// P[rho] = P rho P^dagger; the output entry at (x', y') with x'_{P(i)} = x_i
/// equals the input entry at (x, y).
DenseOperator permute_particles(const DenseOperator& op, const Permutation& p);

/// Permutation action on a ket-bra: digit i moves to position P(i).
KetBra permute_ketbra(const KetBra& kb, const Permutation& p);

/// Trace over the given particle subset; tracing everything yields a 1x1
/// operator holding Tr(op). The surviving particles keep their relative order.
DenseOperator partial_trace(const DenseOperator& op, const std::set<int>& traced);

/// Hilbert-Schmidt pairing Tr(a^dagger b).
Complex hs_inner(const DenseOperator& a, const DenseOperator& b);

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);

/// Random full-rank density matrix: G G^dagger / Tr with G i.i.d. standard
/// complex Gaussian. Deterministic per seed.
DenseOperator random_density(SystemShape shape, std::uint64_t seed);

bool is_hermitian(const Matrix& m, double tol = 1e-10);

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

/// Stateless seed splitting: realization k of root seed s gets
/// split_seed(s, k). splitmix64 finalizer over s xor a k-dependent stream.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t counter);

}  // namespace fuzzgrain
