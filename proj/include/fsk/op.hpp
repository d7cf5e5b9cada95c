// op.hpp - discretized fractional Schrodinger operator on a periodic grid
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsk/complex_time.hpp"

namespace fsk {

// Periodic grid on the torus [-L/2, L/2)^d, n points per axis.
struct GridSpec {
    int d = 1;
    int n = 2;
    double box_length = 1.0;

    static constexpr int kMaxTotal = 4096; // dense eigendecomposition budget

    void validate() const;
    double h() const { return box_length / n; }
    int total() const;
    // coordinate of flattened node i (row-major over axes)
    std::vector<double> coords(int i) const;
    // Euclidean distance on the torus between flattened nodes i and j
    double torus_dist(int i, int j) const;
};

struct PotentialSpec {
    enum class Kind { zero, bounded_sample, hardy };
    Kind kind = Kind::zero;
    std::vector<double> values; // bounded_sample: one value per grid node
    double hardy_a = 0.0;       // hardy: coupling of a/max(|x|, cutoff)^alpha
    double hardy_cutoff = 0.0;  // hardy: regularization radius (0 = use h)

    static PotentialSpec zero() { return {}; }
    static PotentialSpec bounded(std::vector<double> v);
    static PotentialSpec hardy(double a, double cutoff = 0.0);
};

// Dense symmetric discretization of (-Delta)^{alpha/2} + V with its full
// spectral decomposition. Eigenvalues ascending; eigenvector j is the j-th
// column of the row-major eigenvectors array.
struct DiscreteOperator {
    GridSpec grid;
    double alpha = 1.0;
    PotentialSpec potential;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors; // row-major N x N, columns orthonormal
    double h_weight = 1.0;            // h^d quadrature weight per node

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Kernel matrix K[i][j] ~ e^{-zH}(x_i, x_j), row-major; the weighted action
// is (e^{-zH} f)(x_i) = sum_j K[i][j] f(x_j) h^d.
struct KernelMatrix {
    std::vector<std::complex<double>> values;
    ComplexTime z{1.0, 0.0};
    GridSpec grid;
    double weight = 1.0; // h^d

    int size() const { return grid.total(); }
    std::complex<double> at(int i, int j) const { return values[i * size() + j]; }
};

DiscreteOperator build_operator(const GridSpec& grid, double alpha,
                                const PotentialSpec& potential,
                                bool assert_nonnegative = false);

KernelMatrix semigroup_kernel(const DiscreteOperator& op, ComplexTime z);

// e^{-zH} f by spectral calculus (no kernel matrix materialized)
std::vector<std::complex<double>> apply_semigroup(const DiscreteOperator& op,
                                                  std::complex<double> z,
                                                  std::span<const std::complex<double>> f);

// | weighted l2 norm of e^{-isH} v - 1 | for a seeded random unit vector
double unitary_check(const DiscreteOperator& op, double s, std::uint64_t seed = 1);

// sup over columns y of sum_{x: torus_dist(x,y) > r} |K[x][y]|^2 h^d
double weighted_l2_tail(const KernelMatrix& K, double r);

// weighted composition (K1 o K2)[i][j] = sum_m K1[i][m] K2[m][j] h^d
KernelMatrix compose(const KernelMatrix& k1, const KernelMatrix& k2);

// plain-text export: header with grid metadata, then one row per line
void save_kernel_matrix(const std::string& path, const KernelMatrix& K);
KernelMatrix load_kernel_matrix(const std::string& path);

} // namespace fsk
