// operator_lab.cpp - periodic-grid discretization and spectral semigroup
#include "fsk/op.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fsk {

namespace {
using std::numbers::pi;

// signed frequency index for axis position a in 0..n-1: {-n/2 .. n/2-1}
int signed_index(int a, int n) { return (a < n / 2) ? a : a - n; }

// decompose flattened node index into per-axis positions
void unflatten(int i, int d, int n, int* pos) {
    for (int a = d - 1; a >= 0; --a) {
        pos[a] = i % n;
        i /= n;
    }
}
} // namespace

void GridSpec::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("GridSpec: d must be 1, 2 or 3");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("GridSpec: n must be even and >= 2");
    if (!(box_length > 0.0)) throw std::invalid_argument("GridSpec: box_length must be positive");
    double tot = 1.0;
    for (int a = 0; a < d; ++a) tot *= n;
    if (tot > kMaxTotal)
        throw std::invalid_argument("GridSpec: n^d exceeds the dense-solver cap");
}

int GridSpec::total() const {
    int t = 1;
    for (int a = 0; a < d; ++a) t *= n;
    return t;
}

std::vector<double> GridSpec::coords(int i) const {
    int pos[3];
    unflatten(i, d, n, pos);
    std::vector<double> x(d);
    for (int a = 0; a < d; ++a) x[a] = -box_length / 2.0 + pos[a] * h();
    return x;
}

double GridSpec::torus_dist(int i, int j) const {
    int pi_[3], pj[3];
    unflatten(i, d, n, pi_);
    unflatten(j, d, n, pj);
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
        double delta = std::abs(pi_[a] - pj[a]) * h();
        delta = std::min(delta, box_length - delta);
        s += delta * delta;
    }
    return std::sqrt(s);
}

PotentialSpec PotentialSpec::bounded(std::vector<double> v) {
    PotentialSpec p;
    p.kind = Kind::bounded_sample;
    p.values = std::move(v);
    return p;
}

PotentialSpec PotentialSpec::hardy(double a, double cutoff) {
    PotentialSpec p;
    p.kind = Kind::hardy;
    p.hardy_a = a;
    p.hardy_cutoff = cutoff;
    return p;
}

DiscreteOperator build_operator(const GridSpec& grid, double alpha,
                                const PotentialSpec& potential, bool assert_nonnegative) {
    grid.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("build_operator: alpha must be positive");
    const int N = grid.total();
    const int n = grid.n, d = grid.d;
    const double L = grid.box_length;

    // First circulant row: c[m] = (1/N) sum_k |2 pi k / L|^alpha cos(xi_k . x_m),
    // k ranging over {-n/2 .. n/2-1}^d. Imaginary parts vanish on grid
    // displacements (the Nyquist mode phase is a multiple of pi).
    std::vector<double> c(N, 0.0);
    std::vector<double> freq(n);
    for (int a = 0; a < n; ++a) freq[a] = 2.0 * pi * signed_index(a, n) / L;
    std::vector<double> symbol(N);
    int kpos[3];
    for (int k = 0; k < N; ++k) {
        unflatten(k, d, n, kpos);
        double s2 = 0.0;
        for (int a = 0; a < d; ++a) s2 += freq[kpos[a]] * freq[kpos[a]];
        symbol[k] = std::pow(s2, alpha / 2.0);
    }
    const double h = grid.h();
    int mpos[3];
    for (int m = 0; m < N; ++m) {
        unflatten(m, d, n, mpos);
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            unflatten(k, d, n, kpos);
            double phase = 0.0;
            for (int a = 0; a < d; ++a) phase += freq[kpos[a]] * (mpos[a] * h);
            acc += symbol[k] * std::cos(phase);
        }
        c[m] = acc / N;
    }

    // Dense symmetric assembly: T[i][j] = c[(i-j) mod grid]
    std::vector<double> A(static_cast<std::size_t>(N) * N);
    int ipos[3], jpos[3];
    for (int i = 0; i < N; ++i) {
        unflatten(i, d, n, ipos);
        for (int j = 0; j < N; ++j) {
            unflatten(j, d, n, jpos);
            int m = 0;
            for (int a = 0; a < d; ++a) {
                int delta = ipos[a] - jpos[a];
                if (delta < 0) delta += n;
                m = m * n + delta;
            }
            A[static_cast<std::size_t>(i) * N + j] = c[m];
        }
    }

    // Potential on the diagonal
    if (potential.kind == PotentialSpec::Kind::bounded_sample) {
        if (static_cast<int>(potential.values.size()) != N)
            throw std::invalid_argument("build_operator: potential sample size mismatch");
        for (int i = 0; i < N; ++i) A[static_cast<std::size_t>(i) * N + i] += potential.values[i];
    } else if (potential.kind == PotentialSpec::Kind::hardy) {
        if (!(alpha < std::min(2.0, static_cast<double>(d))))
            throw std::invalid_argument(
                "build_operator: hardy potential requires alpha < min(2, d)");
        const double cutoff = (potential.hardy_cutoff > 0.0) ? potential.hardy_cutoff : h;
        for (int i = 0; i < N; ++i) {
            const auto x = grid.coords(i);
            double r2 = 0.0;
            for (double xa : x) r2 += xa * xa;
            const double r = std::max(std::sqrt(r2), cutoff);
            A[static_cast<std::size_t>(i) * N + i] += potential.hardy_a / std::pow(r, alpha);
        }
    }

    DiscreteOperator op;
    op.grid = grid;
    op.alpha = alpha;
    op.potential = potential;
    op.h_weight = std::pow(h, d);
    op.eigenvalues.assign(N, 0.0);
    op.eigenvectors = std::move(A); // dsyevd overwrites with eigenvectors
    const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', N,
                                    op.eigenvectors.data(), N, op.eigenvalues.data());
    if (info != 0)
        throw std::runtime_error("build_operator: eigensolver failed, info=" +
                                 std::to_string(info));
    if (assert_nonnegative) {
        const double scale = std::max(std::abs(op.eigenvalues.back()), 1.0);
        if (op.eigenvalues.front() < -1e-8 * scale)
            throw std::runtime_error(
                "build_operator: quadratic form is not nonnegative, lambda_min=" +
                std::to_string(op.eigenvalues.front()));
    }
    return op;
}

KernelMatrix semigroup_kernel(const DiscreteOperator& op, ComplexTime z) {
    const int N = op.size();
    const std::complex<double> zv = z.value();

    // K = Phi diag(e^{-z lambda}) Phi^T / h^d, real and imaginary parts via
    // two real GEMMs on the scaled eigenvector matrix.
    std::vector<double> scaled_re(static_cast<std::size_t>(N) * N);
    std::vector<double> scaled_im(static_cast<std::size_t>(N) * N);
    for (int j = 0; j < N; ++j) {
        const std::complex<double> e = std::exp(-zv * op.eigenvalues[j]);
        for (int i = 0; i < N; ++i) {
            const double phi = op.eigenvectors[static_cast<std::size_t>(i) * N + j];
            scaled_re[static_cast<std::size_t>(i) * N + j] = phi * e.real();
            scaled_im[static_cast<std::size_t>(i) * N + j] = phi * e.imag();
        }
    }
    std::vector<double> kre(static_cast<std::size_t>(N) * N);
    std::vector<double> kim(static_cast<std::size_t>(N) * N);
    const double inv_w = 1.0 / op.h_weight;
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, N, N, N, inv_w, scaled_re.data(),
                N, op.eigenvectors.data(), N, 0.0, kre.data(), N);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, N, N, N, inv_w, scaled_im.data(),
                N, op.eigenvectors.data(), N, 0.0, kim.data(), N);

    KernelMatrix K;
    K.z = z;
    K.grid = op.grid;
    K.weight = op.h_weight;
    K.values.resize(static_cast<std::size_t>(N) * N);
    for (std::size_t i = 0; i < K.values.size(); ++i) K.values[i] = {kre[i], kim[i]};
    return K;
}

std::vector<std::complex<double>> apply_semigroup(const DiscreteOperator& op,
                                                  std::complex<double> z,
                                                  std::span<const std::complex<double>> f) {
    const int N = op.size();
    if (static_cast<int>(f.size()) != N)
        throw std::invalid_argument("apply_semigroup: vector size mismatch");
    if (!(z.real() > 0.0) && z.real() != 0.0)
        throw std::invalid_argument("apply_semigroup: need Re z >= 0");

    // coefficients c = Phi^T f, two real GEMVs per part
    std::vector<double> fre(N), fim(N), cre(N), cim(N);
    for (int i = 0; i < N; ++i) {
        fre[i] = f[i].real();
        fim[i] = f[i].imag();
    }
    cblas_dgemv(CblasRowMajor, CblasTrans, N, N, 1.0, op.eigenvectors.data(), N, fre.data(),
                1, 0.0, cre.data(), 1);
    cblas_dgemv(CblasRowMajor, CblasTrans, N, N, 1.0, op.eigenvectors.data(), N, fim.data(),
                1, 0.0, cim.data(), 1);
    for (int j = 0; j < N; ++j) {
        const std::complex<double> c =
            std::exp(-z * op.eigenvalues[j]) * std::complex<double>(cre[j], cim[j]);
        cre[j] = c.real();
        cim[j] = c.imag();
    }
    std::vector<double> ure(N), uim(N);
    cblas_dgemv(CblasRowMajor, CblasNoTrans, N, N, 1.0, op.eigenvectors.data(), N,
                cre.data(), 1, 0.0, ure.data(), 1);
    cblas_dgemv(CblasRowMajor, CblasNoTrans, N, N, 1.0, op.eigenvectors.data(), N,
                cim.data(), 1, 0.0, uim.data(), 1);
    std::vector<std::complex<double>> out(N);
    for (int i = 0; i < N; ++i) out[i] = {ure[i], uim[i]};
    return out;
}

double unitary_check(const DiscreteOperator& op, double s, std::uint64_t seed) {
    const int N = op.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> v(N);
    double norm2 = 0.0;
    for (auto& x : v) {
        x = {g(rng), g(rng)};
        norm2 += std::norm(x);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;

    const auto u = apply_semigroup(op, std::complex<double>(0.0, s), v);
    double out2 = 0.0;
    for (const auto& x : u) out2 += std::norm(x);
    return std::abs(std::sqrt(out2) - 1.0);
}

double weighted_l2_tail(const KernelMatrix& K, double r) {
    const int N = K.size();
    if (!(r > 0.0) || r >= K.grid.box_length / 2.0)
        throw std::invalid_argument("weighted_l2_tail: need 0 < r < L/2");
    double best = 0.0;
    for (int y = 0; y < N; ++y) {
        double acc = 0.0;
        for (int x = 0; x < N; ++x) {
            if (K.grid.torus_dist(x, y) > r) acc += std::norm(K.at(x, y));
        }
        best = std::max(best, acc * K.weight);
    }
    return best;
}

KernelMatrix compose(const KernelMatrix& k1, const KernelMatrix& k2) {
    const int N = k1.size();
    if (k2.size() != N || k1.grid.d != k2.grid.d || k1.grid.n != k2.grid.n)
        throw std::invalid_argument("compose: grid mismatch");
    KernelMatrix out;
    out.z = ComplexTime::from_value(k1.z.value() + k2.z.value());
    out.grid = k1.grid;
    out.weight = k1.weight;
    out.values.assign(static_cast<std::size_t>(N) * N, {0.0, 0.0});
    const std::complex<double> w{k1.weight, 0.0};
    const std::complex<double> one{1.0, 0.0}, zero{0.0, 0.0};
    cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, N, N, N, &w, k1.values.data(),
                N, k2.values.data(), N, &zero, out.values.data(), N);
    (void)one;
    return out;
}

void save_kernel_matrix(const std::string& path, const KernelMatrix& K) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_kernel_matrix: cannot open " + path);
    out << "# fsk kernel matrix v1\n";
    out << K.grid.d << " " << K.grid.n << " ";
    out.precision(17);
    out << K.grid.box_length << "\n";
    out << K.z.modulus() << " " << K.z.theta() << "\n";
    const int N = K.size();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const auto v = K.at(i, j);
            out << v.real() << " " << v.imag() << (j + 1 == N ? "" : " ");
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_kernel_matrix: write failed for " + path);
}

KernelMatrix load_kernel_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_kernel_matrix: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "# fsk kernel matrix v1")
        throw std::runtime_error("load_kernel_matrix: bad header in " + path);
    KernelMatrix K;
    double mod = 0.0, theta = 0.0;
    if (!(in >> K.grid.d >> K.grid.n >> K.grid.box_length >> mod >> theta))
        throw std::runtime_error("load_kernel_matrix: bad metadata in " + path);
    K.grid.validate();
    K.z = ComplexTime(mod, theta);
    K.weight = std::pow(K.grid.h(), K.grid.d);
    const int N = K.grid.total();
    K.values.resize(static_cast<std::size_t>(N) * N);
    for (auto& v : K.values) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im))
            throw std::runtime_error("load_kernel_matrix: truncated matrix in " + path);
        v = {re, im};
    }
    return K;
}

} // namespace fsk
