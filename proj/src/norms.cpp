// Weighted p->q operator norms: exact corner formulas, Riesz-Thorin upper
// bounds between the corners, Boyd projected power iteration for lower bounds.
#include "fsk/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

// Masked view of a kernel matrix; indices into the full row-major storage.
struct View {
    const KernelMatrix* K;
    std::vector<int> rows;
    std::vector<int> cols;
    double w; // h^d node weight

    std::complex<double> at(int ri, int cj) const {
        return K->values[static_cast<std::size_t>(rows[ri]) * K->size() + cols[cj]];
    }
    int nr() const { return static_cast<int>(rows.size()); }
    int nc() const { return static_cast<int>(cols.size()); }

    // y = M f (unweighted matrix action on the submatrix)
    void matvec(std::span<const std::complex<double>> f,
                std::span<std::complex<double>> y) const {
        const int N = K->size();
        for (int ri = 0; ri < nr(); ++ri) {
            const std::complex<double>* row =
                K->values.data() + static_cast<std::size_t>(rows[ri]) * N;
            std::complex<double> acc = 0.0;
            for (int cj = 0; cj < nc(); ++cj) acc += row[cols[cj]] * f[cj];
            y[ri] = acc;
        }
    }
    // y = M^H u
    void matvec_adjoint(std::span<const std::complex<double>> u,
                        std::span<std::complex<double>> y) const {
        const int N = K->size();
        std::fill(y.begin(), y.end(), std::complex<double>(0.0));
        for (int ri = 0; ri < nr(); ++ri) {
            const std::complex<double>* row =
                K->values.data() + static_cast<std::size_t>(rows[ri]) * N;
            const std::complex<double> ui = u[ri];
            for (int cj = 0; cj < nc(); ++cj) y[cj] += std::conj(row[cols[cj]]) * ui;
        }
    }
};

std::vector<int> indices_from_mask(std::span<const std::uint8_t> mask, int n) {
    std::vector<int> idx;
    if (mask.empty()) {
        idx.resize(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    if (static_cast<int>(mask.size()) != n)
        throw std::invalid_argument("opnorm: mask length does not match grid size");
    for (int i = 0; i < n; ++i)
        if (mask[i]) idx.push_back(i);
    return idx;
}

// max over columns of the weighted column q-norm; exact value of the 1->q norm
double max_column_norm(const View& v, double q) {
    double best = 0.0;
    for (int cj = 0; cj < v.nc(); ++cj) {
        double acc = 0.0;
        if (std::isinf(q)) {
            for (int ri = 0; ri < v.nr(); ++ri) acc = std::max(acc, std::abs(v.at(ri, cj)));
        } else {
            for (int ri = 0; ri < v.nr(); ++ri) acc += std::pow(std::abs(v.at(ri, cj)), q);
            acc = std::pow(acc * v.w, 1.0 / q);
        }
        best = std::max(best, acc);
    }
    return best;
}

// max over rows of the weighted row p'-norm; exact value of the p->inf norm
double max_row_norm(const View& v, double p) {
    const double pc = conjugate_exponent(p);
    double best = 0.0;
    for (int ri = 0; ri < v.nr(); ++ri) {
        double acc = 0.0;
        if (std::isinf(pc)) {
            for (int cj = 0; cj < v.nc(); ++cj) acc = std::max(acc, std::abs(v.at(ri, cj)));
        } else {
            for (int cj = 0; cj < v.nc(); ++cj) acc += std::pow(std::abs(v.at(ri, cj)), pc);
            acc = std::pow(acc * v.w, 1.0 / pc);
        }
        best = std::max(best, acc);
    }
    return best;
}

// Top singular value of the submatrix by power iteration on M^H M; the
// weighted 2->2 norm is w times this. Deterministic LCG start.
double top_singular_value(const View& v) {
    const int nr = v.nr();
    const int nc = v.nc();
    std::vector<std::complex<double>> f(nc), g(nr), h(nc);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    };
    for (int j = 0; j < nc; ++j) f[j] = {1.0 + 0.25 * next(), 0.25 * next()};

    double sigma2 = 0.0;
    for (int it = 0; it < 5000; ++it) {
        double nf = 0.0;
        for (auto& x : f) nf += std::norm(x);
        nf = std::sqrt(nf);
        if (nf == 0.0) return 0.0;
        for (auto& x : f) x /= nf;
        v.matvec(f, g);
        double ng2 = 0.0;
        for (auto& x : g) ng2 += std::norm(x);
        const double prev = sigma2;
        sigma2 = ng2; // ||Mf||^2 with ||f|| = 1
        v.matvec_adjoint(g, h);
        f.swap(h);
        if (it > 4 && std::abs(sigma2 - prev) <= 1e-15 * std::max(sigma2, prev)) break;
    }
    return std::sqrt(sigma2);
}

double weighted_lp(std::span<const std::complex<double>> f, double p, double w) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& x : f) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (const auto& x : f) acc += std::pow(std::abs(x), p);
    return std::pow(acc * w, 1.0 / p);
}

// Boyd projected power iteration; every Rayleigh ratio is a valid lower bound.
// Requires 1 < p < inf and 1 < q < inf (other pairs hit the exact paths).
double boyd_lower_bound(const View& v, double p, double q) {
    const int nr = v.nr();
    const int nc = v.nc();
    const double pc = conjugate_exponent(p);
    std::vector<std::complex<double>> f(nc), g(nr), u(nr), h(nc);

    // delta at the strongest column (by 2-norm) as the second start
    int jbest = 0;
    double cbest = -1.0;
    for (int cj = 0; cj < nc; ++cj) {
        double acc = 0.0;
        for (int ri = 0; ri < nr; ++ri) acc += std::norm(v.at(ri, cj));
        if (acc > cbest) { cbest = acc; jbest = cj; }
    }

    double best = 0.0;
    for (int start = 0; start < 2; ++start) {
        if (start == 0) {
            std::fill(f.begin(), f.end(), std::complex<double>(1.0));
        } else {
            std::fill(f.begin(), f.end(), std::complex<double>(0.0));
            f[jbest] = 1.0;
        }
        for (int it = 0; it < 48; ++it) {
            const double nf = weighted_lp(f, p, v.w);
            if (nf == 0.0) break;
            for (auto& x : f) x /= nf;
            v.matvec(f, g);
            double ng = 0.0; // weighted q-norm of the operator output g*w
            for (int i = 0; i < nr; ++i) ng += std::pow(std::abs(g[i]) * v.w, q);
            ng = std::pow(ng * v.w, 1.0 / q);
            best = std::max(best, ng);
            // dualize in q, pull back, dualize in p'
            for (int i = 0; i < nr; ++i) {
                const double m = std::abs(g[i]);
                u[i] = (m == 0.0) ? 0.0 : std::pow(m, q - 1.0) * (g[i] / m);
            }
            v.matvec_adjoint(u, h);
            for (int j = 0; j < nc; ++j) {
                const double m = std::abs(h[j]);
                f[j] = (m == 0.0) ? 0.0 : std::pow(m, pc - 1.0) * (h[j] / m);
            }
        }
    }
    return best;
}

double exact_norm(const View& v, double p, double q) {
    if (near(p, 1.0)) return max_column_norm(v, q);
    if (std::isinf(q)) return max_row_norm(v, p);
    if (near(p, 2.0) && near(q, 2.0)) return v.w * top_singular_value(v);
    throw std::logic_error("exact_norm: pair is not an exact corner");
}

// Riesz-Thorin upper bound: minimum over convex decompositions of the target
// (1/p, 1/q) into exact corners of the product of corner norms raised to the
// barycentric weights. The corner hull covers the whole triangle 1/q <= 1/p.
double riesz_thorin_upper(const View& v, double p, double q) {
    struct Corner { double u, vq, p, q; };
    static const std::array<Corner, 6> corners = {{
        {1.0, 1.0, 1.0, 1.0},
        {1.0, 0.5, 1.0, 2.0},
        {1.0, 0.0, 1.0, kInf},
        {0.5, 0.5, 2.0, 2.0},
        {0.5, 0.0, 2.0, kInf},
        {0.0, 0.0, kInf, kInf},
    }};
    std::array<double, 6> nrm{};
    for (int i = 0; i < 6; ++i) nrm[i] = exact_norm(v, corners[i].p, corners[i].q);

    const double tu = 1.0 / p;
    const double tv = std::isinf(q) ? 0.0 : 1.0 / q;
    double upper = kInf;

    auto log_or_zero = [](double x) { return x > 0.0 ? std::log(x) : -kInf; };

    for (int i = 0; i < 6; ++i) {
        if (near(corners[i].u, tu) && near(corners[i].vq, tv))
            return nrm[i]; // target is itself a corner
        for (int j = i + 1; j < 6; ++j) {
            const double du = corners[j].u - corners[i].u;
            const double dv = corners[j].vq - corners[i].vq;
            double t;
            if (std::abs(du) >= std::abs(dv)) {
                if (std::abs(du) < 1e-14) continue;
                t = (tu - corners[i].u) / du;
                if (std::abs(corners[i].vq + t * dv - tv) > 1e-12) continue;
            } else {
                t = (tv - corners[i].vq) / dv;
                if (std::abs(corners[i].u + t * du - tu) > 1e-12) continue;
            }
            if (t < -1e-12 || t > 1.0 + 1e-12) continue;
            t = std::clamp(t, 0.0, 1.0);
            const double lg = (1.0 - t) * log_or_zero(nrm[i]) + t * log_or_zero(nrm[j]);
            upper = std::min(upper, std::exp(lg));
        }
    }
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            for (int k = j + 1; k < 6; ++k) {
                const double ax = corners[i].u, ay = corners[i].vq;
                const double bx = corners[j].u, by = corners[j].vq;
                const double cx = corners[k].u, cy = corners[k].vq;
                const double det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
                if (std::abs(det) < 1e-14) continue;
                const double l2 = ((tu - ax) * (cy - ay) - (cx - ax) * (tv - ay)) / det;
                const double l3 = ((bx - ax) * (tv - ay) - (tu - ax) * (by - ay)) / det;
                const double l1 = 1.0 - l2 - l3;
                if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) continue;
                const double lg = std::max(l1, 0.0) * log_or_zero(nrm[i]) +
                                  std::max(l2, 0.0) * log_or_zero(nrm[j]) +
                                  std::max(l3, 0.0) * log_or_zero(nrm[k]);
                upper = std::min(upper, std::exp(lg));
            }
    return upper;
}

} // namespace

double conjugate_exponent(double p) {
    if (near(p, 1.0)) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double lp_norm(std::span<const double> f, double p, double weight) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (double x : f) acc += std::pow(std::abs(x), p);
    return std::pow(acc * weight, 1.0 / p);
}

double lp_norm(std::span<const std::complex<double>> f, double p, double weight) {
    return weighted_lp(f, p, weight);
}

NormEstimate opnorm_masked(const KernelMatrix& K,
                           std::span<const std::uint8_t> row_mask,
                           std::span<const std::uint8_t> col_mask,
                           double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0))
        throw std::invalid_argument("opnorm: exponents must lie in [1, inf]");
    if (q < p - 1e-12)
        throw std::invalid_argument("opnorm: requires p <= q");

    View v{&K, indices_from_mask(row_mask, K.size()),
           indices_from_mask(col_mask, K.size()), K.weight};
    NormEstimate est;
    if (v.rows.empty() || v.cols.empty()) {
        est.exact = true;
        return est;
    }

    const bool corner = near(p, 1.0) || std::isinf(q) || (near(p, 2.0) && near(q, 2.0));
    if (corner) {
        est.lower = est.upper = exact_norm(v, p, q);
        est.exact = true;
        return est;
    }

    est.upper = riesz_thorin_upper(v, p, q);
    est.lower = boyd_lower_bound(v, p, q);
    est.lower = std::min(est.lower, est.upper); // guards rounding crossover
    est.uncertain = est.upper > 3.0 * est.lower;
    return est;
}

NormEstimate opnorm(const KernelMatrix& K, double p, double q) {
    return opnorm_masked(K, {}, {}, p, q);
}

} // namespace fsk
