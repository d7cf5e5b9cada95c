#include <doctest.h>

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fsk/norms.hpp"
#include "fsk/op.hpp"

using namespace fsk;

namespace {

// d=1 torus wrapper so KernelMatrix bookkeeping (size, weight) is consistent
KernelMatrix make_matrix(int n, double L, std::vector<std::complex<double>> vals) {
    KernelMatrix K;
    K.grid = GridSpec{1, n, L};
    K.weight = K.grid.h();
    K.values = std::move(vals);
    return K;
}

KernelMatrix transpose(const KernelMatrix& K) {
    KernelMatrix T = K;
    const int n = K.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T.values[j * n + i] = K.values[i * n + j];
    return T;
}

std::vector<std::complex<double>> seeded_complex(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> v(count);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

} // namespace

TEST_CASE("weighted lp norms and conjugate exponents") {
    const double w = 0.25;
    std::vector<double> f{3.0, -3.0, 3.0, 3.0};
    CHECK(lp_norm(f, 1.0, w) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(lp_norm(f, 2.0, w) == doctest::Approx(3.0).epsilon(1e-14));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(lp_norm(f, inf, w) == doctest::Approx(3.0).epsilon(1e-14));
    std::vector<std::complex<double>> fc{{3.0, 4.0}, {0.0, 0.0}};
    CHECK(lp_norm(fc, 2.0, 0.5) == doctest::Approx(5.0 * std::sqrt(0.5)).epsilon(1e-14));

    CHECK(conjugate_exponent(1.0) == inf);
    CHECK(conjugate_exponent(inf) == doctest::Approx(1.0));
    CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("exact corner norms match direct formulas") {
    const int n = 4;
    const double L = 2.0;
    auto vals = seeded_complex(n * n, 7);
    const KernelMatrix K = make_matrix(n, L, vals);
    const double w = K.weight;
    const double inf = std::numeric_limits<double>::infinity();

    double max_entry = 0.0, max_col1 = 0.0, max_col2 = 0.0, max_row1 = 0.0, max_row2 = 0.0;
    for (int j = 0; j < n; ++j) {
        double c1 = 0.0, c2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(K.at(i, j));
            max_entry = std::max(max_entry, m);
            c1 += m * w;
            c2 += m * m * w;
        }
        max_col1 = std::max(max_col1, c1);
        max_col2 = std::max(max_col2, std::sqrt(c2));
    }
    for (int i = 0; i < n; ++i) {
        double r1 = 0.0, r2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double m = std::abs(K.at(i, j));
            r1 += m * w;
            r2 += m * m * w;
        }
        max_row1 = std::max(max_row1, r1);
        max_row2 = std::max(max_row2, std::sqrt(r2));
    }

    auto one_one = opnorm(K, 1.0, 1.0);
    auto one_two = opnorm(K, 1.0, 2.0);
    auto one_inf = opnorm(K, 1.0, inf);
    auto two_inf = opnorm(K, 2.0, inf);
    auto inf_inf = opnorm(K, inf, inf);
    for (auto* e : {&one_one, &one_two, &one_inf, &two_inf, &inf_inf}) {
        CHECK(e->exact);
        CHECK(e->lower == e->upper);
    }
    CHECK(one_one.upper == doctest::Approx(max_col1).epsilon(1e-14));
    CHECK(one_two.upper == doctest::Approx(max_col2).epsilon(1e-14));
    CHECK(one_inf.upper == doctest::Approx(max_entry).epsilon(1e-14));
    CHECK(two_inf.upper == doctest::Approx(max_row2).epsilon(1e-14));
    CHECK(inf_inf.upper == doctest::Approx(max_row1).epsilon(1e-14));

    CHECK_THROWS_AS(opnorm(K, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(opnorm(K, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("2->2 norm matches a LAPACK singular value oracle") {
    const int n = 8;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a(n * n);
    std::vector<std::complex<double>> vals(n * n);
    for (int i = 0; i < n * n; ++i) {
        a[i] = g(rng);
        vals[i] = a[i];
    }
    const KernelMatrix K = make_matrix(n, 3.0, vals);

    std::vector<double> s(n), superb(n - 1);
    const int info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'N', 'N', n, n, a.data(), n,
                                    s.data(), nullptr, 1, nullptr, 1, superb.data());
    REQUIRE(info == 0);
    const auto est = opnorm(K, 2.0, 2.0);
    CHECK(est.exact);
    CHECK(est.upper == doctest::Approx(s[0] * K.weight).epsilon(1e-10));
}

TEST_CASE("identity and rank-one operators") {
    const int n = 6;
    const double L = 3.0;
    const double c = 1.7;
    std::vector<std::complex<double>> id(n * n, 0.0);
    KernelMatrix probe = make_matrix(n, L, id);
    for (int i = 0; i < n; ++i) probe.values[i * n + i] = c / probe.weight;
    CHECK(opnorm(probe, 2.0, 2.0).upper == doctest::Approx(c).epsilon(1e-12));

    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = g(rng);
    for (auto& x : v) x = g(rng);
    std::vector<std::complex<double>> vals(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals[i * n + j] = u[i] * v[j];
    const KernelMatrix R = make_matrix(n, L, vals);
    const double want = lp_norm(u, 2.0, R.weight) * lp_norm(v, 2.0, R.weight);
    CHECK(opnorm(R, 2.0, 2.0).upper == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("transpose duality of the (1,2) and (2,inf) corners") {
    const int n = 12;
    const KernelMatrix K = make_matrix(n, 5.0, seeded_complex(n * n, 31));
    const KernelMatrix KT = transpose(K);
    const double inf = std::numeric_limits<double>::infinity();
    const double a = opnorm(K, 1.0, 2.0).upper;
    const double b = opnorm(KT, 2.0, inf).upper;
    CHECK(std::abs(a - b) <= 1e-10 * std::max(a, b));
}

TEST_CASE("masked norms act on the selected submatrix") {
    const int n = 5;
    const KernelMatrix K = make_matrix(n, 2.5, seeded_complex(n * n, 41));
    std::vector<std::uint8_t> rows{0, 1, 0, 1, 0}; // {1, 3}
    std::vector<std::uint8_t> cols{1, 0, 1, 0, 1}; // {0, 2, 4}
    const double w = K.weight;

    double want12 = 0.0;
    for (int j : {0, 2, 4}) {
        double acc = 0.0;
        for (int i : {1, 3}) acc += std::norm(K.at(i, j)) * w;
        want12 = std::max(want12, std::sqrt(acc));
    }
    CHECK(opnorm_masked(K, rows, cols, 1.0, 2.0).upper ==
          doctest::Approx(want12).epsilon(1e-14));

    // empty selection has zero norm
    std::vector<std::uint8_t> none(n, 0);
    const auto z = opnorm_masked(K, none, cols, 2.0, 2.0);
    CHECK(z.upper == 0.0);
    CHECK(z.exact);
}

TEST_CASE("interpolated pair is sandwiched by a sphere-sampling oracle") {
    const int n = 6;
    const double p = 1.5, q = 3.0;
    std::mt19937_64 rng(53);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> vals(n * n);
    std::vector<double> m(n * n);
    for (int i = 0; i < n * n; ++i) {
        m[i] = g(rng);
        vals[i] = m[i];
    }
    const KernelMatrix K = make_matrix(n, 3.0, vals);
    const double w = K.weight;

    auto ratio = [&](const std::vector<double>& f) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) y[i] += m[i * n + j] * f[j];
        for (auto& x : y) x *= w;
        return lp_norm(y, q, w) / lp_norm(f, p, w);
    };

    // dense random sample of the unit sphere, then derivative-free polish
    double brute = 0.0;
    std::vector<double> best(n, 1.0);
    std::vector<double> f(n);
    for (int trial = 0; trial < 60000; ++trial) {
        for (auto& x : f) x = g(rng);
        const double r = ratio(f);
        if (r > brute) { brute = r; best = f; }
    }
    std::vector<double> cand(n);
    double step = 0.3;
    for (int it = 0; it < 30000; ++it) {
        cand = best;
        for (auto& x : cand) x += step * g(rng);
        const double r = ratio(cand);
        if (r > brute) { brute = r; best = cand; }
        if (it % 3000 == 2999) step *= 0.5;
    }

    const auto est = opnorm(K, p, q);
    CHECK_FALSE(est.exact);
    CHECK(est.lower <= est.upper);
    CHECK(brute <= est.upper * (1.0 + 1e-9));
    CHECK(est.lower <= brute * (1.0 + 1e-3));
    CHECK_FALSE(est.uncertain);
    CHECK(est.upper <= 3.0 * est.lower);
}

TEST_CASE("riesz-thorin upper bound is at least as good as the diagonal segment") {
    const int n = 7;
    const KernelMatrix K = make_matrix(n, 3.5, seeded_complex(n * n, 61));
    const double n11 = opnorm(K, 1.0, 1.0).upper;
    const double n22 = opnorm(K, 2.0, 2.0).upper;
    // 1/1.5 = 2/3 sits at t = 2/3 between (1,1) and (1/2,1/2)
    const double segment = std::pow(n11, 1.0 / 3.0) * std::pow(n22, 2.0 / 3.0);
    const auto est = opnorm(K, 1.5, 1.5);
    CHECK(est.upper <= segment * (1.0 + 1e-12));
    CHECK(est.lower <= est.upper);
}
