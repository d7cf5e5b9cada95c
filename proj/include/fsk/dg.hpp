// dg.hpp - dyadic annuli, ball averages, and Davies-Gaffney estimate checks
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fsk/norms.hpp"
#include "fsk/op.hpp"

namespace fsk {

// Heaviside step with theta(0) = 1.
constexpr double heaviside(int x) { return x >= 0 ? 1.0 : 0.0; }

// Flattened index of the node at the coordinate origin.
int origin_node(const GridSpec& grid);

// Largest annulus index worth measuring: the first k whose inner radius
// already clears every torus distance caps the profile.
int max_annulus_index(const GridSpec& grid, double r);

// Dyadic annulus around a grid node: k = 0 is the ball B_x(r); k >= 1 is
// B_x(2^k r) \ B_x(2^{k-1} r) in the torus metric. For fixed (x, r) the
// masks over k partition the grid.
struct DyadicAnnulus {
    int center = 0;
    double base_radius = 1.0;
    int index = 0;
};

std::vector<std::uint8_t> annulus_mask(const DyadicAnnulus& a, const GridSpec& grid);

enum class DGVariant { plain, restricted, dual };

// Exponents of a dyadic (p,q,sigma) estimate with per-annulus envelope
// r^{-d(1/p-1/q)} g(2^k) 2^{kd/sigma}, g(lambda) = (1+lambda)^{-beta}.
struct DGParams {
    double p = 1.0;
    double q = 2.0;
    double sigma = 2.0;
    double beta = 2.0;
    DGVariant variant = DGVariant::plain;

    // admissibility: plain requires beta > d(1/sigma + 1/q); restricted
    // requires beta > d(1/p + 1/sigma); dual requires p in [1,2], q = p',
    // beta > d(1/2 + 1/p'). sigma = inf is allowed (d/sigma = 0).
    void validate(int d) const;
};

struct DGReport {
    std::vector<int> ks;
    std::vector<double> norms;        // measured per-annulus norms (upper bounds)
    std::vector<double> norms_lower;
    std::vector<double> envelopes;    // r^{-d(1/p-1/q)} g(2^k) 2^{kd/sigma}
    std::vector<std::uint8_t> in_fit; // rows used by the slope regression
    double fitted_CDG = 0.0;   // max over k of norms / envelopes
    double fitted_slope = 0.0; // log2 decay per k over the regression rows
    double slope_target = 0.0; // -(beta - d/sigma)
    bool norm_uncertain = false;
    bool pass = false;
};

// Per-annulus norms ||1_{B_x(r)} K 1_{A_2(x,r,k)}||_{p->q} for k = 0..Kmax
// with the fitted constant and log2 slope. The regression uses k >= 2 rows
// with positive norms whose outer radius stays within half the box length
// (wrap-around contaminates the outermost shells). Throws when every annulus
// beyond k = 1 is empty: the profile is degenerate at this radius.
DGReport dg_profile(const KernelMatrix& K, int x, double r, const DGParams& params,
                    int Kmax, double slope_tol = 0.1);

// Flat record format: one row per annulus index, fitted summary in '#' lines.
void write_dg_report(std::ostream& os, const DGReport& rep);

struct EquivalenceReport {
    double envelope_constant = 0.0; // max |K| r^d (1 + dist/r)^e, e = beta - d/sigma
    double profile_constant = 0.0;  // (1,inf,sigma) C_DG fitted at the origin node
    double ratio_a = 1.0;           // max(env/profile, profile/env)
    int worst_row = 0;              // pair achieving the envelope constant
    int worst_col = 0;
    double annulus_constant = 0.0;  // max_k norm_k / (C_env r^{-d} (1+2^k theta(k-2))^{-e})
    double ratio_b = 1.0;
    bool pass_a = false;
    bool pass_b = false;
};

// Both directions of the pointwise/annulus equivalence, slack factor 8:
// (a) the global pointwise envelope constant is within the slack of the
// profile constant fitted at the origin node; (b) the per-annulus max-entry
// norms are recovered from the measured envelope. A zero kernel passes with
// zero constants.
EquivalenceReport pointwise_equivalence_check(const KernelMatrix& K, double r,
                                              double beta, double sigma);

// (N_{p,q,r} f)(x) = r^{-d/q} ||1_{B_x(r)} f||_p with weighted discrete
// norms over torus balls; q = p gives N_{p,r}. Requires r >= h.
std::vector<double> ball_average(const GridSpec& grid, std::span<const double> f,
                                 double p, double q, double r);

struct HypercontractiveReport {
    std::vector<double> radii;
    std::vector<double> constants;  // ||T_r||_{p->q} / (c_dg r^{-d(1/p-1/q)})
    double spread = 0.0;            // max/min of constants
    double semigroup_defect = 0.0;  // gap in ||T_t||_{p->2}^2 = ||T_{2t}||_{p->p'}
    double duality_defect = 0.0;    // relative |(1->2) - (2->inf)| mismatch
    bool pass = false;
};

// Sweeps a decade of radii r in [r0, 10 r0] with t = r^alpha, fits the
// constant in ||T_r||_{p->q} <= C c_dg r^{-d(1/p-1/q)}, and when q = p'
// checks the square-root relation against the doubled time. Norm intervals
// are compared as intervals; the defect is their relative gap.
HypercontractiveReport check_hypercontractive(const DiscreteOperator& op,
                                              const DGParams& params, double c_dg,
                                              double r0, int steps = 5);

struct TwoRadiusReport {
    std::vector<int> ks;
    std::vector<double> measured;
    std::vector<double> rhs_with_volume; // full two-radius envelope
    std::vector<double> rhs_improved;    // volume factor dropped for k in {0,1}
    double fitted_c45 = 0.0;
    double fitted_c46 = 0.0;
    bool pass = false;
};

// ||1_{B_x(r0)} K 1_{A_2(x,r0,k)}||_{p->q} against the two-radius envelope
//   c_dg r^{-d(1/p-1/q)} (1+|B|/r^d)^{1/q}
//     [ (dist(B,A_k)/r)^{-beta} (|A_k|/r^d)^{1/sigma} theta(k-2) + theta(1-k) ]
// with the improved variant keeping the volume factor on the k >= 2 term
// only. Distances and volumes are measured on the grid.
TwoRadiusReport check_two_radius(const KernelMatrix& K, double r, double r0, int x,
                                 const DGParams& params, int Kmax, double c_dg);

struct GeomCheckReport {
    long long trials = 0;
    long long witnessed_annulus_pairs = 0;
    long long witnessed_ball_hits = 0;
    long long violations = 0;
};

// Randomized Euclidean check of the annulus intersection constraints: a
// witnessed A_2(z,r,j) and A_2(x,r0,k) intersection with j,k >= 2 forces
// 2^{k-3} r0 <= 2^j r <= 2^{k+3} r0; A_2(z,r,j) meeting B_x(r0) with j >= 1
// forces (2^{j-1}-1) r <= 2 r0. Configurations sample |x-z| <= r + r0 and
// concrete witness points; the returned violation count must be zero.
GeomCheckReport check_geom_annuli(long long trials, std::uint64_t seed);

struct DualCheckReport {
    DGReport base;     // (p, p', sigma=p') profile
    DGReport to_two;   // (p, 2, sigma=p') profile
    DGReport from_two; // (2, p', sigma=2) profile
    bool pass = false;
};

// Profiles implied by a (p,p',p') estimate through duality. At p = 2 all
// three coincide and the fitted constants must agree within a factor 2.
DualCheckReport check_dual(const KernelMatrix& K, double p, double r, int x,
                           double beta, int Kmax);

struct LpBoundReport {
    DGReport profile; // (p, p, sigma=p') profile at r0
    std::vector<double> radii;
    std::vector<double> norms; // ||T_r||_{p->p} upper bounds over the decade
    std::vector<double> norms_lower;
    double spread = 0.0;
    bool pass = false;
};

// (p,p,p') profile at r0 (its envelope g(2^k) 2^{kd/p'} carries no r power)
// plus uniform-in-r boundedness of ||T_r||_{p->p} across a decade, t = r^alpha.
LpBoundReport check_lp_bounded(const DiscreteOperator& op, double p, double r0,
                               double beta, int x, int Kmax, int steps = 5);

} // namespace fsk
