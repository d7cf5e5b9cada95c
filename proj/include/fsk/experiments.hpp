// experiments.hpp - end-to-end verification suites for the complex-time bounds
#pragma once

#include "fsk/config.hpp"
#include "fsk/report.hpp"

namespace fsk {

// Weighted L2 tail bound: for each (theta, |z|, rho) the tail mass of the
// kernel column against (|z|cos theta)^{-d/alpha} (1+rho)^{-(d+2alpha)(1-|theta|/gamma)};
// closed-form cross-checks where the free kernel is available.
ExperimentResult run_cor_plapplied(const ExperimentConfig& cfg);

// Pointwise envelope: |K_z(x,y)| against
// (|z|cos theta)^{-d/alpha} (1+|x-y|/|z|^{1/alpha})^{-(d+alpha)(1-|theta|/gamma)},
// plus the far-field tail slope at theta = 0 and the origin-value oracle.
ExperimentResult run_cor_plapplied2(const ExperimentConfig& cfg);

// Complex-time dyadic (p,q,sigma) bounds from a verified real-time profile:
// annulus decay 2^{-k beta_eff}, sector prefactor, and the integrated p->q bound.
ExperimentResult run_thm_plgge(const ExperimentConfig& cfg);

// Dual-profile consequences: (2,p') and (p,2) complex-time annulus bounds with
// exponents (beta-d/2) and (beta-d/p') damped by the sector factor, and the
// transpose-conjugate duality identity.
ExperimentResult run_cor_plggecor(const ExperimentConfig& cfg);

// Uniform p->p bounds at admissible angles; inadmissible angles are skipped
// with the sector-condition reason.
ExperimentResult run_cor_lp_complex(const ExperimentConfig& cfg);

// Dispatch on cfg.id.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace fsk
