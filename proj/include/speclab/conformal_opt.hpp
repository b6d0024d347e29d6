#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "speclab/fem.hpp"
#include "speclab/lambda_table.hpp"
#include "speclab/mesh.hpp"

namespace speclab {

struct GradientResult {
    Eigen::VectorXd gradient;   // d lambda_bar_k / d log rho, per dof
    std::vector<int> cluster;   // eigenvalue indices treated as one cluster
    bool cluster_below_k = false; // cluster reaches below index k (diagnostic, not fatal)
};

// First-order perturbation of lambda_bar_k = lambda_k * area with respect to
// per-vertex log-density. The stiffness is density independent, so only the
// mass term and the area normalization contribute. Near-degenerate
// eigenvalues (relative gap below cluster_tol) are handled by averaging the
// squared eigenfunctions over the cluster.
GradientResult eigenvalue_gradient(const DiscreteSurface& surface, const DensityField& density,
                                   const SpectrumResult& result, int k, double cluster_tol = 1e-6);

struct TraceEntry {
    double objective = 0.0; // lambda_bar_k after the step
    double step = 0.0;      // accepted step length (0 for the starting entry)
    int cluster_size = 1;
};

struct OptimizationTrace {
    std::vector<TraceEntry> iterates; // non-decreasing objectives
    DensityField final_density;
    double final_estimate = 0.0;
    std::string status;     // "converged" or "iteration-capped"
    std::string annotation; // e.g. supremum-not-attained note
    int eigensolves = 0;
};

enum class StartKind {
    UniformNoise,   // log-density = seeded smooth noise
    CollarPullback, // round metric transplanted through the collar chart
    Given,          // options.start
};

struct OptimizeOptions {
    int max_iterations = 300;
    double cluster_tol = 1e-6;
    double initial_step = 0.5;
    double step_max = 2.0;
    double min_increase = 1e-12;
    int max_rejections = 30;
    std::uint64_t seed = 7;
    double start_noise = 0.12;
    double solver_tol = 1e-9;
    // Ascent directions are filtered through two applications of
    // (M0 + r^2 K)^{-1} M0 with r = smoothing_factor * mean mesh spacing, so
    // iterates stay mesh-resolved and cannot chase spurious under-resolved
    // modes. 0 disables the filter.
    double smoothing_factor = 4.0;
    StartKind start_kind = StartKind::UniformNoise;
    std::optional<DensityField> start;
};

// Maximizes lambda_bar_k over the conformal densities of the surface by
// line-searched ascent; the result is a certified lower bound for the
// discrete maximum. Densities are renormalized to unit area each iterate.
OptimizationTrace maximize_normalized_eigenvalue(const DiscreteSurface& surface, int k,
                                                 const OptimizeOptions& options = {});

// Seeded smooth start field (low-order polynomial modes plus a little
// roughness); breaks the symmetry of critical flat starts.
DensityField noise_density(const DiscreteSurface& surface, std::uint64_t seed, double amplitude);

// The degeneration-construction start: the round limit metric pulled back
// through the collar chart (sech^2 profile in collar coordinates). For the
// torus the blob sits mid-collar (sphere limit); for Klein classes, centered
// on the 1-sided geodesic (projective-plane limit, to_rp2 = true) or on the
// 2-sided one (sphere limit).
DensityField collar_pullback_density(const DiscreteSurface& surface, bool to_rp2);

struct CombineResult {
    LambdaValue value;
    std::vector<int> composition; // one part per component
};

// Supremal eigenvalue of a disjoint union: max over compositions of k into
// parts assigned to components (positive parts on a subset when
// positive_parts, all parts >= 0 otherwise; the maxima agree since
// Lambda_0 = 0). The most balanced maximizing composition is returned
// (lexicographically smallest descending part multiset).
CombineResult combine_disjoint(const std::vector<std::vector<LambdaValue>>& columns, int k,
                               bool positive_parts = true);

struct RhoDeltaRow {
    double delta = 0.0;
    double lambda_bar = 0.0; // normalized closed-surface eigenvalue at rho_delta
    double lambda_raw = 0.0;
    double gap_to_neumann = 0.0; // lambda_raw - lambda^N_k(Omega)
};

struct RhoDeltaResult {
    std::vector<RhoDeltaRow> rows;
    double neumann_value = 0.0; // lambda^N_k of the subdomain
    double neumann_normalized = 0.0;
};

// Piecewise density 1 on the selected subdomain, delta outside (interface
// vertices take the inside value); per delta the closed-surface eigenvalue is
// compared against the Neumann eigenvalue of the subdomain. deltas must be
// positive and descending.
RhoDeltaResult rho_delta_experiment(const DiscreteSurface& surface,
                                    const std::vector<int>& subdomain_triangles,
                                    const std::vector<double>& deltas, int k,
                                    const SolveOptions& solve = {});

struct BallRemovalRow {
    double radius = 0.0;
    double lambda_neumann = 0.0; // lambda^N_k of the complement (raw)
    double gap_to_closed = 0.0;
};

struct BallRemovalResult {
    std::vector<BallRemovalRow> rows;
    double closed_value = 0.0; // raw lambda_k of the closed surface
};

// Neumann spectra of the surface minus geodesic balls around the given
// centers, for a descending list of radii (radius 0 rows reuse the closed
// spectrum). Throws BallsOverlap when the balls are not pairwise disjoint at
// the largest radius.
BallRemovalResult ball_removal_experiment(const DiscreteSurface& surface,
                                          const std::vector<std::array<double, 3>>& centers,
                                          const std::vector<double>& radii, int k,
                                          const SolveOptions& solve = {});

} // namespace speclab
