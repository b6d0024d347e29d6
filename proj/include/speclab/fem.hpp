#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <vector>

#include "speclab/mesh.hpp"

namespace speclab {

// Positive conformal density, stored in log form per glued dof. partition_tag
// optionally labels dofs by subdomain for piecewise densities (empty when
// unused).
struct DensityField {
    std::vector<double> log_values;
    std::vector<int> partition_tag;

    static DensityField uniform(int dof_count) {
        DensityField d;
        d.log_values.assign(static_cast<size_t>(dof_count), 0.0);
        return d;
    }

    double rho(int dof) const { return std::exp(log_values[static_cast<size_t>(dof)]); }
    int size() const { return static_cast<int>(log_values.size()); }

    // rho -> t * rho
    void scale(double t);
};

using SparseMatrix = Eigen::SparseMatrix<double>;

// Cotangent stiffness (density independent in dimension two) and the density
// mass matrix, both over glued dofs.
struct OperatorPair {
    SparseMatrix stiffness;
    SparseMatrix mass;
    double area = 0.0; // 1^T M 1 = total integral of rho
};

// Exact integration of piecewise-linear rho against piecewise-linear basis
// products; lumped_mass collapses rows to the diagonal (diagnostics only).
// Throws DegenerateTriangle when a triangle area falls below 1e-14.
OperatorPair assemble(const DiscreteSurface& surface, const DensityField& density,
                      bool lumped_mass = false);

struct SpectrumResult {
    std::vector<double> eigenvalues; // ascending, k+1 entries
    Eigen::MatrixXd eigenvectors;    // dof_count x (k+1), mass-orthonormal
    std::vector<double> residuals;   // ||K u - lambda M u|| / (lambda ||u||_M)
    double area = 0.0;
};

struct SolveOptions {
    double tol = 1e-10;              // relative residual target, in [1e-12, 1e-4]
    int max_iterations = 600;        // subspace iteration sweeps
    std::uint64_t seed = 1234;       // starting block
    int block_extra = 3;             // block size = k + 1 + block_extra
    const Eigen::MatrixXd* warm_start = nullptr;
};

// First k+1 eigenpairs of K u = lambda M u by block shift-invert subspace
// iteration about sigma = 0 (sparse factorization of K + sigma0 M with a tiny
// sigma0, which shifts the pencil exactly). The constant vector is included
// in the starting block, deflating the zero eigenvalue. Deterministic for a
// fixed seed. Throws ConvergenceFailure with the achieved residuals when the
// iteration cap is hit.
SpectrumResult solve_spectrum(const OperatorPair& operators, int k, const SolveOptions& options = {});

// lambda_k * area, elementwise.
std::vector<double> normalized_eigenvalues(const SpectrumResult& result);

// JSON {eigenvalues, normalized_eigenvalues, residuals, area}.
std::string spectrum_to_json(const SpectrumResult& result);

// Sidecar CSV with one column per eigenvector.
std::string eigenvectors_to_csv(const SpectrumResult& result);

} // namespace speclab
