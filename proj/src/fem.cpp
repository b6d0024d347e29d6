#include "speclab/fem.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

void DensityField::scale(double t) {
    if (!(t > 0.0)) throw InvalidClassParam("density scale factor must be positive");
    const double s = std::log(t);
    for (double& v : log_values) v += s;
}

namespace {

// integral of phi_a phi_b phi_c over a unit-area triangle
double basis_triple_weight(int a, int b, int c) {
    if (a == b && b == c) return 1.0 / 10.0;
    if (a == b || b == c || a == c) return 1.0 / 30.0;
    return 1.0 / 60.0;
}

} // namespace

OperatorPair assemble(const DiscreteSurface& surface, const DensityField& density, bool lumped_mass) {
    if (density.size() != surface.dof_count)
        throw InvalidClassParam("density has " + std::to_string(density.size()) + " values, mesh has " +
                                std::to_string(surface.dof_count) + " dofs");

    const int n = surface.dof_count;
    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(surface.triangles.size() * 12);
    mt.reserve(surface.triangles.size() * 9);

    for (int t = 0; t < surface.triangle_count(); ++t) {
        const auto& tri = surface.triangles[t];
        std::array<int, 3> d = {surface.vertex_dof[tri[0]], surface.vertex_dof[tri[1]],
                                surface.vertex_dof[tri[2]]};
        std::array<std::array<double, 3>, 3> p = {surface.vertices[tri[0]], surface.vertices[tri[1]],
                                                  surface.vertices[tri[2]]};
        const double area = triangle_area(surface, t);
        if (area < 1e-14) throw DegenerateTriangle("triangle " + std::to_string(t));

        // cotangent weights: for the corner opposite edge (j,k)
        for (int c = 0; c < 3; ++c) {
            const int j = (c + 1) % 3, k = (c + 2) % 3;
            const double ux = p[j][0] - p[c][0], uy = p[j][1] - p[c][1], uz = p[j][2] - p[c][2];
            const double vx = p[k][0] - p[c][0], vy = p[k][1] - p[c][1], vz = p[k][2] - p[c][2];
            const double dot = ux * vx + uy * vy + uz * vz;
            const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
            const double cr = std::sqrt(cx * cx + cy * cy + cz * cz);
            const double w = 0.5 * dot / cr;
            kt.emplace_back(d[j], d[k], -w);
            kt.emplace_back(d[k], d[j], -w);
            kt.emplace_back(d[j], d[j], w);
            kt.emplace_back(d[k], d[k], w);
        }

        // mass with piecewise-linear density: M_ab = area * sum_c rho_c w(a,b,c)
        std::array<double, 3> r = {density.rho(d[0]), density.rho(d[1]), density.rho(d[2])};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double m = 0.0;
                for (int c = 0; c < 3; ++c) m += r[c] * basis_triple_weight(a, b, c);
                m *= area;
                if (lumped_mass) mt.emplace_back(d[a], d[a], m);
                else mt.emplace_back(d[a], d[b], m);
            }
    }

    OperatorPair out;
    out.stiffness.resize(n, n);
    out.stiffness.setFromTriplets(kt.begin(), kt.end());
    out.mass.resize(n, n);
    out.mass.setFromTriplets(mt.begin(), mt.end());
    out.area = out.mass.sum();
    return out;
}

SpectrumResult solve_spectrum(const OperatorPair& operators, int k, const SolveOptions& options) {
    const auto& K = operators.stiffness;
    const auto& M = operators.mass;
    const int n = static_cast<int>(K.rows());
    if (k < 0 || k + 1 > n - 1) throw InvalidClassParam("k + 1 must be at most dim - 1");
    if (options.tol < 1e-12 || options.tol > 1e-4)
        throw InvalidClassParam("tol must lie in [1e-12, 1e-4]");

    const int want = k + 1;
    const int p = std::min(n, want + std::max(options.block_extra, 3));

    // Exact pencil shift: (K + sigma0 M) u = (lambda + sigma0) M u.
    const double scale = K.diagonal().sum() / std::max(M.diagonal().sum(), 1e-300);
    const double sigma0 = std::max(1e-8 * scale, 1e-300);
    SparseMatrix A = K + sigma0 * M;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) throw ConvergenceFailure("factorization of shifted stiffness failed");

    Eigen::MatrixXd X(n, p);
    std::mt19937_64 rng(options.seed);
    auto uniform = [&rng]() {
        return 2.0 * (static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max())) - 1.0;
    };
    X.col(0).setOnes(); // exact kernel direction, deflates lambda_0
    int filled = 1;
    if (options.warm_start) {
        const auto& W = *options.warm_start;
        for (int c = 0; c < W.cols() && filled < p; ++c) {
            const double corr = std::abs(W.col(c).sum()) / (W.col(c).norm() * std::sqrt(double(n)));
            if (corr > 0.999) continue; // already covered by the constant column
            X.col(filled++) = W.col(c);
        }
    }
    for (; filled < p; ++filled)
        for (int i = 0; i < n; ++i) X(i, filled) = uniform();

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    std::vector<double> residuals(static_cast<size_t>(want), 1.0);
    bool converged = false;

    for (int sweep = 0; sweep < options.max_iterations && !converged; ++sweep) {
        Eigen::MatrixXd Y = ldlt.solve(M * X);
        // M-orthonormalize Y, then Rayleigh-Ritz on K
        Eigen::MatrixXd T = Y.transpose() * (M * Y);
        Eigen::LLT<Eigen::MatrixXd> llt(T);
        if (llt.info() != Eigen::Success) {
            // near-rank-deficient block: re-seed the offending directions
            T.diagonal().array() += 1e-12 * T.diagonal().maxCoeff();
            llt.compute(T);
            if (llt.info() != Eigen::Success) throw ConvergenceFailure("block lost rank");
        }
        Eigen::MatrixXd U = llt.matrixU();
        Eigen::MatrixXd Z = U.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Y);
        Eigen::MatrixXd S = Z.transpose() * (K * Z);
        S = 0.5 * (S + S.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(S);
        theta = ritz.eigenvalues();
        X = Z * ritz.eigenvectors();

        converged = true;
        for (int i = 0; i < want; ++i) {
            const Eigen::VectorXd r = K * X.col(i) - theta[i] * (M * X.col(i));
            // the zero mode is measured against the first nonzero scale
            const double denom = std::max(std::abs(theta[i]), std::abs(theta[std::min(1, p - 1)]));
            residuals[static_cast<size_t>(i)] = r.norm() / std::max(denom, 1e-300);
            if (residuals[static_cast<size_t>(i)] > options.tol) converged = false;
        }
    }

    if (!converged) {
        std::ostringstream os;
        os << "subspace iteration cap " << options.max_iterations << " reached; residuals:";
        for (double r : residuals) os << " " << r;
        throw ConvergenceFailure(os.str());
    }

    SpectrumResult out;
    out.area = operators.area;
    out.eigenvalues.resize(static_cast<size_t>(want));
    out.eigenvectors.resize(n, want);
    out.residuals = residuals;
    for (int i = 0; i < want; ++i) {
        double lam = theta[i];
        if (i == 0 && std::abs(lam) <= 1e-10 * std::abs(theta[std::min(1, p - 1)]))
            lam = std::max(lam, 0.0);
        out.eigenvalues[static_cast<size_t>(i)] = lam;
        Eigen::VectorXd v = X.col(i);
        int imax = 0;
        for (int r = 1; r < n; ++r)
            if (std::abs(v[r]) > std::abs(v[imax])) imax = r;
        if (v[imax] < 0.0) v = -v;
        out.eigenvectors.col(i) = v;
    }
    return out;
}

std::vector<double> normalized_eigenvalues(const SpectrumResult& result) {
    std::vector<double> out(result.eigenvalues.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = result.eigenvalues[i] * result.area;
    return out;
}

} // namespace speclab
