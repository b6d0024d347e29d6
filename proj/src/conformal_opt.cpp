#include "speclab/conformal_opt.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "speclab/analytic.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;

double basis_triple_weight(int a, int b, int c) {
    if (a == b && b == c) return 1.0 / 10.0;
    if (a == b || b == c || a == c) return 1.0 / 30.0;
    return 1.0 / 60.0;
}

// h_v = u^T (dM/drho_v) u accumulated per dof, and a_v = d(area)/drho_v.
void mass_sensitivities(const DiscreteSurface& s, const Eigen::VectorXd& u, Eigen::VectorXd& h,
                        Eigen::VectorXd& a) {
    h.setZero(s.dof_count);
    a.setZero(s.dof_count);
    for (int t = 0; t < s.triangle_count(); ++t) {
        const auto& tri = s.triangles[t];
        const std::array<int, 3> d = {s.vertex_dof[tri[0]], s.vertex_dof[tri[1]], s.vertex_dof[tri[2]]};
        const double area = triangle_area(s, t);
        for (int v = 0; v < 3; ++v) {
            double acc = 0.0;
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) acc += u[d[p]] * u[d[q]] * basis_triple_weight(v, p, q);
            h[d[v]] += area * acc;
            a[d[v]] += area / 3.0;
        }
    }
}

std::vector<int> cluster_around(const std::vector<double>& eigenvalues, int k, double cluster_tol) {
    std::vector<int> cluster{k};
    const double ref = std::max(std::abs(eigenvalues[static_cast<size_t>(k)]), 1e-300);
    for (int i = k - 1; i >= 0; --i) {
        if (std::abs(eigenvalues[static_cast<size_t>(i)] - eigenvalues[static_cast<size_t>(k)]) <= cluster_tol * ref)
            cluster.insert(cluster.begin(), i);
        else
            break;
    }
    for (int i = k + 1; i < static_cast<int>(eigenvalues.size()); ++i) {
        if (std::abs(eigenvalues[static_cast<size_t>(i)] - eigenvalues[static_cast<size_t>(k)]) <= cluster_tol * ref)
            cluster.push_back(i);
        else
            break;
    }
    return cluster;
}

// mean coordinates per dof (duplicates of a glued class share them up to
// quotient copies; averaging keeps it deterministic)
Eigen::MatrixXd dof_coordinates(const DiscreteSurface& s) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(s.dof_count, 3);
    Eigen::VectorXd cnt = Eigen::VectorXd::Zero(s.dof_count);
    for (int v = 0; v < s.vertex_count(); ++v) {
        const int d = s.vertex_dof[v];
        for (int c = 0; c < 3; ++c) x(d, c) += s.vertices[v][c];
        cnt[d] += 1.0;
    }
    for (int d = 0; d < s.dof_count; ++d) x.row(d) /= cnt[d];
    return x;
}

double mean_spacing(const DiscreteSurface& s) {
    double area = 0.0;
    for (int t = 0; t < s.triangle_count(); ++t) area += triangle_area(s, t);
    return std::sqrt(area / (0.5 * s.triangle_count()));
}

} // namespace

GradientResult eigenvalue_gradient(const DiscreteSurface& surface, const DensityField& density,
                                   const SpectrumResult& result, int k, double cluster_tol) {
    if (k < 0 || k >= static_cast<int>(result.eigenvalues.size()))
        throw InvalidClassParam("gradient index k out of range of the spectrum result");

    GradientResult out;
    out.gradient = Eigen::VectorXd::Zero(surface.dof_count);
    if (k == 0) { out.cluster = {0}; return out; } // lambda_0 stays 0

    out.cluster = cluster_around(result.eigenvalues, k, cluster_tol);
    out.cluster_below_k = out.cluster.front() < k;

    const double lambda = result.eigenvalues[static_cast<size_t>(k)];
    const double area = result.area;

    Eigen::VectorXd h_mean = Eigen::VectorXd::Zero(surface.dof_count);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(surface.dof_count);
    Eigen::VectorXd h, atmp;
    for (int idx : out.cluster) {
        mass_sensitivities(surface, result.eigenvectors.col(idx), h, atmp);
        h_mean += h;
        a = atmp;
    }
    h_mean /= static_cast<double>(out.cluster.size());

    // d(lambda*area)/drho_v = -area*lambda*h_v + lambda*a_v, times rho_v in log form
    for (int v = 0; v < surface.dof_count; ++v)
        out.gradient[v] = density.rho(v) * (lambda * a[v] - area * lambda * h_mean[v]);
    return out;
}

DensityField noise_density(const DiscreteSurface& surface, std::uint64_t seed, double amplitude) {
    Eigen::MatrixXd x = dof_coordinates(surface);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return 2.0 * (static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max())) - 1.0;
    };
    const int n = surface.dof_count;
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    // low-order polynomial modes in the coordinates
    std::vector<Eigen::VectorXd> fields;
    for (int c = 0; c < 3; ++c) fields.push_back(x.col(c));
    for (int c = 0; c < 3; ++c)
        for (int c2 = c; c2 < 3; ++c2) fields.push_back(x.col(c).cwiseProduct(x.col(c2)));
    for (auto& f : fields) {
        const double mean = f.mean();
        f.array() -= mean;
        const double norm = f.cwiseAbs().maxCoeff();
        if (norm > 1e-12) s += uniform() * f / norm;
    }
    for (int i = 0; i < n; ++i) s[i] += 0.1 * uniform();

    DensityField d;
    d.log_values.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) d.log_values[static_cast<size_t>(i)] = amplitude * s[i];
    return d;
}

DensityField collar_pullback_density(const DiscreteSurface& surface, bool to_rp2) {
    const auto& tag = surface.class_tag;
    if (tag.subdomain || (tag.param.kind != SurfaceClass::Torus && tag.param.kind != SurfaceClass::Klein))
        throw UnsupportedClass("collar pullback starts exist for flat classes only");
    const double b = tag.param.b;
    const double sb = std::sqrt(b);
    if (to_rp2 && tag.param.kind != SurfaceClass::Klein)
        throw UnsupportedClass("projective-plane pullback needs a Klein class");

    Eigen::MatrixXd x = dof_coordinates(surface);
    DensityField d;
    d.log_values.resize(static_cast<size_t>(surface.dof_count));
    for (int v = 0; v < surface.dof_count; ++v) {
        const double y = x(v, 1);
        double s;
        if (to_rp2) {
            // Moebius collar around the 1-sided geodesic y = 0 (mod sqrt(b));
            // double-cover circumference 2/sqrt(b)
            const double period = sb;
            double yr = std::fmod(y, period);
            if (yr < 0) yr += period;
            const double dist = std::min(yr, period - yr);
            s = 2.0 * kPi * dist / (2.0 / sb);
        } else {
            // cylinder collar; the sphere closes up mid-collar
            const double circ = 1.0 / sb;
            s = 2.0 * kPi * y / circ - kPi * b;
        }
        // log sech^2(s) = -2 log cosh(s), overflow-safe
        const double as = std::abs(s);
        const double logcosh = as + std::log1p(std::exp(-2.0 * as)) - std::log(2.0);
        d.log_values[static_cast<size_t>(v)] = std::max(-2.0 * logcosh, -27.6); // floor at ~1e-12
    }
    return d;
}

namespace {

struct Smoother {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    SparseMatrix M0;
    bool active = false;

    void init(const DiscreteSurface& surface, double factor) {
        if (factor <= 0.0) return;
        DensityField unit = DensityField::uniform(surface.dof_count);
        OperatorPair ops = assemble(surface, unit);
        const double r = factor * mean_spacing(surface);
        SparseMatrix A = ops.mass + (r * r) * ops.stiffness;
        ldlt.compute(A);
        if (ldlt.info() != Eigen::Success) throw ConvergenceFailure("smoother factorization failed");
        M0 = ops.mass;
        active = true;
    }

    // two passes of (M0 + r^2 K)^{-1} M0
    Eigen::VectorXd apply(const Eigen::VectorXd& g) const {
        if (!active) return g;
        Eigen::VectorXd y = ldlt.solve(M0 * g);
        return ldlt.solve(M0 * y);
    }
};

} // namespace

OptimizationTrace maximize_normalized_eigenvalue(const DiscreteSurface& surface, int k,
                                                 const OptimizeOptions& options) {
    if (k < 1) throw InvalidClassParam("maximization needs k >= 1");

    DensityField rho;
    switch (options.start_kind) {
        case StartKind::UniformNoise:
            rho = noise_density(surface, options.seed, options.start_noise);
            break;
        case StartKind::CollarPullback:
            rho = collar_pullback_density(surface,
                                          surface.class_tag.param.kind == SurfaceClass::Klein);
            break;
        case StartKind::Given:
            if (!options.start) throw InvalidClassParam("StartKind::Given needs options.start");
            rho = *options.start;
            break;
    }
    if (rho.size() != surface.dof_count) throw InvalidClassParam("start density has the wrong size");

    Smoother smoother;
    smoother.init(surface, options.smoothing_factor);

    OptimizationTrace trace;
    trace.eigensolves = 0;

    SolveOptions solve;
    solve.tol = options.solver_tol;
    solve.seed = options.seed;
    solve.block_extra = 4;

    auto normalize_area = [&](DensityField& d) {
        OperatorPair ops = assemble(surface, d);
        d.scale(1.0 / ops.area);
    };
    normalize_area(rho);

    auto evaluate = [&](const DensityField& d, const Eigen::MatrixXd* warm) {
        OperatorPair ops = assemble(surface, d);
        SolveOptions s = solve;
        s.warm_start = warm;
        SpectrumResult r = solve_spectrum(ops, k, s);
        ++trace.eigensolves;
        return r;
    };

    SpectrumResult current = evaluate(rho, nullptr);
    double objective = current.eigenvalues[static_cast<size_t>(k)] * current.area;
    trace.iterates.push_back({objective, 0.0, 1});

    double step = options.initial_step;
    int rejections = 0;
    std::string status = "converged";

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        GradientResult grad = eigenvalue_gradient(surface, rho, current, k, options.cluster_tol);
        Eigen::VectorXd dir = smoother.apply(grad.gradient);
        const double norm = dir.cwiseAbs().maxCoeff();
        if (norm < 1e-14) break; // critical point of the filtered ascent
        dir /= norm;

        bool accepted = false;
        double trial_step = step;
        while (trial_step >= 1e-7) {
            DensityField trial = rho;
            for (int v = 0; v < surface.dof_count; ++v)
                trial.log_values[static_cast<size_t>(v)] += trial_step * dir[v];
            const double shift = *std::max_element(trial.log_values.begin(), trial.log_values.end());
            for (double& lv : trial.log_values) lv -= shift;
            normalize_area(trial);
            SpectrumResult cand = evaluate(trial, &current.eigenvectors);
            const double cand_obj = cand.eigenvalues[static_cast<size_t>(k)] * cand.area;
            if (cand_obj > objective + options.min_increase) {
                rho = std::move(trial);
                current = std::move(cand);
                objective = cand_obj;
                trace.iterates.push_back({objective, trial_step,
                                          static_cast<int>(grad.cluster.size())});
                step = std::min(trial_step * 2.0, options.step_max);
                accepted = true;
                rejections = 0;
                break;
            }
            trial_step *= 0.5;
        }
        if (!accepted) {
            ++rejections;
            step = std::max(step * 0.5, 1e-4);
            if (rejections >= options.max_rejections) break;
        }
    }
    if (it == options.max_iterations) status = "iteration-capped";

    trace.final_density = rho;
    trace.final_estimate = objective;
    trace.status = status;

    // annotate stalls below a known exact table value
    const auto& tag = surface.class_tag;
    if (!tag.subdomain) {
        std::optional<double> known;
        if (tag.param.kind == SurfaceClass::Sphere) known = lambda_sphere(k).to_double();
        if (tag.param.kind == SurfaceClass::RP2) known = lambda_rp2(k).to_double();
        if (known && trace.final_estimate < *known * 0.97)
            trace.annotation = "supremum not attained: estimate " + std::to_string(trace.final_estimate) +
                               " stalled below the table value " + std::to_string(*known);
    }
    return trace;
}

CombineResult combine_disjoint(const std::vector<std::vector<LambdaValue>>& columns, int k,
                               bool positive_parts) {
    if (columns.empty()) throw IncompleteTable("no component columns");
    for (const auto& col : columns)
        if (static_cast<int>(col.size()) < k + 1)
            throw IncompleteTable("component column shorter than k+1");

    struct Best {
        bool have = false;
        LambdaValue value;
        std::vector<int> comp;
    } best;

    auto comp_less = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> sa = a, sb = b;
        std::sort(sa.rbegin(), sa.rend());
        std::sort(sb.rbegin(), sb.rend());
        if (sa != sb) return sa < sb;
        return a < b;
    };

    std::vector<int> current(columns.size(), 0);
    auto offer = [&](const LambdaValue& v) {
        if (!best.have) { best = {true, v, current}; return; }
        bool better, equal;
        if (best.value.is_exact() && v.is_exact()) {
            better = *best.value.exact < *v.exact;
            equal = *best.value.exact == *v.exact;
        } else {
            const double scale = std::max({1.0, std::abs(v.value()), std::abs(best.value.value())});
            better = best.value.value() < v.value() - 1e-12 * scale;
            equal = std::abs(best.value.value() - v.value()) <= 1e-12 * scale;
        }
        if (better) { best.value = v; best.comp = current; }
        else if (equal && comp_less(current, best.comp)) best.comp = current;
    };

    auto recurse = [&](auto&& self, int term, int remaining, LambdaValue sum) -> void {
        if (term == static_cast<int>(columns.size())) {
            if (remaining == 0) offer(sum);
            return;
        }
        for (int ki = 0; ki <= remaining; ++ki) {
            current[static_cast<size_t>(term)] = ki;
            // under the positive-parts convention a zero part means the
            // component is skipped entirely, contributing nothing
            LambdaValue contribution = (ki == 0 && positive_parts)
                                           ? LambdaValue::exact_pi(PiRational::zero())
                                           : columns[static_cast<size_t>(term)][static_cast<size_t>(ki)];
            self(self, term + 1, remaining - ki, sum + contribution);
        }
        current[static_cast<size_t>(term)] = 0;
    };
    recurse(recurse, 0, k, LambdaValue::exact_pi(PiRational::zero()));

    return {best.value, best.comp};
}

RhoDeltaResult rho_delta_experiment(const DiscreteSurface& surface,
                                    const std::vector<int>& subdomain_triangles,
                                    const std::vector<double>& deltas, int k,
                                    const SolveOptions& solve) {
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw InvalidClassParam("deltas must be positive");
        if (i + 1 < deltas.size() && !(deltas[i + 1] < deltas[i]))
            throw InvalidClassParam("deltas must be descending");
    }

    // Neumann reference on the subdomain (natural boundary conditions)
    DiscreteSurface omega = extract_subdomain(surface, subdomain_triangles);
    OperatorPair omega_ops = assemble(omega, DensityField::uniform(omega.dof_count));
    SpectrumResult neumann = solve_spectrum(omega_ops, k, solve);

    RhoDeltaResult out;
    out.neumann_value = neumann.eigenvalues[static_cast<size_t>(k)];
    out.neumann_normalized = out.neumann_value * neumann.area;

    // dofs touching a subdomain triangle take the inside value (interface
    // vertices belong to the closure of Omega)
    std::vector<char> inside(static_cast<size_t>(surface.dof_count), 0);
    std::set<int> sel(subdomain_triangles.begin(), subdomain_triangles.end());
    for (int t : sel)
        for (int v : surface.triangles[t]) inside[static_cast<size_t>(surface.vertex_dof[v])] = 1;

    for (double delta : deltas) {
        DensityField rho = DensityField::uniform(surface.dof_count);
        rho.partition_tag.assign(static_cast<size_t>(surface.dof_count), 1);
        for (int v = 0; v < surface.dof_count; ++v) {
            if (inside[static_cast<size_t>(v)]) rho.partition_tag[static_cast<size_t>(v)] = 0;
            else rho.log_values[static_cast<size_t>(v)] = std::log(delta);
        }
        OperatorPair ops = assemble(surface, rho);
        SpectrumResult res = solve_spectrum(ops, k, solve);
        RhoDeltaRow row;
        row.delta = delta;
        row.lambda_raw = res.eigenvalues[static_cast<size_t>(k)];
        row.lambda_bar = row.lambda_raw * res.area;
        row.gap_to_neumann = row.lambda_raw - out.neumann_value;
        out.rows.push_back(row);
    }
    return out;
}

BallRemovalResult ball_removal_experiment(const DiscreteSurface& surface,
                                          const std::vector<std::array<double, 3>>& centers,
                                          const std::vector<double>& radii, int k,
                                          const SolveOptions& solve) {
    if (centers.empty()) throw InvalidClassParam("no ball centers");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i + 1] < radii[i])) throw InvalidClassParam("radii must be descending");

    const double rmax = radii.empty() ? 0.0 : radii.front();
    for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j) {
            // centers live on the surface; reuse the barycenter metric through a
            // throwaway one-point comparison
            double dist;
            if (surface.dim == 3) {
                double dot = 0.0, ni = 0.0, nj = 0.0;
                for (int c = 0; c < 3; ++c) {
                    dot += centers[i][c] * centers[j][c];
                    ni += centers[i][c] * centers[i][c];
                    nj += centers[j][c] * centers[j][c];
                }
                dist = std::acos(std::clamp(dot / std::sqrt(ni * nj), -1.0, 1.0));
            } else {
                dist = std::hypot(centers[i][0] - centers[j][0], centers[i][1] - centers[j][1]);
            }
            if (dist <= 2.0 * rmax)
                throw BallsOverlap("balls " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap at radius " + std::to_string(rmax));
        }

    OperatorPair closed_ops = assemble(surface, DensityField::uniform(surface.dof_count));
    SpectrumResult closed = solve_spectrum(closed_ops, k, solve);

    BallRemovalResult out;
    out.closed_value = closed.eigenvalues[static_cast<size_t>(k)];

    for (double radius : radii) {
        BallRemovalRow row;
        row.radius = radius;
        if (radius == 0.0) {
            row.lambda_neumann = out.closed_value;
            row.gap_to_closed = 0.0;
            out.rows.push_back(row);
            continue;
        }
        std::set<int> removed;
        for (const auto& c : centers)
            for (int t : triangles_within(surface, c, radius)) removed.insert(t);
        std::vector<int> kept;
        for (int t = 0; t < surface.triangle_count(); ++t)
            if (!removed.count(t)) kept.push_back(t);
        DiscreteSurface complement = extract_subdomain(surface, kept);
        OperatorPair ops = assemble(complement, DensityField::uniform(complement.dof_count));
        SpectrumResult res = solve_spectrum(ops, k, solve);
        row.lambda_neumann = res.eigenvalues[static_cast<size_t>(k)];
        row.gap_to_closed = row.lambda_neumann - out.closed_value;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace speclab
