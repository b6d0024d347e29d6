#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speclab/pi_rational.hpp"

namespace speclab {

// Identifies a closed-surface species in tables: the sphere is {orientable,0},
// the torus {orientable,1}, the projective plane {non-orientable,0}, the Klein
// bottle {non-orientable,1}. Non-orientable genus counts the genus of the
// orientable double cover.
struct SurfaceKey {
    bool orientable = true;
    int genus = 0;

    friend bool operator<(const SurfaceKey& a, const SurfaceKey& b) {
        if (a.orientable != b.orientable) return a.orientable < b.orientable;
        return a.genus < b.genus;
    }
    friend bool operator==(const SurfaceKey& a, const SurfaceKey& b) {
        return a.orientable == b.orientable && a.genus == b.genus;
    }

    std::string str() const;
};

inline SurfaceKey sphere_key() { return {true, 0}; }
inline SurfaceKey torus_key() { return {true, 1}; }
inline SurfaceKey rp2_key() { return {false, 0}; }
inline SurfaceKey klein_key() { return {false, 1}; }

// A supremal-eigenvalue table entry: exact rational multiple of pi where
// known, plain double for empirical estimates.
struct LambdaValue {
    std::optional<PiRational> exact;
    double approx = 0.0;

    static LambdaValue exact_pi(PiRational v) { return {v, v.to_double()}; }
    static LambdaValue estimate(double v) { return {std::nullopt, v}; }

    double value() const { return exact ? exact->to_double() : approx; }
    bool is_exact() const { return exact.has_value(); }

    // Exactness propagates only through sums of exact values.
    friend LambdaValue operator+(const LambdaValue& a, const LambdaValue& b) {
        if (a.exact && b.exact) return exact_pi(*a.exact + *b.exact);
        return estimate(a.value() + b.value());
    }
};

struct TableViolation {
    SurfaceKey key;
    int k = 0;
    std::string what;
};

// Map from (surface, index k) to the supremum of the k-th normalized
// eigenvalue over the conformal classes the table covers. Built-in exact
// columns exist for the sphere (8*pi*k) and the projective plane
// (4*pi*(2k+1)); empirical columns can be added from sweep estimates.
class LambdaTable {
  public:
    void set(SurfaceKey key, int k, LambdaValue v);
    std::optional<LambdaValue> get(SurfaceKey key, int k) const;

    // Throws IncompleteTable when the column is missing an index <= k.
    std::vector<LambdaValue> column(SurfaceKey key, int k_max) const;

    bool has_column(SurfaceKey key, int k_max) const;

    // Exact built-ins for the two one-conformal-class surfaces, indices 0..k_max.
    static LambdaTable builtin(int k_max);

    // Checks Lambda_0 = 0, monotonicity in k, Lambda_k >= 8*pi*k and
    // Lambda_k >= Lambda_{k-1} + 8*pi. Exact entries are checked with zero
    // tolerance, empirical ones with the given relative slack.
    std::vector<TableViolation> consistency_violations(double estimate_rel_slack = 0.0) const;

    const std::map<std::pair<SurfaceKey, int>, LambdaValue>& entries() const { return entries_; }

  private:
    std::map<std::pair<SurfaceKey, int>, LambdaValue> entries_;
};

// Exact values for the canonical classes: Lambda_k(S^2) = 8*pi*k and
// Lambda_k(RP^2) = 4*pi*(2k+1), with Lambda_0 = 0 on every surface.
PiRational lambda_sphere(int k);
PiRational lambda_rp2(int k);

} // namespace speclab
