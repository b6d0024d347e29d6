#include "speclab/lambda_table.hpp"

#include <cmath>

#include "speclab/errors.hpp"

namespace speclab {

std::string SurfaceKey::str() const {
    if (orientable) {
        if (genus == 0) return "S2";
        if (genus == 1) return "T2";
        return "orientable genus " + std::to_string(genus);
    }
    if (genus == 0) return "RP2";
    if (genus == 1) return "KL";
    return "non-orientable genus " + std::to_string(genus);
}

PiRational lambda_sphere(int k) { return PiRational(8 * static_cast<std::int64_t>(k)); }

PiRational lambda_rp2(int k) {
    if (k == 0) return PiRational(0);
    return PiRational(8 * static_cast<std::int64_t>(k) + 4); // 4*pi*(2k+1)
}

void LambdaTable::set(SurfaceKey key, int k, LambdaValue v) { entries_[{key, k}] = v; }

std::optional<LambdaValue> LambdaTable::get(SurfaceKey key, int k) const {
    auto it = entries_.find({key, k});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<LambdaValue> LambdaTable::column(SurfaceKey key, int k_max) const {
    std::vector<LambdaValue> col;
    col.reserve(static_cast<size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        auto v = get(key, k);
        if (!v) throw IncompleteTable("no entry for " + key.str() + " at k=" + std::to_string(k));
        col.push_back(*v);
    }
    return col;
}

bool LambdaTable::has_column(SurfaceKey key, int k_max) const {
    for (int k = 0; k <= k_max; ++k)
        if (!get(key, k)) return false;
    return true;
}

LambdaTable LambdaTable::builtin(int k_max) {
    LambdaTable t;
    for (int k = 0; k <= k_max; ++k) {
        t.set(sphere_key(), k, LambdaValue::exact_pi(lambda_sphere(k)));
        t.set(rp2_key(), k, LambdaValue::exact_pi(lambda_rp2(k)));
    }
    return t;
}

std::vector<TableViolation> LambdaTable::consistency_violations(double estimate_rel_slack) const {
    std::vector<TableViolation> out;
    const double pi8 = PiRational(8).to_double();
    for (const auto& [key_k, v] : entries_) {
        const auto& [key, k] = key_k;
        if (k == 0) {
            bool zero = v.is_exact() ? (*v.exact == PiRational::zero()) : (std::abs(v.approx) < 1e-12);
            if (!zero) out.push_back({key, 0, "Lambda_0 must be 0, got " + std::to_string(v.value())});
            continue;
        }
        // Lambda_k >= 8*pi*k
        if (v.is_exact()) {
            if (*v.exact < lambda_sphere(k))
                out.push_back({key, k, v.exact->str() + " < " + lambda_sphere(k).str()});
        } else {
            double bound = lambda_sphere(k).to_double();
            if (v.approx < bound * (1.0 - estimate_rel_slack))
                out.push_back({key, k, std::to_string(v.approx) + " < 8*pi*k = " + std::to_string(bound)});
        }
        // Lambda_k >= Lambda_{k-1} + 8*pi (implies monotonicity)
        auto prev = get(key, k - 1);
        if (!prev) continue;
        if (v.is_exact() && prev->is_exact()) {
            if (*v.exact < *prev->exact + PiRational(8))
                out.push_back({key, k, v.exact->str() + " < " + prev->exact->str() + " + 8*pi"});
        } else {
            double lhs = v.value();
            double rhs = prev->value() + pi8;
            if (lhs < rhs * (1.0 - estimate_rel_slack))
                out.push_back({key, k,
                               std::to_string(lhs) + " < Lambda_{k-1} + 8*pi = " + std::to_string(rhs)});
        }
    }
    return out;
}

} // namespace speclab
