#include "speclab/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace speclab {

std::string surface_class_name(SurfaceClass c) {
    switch (c) {
        case SurfaceClass::Torus: return "torus";
        case SurfaceClass::Klein: return "klein";
        case SurfaceClass::Sphere: return "sphere";
        case SurfaceClass::RP2: return "rp2";
    }
    return "?";
}

std::string ConformalClassParam::str() const {
    std::ostringstream os;
    os << surface_class_name(kind);
    if (kind == SurfaceClass::Torus) os << "(a=" << a << ", b=" << b << ")";
    if (kind == SurfaceClass::Klein) os << "(b=" << b << ")";
    return os.str();
}

ConformalClassParam ConformalClassParam::torus(double a, double b) {
    return make_class(SurfaceClass::Torus, a, b);
}

ConformalClassParam ConformalClassParam::klein(double b) {
    return make_class(SurfaceClass::Klein, 0.0, b);
}

std::pair<double, double> reduce_torus_param(double a, double b) {
    if (!(b > 0.0)) throw InvalidClassParam("torus parameter requires b > 0");
    for (int guard = 0; guard < 256; ++guard) {
        a -= std::round(a);
        double n2 = a * a + b * b;
        if (n2 < 1.0 - 1e-15) {
            // invert tau -> -1/tau
            a = -a / n2;
            b = b / n2;
            continue;
        }
        break;
    }
    if (a < 0.0) a = -a; // mirror symmetry of the moduli space
    if (a > 0.5) a = 1.0 - a; // |tau| = 1 arc: a and 1-a are equivalent
    return {a, b};
}

ConformalClassParam make_class(SurfaceClass kind, double a, double b) {
    switch (kind) {
        case SurfaceClass::Sphere: return {SurfaceClass::Sphere, 0.0, 0.0};
        case SurfaceClass::RP2: return {SurfaceClass::RP2, 0.0, 0.0};
        case SurfaceClass::Klein:
            if (!(b > 0.0)) throw InvalidClassParam("klein class requires b > 0, got b=" + std::to_string(b));
            return {SurfaceClass::Klein, 0.0, b};
        case SurfaceClass::Torus: {
            if (!(b > 0.0)) throw InvalidClassParam("torus class requires b > 0, got b=" + std::to_string(b));
            std::string violated;
            if (a < 0.0 || a > 0.5) violated = "0 <= a <= 1/2";
            else if (a * a + b * b < 1.0 - 1e-12) violated = "a^2 + b^2 >= 1";
            if (!violated.empty()) {
                auto [ra, rb] = reduce_torus_param(a, b);
                std::ostringstream os;
                os << "torus (a=" << a << ", b=" << b << ") violates " << violated
                   << "; equivalent reduced class (a=" << ra << ", b=" << rb << ")";
                throw InvalidClassParam(os.str());
            }
            return {SurfaceClass::Torus, a, b};
        }
    }
    throw InvalidClassParam("unknown surface class");
}

GenusCheck genus_relation(const LimitingSpaceSpec& spec) {
    if (spec.orientable_genera.empty() && spec.nonorientable_genera.empty())
        throw InconsistentSpec("limiting space needs at least one component");
    const int mt = static_cast<int>(spec.orientable_genera.size());
    const int m = static_cast<int>(spec.nonorientable_genera.size());
    const int gt = std::accumulate(spec.orientable_genera.begin(), spec.orientable_genera.end(), 0);
    const int g = std::accumulate(spec.nonorientable_genera.begin(), spec.nonorientable_genera.end(), 0);
    const int st = spec.two_sided_count;
    const int s = spec.one_sided_count;

    GenusCheck out;
    std::ostringstream detail;
    if (spec.source_orientable) {
        if (m != 0 || s != 0)
            throw InconsistentSpec("orientable source cannot have non-orientable components or 1-sided collapses");
        out.computed_genus = st + gt - mt + 1;
        detail << "genus = s~ + |Gamma~| - m~ + 1 = " << st << " + " << gt << " - " << mt << " + 1 = "
               << out.computed_genus;
    } else {
        if (m == 0 && s == 0)
            throw InconsistentSpec("non-orientable source needs a non-orientable component or a 1-sided collapse");
        out.computed_genus = 2 * (st + gt - mt) + s + g - m + 1;
        detail << "genus = 2(s~ + |Gamma~| - m~) + s + |Gamma| - m + 1 = 2(" << st << " + " << gt << " - "
               << mt << ") + " << s << " + " << g << " - " << m << " + 1 = " << out.computed_genus;
    }
    out.holds = (out.computed_genus == spec.source_genus);
    out.detail = detail.str();
    return out;
}

ParityCheck even_genus_analysis(const LimitingSpaceSpec& spec) {
    if (spec.source_orientable)
        throw NotApplicable("even-genus analysis applies to non-orientable sources only");
    if (spec.source_genus % 2 != 0)
        throw NotApplicable("even-genus analysis applies to even source genus only");

    ParityCheck out;
    if (spec.one_sided_count != 0) {
        out.accepted = true;
        out.witness = "s = " + std::to_string(spec.one_sided_count) + " != 0";
        return out;
    }
    for (size_t i = 0; i < spec.nonorientable_genera.size(); ++i) {
        if (spec.nonorientable_genera[i] % 2 == 0) {
            out.accepted = true;
            out.witness = "non-orientable component " + std::to_string(i) + " has even genus " +
                          std::to_string(spec.nonorientable_genera[i]);
            return out;
        }
    }
    out.accepted = false;
    const int m = static_cast<int>(spec.nonorientable_genera.size());
    const int g = std::accumulate(spec.nonorientable_genera.begin(), spec.nonorientable_genera.end(), 0);
    std::ostringstream w;
    w << "s = 0 and all " << m << " non-orientable genera odd: |Gamma| - m = " << g - m
      << " is even, so genus = 2(...) + 0 + |Gamma| - m + 1 would be odd, contradicting even genus "
      << spec.source_genus;
    out.witness = w.str();
    return out;
}

std::string family_kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::TorusPinch: return "torus-pinch";
        case FamilyKind::KleinToSphere: return "klein-to-sphere";
        case FamilyKind::KleinToRP2: return "klein-to-rp2";
    }
    return "?";
}

DegenerationFamily degeneration_family(FamilyKind kind, const std::vector<double>& schedule,
                                       double torus_a) {
    if (schedule.empty()) throw WrongDirection("empty schedule");
    const bool increasing = kind != FamilyKind::KleinToSphere;
    for (size_t i = 0; i + 1 < schedule.size(); ++i) {
        if (increasing && !(schedule[i + 1] > schedule[i]))
            throw WrongDirection(family_kind_name(kind) + " needs b increasing to infinity");
        if (!increasing && !(schedule[i + 1] < schedule[i]))
            throw WrongDirection(family_kind_name(kind) + " needs b decreasing to zero");
    }

    DegenerationFamily fam;
    fam.kind = kind;
    for (double b : schedule) {
        CollapsingGeodesic geo;
        switch (kind) {
            case FamilyKind::TorusPinch:
                fam.members.push_back(make_class(SurfaceClass::Torus, torus_a, b));
                geo.length = 1.0 / std::sqrt(b);
                geo.sidedness = 2;
                geo.collar_width = 0.5 * std::sqrt((torus_a * torus_a + b * b) / b);
                break;
            case FamilyKind::KleinToSphere:
                fam.members.push_back(make_class(SurfaceClass::Klein, 0.0, b));
                geo.length = std::sqrt(b);
                geo.sidedness = 2;
                geo.collar_width = 0.5 / std::sqrt(b);
                break;
            case FamilyKind::KleinToRP2:
                fam.members.push_back(make_class(SurfaceClass::Klein, 0.0, b));
                geo.length = 1.0 / std::sqrt(b);
                geo.sidedness = 1;
                geo.collar_width = 0.5 * std::sqrt(b);
                break;
        }
        fam.geodesics.push_back(geo);
    }
    for (size_t i = 0; i + 1 < fam.geodesics.size(); ++i) {
        if (!(fam.geodesics[i + 1].length < fam.geodesics[i].length) ||
            !(fam.geodesics[i + 1].collar_width > fam.geodesics[i].collar_width))
            throw WrongDirection("family descriptors do not degenerate along the schedule");
    }

    LimitingSpaceSpec& lim = fam.limiting;
    switch (kind) {
        case FamilyKind::TorusPinch:
            lim.orientable_genera = {0};
            lim.two_sided_count = 1;
            lim.source_genus = 1;
            lim.source_orientable = true;
            break;
        case FamilyKind::KleinToSphere:
            lim.orientable_genera = {0};
            lim.two_sided_count = 1;
            lim.source_genus = 1;
            lim.source_orientable = false;
            break;
        case FamilyKind::KleinToRP2:
            lim.nonorientable_genera = {0};
            lim.one_sided_count = 1;
            lim.source_genus = 1;
            lim.source_orientable = false;
            break;
    }
    return fam;
}

LimitingSpaceSpec sphere_union_pinch(int genus, bool orientable) {
    LimitingSpaceSpec spec;
    spec.source_genus = genus;
    spec.source_orientable = orientable;
    if (orientable) {
        if (genus < 1) throw InconsistentSpec("orientable pinch needs genus >= 1");
        if (genus == 1) {
            spec.orientable_genera = {0};
            spec.two_sided_count = 1;
        } else {
            spec.orientable_genera.assign(2 * genus - 2, 0); // one sphere per pair of pants
            spec.two_sided_count = 3 * genus - 3;
        }
    } else {
        if (genus < 1 || genus % 2 == 0)
            throw InconsistentSpec("all-spheres pinch of a non-orientable surface needs odd genus");
        spec.orientable_genera.assign((genus + 1) / 2, 0);
        spec.two_sided_count = genus;
    }
    return spec;
}

LimitingSpaceSpec even_genus_pinch(int genus, int residual_genus) {
    if (genus < 2 || genus % 2 != 0) throw InconsistentSpec("source genus must be even and >= 2");
    if (residual_genus < 0 || residual_genus >= genus || residual_genus % 2 != 0)
        throw InconsistentSpec("residual genus must be even and < source genus");
    LimitingSpaceSpec spec;
    spec.source_genus = genus;
    spec.source_orientable = false;
    spec.nonorientable_genera = {residual_genus};
    const int half = (genus - residual_genus) / 2;
    spec.orientable_genera.assign(half, 0);
    spec.two_sided_count = 2 * half;
    return spec;
}

namespace {

// Terms of the limit maximum, in the fixed order orientable components,
// non-orientable components, 2-sided puncture spheres, 1-sided puncture
// planes.
std::vector<std::pair<std::string, SurfaceKey>> limit_terms(const LimitingSpaceSpec& spec) {
    std::vector<std::pair<std::string, SurfaceKey>> terms;
    for (int g : spec.orientable_genera)
        terms.push_back({"component " + SurfaceKey{true, g}.str(), SurfaceKey{true, g}});
    for (int g : spec.nonorientable_genera)
        terms.push_back({"component " + SurfaceKey{false, g}.str(), SurfaceKey{false, g}});
    for (int i = 0; i < spec.two_sided_count; ++i)
        terms.push_back({"puncture S2 #" + std::to_string(i + 1), sphere_key()});
    for (int i = 0; i < spec.one_sided_count; ++i)
        terms.push_back({"puncture RP2 #" + std::to_string(i + 1), rp2_key()});
    return terms;
}

// Lexicographic comparison of descending-sorted parts, raw tuple as the
// tie-break; picks the most balanced maximizing assignment.
bool assignment_less(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> sa = a, sb = b;
    std::sort(sa.rbegin(), sa.rend());
    std::sort(sb.rbegin(), sb.rend());
    if (sa != sb) return sa < sb;
    return a < b;
}

struct BestAssignment {
    bool have = false;
    LambdaValue value;
    std::vector<int> assignment;

    void offer(const LambdaValue& v, const std::vector<int>& asg) {
        if (!have) {
            have = true; value = v; assignment = asg;
            return;
        }
        bool better;
        if (value.is_exact() && v.is_exact()) better = *value.exact < *v.exact;
        else better = value.value() < v.value() + 0.0;
        bool equal = value.is_exact() && v.is_exact() ? (*value.exact == *v.exact)
                                                      : std::abs(value.value() - v.value()) <= 1e-12 * std::max(1.0, std::abs(v.value()));
        if (better) { value = v; assignment = asg; }
        else if (equal && assignment_less(asg, assignment)) { assignment = asg; }
    }
};

void enumerate_assignments(const std::vector<std::vector<LambdaValue>>& columns, int term,
                           int remaining, std::vector<int>& current, LambdaValue sum,
                           BestAssignment& best) {
    if (term == static_cast<int>(columns.size())) {
        if (remaining == 0) best.offer(sum, current);
        return;
    }
    for (int ki = 0; ki <= remaining; ++ki) {
        current[term] = ki;
        enumerate_assignments(columns, term + 1, remaining - ki, current, sum + columns[term][ki], best);
    }
    current[term] = 0;
}

} // namespace

LimitValue limit_value(const LimitingSpaceSpec& spec, int k, const LambdaTable& table) {
    auto terms = limit_terms(spec);
    if (terms.empty()) throw InconsistentSpec("limiting space has no terms");
    std::vector<std::vector<LambdaValue>> columns;
    columns.reserve(terms.size());
    for (const auto& [name, key] : terms) columns.push_back(table.column(key, k));

    BestAssignment best;
    std::vector<int> current(terms.size(), 0);
    enumerate_assignments(columns, 0, k, current, LambdaValue::exact_pi(PiRational::zero()), best);

    LimitValue out;
    out.value = best.value;
    out.assignment = best.assignment;
    for (const auto& [name, key] : terms) out.term_names.push_back(name);
    return out;
}

LambdaValue limit_value_short_form(const LimitingSpaceSpec& spec, int k, const LambdaTable& table) {
    const int s = spec.one_sided_count;
    if (s < 1) throw InconsistentSpec("short form requires at least one 1-sided collapse");

    // Lambda_{k'} of the limit components alone (punctures absorbed).
    std::vector<std::vector<LambdaValue>> columns;
    for (int g : spec.orientable_genera) columns.push_back(table.column(SurfaceKey{true, g}, k));
    for (int g : spec.nonorientable_genera) columns.push_back(table.column(SurfaceKey{false, g}, k));
    if (columns.empty()) throw InconsistentSpec("limiting space has no components");

    BestAssignment best;
    for (int kp = std::max(0, k - s); kp <= k; ++kp) {
        BestAssignment comp;
        std::vector<int> current(columns.size(), 0);
        enumerate_assignments(columns, 0, kp, current, LambdaValue::exact_pi(PiRational::zero()), comp);
        LambdaValue total = comp.value + LambdaValue::exact_pi(PiRational(12 * static_cast<std::int64_t>(k - kp)));
        std::vector<int> asg = comp.assignment;
        asg.push_back(k - kp);
        best.offer(total, asg);
    }
    return best.value;
}

} // namespace speclab
