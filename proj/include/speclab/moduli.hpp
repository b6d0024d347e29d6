#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/lambda_table.hpp"

namespace speclab {

enum class SurfaceClass { Torus, Klein, Sphere, RP2 };

std::string surface_class_name(SurfaceClass c);

// A point of the moduli space of conformal classes. Torus classes live in the
// fundamental domain {a^2 + b^2 >= 1, 0 <= a <= 1/2}; Klein classes are b > 0;
// the sphere and projective plane carry a single class each.
struct ConformalClassParam {
    SurfaceClass kind = SurfaceClass::Sphere;
    double a = 0.0;
    double b = 0.0;

    static ConformalClassParam torus(double a, double b);
    static ConformalClassParam klein(double b);
    static ConformalClassParam sphere() { return {SurfaceClass::Sphere, 0.0, 0.0}; }
    static ConformalClassParam rp2() { return {SurfaceClass::RP2, 0.0, 0.0}; }

    bool orientable() const { return kind == SurfaceClass::Torus || kind == SurfaceClass::Sphere; }
    std::string str() const;
};

// Validates raw parameters. For a torus parameter outside the fundamental
// domain the InvalidClassParam message names the violated constraint and
// carries the modular-equivalent reduced parameter as a hint.
ConformalClassParam make_class(SurfaceClass kind, double a = 0.0, double b = 0.0);

// Reduces an arbitrary lattice parameter tau = a + i b, b > 0, into the
// fundamental domain above (translation, inversion, mirror a -> -a).
std::pair<double, double> reduce_torus_param(double a, double b);

// Combinatorial description of a degeneration limit: which closed components
// survive, and how many 2-sided / 1-sided geodesics collapsed into paired
// punctures.
struct LimitingSpaceSpec {
    std::vector<int> orientable_genera;
    std::vector<int> nonorientable_genera;
    int two_sided_count = 0; // number of collapsed 2-sided geodesics
    int one_sided_count = 0; // number of collapsed 1-sided geodesics
    int source_genus = 0;
    bool source_orientable = true;
};

struct GenusCheck {
    bool holds = false;
    int computed_genus = 0;
    std::string detail;
};

// Verifies the genus bookkeeping of the limiting space against the source
// surface, or reports the genus the data implies. Orientable sources must not
// list non-orientable components or 1-sided collapses.
GenusCheck genus_relation(const LimitingSpaceSpec& spec);

struct ParityCheck {
    bool accepted = false;
    std::string witness;
};

// For a non-orientable source of even genus: accepts iff a 1-sided geodesic
// collapsed or some non-orientable component has even genus; otherwise the
// witness spells out the parity computation that rules the spec out.
// Throws NotApplicable for other sources.
ParityCheck even_genus_analysis(const LimitingSpaceSpec& spec);

enum class FamilyKind { TorusPinch, KleinToSphere, KleinToRP2 };

std::string family_kind_name(FamilyKind k);

struct CollapsingGeodesic {
    double length = 0.0;
    int sidedness = 2; // 1 = Moebius collar, 2 = cylinder collar
    double collar_width = 0.0;
};

// A degenerating path of conformal classes with per-member collapsing
// geodesic data and the combinatorial limit it converges to.
struct DegenerationFamily {
    FamilyKind kind = FamilyKind::TorusPinch;
    std::vector<ConformalClassParam> members;
    std::vector<CollapsingGeodesic> geodesics;
    LimitingSpaceSpec limiting;
};

// schedule carries the b values; torus members use the fixed a given.
// TorusPinch and KleinToRP2 need an increasing schedule, KleinToSphere a
// decreasing one (WrongDirection otherwise).
DegenerationFamily degeneration_family(FamilyKind kind, const std::vector<double>& schedule,
                                       double torus_a = 0.0);

// Preset limiting specs for the all-spheres pinches: orientable sources of
// any genus and non-orientable sources of odd genus.
LimitingSpaceSpec sphere_union_pinch(int genus, bool orientable);
// Even-genus non-orientable source collapsing 2-sided geodesics only, leaving
// spheres plus one non-orientable component of even genus residual_genus.
LimitingSpaceSpec even_genus_pinch(int genus, int residual_genus);

struct LimitValue {
    LambdaValue value;
    // One index per term, ordered: orientable components, non-orientable
    // components, 2-sided puncture spheres, 1-sided puncture planes.
    std::vector<int> assignment;
    std::vector<std::string> term_names;
};

// Evaluates the degeneration-limit maximum: indices >= 0 summing to k over
// all terms (components plus one sphere term per 2-sided collapse and one
// projective-plane term per 1-sided collapse), with Lambda_0 = 0. Exact when
// every table entry involved is exact. Throws IncompleteTable if the table
// is missing a needed column.
LimitValue limit_value(const LimitingSpaceSpec& spec, int k, const LambdaTable& table);

// Equivalent short form available when one_sided_count >= 1:
//   max over k' in [max(0, k-s), k] of Lambda_{k'}(limit components) + 12*pi*(k-k').
// Computed independently of limit_value for cross-checking.
LambdaValue limit_value_short_form(const LimitingSpaceSpec& spec, int k, const LambdaTable& table);

} // namespace speclab
