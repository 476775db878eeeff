#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rodfield/solver.hpp"

namespace rodfield {

/// Exact exterior perturbation u - H for a disc of radius delta centred at
/// the origin in H = a.x:  -((sigma0 - 1)/(sigma0 + 1)) delta^2 <a, x> / |x|^2.
double disc_perturbation(const Vec2& a, double delta, double sigma0, const Vec2& x);

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;

    double margin() const { return tolerance - measured; }
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool all_passed() const;
};

struct ValidateOptions {
    /// Fault injection: zero every quadrature weight before the mesh checks.
    bool zero_weights = false;
};

/// Runs the built-in invariant suite on a fixed set of meshes: disc, thin
/// rod, wide rod and a rotated, shifted rod.
ValidationReport run_validation(const ValidateOptions& opts = {});

/// One line per check; with `verbose` also the margin and details.
void print_report(std::ostream& out, const ValidationReport& report, bool verbose);

}  // namespace rodfield
