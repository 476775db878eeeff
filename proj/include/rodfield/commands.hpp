#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "rodfield/config.hpp"

namespace rodfield {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

/// Grid rows x1, x2, |u - H|, |grad u - grad H|, near_flag for the chosen model.
/// BEM flags points within two panel lengths of a node; the asymptotic model
/// flags points inside the rod (and, for quadratic H, points where its axis
/// quadrature is under-resolved).
int cmd_fieldmap(const RunConfig& cfg, ForwardModel model, std::ostream& out);

/// BEM field on the grid: x1, x2, u, ux, uy, near_boundary_flag.
int cmd_forward(const RunConfig& cfg, std::ostream& out);

/// Closed-form field on the grid, same columns as cmd_forward.
int cmd_asymptotic(const RunConfig& cfg, std::ostream& out);

/// delta sweep: E(delta) = max over the probe circle of |u_bem - u_asym|,
/// written as JSON with mesh sizes and timings.
int cmd_compare(const RunConfig& cfg, std::ostream& out);

struct ValidateRequest {
    bool verbose = false;
    bool zero_weights = false;
};
int cmd_validate(const ValidateRequest& req, std::ostream& out);

struct InvertRequest {
    std::string data_file;  // read from here, or write synthetic data here
    bool synthesize = false;
};
/// Fits the rod to measurements and writes a JSON report. Returns
/// exit_failure when the optimizer did not converge.
int cmd_invert(const RunConfig& cfg, const InvertRequest& req, std::ostream& out);

}  // namespace rodfield
