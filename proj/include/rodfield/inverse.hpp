#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rodfield/asymptotics.hpp"
#include "rodfield/solver.hpp"

namespace rodfield {

/// Measurement points on a circle around the inclusion, with the voltages
/// observed there and the background field that produced them.
struct SensorSet {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
    std::vector<Vec2> points;
    std::vector<double> values;
    HarmonicBackground background;
};

/// `count` equally spaced points, the first at angle 0.
std::vector<Vec2> make_sensor_circle(const Vec2& center, double radius, int count);

/// Throws ValidationError("sensors", ...) if any point is closer than 2 delta
/// to the rod or lies inside it.
void check_sensor_placement(const RodSpec& spec, const std::vector<Vec2>& points);

enum class ForwardModel { bem, asymptotic };

ForwardModel parse_forward_model(const std::string& name);
const char* model_name(ForwardModel m);

struct SimulationOptions {
    double noise_rms = 0.0;
    ForwardModel source = ForwardModel::bem;
    std::uint64_t seed = 0;
    double nodes_per_delta = 4.0;
};

/// Forward values at the sensors plus i.i.d. N(0, noise_rms^2) noise from a
/// mt19937_64 seeded with `seed`.
SensorSet simulate_measurements(const RodSpec& spec, const HarmonicBackground& h, const Vec2& center, double radius,
                                const std::vector<Vec2>& points, const SimulationOptions& opts = {});

/// Leading-order parameters. strength = delta / (lambda - 1/2) multiplies
/// the longitudinal shape, transverse_strength the transverse one (equal in
/// the closed-form model of asym_u_linear).
struct FitParams {
    Vec2 center = Vec2::Zero();
    double angle = 0.0;
    double length = 1.0;
    double strength = 0.0;
    double transverse_strength = 0.0;
};

/// u_model(x) = H(x) + strength a1 * longitudinal + transverse_strength a2 * transverse
/// (see linear_shapes). H must be uniform.
double model_value(const FitParams& p, const HarmonicBackground& h, const Vec2& x);

/// Maps (L, strengths) -> (|L|, sign(L) strengths) and angle into [0, pi).
FitParams canonicalize(FitParams p);

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-10;
    /// Fit the transverse strength independently. When false it is tied to
    /// `strength`, which is the closed-form model verbatim.
    bool free_transverse = true;
};

struct FitResult {
    Vec2 p_hat = Vec2::Zero();
    Vec2 q_hat = Vec2::Zero();
    FitParams params;
    double residual = 0.0;  // RMS misfit
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // RMS after each accepted step, starting with the initial guess
};

/// Least squares fit of model_value to the data. The strengths enter
/// linearly and are eliminated at every step (variable projection), so only
/// init.center, init.angle and init.length matter. Levenberg-Marquardt with
/// a central-difference Jacobian runs on (center, angle, L).
FitResult fit_rod(const SensorSet& data, const FitParams& init, const FitOptions& opts = {});

/// Centre from the |u - H|-weighted centroid of the sensors, angle 0,
/// L = R/2.
FitParams initial_guess(const SensorSet& data);

/// Runs fit_rod from initial_guess with angles {0, pi/4, pi/2, 3pi/4} and
/// keeps the lowest residual.
FitResult fit_rod_multistart(const SensorSet& data, const FitOptions& opts = {});

/// max over sensors of |u1 - u2| using the BEM forward model.
double distinguishability_gap(const RodSpec& spec1, const RodSpec& spec2, const HarmonicBackground& h,
                              const std::vector<Vec2>& points, double nodes_per_delta = 4.0);

/// Reads "x1,x2,u" rows (header optional, '#' comments allowed). Parse
/// errors carry the 1-based line number.
struct Measurements {
    std::vector<Vec2> points;
    std::vector<double> values;
};
Measurements read_measurements(std::istream& in);
void write_measurements(std::ostream& out, const std::vector<Vec2>& points, const std::vector<double>& values);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace rodfield
