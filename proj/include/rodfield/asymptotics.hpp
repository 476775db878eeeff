#pragma once

#include <functional>

#include "rodfield/background.hpp"
#include "rodfield/geometry.hpp"

namespace rodfield {

/// Leading-order model of the field perturbation caused by a thin rod
/// (delta << L). All evaluation entry points take world coordinates; the
/// rod frame is given by `center` and `angle`.
struct AsymptoticModel {
    double length = 1.0;
    double delta = 0.1;
    double lambda = 1.5;
    Vec2 center = Vec2::Zero();
    double angle = 0.0;
    HarmonicBackground background;

    static AsymptoticModel from_spec(const RodSpec& spec, const HarmonicBackground& h);

    /// delta / (lambda - 1/2), the only combination of delta and lambda the
    /// leading-order field sees.
    double strength() const { return delta / (lambda - 0.5); }

    Vec2 local(const Vec2& x) const;
    Vec2 world_vector(const Vec2& v_local) const;
};

/// Cap centres P = (-L/2, 0), Q = (L/2, 0) in the local frame.
struct CapPoints {
    Vec2 p;
    Vec2 q;
};
CapPoints cap_points(double length);

/// Localisation functions (local frame):
///   f1 = x2/|x-Q|^2 - x2/|x-P|^2
///   f2 = (x1-L/2)/|x-Q|^2 - (x1+L/2)/|x-P|^2
/// Throws SingularPointError at P or Q.
std::pair<double, double> f1_f2(const Vec2& x_local, double length);

/// f1^2 + f2^2 written through distances to the cap centres:
///   (1/|x-Q| - 1/|x-P|)^2 + 2/(|x-P||x-Q|) (1 - <x-P, x-Q>/(|x-P||x-Q|)).
double localization_factor(const Vec2& x_local, double length);

/// Leading-order u for H = a.x:
///   a.x + c/pi a2 [atan((L/2-x1)/x2) + atan((L/2+x1)/x2)] + c/(2 pi) a1 ln(|x-Q|^2/|x-P|^2)
/// with c = delta/(lambda - 1/2), (a1, a2) in the rod frame. On the rod axis
/// the arctan pair takes its one-sided limit from the sign bit of x2.
double asym_u_linear(const AsymptoticModel& model, const Vec2& x);

/// Perturbation part of asym_u_linear in the rod frame: a_local is the
/// uniform field in rod axes, c the strength delta/(lambda - 1/2).
double linear_perturbation(const Vec2& a_local, double length, double strength, const Vec2& x_local);

/// The two shape functions of the linear perturbation in the rod frame:
/// longitudinal (1/2pi) ln(|x-Q|^2/|x-P|^2) and transverse (1/pi) * arctan pair.
/// asym_u_linear = a.x + c (a1 * longitudinal + a2 * transverse).
struct LinearShapes {
    double longitudinal;
    double transverse;
};
LinearShapes linear_shapes(double length, const Vec2& x_local);

/// grad u = a + c/pi (f2 a1 - f1 a2, f1 a1 + f2 a2), rotated back to world axes.
Vec2 asym_grad_linear(const AsymptoticModel& model, const Vec2& x);

/// |E^s|^2 = c^2/pi^2 |a|^2 (f1^2 + f2^2): squared magnitude of the
/// leading-order gradient perturbation.
double perturbed_field_energy(const AsymptoticModel& model, const Vec2& x);

struct AsymptoticValue {
    double value = 0.0;
    bool underresolved = false;  // |x2| < L / n_quad: Poisson kernel sharper than the base rule
};

/// Leading-order u for any harmonic H of degree <= 2:
///   H(x) + c/(2pi) int ln(((x1-y1)^2+x2^2)/((x1+L/2)^2+x2^2)) d2^2 H(y1,0) dy1
///        + c/pi    int x2/((x1-y1)^2+x2^2) d2 H(y1,0) dy1
///        + c/(2pi) ln(|x-Q|^2/|x-P|^2) d1 H(L/2,0)
/// (derivatives and coordinates in the rod frame). Integrals use composite
/// Gauss-Legendre with n_quad points per graded panel.
AsymptoticValue asym_u_general(const AsymptoticModel& model, const Vec2& x, int n_quad = 16);

/// Averaging operator on the rod axis,
///   A[psi](x1) = (1/pi) int_{-L/2}^{L/2} delta / ((x1-y1)^2 + 4 delta^2) psi(y1) dy1,
/// which acts as multiplication by 1/2 on polynomials as delta -> 0.
double a_delta_apply(const std::function<double(double)>& psi, double delta, double length, double x1,
                     int n_quad = 16);

}  // namespace rodfield
