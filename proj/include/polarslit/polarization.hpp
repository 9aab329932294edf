#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace polarslit {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Jones vector over the {V, H} basis: component 0 is vertical, 1 horizontal.
template <typename Scalar>
using Jones = Eigen::Matrix<Complex<Scalar>, 2, 1>;

/// Absolute tolerance for identities on normalized amplitudes.
inline constexpr double kExactTolerance = 1e-12;

/**
 * Pure polarization state of a photon.
 *
 * `input_norm` keeps the norm of the raw (a, b) pair the state was built from,
 * so transmission losses can be reported against the unit incident beam.
 */
template <typename Scalar = double>
struct PolarizationState {
    Jones<Scalar> jones = Jones<Scalar>::Zero();
    Scalar input_norm = Scalar(1);

    static PolarizationState from_components(Complex<Scalar> v, Complex<Scalar> h) {
        PolarizationState s;
        s.jones << v, h;
        return s;
    }

    Complex<Scalar> v() const { return jones(0); }
    Complex<Scalar> h() const { return jones(1); }

    Scalar norm2() const { return jones.squaredNorm(); }

    bool normalized() const {
        return std::abs(norm2() - Scalar(1)) <= Scalar(kExactTolerance);
    }

    bool operator==(PolarizationState const&) const = default;
};

/// Linear polarizer axis, angle from vertical reduced into [0, pi).
template <typename Scalar = double>
class PolarizerAxis {
public:
    PolarizerAxis() = default;

    explicit PolarizerAxis(Scalar theta) : theta_(reduce(theta)) {}

    Scalar angle() const { return theta_; }

    static Scalar reduce(Scalar theta) {
        if (!std::isfinite(theta)) {
            throw std::domain_error("polarizer angle must be finite");
        }
        constexpr Scalar pi = std::numbers::pi_v<Scalar>;
        Scalar r = std::fmod(theta, pi);
        if (r < Scalar(0)) r += pi;
        // fmod of a tiny negative angle can round up to exactly pi
        if (r >= pi) r = Scalar(0);
        return r;
    }

    bool operator==(PolarizerAxis const&) const = default;

private:
    Scalar theta_ = Scalar(0);
};

/// Normalizes the raw beam coefficients (a, b); throws on the null beam.
template <typename Scalar>
PolarizationState<Scalar> make_input_state(Complex<Scalar> a, Complex<Scalar> b) {
    Jones<Scalar> raw;
    raw << a, b;
    Scalar const lambda = raw.norm();
    if (!std::isfinite(lambda)) {
        throw std::domain_error("beam coefficients must be finite");
    }
    if (lambda == Scalar(0)) {
        throw std::domain_error("null beam");
    }
    PolarizationState<Scalar> s;
    s.jones = raw / lambda;
    s.input_norm = lambda;
    return s;
}

/// Returns (|theta>, |theta + pi/2>).
template <typename Scalar>
std::pair<PolarizationState<Scalar>, PolarizationState<Scalar>> rotated_basis(Scalar theta) {
    Scalar const c = std::cos(theta);
    Scalar const s = std::sin(theta);
    return {PolarizationState<Scalar>::from_components(c, s),
            PolarizationState<Scalar>::from_components(-s, c)};
}

/// <u|v>, antilinear in the first argument.
template <typename Scalar>
Complex<Scalar> inner(PolarizationState<Scalar> const& u, PolarizationState<Scalar> const& v) {
    return u.jones.dot(v.jones);
}

/// Components of `state` along |theta> and |theta + pi/2>.
template <typename Scalar>
std::pair<Complex<Scalar>, Complex<Scalar>> express_in_basis(PolarizationState<Scalar> const& state,
                                                             Scalar theta) {
    auto const [along, across] = rotated_basis(theta);
    return {inner(along, state), inner(across, state)};
}

/// Inverse of express_in_basis.
template <typename Scalar>
PolarizationState<Scalar> reconstruct(Complex<Scalar> along, Complex<Scalar> across, Scalar theta) {
    auto const [e1, e2] = rotated_basis(theta);
    PolarizationState<Scalar> s;
    s.jones = along * e1.jones + across * e2.jones;
    return s;
}

template <typename Scalar>
struct Transmitted {
    PolarizationState<Scalar> state;
    Scalar fraction;
};

/**
 * Ideal linear polarizer: keeps the component along the axis.
 *
 * The fraction is |<theta|psi>|^2 (Malus's law for a normalized input).
 */
template <typename Scalar>
Transmitted<Scalar> project_polarizer(PolarizationState<Scalar> const& state,
                                      PolarizerAxis<Scalar> const& axis) {
    auto const [along, unused] = rotated_basis(axis.angle());
    Complex<Scalar> const c = inner(along, state);
    PolarizationState<Scalar> out;
    out.jones = c * along.jones;
    out.input_norm = state.input_norm;
    return {out, std::norm(c)};
}

/// (|L>, |R>) with |L> = (|V> + i|H>)/sqrt2 and |R> = (|V> - i|H>)/sqrt2.
template <typename Scalar = double>
std::pair<PolarizationState<Scalar>, PolarizationState<Scalar>> circular_states() {
    Scalar const r = Scalar(1) / std::sqrt(Scalar(2));
    Complex<Scalar> const i(0, 1);
    return {PolarizationState<Scalar>::from_components(r, i * r),
            PolarizationState<Scalar>::from_components(r, -i * r)};
}

}  // namespace polarslit
