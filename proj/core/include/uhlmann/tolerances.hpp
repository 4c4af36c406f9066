#pragma once

namespace uhlmann {

/// Numerical tolerances used across the library. The defaults are sized so
/// that double-precision round-off never trips them for state dimensions
/// up to ~8; every one of them can be overridden per call site.
struct Tolerances {
    double hermiticity = 1e-10;      ///< relative Frobenius defect ||A - A^dag|| / ||A||
    double trace = 1e-10;            ///< |Tr rho - 1|
    double positivity_floor = 1e-9;  ///< smallest admissible eigenvalue of a state
    double sld_residual = 1e-10;     ///< relative residual of the SLD equation
    double commutator = 1e-8;        ///< scale-free commutator norm threshold
    double curvature = 1e-6;         ///< absolute Frobenius threshold on F_ij
    double lift_defect = 1e-6;       ///< end-point projection error of a horizontal lift
    double rpf_vanish = 1e-5;        ///< ||U - I||_F below which the RPF counts as vanishing
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace uhlmann
