//! The special-function family of the plane realization: R-polynomials,
//! the constructions of `Q_{Jq}`, the `L_q` integral, normalization
//! constants, the basis functions Ψ and the q-Vilenkin functions.

mod basis;
mod qfunction;

pub use basis::{norm_constant, psi, psi_combination, r_polynomial, r_times_v_power, vilenkin};
pub use qfunction::{
    classical_q, default_method, functional_equation_residual, l_function, q_finite_product,
    q_function, q_infinite_product, q_integral_exp, QFunctionMethod, L_ABS_TOL,
};
