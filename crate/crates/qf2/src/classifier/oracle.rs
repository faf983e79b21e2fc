//! Independent cross-check: run the isotropy engine over an explicitly
//! constructed F(ψ), with the generic point feeding the certificate search.

use crate::quadform::{
    isotropy_over_function_field, FormError, FunctionField, IsotropyOptions, QuadForm,
};
use crate::verdict::Verdict;

/// Isotropy of φ over F(ψ) by direct computation over the function-field
/// tower: certificate search up to the degree bound, residue tools where
/// the tower rewrites rationally. Yes/No are certified; Unknown otherwise.
pub fn oracle_isotropy_over_function_field(
    phi: &QuadForm,
    psi: &QuadForm,
    degree_bound: u16,
) -> Result<(Verdict, FunctionField), FormError> {
    let opts = IsotropyOptions { degree_bound, ..IsotropyOptions::default() };
    isotropy_over_function_field(phi, psi, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_tower;
    use crate::verdict::Answer;

    #[test]
    fn oracle_anchored() {
        let tw = parse_tower("F2(w,x,y,z)").unwrap();
        let phi = QuadForm::parse(&tw, "w*[1,x] + <1,y,z>").unwrap();
        // ψ ≺ φ explicit: yes via the generic point
        let psi = QuadForm::parse(&tw, "<1,y>").unwrap();
        let (v, _) = oracle_isotropy_over_function_field(&phi, &psi, 2).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        // φ over F(φ): isotropic
        let (v, _) = oracle_isotropy_over_function_field(&phi, &phi, 2).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        // reducible ψ propagates the error
        let bad = QuadForm::parse(&tw, "<w>").unwrap();
        assert!(matches!(
            oracle_isotropy_over_function_field(&phi, &bad, 2),
            Err(FormError::ReduciblePolynomial)
        ));
    }
}
