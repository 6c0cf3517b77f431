//! Induction from `G_χ = ker χ` and its inverse on the kernel of `1 − x^χ`.

use num_rational::Rational64;

use super::ops::mul_finite;
use super::simplify::{is_zero_at, simplify, ZeroVerdict, PERIODIC_DEPTH};
use super::witness::find_witness;
use super::{GenChar, PolarizedTerm};
use crate::charring::FiniteCharacter;
use crate::error::{Error, Result};
use crate::lattice::{quotient_by_character, PolarizingVector, QuotientMap, Weight};

fn hints(lifted: &PolarizingVector, chi: &Weight, sign: i64) -> Vec<PolarizingVector> {
    [1i64, 4, 16, 64, 256]
        .iter()
        .map(|&k| {
            PolarizingVector::new(
                lifted
                    .coords()
                    .iter()
                    .zip(chi.free())
                    .map(|(a, &c)| a * Rational64::from_integer(k) + Rational64::from_integer(sign * c))
                    .collect(),
            )
        })
        .collect()
}

/// `Ind(φ)`: lift along the section of `q` and multiply by
/// `Σ_{k∈ℤ} x^{kχ} = 1/(1 − x^χ) + x^{−χ}/(1 − x^{−χ})`.
pub fn induction(phi: &GenChar, q: &QuotientMap) -> Result<GenChar> {
    if phi.group() != q.target() {
        return Err(Error::InvalidGroup("generalized character is not over the quotient group".into()));
    }
    let g = q.source();
    let n = g.free_rank();
    let chi = q.chi();
    let neg_chi = g.neg(chi);
    let mut pieces: Vec<(i64, Weight, Vec<Weight>, PolarizingVector)> = Vec::new();
    for t in phi.terms() {
        pieces.push((
            t.coeff(),
            q.section(t.numerator()),
            t.denominators().iter().map(|d| q.section(d)).collect(),
            q.lift_witness(t.witness()),
        ));
    }
    for (w, c) in phi.finite_part().iter() {
        pieces.push((c, q.section(w), Vec::new(), PolarizingVector::zero(n)));
    }
    let mut out = GenChar::zero(g);
    for (coeff, num, dens, lifted) in pieces {
        for (sign, extra) in [(1i64, chi), (-1, &neg_chi)] {
            let mut all = dens.clone();
            all.push(extra.clone());
            let xi = find_witness(n, &all, &hints(&lifted, chi, sign)).ok_or_else(|| {
                Error::NotSummable(format!("lifted denominators {dens:?} admit no witness with {extra}"))
            })?;
            let numerator = if sign > 0 { num.clone() } else { g.sub(&num, chi) };
            out.push_term(PolarizedTerm::unchecked(coeff, numerator, all, xi));
        }
    }
    Ok(out)
}

fn project_terms(phi: &GenChar, q: &QuotientMap, drop: &Weight, shift: &Weight) -> Option<GenChar> {
    let target = q.target();
    let mut out = GenChar::zero(target);
    for t in phi.terms() {
        let Some(pos) = t.denominators().iter().position(|d| d == drop) else {
            continue;
        };
        let mut rest = t.denominators().to_vec();
        rest.remove(pos);
        let numerator = q.project(&phi.group().add(t.numerator(), shift));
        let dens: Vec<Weight> = rest.iter().map(|d| q.project(d)).collect();
        if dens.iter().any(|d| d.has_zero_differential()) {
            return None;
        }
        let xi = find_witness(target.free_rank(), &dens, &[])?;
        out.push_term(PolarizedTerm::unchecked(t.coeff(), numerator, dens, xi));
    }
    Some(out)
}

/// Recovers `ψ` over `Ĝ_χ` with `Ind(ψ) = φ`.
///
/// Requires a certified `(1 − x^χ)·φ = 0`. Candidates are read off the
/// `χ`-branch terms (dropping the factor `1/(1 − x^χ)`) or the `−χ`-branch
/// terms (dropping `x^{−χ}/(1 − x^{−χ})`), projected along `π`; a candidate
/// is accepted only if `Ind(ψ) − φ` is proved zero.
pub fn invert_induction(phi: &GenChar, chi: &Weight) -> Result<GenChar> {
    invert_induction_at(phi, chi, PERIODIC_DEPTH).map(|(psi, _)| psi)
}

/// [`invert_induction`] with zero tests limited to `depth` nested periodic
/// reductions; also returns the quotient map.
pub(super) fn invert_induction_at(phi: &GenChar, chi: &Weight, depth: u32) -> Result<(GenChar, QuotientMap)> {
    let g = phi.group();
    let q = quotient_by_character(g, chi)?;
    let killed = mul_finite(&FiniteCharacter::one_minus(g, chi), phi);
    if is_zero_at(&killed, depth) != ZeroVerdict::ProvedZero {
        return Err(Error::NotPeriodic);
    }
    let s = simplify(phi);
    let neg_chi = g.neg(chi);
    let candidates = [(chi.clone(), g.zero()), (neg_chi, chi.clone())];
    for (drop, shift) in &candidates {
        let Some(psi) = project_terms(&s, &q, drop, shift) else {
            continue;
        };
        let back = induction(&psi, &q)?;
        if is_zero_at(&back.sub(phi), depth) == ZeroVerdict::ProvedZero {
            return Ok((simplify(&psi), q));
        }
    }
    Err(Error::ReconstructionUnsupported(
        "neither branch of the representation reconstructs the character".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genchar::{sigma_dbar_index, Window};
    use crate::lattice::{CharacterGroup, GModule};

    #[test]
    fn constant_induces_full_line() {
        let g = CharacterGroup::torus(1);
        let chi = g.free_weight(&[1]);
        let q = quotient_by_character(&g, &chi).unwrap();
        let one = GenChar::from_finite(FiniteCharacter::one(q.target()));
        let ind = induction(&one, &q).unwrap();
        let tr = ind.truncate(&Window::cube(1, -5, 5));
        assert_eq!(tr.len(), 11);
        assert!(tr.iter().all(|(_, c)| c == 1));
        let back = invert_induction(&ind, &chi).unwrap();
        assert_eq!(back.finite_part(), &FiniteCharacter::one(q.target()));
        assert!(back.is_finite());
    }

    #[test]
    fn full_line_from_thom_difference_inverts() {
        let g = CharacterGroup::torus(1);
        let v = GModule::from_free(&g, &[&[1]]).unwrap();
        let sigma = sigma_dbar_index(&v, &PolarizingVector::from_ints(&[1])).unwrap();
        let back = invert_induction(&sigma, &g.free_weight(&[1])).unwrap();
        assert!(back.is_finite());
        assert_eq!(back.finite_part().len(), 1);
    }

    #[test]
    fn odd_powers_from_the_sign_character() {
        let g = CharacterGroup::torus(1);
        let chi = g.free_weight(&[2]);
        let q = quotient_by_character(&g, &chi).unwrap();
        assert_eq!(q.target().torsion_orders(), &[2]);
        let sign = q.target().weight(vec![], vec![1]).unwrap();
        let phi = GenChar::from_finite(FiniteCharacter::monomial(q.target(), sign.clone(), 1));
        let ind = induction(&phi, &q).unwrap();
        let tr = ind.truncate(&Window::cube(1, -7, 7));
        for k in -7..=7i64 {
            assert_eq!(tr.coeff(&g.free_weight(&[k])), k.rem_euclid(2), "k={k}");
        }
        let back = invert_induction(&ind, &chi).unwrap();
        assert_eq!(back.finite_part(), &FiniteCharacter::monomial(q.target(), sign, 1));
    }

    #[test]
    fn constants_are_not_periodic() {
        let g = CharacterGroup::torus(1);
        let one = GenChar::from_finite(FiniteCharacter::one(&g));
        assert_eq!(invert_induction(&one, &g.free_weight(&[1])), Err(Error::NotPeriodic));
    }
}
