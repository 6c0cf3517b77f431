//! Ring operations and the polarized inverses `[∧•V]^{-1}_β`.

use num_traits::{Signed, Zero};

use super::simplify::simplify;
use super::witness::find_witness;
use super::{GenChar, PolarizedTerm};
use crate::charring::FiniteCharacter;
use crate::error::{Error, Result};
use crate::lattice::{GModule, PolarizingVector};

fn scaled_terms(p: &FiniteCharacter, phi: &GenChar) -> Vec<PolarizedTerm> {
    let g = &phi.group;
    let mut out = Vec::with_capacity(p.len() * phi.terms.len());
    for t in &phi.terms {
        for (w, c) in p.iter() {
            out.push(PolarizedTerm {
                coeff: c * t.coeff,
                numerator: g.add(&t.numerator, w),
                denominators: t.denominators.clone(),
                witness: t.witness.clone(),
            });
        }
    }
    out
}

/// `p ⊗ Φ`, followed by exact cancellation.
pub fn mul_finite(p: &FiniteCharacter, phi: &GenChar) -> GenChar {
    let raw = GenChar::from_parts(&phi.group, scaled_terms(p, phi), p.mul(&phi.finite));
    simplify(&raw)
}

fn add_vectors(a: &PolarizingVector, b: &PolarizingVector) -> PolarizingVector {
    PolarizingVector::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect())
}

/// Termwise product. Every pair of terms needs a common witness for the
/// merged denominators; otherwise the product is not certified summable.
pub fn mul_genchar(a: &GenChar, b: &GenChar) -> Result<GenChar> {
    let g = &a.group;
    let n = g.free_rank();
    let mut terms = scaled_terms(&b.finite, a);
    terms.extend(scaled_terms(&a.finite, b));
    for s in &a.terms {
        for t in &b.terms {
            let mut dens = s.denominators.clone();
            dens.extend(t.denominators.iter().cloned());
            let hints = [add_vectors(&s.witness, &t.witness), s.witness.clone(), t.witness.clone()];
            let xi = find_witness(n, &dens, &hints).ok_or_else(|| {
                Error::NotSummable(format!(
                    "denominators {:?} and {:?} have no common witness",
                    s.denominators, t.denominators
                ))
            })?;
            terms.push(PolarizedTerm::unchecked(
                s.coeff * t.coeff,
                g.add(&s.numerator, &t.numerator),
                dens,
                xi,
            ));
        }
    }
    Ok(simplify(&GenChar::from_parts(g, terms, a.finite.mul(&b.finite))))
}

/// `[∧•V]^{-1}_β`: the inverse of `∏(1 − x^α)` expanded in the chamber of
/// `β`. A weight with `⟨ᾱ, β⟩ < 0` is flipped via
/// `1/(1 − x^α) = −x^{−α}/(1 − x^{−α})`, so the numerator is
/// `−Σ_{V^{−,β}} α` and the sign `(−1)^{|V^{−,β}|}`.
pub fn polarized_inverse(v: &GModule, beta: &PolarizingVector) -> Result<GenChar> {
    let g = v.group();
    if beta.dim() != g.free_rank() {
        return Err(Error::DimensionMismatch {
            expected: g.free_rank(),
            found: beta.dim(),
        });
    }
    let mut coeff = 1;
    let mut numerator = g.zero();
    let mut dens = Vec::with_capacity(v.weights().len());
    for w in v.weights() {
        let p = w.pair(beta);
        if p.is_zero() {
            return Err(Error::NotPolarizable(w.clone()));
        }
        if p.is_positive() {
            dens.push(w.clone());
        } else {
            coeff = -coeff;
            numerator = g.sub(&numerator, w);
            dens.push(g.neg(w));
        }
    }
    Ok(GenChar::from_term(
        g,
        PolarizedTerm::unchecked(coeff, numerator, dens, beta.clone()),
    ))
}

/// Index of the pushed Thom class: `[∧•V̄]^{-1}_β` on the moving part; trivial
/// summands contribute a factor 1.
pub fn index_thom(v: &GModule, beta: &PolarizingVector) -> Result<GenChar> {
    polarized_inverse(&v.moving().conjugate(), beta)
}

/// `Index(Thom_{−β}) − Index(Thom_β)`.
pub fn sigma_dbar_index(v: &GModule, beta: &PolarizingVector) -> Result<GenChar> {
    Ok(index_thom(v, &beta.negated())?.sub(&index_thom(v, beta)?))
}
