//! `R^{-∞}(G)` as finite sums of polarized geometric series plus a finite
//! part.
//!
//! A term `c · x^λ · ∏ᵢ 1/(1 − x^{αᵢ})` always denotes the expansion in
//! nonnegative powers of the `αᵢ`; its witness `ξ` certifies that the
//! expansion has finite coefficients.

mod counting;
mod induction;
mod ops;
mod simplify;
pub mod witness;

use std::fmt;

use crate::charring::FiniteCharacter;
use crate::error::{Error, Result};
use crate::lattice::{CharacterGroup, PolarizingVector, Weight};

pub use counting::{count_partitions, DP_CELL_LIMIT};
pub use induction::{induction, invert_induction};
pub use ops::{index_thom, mul_finite, mul_genchar, polarized_inverse, sigma_dbar_index};
pub use simplify::{is_zero, projected_support_finite, simplify, SupportVerdict, ZeroVerdict};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolarizedTerm {
    coeff: i64,
    numerator: Weight,
    denominators: Vec<Weight>,
    witness: PolarizingVector,
}

impl fmt::Debug for PolarizedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x^{}/∏(1-x^{:?}) [ξ={:?}]", self.coeff, self.numerator, self.denominators, self.witness)
    }
}

impl PolarizedTerm {
    /// Validates the witness against every denominator.
    pub fn new(coeff: i64, numerator: Weight, denominators: Vec<Weight>, witness: PolarizingVector) -> Result<Self> {
        for d in &denominators {
            if d.has_zero_differential() {
                return Err(Error::ZeroDifferential(d.clone()));
            }
            if d.free().len() != witness.dim() {
                return Err(Error::DimensionMismatch {
                    expected: d.free().len(),
                    found: witness.dim(),
                });
            }
            if !witness::is_witness(std::slice::from_ref(d), &witness) {
                return Err(Error::NotPolarizable(d.clone()));
            }
        }
        let mut denominators = denominators;
        denominators.sort();
        Ok(PolarizedTerm {
            coeff,
            numerator,
            denominators,
            witness,
        })
    }

    pub(crate) fn unchecked(coeff: i64, numerator: Weight, mut denominators: Vec<Weight>, witness: PolarizingVector) -> Self {
        denominators.sort();
        debug_assert!(witness::is_witness(&denominators, &witness));
        PolarizedTerm {
            coeff,
            numerator,
            denominators,
            witness,
        }
    }

    pub fn coeff(&self) -> i64 {
        self.coeff
    }

    pub fn numerator(&self) -> &Weight {
        &self.numerator
    }

    pub fn denominators(&self) -> &[Weight] {
        &self.denominators
    }

    pub fn witness(&self) -> &PolarizingVector {
        &self.witness
    }
}

/// An element of `R^{-∞}(G)`; the representation is not canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct GenChar {
    group: CharacterGroup,
    terms: Vec<PolarizedTerm>,
    finite: FiniteCharacter,
}

impl fmt::Debug for GenChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenChar")
            .field("terms", &self.terms)
            .field("finite", &self.finite)
            .finish()
    }
}

impl GenChar {
    pub fn zero(group: &CharacterGroup) -> Self {
        GenChar {
            group: group.clone(),
            terms: Vec::new(),
            finite: FiniteCharacter::zero(group),
        }
    }

    pub fn from_finite(finite: FiniteCharacter) -> Self {
        GenChar {
            group: finite.group().clone(),
            terms: Vec::new(),
            finite,
        }
    }

    pub fn from_parts(group: &CharacterGroup, terms: Vec<PolarizedTerm>, finite: FiniteCharacter) -> Self {
        GenChar {
            group: group.clone(),
            terms: terms.into_iter().filter(|t| t.coeff != 0).collect(),
            finite,
        }
    }

    /// A single series term; empty denominators go to the finite part.
    pub fn from_term(group: &CharacterGroup, term: PolarizedTerm) -> Self {
        let mut out = GenChar::zero(group);
        out.push_term(term);
        out
    }

    /// `S•(V)`-style series `x^λ ∏ 1/(1 − x^{αᵢ})` with a found witness.
    pub fn series(group: &CharacterGroup, numerator: Weight, denominators: Vec<Weight>) -> Result<Self> {
        let xi = witness::find_witness(group.free_rank(), &denominators, &[])
            .ok_or_else(|| Error::NotSummable(format!("denominators {denominators:?} are not pointed")))?;
        let term = PolarizedTerm::new(1, numerator, denominators, xi)?;
        Ok(GenChar::from_term(group, term))
    }

    pub(crate) fn push_term(&mut self, term: PolarizedTerm) {
        if term.coeff == 0 {
            return;
        }
        if term.denominators.is_empty() {
            self.finite.add_term(term.numerator, term.coeff);
        } else {
            self.terms.push(term);
        }
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn terms(&self) -> &[PolarizedTerm] {
        &self.terms
    }

    pub fn finite_part(&self) -> &FiniteCharacter {
        &self.finite
    }

    /// True when the representation has no terms (the element may still be
    /// a nonzero finite character).
    pub fn is_finite(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &GenChar) -> GenChar {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GenChar {
            group: self.group.clone(),
            terms,
            finite: self.finite.add(&other.finite),
        }
    }

    pub fn neg(&self) -> GenChar {
        self.scalar_mul(-1)
    }

    pub fn sub(&self, other: &GenChar) -> GenChar {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, k: i64) -> GenChar {
        if k == 0 {
            return GenChar::zero(&self.group);
        }
        GenChar {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| PolarizedTerm {
                    coeff: t.coeff * k,
                    ..t.clone()
                })
                .collect(),
            finite: self.finite.scale(k),
        }
    }

    pub fn coefficient_at(&self, mu: &Weight) -> i64 {
        counting::coefficient_at(self, mu)
    }

    pub fn truncate(&self, w: &Window) -> FiniteCharacter {
        counting::truncate(self, w)
    }
}

/// Inclusive box on the free part of `Ĝ`; every torsion value is included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lower: Vec<i64>,
    upper: Vec<i64>,
}

impl Window {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidWeight("window lower bound exceeds upper bound".into()));
        }
        Ok(Window { lower, upper })
    }

    /// `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        Window {
            lower: vec![lo; n],
            upper: vec![hi; n],
        }
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains_free(&self, v: &[i64]) -> bool {
        v.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (l, u))| l <= x && x <= u)
    }

    /// Number of free-part points.
    pub fn free_size(&self) -> u128 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l + 1) as u128)
            .product()
    }

    /// Every weight in the window, free part lexicographic, then torsion.
    pub fn points(&self, group: &CharacterGroup) -> Vec<Weight> {
        let mut frees: Vec<Vec<i64>> = vec![Vec::new()];
        for (l, u) in self.lower.iter().zip(&self.upper) {
            frees = frees
                .into_iter()
                .flat_map(|p| {
                    (*l..=*u).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let tors = group.torsion_elements();
        let mut out = Vec::with_capacity(frees.len() * tors.len());
        for f in &frees {
            for t in &tors {
                out.push(group.reduce(f.clone(), t.clone()));
            }
        }
        out
    }

    /// The box grown by `r` on every side.
    pub fn enlarged(&self, r: i64) -> Self {
        Window {
            lower: self.lower.iter().map(|x| x - r).collect(),
            upper: self.upper.iter().map(|x| x + r).collect(),
        }
    }

    /// Parses `lo..hi[,lo..hi…]`; a single range is used for every axis.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = |m: String| Error::Schema {
            location: "window".into(),
            message: m,
        };
        let mut ranges = Vec::new();
        for part in s.split(',') {
            let (lo, hi) = part
                .trim()
                .split_once("..")
                .ok_or_else(|| bad(format!("expected lo..hi, got {part:?}")))?;
            let lo: i64 = lo.trim().parse().map_err(|_| bad(format!("bad bound {lo:?}")))?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad(format!("bad bound {hi:?}")))?;
            ranges.push((lo, hi));
        }
        if ranges.len() == 1 && n != 1 {
            ranges = vec![ranges[0]; n];
        }
        if ranges.len() != n {
            return Err(bad(format!("{} ranges for a rank {n} group", ranges.len())));
        }
        Window::new(ranges.iter().map(|r| r.0).collect(), ranges.iter().map(|r| r.1).collect())
            .map_err(|e| bad(e.to_string()))
    }

    pub fn render(&self) -> String {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| format!("{l}..{u}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}
