//! `Ĝ_χ = Ĝ/⟨χ⟩` through a Smith reduction of the relation matrix.

use num_rational::Rational64;
use num_traits::Zero;

use super::intmat::{self, IntMatrix};
use super::{CharacterGroup, PolarizingVector, Weight};
use crate::error::{Error, Result};

/// Projection `π: Ĝ → Ĝ_χ` together with a set-theoretic section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: CharacterGroup,
    target: CharacterGroup,
    chi: Weight,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Smith invariants of the relation columns, one per row of `u` below
    /// `m + 1`.
    diagonal: Vec<i128>,
}

/// Builds `Ĝ_χ`. Relations are the columns `dᵢ e_{n+i}` and the lift of `χ`
/// in `ℤ^{n+m}`; rows `0..=m` of `u·g` hold the cyclic coordinates and the
/// remaining `n − 1` rows the free part of the quotient.
pub fn quotient_by_character(group: &CharacterGroup, chi: &Weight) -> Result<QuotientMap> {
    group.check_weight(chi)?;
    if chi.has_zero_differential() {
        return Err(Error::ZeroDifferential(chi.clone()));
    }
    let n = group.free_rank();
    let m = group.torsion_orders().len();
    let dim = n + m;
    let mut rc: IntMatrix = vec![vec![0; m + 1]; dim];
    for (i, &d) in group.torsion_orders().iter().enumerate() {
        rc[n + i][i] = d as i128;
    }
    for (i, &x) in chi.free().iter().enumerate() {
        rc[i][m] = x as i128;
    }
    for (i, &x) in chi.torsion().iter().enumerate() {
        rc[n + i][m] = x as i128;
    }
    let s = intmat::smith(&rc, m + 1);
    debug_assert_eq!(s.rank, m + 1);
    let diagonal = s.diagonal.clone();
    let torsion: Vec<i64> = diagonal
        .iter()
        .filter(|&&d| d >= 2)
        .map(|&d| d as i64)
        .collect();
    let target = CharacterGroup::new(n - 1, torsion)?;
    Ok(QuotientMap {
        source: group.clone(),
        target,
        chi: chi.clone(),
        u: s.u,
        u_inv: s.u_inv,
        diagonal,
    })
}

impl QuotientMap {
    pub fn source(&self) -> &CharacterGroup {
        &self.source
    }

    pub fn target(&self) -> &CharacterGroup {
        &self.target
    }

    pub fn chi(&self) -> &Weight {
        &self.chi
    }

    fn embed(&self, w: &Weight) -> Vec<i128> {
        w.free()
            .iter()
            .chain(w.torsion())
            .map(|&x| x as i128)
            .collect()
    }

    pub fn project(&self, w: &Weight) -> Weight {
        let g = intmat::mat_vec(&self.u, &self.embed(w));
        let k = self.diagonal.len();
        let mut torsion = Vec::new();
        for (j, &d) in self.diagonal.iter().enumerate() {
            if d >= 2 {
                torsion.push(g[j].rem_euclid(d) as i64);
            }
        }
        let free = g[k..].iter().map(|&x| x as i64).collect();
        Weight { free, torsion }
    }

    pub fn section(&self, c: &Weight) -> Weight {
        let k = self.diagonal.len();
        let mut v: Vec<i128> = vec![0; self.u.len()];
        let mut t = c.torsion().iter();
        for (j, &d) in self.diagonal.iter().enumerate() {
            if d >= 2 {
                v[j] = *t.next().expect("torsion arity") as i128;
            }
        }
        for (j, &x) in c.free().iter().enumerate() {
            v[k + j] = x as i128;
        }
        let g = intmat::mat_vec(&self.u_inv, &v);
        let n = self.source.free_rank();
        self.source.reduce(
            g[..n].iter().map(|&x| x as i64).collect(),
            g[n..].iter().map(|&x| x as i64).collect(),
        )
    }

    /// A vector `ξ ∈ 𝔤` with `⟨s(α), ξ⟩ = ⟨α, ξ'⟩` for every `α ∈ Ĝ_χ` and
    /// `⟨χ, ξ⟩ = 0`.
    pub fn lift_witness(&self, xi: &PolarizingVector) -> PolarizingVector {
        let n = self.source.free_rank();
        let k = self.diagonal.len();
        let mut out = vec![Rational64::zero(); n];
        for (j, c) in xi.coords().iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o += c * Rational64::from_integer(self.u[k + j][i] as i64);
            }
        }
        PolarizingVector::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_by_generator_is_trivial() {
        let g = CharacterGroup::torus(1);
        let q = quotient_by_character(&g, &g.free_weight(&[1])).unwrap();
        assert_eq!(q.target().free_rank(), 0);
        assert!(q.target().torsion_orders().is_empty());
    }

    #[test]
    fn rank_two_examples() {
        let g = CharacterGroup::torus(2);
        let q = quotient_by_character(&g, &g.free_weight(&[1, 0])).unwrap();
        assert_eq!(q.target().free_rank(), 1);
        assert!(q.target().torsion_orders().is_empty());
        let q = quotient_by_character(&g, &g.free_weight(&[2, 0])).unwrap();
        assert_eq!(q.target().free_rank(), 1);
        assert_eq!(q.target().torsion_orders(), &[2]);
    }

    #[test]
    fn projection_is_consistent() {
        let g = CharacterGroup::new(2, vec![4]).unwrap();
        let chi = g.weight(vec![2, -3], vec![2]).unwrap();
        let q = quotient_by_character(&g, &chi).unwrap();
        assert!(q.project(&chi).is_zero());
        for a in -3..=3 {
            for b in -3..=3 {
                for t in 0..4 {
                    let w = g.weight(vec![a, b], vec![t]).unwrap();
                    let p = q.project(&w);
                    assert_eq!(q.project(&q.section(&p)), p);
                    assert_eq!(q.project(&g.add(&w, &chi)), p);
                    let xi = PolarizingVector::from_ints(&vec![1; q.target().free_rank()]);
                    let lifted = q.lift_witness(&xi);
                    assert_eq!(q.section(&p).pair(&lifted), p.pair(&xi));
                }
            }
        }
        assert_eq!(q.lift_witness(&PolarizingVector::from_ints(&[1])).coords().len(), 2);
        assert!(chi.pair(&q.lift_witness(&PolarizingVector::from_ints(&[1]))).is_zero());
    }

    #[test]
    fn zero_differential_rejected() {
        let g = CharacterGroup::new(1, vec![2]).unwrap();
        let chi = g.weight(vec![0], vec![1]).unwrap();
        assert!(matches!(
            quotient_by_character(&g, &chi),
            Err(Error::ZeroDifferential(_))
        ));
    }
}
