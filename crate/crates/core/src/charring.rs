//! `R(G) = ℤ[Ĝ]`: finite characters with exact integer coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{CharacterGroup, GModule, Subspace, Weight};

/// A finite `ℤ`-combination of characters. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteCharacter {
    group: CharacterGroup,
    coeffs: BTreeMap<Weight, i64>,
}

impl fmt::Debug for FiniteCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_text())
    }
}

impl FiniteCharacter {
    pub fn zero(group: &CharacterGroup) -> Self {
        FiniteCharacter {
            group: group.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(group: &CharacterGroup) -> Self {
        Self::monomial(group, group.zero(), 1)
    }

    pub fn monomial(group: &CharacterGroup, w: Weight, c: i64) -> Self {
        let mut out = Self::zero(group);
        out.add_term(w, c);
        out
    }

    pub fn from_terms(group: &CharacterGroup, terms: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut out = Self::zero(group);
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    /// `1 − x^α`.
    pub fn one_minus(group: &CharacterGroup, alpha: &Weight) -> Self {
        let mut out = Self::one(group);
        out.add_term(alpha.clone(), -1);
        out
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn coeff(&self, w: &Weight) -> i64 {
        self.coeffs.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.coeffs.iter().map(|(w, &c)| (w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.coeffs.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(&self.group);
        }
        FiniteCharacter {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|(w, &c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Multiplication by the monomial `x^w`.
    pub fn shift(&self, w: &Weight) -> Self {
        FiniteCharacter {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, &c)| (self.group.add(v, w), c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (a, &ca) in &self.coeffs {
            for (b, &cb) in &other.coeffs {
                *acc.entry(self.group.add(a, b)).or_insert(0) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != 0);
        FiniteCharacter {
            group: self.group.clone(),
            coeffs: acc,
        }
    }

    /// The involution `x^λ ↦ x^{−λ}`.
    pub fn conjugate(&self) -> Self {
        FiniteCharacter {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, &c)| (self.group.neg(w), c))
                .collect(),
        }
    }

    /// Exact quotient by `1 − x^α`, if it exists in `ℤ[Ĝ]`.
    ///
    /// Along each coset `λ₀ + ℤα` the quotient is the running sum of the
    /// coefficients; it is finite iff every coset sums to zero.
    pub fn div_one_minus(&self, alpha: &Weight) -> Option<Self> {
        assert!(!alpha.has_zero_differential(), "division by 1 - x^α needs α̅ ≠ 0");
        let i0 = alpha.free().iter().position(|&x| x != 0)?;
        let a = alpha.free()[i0];
        let step = |lam: &Weight| -> (Weight, i64) {
            let r = lam.free()[i0].rem_euclid(a.abs());
            let k = (lam.free()[i0] - r) / a;
            (self.group.sub(lam, &self.group.scale(alpha, k)), k)
        };
        let mut cosets: BTreeMap<Weight, BTreeMap<i64, i64>> = BTreeMap::new();
        for (w, &c) in &self.coeffs {
            let (rep, k) = step(w);
            *cosets.entry(rep).or_default().entry(k).or_insert(0) += c;
        }
        let mut out = Self::zero(&self.group);
        for (rep, line) in cosets {
            let total: i64 = line.values().sum();
            if total != 0 {
                return None;
            }
            let lo = *line.keys().next().expect("nonempty coset");
            let hi = *line.keys().next_back().expect("nonempty coset");
            let mut running = 0;
            for k in lo..hi {
                running += line.get(&k).copied().unwrap_or(0);
                if running != 0 {
                    out.add_term(self.group.add(&rep, &self.group.scale(alpha, k)), running);
                }
            }
        }
        Some(out)
    }

    /// `a = Σ_μ a_μ` with `a_μ` supported on `π_H^{-1}(μ)` for `H = exp 𝔥`.
    pub fn restrict_and_grade(&self, h: &Subspace) -> BTreeMap<Vec<i64>, FiniteCharacter> {
        let mut out: BTreeMap<Vec<i64>, FiniteCharacter> = BTreeMap::new();
        for (w, &c) in &self.coeffs {
            out.entry(h.restrict_weight(w))
                .or_insert_with(|| Self::zero(&self.group))
                .add_term(w.clone(), c);
        }
        out
    }

    /// `∏_{α ∈ V} (1 − x^α)`.
    pub fn wedge(v: &GModule) -> Self {
        let g = v.group();
        v.weights()
            .iter()
            .fold(Self::one(g), |acc, w| acc.mul(&Self::one_minus(g, w)))
    }

    /// `∏_{α ∈ V} (1 − x^{−α})`, the alternating sum of `∧^i V̄`.
    pub fn wedge_conj(v: &GModule) -> Self {
        Self::wedge(&v.conjugate())
    }

    /// `det` of a list of weights, as the monomial `x^{Σα}`.
    pub fn det(group: &CharacterGroup, weights: &[Weight]) -> Self {
        let sum = weights.iter().fold(group.zero(), |acc, w| group.add(&acc, w));
        Self::monomial(group, sum, 1)
    }

    /// Terms in graded-lexicographic order: total degree of the free part,
    /// then the free part, then torsion.
    pub fn graded_terms(&self) -> Vec<(&Weight, i64)> {
        let mut terms: Vec<(&Weight, i64)> = self.iter().collect();
        terms.sort_by_key(|(w, _)| (w.free().iter().sum::<i64>(), *w));
        terms
    }

    /// `c * x^[a1,...,an; t1,...]` terms joined by ` + `.
    pub fn render_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.graded_terms()
            .iter()
            .map(|(w, c)| format!("{c} * x^{w}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Human-oriented rendering: `t`-powers over a circle, `x^(..)` otherwise.
    pub fn render_pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let circle = self.group.free_rank() == 1 && self.group.torsion_orders().is_empty();
        let mut out = String::new();
        for (i, (w, c)) in self.graded_terms().into_iter().enumerate() {
            let mono = if w.is_zero() {
                String::new()
            } else if circle {
                let k = w.free()[0];
                if k == 1 {
                    "t".into()
                } else {
                    format!("t{}", superscript(k))
                }
            } else {
                format!("x^{w}")
            };
            let mag = c.unsigned_abs();
            let body = match (mono.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => mono,
                (false, _) => format!("{mag}{mono}"),
            };
            let sign = if c < 0 { "−" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }
}

fn superscript(k: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if k < 0 {
        s.push('⁻');
    }
    for ch in k.unsigned_abs().to_string().chars() {
        s.push(DIGITS[ch.to_digit(10).unwrap() as usize]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: &CharacterGroup, k: i64) -> Weight {
        g.free_weight(&[k])
    }

    fn poly(g: &CharacterGroup, cs: &[(i64, i64)]) -> FiniteCharacter {
        FiniteCharacter::from_terms(g, cs.iter().map(|&(k, c)| (t(g, k), c)))
    }

    #[test]
    fn telescoping_product() {
        let g = CharacterGroup::torus(1);
        let a = poly(&g, &[(0, 1), (1, -1)]);
        let b = poly(&g, &[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(a.mul(&b), poly(&g, &[(0, 1), (3, -1)]));
        assert_eq!(FiniteCharacter::one(&g).mul(&b), b);
    }

    #[test]
    fn two_variable_expansion() {
        let g = CharacterGroup::torus(2);
        let a = FiniteCharacter::one_minus(&g, &g.free_weight(&[1, 0]));
        let b = FiniteCharacter::one_minus(&g, &g.free_weight(&[0, 1]));
        let expect = FiniteCharacter::from_terms(
            &g,
            [
                (g.free_weight(&[0, 0]), 1),
                (g.free_weight(&[1, 0]), -1),
                (g.free_weight(&[0, 1]), -1),
                (g.free_weight(&[1, 1]), 1),
            ],
        );
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn wedge_examples() {
        let g = CharacterGroup::torus(1);
        let v = GModule::from_free(&g, &[&[1]]).unwrap();
        assert_eq!(FiniteCharacter::wedge_conj(&v), poly(&g, &[(0, 1), (-1, -1)]));
        assert_eq!(FiniteCharacter::wedge_conj(&GModule::empty(&g)), FiniteCharacter::one(&g));
        let g2 = CharacterGroup::torus(2);
        let hex = GModule::from_free(&g2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let w = FiniteCharacter::wedge_conj(&hex);
        // 8 products; the two x^(-1,-1) monomials cancel
        assert_eq!(w.len(), 6);
        assert_eq!(w.coeff(&g2.free_weight(&[-1, -1])), 0);
        assert_eq!(w.coeff(&g2.free_weight(&[-2, -2])), -1);
    }

    #[test]
    fn division_by_one_minus() {
        let g = CharacterGroup::torus(1);
        let p = poly(&g, &[(0, 1), (3, -1)]);
        let q = p.div_one_minus(&t(&g, 1)).unwrap();
        assert_eq!(q, poly(&g, &[(0, 1), (1, 1), (2, 1)]));
        assert!(poly(&g, &[(0, 1)]).div_one_minus(&t(&g, 1)).is_none());
        // 1 - t^{-1} = -t^{-1}(1 - t)
        let p = poly(&g, &[(0, 1), (-1, -1)]);
        assert_eq!(p.div_one_minus(&t(&g, 1)).unwrap(), poly(&g, &[(-1, -1)]));
        assert_eq!(p.div_one_minus(&t(&g, -1)).unwrap(), FiniteCharacter::one(&g));
    }

    #[test]
    fn division_with_torsion() {
        let g = CharacterGroup::new(1, vec![2]).unwrap();
        let alpha = g.weight(vec![1], vec![1]).unwrap();
        let p = FiniteCharacter::one_minus(&g, &g.scale(&alpha, 2));
        let q = p.div_one_minus(&alpha).unwrap();
        assert_eq!(q.mul(&FiniteCharacter::one_minus(&g, &alpha)), p);
        assert_eq!(q.coeff(&alpha), 1);
    }

    #[test]
    fn grading_examples() {
        let g = CharacterGroup::torus(1);
        let a = poly(&g, &[(0, 1), (1, -1)]);
        let graded = a.restrict_and_grade(&Subspace::full(1));
        assert_eq!(graded.len(), 2);
        assert_eq!(graded[&vec![1]], poly(&g, &[(1, -1)]));

        let g2 = CharacterGroup::torus(2);
        let h = Subspace::from_perp_span(2, &[vec![1, 0]]);
        let a = FiniteCharacter::one_minus(&g2, &g2.free_weight(&[3, 0]));
        let graded = a.restrict_and_grade(&h);
        assert_eq!(graded.len(), 1);
        assert_eq!(graded[&vec![0]], a);
        assert!(FiniteCharacter::zero(&g2).restrict_and_grade(&h).is_empty());
    }

    #[test]
    fn rendering() {
        let g = CharacterGroup::torus(1);
        let a = poly(&g, &[(1, -1), (2, -1), (3, -1)]);
        assert_eq!(a.render_pretty(), "−t −t² −t³");
        assert_eq!(poly(&g, &[(0, 1), (1, 1), (2, 1)]).render_pretty(), "1 +t +t²");
        assert_eq!(a.render_text(), "-1 * x^[1] + -1 * x^[2] + -1 * x^[3]");
        let g = CharacterGroup::new(1, vec![2]).unwrap();
        let m = FiniteCharacter::monomial(&g, g.weight(vec![-1], vec![1]).unwrap(), 2);
        assert_eq!(m.render_text(), "2 * x^[-1; 1]");
    }
}
