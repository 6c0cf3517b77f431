//! Character lattices of compact abelian groups `G = Tⁿ × ∏ ℤ/dᵢ`, their
//! complex modules, rational subspaces of the Lie algebra and the
//! stabilizer lattice `Δ_G(V)`.

pub mod flags;
pub mod intmat;
pub mod quotient;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use flags::{choose_gamma, enumerate_flags, validate_flag, Flag};
pub use quotient::{quotient_by_character, QuotientMap};

/// The character group `Ĝ = ℤⁿ ⊕ ⊕ᵢ ℤ/dᵢ`.
///
/// Cheap to clone; values built on top of a group carry a copy of it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharacterGroup {
    free_rank: usize,
    torsion: Arc<[i64]>,
}

impl fmt::Debug for CharacterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for d in self.torsion.iter() {
            write!(f, " + Z/{d}")?;
        }
        Ok(())
    }
}

impl CharacterGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {d} < 2")));
        }
        Ok(CharacterGroup {
            free_rank,
            torsion: torsion.into(),
        })
    }

    /// Character group of the torus `Tⁿ`.
    pub fn torus(free_rank: usize) -> Self {
        CharacterGroup {
            free_rank,
            torsion: Arc::from(Vec::new()),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of elements of the torsion subgroup.
    pub fn torsion_size(&self) -> usize {
        self.torsion.iter().map(|&d| d as usize).product()
    }

    /// Validating constructor: torsion entries must already lie in `[0, dᵢ)`.
    pub fn weight(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<Weight> {
        if free.len() != self.free_rank {
            return Err(Error::DimensionMismatch {
                expected: self.free_rank,
                found: free.len(),
            });
        }
        if torsion.len() != self.torsion.len() {
            return Err(Error::DimensionMismatch {
                expected: self.torsion.len(),
                found: torsion.len(),
            });
        }
        for (t, d) in torsion.iter().zip(self.torsion.iter()) {
            if *t < 0 || t >= d {
                return Err(Error::InvalidWeight(format!(
                    "torsion entry {t} outside [0, {d})"
                )));
            }
        }
        Ok(Weight { free, torsion })
    }

    /// Weight with free part `free` and trivial torsion part.
    pub fn free_weight(&self, free: &[i64]) -> Weight {
        assert_eq!(free.len(), self.free_rank, "free part length");
        Weight {
            free: free.to_vec(),
            torsion: vec![0; self.torsion.len()],
        }
    }

    /// Builds a weight, reducing torsion entries.
    pub fn reduce(&self, free: Vec<i64>, torsion: Vec<i64>) -> Weight {
        let torsion = torsion
            .iter()
            .zip(self.torsion.iter())
            .map(|(t, d)| t.rem_euclid(*d))
            .collect();
        Weight { free, torsion }
    }

    pub fn zero(&self) -> Weight {
        Weight {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion.len()],
        }
    }

    pub fn add(&self, a: &Weight, b: &Weight) -> Weight {
        Weight {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(self.torsion.iter())
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn sub(&self, a: &Weight, b: &Weight) -> Weight {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Weight) -> Weight {
        Weight {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(self.torsion.iter())
                .map(|(x, d)| (d - x) % d)
                .collect(),
        }
    }

    pub fn scale(&self, a: &Weight, k: i64) -> Weight {
        Weight {
            free: a.free.iter().map(|x| k * x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(self.torsion.iter())
                .map(|(x, d)| (k * x).rem_euclid(*d))
                .collect(),
        }
    }

    /// All elements of the torsion subgroup, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in self.torsion.iter() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |t| {
                        let mut p = prefix.clone();
                        p.push(t);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        self.weight(w.free.clone(), w.torsion.clone()).map(|_| ())
    }
}

/// An element of `Ĝ`: free coordinates plus torsion residues.
///
/// The differential is the free part viewed in `ℚⁿ ≅ 𝔤*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    free: Vec<i64>,
    torsion: Vec<i64>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        if !self.torsion.is_empty() {
            write!(f, "; ")?;
            for (i, x) in self.torsion.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

impl Weight {
    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn has_zero_differential(&self) -> bool {
        self.free.iter().all(|&x| x == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.has_zero_differential() && self.torsion.iter().all(|&x| x == 0)
    }

    /// Exact pairing `⟨ᾱ, β⟩`.
    pub fn pair(&self, beta: &PolarizingVector) -> Rational64 {
        self.free
            .iter()
            .zip(beta.coords())
            .fold(Rational64::zero(), |acc, (a, b)| acc + b * *a)
    }

    pub fn pair_int(&self, xi: &[i64]) -> i64 {
        self.free.iter().zip(xi).map(|(a, b)| a * b).sum()
    }
}

/// A vector `β ∈ 𝔤 ≅ ℚⁿ`, used to polarize modules and as a pointedness
/// witness for geometric series.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizingVector {
    coords: Vec<Rational64>,
}

impl fmt::Debug for PolarizingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl PolarizingVector {
    pub fn new(coords: Vec<Rational64>) -> Self {
        PolarizingVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        PolarizingVector {
            coords: coords.iter().map(|&c| Rational64::from_integer(c)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        PolarizingVector {
            coords: vec![Rational64::zero(); n],
        }
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn negated(&self) -> Self {
        PolarizingVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// The primitive integer vector on the same open ray.
    pub fn integer_direction(&self) -> Vec<i64> {
        let lcm = self
            .coords
            .iter()
            .fold(1i64, |acc, c| num_integer::lcm(acc, *c.denom()));
        let ints: Vec<i64> = self
            .coords
            .iter()
            .map(|c| (c * Rational64::from_integer(lcm)).to_integer())
            .collect();
        let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        if g == 0 {
            ints
        } else {
            ints.iter().map(|x| x / g).collect()
        }
    }

    /// Parses `"p/q"` or `"p"`.
    pub fn parse_coord(s: &str) -> Option<Rational64> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q: i64 = q.trim().parse().ok()?;
                (q != 0).then(|| Rational64::new(p, q))
            }
            None => s.parse::<i64>().ok().map(Rational64::from_integer),
        }
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

/// A complex `G`-module given by its weights (with multiplicity) plus the
/// real dimension of an additional trivial part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GModule {
    group: CharacterGroup,
    weights: Vec<Weight>,
    trivial_real_dim: usize,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule{:?}", self.weights)?;
        if self.trivial_real_dim > 0 {
            write!(f, " + R^{}", self.trivial_real_dim)?;
        }
        Ok(())
    }
}

impl GModule {
    /// Validates every weight against the group. Weights with zero
    /// differential but nontrivial torsion are rejected.
    pub fn new(group: &CharacterGroup, weights: Vec<Weight>, trivial_real_dim: usize) -> Result<Self> {
        for w in &weights {
            group.check_weight(w)?;
            if w.has_zero_differential() && !w.is_zero() {
                return Err(Error::InvalidWeight(format!(
                    "weight {w} has zero differential but nontrivial torsion"
                )));
            }
        }
        let mut weights = weights;
        weights.sort();
        Ok(GModule {
            group: group.clone(),
            weights,
            trivial_real_dim,
        })
    }

    /// Module over `Tⁿ` from free-part vectors.
    pub fn from_free(group: &CharacterGroup, vectors: &[&[i64]]) -> Result<Self> {
        let weights = vectors
            .iter()
            .map(|v| group.weight(v.to_vec(), vec![0; group.torsion_orders().len()]))
            .collect::<Result<Vec<_>>>()?;
        GModule::new(group, weights, 0)
    }

    pub fn empty(group: &CharacterGroup) -> Self {
        GModule {
            group: group.clone(),
            weights: Vec::new(),
            trivial_real_dim: 0,
        }
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    /// All weights, sorted, with multiplicity.
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn trivial_real_dim(&self) -> usize {
        self.trivial_real_dim
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights with nonzero differential (the part `V/V^𝔤`).
    pub fn moving(&self) -> GModule {
        GModule {
            group: self.group.clone(),
            weights: self
                .weights
                .iter()
                .filter(|w| !w.has_zero_differential())
                .cloned()
                .collect(),
            trivial_real_dim: 0,
        }
    }

    pub fn conjugate(&self) -> GModule {
        let mut weights: Vec<Weight> = self.weights.iter().map(|w| self.group.neg(w)).collect();
        weights.sort();
        GModule {
            group: self.group.clone(),
            weights,
            trivial_real_dim: self.trivial_real_dim,
        }
    }

    pub fn direct_sum(&self, other: &GModule) -> GModule {
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        weights.sort();
        GModule {
            group: self.group.clone(),
            weights,
            trivial_real_dim: self.trivial_real_dim + other.trivial_real_dim,
        }
    }

    /// Multiset difference `self ∖ sub`, or `None` if `sub ⊄ self`.
    pub fn difference(&self, sub: &GModule) -> Option<GModule> {
        let mut remaining = self.weights.clone();
        for w in &sub.weights {
            let pos = remaining.iter().position(|x| x == w)?;
            remaining.remove(pos);
        }
        Some(GModule {
            group: self.group.clone(),
            weights: remaining,
            trivial_real_dim: self.trivial_real_dim.saturating_sub(sub.trivial_real_dim),
        })
    }

    pub fn with_weights(&self, weights: Vec<Weight>) -> GModule {
        let mut weights = weights;
        weights.sort();
        GModule {
            group: self.group.clone(),
            weights,
            trivial_real_dim: 0,
        }
    }

    /// Weights of `V^𝔥` and of `V/V^𝔥`.
    pub fn split_by(&self, h: &Subspace) -> (GModule, GModule) {
        let (fixed, moving): (Vec<Weight>, Vec<Weight>) = self
            .weights
            .iter()
            .cloned()
            .partition(|w| h.annihilates(w));
        (
            GModule {
                group: self.group.clone(),
                weights: fixed,
                trivial_real_dim: self.trivial_real_dim,
            },
            GModule {
                group: self.group.clone(),
                weights: moving,
                trivial_real_dim: 0,
            },
        )
    }
}

/// A rational subspace `𝔥 ⊆ 𝔤`, stored through its annihilator lattice
/// `L = 𝔥^⊥ ∩ ℤⁿ` (saturated, Hermite normal form). `algebra` is a Hermite
/// basis of `𝔥 ∩ ℤⁿ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    lattice: Vec<Vec<i64>>,
    algebra: Vec<Vec<i64>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(perp={:?}, dim={})", self.lattice, self.dim())
    }
}

fn to_i64_rows(m: &[Vec<i128>]) -> Vec<Vec<i64>> {
    m.iter()
        .map(|r| r.iter().map(|&x| i64::try_from(x).expect("lattice entry overflow")).collect())
        .collect()
}

fn to_i128_rows(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

impl Subspace {
    /// `𝔥` whose annihilator is the saturation of the span of `perp`.
    pub fn from_perp_span(ambient: usize, perp: &[Vec<i64>]) -> Self {
        let rows = to_i128_rows(perp);
        let lattice = intmat::saturate(&rows, ambient);
        let algebra = intmat::integer_kernel(&lattice, ambient);
        Subspace {
            ambient,
            lattice: to_i64_rows(&lattice),
            algebra: to_i64_rows(&algebra),
        }
    }

    /// The whole Lie algebra `𝔤`.
    pub fn full(ambient: usize) -> Self {
        Subspace::from_perp_span(ambient, &[])
    }

    /// The zero subspace.
    pub fn zero(ambient: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..ambient)
            .map(|i| (0..ambient).map(|j| i64::from(i == j)).collect())
            .collect();
        Subspace::from_perp_span(ambient, &id)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.lattice.len()
    }

    /// Hermite basis of the annihilator lattice `L`.
    pub fn perp_basis(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    /// Hermite basis of `𝔥 ∩ ℤⁿ`.
    pub fn algebra_basis(&self) -> &[Vec<i64>] {
        &self.algebra
    }

    /// `ᾱ ∈ 𝔥^⊥`, i.e. `α` is fixed by `exp 𝔥` infinitesimally.
    pub fn annihilates(&self, w: &Weight) -> bool {
        self.algebra.iter().all(|h| w.pair_int(h) == 0)
    }

    pub fn contains_vector(&self, v: &PolarizingVector) -> bool {
        self.lattice
            .iter()
            .all(|l| l.iter().zip(v.coords()).fold(Rational64::zero(), |acc, (a, b)| acc + b * *a).is_zero())
    }

    /// `π_H(λ)` for `H = exp 𝔥`, in coordinates dual to the algebra basis.
    pub fn restrict_weight(&self, w: &Weight) -> Vec<i64> {
        self.algebra.iter().map(|h| w.pair_int(h)).collect()
    }

    /// `𝔥 + 𝔞`: annihilator `L_𝔥 ∩ L_𝔞`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = to_i128_rows(&self.algebra);
        rows.extend(to_i128_rows(&other.algebra));
        let lattice = intmat::integer_kernel(&rows, self.ambient);
        Subspace::from_perp_span(self.ambient, &to_i64_rows(&lattice))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        // 𝔥 ⊆ 𝔞 iff L_𝔞 ⊆ L_𝔥
        let mut rows = to_i128_rows(&self.lattice);
        let base = intmat::rank(&rows, self.ambient);
        rows.extend(to_i128_rows(&other.lattice));
        intmat::rank(&rows, self.ambient) == base
    }

    /// `𝔥 ∩ 𝔞`: annihilator is the saturated sum of the lattices.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut rows = self.lattice.clone();
        rows.extend(other.lattice.iter().cloned());
        Subspace::from_perp_span(self.ambient, &rows)
    }
}

/// `Δ_G(V)`: every subspace `𝔥` whose annihilator is spanned by weight
/// differentials. Sorted by decreasing dimension (so `𝔤` comes first), then
/// by annihilator basis.
pub fn delta_set(v: &GModule) -> Vec<Subspace> {
    let n = v.group().free_rank();
    let diffs: Vec<Vec<i64>> = v
        .weights()
        .iter()
        .filter(|w| !w.has_zero_differential())
        .map(|w| w.free().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut found: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut frontier: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    found.insert(Vec::new());
    while let Some(lat) = frontier.pop() {
        for d in &diffs {
            let mut rows = lat.clone();
            rows.push(d.clone());
            let sat = to_i64_rows(&intmat::saturate(&to_i128_rows(&rows), n));
            if found.insert(sat.clone()) {
                frontier.push(sat);
            }
        }
    }
    let mut out: Vec<Subspace> = found
        .into_iter()
        .map(|lat| Subspace::from_perp_span(n, &lat))
        .collect();
    out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.lattice.cmp(&b.lattice)));
    out
}

/// `V^𝔥`: the weights whose differential lies in `𝔥^⊥`; the trivial real
/// part is carried over.
pub fn fixed_submodule(v: &GModule, h: &Subspace) -> GModule {
    v.split_by(h).0
}

/// `V/V^𝔥` as a module (multiset difference).
pub fn quotient_module(v: &GModule, h: &Subspace) -> GModule {
    v.split_by(h).1
}

/// `𝔥_min`: the annihilator of the span of all weight differentials.
pub fn minimal_stabilizer(v: &GModule) -> Subspace {
    let n = v.group().free_rank();
    let diffs: Vec<Vec<i64>> = v
        .weights()
        .iter()
        .filter(|w| !w.has_zero_differential())
        .map(|w| w.free().to_vec())
        .collect();
    Subspace::from_perp_span(n, &diffs)
}

/// Sign of `⟨ᾱ, β⟩`.
pub fn pairing_sign(w: &Weight, beta: &PolarizingVector) -> i32 {
    let p = w.pair(beta);
    if p.is_zero() {
        0
    } else if p.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagonal() -> GModule {
        let g = CharacterGroup::torus(2);
        GModule::from_free(&g, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn delta_of_empty_and_line() {
        let g = CharacterGroup::torus(1);
        let d = delta_set(&GModule::empty(&g));
        assert_eq!(d, vec![Subspace::full(1)]);
        let v = GModule::from_free(&g, &[&[1]]).unwrap();
        let d = delta_set(&v);
        assert_eq!(d, vec![Subspace::full(1), Subspace::zero(1)]);
    }

    #[test]
    fn delta_of_hexagonal_has_five_members() {
        // oracle: saturate the span of every subset of the three differentials
        let diffs = [vec![1i64, 0], vec![0, 1], vec![1, 1]];
        let mut oracle = BTreeSet::new();
        for mask in 0..8u32 {
            let rows: Vec<Vec<i64>> = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| diffs[i].clone()).collect();
            oracle.insert(Subspace::from_perp_span(2, &rows));
        }
        let d = delta_set(&hexagonal());
        assert_eq!(d.len(), 5);
        assert_eq!(d.iter().cloned().collect::<BTreeSet<_>>(), oracle);
        assert_eq!(d[0], Subspace::full(2));
        assert_eq!(d[4], Subspace::zero(2));
    }

    #[test]
    fn fixed_submodule_examples() {
        let g = CharacterGroup::torus(1);
        let v = GModule::from_free(&g, &[&[1]]).unwrap();
        assert!(fixed_submodule(&v, &Subspace::full(1)).is_empty());
        assert_eq!(fixed_submodule(&v, &Subspace::zero(1)), v);

        let hex = hexagonal();
        let h = Subspace::from_perp_span(2, &[vec![1, 0]]);
        let fixed = fixed_submodule(&hex, &h);
        assert_eq!(fixed.weights(), &[CharacterGroup::torus(2).free_weight(&[1, 0])]);
        assert_eq!(quotient_module(&hex, &h).weights().len(), 2);
    }

    #[test]
    fn minimal_stabilizer_examples() {
        let g1 = CharacterGroup::torus(1);
        assert_eq!(minimal_stabilizer(&GModule::empty(&g1)), Subspace::full(1));
        let v = GModule::from_free(&g1, &[&[1]]).unwrap();
        assert_eq!(minimal_stabilizer(&v), Subspace::zero(1));
        assert_eq!(minimal_stabilizer(&hexagonal()), Subspace::zero(2));
    }

    #[test]
    fn restriction_to_subtorus() {
        let h = Subspace::from_perp_span(2, &[vec![1, 0]]);
        let g = CharacterGroup::torus(2);
        assert_eq!(h.restrict_weight(&g.free_weight(&[3, 5])), vec![5]);
        assert_eq!(h.restrict_weight(&g.free_weight(&[3, 0])), vec![0]);
    }

    #[test]
    fn subspace_sum_and_order() {
        let a = Subspace::from_perp_span(2, &[vec![1, 0]]);
        let b = Subspace::from_perp_span(2, &[vec![0, 1]]);
        assert_eq!(a.sum(&b), Subspace::full(2));
        assert_eq!(a.intersection(&b), Subspace::zero(2));
        assert!(Subspace::zero(2).is_subspace_of(&a));
        assert!(!a.is_subspace_of(&b));
    }

    #[test]
    fn torsion_only_weights_rejected() {
        let g = CharacterGroup::new(1, vec![2]).unwrap();
        let w = g.weight(vec![0], vec![1]).unwrap();
        assert!(GModule::new(&g, vec![w], 0).is_err());
        assert!(g.weight(vec![1], vec![2]).is_err());
        assert!(CharacterGroup::new(1, vec![1]).is_err());
    }

    #[test]
    fn integer_direction_is_primitive() {
        let b = PolarizingVector::new(vec![Rational64::new(1, 2), Rational64::new(-3, 4)]);
        assert_eq!(b.integer_direction(), vec![2, -3]);
    }
}
