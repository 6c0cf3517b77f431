//! `(G,V)`-flags and the polarizing-vector search schedule.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::intmat;
use super::{minimal_stabilizer, quotient_module, GModule, PolarizingVector, Subspace, Weight};
use crate::error::{Error, Result};

/// Ordered blocks `V₁ … V_s` of the moving weights with vectors `β₁ … β_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    pub blocks: Vec<GModule>,
    pub betas: Vec<PolarizingVector>,
}

impl Flag {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

const GAMMA_NORM_CAP: i64 = 64;

/// Integer values ordered 0, 1, −1, 2, −2, … up to `|x| ≤ bound`.
fn zigzag(bound: i64) -> Vec<i64> {
    let mut out = vec![0];
    for k in 1..=bound {
        out.push(k);
        out.push(-k);
    }
    out
}

/// Odometer step, last coordinate fastest. Returns false after wrapping.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < base {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// First vector `γ ∈ 𝔥` (in coordinates over the Hermite basis of `𝔥 ∩ ℤⁿ`)
/// pairing nonzero with every weight of `avoid`. Candidates are visited by
/// increasing max-norm of the coefficient vector; within a norm shell
/// coordinates run through 0, 1, −1, 2, −2, … lexicographically.
pub fn gamma_in(h: &Subspace, avoid: &[Weight]) -> Result<PolarizingVector> {
    let n = h.ambient();
    if avoid.is_empty() {
        return Ok(PolarizingVector::zero(n));
    }
    let basis = h.algebra_basis();
    let d = basis.len();
    if d == 0 {
        return Err(Error::NoAdmissibleGamma);
    }
    let cap = GAMMA_NORM_CAP.max(avoid.len() as i64 + 1);
    for norm in 1..=cap {
        let order = zigzag(norm);
        let mut idx = vec![0usize; d];
        loop {
            let coeffs: Vec<i64> = idx.iter().map(|&i| order[i]).collect();
            if coeffs.iter().any(|c| c.abs() == norm) {
                let v: Vec<i64> = (0..n)
                    .map(|j| coeffs.iter().zip(basis).map(|(c, b)| c * b[j]).sum())
                    .collect();
                if avoid.iter().all(|w| w.pair_int(&v) != 0) {
                    return Ok(PolarizingVector::from_ints(&v));
                }
            }
            if !advance(&mut idx, order.len()) {
                break;
            }
        }
    }
    Err(Error::NoAdmissibleGamma)
}

/// `γ_𝔥`: an element of `𝔥` acting bijectively on `V/V^𝔥`. The zero vector
/// is returned when `V/V^𝔥` is empty.
pub fn choose_gamma(v: &GModule, h: &Subspace) -> Result<PolarizingVector> {
    let q = quotient_module(v, h);
    let mut distinct: Vec<Weight> = q.weights().to_vec();
    distinct.dedup();
    gamma_in(h, &distinct)
}

fn integer_rows(betas: &[PolarizingVector]) -> Vec<Vec<i128>> {
    betas
        .iter()
        .map(|b| b.integer_direction().iter().map(|&x| x as i128).collect())
        .collect()
}

/// Checks the flag conditions: `β_k` vanishes on earlier blocks and on no
/// weight of block `k`, and `β₁ … β_s` together with `𝔥_min` span `𝔤` as a
/// direct sum.
pub fn validate_flag(v: &GModule, f: &Flag) -> Result<bool> {
    let mut all: Vec<Weight> = f
        .blocks
        .iter()
        .flat_map(|b| b.weights().iter().cloned())
        .collect();
    all.sort();
    if all != v.moving().weights() {
        return Err(Error::BlockMismatch(format!(
            "blocks hold {} weights, module has {} moving weights",
            all.len(),
            v.moving().weights().len()
        )));
    }
    if f.blocks.len() != f.betas.len() {
        return Err(Error::BlockMismatch(format!(
            "{} blocks but {} betas",
            f.blocks.len(),
            f.betas.len()
        )));
    }
    if f.blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::BlockMismatch("empty block".into()));
    }
    let n = v.group().free_rank();
    if f.betas.iter().any(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.betas.iter().map(|b| b.dim()).find(|&d| d != n).unwrap_or(0),
        });
    }
    for (k, beta) in f.betas.iter().enumerate() {
        for earlier in &f.blocks[..k] {
            if earlier.weights().iter().any(|w| !w.pair(beta).is_zero()) {
                return Ok(false);
            }
        }
        if f.blocks[k].weights().iter().any(|w| w.pair(beta).is_zero()) {
            return Ok(false);
        }
    }
    let hmin = minimal_stabilizer(v);
    if f.betas.len() + hmin.dim() != n {
        return Ok(false);
    }
    let mut rows = integer_rows(&f.betas);
    rows.extend(
        hmin.algebra_basis()
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect::<Vec<_>>()),
    );
    Ok(intmat::rank(&rows, n) == n)
}

/// Valid flags from complete chains `S₁ ⊂ … ⊂ S_s` of weight-spanned
/// subspaces of `𝔤*`; block `k` collects the weights in `S_k ∖ S_{k−1}` and
/// `β_k` is the first vector of the schedule in `S_{k−1}^⊥` avoiding them.
/// Chains are visited depth-first with successors ordered by their lattice.
pub fn enumerate_flags(v: &GModule, limit: usize) -> Vec<Flag> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let moving = v.moving();
    let n = v.group().free_rank();
    let mut state = Search {
        moving: &moving,
        n,
        limit,
        out: &mut out,
    };
    state.extend(Vec::new(), Vec::new(), Vec::new());
    out
}

struct Search<'a> {
    moving: &'a GModule,
    n: usize,
    limit: usize,
    out: &'a mut Vec<Flag>,
}

impl Search<'_> {
    fn extend(&mut self, span: Vec<Vec<i64>>, blocks: Vec<GModule>, betas: Vec<PolarizingVector>) {
        if self.out.len() >= self.limit {
            return;
        }
        let current = Subspace::from_perp_span(self.n, &span);
        let rest: Vec<Weight> = self
            .moving
            .weights()
            .iter()
            .filter(|w| !current.annihilates(w))
            .cloned()
            .collect();
        if rest.is_empty() {
            self.out.push(Flag { blocks, betas });
            return;
        }
        let mut successors: BTreeMap<Vec<Vec<i64>>, Vec<Weight>> = BTreeMap::new();
        for w in &rest {
            let mut rows = span.clone();
            rows.push(w.free().to_vec());
            let next = Subspace::from_perp_span(self.n, &rows);
            successors.entry(next.perp_basis().to_vec()).or_insert_with(|| {
                rest.iter().filter(|x| next.annihilates(x)).cloned().collect()
            });
        }
        for (next_span, block) in successors {
            let mut distinct = block.clone();
            distinct.dedup();
            let Ok(beta) = gamma_in(&current, &distinct) else {
                continue;
            };
            let mut blocks = blocks.clone();
            blocks.push(self.moving.with_weights(block));
            let mut betas = betas.clone();
            betas.push(beta);
            self.extend(next_span, blocks, betas);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{delta_set, CharacterGroup};

    fn module(n: usize, ws: &[&[i64]]) -> GModule {
        GModule::from_free(&CharacterGroup::torus(n), ws).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let v = module(1, &[&[1]]);
        assert_eq!(choose_gamma(&v, &Subspace::full(1)).unwrap(), PolarizingVector::from_ints(&[1]));
        let hex = module(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(choose_gamma(&hex, &Subspace::zero(2)).unwrap().is_zero());
        let g = choose_gamma(&hex, &Subspace::full(2)).unwrap();
        for w in hex.weights() {
            assert!(!w.pair(&g).is_zero());
        }
        for h in delta_set(&hex) {
            let g = choose_gamma(&hex, &h).unwrap();
            assert!(h.contains_vector(&g));
            for w in quotient_module(&hex, &h).weights() {
                assert!(!w.pair(&g).is_zero());
            }
        }
    }

    #[test]
    fn validate_examples() {
        let v = module(2, &[&[1, 0], &[0, 1]]);
        let b1 = module(2, &[&[1, 0]]);
        let b2 = module(2, &[&[0, 1]]);
        let ok = Flag {
            blocks: vec![b1.clone(), b2.clone()],
            betas: vec![PolarizingVector::from_ints(&[1, 0]), PolarizingVector::from_ints(&[0, 1])],
        };
        assert!(validate_flag(&v, &ok).unwrap());
        let bad = Flag {
            blocks: vec![b1.clone(), b2],
            betas: vec![PolarizingVector::from_ints(&[0, 1]), PolarizingVector::from_ints(&[0, 1])],
        };
        assert!(!validate_flag(&v, &bad).unwrap());
        let short = Flag {
            blocks: vec![b1],
            betas: vec![PolarizingVector::from_ints(&[1, 0])],
        };
        assert!(matches!(validate_flag(&v, &short), Err(Error::BlockMismatch(_))));
        let line = module(1, &[&[1]]);
        let f = Flag {
            blocks: vec![line.clone()],
            betas: vec![PolarizingVector::from_ints(&[1])],
        };
        assert!(validate_flag(&line, &f).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let line = module(1, &[&[1]]);
        let flags = enumerate_flags(&line, 10);
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].betas, vec![PolarizingVector::from_ints(&[1])]);

        let v = module(2, &[&[1, 0], &[0, 1]]);
        let flags = enumerate_flags(&v, 10);
        assert_eq!(flags.len(), 2);
        let firsts: Vec<_> = flags.iter().map(|f| f.blocks[0].weights()[0].free().to_vec()).collect();
        assert!(firsts.contains(&vec![1, 0]) && firsts.contains(&vec![0, 1]));
        for f in &flags {
            assert!(validate_flag(&v, f).unwrap());
        }

        let empty = GModule::empty(&CharacterGroup::torus(2));
        let flags = enumerate_flags(&empty, 10);
        assert_eq!(flags.len(), 1);
        assert!(flags[0].is_empty());
    }

    #[test]
    fn proportional_weights_share_a_block() {
        let v = module(2, &[&[1, 1], &[2, 2], &[1, -1], &[0, 1]]);
        let flags = enumerate_flags(&v, 100);
        // three lines in the plane, chains = ordered choice of the first line
        assert_eq!(flags.len(), 3);
        for f in &flags {
            assert!(validate_flag(&v, f).unwrap());
            let b = &f.blocks[0];
            let first = &b.weights()[0];
            assert!(b.weights().iter().all(|w| w.free()[0] * first.free()[1] == w.free()[1] * first.free()[0]));
        }
        assert!(flags.iter().any(|f| f.blocks[0].weights().len() == 2));
    }
}
