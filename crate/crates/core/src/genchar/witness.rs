//! Pointedness witnesses: integer vectors `ξ` with `⟨αᵢ, ξ⟩ ≥ 1` for a
//! list of weights, found by Fourier–Motzkin elimination over `ℚ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lattice::{PolarizingVector, Weight};

/// `a · x ≥ b`, stored with the coefficient vector scaled to primitive
/// integers.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<BigInt>,
    b: BigRational,
}

impl Row {
    fn normalized(a: Vec<BigRational>, b: BigRational) -> Option<Row> {
        let lcm = a
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = a
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return None;
        }
        let scale = BigRational::new(lcm, g.clone());
        Some(Row {
            a: ints.into_iter().map(|x| x / &g).collect(),
            b: b * scale,
        })
    }
}

/// Solves `A x ≥ b` over `ℚ`; returns some solution or `None` if infeasible.
fn solve(rows: Vec<Row>, nvars: usize) -> Option<Vec<BigRational>> {
    // dedupe: identical directions keep the strongest bound
    let mut by_dir: BTreeMap<Vec<BigInt>, BigRational> = BTreeMap::new();
    for r in rows {
        if r.a.iter().all(|x| x.is_zero()) {
            if r.b.is_positive() {
                return None;
            }
            continue;
        }
        by_dir
            .entry(r.a)
            .and_modify(|b| {
                if r.b > *b {
                    *b = r.b.clone();
                }
            })
            .or_insert(r.b);
    }
    let rows: Vec<Row> = by_dir.into_iter().map(|(a, b)| Row { a, b }).collect();
    if nvars == 0 {
        return Some(Vec::new());
    }
    let j = nvars - 1;
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        match r.a[j].sign() {
            num_bigint::Sign::Plus => pos.push(r),
            num_bigint::Sign::Minus => neg.push(r),
            num_bigint::Sign::NoSign => rest.push(r),
        }
    }
    let mut reduced: Vec<Row> = Vec::new();
    for r in &rest {
        reduced.push(Row {
            a: r.a[..j].to_vec(),
            b: r.b.clone(),
        });
    }
    for p in &pos {
        for q in &neg {
            let mp = -q.a[j].clone();
            let mq = p.a[j].clone();
            let a: Vec<BigRational> = (0..j)
                .map(|i| BigRational::from_integer(&p.a[i] * &mp + &q.a[i] * &mq))
                .collect();
            let b = &p.b * BigRational::from_integer(mp.clone()) + &q.b * BigRational::from_integer(mq.clone());
            match Row::normalized(a, b.clone()) {
                Some(r) => reduced.push(r),
                None => {
                    if b.is_positive() {
                        return None;
                    }
                }
            }
        }
    }
    let mut x = solve(reduced, j)?;
    let partial = |r: &Row, x: &[BigRational]| -> BigRational {
        (0..j).fold(BigRational::zero(), |acc, i| {
            acc + BigRational::from_integer(r.a[i].clone()) * &x[i]
        })
    };
    let lo = pos
        .iter()
        .map(|r| (&r.b - partial(r, &x)) / BigRational::from_integer(r.a[j].clone()))
        .max();
    let hi = neg
        .iter()
        .map(|r| (&r.b - partial(r, &x)) / BigRational::from_integer(r.a[j].clone()))
        .min();
    let value = match (lo, hi) {
        (None, None) => BigRational::zero(),
        (Some(l), None) => l.ceil(),
        (None, Some(h)) => h.floor(),
        (Some(l), Some(h)) => {
            let c = l.ceil();
            if c <= h {
                c
            } else {
                l
            }
        }
    };
    x.push(value);
    Some(x)
}

fn to_integer_vector(x: &[BigRational]) -> Option<Vec<i64>> {
    let lcm = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| if g.is_zero() { v.to_i64() } else { (v / &g).to_i64() })
        .collect()
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn is_witness(weights: &[Weight], xi: &PolarizingVector) -> bool {
    weights.iter().all(|w| w.pair(xi).is_positive())
}

/// Integer `ξ` with `⟨ᾱ, ξ⟩ > 0` for all `α ∈ weights`, trying `hints`
/// first.
pub fn find_witness(n: usize, weights: &[Weight], hints: &[PolarizingVector]) -> Option<PolarizingVector> {
    for h in hints {
        if h.dim() == n && !h.is_zero() && is_witness(weights, h) {
            return Some(PolarizingVector::from_ints(&h.integer_direction()));
        }
    }
    if weights.is_empty() {
        let mut e = vec![0; n];
        if n > 0 {
            e[0] = 1;
        }
        return Some(PolarizingVector::from_ints(&e));
    }
    let rows: Vec<Row> = weights
        .iter()
        .filter_map(|w| Row::normalized(w.free().iter().map(|&x| big(x)).collect(), big(1)))
        .collect();
    if rows.len() != weights.len() {
        return None;
    }
    let x = solve(rows, n)?;
    let v = to_integer_vector(&x)?;
    let xi = PolarizingVector::from_ints(&v);
    is_witness(weights, &xi).then_some(xi)
}

/// Integer `ψ = Σ cⱼ kⱼ` in the span of `basis` with `⟨ᾱ, ψ⟩ > 0` for every
/// `α ∈ weights`.
pub fn find_witness_in(basis: &[Vec<i64>], weights: &[Weight]) -> Option<PolarizingVector> {
    let n = weights.first().map(|w| w.free().len()).or(basis.first().map(|b| b.len()))?;
    let d = basis.len();
    let rows: Vec<Row> = weights
        .iter()
        .map(|w| {
            let a: Vec<BigRational> = basis.iter().map(|k| big(w.pair_int(k))).collect();
            Row::normalized(a, big(1))
        })
        .collect::<Option<Vec<_>>>()?;
    let c = solve(rows, d)?;
    let c = to_integer_vector(&c)?;
    let v: Vec<i64> = (0..n)
        .map(|j| c.iter().zip(basis).map(|(ci, k)| ci * k[j]).sum())
        .collect();
    let psi = PolarizingVector::from_ints(&v);
    is_witness(weights, &psi).then_some(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CharacterGroup;

    fn ws(g: &CharacterGroup, vs: &[&[i64]]) -> Vec<Weight> {
        vs.iter().map(|v| g.free_weight(v)).collect()
    }

    #[test]
    fn opposite_rays_have_no_witness() {
        let g = CharacterGroup::torus(1);
        assert!(find_witness(1, &ws(&g, &[&[1], &[-1]]), &[]).is_none());
        assert!(find_witness(1, &ws(&g, &[&[2], &[3]]), &[]).is_some());
    }

    #[test]
    fn planar_cones() {
        let g = CharacterGroup::torus(2);
        let xi = find_witness(2, &ws(&g, &[&[1, 0], &[-1, 3], &[1, -1]]), &[]).unwrap();
        assert!(is_witness(&ws(&g, &[&[1, 0], &[-1, 3], &[1, -1]]), &xi));
        assert!(find_witness(2, &ws(&g, &[&[1, 0], &[-1, 1], &[0, -1]]), &[]).is_none());
    }

    #[test]
    fn constrained_to_a_hyperplane() {
        let g = CharacterGroup::torus(2);
        // ψ ⟂ (1,1): ψ = c(1,-1)
        let psi = find_witness_in(&[vec![1, -1]], &ws(&g, &[&[2, 0], &[0, -1]])).unwrap();
        assert_eq!(psi, PolarizingVector::from_ints(&[1, -1]));
        assert!(find_witness_in(&[vec![1, -1]], &ws(&g, &[&[1, 0], &[-1, 0]])).is_none());
    }
}
