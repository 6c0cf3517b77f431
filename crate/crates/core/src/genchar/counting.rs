//! Coefficient extraction: vector partition counting.
//!
//! Two independent routes are kept: a depth-first enumeration bounded along
//! the witness direction (single coefficients) and a dynamic program over a
//! box (whole windows). Each is used to check the other in tests.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{GenChar, PolarizedTerm, Window};
use crate::charring::FiniteCharacter;
use crate::lattice::{CharacterGroup, Weight};

/// Boxes with more cells than this are evaluated point by point.
pub const DP_CELL_LIMIT: u128 = 4_000_000;

struct Counter<'a> {
    group: &'a CharacterGroup,
    dens: Vec<Weight>,
    heights: Vec<i64>,
    xi: Vec<i64>,
    memo: HashMap<(usize, Weight), i64>,
}

impl<'a> Counter<'a> {
    fn new(group: &'a CharacterGroup, denominators: &[Weight], xi: &[i64]) -> Self {
        let mut dens: Vec<(i64, Weight)> = denominators
            .iter()
            .map(|d| (d.pair_int(xi), d.clone()))
            .collect();
        // tallest steps first keeps the branching small
        dens.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        assert!(dens.iter().all(|(h, _)| *h > 0), "witness must be positive on denominators");
        Counter {
            group,
            heights: dens.iter().map(|d| d.0).collect(),
            dens: dens.into_iter().map(|d| d.1).collect(),
            xi: xi.to_vec(),
            memo: HashMap::new(),
        }
    }

    fn count(&mut self, i: usize, r: &Weight) -> i64 {
        let h = r.pair_int(&self.xi);
        if h < 0 {
            return 0;
        }
        if h == 0 {
            return i64::from(r.is_zero());
        }
        let m = self.dens.len();
        if i == m {
            return 0;
        }
        if i + 1 == m {
            let w = self.heights[i];
            if h % w != 0 {
                return 0;
            }
            return i64::from(self.group.scale(&self.dens[i], h / w) == *r);
        }
        let key = (i, r.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let alpha = self.dens[i].clone();
        let mut total = 0;
        let mut cur = r.clone();
        for _ in 0..=h / self.heights[i] {
            total += self.count(i + 1, &cur);
            cur = self.group.sub(&cur, &alpha);
        }
        self.memo.insert(key, total);
        total
    }
}

/// `#{k ∈ ℤ_{≥0}^m : Σ kᵢαᵢ = target}` in `Ĝ`, torsion included. `xi` must be
/// an integer vector positive on every `αᵢ`.
pub fn count_partitions(group: &CharacterGroup, denominators: &[Weight], xi: &[i64], target: &Weight) -> i64 {
    Counter::new(group, denominators, xi).count(0, target)
}

fn term_count(group: &CharacterGroup, t: &PolarizedTerm, mu: &Weight) -> i64 {
    let xi = t.witness.integer_direction();
    let r = group.sub(mu, &t.numerator);
    t.coeff * count_partitions(group, &t.denominators, &xi, &r)
}

pub(super) fn coefficient_at(phi: &GenChar, mu: &Weight) -> i64 {
    let g = &phi.group;
    phi.finite.coeff(mu) + phi.terms.iter().map(|t| term_count(g, t, mu)).sum::<i64>()
}

pub(super) fn truncate(phi: &GenChar, w: &Window) -> FiniteCharacter {
    let g = &phi.group;
    let mut out = FiniteCharacter::zero(g);
    for (mu, c) in phi.finite.iter() {
        if w.contains_free(mu.free()) {
            out.add_term(mu.clone(), c);
        }
    }
    let parts: Vec<Vec<(Weight, i64)>> = phi.terms.par_iter().map(|t| truncate_term(g, t, w)).collect();
    for part in parts {
        for (mu, c) in part {
            out.add_term(mu, c);
        }
    }
    out
}

/// Mixed-radix box over free coordinates and all torsion residues.
struct Grid {
    lo: Vec<i64>,
    ext: Vec<i64>,
    orders: Vec<i64>,
    n: usize,
}

impl Grid {
    fn cells(&self) -> u128 {
        self.ext
            .iter()
            .chain(&self.orders)
            .map(|&e| e as u128)
            .product()
    }

    fn index(&self, free: &[i64], tors: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&f, &lo), &ext) in free.iter().zip(&self.lo).zip(&self.ext).take(self.n) {
            let x = f - lo;
            if x < 0 || x >= ext {
                return None;
            }
            idx = idx * ext as usize + x as usize;
        }
        for (t, d) in tors.iter().zip(&self.orders) {
            idx = idx * *d as usize + *t as usize;
        }
        Some(idx)
    }

    fn decode(&self, mut idx: usize, free: &mut [i64], tors: &mut [i64]) {
        for j in (0..self.orders.len()).rev() {
            let d = self.orders[j] as usize;
            tors[j] = (idx % d) as i64;
            idx /= d;
        }
        for i in (0..self.n).rev() {
            let e = self.ext[i] as usize;
            free[i] = (idx % e) as i64 + self.lo[i];
            idx /= e;
        }
    }
}

fn truncate_term(g: &CharacterGroup, t: &PolarizedTerm, w: &Window) -> Vec<(Weight, i64)> {
    let n = g.free_rank();
    let xi = t.witness.integer_direction();
    let lam = t.numerator.free();
    let top: i64 = (0..n).map(|i| (xi[i] * w.lower()[i]).max(xi[i] * w.upper()[i])).sum();
    let budget = top - t.numerator.pair_int(&xi);
    if budget < 0 {
        return Vec::new();
    }
    let mut lo: Vec<i64> = (0..n).map(|i| w.lower()[i].min(lam[i])).collect();
    let mut hi: Vec<i64> = (0..n).map(|i| w.upper()[i].max(lam[i])).collect();
    for d in &t.denominators {
        let h = d.pair_int(&xi);
        for i in 0..n {
            let reach = d.free()[i] * budget;
            let (a, b) = (lam[i] + reach.div_euclid(h), lam[i] + (reach + h - 1).div_euclid(h));
            lo[i] = lo[i].min(a);
            hi[i] = hi[i].max(b);
        }
    }
    let grid = Grid {
        ext: (0..n).map(|i| hi[i] - lo[i] + 1).collect(),
        lo,
        orders: g.torsion_orders().to_vec(),
        n,
    };
    let points = w.points(g);
    if grid.cells() > DP_CELL_LIMIT {
        let mut counter = Counter::new(g, &t.denominators, &xi);
        return points
            .into_iter()
            .filter_map(|mu| {
                let c = t.coeff * counter.count(0, &g.sub(&mu, &t.numerator));
                (c != 0).then_some((mu, c))
            })
            .collect();
    }
    let cells = grid.cells() as usize;
    let m = g.torsion_orders().len();
    let mut free = vec![0i64; n];
    let mut tors = vec![0i64; m];
    let mut keyed: Vec<(i64, u32)> = (0..cells)
        .map(|c| {
            grid.decode(c, &mut free, &mut tors);
            (free.iter().zip(&xi).map(|(a, b)| a * b).sum(), c as u32)
        })
        .collect();
    keyed.sort_unstable();
    let order: Vec<u32> = keyed.into_iter().map(|(_, c)| c).collect();
    let mut val = vec![0i64; cells];
    let start = grid
        .index(t.numerator.free(), t.numerator.torsion())
        .expect("numerator inside its own box");
    val[start] = 1;
    let mut pfree = vec![0i64; n];
    let mut ptors = vec![0i64; m];
    for d in &t.denominators {
        for &c in &order {
            grid.decode(c as usize, &mut free, &mut tors);
            for i in 0..n {
                pfree[i] = free[i] - d.free()[i];
            }
            for j in 0..m {
                ptors[j] = (tors[j] - d.torsion()[j]).rem_euclid(grid.orders[j]);
            }
            if let Some(p) = grid.index(&pfree, &ptors) {
                val[c as usize] += val[p];
            }
        }
    }
    points
        .into_iter()
        .filter_map(|mu| {
            let idx = grid.index(mu.free(), mu.torsion())?;
            let c = t.coeff * val[idx];
            (c != 0).then_some((mu, c))
        })
        .collect()
}
