//! Seeded instance generation inside the desk-scale envelope: rank ≤ 3,
//! at most 6 weights, coordinates in `[−3,3]`.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charring::FiniteCharacter;
use crate::genchar::{GenChar, PolarizedTerm};
use crate::lattice::{CharacterGroup, GModule, PolarizingVector, Weight};

pub(crate) struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Independent streams per suite keep suites reproducible in isolation.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn nonzero(&mut self, bound: i64) -> i64 {
        loop {
            let x = self.range(-bound, bound);
            if x != 0 {
                return x;
            }
        }
    }

    /// Rank 1..=3; a quarter of the groups get a cyclic factor.
    pub fn group(&mut self) -> CharacterGroup {
        let n = self.range(1, 3) as usize;
        let torsion = if self.coin(0.25) {
            vec![self.range(2, 3)]
        } else {
            Vec::new()
        };
        CharacterGroup::new(n, torsion).expect("valid shape")
    }

    pub fn torsion_part(&mut self, g: &CharacterGroup) -> Vec<i64> {
        g.torsion_orders().iter().map(|&d| self.range(0, d - 1)).collect()
    }

    pub fn weight(&mut self, g: &CharacterGroup, bound: i64) -> Weight {
        let free: Vec<i64> = (0..g.free_rank()).map(|_| self.range(-bound, bound)).collect();
        let t = self.torsion_part(g);
        g.reduce(free, t)
    }

    pub fn moving_weight(&mut self, g: &CharacterGroup, bound: i64) -> Weight {
        loop {
            let w = self.weight(g, bound);
            if !w.has_zero_differential() {
                return w;
            }
        }
    }

    pub fn module(&mut self, g: &CharacterGroup, max_weights: usize, bound: i64) -> GModule {
        let k = self.range(0, max_weights as i64) as usize;
        let ws = (0..k).map(|_| self.moving_weight(g, bound)).collect();
        GModule::new(g, ws, 0).expect("moving weights")
    }

    /// Integer coordinates, with an occasional half-integer.
    pub fn vector(&mut self, n: usize, bound: i64) -> PolarizingVector {
        let halves = self.coin(0.2);
        PolarizingVector::new(
            (0..n)
                .map(|_| {
                    let p = self.range(-bound, bound);
                    if halves {
                        Rational64::new(2 * p + 1, 2)
                    } else {
                        Rational64::from_integer(p)
                    }
                })
                .collect(),
        )
    }

    pub fn finite(&mut self, g: &CharacterGroup, max_terms: usize, bound: i64) -> FiniteCharacter {
        let k = self.range(1, max_terms as i64);
        let mut p = FiniteCharacter::zero(g);
        for _ in 0..k {
            let w = self.weight(g, bound);
            let c = self.nonzero(2);
            p.add_term(w, c);
        }
        p
    }

    /// A finite part plus, over groups with a free part, sometimes one
    /// polarized series with up to two denominators.
    pub fn genchar(&mut self, g: &CharacterGroup) -> GenChar {
        let finite = self.finite(g, 3, 3);
        let r = g.free_rank();
        if r == 0 || !self.coin(0.5) {
            return GenChar::from_finite(finite);
        }
        let xi: Vec<i64> = loop {
            let v: Vec<i64> = (0..r).map(|_| self.range(-2, 2)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let k = self.range(1, 2);
        let mut dens = Vec::new();
        while dens.len() < k as usize {
            let d = self.moving_weight(g, 2);
            match d.pair_int(&xi).signum() {
                1 => dens.push(d),
                -1 => dens.push(g.neg(&d)),
                _ => {}
            }
        }
        let num = self.weight(g, 3);
        let c = if self.coin(0.5) { 1 } else { -1 };
        let term = PolarizedTerm::new(c, num, dens, PolarizingVector::from_ints(&xi)).expect("witness by construction");
        GenChar::from_parts(g, vec![term], finite)
    }
}
