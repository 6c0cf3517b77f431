use std::collections::BTreeMap;

use rayon::prelude::*;

use super::random::Sampler;
use super::{compare_finite, rank, window_vector, Check, Instance, Outcome, Recorder, VerifyConfig};
use crate::charring::FiniteCharacter;
use crate::cli::schema::{finite_dto, vector_dto, FlagDto, GenCharDto, WeightDto};
use crate::error::Error;
use crate::genchar::{
    index_thom, induction, invert_induction, is_zero, mul_finite, polarized_inverse, sigma_dbar_index, GenChar,
    Window, ZeroVerdict,
};
use crate::ktheory::{
    annihilated_by_cancellation, decomposition_map, flag_index, in_dm, in_f, index_kclass, mother_formula_check,
    GeneratorTag, KClass, Membership,
};
use crate::lattice::{
    choose_gamma, delta_set, enumerate_flags, fixed_submodule, minimal_stabilizer, quotient_by_character,
    CharacterGroup, GModule, PolarizingVector, Subspace,
};

fn circle_module() -> GModule {
    GModule::from_free(&CharacterGroup::torus(1), &[&[1]]).expect("valid")
}

fn hexagonal() -> GModule {
    GModule::from_free(&CharacterGroup::torus(2), &[&[1, 0], &[0, 1], &[1, 1]]).expect("valid")
}

fn admissible(v: &GModule, beta: &PolarizingVector) -> bool {
    v.weights().iter().all(|w| w.pair(beta) != 0.into())
}

fn zero_outcome(v: ZeroVerdict, what: &str, coeff: impl Fn(&crate::lattice::Weight) -> i64) -> Outcome {
    match v {
        ZeroVerdict::ProvedZero => Outcome::pass(),
        ZeroVerdict::ProvedNonzero(w) => {
            let c = coeff(&w);
            Outcome::mismatch(&w, 0, c, format!("{what} has a nonzero coefficient"))
        }
        ZeroVerdict::Unknown(r) => Outcome::Unknown(r),
    }
}

fn membership_outcome(m: Membership) -> Outcome {
    match m {
        Membership::ProvedIn => Outcome::pass(),
        Membership::ProvedOut { .. } => Outcome::fail(m.to_string()),
        Membership::Unknown { .. } => Outcome::Unknown(m.to_string()),
    }
}

fn run_parallel<T: Sync>(cases: &[T], f: impl Fn(&T) -> Vec<Check> + Sync + Send) -> Vec<Check> {
    cases.par_iter().map(f).collect::<Vec<_>>().concat()
}

/// Draws `(V, β)` pairs until `want` admissible ones are found; inadmissible
/// draws are kept so they show up as skipped.
fn random_pairs(s: &mut Sampler, want: usize) -> Vec<(String, GModule, PolarizingVector)> {
    let mut out = Vec::new();
    let mut good = 0;
    let mut draw = 0;
    while good < want && draw < want * 20 {
        draw += 1;
        let g = s.group();
        let v = s.module(&g, 6, 3);
        let beta = s.vector(g.free_rank(), 3);
        if admissible(&v, &beta) {
            good += 1;
        }
        out.push((format!("random-{draw}"), v, beta));
    }
    out
}

/// `∧•V ⊗ [∧•V]^{-1}_β` reduces exactly to `1`.
pub fn check_inverse_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let mut s = Sampler::new(cfg.seed, 1);
    let mut cases = vec![
        ("circle".to_string(), circle_module(), PolarizingVector::from_ints(&[1])),
        ("hexagonal".to_string(), hexagonal(), PolarizingVector::from_ints(&[1, -2])),
        ("circle-zero-beta".to_string(), circle_module(), PolarizingVector::from_ints(&[0])),
    ];
    cases.extend(random_pairs(&mut s, cfg.trials.unwrap_or(200)));
    run_parallel(&cases, |(label, v, beta)| {
        let inst = Instance::new(label.clone(), v).with("beta", vector_dto(beta));
        let mut rec = Recorder::new("inverse-identity", &inst, cfg);
        rec.run("exact-one", || {
            let inv = match polarized_inverse(v, beta) {
                Ok(inv) => inv,
                Err(Error::NotPolarizable(w)) => return Outcome::Skipped(format!("beta vanishes on {w}")),
                Err(e) => return Outcome::Error(e),
            };
            let one = FiniteCharacter::one(v.group());
            let prod = mul_finite(&FiniteCharacter::wedge(v), &inv);
            if prod.is_finite() {
                return compare_finite(&one, prod.finite_part(), "product differs from 1");
            }
            match is_zero(&prod.sub(&GenChar::from_finite(one.clone()))) {
                ZeroVerdict::ProvedNonzero(w) => {
                    Outcome::mismatch(&w, one.coeff(&w), prod.coefficient_at(&w), "product differs from 1")
                }
                _ => Outcome::Unknown("product did not reduce to a finite character".into()),
            }
        });
        rec.finish()
    })
}

/// `∧•V̄ ⊗ (Index Thom_{−β} − Index Thom_β) = 0` and the window-level
/// difference identity.
pub fn check_thom_pm(cfg: &VerifyConfig) -> Vec<Check> {
    let mut s = Sampler::new(cfg.seed, 2);
    let t2 = CharacterGroup::torus(2);
    let mut cases = vec![
        ("circle".to_string(), circle_module(), PolarizingVector::from_ints(&[1])),
        (
            "diagonal".to_string(),
            GModule::from_free(&t2, &[&[1, 1]]).expect("valid"),
            PolarizingVector::from_ints(&[1, 0]),
        ),
        (
            "empty".to_string(),
            GModule::empty(&CharacterGroup::torus(1)),
            PolarizingVector::from_ints(&[1]),
        ),
    ];
    cases.extend(random_pairs(&mut s, cfg.trials.unwrap_or(100)));
    run_parallel(&cases, |(label, v, beta)| {
        let n = v.group().free_rank();
        let inst = Instance::new(label.clone(), v).with("beta", vector_dto(beta));
        let w = match cfg.window_for(n) {
            Ok(w) => w,
            Err(e) => {
                let mut rec = Recorder::new("thom-pm", &inst, cfg);
                rec.run("window", || Outcome::Error(e));
                return rec.finish();
            }
        };
        let mut rec = Recorder::new("thom-pm", &inst, cfg).window(&w);
        if !admissible(v, beta) {
            rec.run("annihilation", || Outcome::Skipped("beta vanishes on a weight".into()));
            return rec.finish();
        }
        let sigma = match sigma_dbar_index(v, beta) {
            Ok(x) => x,
            Err(e) => {
                rec.run("annihilation", || Outcome::Error(e));
                return rec.finish();
            }
        };
        rec.run("annihilation", || {
            let killed = mul_finite(&FiniteCharacter::wedge_conj(v), &sigma);
            zero_outcome(is_zero(&killed), "the Euler product", |x| killed.coefficient_at(x))
        });
        rec.run("window-difference", || {
            let plus = index_thom(v, beta).map(|t| t.truncate(&w));
            let minus = index_thom(v, &beta.negated()).map(|t| t.truncate(&w));
            match (plus, minus) {
                (Ok(p), Ok(m)) => compare_finite(&m.sub(&p), &sigma.truncate(&w), "difference of Thom indices"),
                (Err(e), _) | (_, Err(e)) => Outcome::Error(e),
            }
        });
        if label == "circle" {
            let line = Window::cube(1, -15, 15);
            rec.run("full-line", || {
                let g = v.group();
                let all = FiniteCharacter::from_terms(g, (-15..=15).map(|k| (g.free_weight(&[k]), 1)));
                compare_finite(&all, &sigma.truncate(&line), "sum over Z on [-15,15]")
            });
        }
        rec.finish()
    })
}

struct SequenceCase {
    label: String,
    group: CharacterGroup,
    chi: Vec<i64>,
    phi: GenChar,
    samples: Vec<crate::lattice::Weight>,
}

/// Exactness of `0 → R^{-∞}(G_χ) → R^{-∞}(G) → R^{-∞}(G)` (the last map
/// multiplication by `1 − x^χ`) and surjectivity of restriction.
pub fn check_exact_sequence(cfg: &VerifyConfig) -> Vec<Check> {
    let mut s = Sampler::new(cfg.seed, 3);
    let trials = cfg.trials.unwrap_or(50);
    let mut cases = Vec::new();
    for i in 0..trials {
        let (g, chi) = match &cfg.chi {
            Some(c) => (CharacterGroup::torus(c.len()), c.clone()),
            None => {
                let g = CharacterGroup::torus(s.range(1, 2) as usize);
                let chi = loop {
                    let c: Vec<i64> = (0..g.free_rank()).map(|_| s.range(-3, 3)).collect();
                    if c.iter().any(|&x| x != 0) {
                        break c;
                    }
                };
                (g, chi)
            }
        };
        let Ok(q) = quotient_by_character(&g, &g.free_weight(&chi)) else {
            continue;
        };
        let phi = s.genchar(q.target());
        let samples = (0..8).map(|_| s.weight(q.target(), 5)).collect();
        cases.push(SequenceCase {
            label: format!("random-{}", i + 1),
            group: g,
            chi,
            phi,
            samples,
        });
    }
    let mut checks = run_parallel(&cases, |c| sequence_checks(c, cfg));
    checks.extend(sequence_examples(cfg));
    checks
}

fn sequence_checks(c: &SequenceCase, cfg: &VerifyConfig) -> Vec<Check> {
    let g = &c.group;
    let chi = g.free_weight(&c.chi);
    let q = quotient_by_character(g, &chi).expect("checked when drawn");
    let h = q.target();
    let inst = Instance::bare(c.label.clone(), g)
        .with("chi", &c.chi)
        .with("phi", GenCharDto::of(&c.phi));
    let w = match cfg.window_for(g.free_rank()) {
        Ok(w) => w,
        Err(e) => {
            let mut rec = Recorder::new("exact-sequence", &inst, cfg);
            rec.run("window", || Outcome::Error(e));
            return rec.finish();
        }
    };
    let mut rec = Recorder::new("exact-sequence", &inst, cfg).window(&w);
    let ind = match induction(&c.phi, &q) {
        Ok(x) => x,
        Err(e) => {
            rec.run("induction", || Outcome::Error(e));
            return rec.finish();
        }
    };
    let tr = ind.truncate(&w);
    rec.run("induction-contract", || {
        let mut cache = BTreeMap::new();
        for mu in w.points(g) {
            let p = q.project(&mu);
            let expect = *cache.entry(p.clone()).or_insert_with(|| c.phi.coefficient_at(&p));
            if tr.coeff(&mu) != expect {
                return Outcome::mismatch(&mu, expect, tr.coeff(&mu), "Ind(phi)(mu) != phi(pi(mu))");
            }
        }
        Outcome::pass()
    });
    rec.run("injective", || match is_zero(&c.phi) {
        ZeroVerdict::ProvedZero => Outcome::Skipped("phi is zero".into()),
        ZeroVerdict::ProvedNonzero(lam) => {
            let mu = q.section(&lam);
            let (want, got) = (c.phi.coefficient_at(&lam), ind.coefficient_at(&mu));
            if want != 0 && got == want {
                Outcome::Pass(Some(format!("Ind(phi) is {got} at {mu}")))
            } else {
                Outcome::mismatch(&mu, want, got, "induced coefficient at a lifted support point")
            }
        }
        ZeroVerdict::Unknown(r) => Outcome::Unknown(r),
    });
    rec.run("kernel-contains-image", || {
        let killed = mul_finite(&FiniteCharacter::one_minus(g, &chi), &ind);
        zero_outcome(is_zero(&killed), "(1 - x^chi) Ind(phi)", |x| killed.coefficient_at(x))
    });
    rec.run("image-contains-kernel", || match invert_induction(&ind, &chi) {
        Ok(psi) => {
            let back = match induction(&psi, &q) {
                Ok(b) => b.truncate(&w),
                Err(e) => return Outcome::Error(e),
            };
            match compare_finite(&tr, &back, "Ind of the reconstruction") {
                Outcome::Pass(_) => match is_zero(&psi.sub(&c.phi)) {
                    ZeroVerdict::ProvedNonzero(lam) => Outcome::mismatch(
                        &lam,
                        c.phi.coefficient_at(&lam),
                        psi.coefficient_at(&lam),
                        "reconstruction differs from phi",
                    ),
                    _ => Outcome::pass(),
                },
                other => other,
            }
        }
        Err(Error::ReconstructionUnsupported(r)) => Outcome::Unknown(r),
        Err(Error::NotPeriodic) => Outcome::Unknown("periodicity not certified".into()),
        Err(e) => Outcome::Error(e),
    });
    rec.run("restriction-onto", || {
        for lam in &c.samples {
            let back = q.project(&q.section(lam));
            if &back != lam {
                return Outcome::fail(format!("pi(s({lam})) = {back}"));
            }
        }
        Outcome::Pass(Some(format!("{} elements of the quotient lifted", c.samples.len())))
    });
    let _ = h;
    rec.finish()
}

fn sequence_examples(cfg: &VerifyConfig) -> Vec<Check> {
    let g = CharacterGroup::torus(1);
    let mut out = Vec::new();

    let t = g.free_weight(&[1]);
    let inst = Instance::bare("sum-over-z", &g).with("chi", [1]);
    let mut rec = Recorder::new("exact-sequence", &inst, cfg);
    rec.run("round-trip", || {
        let sigma = match sigma_dbar_index(&circle_module(), &PolarizingVector::from_ints(&[1])) {
            Ok(x) => x,
            Err(e) => return Outcome::Error(e),
        };
        match invert_induction(&sigma, &t) {
            Ok(psi) if psi.is_finite() && psi.finite_part() == &FiniteCharacter::one(psi.group()) => Outcome::pass(),
            Ok(psi) => Outcome::fail(format!("reconstructed {}", psi.finite_part().render_text())),
            Err(e) => Outcome::Error(e),
        }
    });
    out.extend(rec.finish());

    let t2 = g.free_weight(&[2]);
    let inst = Instance::bare("odd-powers", &g).with("chi", [2]);
    let mut rec = Recorder::new("exact-sequence", &inst, cfg);
    rec.run("round-trip", || {
        let odd = GenChar::series(&g, t.clone(), vec![t2.clone()]).and_then(|a| {
            GenChar::series(&g, g.neg(&t), vec![g.neg(&t2)]).map(|b| a.add(&b))
        });
        let odd = match odd {
            Ok(x) => x,
            Err(e) => return Outcome::Error(e),
        };
        match invert_induction(&odd, &t2) {
            Ok(psi) => {
                let h = psi.group().clone();
                let sign = h.weight(vec![], vec![1]).expect("Z/2");
                let want = FiniteCharacter::monomial(&h, sign, 1);
                if psi.is_finite() {
                    compare_finite(&want, psi.finite_part(), "reconstruction of the sign character")
                } else {
                    Outcome::fail("reconstruction is not finite")
                }
            }
            Err(e) => Outcome::Error(e),
        }
    });
    out.extend(rec.finish());

    let inst = Instance::bare("constant", &g).with("chi", [1]);
    let mut rec = Recorder::new("exact-sequence", &inst, cfg);
    rec.run("rejects-non-kernel", || {
        match invert_induction(&GenChar::from_finite(FiniteCharacter::one(&g)), &t) {
            Err(Error::NotPeriodic) => Outcome::pass(),
            Ok(_) => Outcome::fail("1 was accepted as periodic"),
            Err(e) => Outcome::Error(e),
        }
    });
    out.extend(rec.finish());
    out
}

fn default_modules(cfg: &VerifyConfig, random_plane: bool) -> Vec<(String, GModule)> {
    if let Some(v) = &cfg.module {
        return vec![("module".into(), v.clone())];
    }
    let g1 = CharacterGroup::torus(1);
    let mut out = vec![
        ("circle".to_string(), circle_module()),
        ("circle-squared".to_string(), GModule::from_free(&g1, &[&[1], &[1]]).expect("valid")),
        ("hexagonal".to_string(), hexagonal()),
    ];
    if random_plane {
        let mut s = Sampler::new(cfg.seed, 4);
        let g2 = CharacterGroup::torus(2);
        let ws = (0..4).map(|_| s.moving_weight(&g2, 3)).collect();
        out.push(("random-plane".into(), GModule::new(&g2, ws, 0).expect("moving")));
        out.push((
            "fixed-only".into(),
            GModule::new(&g1, vec![g1.zero()], 2).expect("zero weight"),
        ));
    }
    out
}

/// One representative `γ` per chamber of the moving weights, from the box
/// `[−3,3]ⁿ` in lexicographic order.
fn chamber_gammas(v: &GModule, limit: usize) -> Vec<PolarizingVector> {
    let n = v.group().free_rank();
    let moving = v.moving();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut x = vec![-3i64; n];
    loop {
        let beta = PolarizingVector::from_ints(&x);
        if !beta.is_zero() && admissible(&moving, &beta) {
            let signs: Vec<bool> = moving.weights().iter().map(|w| w.pair_int(&x) > 0).collect();
            if seen.insert(signs) {
                out.push(beta);
                if out.len() >= limit {
                    break;
                }
            }
        }
        let Some(i) = (0..n).rev().find(|&i| x[i] < 3) else {
            break;
        };
        x[i] += 1;
        for y in x.iter_mut().skip(i + 1) {
            *y = -3;
        }
    }
    out
}

/// Thom generators land in `𝓕_G(V)`, flag generators in `DM_G(V)` by
/// exact cancellation, and `DM ⊆ 𝓕` on the flag indices.
pub fn check_generators_membership(cfg: &VerifyConfig) -> Vec<Check> {
    let mut cases: Vec<(Instance, GModule, GeneratorTag)> = Vec::new();
    for (label, v) in default_modules(cfg, true) {
        for gamma in chamber_gammas(&v, cfg.flag_limit.max(1)) {
            let inst = Instance::new(format!("{label}/thom"), &v).with("gamma", vector_dto(&gamma));
            cases.push((inst, v.clone(), GeneratorTag::Thom(gamma)));
        }
        for (i, f) in enumerate_flags(&v, cfg.flag_limit).into_iter().enumerate() {
            let inst = Instance::new(format!("{label}/flag-{i}"), &v).with("flag", FlagDto::of(&f));
            cases.push((inst, v.clone(), GeneratorTag::Flag(f)));
        }
    }
    run_parallel(&cases, |(inst, v, tag)| {
        let mut rec = Recorder::new("generators-membership", inst, cfg);
        let idx = match index_kclass(&KClass::generator(v, tag.clone())) {
            Ok(x) => x,
            Err(e) => {
                rec.run("index", || Outcome::Error(e));
                return rec.finish();
            }
        };
        match tag {
            GeneratorTag::Thom(_) => rec.run("thom-in-f", || membership_outcome(in_f(&idx, v))),
            GeneratorTag::Flag(_) => {
                rec.run("flag-cancellation", || {
                    let hmin = minimal_stabilizer(v);
                    for h in delta_set(v) {
                        if h != hmin && !annihilated_by_cancellation(&idx, v, &h) {
                            return Outcome::fail(format!(
                                "Euler class of the stabilizer {:?} does not cancel",
                                h.perp_basis()
                            ));
                        }
                    }
                    Outcome::pass()
                });
                rec.run("flag-in-dm", || membership_outcome(in_dm(&idx, v)));
                rec.run("dm-in-f", || membership_outcome(in_f(&idx, v)));
            }
        }
        rec.finish()
    })
}

fn perp(h: &Subspace) -> Vec<Vec<i64>> {
    h.perp_basis().to_vec()
}

/// Flag indices of `V^𝔥` that are independent on `w`, greedily.
fn level_basis(sub: &GModule, limit: usize, w: &Window) -> Result<Vec<GenChar>, Error> {
    let mut kept: Vec<GenChar> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for f in enumerate_flags(sub, limit) {
        let idx = flag_index(sub, &f)?;
        let mut trial = rows.clone();
        trial.push(window_vector(&idx.truncate(w), w));
        if rank(&trial) == trial.len() {
            rows = trial;
            kept.push(idx);
        }
    }
    Ok(kept)
}

/// Images of a test basis of `⊕_𝔥 DM_G(V^𝔥)` under `𝒮_γ`, the mother
/// formula on all ordered stabilizer pairs, and compatibility of DM with
/// induction along `V = W ⊕ ℂ_χ`.
pub fn check_decomposition(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (label, v) in default_modules(cfg, false) {
        if cfg.module.is_none() && label == "circle-squared" {
            continue;
        }
        out.extend(decomposition_module(&label, &v, cfg));
    }
    out
}

fn decomposition_module(label: &str, v: &GModule, cfg: &VerifyConfig) -> Vec<Check> {
    let g = v.group().clone();
    let n = g.free_rank();
    let delta = delta_set(v);
    let base = Instance::new(format!("{label}/basis"), v);
    let w = match cfg.window_for(n) {
        Ok(w) => w,
        Err(e) => {
            let mut rec = Recorder::new("decomposition", &base, cfg);
            rec.run("window", || Outcome::Error(e));
            return rec.finish();
        }
    };
    let mut gammas = Vec::new();
    for h in &delta {
        match choose_gamma(v, h) {
            Ok(x) => gammas.push((h.clone(), x)),
            Err(e) => {
                let mut rec = Recorder::new("decomposition", &base, cfg);
                rec.run("gamma", || Outcome::Error(e));
                return rec.finish();
            }
        }
    }
    let base = base.with(
        "gammas",
        gammas
            .iter()
            .map(|(h, x)| (perp(h), vector_dto(x)))
            .collect::<Vec<_>>(),
    );
    let mut rec = Recorder::new("decomposition", &base, cfg).window(&w);

    // (i) images of a test basis
    let mut images: Vec<(Subspace, GenChar)> = Vec::new();
    let mut inputs: Vec<(Subspace, GModule, GenChar)> = Vec::new();
    for h in &delta {
        let sub = fixed_submodule(v, h);
        match level_basis(&sub, cfg.flag_limit, &w) {
            Ok(b) => inputs.extend(b.into_iter().map(|phi| (h.clone(), sub.clone(), phi))),
            Err(e) => rec.run("basis", || Outcome::Error(e)),
        }
    }
    let per_input: Vec<(Outcome, Outcome, Option<GenChar>)> = inputs
        .par_iter()
        .map(|(h, sub, phi)| {
            let input = membership_outcome(in_dm(phi, sub));
            match decomposition_map(&[(h.clone(), phi.clone())], v, &gammas) {
                Ok(img) => (input, membership_outcome(in_f(&img, v)), Some(img)),
                Err(e) => (input, Outcome::Error(e), None),
            }
        })
        .collect();
    for ((h, _, _), (input, in_f_outcome, img)) in inputs.iter().zip(per_input) {
        let tag = format!("{:?}", perp(h));
        rec.run(&format!("input-in-dm {tag}"), || input);
        rec.run(&format!("image-in-f {tag}"), || in_f_outcome);
        if let Some(img) = img {
            images.push((h.clone(), img));
        }
    }
    rec.run("independence", || {
        let rows: Vec<Vec<i64>> = images.iter().map(|(_, x)| window_vector(&x.truncate(&w), &w)).collect();
        let r = rank(&rows);
        if r == rows.len() {
            Outcome::Pass(Some(format!("{r} images, window rank {r}")))
        } else {
            Outcome::fail(format!("{} images but window rank {r}", rows.len()))
        }
    });
    rec.run("zero-assignment", || {
        let zeros: Vec<(Subspace, GenChar)> = delta.iter().map(|h| (h.clone(), GenChar::zero(&g))).collect();
        match decomposition_map(&zeros, v, &gammas) {
            Ok(img) => zero_outcome(is_zero(&img), "image of zero", |x| img.coefficient_at(x)),
            Err(e) => Outcome::Error(e),
        }
    });
    let mut out = rec.finish();

    // (ii) mother formula
    let mut phis = vec![FiniteCharacter::one(&g)];
    if n > 0 {
        let mut e1 = vec![0; n];
        e1[0] = 1;
        phis.push(FiniteCharacter::monomial(&g, g.free_weight(&e1), 1));
    }
    let mut pairs = Vec::new();
    for a in &delta {
        for (h, gamma) in &gammas {
            for p in &phis {
                pairs.push((a.clone(), h.clone(), gamma.clone(), p.clone()));
            }
        }
    }
    out.extend(run_parallel(&pairs, |(a, h, gamma, p)| {
        let inst = Instance::new(format!("{label}/mother"), v)
            .with("a", perp(a))
            .with("h", perp(h))
            .with("gamma", vector_dto(gamma))
            .with("phi", finite_dto(p));
        let mut rec = Recorder::new("decomposition", &inst, cfg).window(&w);
        rec.run("mother-formula", || {
            match mother_formula_check(v, a, h, gamma, &GenChar::from_finite(p.clone()), &w) {
                Ok(m) if m.passed() => match m.symbolic {
                    ZeroVerdict::ProvedZero => Outcome::pass(),
                    _ => Outcome::Pass(Some("window-equal".into())),
                },
                Ok(m) => match (m.symbolic, m.counterexample) {
                    (_, Some((mu, c))) => Outcome::mismatch(&mu, 0, c, "LHS - RHS"),
                    (ZeroVerdict::Unknown(r), None) => Outcome::Unknown(r),
                    (other, None) => Outcome::fail(format!("{other:?}")),
                },
                Err(e) => Outcome::Error(e),
            }
        });
        rec.finish()
    }));

    // (iii) induction along a weight
    out.extend(induction_compatibility(label, v, cfg));
    out
}

fn induction_compatibility(label: &str, v: &GModule, cfg: &VerifyConfig) -> Vec<Check> {
    let g = v.group();
    let mut chis = v.moving().weights().to_vec();
    chis.dedup();
    let mut out = Vec::new();
    for chi in chis {
        let inst = Instance::new(format!("{label}/induction"), v).with("chi", WeightDto::of(&chi));
        let mut rec = Recorder::new("decomposition", &inst, cfg);
        let q = match quotient_by_character(g, &chi) {
            Ok(q) => q,
            Err(e) => {
                rec.run("split", || Outcome::Error(e));
                out.extend(rec.finish());
                continue;
            }
        };
        let rest = v
            .difference(&v.with_weights(vec![chi.clone()]))
            .expect("chi is a weight of V");
        let projected: Vec<_> = rest.weights().iter().map(|x| q.project(x)).collect();
        if projected.iter().any(|x| x.has_zero_differential()) {
            rec.run("dm-iff", || Outcome::Skipped("a remaining weight is proportional to chi".into()));
            out.extend(rec.finish());
            continue;
        }
        let w = GModule::new(q.target(), projected, 0).expect("moving weights");
        let mut tests: Vec<(String, GenChar)> = Vec::new();
        for (i, f) in enumerate_flags(&w, 2).into_iter().enumerate() {
            match flag_index(&w, &f) {
                Ok(x) => tests.push((format!("flag-{i}"), x)),
                Err(e) => rec.run("dm-iff", || Outcome::Error(e)),
            }
        }
        tests.push(("one".into(), GenChar::from_finite(FiniteCharacter::one(q.target()))));
        for (name, phi) in tests {
            rec.run(&format!("dm-iff {name}"), || {
                let ind = match induction(&phi, &q) {
                    Ok(x) => x,
                    Err(e) => return Outcome::Error(e),
                };
                let below = in_dm(&phi, &w);
                let above = in_dm(&ind, v);
                match (&below, &above) {
                    (Membership::ProvedIn, Membership::ProvedIn) => Outcome::Pass(Some("both in".into())),
                    (Membership::ProvedOut { .. }, Membership::ProvedOut { .. }) => {
                        Outcome::Pass(Some("both out".into()))
                    }
                    (Membership::Unknown { .. }, _) | (_, Membership::Unknown { .. }) => {
                        Outcome::Unknown(format!("below: {below}; above: {above}"))
                    }
                    _ => Outcome::fail(format!("below: {below}; above: {above}")),
                }
            });
        }
        out.extend(rec.finish());
    }
    out
}
