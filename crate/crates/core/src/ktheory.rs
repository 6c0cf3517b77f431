//! Generator classes of `K⁰_G(T*_G V)` through their indices, the
//! restriction morphism at index level, and membership in the
//! Dahmen–Micchelli modules `DM_G(V) ⊆ 𝓕_G(V)`.

use std::fmt;

use rayon::prelude::*;

use crate::charring::FiniteCharacter;
use crate::error::{Error, Result};
use crate::genchar::{
    index_thom, is_zero, mul_finite, mul_genchar, polarized_inverse, projected_support_finite, sigma_dbar_index,
    simplify, GenChar, SupportVerdict, Window, ZeroVerdict,
};
use crate::lattice::{
    choose_gamma, delta_set, fixed_submodule, minimal_stabilizer, quotient_module, validate_flag, Flag, GModule,
    PolarizingVector, Subspace, Weight,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorTag {
    /// `Thom_γ(V/V^𝔤) ⊙ Bott(V^𝔤_ℂ)`.
    Thom(PolarizingVector),
    /// The product of Cauchy–Riemann classes along a flag.
    Flag(Flag),
}

/// An `R(G)`-combination of generator classes, identified with its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    pub module: GModule,
    pub combo: Vec<(GeneratorTag, FiniteCharacter)>,
}

impl KClass {
    pub fn generator(module: &GModule, tag: GeneratorTag) -> Self {
        KClass {
            module: module.clone(),
            combo: vec![(tag, FiniteCharacter::one(module.group()))],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    ProvedIn,
    /// The first stabilizer (in `Δ_G(V)` order) where a condition definitely
    /// fails, with the reason.
    ProvedOut { at: Subspace, reason: String },
    Unknown { at: Subspace, reason: String },
}

impl Membership {
    pub fn label(&self) -> &'static str {
        match self {
            Membership::ProvedIn => "ProvedIn",
            Membership::ProvedOut { .. } => "ProvedOut",
            Membership::Unknown { .. } => "Unknown",
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::ProvedIn => write!(f, "ProvedIn"),
            Membership::ProvedOut { at, reason } => write!(f, "ProvedOut at {:?}: {reason}", at.perp_basis()),
            Membership::Unknown { at, reason } => write!(f, "Unknown at {:?}: {reason}", at.perp_basis()),
        }
    }
}

/// Index of the flag class: `∏_k (Index Thom_{−β_k}(V_k) − Index Thom_{β_k}(V_k))`.
pub fn flag_index(v: &GModule, flag: &Flag) -> Result<GenChar> {
    if !validate_flag(v, flag)? {
        return Err(Error::Invariant {
            name: "flag".into(),
            reason: "flag conditions fail".into(),
        });
    }
    let mut acc = GenChar::from_finite(FiniteCharacter::one(v.group()));
    for (block, beta) in flag.blocks.iter().zip(&flag.betas) {
        acc = mul_genchar(&acc, &sigma_dbar_index(block, beta)?)?;
    }
    Ok(acc)
}

/// Index of a generator: `[∧•(V/V^𝔤)‾]^{-1}_γ` for Thom classes (the Bott
/// factor has index 1), the flag product otherwise.
pub fn generator_index(v: &GModule, tag: &GeneratorTag) -> Result<GenChar> {
    match tag {
        GeneratorTag::Thom(gamma) => index_thom(v, gamma),
        GeneratorTag::Flag(flag) => flag_index(v, flag),
    }
}

pub fn index_kclass(kappa: &KClass) -> Result<GenChar> {
    let mut acc = GenChar::zero(kappa.module.group());
    for (tag, coeff) in &kappa.combo {
        let idx = generator_index(&kappa.module, tag)?;
        acc = acc.add(&mul_finite(coeff, &idx));
    }
    Ok(simplify(&acc))
}

/// `𝐑` at index level: multiplication by `∧•(V/W)‾`.
pub fn restrict_index(phi: &GenChar, v: &GModule, w: &GModule) -> Result<GenChar> {
    let rest = v
        .difference(w)
        .ok_or_else(|| Error::NotSubmodule(format!("{w:?} is not contained in {v:?}")))?;
    Ok(mul_finite(&FiniteCharacter::wedge_conj(&rest), phi))
}

/// `Φ ∈ ⟨R^{-∞}(G/H)⟩`.
pub fn in_langle_rgh(phi: &GenChar, h: &Subspace) -> SupportVerdict {
    projected_support_finite(phi, h)
}

/// `∧•(V/V^𝔥)‾ ⊗ Φ`.
pub fn euler_product(phi: &GenChar, v: &GModule, h: &Subspace) -> GenChar {
    mul_finite(&FiniteCharacter::wedge_conj(&quotient_module(v, h)), phi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Part {
    Ok,
    Out(String),
    Unknown(String),
}

fn conjoin(parts: Vec<(Subspace, Part)>) -> Membership {
    if let Some((at, Part::Out(reason))) = parts.iter().find(|(_, p)| matches!(p, Part::Out(_))) {
        return Membership::ProvedOut {
            at: at.clone(),
            reason: reason.clone(),
        };
    }
    if let Some((at, Part::Unknown(reason))) = parts.iter().find(|(_, p)| matches!(p, Part::Unknown(_))) {
        return Membership::Unknown {
            at: at.clone(),
            reason: reason.clone(),
        };
    }
    Membership::ProvedIn
}

fn zero_part(v: ZeroVerdict) -> Part {
    match v {
        ZeroVerdict::ProvedZero => Part::Ok,
        ZeroVerdict::ProvedNonzero(w) => Part::Out(format!("nonzero coefficient at {w}")),
        ZeroVerdict::Unknown(r) => Part::Unknown(r),
    }
}

fn support_part(v: SupportVerdict) -> Part {
    match v {
        SupportVerdict::ProvedFinite => Part::Ok,
        SupportVerdict::ProvedInfinite { base, direction } => {
            Part::Out(format!("infinite projected support along {base} + k·{direction}"))
        }
        SupportVerdict::Unknown(r) => Part::Unknown(r),
    }
}

/// `Φ ∈ DM_G(V)`: `∧•(V/V^𝔥)‾ ⊗ Φ = 0` for every `𝔥 ≠ 𝔥_min` in `Δ_G(V)`
/// and `Φ ∈ ⟨R^{-∞}(G/H_min)⟩`.
pub fn in_dm(phi: &GenChar, v: &GModule) -> Membership {
    let hmin = minimal_stabilizer(v);
    let parts: Vec<(Subspace, Part)> = delta_set(v)
        .into_par_iter()
        .map(|h| {
            let part = if h == hmin {
                support_part(projected_support_finite(phi, &h))
            } else {
                zero_part(is_zero(&euler_product(phi, v, &h)))
            };
            (h, part)
        })
        .collect();
    conjoin(parts)
}

/// `Φ ∈ 𝓕_G(V)`: `∧•(V/V^𝔥)‾ ⊗ Φ ∈ ⟨R^{-∞}(G/H)⟩` for every `𝔥 ∈ Δ_G(V)`.
pub fn in_f(phi: &GenChar, v: &GModule) -> Membership {
    let parts: Vec<(Subspace, Part)> = delta_set(v)
        .into_par_iter()
        .map(|h| {
            let part = support_part(projected_support_finite(&euler_product(phi, v, &h), &h));
            (h, part)
        })
        .collect();
    conjoin(parts)
}

/// Whether `∧•(V/V^𝔥)‾ ⊗ Φ` vanishes by exact cancellation alone (no
/// common-denominator normalization).
pub fn annihilated_by_cancellation(phi: &GenChar, v: &GModule, h: &Subspace) -> bool {
    let p = euler_product(phi, v, h);
    p.is_finite() && p.finite_part().is_zero()
}

fn admissible_gamma(v: &GModule, h: &Subspace, gamma: &PolarizingVector) -> Result<()> {
    if !h.contains_vector(gamma) {
        return Err(Error::GammaNotAdmissible(format!("{gamma:?} does not lie in the stabilizer")));
    }
    if let Some(w) = quotient_module(v, h).weights().iter().find(|w| w.pair(gamma) == 0.into()) {
        return Err(Error::GammaNotAdmissible(format!("{gamma:?} vanishes on weight {w}")));
    }
    Ok(())
}

/// `[∧•(V/V^𝔥)‾]^{-1}_{γ_𝔥}`.
pub fn stabilizer_inverse(v: &GModule, h: &Subspace, gamma: &PolarizingVector) -> Result<GenChar> {
    admissible_gamma(v, h, gamma)?;
    polarized_inverse(&quotient_module(v, h).conjugate(), gamma)
}

/// `𝒮_γ(⊕ Φ_𝔥) = Σ_𝔥 [∧•(V/V^𝔥)‾]^{-1}_{γ_𝔥} ⊗ Φ_𝔥`. Missing `γ_𝔥` are
/// filled in by [`choose_gamma`].
pub fn decomposition_map(
    assignments: &[(Subspace, GenChar)],
    v: &GModule,
    gammas: &[(Subspace, PolarizingVector)],
) -> Result<GenChar> {
    let delta = delta_set(v);
    let mut acc = GenChar::zero(v.group());
    for (h, phi) in assignments {
        if !delta.contains(h) {
            return Err(Error::Invariant {
                name: "decomposition".into(),
                reason: format!("{:?} is not a stabilizer of the module", h.perp_basis()),
            });
        }
        let gamma = match gammas.iter().find(|(k, _)| k == h) {
            Some((_, g)) => g.clone(),
            None => choose_gamma(v, h)?,
        };
        let inv = stabilizer_inverse(v, h, &gamma)?;
        acc = acc.add(&mul_genchar(&inv, phi)?);
    }
    Ok(simplify(&acc))
}

/// Outcome of one instance of the mother formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotherCheck {
    pub symbolic: ZeroVerdict,
    pub window_equal: bool,
    /// A weight where the two sides differ, with the coefficient of
    /// `LHS − RHS` there.
    pub counterexample: Option<(Weight, i64)>,
}

impl MotherCheck {
    pub fn passed(&self) -> bool {
        self.symbolic == ZeroVerdict::ProvedZero
            || (self.window_equal && !matches!(self.symbolic, ZeroVerdict::ProvedNonzero(_)))
    }
}

/// `∧•(V/V^𝔞)‾ ⊗ [∧•(V/V^𝔥)‾]^{-1}_{γ_𝔥} ⊗ Φ` against
/// `∧•(V^𝔥/V^{𝔥+𝔞})‾ ⊗ [∧•(V^𝔞/V^{𝔥+𝔞})‾]^{-1}_{γ_𝔥} ⊗ Φ`.
pub fn mother_formula_check(
    v: &GModule,
    a: &Subspace,
    h: &Subspace,
    gamma_h: &PolarizingVector,
    phi: &GenChar,
    w: &Window,
) -> Result<MotherCheck> {
    let lhs = mul_finite(
        &FiniteCharacter::wedge_conj(&quotient_module(v, a)),
        &mul_genchar(&stabilizer_inverse(v, h, gamma_h)?, phi)?,
    );
    let ha = h.sum(a);
    let v_h = fixed_submodule(v, h);
    let v_a = fixed_submodule(v, a);
    let v_ha = fixed_submodule(v, &ha);
    let left = v_h.difference(&v_ha).expect("V^(h+a) ⊆ V^h");
    let right = v_a.difference(&v_ha).expect("V^(h+a) ⊆ V^a");
    let inv = polarized_inverse(&right.conjugate(), gamma_h)?;
    let rhs = mul_finite(&FiniteCharacter::wedge_conj(&left), &mul_genchar(&inv, phi)?);
    let diff = lhs.sub(&rhs);
    let symbolic = is_zero(&diff);
    let on_window = diff.truncate(w);
    let counterexample = match &symbolic {
        ZeroVerdict::ProvedNonzero(mu) => Some((mu.clone(), diff.coefficient_at(mu))),
        _ => on_window.graded_terms().first().map(|(mu, c)| ((*mu).clone(), *c)),
    };
    Ok(MotherCheck {
        symbolic,
        window_equal: on_window.is_zero(),
        counterexample,
    })
}
