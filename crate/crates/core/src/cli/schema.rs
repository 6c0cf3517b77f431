//! Serde types for problem files (`"version": "tkindex/1"`) and for JSON
//! output. Everything here is plain data; validation lives in
//! [`super::problem`].

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charring::FiniteCharacter;
use crate::error::Result;
use crate::genchar::GenChar;
use crate::ktheory::{GeneratorTag, KClass};
use crate::lattice::{CharacterGroup, Flag, GModule, PolarizingVector, Subspace, Weight};

pub const VERSION: &str = "tkindex/1";

/// A rational coordinate, written `"p/q"` (or `"p"`); bare integers are
/// accepted on input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coord(pub Rational64);

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Coord(Rational64::from_integer(i))),
            Raw::Str(s) => PolarizingVector::parse_coord(&s)
                .map(Coord)
                .ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}"))),
        }
    }
}

pub fn vector_dto(v: &PolarizingVector) -> Vec<Coord> {
    v.coords().iter().copied().map(Coord).collect()
}

pub fn vector_from(c: &[Coord]) -> PolarizingVector {
    PolarizingVector::new(c.iter().map(|x| x.0).collect())
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupDto {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

impl GroupDto {
    pub fn of(g: &CharacterGroup) -> Self {
        GroupDto {
            rank: g.free_rank(),
            torsion: g.torsion_orders().to_vec(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WeightDto {
    pub free: Vec<i64>,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

impl WeightDto {
    pub fn of(w: &Weight) -> Self {
        WeightDto {
            free: w.free().to_vec(),
            torsion: w.torsion().to_vec(),
        }
    }

    pub fn resolve(&self, g: &CharacterGroup) -> Result<Weight> {
        g.weight(self.free.clone(), self.torsion.clone())
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleDto {
    pub weights: Vec<WeightDto>,
    #[serde(default)]
    pub trivial_real_dim: usize,
}

impl ModuleDto {
    pub fn of(v: &GModule) -> Self {
        ModuleDto {
            weights: v.weights().iter().map(WeightDto::of).collect(),
            trivial_real_dim: v.trivial_real_dim(),
        }
    }

    pub fn resolve(&self, g: &CharacterGroup) -> Result<GModule> {
        let ws = self.weights.iter().map(|w| w.resolve(g)).collect::<Result<Vec<_>>>()?;
        GModule::new(g, ws, self.trivial_real_dim)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MonomialDto {
    pub coeff: i64,
    pub weight: WeightDto,
}

pub fn finite_dto(p: &FiniteCharacter) -> Vec<MonomialDto> {
    p.graded_terms()
        .into_iter()
        .map(|(w, c)| MonomialDto {
            coeff: c,
            weight: WeightDto::of(w),
        })
        .collect()
}

pub fn finite_from(g: &CharacterGroup, ms: &[MonomialDto]) -> Result<FiniteCharacter> {
    let mut out = FiniteCharacter::zero(g);
    for m in ms {
        out.add_term(m.weight.resolve(g)?, m.coeff);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub coeff: i64,
    pub numerator: WeightDto,
    pub denominators: Vec<WeightDto>,
    pub witness: Vec<Coord>,
}

/// Serialized generalized character: polarized terms plus a finite part.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq, Default)]
pub struct GenCharDto {
    #[serde(default)]
    pub terms: Vec<TermDto>,
    #[serde(default)]
    pub finite: Vec<MonomialDto>,
}

impl GenCharDto {
    pub fn of(phi: &GenChar) -> Self {
        GenCharDto {
            terms: phi
                .terms()
                .iter()
                .map(|t| TermDto {
                    coeff: t.coeff(),
                    numerator: WeightDto::of(t.numerator()),
                    denominators: t.denominators().iter().map(WeightDto::of).collect(),
                    witness: vector_dto(t.witness()),
                })
                .collect(),
            finite: finite_dto(phi.finite_part()),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FlagDto {
    pub blocks: Vec<Vec<WeightDto>>,
    pub betas: Vec<Vec<Coord>>,
}

impl FlagDto {
    pub fn of(f: &Flag) -> Self {
        FlagDto {
            blocks: f
                .blocks
                .iter()
                .map(|b| b.weights().iter().map(WeightDto::of).collect())
                .collect(),
            betas: f.betas.iter().map(vector_dto).collect(),
        }
    }

    pub fn resolve(&self, v: &GModule) -> Result<Flag> {
        let g = v.group();
        let blocks = self
            .blocks
            .iter()
            .map(|b| Ok(v.with_weights(b.iter().map(|w| w.resolve(g)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Flag {
            blocks,
            betas: self.betas.iter().map(|b| vector_from(b)).collect(),
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TagDto {
    Thom(Vec<Coord>),
    Flag(FlagDto),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComboDto {
    pub tag: TagDto,
    pub coeff: Vec<MonomialDto>,
}

/// `{"module": …, "combo": [{"tag": {"thom": β} | {"flag": …}, "coeff": […]}]}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct KClassDto {
    pub module: ModuleDto,
    pub combo: Vec<ComboDto>,
}

impl KClassDto {
    pub fn of(k: &KClass) -> Self {
        KClassDto {
            module: ModuleDto::of(&k.module),
            combo: k
                .combo
                .iter()
                .map(|(tag, c)| ComboDto {
                    tag: match tag {
                        GeneratorTag::Thom(b) => TagDto::Thom(vector_dto(b)),
                        GeneratorTag::Flag(f) => TagDto::Flag(FlagDto::of(f)),
                    },
                    coeff: finite_dto(c),
                })
                .collect(),
        }
    }

    pub fn resolve(&self, g: &CharacterGroup) -> Result<KClass> {
        let module = self.module.resolve(g)?;
        let combo = self
            .combo
            .iter()
            .map(|c| {
                let tag = match &c.tag {
                    TagDto::Thom(b) => GeneratorTag::Thom(vector_from(b)),
                    TagDto::Flag(f) => GeneratorTag::Flag(f.resolve(&module)?),
                };
                Ok((tag, finite_from(g, &c.coeff)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KClass { module, combo })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SubspaceDto {
    pub perp: Vec<Vec<i64>>,
    pub algebra: Vec<Vec<i64>>,
    pub dim: usize,
}

impl SubspaceDto {
    pub fn of(h: &Subspace) -> Self {
        SubspaceDto {
            perp: h.perp_basis().to_vec(),
            algebra: h.algebra_basis().to_vec(),
            dim: h.dim(),
        }
    }
}

/// Generalized character expressions.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ExprDto {
    Literal(GenCharDto),
    Ref {
        name: String,
    },
    /// `x^numerator / ∏(1 − x^d)`, expanded with a witness found automatically.
    Series {
        numerator: WeightDto,
        denominators: Vec<WeightDto>,
    },
    PolarizedInverse {
        module: String,
        beta: Vec<Coord>,
    },
    IndexThom {
        module: String,
        beta: Vec<Coord>,
    },
    SigmaDbar {
        module: String,
        beta: Vec<Coord>,
    },
    /// A flag given explicitly, or the `index`-th enumerated flag.
    FlagIndex {
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        flag: Option<FlagDto>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
    },
    Mul {
        finite: Vec<MonomialDto>,
        of: Box<ExprDto>,
    },
    Product {
        factors: Vec<ExprDto>,
    },
    Sum {
        summands: Vec<ExprDto>,
    },
    Scale {
        by: i64,
        of: Box<ExprDto>,
    },
    Restrict {
        from: String,
        to: String,
        of: Box<ExprDto>,
    },
    /// `of` is read over the quotient `Ĝ/ℤχ`.
    Induction {
        chi: WeightDto,
        of: Box<ExprDto>,
    },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum GenCharRef {
    Name(String),
    Inline(ExprDto),
}

/// A stabilizer, by position in the `delta` listing or by annihilator basis.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum StabilizerRef {
    Index(usize),
    Perp { perp: Vec<Vec<i64>> },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDto {
    pub stabilizer: StabilizerRef,
    pub gen_char: GenCharRef,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GammaDto {
    pub stabilizer: StabilizerRef,
    pub gamma: Vec<Coord>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "cmd", rename_all = "kebab-case")]
pub enum QueryDto {
    Delta {
        module: String,
    },
    IndexThom {
        module: String,
        beta: Vec<Coord>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    IndexFlag {
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        flag: Option<FlagDto>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    Coeff {
        gen_char: GenCharRef,
        at: WeightDto,
    },
    Truncate {
        gen_char: GenCharRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    CheckDm {
        module: String,
        gen_char: GenCharRef,
    },
    CheckF {
        module: String,
        gen_char: GenCharRef,
    },
    Decompose {
        module: String,
        assignments: Vec<AssignmentDto>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        gammas: Vec<GammaDto>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    Restrict {
        gen_char: GenCharRef,
        from: String,
        to: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    Induce {
        chi: WeightDto,
        gen_char: GenCharRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
    Verify {
        suite: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chi: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
    },
}

impl QueryDto {
    pub fn name(&self) -> &'static str {
        match self {
            QueryDto::Delta { .. } => "delta",
            QueryDto::IndexThom { .. } => "index-thom",
            QueryDto::IndexFlag { .. } => "index-flag",
            QueryDto::Coeff { .. } => "coeff",
            QueryDto::Truncate { .. } => "truncate",
            QueryDto::CheckDm { .. } => "check-dm",
            QueryDto::CheckF { .. } => "check-f",
            QueryDto::Decompose { .. } => "decompose",
            QueryDto::Restrict { .. } => "restrict",
            QueryDto::Induce { .. } => "induce",
            QueryDto::Verify { .. } => "verify",
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: String,
    pub group: GroupDto,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDto>,
    #[serde(default)]
    pub gen_chars: BTreeMap<String, ExprDto>,
    #[serde(default)]
    pub queries: Vec<QueryDto>,
}
