//! Evaluation of generalized character expressions against a problem.

use crate::error::{Error, Result};
use crate::genchar::{
    index_thom, induction, mul_finite, mul_genchar, polarized_inverse, sigma_dbar_index, simplify, GenChar,
    PolarizedTerm,
};
use crate::ktheory::{flag_index, restrict_index};
use crate::lattice::{delta_set, enumerate_flags, quotient_by_character, CharacterGroup, Flag, GModule, Subspace};

use super::problem::Problem;
use super::schema::{finite_from, vector_from, ExprDto, FlagDto, GenCharDto, GenCharRef, StabilizerRef};

const MAX_DEPTH: usize = 64;

pub struct Evaluator<'a> {
    problem: &'a Problem,
    /// Cap on enumerated flags.
    limit: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, limit: usize) -> Self {
        Evaluator { problem, limit }
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn module(&self, name: &str) -> Result<&GModule> {
        self.problem.module(name)
    }

    pub fn gen_char(&self, r: &GenCharRef, g: &CharacterGroup) -> Result<GenChar> {
        match r {
            GenCharRef::Name(n) => self.eval(&ExprDto::Ref { name: n.clone() }, g),
            GenCharRef::Inline(e) => self.eval(e, g),
        }
    }

    pub fn eval(&self, e: &ExprDto, g: &CharacterGroup) -> Result<GenChar> {
        self.eval_at(e, g, 0)
    }

    /// The flag named by an explicit block list or by enumeration position.
    pub fn flag(&self, v: &GModule, flag: &Option<FlagDto>, index: Option<usize>) -> Result<Flag> {
        match (flag, index) {
            (Some(f), None) => f.resolve(v),
            (None, k) => {
                let k = k.unwrap_or(0);
                enumerate_flags(v, self.limit.max(k + 1))
                    .into_iter()
                    .nth(k)
                    .ok_or_else(|| Error::Invariant {
                        name: "flag".into(),
                        reason: format!("module has no flag with index {k}"),
                    })
            }
            (Some(_), Some(_)) => Err(Error::Invariant {
                name: "flag".into(),
                reason: "give exactly one of flag and index".into(),
            }),
        }
    }

    pub fn stabilizer(&self, v: &GModule, s: &StabilizerRef) -> Result<Subspace> {
        match s {
            StabilizerRef::Index(i) => delta_set(v).into_iter().nth(*i).ok_or_else(|| Error::Invariant {
                name: "stabilizer".into(),
                reason: format!("index {i} out of range"),
            }),
            StabilizerRef::Perp { perp } => Ok(Subspace::from_perp_span(v.group().free_rank(), perp)),
        }
    }

    fn module_over(&self, name: &str, g: &CharacterGroup) -> Result<&GModule> {
        let v = self.module(name)?;
        if v.group() != g {
            return Err(Error::InvalidGroup(format!("module {name} does not live over a quotient group")));
        }
        Ok(v)
    }

    fn eval_at(&self, e: &ExprDto, g: &CharacterGroup, depth: usize) -> Result<GenChar> {
        if depth > MAX_DEPTH {
            return Err(Error::Invariant {
                name: "gen_chars".into(),
                reason: "expression nesting too deep".into(),
            });
        }
        let sub = |x: &ExprDto| self.eval_at(x, g, depth + 1);
        match e {
            ExprDto::Literal(lit) => literal(lit, g),
            ExprDto::Ref { name } => {
                let body = self.problem.file.gen_chars.get(name).ok_or_else(|| Error::Invariant {
                    name: name.clone(),
                    reason: "no gen_char with this name".into(),
                })?;
                sub(body)
            }
            ExprDto::Series {
                numerator,
                denominators,
            } => {
                let num = numerator.resolve(g)?;
                let dens = denominators.iter().map(|d| d.resolve(g)).collect::<Result<Vec<_>>>()?;
                GenChar::series(g, num, dens)
            }
            ExprDto::PolarizedInverse { module, beta } => {
                polarized_inverse(self.module_over(module, g)?, &vector_from(beta))
            }
            ExprDto::IndexThom { module, beta } => index_thom(self.module_over(module, g)?, &vector_from(beta)),
            ExprDto::SigmaDbar { module, beta } => {
                sigma_dbar_index(self.module_over(module, g)?, &vector_from(beta))
            }
            ExprDto::FlagIndex { module, flag, index } => {
                let v = self.module_over(module, g)?;
                flag_index(v, &self.flag(v, flag, *index)?)
            }
            ExprDto::Mul { finite, of } => Ok(mul_finite(&finite_from(g, finite)?, &sub(of)?)),
            ExprDto::Product { factors } => {
                let mut acc = GenChar::from_finite(crate::charring::FiniteCharacter::one(g));
                for f in factors {
                    acc = mul_genchar(&acc, &sub(f)?)?;
                }
                Ok(acc)
            }
            ExprDto::Sum { summands } => {
                let mut acc = GenChar::zero(g);
                for s in summands {
                    acc = acc.add(&sub(s)?);
                }
                Ok(simplify(&acc))
            }
            ExprDto::Scale { by, of } => Ok(sub(of)?.scalar_mul(*by)),
            ExprDto::Restrict { from, to, of } => {
                restrict_index(&sub(of)?, self.module_over(from, g)?, self.module_over(to, g)?)
            }
            ExprDto::Induction { chi, of } => {
                let q = quotient_by_character(g, &chi.resolve(g)?)?;
                let inner = self.eval_at(of, q.target(), depth + 1)?;
                induction(&inner, &q)
            }
        }
    }
}

fn literal(lit: &GenCharDto, g: &CharacterGroup) -> Result<GenChar> {
    let terms = lit
        .terms
        .iter()
        .map(|t| {
            PolarizedTerm::new(
                t.coeff,
                t.numerator.resolve(g)?,
                t.denominators.iter().map(|d| d.resolve(g)).collect::<Result<Vec<_>>>()?,
                vector_from(&t.witness),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = GenChar::from_finite(finite_from(g, &lit.finite)?);
    for t in terms {
        out = out.add(&GenChar::from_term(g, t));
    }
    Ok(out)
}
