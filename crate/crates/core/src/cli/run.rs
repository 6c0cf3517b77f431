//! Query execution and output rendering.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::charring::FiniteCharacter;
use crate::error::{Error, Result};
use crate::genchar::{index_thom, induction, GenChar, Window};
use crate::ktheory::{decomposition_map, flag_index, in_dm, in_f, restrict_index, Membership};
use crate::lattice::{delta_set, minimal_stabilizer, quotient_by_character, Subspace, Weight};
use crate::verify::{run_suite, Report, VerifyConfig, DEFAULT_WINDOW};

use super::eval::Evaluator;
use super::problem::Problem;
use super::schema::{finite_dto, vector_from, ExprDto, GenCharDto, QueryDto, SubspaceDto, WeightDto};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "pretty" => Ok(Format::Pretty),
            other => Err(format!("unknown format {other:?} (json, text, pretty)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub format: Format,
    /// Used by queries that do not name a window.
    pub window: Option<String>,
    pub seed: u64,
    pub limit: usize,
    pub trials: Option<usize>,
    pub parallel: bool,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            format: Format::Json,
            window: None,
            seed: 0,
            limit: 8,
            trials: None,
            parallel: false,
            timing: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Answer {
    Delta { stabilizers: Vec<Subspace>, minimal: usize },
    Symbolic(GenChar),
    Truncation { window: Window, values: FiniteCharacter },
    Coefficient { at: Weight, value: i64 },
    Membership(Membership),
    Report(Report),
}

#[derive(Clone, Debug)]
pub struct QueryOutcome {
    pub index: usize,
    pub cmd: &'static str,
    pub result: Result<Answer>,
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Runs every query of the problem; results keep declaration order.
pub fn run_queries(problem: &Problem, opts: &RunOptions) -> Vec<QueryOutcome> {
    let ev = Evaluator::new(problem, opts.limit);
    let one = |(i, q): (usize, &QueryDto)| QueryOutcome {
        index: i,
        cmd: q.name(),
        result: answer(&ev, q, opts),
    };
    let queries = problem.file.queries.iter().enumerate();
    if opts.parallel {
        queries.collect::<Vec<_>>().into_par_iter().map(one).collect()
    } else {
        queries.map(one).collect()
    }
}

pub fn exit_code(outcomes: &[QueryOutcome]) -> i32 {
    if outcomes.iter().any(|o| o.result.is_err()) {
        EXIT_COMPUTE
    } else if outcomes
        .iter()
        .any(|o| matches!(&o.result, Ok(Answer::Report(r)) if !r.passed()))
    {
        EXIT_VERIFY
    } else {
        EXIT_OK
    }
}

fn window_of(ev: &Evaluator, own: &Option<String>, opts: &RunOptions) -> Result<Option<Window>> {
    own.as_ref()
        .or(opts.window.as_ref())
        .map(|s| Window::parse(s, ev.problem().group.free_rank()))
        .transpose()
}

fn series_answer(phi: GenChar, window: Option<Window>) -> Answer {
    match window {
        Some(w) => Answer::Truncation {
            values: phi.truncate(&w),
            window: w,
        },
        None => Answer::Symbolic(phi),
    }
}

fn answer(ev: &Evaluator, q: &QueryDto, opts: &RunOptions) -> Result<Answer> {
    let g = &ev.problem().group;
    match q {
        QueryDto::Delta { module } => {
            let v = ev.module(module)?;
            let stabilizers = delta_set(v);
            let hmin = minimal_stabilizer(v);
            let minimal = stabilizers.iter().position(|h| *h == hmin).unwrap_or(0);
            Ok(Answer::Delta { stabilizers, minimal })
        }
        QueryDto::IndexThom { module, beta, window } => {
            let phi = index_thom(ev.module(module)?, &vector_from(beta))?;
            Ok(series_answer(phi, window_of(ev, window, opts)?))
        }
        QueryDto::IndexFlag {
            module,
            flag,
            index,
            window,
        } => {
            let v = ev.module(module)?;
            let phi = flag_index(v, &ev.flag(v, flag, *index)?)?;
            Ok(series_answer(phi, window_of(ev, window, opts)?))
        }
        QueryDto::Coeff { gen_char, at } => {
            let phi = ev.gen_char(gen_char, g)?;
            let at = at.resolve(g)?;
            Ok(Answer::Coefficient {
                value: phi.coefficient_at(&at),
                at,
            })
        }
        QueryDto::Truncate { gen_char, window } => {
            let phi = ev.gen_char(gen_char, g)?;
            let w = window_of(ev, window, opts)?
                .unwrap_or_else(|| Window::cube(g.free_rank(), DEFAULT_WINDOW.0, DEFAULT_WINDOW.1));
            Ok(series_answer(phi, Some(w)))
        }
        QueryDto::CheckDm { module, gen_char } => {
            Ok(Answer::Membership(in_dm(&ev.gen_char(gen_char, g)?, ev.module(module)?)))
        }
        QueryDto::CheckF { module, gen_char } => {
            Ok(Answer::Membership(in_f(&ev.gen_char(gen_char, g)?, ev.module(module)?)))
        }
        QueryDto::Decompose {
            module,
            assignments,
            gammas,
            window,
        } => {
            let v = ev.module(module)?;
            let assigned = assignments
                .iter()
                .map(|a| Ok((ev.stabilizer(v, &a.stabilizer)?, ev.gen_char(&a.gen_char, g)?)))
                .collect::<Result<Vec<_>>>()?;
            let gammas = gammas
                .iter()
                .map(|x| Ok((ev.stabilizer(v, &x.stabilizer)?, vector_from(&x.gamma))))
                .collect::<Result<Vec<_>>>()?;
            let phi = decomposition_map(&assigned, v, &gammas)?;
            Ok(series_answer(phi, window_of(ev, window, opts)?))
        }
        QueryDto::Restrict {
            gen_char,
            from,
            to,
            window,
        } => {
            let phi = restrict_index(&ev.gen_char(gen_char, g)?, ev.module(from)?, ev.module(to)?)?;
            Ok(series_answer(phi, window_of(ev, window, opts)?))
        }
        QueryDto::Induce { chi, gen_char, window } => {
            let quotient = quotient_by_character(g, &chi.resolve(g)?)?;
            let phi = induction(&ev.gen_char(gen_char, quotient.target())?, &quotient)?;
            Ok(series_answer(phi, window_of(ev, window, opts)?))
        }
        QueryDto::Verify {
            suite,
            seed,
            trials,
            chi,
            module,
            limit,
            window,
        } => {
            let cfg = VerifyConfig {
                seed: seed.unwrap_or(opts.seed),
                trials: trials.or(opts.trials),
                window: window.clone(),
                chi: chi.clone(),
                module: module.as_ref().map(|m| ev.module(m).cloned()).transpose()?,
                flag_limit: limit.unwrap_or(opts.limit),
                timing: opts.timing,
            };
            Ok(Answer::Report(run_suite(suite, &cfg)?))
        }
    }
}

/// `c * x^[λ] / ((1 - x^[α])…) {ξ=…}` terms, then the finite part.
pub fn render_symbolic(phi: &GenChar) -> String {
    let mut parts: Vec<String> = phi
        .terms()
        .iter()
        .map(|t| {
            let dens: String = t.denominators().iter().map(|d| format!("(1 - x^{d})")).collect();
            format!(
                "{} * x^{} / ({dens}) {{ξ=({})}}",
                t.coeff(),
                t.numerator(),
                t.witness().coord_strings().join(",")
            )
        })
        .collect();
    if !phi.finite_part().is_zero() || parts.is_empty() {
        parts.push(phi.finite_part().render_text());
    }
    parts.join(" + ")
}

pub fn answer_json(a: &Answer) -> Value {
    match a {
        Answer::Delta { stabilizers, minimal } => json!({
            "stabilizers": stabilizers.iter().map(SubspaceDto::of).collect::<Vec<_>>(),
            "minimal": minimal,
        }),
        Answer::Symbolic(phi) => json!({ "gen_char": ExprDto::Literal(GenCharDto::of(phi)) }),
        Answer::Truncation { window, values } => json!({
            "window": window.render(),
            "terms": finite_dto(values),
        }),
        Answer::Coefficient { at, value } => json!({ "at": WeightDto::of(at), "value": value }),
        Answer::Membership(m) => match m {
            Membership::ProvedIn => json!({ "verdict": m.label() }),
            Membership::ProvedOut { at, reason } | Membership::Unknown { at, reason } => json!({
                "verdict": m.label(),
                "at": SubspaceDto::of(at),
                "reason": reason,
            }),
        },
        Answer::Report(r) => json!({
            "passed": r.passed(),
            "counts": {
                "pass": r.count(crate::verify::Verdict::Pass),
                "fail": r.count(crate::verify::Verdict::Fail),
                "unknown": r.count(crate::verify::Verdict::Unknown),
                "skipped": r.count(crate::verify::Verdict::Skipped),
                "error": r.count(crate::verify::Verdict::Error),
            },
            "checks": r.checks,
        }),
    }
}

pub fn answer_text(a: &Answer, format: Format) -> String {
    match a {
        Answer::Delta { stabilizers, minimal } => {
            let mut s = String::new();
            for (i, h) in stabilizers.iter().enumerate() {
                s.push_str(&format!(
                    "{i}: dim {} perp {:?}{}\n",
                    h.dim(),
                    h.perp_basis(),
                    if i == *minimal { " (minimal)" } else { "" }
                ));
            }
            s.trim_end().to_string()
        }
        Answer::Symbolic(phi) => render_symbolic(phi),
        Answer::Truncation { values, .. } => match format {
            Format::Pretty => values.render_pretty(),
            _ => values.render_text(),
        },
        Answer::Coefficient { value, .. } => value.to_string(),
        Answer::Membership(m) => m.to_string(),
        Answer::Report(r) => r.render_text().trim_end().to_string(),
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string() })
}

/// Rendered output: what goes to stdout and what goes to stderr.
pub fn render(outcomes: &[QueryOutcome], format: Format) -> (String, String) {
    let mut out = String::new();
    let mut err = String::new();
    let headed = outcomes.len() > 1;
    for o in outcomes {
        match format {
            Format::Json => {
                let line = match &o.result {
                    Ok(a) => json!({ "query": o.index, "cmd": o.cmd, "result": answer_json(a) }),
                    Err(e) => json!({ "query": o.index, "cmd": o.cmd, "error": error_json(e) }),
                };
                out.push_str(&line.to_string());
                out.push('\n');
            }
            Format::Text | Format::Pretty => match &o.result {
                Ok(a) => {
                    if headed {
                        out.push_str(&format!("# query {} {}\n", o.index, o.cmd));
                    }
                    out.push_str(&answer_text(a, format));
                    out.push('\n');
                }
                Err(e) => err.push_str(&format!("query {} ({}): {}: {e}\n", o.index, o.cmd, e.code())),
            },
        }
    }
    (out, err)
}
