//! Command-line front end. Every subcommand other than `run` and `verify`
//! is turned into a one-query problem and goes through the same runner.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::lattice::PolarizingVector;
use crate::verify::{run_suite, VerifyConfig};

use super::problem::{load_problem, Problem};
use super::run::{exit_code, render, run_queries, Format, RunOptions, EXIT_OK, EXIT_PARSE, EXIT_VERIFY};
use super::schema::{
    AssignmentDto, Coord, ExprDto, GammaDto, GenCharRef, GroupDto, ModuleDto, ProblemFile, QueryDto,
    StabilizerRef, WeightDto, VERSION,
};

#[derive(Parser, Debug)]
#[command(name = "tkindex", version, about = "Exact index computations for linear torus modules")]
pub struct Cli {
    /// Problem file providing groups, modules and named generalized characters.
    #[arg(long, global = true)]
    pub problem: Option<PathBuf>,
    /// Group for inline modules: `n` or `n:d1,d2,...`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Truncation box `lo..hi[,lo..hi...]`.
    #[arg(long, global = true, allow_hyphen_values = true, env = "TKINDEX_WINDOW_DEFAULT")]
    pub window: Option<String>,
    /// json, text or pretty.
    #[arg(long, global = true, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap on enumerated flags.
    #[arg(long, global = true)]
    pub limit: Option<usize>,
    /// Evaluate independent queries in parallel (output order is unchanged).
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every query of a problem file.
    Run { file: Option<PathBuf> },
    /// List the infinitesimal stabilizers.
    Delta { module: String },
    /// Index of the Thom class pushed by `beta`.
    IndexThom {
        module: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Index of a flag generator, by enumeration position.
    IndexFlag {
        module: String,
        #[arg(long, default_value_t = 0)]
        flag_index: usize,
    },
    /// Exact coefficient at one weight (`--at` takes `free[|torsion]`).
    Coeff {
        gen_char: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Coefficients on the `--window` box.
    Truncate { gen_char: String },
    /// Membership in the Dahmen–Micchelli module.
    CheckDm { module: String, gen_char: String },
    /// Membership in the generalized Dahmen–Micchelli module.
    CheckF { module: String, gen_char: String },
    /// Apply the decomposition map to `STABILIZER=GENCHAR` assignments.
    Decompose {
        module: String,
        #[arg(long = "assign")]
        assign: Vec<String>,
        /// `STABILIZER=coords`.
        #[arg(long = "gamma", allow_hyphen_values = true)]
        gamma: Vec<String>,
    },
    /// Restrict an index from the module `--from` to the submodule `--to`.
    Restrict {
        gen_char: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Induce from the quotient by `chi`; the argument is read over the quotient group.
    Induce {
        gen_char: String,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long)]
        module: Option<String>,
        /// Record wall-clock times per check.
        #[arg(long)]
        timing: bool,
    },
}

/// Exit code plus the text for stdout and stderr.
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn parse_error(e: &Error) -> Self {
        CliOutput {
            code: EXIT_PARSE,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", e.code()),
        }
    }
}

pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli)
}

fn execute(cli: &Cli) -> CliOutput {
    let opts = RunOptions {
        format: cli.format,
        window: cli.window.clone(),
        seed: cli.seed.unwrap_or(0),
        limit: cli.limit.unwrap_or(8),
        trials: None,
        parallel: cli.parallel,
        timing: false,
    };
    if let Command::Verify {
        suite,
        trials,
        chi,
        module,
        timing,
    } = &cli.command
    {
        return verify(cli, &opts, suite, *trials, chi.as_deref(), module.as_deref(), *timing);
    }
    let problem = match build_problem(cli) {
        Ok(p) => p,
        Err(e) => return CliOutput::parse_error(&e),
    };
    let outcomes = run_queries(&problem, &opts);
    let (stdout, stderr) = render(&outcomes, opts.format);
    CliOutput {
        code: exit_code(&outcomes),
        stdout,
        stderr,
    }
}

fn verify(
    cli: &Cli,
    opts: &RunOptions,
    suite: &str,
    trials: Option<usize>,
    chi: Option<&str>,
    module: Option<&str>,
    timing: bool,
) -> CliOutput {
    let module = match module {
        None => None,
        Some(m) => match base_problem(cli, &[m]).and_then(|mut f| {
            let name = add_module(&mut f, m)?;
            let p = Problem::new(f)?;
            Ok(p.modules[&name].clone())
        }) {
            Ok(v) => Some(v),
            Err(e) => return CliOutput::parse_error(&e),
        },
    };
    let chi = match chi.map(parse_weight).transpose() {
        Ok(c) => c.map(|w| w.free),
        Err(e) => return CliOutput::parse_error(&e),
    };
    let cfg = VerifyConfig {
        seed: opts.seed,
        trials,
        window: cli.window.clone(),
        chi,
        module,
        flag_limit: opts.limit,
        timing,
    };
    match run_suite(suite, &cfg) {
        Err(e) => CliOutput::parse_error(&e),
        Ok(report) => CliOutput {
            code: if report.passed() { EXIT_OK } else { EXIT_VERIFY },
            stdout: match cli.format {
                Format::Json => report.to_json_lines(),
                _ => report.render_text(),
            },
            stderr: String::new(),
        },
    }
}

fn schema(location: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        location: location.into(),
        message: message.into(),
    }
}

fn parse_ints(s: &str, location: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| schema(location, format!("expected an integer, got {x:?}")))
        })
        .collect()
}

/// `a,b,...[|t1,t2,...]`.
pub fn parse_weight(s: &str) -> Result<WeightDto> {
    let (free, torsion) = s.split_once('|').unwrap_or((s, ""));
    Ok(WeightDto {
        free: parse_ints(free, "weight")?,
        torsion: parse_ints(torsion, "weight")?,
    })
}

/// Weights separated by `;`, with an optional `+k` for a trivial summand of
/// real dimension `k`: `1,0;0,1;1,1` or `1|1;2+2`.
pub fn parse_module(s: &str) -> Result<ModuleDto> {
    let (body, trivial) = match s.rsplit_once('+') {
        Some((b, k)) => (
            b,
            k.trim()
                .parse()
                .map_err(|_| schema("module", format!("bad trivial dimension {k:?}")))?,
        ),
        None => (s, 0),
    };
    let weights = body
        .split(';')
        .filter(|w| !w.trim().is_empty())
        .map(parse_weight)
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleDto {
        weights,
        trivial_real_dim: trivial,
    })
}

fn parse_coords(s: &str) -> Result<Vec<Coord>> {
    s.split(',')
        .map(|x| {
            PolarizingVector::parse_coord(x.trim())
                .map(Coord)
                .ok_or_else(|| schema("vector", format!("bad rational {x:?}")))
        })
        .collect()
}

fn parse_group(s: &str) -> Result<GroupDto> {
    let (rank, torsion) = s.split_once(':').unwrap_or((s, ""));
    Ok(GroupDto {
        rank: rank
            .trim()
            .parse()
            .map_err(|_| schema("group", format!("bad rank {rank:?}")))?,
        torsion: parse_ints(torsion, "group")?,
    })
}

/// The problem file given with `--problem`, or an empty one over the
/// group from `--group` (or inferred from the first inline module).
fn base_problem(cli: &Cli, inline_modules: &[&str]) -> Result<ProblemFile> {
    if let Some(path) = &cli.problem {
        let p = load_problem(path)?;
        return Ok(ProblemFile {
            queries: Vec::new(),
            ..p.file
        });
    }
    let group = match &cli.group {
        Some(g) => parse_group(g)?,
        None => {
            let rank = inline_modules
                .iter()
                .filter_map(|m| parse_module(m).ok())
                .find_map(|m| m.weights.first().map(|w| w.free.len()))
                .ok_or_else(|| schema("group", "no --problem or --group, and no inline module to infer the rank from"))?;
            GroupDto {
                rank,
                torsion: Vec::new(),
            }
        }
    };
    Ok(ProblemFile {
        version: VERSION.into(),
        group,
        modules: BTreeMap::new(),
        gen_chars: BTreeMap::new(),
        queries: Vec::new(),
    })
}

/// A module argument is a name from the problem file or an inline module,
/// which is registered under its own spelling.
fn add_module(f: &mut ProblemFile, arg: &str) -> Result<String> {
    if !f.modules.contains_key(arg) {
        f.modules.insert(arg.to_string(), parse_module(arg)?);
    }
    Ok(arg.to_string())
}

/// A generalized character argument is a name or an inline JSON expression.
fn gen_char_ref(f: &ProblemFile, arg: &str) -> Result<GenCharRef> {
    if f.gen_chars.contains_key(arg) {
        return Ok(GenCharRef::Name(arg.to_string()));
    }
    if arg.trim_start().starts_with('{') {
        let e: ExprDto = serde_json::from_str(arg).map_err(|e| schema("gen_char", e.to_string()))?;
        return Ok(GenCharRef::Inline(e));
    }
    Err(schema("gen_char", format!("{arg:?} is neither a named gen_char nor a JSON expression")))
}

fn split_assignment(s: &str) -> Result<(StabilizerRef, &str)> {
    let (k, rest) = s
        .split_once('=')
        .ok_or_else(|| schema("assign", format!("expected STABILIZER=VALUE, got {s:?}")))?;
    let k = k
        .trim()
        .parse()
        .map_err(|_| schema("assign", format!("bad stabilizer index {k:?}")))?;
    Ok((StabilizerRef::Index(k), rest))
}

fn build_problem(cli: &Cli) -> Result<Problem> {
    let modules: Vec<&str> = match &cli.command {
        Command::Delta { module }
        | Command::IndexThom { module, .. }
        | Command::IndexFlag { module, .. }
        | Command::CheckDm { module, .. }
        | Command::CheckF { module, .. }
        | Command::Decompose { module, .. } => vec![module],
        Command::Restrict { from, to, .. } => vec![from, to],
        _ => Vec::new(),
    };
    if let Command::Run { file } = &cli.command {
        let path = file
            .as_ref()
            .or(cli.problem.as_ref())
            .ok_or_else(|| schema("run", "no problem file given"))?;
        return load_problem(path);
    }
    let mut f = base_problem(cli, &modules)?;
    for m in &modules {
        add_module(&mut f, m)?;
    }
    let query = match &cli.command {
        Command::Run { .. } | Command::Verify { .. } => unreachable!("handled above"),
        Command::Delta { module } => QueryDto::Delta { module: module.clone() },
        Command::IndexThom { module, beta } => QueryDto::IndexThom {
            module: module.clone(),
            beta: parse_coords(beta)?,
            window: None,
        },
        Command::IndexFlag { module, flag_index } => QueryDto::IndexFlag {
            module: module.clone(),
            flag: None,
            index: Some(*flag_index),
            window: None,
        },
        Command::Coeff { gen_char, at } => QueryDto::Coeff {
            gen_char: gen_char_ref(&f, gen_char)?,
            at: parse_weight(at)?,
        },
        Command::Truncate { gen_char } => QueryDto::Truncate {
            gen_char: gen_char_ref(&f, gen_char)?,
            window: None,
        },
        Command::CheckDm { module, gen_char } => QueryDto::CheckDm {
            module: module.clone(),
            gen_char: gen_char_ref(&f, gen_char)?,
        },
        Command::CheckF { module, gen_char } => QueryDto::CheckF {
            module: module.clone(),
            gen_char: gen_char_ref(&f, gen_char)?,
        },
        Command::Decompose { module, assign, gamma } => QueryDto::Decompose {
            module: module.clone(),
            assignments: assign
                .iter()
                .map(|a| {
                    let (stabilizer, rest) = split_assignment(a)?;
                    Ok(AssignmentDto {
                        stabilizer,
                        gen_char: gen_char_ref(&f, rest)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            gammas: gamma
                .iter()
                .map(|a| {
                    let (stabilizer, rest) = split_assignment(a)?;
                    Ok(GammaDto {
                        stabilizer,
                        gamma: parse_coords(rest)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            window: None,
        },
        Command::Restrict { gen_char, from, to } => QueryDto::Restrict {
            gen_char: gen_char_ref(&f, gen_char)?,
            from: from.clone(),
            to: to.clone(),
            window: None,
        },
        Command::Induce { gen_char, chi } => QueryDto::Induce {
            chi: parse_weight(chi)?,
            gen_char: gen_char_ref(&f, gen_char)?,
            window: None,
        },
    };
    f.queries = vec![query];
    Problem::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_syntax() {
        let m = parse_module("1,0;0,1|1+2").unwrap();
        assert_eq!(m.weights[1].torsion, vec![1]);
        assert_eq!(m.trivial_real_dim, 2);
        assert_eq!(parse_group("2:3").unwrap().torsion, vec![3]);
        assert!(parse_weight("1,x").is_err());
    }

    #[test]
    fn index_thom_on_an_inline_circle() {
        let out = run_cli(["tkindex", "index-thom", "1", "--beta", "1", "--window", "-5..5", "--format", "pretty"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout, "−t −t² −t³ −t⁴ −t⁵\n");
    }

    #[test]
    fn bad_input_exits_with_the_parse_code() {
        let out = run_cli(["tkindex", "index-thom", "1", "--beta", "1,2"]);
        assert_eq!(out.code, EXIT_PARSE);
        assert!(out.stderr.contains("E_INVARIANT"));
    }
}
