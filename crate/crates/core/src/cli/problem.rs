//! Parsing and validation of problem files.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::genchar::Window;
use crate::lattice::{delta_set, quotient_by_character, CharacterGroup, GModule};
use crate::verify::SUITES;

use super::schema::{
    AssignmentDto, Coord, ExprDto, GammaDto, GenCharRef, MonomialDto, ProblemFile, QueryDto, StabilizerRef,
    WeightDto, VERSION,
};

/// A validated problem: the file as written plus its resolved group and
/// modules.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub group: CharacterGroup,
    pub modules: BTreeMap<String, GModule>,
}

fn invariant(name: impl Into<String>, reason: impl ToString) -> Error {
    Error::Invariant {
        name: name.into(),
        reason: reason.to_string(),
    }
}

/// Parses and validates a `tkindex/1` document.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Schema {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    Problem::new(file)
}

pub fn load_problem(path: &std::path::Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

impl Problem {
    pub fn new(file: ProblemFile) -> Result<Self> {
        if file.version != VERSION {
            return Err(Error::Schema {
                location: "version".into(),
                message: format!("expected {VERSION:?}, found {:?}", file.version),
            });
        }
        let group =
            CharacterGroup::new(file.group.rank, file.group.torsion.clone()).map_err(|e| invariant("group", e))?;
        let mut modules = BTreeMap::new();
        for (name, m) in &file.modules {
            let v = m.resolve(&group).map_err(|e| invariant(format!("modules.{name}"), e))?;
            modules.insert(name.clone(), v);
        }
        let p = Problem { file, group, modules };
        p.validate()?;
        Ok(p)
    }

    pub fn module(&self, name: &str) -> Result<&GModule> {
        self.modules
            .get(name)
            .ok_or_else(|| invariant(name, "no module with this name"))
    }

    fn validate(&self) -> Result<()> {
        for (name, e) in &self.file.gen_chars {
            self.check_expr(e, &self.group, &format!("gen_chars.{name}"))?;
        }
        self.check_cycles()?;
        for (i, q) in self.file.queries.iter().enumerate() {
            self.check_query(q, &format!("queries[{i}]"))?;
        }
        Ok(())
    }

    fn check_cycles(&self) -> Result<()> {
        fn refs(e: &ExprDto, out: &mut Vec<String>) {
            match e {
                ExprDto::Ref { name } => out.push(name.clone()),
                ExprDto::Mul { of, .. }
                | ExprDto::Scale { of, .. }
                | ExprDto::Restrict { of, .. }
                | ExprDto::Induction { of, .. } => refs(of, out),
                ExprDto::Product { factors } => factors.iter().for_each(|f| refs(f, out)),
                ExprDto::Sum { summands } => summands.iter().for_each(|f| refs(f, out)),
                _ => {}
            }
        }
        fn visit(
            name: &str,
            file: &ProblemFile,
            stack: &mut Vec<String>,
            done: &mut BTreeSet<String>,
        ) -> Result<()> {
            if done.contains(name) {
                return Ok(());
            }
            if stack.iter().any(|s| s == name) {
                return Err(invariant(format!("gen_chars.{name}"), "cyclic reference"));
            }
            stack.push(name.to_string());
            let mut out = Vec::new();
            if let Some(e) = file.gen_chars.get(name) {
                refs(e, &mut out);
            }
            for r in out {
                visit(&r, file, stack, done)?;
            }
            stack.pop();
            done.insert(name.to_string());
            Ok(())
        }
        let mut done = BTreeSet::new();
        for name in self.file.gen_chars.keys() {
            visit(name, &self.file, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }

    fn check_weight(&self, w: &WeightDto, g: &CharacterGroup, at: &str) -> Result<()> {
        w.resolve(g).map(|_| ()).map_err(|e| invariant(at, e))
    }

    fn check_finite(&self, ms: &[MonomialDto], g: &CharacterGroup, at: &str) -> Result<()> {
        for (i, m) in ms.iter().enumerate() {
            self.check_weight(&m.weight, g, &format!("{at}[{i}]"))?;
        }
        Ok(())
    }

    fn check_vector(&self, c: &[Coord], g: &CharacterGroup, at: &str) -> Result<()> {
        if c.len() != g.free_rank() {
            return Err(invariant(
                at,
                format!("{} coordinates for a rank {} group", c.len(), g.free_rank()),
            ));
        }
        Ok(())
    }

    fn check_module_ref(&self, name: &str, g: &CharacterGroup, at: &str) -> Result<()> {
        self.module(name).map_err(|_| invariant(at, format!("unknown module {name:?}")))?;
        if g != &self.group {
            return Err(invariant(at, "modules live over the problem group, not over a quotient"));
        }
        Ok(())
    }

    fn check_expr(&self, e: &ExprDto, g: &CharacterGroup, at: &str) -> Result<()> {
        match e {
            ExprDto::Literal(lit) => {
                for (i, t) in lit.terms.iter().enumerate() {
                    let here = format!("{at}.terms[{i}]");
                    self.check_weight(&t.numerator, g, &here)?;
                    for d in &t.denominators {
                        self.check_weight(d, g, &here)?;
                    }
                    self.check_vector(&t.witness, g, &here)?;
                }
                self.check_finite(&lit.finite, g, &format!("{at}.finite"))
            }
            ExprDto::Ref { name } => {
                if self.file.gen_chars.contains_key(name) {
                    Ok(())
                } else {
                    Err(invariant(at, format!("unknown gen_char {name:?}")))
                }
            }
            ExprDto::Series {
                numerator,
                denominators,
            } => {
                self.check_weight(numerator, g, at)?;
                denominators.iter().try_for_each(|d| self.check_weight(d, g, at))
            }
            ExprDto::PolarizedInverse { module, beta }
            | ExprDto::IndexThom { module, beta }
            | ExprDto::SigmaDbar { module, beta } => {
                self.check_module_ref(module, g, at)?;
                self.check_vector(beta, g, &format!("{at}.beta"))
            }
            ExprDto::FlagIndex { module, flag, index } => {
                self.check_module_ref(module, g, at)?;
                match (flag, index) {
                    (Some(_), Some(_)) | (None, None) => Err(invariant(at, "give exactly one of flag and index")),
                    (Some(f), None) => {
                        for b in &f.blocks {
                            b.iter().try_for_each(|w| self.check_weight(w, g, &format!("{at}.flag")))?;
                        }
                        f.betas.iter().try_for_each(|b| self.check_vector(b, g, &format!("{at}.flag")))
                    }
                    (None, Some(_)) => Ok(()),
                }
            }
            ExprDto::Mul { finite, of } => {
                self.check_finite(finite, g, &format!("{at}.finite"))?;
                self.check_expr(of, g, &format!("{at}.of"))
            }
            ExprDto::Product { factors } => factors
                .iter()
                .enumerate()
                .try_for_each(|(i, f)| self.check_expr(f, g, &format!("{at}.factors[{i}]"))),
            ExprDto::Sum { summands } => summands
                .iter()
                .enumerate()
                .try_for_each(|(i, f)| self.check_expr(f, g, &format!("{at}.summands[{i}]"))),
            ExprDto::Scale { of, .. } => self.check_expr(of, g, &format!("{at}.of")),
            ExprDto::Restrict { from, to, of } => {
                self.check_module_ref(from, g, at)?;
                self.check_module_ref(to, g, at)?;
                self.check_expr(of, g, &format!("{at}.of"))
            }
            ExprDto::Induction { chi, of } => {
                let chi_w = chi.resolve(g).map_err(|e| invariant(format!("{at}.chi"), e))?;
                let q = quotient_by_character(g, &chi_w).map_err(|e| invariant(format!("{at}.chi"), e))?;
                self.check_expr(of, q.target(), &format!("{at}.of"))
            }
        }
    }

    fn check_ref(&self, r: &GenCharRef, g: &CharacterGroup, at: &str) -> Result<()> {
        match r {
            GenCharRef::Name(n) => self.check_expr(&ExprDto::Ref { name: n.clone() }, g, at),
            GenCharRef::Inline(e) => self.check_expr(e, g, at),
        }
    }

    fn check_window(&self, w: &Option<String>, at: &str) -> Result<()> {
        if let Some(s) = w {
            Window::parse(s, self.group.free_rank()).map_err(|e| invariant(format!("{at}.window"), e))?;
        }
        Ok(())
    }

    fn check_stabilizer(&self, s: &StabilizerRef, v: &GModule, at: &str) -> Result<()> {
        let delta = delta_set(v);
        match s {
            StabilizerRef::Index(i) if *i < delta.len() => Ok(()),
            StabilizerRef::Index(i) => Err(invariant(at, format!("stabilizer index {i} out of range {}", delta.len()))),
            StabilizerRef::Perp { perp } => {
                if perp.iter().any(|r| r.len() != self.group.free_rank()) {
                    return Err(invariant(at, "annihilator rows have the wrong length"));
                }
                Ok(())
            }
        }
    }

    fn check_query(&self, q: &QueryDto, at: &str) -> Result<()> {
        let g = &self.group;
        match q {
            QueryDto::Delta { module } => self.check_module_ref(module, g, at),
            QueryDto::IndexThom { module, beta, window } => {
                self.check_module_ref(module, g, at)?;
                self.check_vector(beta, g, &format!("{at}.beta"))?;
                self.check_window(window, at)
            }
            QueryDto::IndexFlag {
                module,
                flag,
                index,
                window,
            } => {
                let e = ExprDto::FlagIndex {
                    module: module.clone(),
                    flag: flag.clone(),
                    index: match (flag, index) {
                        (None, None) => Some(0),
                        _ => *index,
                    },
                };
                self.check_expr(&e, g, at)?;
                self.check_window(window, at)
            }
            QueryDto::Coeff { gen_char, at: w } => {
                self.check_ref(gen_char, g, &format!("{at}.gen_char"))?;
                self.check_weight(w, g, &format!("{at}.at"))
            }
            QueryDto::Truncate { gen_char, window } => {
                self.check_ref(gen_char, g, &format!("{at}.gen_char"))?;
                self.check_window(window, at)
            }
            QueryDto::CheckDm { module, gen_char } | QueryDto::CheckF { module, gen_char } => {
                self.check_module_ref(module, g, at)?;
                self.check_ref(gen_char, g, &format!("{at}.gen_char"))
            }
            QueryDto::Decompose {
                module,
                assignments,
                gammas,
                window,
            } => {
                self.check_module_ref(module, g, at)?;
                let v = self.module(module)?;
                for (i, AssignmentDto { stabilizer, gen_char }) in assignments.iter().enumerate() {
                    let here = format!("{at}.assignments[{i}]");
                    self.check_stabilizer(stabilizer, v, &here)?;
                    self.check_ref(gen_char, g, &here)?;
                }
                for (i, GammaDto { stabilizer, gamma }) in gammas.iter().enumerate() {
                    let here = format!("{at}.gammas[{i}]");
                    self.check_stabilizer(stabilizer, v, &here)?;
                    self.check_vector(gamma, g, &here)?;
                }
                self.check_window(window, at)
            }
            QueryDto::Restrict {
                gen_char,
                from,
                to,
                window,
            } => {
                self.check_module_ref(from, g, at)?;
                self.check_module_ref(to, g, at)?;
                self.check_ref(gen_char, g, &format!("{at}.gen_char"))?;
                self.check_window(window, at)
            }
            QueryDto::Induce { chi, gen_char, window } => {
                let chi_w = chi.resolve(g).map_err(|e| invariant(format!("{at}.chi"), e))?;
                let quotient = quotient_by_character(g, &chi_w).map_err(|e| invariant(format!("{at}.chi"), e))?;
                self.check_ref(gen_char, quotient.target(), &format!("{at}.gen_char"))?;
                self.check_window(window, at)
            }
            QueryDto::Verify {
                suite, module, window, chi, ..
            } => {
                if suite != "all" && !SUITES.contains(&suite.as_str()) {
                    return Err(Error::Schema {
                        location: format!("{at}.suite"),
                        message: format!("unknown suite {suite:?}"),
                    });
                }
                if let Some(m) = module {
                    self.check_module_ref(m, g, at)?;
                }
                if let Some(c) = chi {
                    if c.iter().all(|&x| x == 0) {
                        return Err(invariant(format!("{at}.chi"), "chi has zero differential"));
                    }
                }
                if let Some(w) = window {
                    let n = w.split(',').count();
                    Window::parse(w, n).map_err(|e| invariant(format!("{at}.window"), e))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "version": "tkindex/1",
        "group": {"rank": 1, "torsion": []},
        "modules": {"V": {"weights": [{"free": [1], "torsion": []}], "trivial_real_dim": 0}},
        "queries": [{"cmd": "index-thom", "module": "V", "beta": ["1"], "window": "-5..5"}]
    }"#;

    #[test]
    fn minimal_file_parses() {
        let p = parse_problem(MINIMAL).unwrap();
        assert_eq!(p.modules["V"].weights().len(), 1);
    }

    #[test]
    fn bad_torsion_entry_is_an_invariant_error() {
        let text = r#"{"version":"tkindex/1","group":{"rank":1,"torsion":[3]},
            "modules":{"V":{"weights":[{"free":[1],"torsion":[3]}]}}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Invariant { .. })));
    }

    #[test]
    fn torsion_only_weight_is_an_invariant_error() {
        let text = r#"{"version":"tkindex/1","group":{"rank":1,"torsion":[2]},
            "modules":{"V":{"weights":[{"free":[0],"torsion":[1]}]}}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Invariant { .. })));
    }

    #[test]
    fn schema_errors_carry_a_location() {
        match parse_problem(r#"{"version":"tkindex/1","group":{"rank":"x"}}"#) {
            Err(Error::Schema { location, .. }) => assert!(location.starts_with("line 1")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_problem(r#"{"version":"tkindex/2","group":{"rank":1}}"#),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn references_must_resolve() {
        let text = r#"{"version":"tkindex/1","group":{"rank":1},
            "gen_chars":{"a":{"op":"ref","name":"b"},"b":{"op":"ref","name":"a"}}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Invariant { .. })));
        let text = r#"{"version":"tkindex/1","group":{"rank":1},
            "queries":[{"cmd":"delta","module":"W"}]}"#;
        assert!(matches!(parse_problem(text), Err(Error::Invariant { .. })));
    }
}
