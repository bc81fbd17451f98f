//! Command-line front end: a small text language for declaring prime-field
//! rings and maps, plus commands that drive the engine and emit reports.
//!
//! Program grammar (`#` starts a line comment; polynomials use the
//! [`crate::field_poly`] expression syntax):
//!
//! ```text
//! program := stmt*
//! stmt    := prime | ring | map | cmd
//! prime   := "p" "=" INT ";"
//! ring    := "ring" NAME "=" "poly" "(" NAME {"," NAME} ")"
//!            [ "/" "(" poly {"," poly} ")" ] ";"
//! map     := "map" NAME ":" NAME "->" NAME "="
//!            "{" NAME "->" poly {"," NAME "->" poly} "}" ";"
//! cmd     := "pushout"  NAME "e" "=" INT [ "purity" [ "=" INT ] ] ";"
//!          | "ffinite"  NAME [ "e" "=" INT ] ";"
//!          | "bracket"  NAME "e" "=" INT ";"
//!          | "groebner" NAME ";"
//!          | "verify"   NAME ";"
//! ```
//!
//! One prime per program; every name must be declared before use; parsing is
//! total (a value or an error, never partial state). Commands execute in
//! order and each produces one [`CommandReport`]; `--json` prints the report
//! list as a JSON array, byte-identical across runs for fixed inputs, flags,
//! and seed.
//!
//! Exit codes: 0 success, 1 mathematical negative (a failed `verify` run or a
//! `--expect` mismatch), 2 usage or parse or semantic error, 3 budget
//! exhaustion.

use crate::algebra::{make_map, AlgebraMap, PresentedAlgebra};
use crate::config::EngineConfig;
use crate::error::Error;
use crate::field_poly::{
    is_prime, lex, parse_poly_tokens, MonomialOrder, PolyContext, PolyParseError, PrimePoly, Span,
    Token, TokenCursor, MAX_MODULUS,
};
use crate::frobenius::{
    bracket_power, certify_f_finite, purity_witness, radu_andre_pushout, PurityOutcome,
    UnknownReason,
};
use crate::groebner::{
    groebner_basis, module_finiteness, FinitenessCertificate, FinitenessVerdict, GroebnerConfig,
};
use crate::lemma_suite::{run_suite, SuiteReport, SUITE_NAMES};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

/// Instance budget handed to verification suites launched from the command
/// line. Fixed so that suite content depends only on the seed; the `--budget`
/// flag caps S-pair reductions inside basis computations instead.
pub const SUITE_INSTANCE_BUDGET: u64 = 600;

/// Statement keywords; declared ring and map names may not shadow them.
const RESERVED: &[&str] = &[
    "p", "ring", "map", "poly", "pushout", "ffinite", "bracket", "groebner", "verify", "e",
    "purity",
];

// ---------------------------------------------------------------------------
// Syntax tree
// ---------------------------------------------------------------------------

/// A parsed program: the original text (kept for line/column diagnostics),
/// the declared prime, and the statements in source order.
#[derive(Debug, Clone)]
pub struct SourceProgram {
    pub text: String,
    pub prime: Option<u64>,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Prime { value: u64, span: Span },
    Ring(RingDecl),
    Map(MapDecl),
    Cmd(CmdStmt),
}

#[derive(Debug, Clone)]
pub struct RingDecl {
    pub name: String,
    pub vars: Vec<String>,
    pub relations: Vec<PrimePoly>,
    pub ctx: Arc<PolyContext>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `images[i]` is the image of source variable `i`, in the target context.
    pub images: Vec<PrimePoly>,
    /// Variable names of the source ring, by position, for printing.
    pub source_vars: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct CmdStmt {
    pub command: Command,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Construct the pushout and comparison map at twist `e`; with `purity`,
    /// additionally search for a retraction witness (`None` bound means "use
    /// the `--degree-bound` flag").
    Pushout { map: String, e: u64, purity: Option<Option<u64>> },
    /// With a twist, certify finiteness of the comparison map at that twist;
    /// without one, decide module-finiteness of the declared map itself.
    Ffinite { map: String, e: Option<u64> },
    /// Bracket power of the ring's relation ideal.
    Bracket { ring: String, e: u64 },
    /// Reduced basis of the ring's relation ideal in the active order.
    Groebner { ring: String },
    /// Run a named verification suite.
    Verify { suite: String },
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Pushout { map, e, purity: None } => write!(f, "pushout {map} e={e}"),
            Command::Pushout { map, e, purity: Some(None) } => {
                write!(f, "pushout {map} e={e} purity")
            }
            Command::Pushout { map, e, purity: Some(Some(b)) } => {
                write!(f, "pushout {map} e={e} purity={b}")
            }
            Command::Ffinite { map, e: Some(e) } => write!(f, "ffinite {map} e={e}"),
            Command::Ffinite { map, e: None } => write!(f, "ffinite {map}"),
            Command::Bracket { ring, e } => write!(f, "bracket {ring} e={e}"),
            Command::Groebner { ring } => write!(f, "groebner {ring}"),
            Command::Verify { suite } => write!(f, "verify {suite}"),
        }
    }
}

impl fmt::Display for SourceProgram {
    /// Canonical printing: one statement per line, polynomials in grevlex
    /// with coefficients normalized into `[0, p)`. Reparsing the output gives
    /// a structurally identical program.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ord = MonomialOrder::GrevLex;
        for stmt in &self.stmts {
            match stmt {
                Stmt::Prime { value, .. } => writeln!(f, "p = {value};")?,
                Stmt::Ring(r) => {
                    write!(f, "ring {} = poly({})", r.name, r.vars.join(","))?;
                    if !r.relations.is_empty() {
                        let rels: Vec<String> =
                            r.relations.iter().map(|p| p.to_text(&ord)).collect();
                        write!(f, "/({})", rels.join(", "))?;
                    }
                    writeln!(f, ";")?;
                }
                Stmt::Map(m) => {
                    let assigns: Vec<String> = m
                        .images
                        .iter()
                        .zip(&m.source_vars)
                        .map(|(im, var)| format!("{var} -> {}", im.to_text(&ord)))
                        .collect();
                    writeln!(
                        f,
                        "map {} : {} -> {} = {{ {} }};",
                        m.name,
                        m.source,
                        m.target,
                        assigns.join(", ")
                    )?;
                }
                Stmt::Cmd(c) => writeln!(f, "{};", c.command)?,
            }
        }
        Ok(())
    }
}

/// Structural equality ignoring spans and original text: same statements,
/// same names, same polynomials (compared by value across contexts).
pub fn structurally_equal(a: &SourceProgram, b: &SourceProgram) -> bool {
    if a.prime != b.prime || a.stmts.len() != b.stmts.len() {
        return false;
    }
    a.stmts.iter().zip(&b.stmts).all(|(x, y)| match (x, y) {
        (Stmt::Prime { value: u, .. }, Stmt::Prime { value: v, .. }) => u == v,
        (Stmt::Ring(r), Stmt::Ring(s)) => {
            r.name == s.name && r.vars == s.vars && r.relations == s.relations && r.ctx == s.ctx
        }
        (Stmt::Map(m), Stmt::Map(n)) => {
            m.name == n.name && m.source == n.source && m.target == n.target && m.images == n.images
        }
        (Stmt::Cmd(c), Stmt::Cmd(d)) => c.command == d.command,
        _ => false,
    })
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

fn perr(message: impl Into<String>, span: Span) -> PolyParseError {
    PolyParseError { message: message.into(), span }
}

fn expect_keyword(cur: &mut TokenCursor<'_>, word: &str) -> Result<Span, PolyParseError> {
    let (w, s) = cur.expect_ident()?;
    if w == word {
        Ok(s)
    } else {
        Err(perr(format!("expected `{word}`, found `{w}`"), s))
    }
}

/// `e` `=` INT, shared by several commands.
fn expect_twist(cur: &mut TokenCursor<'_>) -> Result<u64, PolyParseError> {
    expect_keyword(cur, "e")?;
    cur.expect(&Token::Equals)?;
    Ok(cur.expect_int()?.0)
}

struct ParseState {
    prime: Option<u64>,
    rings: BTreeMap<String, (Arc<PolyContext>, Vec<String>)>,
    maps: BTreeSet<String>,
    declared: BTreeSet<String>,
}

impl ParseState {
    fn claim_name(&mut self, name: &str, span: Span, kind: &str) -> Result<(), PolyParseError> {
        if RESERVED.contains(&name) {
            return Err(perr(
                format!("`{name}` is a statement keyword and cannot name a {kind}"),
                span,
            ));
        }
        if !self.declared.insert(name.to_string()) {
            return Err(perr(format!("`{name}` is already declared; names cannot be shadowed"), span));
        }
        Ok(())
    }

    fn ring(&self, name: &str, span: Span) -> Result<&(Arc<PolyContext>, Vec<String>), PolyParseError> {
        self.rings
            .get(name)
            .ok_or_else(|| perr(format!("unknown ring `{name}` (rings must be declared first)"), span))
    }

    fn map(&self, name: &str, span: Span) -> Result<(), PolyParseError> {
        if self.maps.contains(name) {
            Ok(())
        } else {
            Err(perr(format!("unknown map `{name}` (maps must be declared first)"), span))
        }
    }
}

/// Parse a whole program. Total: returns the tree or the first error, with a
/// byte span into `src` (see [`line_col`] for human-readable positions).
pub fn parse_source(src: &str) -> Result<SourceProgram, PolyParseError> {
    let tokens = lex(src)?;
    let mut cur = TokenCursor::new(&tokens, src.len());
    let mut state =
        ParseState { prime: None, rings: BTreeMap::new(), maps: BTreeSet::new(), declared: BTreeSet::new() };
    let mut stmts = Vec::new();

    while !cur.at_end() {
        let span = cur.peek_span();
        let word = match cur.peek() {
            Some(Token::Ident(w)) => w.clone(),
            Some(t) => {
                return Err(perr(
                    format!(
                        "expected a statement (`p`, `ring`, `map`, `pushout`, `ffinite`, \
                         `bracket`, `groebner`, or `verify`), found `{t}`"
                    ),
                    span,
                ))
            }
            None => break,
        };
        match word.as_str() {
            "p" => stmts.push(parse_prime(&mut cur, &mut state, span)?),
            "ring" => stmts.push(parse_ring(&mut cur, &mut state)?),
            "map" => stmts.push(parse_map(&mut cur, &mut state)?),
            "pushout" | "ffinite" | "bracket" | "groebner" | "verify" => {
                stmts.push(parse_cmd(&mut cur, &state, &word, span)?)
            }
            other => {
                return Err(perr(
                    format!(
                        "expected a statement (`p`, `ring`, `map`, `pushout`, `ffinite`, \
                         `bracket`, `groebner`, or `verify`), found `{other}`"
                    ),
                    span,
                ))
            }
        }
    }

    Ok(SourceProgram { text: src.to_string(), prime: state.prime, stmts })
}

fn parse_prime(
    cur: &mut TokenCursor<'_>,
    state: &mut ParseState,
    kw_span: Span,
) -> Result<Stmt, PolyParseError> {
    cur.next(); // `p`
    cur.expect(&Token::Equals)?;
    let (value, vspan) = cur.expect_int()?;
    cur.expect(&Token::Semicolon)?;
    if state.prime.is_some() {
        return Err(perr("a prime is already declared; one `p = ...;` per program", kw_span));
    }
    if !is_prime(value) || value > MAX_MODULUS {
        return Err(perr(
            format!("invalid modulus: {value} is not a prime in [2, 2^31)"),
            vspan,
        ));
    }
    state.prime = Some(value);
    Ok(Stmt::Prime { value, span: kw_span })
}

fn parse_ring(cur: &mut TokenCursor<'_>, state: &mut ParseState) -> Result<Stmt, PolyParseError> {
    cur.next(); // `ring`
    let (name, nspan) = cur.expect_ident()?;
    state.claim_name(&name, nspan, "ring")?;
    cur.expect(&Token::Equals)?;
    expect_keyword(cur, "poly")?;
    cur.expect(&Token::LParen)?;

    let mut vars: Vec<String> = Vec::new();
    loop {
        let (v, vspan) = cur.expect_ident()?;
        if vars.contains(&v) {
            return Err(perr(format!("duplicate ring variable `{v}`"), vspan));
        }
        vars.push(v);
        match cur.next() {
            Some((Token::Comma, _)) => continue,
            Some((Token::RParen, _)) => break,
            Some((t, s)) => {
                return Err(perr(format!("expected `,` or `)` in the variable list, found `{t}`"), *s))
            }
            None => return Err(perr("unterminated variable list", cur.peek_span())),
        }
    }

    let p = state.prime.ok_or_else(|| {
        perr("no prime declared: `p = ...;` must appear before the first ring", nspan)
    })?;
    let ctx = PolyContext::new(p, vars.clone()).map_err(|e| perr(e.to_string(), nspan))?;

    let mut relations = Vec::new();
    if matches!(cur.peek(), Some(Token::Slash)) {
        cur.next();
        cur.expect(&Token::LParen)?;
        loop {
            relations.push(parse_poly_tokens(cur, &ctx)?);
            match cur.next() {
                Some((Token::Comma, _)) => continue,
                Some((Token::RParen, _)) => break,
                Some((t, s)) => {
                    return Err(perr(
                        format!("expected `,` or `)` in the relation list, found `{t}`"),
                        *s,
                    ))
                }
                None => return Err(perr("unterminated relation list", cur.peek_span())),
            }
        }
    }
    cur.expect(&Token::Semicolon)?;

    state.rings.insert(name.clone(), (ctx.clone(), vars.clone()));
    Ok(Stmt::Ring(RingDecl { name, vars, relations, ctx, span: nspan }))
}

fn parse_map(cur: &mut TokenCursor<'_>, state: &mut ParseState) -> Result<Stmt, PolyParseError> {
    cur.next(); // `map`
    let (name, nspan) = cur.expect_ident()?;
    state.claim_name(&name, nspan, "map")?;
    cur.expect(&Token::Colon)?;
    let (src_name, sspan) = cur.expect_ident()?;
    let (src_ctx, src_vars) = state.ring(&src_name, sspan)?.clone();
    cur.expect(&Token::Arrow)?;
    let (tgt_name, tspan) = cur.expect_ident()?;
    let (tgt_ctx, _) = state.ring(&tgt_name, tspan)?.clone();
    cur.expect(&Token::Equals)?;
    cur.expect(&Token::LBrace)?;

    let mut images: Vec<Option<PrimePoly>> = vec![None; src_ctx.num_vars()];
    loop {
        let (v, vspan) = cur.expect_ident()?;
        let idx = src_ctx.var_index(&v).ok_or_else(|| {
            perr(
                format!(
                    "`{v}` is not a variable of ring `{src_name}` (variables: {})",
                    src_vars.join(", ")
                ),
                vspan,
            )
        })?;
        if images[idx].is_some() {
            return Err(perr(format!("variable `{v}` is assigned twice"), vspan));
        }
        cur.expect(&Token::Arrow)?;
        images[idx] = Some(parse_poly_tokens(cur, &tgt_ctx)?);
        match cur.next() {
            Some((Token::Comma, _)) => continue,
            Some((Token::RBrace, _)) => break,
            Some((t, s)) => {
                return Err(perr(format!("expected `,` or `}}` in the assignment list, found `{t}`"), *s))
            }
            None => return Err(perr("unterminated assignment list", cur.peek_span())),
        }
    }
    cur.expect(&Token::Semicolon)?;

    let mut resolved = Vec::with_capacity(images.len());
    for (i, im) in images.into_iter().enumerate() {
        match im {
            Some(poly) => resolved.push(poly),
            None => {
                return Err(perr(
                    format!("map `{name}` gives no image for variable `{}`", src_vars[i]),
                    nspan,
                ))
            }
        }
    }

    state.maps.insert(name.clone());
    Ok(Stmt::Map(MapDecl {
        name,
        source: src_name,
        target: tgt_name,
        images: resolved,
        source_vars: src_vars,
        span: nspan,
    }))
}

fn parse_cmd(
    cur: &mut TokenCursor<'_>,
    state: &ParseState,
    word: &str,
    kw_span: Span,
) -> Result<Stmt, PolyParseError> {
    cur.next(); // command keyword
    let command = match word {
        "pushout" => {
            let (m, ms) = cur.expect_ident()?;
            state.map(&m, ms)?;
            let e = expect_twist(cur)?;
            let purity = match cur.peek() {
                Some(Token::Ident(w)) if w == "purity" => {
                    cur.next();
                    if matches!(cur.peek(), Some(Token::Equals)) {
                        cur.next();
                        Some(Some(cur.expect_int()?.0))
                    } else {
                        Some(None)
                    }
                }
                Some(Token::Semicolon) => None,
                Some(t) => {
                    return Err(perr(format!("expected `purity` or `;`, found `{t}`"), cur.peek_span()))
                }
                None => return Err(perr("expected `purity` or `;`, found end of input", cur.peek_span())),
            };
            Command::Pushout { map: m, e, purity }
        }
        "ffinite" => {
            let (m, ms) = cur.expect_ident()?;
            state.map(&m, ms)?;
            let e = match cur.peek() {
                Some(Token::Ident(w)) if w == "e" => Some(expect_twist(cur)?),
                Some(Token::Semicolon) => None,
                Some(t) => {
                    return Err(perr(format!("expected `e=` or `;`, found `{t}`"), cur.peek_span()))
                }
                None => return Err(perr("expected `e=` or `;`, found end of input", cur.peek_span())),
            };
            Command::Ffinite { map: m, e }
        }
        "bracket" => {
            let (r, rs) = cur.expect_ident()?;
            state.ring(&r, rs)?;
            let e = expect_twist(cur)?;
            Command::Bracket { ring: r, e }
        }
        "groebner" => {
            let (r, rs) = cur.expect_ident()?;
            state.ring(&r, rs)?;
            Command::Groebner { ring: r }
        }
        "verify" => {
            let (s, ss) = cur.expect_ident()?;
            if !SUITE_NAMES.contains(&s.as_str()) {
                return Err(perr(
                    format!("unknown verification suite `{s}` (one of: {})", SUITE_NAMES.join(", ")),
                    ss,
                ));
            }
            Command::Verify { suite: s }
        }
        _ => unreachable!("dispatch guarantees a command keyword"),
    };
    cur.expect(&Token::Semicolon)?;
    Ok(Stmt::Cmd(CmdStmt { command, span: kw_span }))
}

/// 1-based line and column of a byte offset in `text`.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let clamped = offset.min(text.len());
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in text.char_indices() {
        if i >= clamped {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One closure identity from a finiteness certificate, in printable form:
/// `variable · generator = Σ coefficients[j] · generator_j`.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionJson {
    pub variable: String,
    pub generator: String,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub generators: Vec<String>,
    pub expansions: Vec<ExpansionJson>,
}

/// The report one command produces. Serialized as-is in `--json` mode;
/// `timings_ms` stays empty there so output is byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub outcome: String,
    pub certificate: Option<CertificateJson>,
    pub diagnostics: Vec<String>,
    pub timings_ms: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite_report: Option<SuiteReport>,
}

fn certificate_json(
    cert: &FinitenessCertificate,
    target_vars: &[String],
    ord: &MonomialOrder,
) -> CertificateJson {
    CertificateJson {
        generators: cert.generators.iter().map(|g| g.to_text(ord)).collect(),
        expansions: cert
            .expansions
            .iter()
            .map(|ex| ExpansionJson {
                variable: target_vars[ex.var_index].clone(),
                generator: cert.generators[ex.gen_index].to_text(ord),
                coefficients: ex.coeffs.iter().map(|c| c.to_text(ord)).collect(),
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// What `--expect` demands of the final command's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Finite,
    Infinite,
    Pure,
}

impl Expectation {
    fn word(self) -> &'static str {
        match self {
            Expectation::Finite => "finite",
            Expectation::Infinite => "infinite",
            Expectation::Pure => "pure",
        }
    }
}

/// Resolved flag values execution runs under.
#[derive(Debug, Clone)]
pub struct ExecSettings {
    /// Monomial order used for printing and for `groebner` commands.
    pub order: MonomialOrder,
    pub config: EngineConfig,
    pub expect: Option<Expectation>,
    /// Record wall-clock times into `timings_ms` (off in JSON mode).
    pub record_wall_times: bool,
    /// Instance budget for `verify` commands.
    pub suite_budget: u64,
}

impl Default for ExecSettings {
    fn default() -> Self {
        ExecSettings {
            order: MonomialOrder::GrevLex,
            config: EngineConfig::default(),
            expect: None,
            record_wall_times: false,
            suite_budget: SUITE_INSTANCE_BUDGET,
        }
    }
}

pub struct RunOutcome {
    pub reports: Vec<CommandReport>,
    pub exit: i32,
}

fn exit_for_error(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn failure_report(command: String, e: &Error, text: &str, span: Span) -> CommandReport {
    let (line, col) = line_col(text, span.start);
    CommandReport {
        command,
        inputs: BTreeMap::new(),
        outcome: "error".to_string(),
        certificate: None,
        diagnostics: vec![format!("line {line}, column {col}: {e}")],
        timings_ms: BTreeMap::new(),
        suite_report: None,
    }
}

/// Execute a parsed program: construct rings and maps in order, run each
/// command, and stop at the first error (nothing downstream of a failed
/// declaration runs). The exit code encodes the overall result.
pub fn execute_program(prog: &SourceProgram, settings: &ExecSettings) -> RunOutcome {
    let mut rings: BTreeMap<String, PresentedAlgebra> = BTreeMap::new();
    let mut maps: BTreeMap<String, AlgebraMap> = BTreeMap::new();
    let mut reports = Vec::new();
    let mut last_outcome: Option<String> = None;
    let mut negative = false;

    for stmt in &prog.stmts {
        match stmt {
            Stmt::Prime { .. } => {}
            Stmt::Ring(r) => {
                match PresentedAlgebra::new(&r.ctx, r.relations.clone(), &settings.config.groebner)
                {
                    Ok(alg) => {
                        rings.insert(r.name.clone(), alg);
                    }
                    Err(e) => {
                        reports.push(failure_report(
                            format!("ring {}", r.name),
                            &e,
                            &prog.text,
                            r.span,
                        ));
                        return RunOutcome { reports, exit: exit_for_error(&e) };
                    }
                }
            }
            Stmt::Map(m) => {
                let src = &rings[&m.source];
                let tgt = &rings[&m.target];
                match make_map(src, tgt, m.images.clone()) {
                    Ok(map) => {
                        maps.insert(m.name.clone(), map);
                    }
                    Err(e) => {
                        reports.push(failure_report(
                            format!("map {}", m.name),
                            &e,
                            &prog.text,
                            m.span,
                        ));
                        return RunOutcome { reports, exit: exit_for_error(&e) };
                    }
                }
            }
            Stmt::Cmd(c) => {
                let started = Instant::now();
                match run_command(&c.command, &rings, &maps, settings) {
                    Ok(mut report) => {
                        if settings.record_wall_times {
                            report
                                .timings_ms
                                .insert("wall".to_string(), started.elapsed().as_millis() as u64);
                        }
                        if report.outcome == "fail" {
                            negative = true;
                        }
                        last_outcome = Some(report.outcome.clone());
                        reports.push(report);
                    }
                    Err(e) => {
                        reports.push(failure_report(
                            c.command.to_string(),
                            &e,
                            &prog.text,
                            c.span,
                        ));
                        return RunOutcome { reports, exit: exit_for_error(&e) };
                    }
                }
            }
        }
    }

    if let Some(expected) = settings.expect {
        if last_outcome.as_deref() != Some(expected.word()) {
            negative = true;
        }
    }
    RunOutcome { reports, exit: i32::from(negative) }
}

/// Run one command against the declared rings and maps. Parsing guarantees
/// every referenced name is present.
fn run_command(
    cmd: &Command,
    rings: &BTreeMap<String, PresentedAlgebra>,
    maps: &BTreeMap<String, AlgebraMap>,
    settings: &ExecSettings,
) -> crate::error::Result<CommandReport> {
    let ord = &settings.order;
    let mut inputs = BTreeMap::new();
    let mut diagnostics = Vec::new();

    let (outcome, certificate, suite_report) = match cmd {
        Command::Pushout { map, e, purity } => {
            let f = &maps[map];
            inputs.insert("map".to_string(), json!(map));
            inputs.insert("e".to_string(), json!(e));
            let pd = radu_andre_pushout(f, *e, &settings.config)?;
            diagnostics.push(format!("pushout presentation: {}", pd.pushout.describe()));
            diagnostics.push(format!("comparison map: {}", pd.phi.describe()));
            match purity {
                None => ("constructed".to_string(), None, None),
                Some(requested) => {
                    let bound = requested.unwrap_or(settings.config.degree_bound);
                    inputs.insert("purity_bound".to_string(), json!(bound));
                    match purity_witness(&pd, bound, &settings.config)? {
                        PurityOutcome::Pure(w) => {
                            diagnostics.push(format!("purity witness: {}", w.description));
                            let cert = CertificateJson {
                                generators: w.basis.iter().map(|b| b.to_text(ord)).collect(),
                                expansions: Vec::new(),
                            };
                            ("pure".to_string(), Some(cert), None)
                        }
                        PurityOutcome::Unknown(reason) => {
                            diagnostics.push(match reason {
                                UnknownReason::BoundExhausted => format!(
                                    "no retraction found within degree bound {bound} (purity \
                                     neither established nor refuted)"
                                ),
                                UnknownReason::SplitUpToDegree(d) => format!(
                                    "a retraction exists on monomials of degree <= {d} but was \
                                     not promoted to a global witness"
                                ),
                            });
                            ("unknown".to_string(), None, None)
                        }
                    }
                }
            }
        }
        Command::Ffinite { map, e } => {
            let f = &maps[map];
            inputs.insert("map".to_string(), json!(map));
            let verdict = match e {
                Some(e) => {
                    inputs.insert("e".to_string(), json!(e));
                    certify_f_finite(f, *e, &settings.config)?
                }
                None => {
                    diagnostics
                        .push("module-finiteness of the map itself (no Frobenius twist)".to_string());
                    module_finiteness(f, &settings.config.groebner)?
                }
            };
            match verdict {
                FinitenessVerdict::Finite(cert) => {
                    diagnostics.push(format!("basis source: {}", cert.verdict_source));
                    let target_vars = f.target().context().vars().to_vec();
                    ("finite".to_string(), Some(certificate_json(&cert, &target_vars, ord)), None)
                }
                FinitenessVerdict::Infinite { witness_variable } => {
                    diagnostics.push(format!("unbounded direction: {witness_variable}"));
                    ("infinite".to_string(), None, None)
                }
            }
        }
        Command::Bracket { ring, e } => {
            let a = &rings[ring];
            inputs.insert("ideal".to_string(), json!(ring));
            inputs.insert("e".to_string(), json!(e));
            let powered = bracket_power(a.relations(), *e)?;
            diagnostics.push(format!("bracket power of the relation ideal of {}", a.describe()));
            let cert = CertificateJson {
                generators: powered.generators().iter().map(|g| g.to_text(ord)).collect(),
                expansions: Vec::new(),
            };
            ("computed".to_string(), Some(cert), None)
        }
        Command::Groebner { ring } => {
            let a = &rings[ring];
            inputs.insert("ring".to_string(), json!(ring));
            inputs.insert(
                "order".to_string(),
                json!(match ord {
                    MonomialOrder::Lex => "lex",
                    MonomialOrder::GrevLex => "grevlex",
                    MonomialOrder::Block { .. } => "block",
                }),
            );
            let gb = groebner_basis(a.relations(), ord, &settings.config.groebner)?;
            diagnostics.push(format!("reduced basis of the relation ideal of {}", a.describe()));
            let cert = CertificateJson {
                generators: gb.elements().iter().map(|g| g.to_text(ord)).collect(),
                expansions: Vec::new(),
            };
            ("computed".to_string(), Some(cert), None)
        }
        Command::Verify { suite } => {
            inputs.insert("suite".to_string(), json!(suite));
            inputs.insert("seed".to_string(), json!(settings.config.seed));
            inputs.insert("budget".to_string(), json!(settings.suite_budget));
            let report =
                run_suite(suite, settings.config.seed, settings.suite_budget, &settings.config)?;
            for s in &report.scenarios {
                diagnostics.push(format!(
                    "{}: {} instances, {} violations",
                    s.name, s.instances, s.violations
                ));
                for note in &s.notes {
                    diagnostics.push(format!("  {}: {note}", s.name));
                }
            }
            let outcome = if report.violations == 0 { "pass" } else { "fail" };
            (outcome.to_string(), None, Some(report.scrubbed()))
        }
    };

    Ok(CommandReport {
        command: cmd.to_string(),
        inputs,
        outcome,
        certificate,
        diagnostics,
        timings_ms: BTreeMap::new(),
        suite_report,
    })
}

// ---------------------------------------------------------------------------
// Front end
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "frobkit",
    version,
    about = "Frobenius-finiteness toolkit for finitely presented algebras over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Parse and execute a program file (conventionally `.frk`; `-` reads stdin).
    Run {
        /// Path to the program, or `-` for stdin.
        file: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a named verification suite without a program file.
    Verify {
        /// Suite name (`all` runs every scenario).
        suite: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Debug, Clone)]
struct Flags {
    /// Emit reports as a JSON array on stdout instead of text.
    #[arg(long, env = "FROBKIT_JSON")]
    json: bool,

    /// Monomial order for printing and `groebner` commands.
    #[arg(long, value_enum, env = "FROBKIT_ORDER", default_value_t = OrderFlag::Grevlex)]
    order: OrderFlag,

    /// Cap on S-pair reductions inside basis computations.
    #[arg(long, env = "FROBKIT_BUDGET", default_value_t = GroebnerConfig::default().spair_budget)]
    budget: u64,

    /// Degree bound for purity-witness searches.
    #[arg(long, env = "FROBKIT_DEGREE_BOUND", default_value_t = EngineConfig::default().degree_bound)]
    degree_bound: u64,

    /// Seed for randomized verification suites.
    #[arg(long, env = "FROBKIT_SEED", default_value_t = 0)]
    seed: u64,

    /// Largest Frobenius twist exponent the engine accepts.
    #[arg(long, env = "FROBKIT_E_MAX", default_value_t = EngineConfig::default().e_max)]
    e_max: u64,

    /// Require the final command's outcome to match, exiting 1 otherwise.
    #[arg(long, value_enum, env = "FROBKIT_EXPECT")]
    expect: Option<ExpectFlag>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OrderFlag {
    Lex,
    Grevlex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExpectFlag {
    Finite,
    Infinite,
    Pure,
}

impl From<ExpectFlag> for Expectation {
    fn from(f: ExpectFlag) -> Self {
        match f {
            ExpectFlag::Finite => Expectation::Finite,
            ExpectFlag::Infinite => Expectation::Infinite,
            ExpectFlag::Pure => Expectation::Pure,
        }
    }
}

impl Flags {
    fn settings(&self) -> ExecSettings {
        ExecSettings {
            order: match self.order {
                OrderFlag::Lex => MonomialOrder::Lex,
                OrderFlag::Grevlex => MonomialOrder::GrevLex,
            },
            config: EngineConfig {
                groebner: GroebnerConfig { spair_budget: self.budget },
                e_max: self.e_max,
                degree_bound: self.degree_bound,
                seed: self.seed,
            },
            expect: self.expect.map(Into::into),
            record_wall_times: !self.json,
            suite_budget: SUITE_INSTANCE_BUDGET,
        }
    }
}

/// Binary entry point; returns the process exit code.
pub fn main_entry() -> i32 {
    run_cli(std::env::args_os())
}

/// Argument-driven entry point, separated for testing.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        CliCommand::Run { file, flags } => run_program_file(&file, &flags),
        CliCommand::Verify { suite, flags } => {
            let text = format!("verify {suite};");
            run_program_text(&text, &flags)
        }
    }
}

fn run_program_file(file: &str, flags: &Flags) -> i32 {
    let text = if file == "-" {
        use std::io::Read;
        let mut buf = String::new();
        match std::io::stdin().read_to_string(&mut buf) {
            Ok(_) => buf,
            Err(e) => {
                eprintln!("error: cannot read stdin: {e}");
                return 2;
            }
        }
    } else {
        match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read `{file}`: {e}");
                return 2;
            }
        }
    };
    run_program_text(&text, flags)
}

fn run_program_text(text: &str, flags: &Flags) -> i32 {
    let prog = match parse_source(text) {
        Ok(p) => p,
        Err(e) => {
            let (line, col) = line_col(text, e.span.start);
            eprintln!("parse error at line {line}, column {col}: {}", e.message);
            return 2;
        }
    };
    let settings = flags.settings();
    let outcome = execute_program(&prog, &settings);
    emit_reports(&outcome.reports, flags.json);
    outcome.exit
}

fn emit_reports(reports: &[CommandReport], json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
    } else {
        for r in reports {
            print_report(r);
        }
    }
}

fn print_report(r: &CommandReport) {
    println!("== {}", r.command);
    println!("   outcome: {}", r.outcome);
    if let Some(cert) = &r.certificate {
        println!("   generators: {}", cert.generators.join(", "));
        if !cert.expansions.is_empty() {
            println!("   expansions: {} closure identities", cert.expansions.len());
        }
    }
    for d in &r.diagnostics {
        println!("   {d}");
    }
    if let Some(ms) = r.timings_ms.get("wall") {
        println!("   wall: {ms} ms");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(src: &str) -> SourceProgram {
        parse_source(src).expect("program should parse")
    }

    fn run(src: &str) -> RunOutcome {
        execute_program(&parsed(src), &ExecSettings::default())
    }

    fn run_with(src: &str, settings: &ExecSettings) -> RunOutcome {
        execute_program(&parsed(src), settings)
    }

    const CUSP: &str = "p=3; ring A = poly(x,y)/(y^2-x^3); ring B = poly(t); \
                        map f : A -> B = { x -> t^2, y -> t^3 }; ffinite f e=1;";

    #[test]
    fn round_trip_is_structurally_identical() {
        let src = "p = 3;\n\
                   ring A = poly(x,y)/(y^2-x^3);\n\
                   ring B = poly(t);\n\
                   map f : A -> B = { y -> t^3, x -> t^2 };\n\
                   pushout f e=1 purity=4;\n\
                   ffinite f e=1;\n\
                   ffinite f;\n\
                   bracket A e=2;\n\
                   groebner B;\n\
                   verify example_2_3;\n";
        let prog = parsed(src);
        let printed = prog.to_string();
        let reparsed = parse_source(&printed).expect("canonical output should reparse");
        assert!(structurally_equal(&prog, &reparsed), "round trip changed the program");
        assert_eq!(printed, reparsed.to_string(), "canonical printing should be idempotent");
        // Printing orders map assignments by source variable.
        assert!(printed.contains("{ x -> t^2, y -> t^3 }"), "got: {printed}");
    }

    #[test]
    fn modulus_must_be_prime() {
        let e = parse_source("p=4; ring A = poly(x);").unwrap_err();
        assert!(e.message.contains("not a prime"), "got: {}", e.message);
        assert_eq!(e.span.start, 2, "the diagnostic should point at the modulus literal");

        let e = parse_source("p=2; p=3;").unwrap_err();
        assert!(e.message.contains("already declared"), "got: {}", e.message);

        let e = parse_source("ring A = poly(x);").unwrap_err();
        assert!(e.message.contains("no prime declared"), "got: {}", e.message);
    }

    #[test]
    fn names_are_checked_at_parse_time() {
        // Undeclared ring in a map signature.
        let e = parse_source("p=2; ring A = poly(x); map f : A -> B = { x -> x };").unwrap_err();
        assert!(e.message.contains("unknown ring `B`"), "got: {}", e.message);

        // Shadowing across namespaces.
        let e = parse_source("p=2; ring A = poly(x); map A : A -> A = { x -> x };").unwrap_err();
        assert!(e.message.contains("already declared"), "got: {}", e.message);

        // Reserved words cannot be declared.
        let e = parse_source("p=2; ring verify = poly(x);").unwrap_err();
        assert!(e.message.contains("statement keyword"), "got: {}", e.message);

        // Duplicate ring variable.
        let e = parse_source("p=2; ring A = poly(x,x);").unwrap_err();
        assert!(e.message.contains("duplicate ring variable"), "got: {}", e.message);

        // Commands must reference declared names.
        let e = parse_source("p=2; ring A = poly(x); ffinite f;").unwrap_err();
        assert!(e.message.contains("unknown map `f`"), "got: {}", e.message);
        let e = parse_source("verify no_such_suite;").unwrap_err();
        assert!(e.message.contains("unknown verification suite"), "got: {}", e.message);
    }

    #[test]
    fn map_assignments_must_cover_the_source() {
        let base = "p=2; ring A = poly(x,y); ring B = poly(t); ";
        let e = parse_source(&format!("{base}map f : A -> B = {{ x -> t }};")).unwrap_err();
        assert!(e.message.contains("no image for variable `y`"), "got: {}", e.message);

        let e = parse_source(&format!("{base}map f : A -> B = {{ x -> t, x -> t^2 }};"))
            .unwrap_err();
        assert!(e.message.contains("assigned twice"), "got: {}", e.message);

        let e = parse_source(&format!("{base}map f : A -> B = {{ t -> t }};")).unwrap_err();
        assert!(e.message.contains("not a variable of ring `A`"), "got: {}", e.message);
    }

    #[test]
    fn homomorphism_failure_is_semantic_not_syntactic() {
        let src = "p=2; ring A = poly(x)/(x^2); ring B = poly(y); map f : A -> B = { x -> y };";
        let prog = parsed(src); // parses fine
        let outcome = execute_program(&prog, &ExecSettings::default());
        assert_eq!(outcome.exit, 2);
        let report = outcome.reports.last().expect("a failure report");
        assert_eq!(report.outcome, "error");
        assert_eq!(report.command, "map f");
        assert!(
            report.diagnostics[0].contains("not a homomorphism"),
            "got: {:?}",
            report.diagnostics
        );
    }

    #[test]
    fn cuspidal_instance_certifies_finite() {
        let outcome = run(CUSP);
        assert_eq!(outcome.exit, 0);
        let report = &outcome.reports[0];
        assert_eq!(report.outcome, "finite");
        let cert = report.certificate.as_ref().expect("a certificate");
        assert!(!cert.generators.is_empty());
        assert!(!cert.expansions.is_empty());
    }

    #[test]
    fn power_generators_come_out_exactly() {
        let src = "p=3; ring A = poly(s)/(s); ring B = poly(x); \
                   map f : A -> B = { s -> 0 }; ffinite f e=1;";
        let outcome = run(src);
        assert_eq!(outcome.exit, 0);
        let cert = outcome.reports[0].certificate.as_ref().expect("a certificate");
        assert_eq!(cert.generators, vec!["1", "x", "x^2"]);
    }

    #[test]
    fn bracket_generators_match_the_generatorwise_powers() {
        let src = "p=2; ring A = poly(x,y)/(x+y, y^2); bracket A e=1;";
        let outcome = run(src);
        assert_eq!(outcome.exit, 0);
        let cert = outcome.reports[0].certificate.as_ref().expect("generators");
        assert_eq!(cert.generators, vec!["x^2+y^2", "y^4"]);
    }

    #[test]
    fn untwisted_run_is_the_negative_control() {
        let src = "p=2; ring A = poly(t); ring B = poly(x,y); \
                   map f : A -> B = { t -> x }; ffinite f;";
        let outcome = run(src);
        assert_eq!(outcome.exit, 0, "a mathematical negative alone is not a failure");
        let report = &outcome.reports[0];
        assert_eq!(report.outcome, "infinite");
        assert!(report.certificate.is_none());
        assert!(
            report.diagnostics.iter().any(|d| d.contains("unbounded direction: y")),
            "got: {:?}",
            report.diagnostics
        );

        let mut expecting = ExecSettings::default();
        expecting.expect = Some(Expectation::Finite);
        assert_eq!(run_with(src, &expecting).exit, 1, "--expect finite must exit 1");

        expecting.expect = Some(Expectation::Infinite);
        assert_eq!(run_with(src, &expecting).exit, 0, "--expect infinite is satisfied");
    }

    #[test]
    fn budget_exhaustion_exits_three() {
        let src = "p=3; ring R = poly(x,y,z)/(x^2+y*z, y^2+x*z, z^2+x*y); groebner R;";
        let mut settings = ExecSettings::default();
        settings.config.groebner.spair_budget = 0;
        let outcome = run_with(src, &settings);
        assert_eq!(outcome.exit, 3);
        assert_eq!(outcome.reports.last().unwrap().outcome, "error");
    }

    #[test]
    fn pushout_reports_construction_and_purity() {
        let base = "p=2; ring B = poly(x); ring C = poly(x,t); map g : B -> C = { x -> x }; ";
        let outcome = run(&format!("{base}pushout g e=1;"));
        assert_eq!(outcome.exit, 0);
        assert_eq!(outcome.reports[0].outcome, "constructed");

        let outcome = run(&format!("{base}pushout g e=1 purity;"));
        assert_eq!(outcome.reports[0].outcome, "pure");
        assert!(outcome.reports[0].certificate.is_some(), "a witness basis is reported");

        let mut expecting = ExecSettings::default();
        expecting.expect = Some(Expectation::Pure);
        assert_eq!(run_with(&format!("{base}pushout g e=1 purity;"), &expecting).exit, 0);
    }

    #[test]
    fn verify_reports_depend_only_on_the_seed() {
        let src = "verify example_2_3;";
        let a = run(src);
        let b = run(src);
        assert_eq!(a.exit, 0);
        let ja = serde_json::to_string_pretty(&a.reports).unwrap();
        let jb = serde_json::to_string_pretty(&b.reports).unwrap();
        assert_eq!(ja, jb, "verification reports must be byte-stable");
        assert_eq!(a.reports[0].outcome, "pass");
        assert!(a.reports[0].suite_report.is_some());
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let src = "p=2;\nring A = poly(;";
        let e = parse_source(src).unwrap_err();
        let (line, col) = line_col(src, e.span.start);
        assert_eq!((line, col), (2, 15));

        let e = parse_source("p=4;").unwrap_err();
        let (line, col) = line_col("p=4;", e.span.start);
        assert_eq!((line, col), (1, 3));
    }
}
