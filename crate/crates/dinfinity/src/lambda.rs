//! Untyped lambda calculus: terms, parsing, capture-avoiding substitution,
//! single-step beta reduction, fueled normalization, and beta-conversion
//! proofs as explicit validated rewrite chains.
//!
//! Alpha equality goes through a canonical de Bruijn form. Proof chains
//! follow the usual presentation of beta equality: a sequence of terms where
//! each step is a one-step reduction, a one-step expansion, or an alpha
//! renaming, with the chain's length counting the non-start steps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LambdaError {
    #[error("syntax error at position {0}")]
    SyntaxError(usize),
    #[error("empty proof")]
    EmptyProof,
    #[error("step 0 must have kind `start`")]
    BadStart,
    #[error("invalid step {index} ({kind:?}): `{from}` does not reach `{to}`")]
    InvalidStep {
        index: usize,
        kind: StepKind,
        from: String,
        to: String,
    },
    #[error("endpoint mismatch: first proof ends at `{0}`, second starts at `{1}`")]
    EndpointMismatch(String, String),
    #[error("unknown step kind `{0}`")]
    UnknownStepKind(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(Box<Term>, Box<Term>),
    Lam(String, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.to_owned(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Term::Var(x) => BTreeSet::from([x.clone()]),
            Term::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            Term::Lam(x, body) => {
                let mut s = body.free_vars();
                s.remove(x);
                s
            }
        }
    }

    pub fn to_debruijn(&self) -> DbTerm {
        fn go(t: &Term, ctx: &mut Vec<String>) -> DbTerm {
            match t {
                Term::Var(x) => match ctx.iter().rev().position(|b| b == x) {
                    Some(i) => DbTerm::Bound(i),
                    None => DbTerm::Free(x.clone()),
                },
                Term::App(f, a) => DbTerm::App(Box::new(go(f, ctx)), Box::new(go(a, ctx))),
                Term::Lam(x, body) => {
                    ctx.push(x.clone());
                    let b = go(body, ctx);
                    ctx.pop();
                    DbTerm::Lam(Box::new(b))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.to_debruijn() == other.to_debruijn()
    }
}

/// Canonical nameless form; two terms are alpha-equal iff their de Bruijn
/// forms coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DbTerm {
    Bound(usize),
    Free(String),
    App(Box<DbTerm>, Box<DbTerm>),
    Lam(Box<DbTerm>),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 0 top, 1 application head, 2 argument
        fn go(t: &Term, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(x) => write!(f, "{x}"),
                Term::Lam(x, body) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    write!(f, "\\{x}. ")?;
                    go(body, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Term::App(fun, arg) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(fun, 1, f)?;
                    write!(f, " ")?;
                    go(arg, 2, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LPar,
    RPar,
    Ident(String),
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, LambdaError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push((pos, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((pos, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LPar));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RPar));
                i += 1;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while i < chars.len() {
                    let (_, c) = chars[i];
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(name)));
            }
            _ => return Err(LambdaError::SyntaxError(pos)),
        }
    }
    Ok(out)
}

/// Parses `\x. body` (also `λx y. body` with binder lists), application by
/// juxtaposition (left-associative), and parentheses.
pub fn parse(input: &str) -> Result<Term, LambdaError> {
    let toks = lex(input)?;
    let mut pos = 0usize;
    let term = parse_expr(&toks, &mut pos, input.len())?;
    if pos != toks.len() {
        return Err(LambdaError::SyntaxError(toks[pos].0));
    }
    Ok(term)
}

fn parse_expr(toks: &[(usize, Tok)], pos: &mut usize, end: usize) -> Result<Term, LambdaError> {
    if let Some((_, Tok::Lambda)) = toks.get(*pos) {
        *pos += 1;
        let mut binders = Vec::new();
        while let Some((_, Tok::Ident(x))) = toks.get(*pos) {
            binders.push(x.clone());
            *pos += 1;
        }
        if binders.is_empty() {
            let p = toks.get(*pos).map_or(end, |t| t.0);
            return Err(LambdaError::SyntaxError(p));
        }
        match toks.get(*pos) {
            Some((_, Tok::Dot)) => *pos += 1,
            t => return Err(LambdaError::SyntaxError(t.map_or(end, |t| t.0))),
        }
        let body = parse_expr(toks, pos, end)?;
        return Ok(binders
            .into_iter()
            .rev()
            .fold(body, |acc, x| Term::Lam(x, Box::new(acc))));
    }
    let mut head = parse_atom(toks, pos, end)?
        .ok_or_else(|| LambdaError::SyntaxError(toks.get(*pos).map_or(end, |t| t.0)))?;
    while let Some(arg) = parse_atom(toks, pos, end)? {
        head = Term::app(head, arg);
    }
    Ok(head)
}

fn parse_atom(
    toks: &[(usize, Tok)],
    pos: &mut usize,
    end: usize,
) -> Result<Option<Term>, LambdaError> {
    match toks.get(*pos) {
        Some((_, Tok::Ident(x))) => {
            *pos += 1;
            Ok(Some(Term::Var(x.clone())))
        }
        Some((_, Tok::LPar)) => {
            *pos += 1;
            let inner = parse_expr(toks, pos, end)?;
            match toks.get(*pos) {
                Some((_, Tok::RPar)) => {
                    *pos += 1;
                    Ok(Some(inner))
                }
                t => Err(LambdaError::SyntaxError(t.map_or(end, |t| t.0))),
            }
        }
        Some((_, Tok::Lambda)) => {
            // lambda directly in argument position needs parentheses; let the
            // caller stop the application run here
            Ok(None)
        }
        _ => Ok(None),
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding substitution `[arg / x] body`.
pub fn subst(body: &Term, x: &str, arg: &Term) -> Term {
    match body {
        Term::Var(y) => {
            if y == x {
                arg.clone()
            } else {
                body.clone()
            }
        }
        Term::App(f, a) => Term::app(subst(f, x, arg), subst(a, x, arg)),
        Term::Lam(y, b) => {
            if y == x {
                body.clone()
            } else if arg.free_vars().contains(y) && b.free_vars().contains(x) {
                let mut avoid = arg.free_vars();
                avoid.extend(b.free_vars());
                avoid.insert(x.to_owned());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst(b, y, &Term::var(&y2));
                Term::Lam(y2, Box::new(subst(&renamed, x, arg)))
            } else {
                Term::Lam(y.clone(), Box::new(subst(b, x, arg)))
            }
        }
    }
}

/// Every single-step beta reduct of the whole term, with the redex position
/// spelled as a path of `f` (function side), `a` (argument side), `b` (under
/// a binder); the empty path is the root. Root-first, function before
/// argument, so the first entry contracts the normal-order redex.
pub fn beta_step(term: &Term) -> Vec<(String, Term)> {
    let mut out = Vec::new();
    match term {
        Term::Var(_) => {}
        Term::App(f, a) => {
            if let Term::Lam(x, body) = f.as_ref() {
                out.push((String::new(), subst(body, x, a)));
            }
            for (p, r) in beta_step(f) {
                out.push((format!("f{p}"), Term::app(r, (**a).clone())));
            }
            for (p, r) in beta_step(a) {
                out.push((format!("a{p}"), Term::app((**f).clone(), r)));
            }
        }
        Term::Lam(x, body) => {
            for (p, r) in beta_step(body) {
                out.push((format!("b{p}"), Term::Lam(x.clone(), Box::new(r))));
            }
        }
    }
    out
}

/// `reduces_to` in one beta step, up to alpha.
pub fn one_step_beta(from: &Term, to: &Term) -> bool {
    beta_step(from).iter().any(|(_, r)| r.alpha_eq(to))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeResult {
    NormalForm(Term),
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct Normalization {
    /// The trace, starting with the input term.
    pub trace: Vec<Term>,
    pub result: NormalizeResult,
}

/// Normal-order reduction with a fuel bound; never diverges.
pub fn normalize(term: &Term, fuel: usize) -> Normalization {
    let mut trace = vec![term.clone()];
    let mut current = term.clone();
    for _ in 0..fuel {
        match beta_step(&current).into_iter().next() {
            None => {
                return Normalization {
                    trace,
                    result: NormalizeResult::NormalForm(current),
                }
            }
            Some((_, next)) => {
                trace.push(next.clone());
                current = next;
            }
        }
    }
    if beta_step(&current).is_empty() {
        Normalization {
            result: NormalizeResult::NormalForm(current),
            trace,
        }
    } else {
        Normalization {
            trace,
            result: NormalizeResult::FuelExhausted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Start,
    BetaForward,
    BetaBackward,
    Alpha,
}

/// A validated beta-conversion chain `M = N_0 = N_1 = ... = N_n = N`.
///
/// Step `i >= 1` records how `N_i` follows from `N_{i-1}`: a forward step
/// reduces, a backward step expands, an alpha step renames. The chain length
/// `t(P)` counts the non-start steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionProof {
    steps: Vec<(Term, StepKind)>,
}

impl ConversionProof {
    pub fn new(steps: Vec<(Term, StepKind)>) -> Result<ConversionProof, LambdaError> {
        if steps.is_empty() {
            return Err(LambdaError::EmptyProof);
        }
        if steps[0].1 != StepKind::Start {
            return Err(LambdaError::BadStart);
        }
        for i in 1..steps.len() {
            let prev = &steps[i - 1].0;
            let cur = &steps[i].0;
            let kind = steps[i].1;
            let ok = match kind {
                StepKind::Start => false,
                StepKind::BetaForward => one_step_beta(prev, cur),
                StepKind::BetaBackward => one_step_beta(cur, prev),
                StepKind::Alpha => prev.alpha_eq(cur),
            };
            if !ok {
                return Err(LambdaError::InvalidStep {
                    index: i,
                    kind,
                    from: prev.to_string(),
                    to: cur.to_string(),
                });
            }
        }
        Ok(ConversionProof { steps })
    }

    /// Reflexivity: the single-term chain with `t = 0`.
    pub fn reflexive(term: Term) -> ConversionProof {
        ConversionProof {
            steps: vec![(term, StepKind::Start)],
        }
    }

    pub fn steps(&self) -> &[(Term, StepKind)] {
        &self.steps
    }

    pub fn first(&self) -> &Term {
        &self.steps[0].0
    }

    pub fn last(&self) -> &Term {
        &self.steps.last().unwrap().0
    }

    /// `t(P)`: the number of non-start steps.
    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }

    /// Reverses the chain, swapping forward and backward steps.
    pub fn inverse(&self) -> ConversionProof {
        let n = self.steps.len();
        let mut steps = Vec::with_capacity(n);
        steps.push((self.steps[n - 1].0.clone(), StepKind::Start));
        for i in (1..n).rev() {
            let kind = match self.steps[i].1 {
                StepKind::BetaForward => StepKind::BetaBackward,
                StepKind::BetaBackward => StepKind::BetaForward,
                StepKind::Alpha => StepKind::Alpha,
                StepKind::Start => unreachable!("start only at index 0"),
            };
            steps.push((self.steps[i - 1].0.clone(), kind));
        }
        ConversionProof { steps }
    }

    /// Concatenation; the junction terms must be alpha-equal, and
    /// `t(P * Q) = t(P) + t(Q)`.
    pub fn concat(&self, other: &ConversionProof) -> Result<ConversionProof, LambdaError> {
        if !self.last().alpha_eq(other.first()) {
            return Err(LambdaError::EndpointMismatch(
                self.last().to_string(),
                other.first().to_string(),
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps[1..].iter().cloned());
        ConversionProof::new(steps)
    }

    /// Proves the same equation: shared first and last terms up to alpha.
    pub fn same_equation(&self, other: &ConversionProof) -> bool {
        self.first().alpha_eq(other.first()) && self.last().alpha_eq(other.last())
    }
}

/// Proof JSON schema: `{"steps":[{"term":"...","kind":"start"}, ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProofFile {
    pub steps: Vec<ProofStepFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProofStepFile {
    pub term: String,
    pub kind: StepKind,
}

impl ProofFile {
    pub fn to_proof(&self) -> Result<ConversionProof, LambdaError> {
        let steps = self
            .steps
            .iter()
            .map(|s| Ok((parse(&s.term)?, s.kind)))
            .collect::<Result<Vec<_>, LambdaError>>()?;
        ConversionProof::new(steps)
    }

    pub fn from_proof(proof: &ConversionProof) -> ProofFile {
        ProofFile {
            steps: proof
                .steps()
                .iter()
                .map(|(t, k)| ProofStepFile {
                    term: t.to_string(),
                    kind: *k,
                })
                .collect(),
        }
    }
}

/// The whole-term reduct contracting the redex at `path`, if there is one.
pub fn reduce_at(term: &Term, path: &str) -> Option<Term> {
    beta_step(term)
        .into_iter()
        .find(|(p, _)| p == path)
        .map(|(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn parse_identity() {
        assert_eq!(p("\\x.x"), Term::lam("x", Term::var("x")));
        assert_eq!(p("λx.x"), Term::lam("x", Term::var("x")));
    }

    #[test]
    fn parse_application() {
        assert_eq!(
            p("(\\x.x) y"),
            Term::app(Term::lam("x", Term::var("x")), Term::var("y"))
        );
        // left associative
        assert_eq!(
            p("f x y"),
            Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y"))
        );
    }

    #[test]
    fn parse_binder_lists() {
        assert_eq!(p("\\x y. x"), p("\\x. \\y. x"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse("\\x").unwrap_err(), LambdaError::SyntaxError(2));
        assert_eq!(parse("(x").unwrap_err(), LambdaError::SyntaxError(2));
        assert_eq!(parse("x ? y").unwrap_err(), LambdaError::SyntaxError(2));
        assert!(parse("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "\\x. x",
            "(\\x. x) y",
            "f x y",
            "f (x y)",
            "\\x. \\y. x y",
            "(\\x. x x) (\\x. x x)",
            "x (\\y. y)",
        ] {
            let t = p(s);
            assert_eq!(p(&t.to_string()), t, "round trip failed for {s}");
        }
    }

    #[test]
    fn alpha_equality() {
        assert!(p("\\x.x").alpha_eq(&p("\\y.y")));
        assert!(!p("\\x.\\y.x").alpha_eq(&p("\\x.\\y.y")));
        assert!(!p("x").alpha_eq(&p("y"))); // free variables are rigid
    }

    #[test]
    fn free_vars_of_terms() {
        assert!(p("\\x.x").free_vars().is_empty());
        let fv = p("\\x. x y z").free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["y", "z"]);
    }

    #[test]
    fn substitution_avoids_capture() {
        // [y/x](\y. x) must not capture the substituted y
        let body = p("\\y. x");
        let result = subst(&body, "x", &Term::var("y"));
        assert!(result.alpha_eq(&p("\\z. y")));
        // shadowed variable is untouched
        let shadowed = p("\\x. x");
        assert_eq!(subst(&shadowed, "x", &Term::var("y")), shadowed);
    }

    #[test]
    fn beta_step_examples() {
        let reducts = beta_step(&p("(\\x.x) y"));
        assert_eq!(reducts.len(), 1);
        assert_eq!(reducts[0].1, p("y"));

        let omega = p("(\\x.x x) (\\x.x x)");
        let reducts = beta_step(&omega);
        assert_eq!(reducts.len(), 1);
        assert!(reducts[0].1.alpha_eq(&omega));

        assert!(beta_step(&p("\\x.x")).is_empty());
    }

    #[test]
    fn beta_positions_are_paths() {
        // both the root redex and one inside the argument
        let t = p("(\\x.x) ((\\y.y) z)");
        let positions: Vec<String> = beta_step(&t).into_iter().map(|(p, _)| p).collect();
        assert_eq!(positions, vec!["".to_owned(), "a".to_owned()]);
    }

    #[test]
    fn normalize_skk() {
        let skk_x = p("(\\x y z. x z (y z)) (\\a b. a) (\\a b. a) w");
        let norm = normalize(&skk_x, 100);
        assert_eq!(norm.result, NormalizeResult::NormalForm(p("w")));
    }

    #[test]
    fn normalize_omega_exhausts_fuel() {
        let omega = p("(\\x.x x) (\\x.x x)");
        let norm = normalize(&omega, 50);
        assert_eq!(norm.result, NormalizeResult::FuelExhausted);
        assert_eq!(norm.trace.len(), 51);
    }

    #[test]
    fn normal_order_reaches_normal_form_despite_omega() {
        // K y Omega: applicative order diverges, normal order terminates
        let t = p("(\\a b. a) y ((\\x.x x) (\\x.x x))");
        let norm = normalize(&t, 100);
        assert_eq!(norm.result, NormalizeResult::NormalForm(p("y")));
    }

    #[test]
    fn reflexive_proof_has_length_zero() {
        let proof = ConversionProof::reflexive(p("x"));
        assert_eq!(proof.length(), 0);
    }

    #[test]
    fn valid_one_step_proof() {
        let proof = ConversionProof::new(vec![
            (p("(\\x.x) y"), StepKind::Start),
            (p("y"), StepKind::BetaForward),
        ])
        .unwrap();
        assert_eq!(proof.length(), 1);
    }

    #[test]
    fn invalid_backward_step_is_reported() {
        let err = ConversionProof::new(vec![
            (p("y"), StepKind::Start),
            (p("(\\x.x) z"), StepKind::BetaBackward),
        ])
        .unwrap_err();
        match err {
            LambdaError::InvalidStep { index: 1, .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn inverse_swaps_directions_and_keeps_length() {
        let proof = ConversionProof::new(vec![
            (p("(\\x.x) ((\\y.y) z)"), StepKind::Start),
            (p("(\\x.x) z"), StepKind::BetaForward),
            (p("z"), StepKind::BetaForward),
        ])
        .unwrap();
        let inv = proof.inverse();
        assert_eq!(inv.length(), proof.length());
        assert_eq!(inv.first(), proof.last());
        assert_eq!(inv.last(), proof.first());
        assert_eq!(inv.steps()[1].1, StepKind::BetaBackward);
        // inverse of a validated proof revalidates
        assert!(ConversionProof::new(inv.steps().to_vec()).is_ok());
    }

    #[test]
    fn concat_adds_lengths() {
        let front = ConversionProof::new(vec![
            (p("(\\x.x) ((\\y.y) z)"), StepKind::Start),
            (p("(\\x.x) z"), StepKind::BetaForward),
        ])
        .unwrap();
        let back = ConversionProof::new(vec![
            (p("(\\x.x) z"), StepKind::Start),
            (p("z"), StepKind::BetaForward),
        ])
        .unwrap();
        let whole = front.concat(&back).unwrap();
        assert_eq!(whole.length(), front.length() + back.length());

        let mismatched = back.concat(&back.inverse().concat(&back).unwrap());
        assert!(mismatched.is_ok()); // endpoints agree here
        let err = front.concat(&front).unwrap_err();
        assert!(matches!(err, LambdaError::EndpointMismatch(_, _)));
    }

    #[test]
    fn proof_file_round_trip() {
        let proof = ConversionProof::new(vec![
            (p("(\\x.x) y"), StepKind::Start),
            (p("y"), StepKind::BetaForward),
            (p("(\\w.w) y"), StepKind::BetaBackward),
        ])
        .unwrap();
        let file = ProofFile::from_proof(&proof);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: ProofFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.to_proof().unwrap(), proof);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_term() -> impl Strategy<Value = Term> {
            let names = prop_oneof![Just("x"), Just("y"), Just("z"), Just("w")];
            let leaf = names.clone().prop_map(|n: &str| Term::var(n));
            leaf.prop_recursive(4, 24, 2, move |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
                    (names.clone(), inner).prop_map(|(n, b)| Term::lam(n, b)),
                ]
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn printer_parser_round_trip(t in arb_term()) {
                prop_assert_eq!(parse(&t.to_string()).unwrap(), t);
            }

            #[test]
            fn substitution_preserves_alpha_classes(t in arb_term()) {
                // substituting a fresh variable and renaming back is identity
                let renamed = subst(&t, "x", &Term::var("fresh"));
                let back = subst(&renamed, "fresh", &Term::var("x"));
                prop_assert!(back.alpha_eq(&t));
            }

            #[test]
            fn inverse_is_involutive(t in arb_term()) {
                // build a short random-ish proof by reducing twice if possible
                let mut steps = vec![(t.clone(), StepKind::Start)];
                let mut cur = t;
                for _ in 0..2 {
                    if let Some((_, next)) = beta_step(&cur).into_iter().next() {
                        steps.push((next.clone(), StepKind::BetaForward));
                        cur = next;
                    }
                }
                if let Ok(proof) = ConversionProof::new(steps) {
                    let double = proof.inverse().inverse();
                    prop_assert_eq!(double, proof);
                }
            }
        }
    }
}
