//! Exact arithmetic over prime fields and sparse multivariate polynomials.
//!
//! Everything downstream (ideals, presented algebras, pushouts, certificates)
//! is carried by [`PrimePoly`]: a sparse, canonically sorted term list over a
//! shared [`PolyContext`] that fixes the modulus and the variable set once per
//! session. Cross-context operations are rejected, never coerced.

mod order;
mod text;

pub use order::{order_compare, MonomialOrder};
pub use text::{lex, parse_poly, parse_poly_tokens, PolyParseError, Span, Token, TokenCursor};

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Largest modulus accepted: products of two residues must fit in a u64.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// Deterministic primality by trial division; sufficient for p < 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// p^e with overflow detection.
pub fn prime_power(p: u64, e: u64) -> Result<u64> {
    let e32: u32 = e
        .try_into()
        .map_err(|_| Error::ExponentOverflow(format!("twist exponent {e} too large")))?;
    p.checked_pow(e32)
        .ok_or_else(|| Error::ExponentOverflow(format!("{p}^{e} exceeds machine width")))
}

/// Ambient context: the prime modulus and the ordered variable list.
///
/// Shared behind an `Arc` by every polynomial of one session. Two contexts are
/// compatible iff they are equal by value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyContext {
    p: u64,
    vars: Vec<String>,
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyContext {
    pub fn new(p: u64, vars: Vec<String>) -> Result<Arc<Self>> {
        if p < 2 || p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_var_name(v) {
                return Err(Error::InvalidContext(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidContext(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(PolyContext { p, vars }))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// A residue in [0, p) tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpElem {
    value: u64,
    p: u64,
}

impl FpElem {
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!(p >= 2);
        FpElem { value: value % p, p }
    }

    /// Reduce a signed integer, mapping negatives into [0, p).
    pub fn from_signed(value: i64, p: u64) -> Self {
        let m = value.rem_euclid(p as i64) as u64;
        FpElem { value: m, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    #[inline]
    pub fn add(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let s = self.value + rhs.value;
        FpElem {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }

    #[inline]
    pub fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        FpElem { value: v, p: self.p }
    }

    #[inline]
    pub fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        // p < 2^31, so the product fits a u64 without widening.
        FpElem {
            value: (self.value * rhs.value) % self.p,
            p: self.p,
        }
    }

    pub fn neg(self) -> Self {
        FpElem {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FpElem { value: 1 % self.p, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; zero has none.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }
}

/// Exponent vector with cached total degree.
///
/// The derived `Ord` (lexicographic on the exponent vector) is the structural
/// order used for canonical term storage; monomial *orders* for computation
/// live in [`MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u64>,
    degree: u64,
}

impl Monomial {
    pub fn new(exps: Vec<u64>) -> Result<Self> {
        let mut degree: u64 = 0;
        for &e in &exps {
            degree = degree
                .checked_add(e)
                .ok_or_else(|| Error::ExponentOverflow("total degree overflow".into()))?;
        }
        Ok(Monomial { exps, degree })
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial { exps: vec![0; num_vars], degree: 0 }
    }

    pub fn var(index: usize, num_vars: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[index] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Some((i, d)) iff the monomial is x_i^d with d >= 1 and no other variable.
    pub fn pure_power(&self) -> Option<(usize, u64)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        debug_assert_eq!(self.exps.len(), rhs.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&rhs.exps) {
            exps.push(a.checked_add(*b).ok_or_else(|| {
                Error::ExponentOverflow("monomial product exponent overflow".into())
            })?);
        }
        Monomial::new(exps)
    }

    pub fn try_pow(&self, k: u64) -> Result<Self> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for &a in &self.exps {
            exps.push(a.checked_mul(k).ok_or_else(|| {
                Error::ExponentOverflow("monomial power exponent overflow".into())
            })?);
        }
        Monomial::new(exps)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_of(&self, other: &Self) -> Self {
        debug_assert!(self.divides(other));
        let exps: Vec<u64> = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        let degree = other.degree - self.degree;
        Monomial { exps, degree }
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(exps)
    }
}

/// Sparse multivariate polynomial over F_p.
///
/// Invariants: no stored zero coefficients; terms strictly descending in the
/// structural monomial order; the zero polynomial has an empty term list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePoly {
    ctx: Arc<PolyContext>,
    terms: Vec<(Monomial, FpElem)>,
}

impl PrimePoly {
    pub fn zero(ctx: &Arc<PolyContext>) -> Self {
        PrimePoly { ctx: Arc::clone(ctx), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<PolyContext>) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn constant(ctx: &Arc<PolyContext>, c: u64) -> Self {
        let c = FpElem::new(c, ctx.modulus());
        if c.is_zero() {
            return Self::zero(ctx);
        }
        PrimePoly {
            ctx: Arc::clone(ctx),
            terms: vec![(Monomial::one(ctx.num_vars()), c)],
        }
    }

    pub fn var(ctx: &Arc<PolyContext>, index: usize) -> Self {
        assert!(index < ctx.num_vars(), "variable index out of range");
        PrimePoly {
            ctx: Arc::clone(ctx),
            terms: vec![(Monomial::var(index, ctx.num_vars()), FpElem::new(1, ctx.modulus()))],
        }
    }

    pub fn from_monomial(ctx: &Arc<PolyContext>, mono: Monomial, coeff: u64) -> Self {
        assert_eq!(mono.num_vars(), ctx.num_vars());
        let c = FpElem::new(coeff, ctx.modulus());
        if c.is_zero() {
            return Self::zero(ctx);
        }
        PrimePoly { ctx: Arc::clone(ctx), terms: vec![(mono, c)] }
    }

    /// Build from arbitrary (monomial, coefficient) pairs: merges duplicates,
    /// drops zeros, sorts canonically.
    pub fn from_terms<I>(ctx: &Arc<PolyContext>, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FpElem)>,
    {
        let mut acc: BTreeMap<Monomial, FpElem> = BTreeMap::new();
        for (m, c) in iter {
            debug_assert_eq!(m.num_vars(), ctx.num_vars());
            debug_assert_eq!(c.modulus(), ctx.modulus());
            let entry = acc.entry(m).or_insert_with(|| FpElem::new(0, ctx.modulus()));
            *entry = entry.add(c);
        }
        let mut terms: Vec<(Monomial, FpElem)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse(); // BTreeMap ascending -> canonical descending
        PrimePoly { ctx: Arc::clone(ctx), terms }
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, FpElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.value() == 1
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// The constant coefficient (possibly zero).
    pub fn constant_term(&self) -> FpElem {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| *c)
            .unwrap_or_else(|| FpElem::new(0, self.ctx.modulus()))
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(
                "polynomials from different contexts".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_ctx(rhs)?;
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp(&rhs.terms[j].0) {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(rhs.terms[j].1);
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&rhs.terms[j..]);
        Ok(PrimePoly { ctx: Arc::clone(&self.ctx), terms })
    }

    pub fn neg(&self) -> Self {
        PrimePoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: FpElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        PrimePoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_ctx(rhs)?;
        let mut acc: BTreeMap<Monomial, FpElem> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.try_mul(m2)?;
                let c = c1.mul(*c2);
                let entry = acc.entry(m).or_insert_with(|| FpElem::new(0, self.ctx.modulus()));
                *entry = entry.add(c);
            }
        }
        let mut terms: Vec<(Monomial, FpElem)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        Ok(PrimePoly { ctx: Arc::clone(&self.ctx), terms })
    }

    /// Binary exponentiation.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// f^{p^e}, computed term-wise: coefficients are Frobenius-fixed in F_p,
    /// so only exponents scale by p^e.
    pub fn frobenius_power(&self, e: u64) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidTwist(0));
        }
        let q = prime_power(self.ctx.modulus(), e)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.try_pow(q)?, *c));
        }
        // Exponent scaling by a constant preserves the structural order.
        Ok(PrimePoly { ctx: Arc::clone(&self.ctx), terms })
    }

    /// Substitute `images[i]` for variable i. All images must live in `target`.
    pub fn substitute(
        &self,
        images: &[PrimePoly],
        target: &Arc<PolyContext>,
    ) -> Result<PrimePoly> {
        if images.len() != self.ctx.num_vars() {
            return Err(Error::ContextMismatch(format!(
                "substitution needs {} images, got {}",
                self.ctx.num_vars(),
                images.len()
            )));
        }
        if self.ctx.modulus() != target.modulus() {
            return Err(Error::ContextMismatch("substitution across moduli".into()));
        }
        for im in images {
            if im.context() != target {
                return Err(Error::ContextMismatch(
                    "substitution image in wrong context".into(),
                ));
            }
        }
        let mut out = PrimePoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = PrimePoly::constant(target, c.value());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Leading term under `ord` (linear scan; terms are stored structurally).
    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Monomial, FpElem)> {
        let mut best: Option<usize> = None;
        for (i, (m, _)) in self.terms.iter().enumerate() {
            match best {
                None => best = Some(i),
                Some(b) => {
                    if ord.compare(m, &self.terms[b].0) == Ordering::Greater {
                        best = Some(i);
                    }
                }
            }
        }
        best.map(|i| (&self.terms[i].0, self.terms[i].1))
    }

    /// Rebuild this polynomial in a context holding a superset of variables.
    /// `positions[i]` is the index in `target` of our variable i.
    pub fn embed(&self, target: &Arc<PolyContext>, positions: &[usize]) -> Result<PrimePoly> {
        if positions.len() != self.ctx.num_vars() || self.ctx.modulus() != target.modulus() {
            return Err(Error::ContextMismatch("bad embedding map".into()));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u64; target.num_vars()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[positions[i]] = e;
            }
            (Monomial::new(exps).expect("degree preserved"), FpElem::new(c.value(), target.modulus()))
        });
        Ok(PrimePoly::from_terms(target, terms))
    }

    /// Project onto a sub-context: `positions[j]` is the index here of the
    /// target's variable j. Fails if any term uses a variable outside the set.
    pub fn project(&self, target: &Arc<PolyContext>, positions: &[usize]) -> Result<PrimePoly> {
        if positions.len() != target.num_vars() || self.ctx.modulus() != target.modulus() {
            return Err(Error::ContextMismatch("bad projection map".into()));
        }
        let kept: std::collections::BTreeSet<usize> = positions.iter().copied().collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 && !kept.contains(&i) {
                    return Err(Error::ContextMismatch(format!(
                        "term uses variable {} outside the projection",
                        self.ctx.vars()[i]
                    )));
                }
            }
            let exps: Vec<u64> = positions.iter().map(|&i| m.exps()[i]).collect();
            terms.push((
                Monomial::new(exps).expect("degree shrinks"),
                FpElem::new(c.value(), target.modulus()),
            ));
        }
        Ok(PrimePoly::from_terms(target, terms))
    }

    /// Canonical text form with terms descending under `ord`.
    pub fn to_text(&self, ord: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        idx.sort_by(|&a, &b| ord.compare(&self.terms[b].0, &self.terms[a].0));
        let mut out = String::new();
        for (n, &i) in idx.iter().enumerate() {
            if n > 0 {
                out.push('+');
            }
            let (m, c) = &self.terms[i];
            let mut factors: Vec<String> = Vec::new();
            if c.value() != 1 || m.is_one() {
                factors.push(c.value().to_string());
            }
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 1 {
                    factors.push(self.ctx.vars()[v].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.ctx.vars()[v], e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&MonomialOrder::GrevLex))
    }
}

/// Arithmetic dispatch mirroring the operation table: add, mul, pow.
pub enum PolyOp<'a> {
    Add(&'a PrimePoly),
    Mul(&'a PrimePoly),
    Pow(u64),
}

pub fn poly_arith(f: &PrimePoly, op: PolyOp<'_>) -> Result<PrimePoly> {
    match op {
        PolyOp::Add(g) => f.add(g),
        PolyOp::Mul(g) => f.mul(g),
        PolyOp::Pow(k) => f.pow(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<PolyContext> {
        PolyContext::new(2, vec!["x".into(), "y".into()]).unwrap()
    }

    fn ctx3() -> Arc<PolyContext> {
        PolyContext::new(3, vec!["x".into()]).unwrap()
    }

    #[test]
    fn char_two_addition_cancels() {
        let ctx = ctx2();
        let x = PrimePoly::var(&ctx, 0);
        assert!(x.add(&x).unwrap().is_zero());
    }

    #[test]
    fn freshmans_dream_square() {
        let ctx = ctx2();
        let x = PrimePoly::var(&ctx, 0);
        let y = PrimePoly::var(&ctx, 1);
        let s = x.add(&y).unwrap();
        let sq = s.mul(&s).unwrap();
        let expected = x.pow(2).unwrap().add(&y.pow(2).unwrap()).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn cube_of_x_plus_one_mod_three() {
        let ctx = ctx3();
        let x = PrimePoly::var(&ctx, 0);
        let f = x.add(&PrimePoly::one(&ctx)).unwrap();
        // oracle: repeated multiplication
        let cube = f.mul(&f).unwrap().mul(&f).unwrap();
        assert_eq!(f.pow(3).unwrap(), cube);
        let expected = x.pow(3).unwrap().add(&PrimePoly::one(&ctx)).unwrap();
        assert_eq!(cube, expected);
    }

    #[test]
    fn frobenius_power_termwise() {
        let ctx = ctx2();
        let x = PrimePoly::var(&ctx, 0);
        let y = PrimePoly::var(&ctx, 1);
        let s = x.add(&y).unwrap();
        let f1 = s.frobenius_power(1).unwrap();
        assert_eq!(f1, x.pow(2).unwrap().add(&y.pow(2).unwrap()).unwrap());

        let ctx = ctx3();
        let x = PrimePoly::var(&ctx, 0);
        assert_eq!(x.frobenius_power(2).unwrap(), x.pow(9).unwrap());

        // x^2+2x+1 over F_3, e=1 -> x^6+2x^3+1 (binary-exponentiation oracle)
        let f = x
            .pow(2)
            .unwrap()
            .add(&x.scale(FpElem::new(2, 3)))
            .unwrap()
            .add(&PrimePoly::one(&ctx))
            .unwrap();
        assert_eq!(f.frobenius_power(1).unwrap(), f.pow(3).unwrap());
    }

    #[test]
    fn frobenius_rejects_zero_twist() {
        let ctx = ctx3();
        let x = PrimePoly::var(&ctx, 0);
        assert_eq!(x.frobenius_power(0), Err(Error::InvalidTwist(0)));
    }

    #[test]
    fn context_mismatch_rejected() {
        let a = ctx2();
        let b = PolyContext::new(2, vec!["x".into()]).unwrap();
        let f = PrimePoly::var(&a, 0);
        let g = PrimePoly::var(&b, 0);
        assert!(matches!(f.add(&g), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn modulus_validation() {
        assert!(matches!(
            PolyContext::new(4, vec!["x".into()]),
            Err(Error::InvalidModulus(4))
        ));
        assert!(matches!(
            PolyContext::new(2, vec!["x".into(), "x".into()]),
            Err(Error::InvalidContext(_))
        ));
    }

    #[test]
    fn text_rendering() {
        let ctx = ctx2();
        let x = PrimePoly::var(&ctx, 0);
        let y = PrimePoly::var(&ctx, 1);
        let f = x
            .pow(2)
            .unwrap()
            .mul(&y)
            .unwrap()
            .add(&x)
            .unwrap()
            .add(&PrimePoly::one(&ctx))
            .unwrap();
        assert_eq!(f.to_text(&MonomialOrder::GrevLex), "x^2*y+x+1");
        assert_eq!(PrimePoly::zero(&ctx).to_text(&MonomialOrder::Lex), "0");
    }
}
