//! Buchberger-based ideal arithmetic: reduced Gröbner bases, normal forms,
//! ideal equality, elimination, and the module-finiteness decision procedure.
//!
//! The finiteness procedure is the engine behind every "is this extension a
//! finitely generated module" question in the crate: given a ring map
//! R = F_p[x]/I → S = F_p[y]/J with images F_j(y), it builds the graph ring
//! T = F_p[y, x]/(J + (x_j − F_j(y))) and reads the answer off a block-order
//! basis with y ≫ x. S is module-finite over the image of R exactly when each
//! y_i appears as a pure power among the leading terms, and the standard
//! y-monomials below those powers generate — with explicit re-expansion of
//! every product (variable × generator) serving as a checkable certificate.

use crate::algebra::AlgebraMap;
use crate::error::{Error, Result};
use crate::field_poly::{FpElem, Monomial, MonomialOrder, PolyContext, PrimePoly};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Resource limits for basis computations.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// Maximum number of S-pair reductions before giving up.
    pub spair_budget: u64,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { spair_budget: 1_000_000 }
    }
}

/// A finitely generated ideal: nonzero generators over one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ctx: Arc<PolyContext>,
    generators: Vec<PrimePoly>,
}

impl Ideal {
    pub fn new(ctx: &Arc<PolyContext>, gens: Vec<PrimePoly>) -> Result<Self> {
        for g in &gens {
            if g.context() != ctx {
                return Err(Error::ContextMismatch("ideal generator in wrong context".into()));
            }
        }
        let generators = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ctx: Arc::clone(ctx), generators })
    }

    pub fn zero(ctx: &Arc<PolyContext>) -> Self {
        Ideal { ctx: Arc::clone(ctx), generators: Vec::new() }
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[PrimePoly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Internal working representation: term lists sorted descending in the active
// order, so the leading term is always at index 0.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct OPoly {
    terms: Vec<(Monomial, FpElem)>,
}

impl OPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> Option<&(Monomial, FpElem)> {
        self.terms.first()
    }

    fn from_prime(f: &PrimePoly, ord: &MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, FpElem)> = f.terms().to_vec();
        terms.sort_by(|a, b| ord.compare(&b.0, &a.0));
        OPoly { terms }
    }

    fn into_prime(self, ctx: &Arc<PolyContext>) -> PrimePoly {
        PrimePoly::from_terms(ctx, self.terms)
    }

    fn monic(mut self) -> Self {
        if let Some(&(_, lc)) = self.leading() {
            if lc.value() != 1 {
                let inv = lc.inv().expect("nonzero leading coefficient");
                for (_, c) in self.terms.iter_mut() {
                    *c = c.mul(inv);
                }
            }
        }
        self
    }
}

/// a − c·(m·b), all sorted descending under `ord`.
fn sub_scaled(
    a: &OPoly,
    c: FpElem,
    m: &Monomial,
    b: &OPoly,
    ord: &MonomialOrder,
) -> Result<OPoly> {
    let mut shifted: Vec<(Monomial, FpElem)> = Vec::with_capacity(b.terms.len());
    for (bm, bc) in &b.terms {
        shifted.push((m.try_mul(bm)?, bc.mul(c).neg()));
    }
    // merge two descending lists
    let mut out = Vec::with_capacity(a.terms.len() + shifted.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < shifted.len() {
        match ord.compare(&a.terms[i].0, &shifted[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(shifted[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let s = a.terms[i].1.add(shifted[j].1);
                if !s.is_zero() {
                    out.push((a.terms[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.terms[i..]);
    out.extend(shifted.drain(j..));
    Ok(OPoly { terms: out })
}

/// Fully reduce `f` by `basis`: no term of the result is divisible by any
/// basis leading term. Deterministic: always the first dividing element wins.
fn full_reduce(mut f: OPoly, basis: &[OPoly], ord: &MonomialOrder) -> Result<OPoly> {
    let mut out: Vec<(Monomial, FpElem)> = Vec::new();
    'outer: while let Some((lm, lc)) = f.leading().cloned().map(|(m, c)| (m, c)) {
        for g in basis {
            let Some((glm, glc)) = g.leading() else { continue };
            if glm.divides(&lm) {
                let q = glm.quotient_of(&lm);
                let c = lc.mul(glc.inv().expect("nonzero leading coefficient"));
                f = sub_scaled(&f, c, &q, g, ord)?;
                continue 'outer;
            }
        }
        // leading term is in normal position; move it out
        out.push((lm, lc));
        f.terms.remove(0);
    }
    Ok(OPoly { terms: out })
}

/// Buchberger's algorithm with product and chain criteria, degree-first pair
/// selection, and an S-pair reduction budget.
pub fn groebner_basis(
    ideal: &Ideal,
    ord: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let ctx = ideal.context();
    let mut basis: Vec<OPoly> = ideal
        .generators()
        .iter()
        .map(|g| OPoly::from_prime(g, ord).monic())
        .collect();

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let lcm = basis[i].leading().unwrap().0.lcm(&basis[j].leading().unwrap().0)?;
            pending.insert((i, j));
            pairs.push((i, j, lcm));
        }
    }

    let mut reductions: u64 = 0;
    while !pairs.is_empty() {
        // degree-first selection: min (lcm degree, lcm under ord, i, j)
        let mut best = 0;
        for k in 1..pairs.len() {
            let (bi, bj, bl) = &pairs[best];
            let (ki, kj, kl) = &pairs[k];
            let cmp = kl
                .degree()
                .cmp(&bl.degree())
                .then_with(|| ord.compare(kl, bl))
                .then_with(|| (ki, kj).cmp(&(bi, bj)));
            if cmp == Ordering::Less {
                best = k;
            }
        }
        let (i, j, lcm) = pairs.swap_remove(best);
        pending.remove(&(i, j));

        let (lti, lci) = basis[i].leading().unwrap().clone();
        let (ltj, lcj) = basis[j].leading().unwrap().clone();

        // product criterion: coprime leading terms reduce to zero
        if lti.try_mul(&ltj)? == lcm {
            continue;
        }
        // chain criterion: some k with LT(k) | lcm and both companion pairs
        // already treated
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let ltk = &g.leading().unwrap().0;
            if ltk.divides(&lcm) {
                let pik = (i.min(k), i.max(k));
                let pjk = (j.min(k), j.max(k));
                if !pending.contains(&pik) && !pending.contains(&pjk) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }

        reductions += 1;
        if reductions > config.spair_budget {
            return Err(Error::BudgetExceeded(format!(
                "S-pair reduction budget ({}) exhausted",
                config.spair_budget
            )));
        }

        // S-polynomial: (lcm/LT_i)·f_i/lc_i − (lcm/LT_j)·f_j/lc_j
        let qi = lti.quotient_of(&lcm);
        let qj = ltj.quotient_of(&lcm);
        let zero = OPoly { terms: Vec::new() };
        let mut s = sub_scaled(&zero, lci.inv().unwrap().neg(), &qi, &basis[i], ord)?;
        s = sub_scaled(&s, lcj.inv().unwrap(), &qj, &basis[j], ord)?;
        let r = full_reduce(s, &basis, ord)?;
        if !r.is_zero() {
            let r = r.monic();
            let new_lt = r.leading().unwrap().0.clone();
            let idx = basis.len();
            basis.push(r);
            for t in 0..idx {
                let lcm = basis[t].leading().unwrap().0.lcm(&new_lt)?;
                pending.insert((t, idx));
                pairs.push((t, idx, lcm));
            }
        }
    }

    // --- reduce to the canonical basis ---
    // 1. minimalize: drop elements whose LT is divisible by another's LT
    let mut order_idx: Vec<usize> = (0..basis.len()).collect();
    order_idx.sort_by(|&a, &b| {
        ord.compare(&basis[a].leading().unwrap().0, &basis[b].leading().unwrap().0)
    });
    let mut kept: Vec<OPoly> = Vec::new();
    for idx in order_idx {
        let lt = &basis[idx].leading().unwrap().0;
        if !kept.iter().any(|h| h.leading().unwrap().0.divides(lt)) {
            kept.push(basis[idx].clone());
        }
    }
    // 2. tail-reduce each element against the others
    let mut reduced: Vec<OPoly> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<OPoly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        reduced.push(full_reduce(kept[i].clone(), &others, ord)?.monic());
    }
    // 3. sort ascending by leading term
    reduced.sort_by(|a, b| ord.compare(&a.leading().unwrap().0, &b.leading().unwrap().0));

    let leading: Vec<Monomial> = reduced.iter().map(|g| g.leading().unwrap().0.clone()).collect();
    let elements: Vec<PrimePoly> = reduced.into_iter().map(|g| g.into_prime(ctx)).collect();
    Ok(GroebnerBasis {
        ctx: Arc::clone(ctx),
        order: ord.clone(),
        elements,
        leading,
    })
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted ascending by leading
/// term — the unique canonical form of (ideal, order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Arc<PolyContext>,
    order: MonomialOrder,
    elements: Vec<PrimePoly>,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[PrimePoly] {
        &self.elements
    }

    pub fn leading_terms(&self) -> &[Monomial] {
        &self.leading
    }

    /// True iff the basis presents the unit ideal (basis = {1}).
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_one()
    }

    /// Fully reduced remainder of `f` modulo the basis.
    pub fn normal_form(&self, f: &PrimePoly) -> Result<PrimePoly> {
        if f.context() != &self.ctx {
            return Err(Error::ContextMismatch("normal form in wrong context".into()));
        }
        let basis: Vec<OPoly> =
            self.elements.iter().map(|g| OPoly::from_prime(g, &self.order)).collect();
        let r = full_reduce(OPoly::from_prime(f, &self.order), &basis, &self.order)?;
        Ok(r.into_prime(&self.ctx))
    }

    /// Ideal membership via normal form.
    pub fn contains(&self, f: &PrimePoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// If the quotient by this basis is a finite-dimensional F_p-space,
    /// return its standard-monomial basis (ascending grevlex); None otherwise.
    pub fn finite_std_monomials(&self) -> Option<Vec<Monomial>> {
        if self.is_unit() {
            return Some(Vec::new());
        }
        let n = self.ctx.num_vars();
        let mut bound = vec![None::<u64>; n];
        for lt in &self.leading {
            if let Some((i, d)) = lt.pure_power() {
                bound[i] = Some(bound[i].map_or(d, |b: u64| b.min(d)));
            }
        }
        let caps: Option<Vec<u64>> = bound.into_iter().collect();
        let caps = caps?;
        let mut std_monos = Vec::new();
        let mut exps = vec![0u64; n];
        loop {
            let m = Monomial::new(exps.clone()).expect("small exponents");
            if !self.leading.iter().any(|lt| lt.divides(&m)) {
                std_monos.push(m);
            }
            // odometer over the box
            let mut k = 0;
            loop {
                if k == n {
                    std_monos.sort_by(|a, b| MonomialOrder::GrevLex.compare(a, b));
                    return Some(std_monos);
                }
                exps[k] += 1;
                if exps[k] < caps[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
    }

    /// All standard monomials of total degree ≤ `bound`, ascending grevlex.
    /// Always finite, whether or not the quotient is.
    pub fn std_monomials_up_to(&self, bound: u64) -> Vec<Monomial> {
        if self.is_unit() {
            return Vec::new();
        }
        let n = self.ctx.num_vars();
        let mut out = Vec::new();
        let mut exps = vec![0u64; n];
        'odometer: loop {
            let m = Monomial::new(exps.clone()).expect("bounded exponents");
            if !self.leading.iter().any(|lt| lt.divides(&m)) {
                out.push(m);
            }
            // odometer over the degree-bounded simplex
            let mut k = 0;
            loop {
                if k == n {
                    break 'odometer;
                }
                exps[k] += 1;
                if exps.iter().sum::<u64>() <= bound {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
        out.sort_by(|a, b| MonomialOrder::GrevLex.compare(a, b));
        out
    }
}

/// Convenience free function mirroring the method.
pub fn normal_form(f: &PrimePoly, gb: &GroebnerBasis) -> Result<PrimePoly> {
    gb.normal_form(f)
}

/// Two ideals are equal iff their reduced bases coincide.
pub fn ideal_equal(
    a: &Ideal,
    b: &Ideal,
    ord: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<bool> {
    if a.context() != b.context() {
        return Err(Error::ContextMismatch("comparing ideals across contexts".into()));
    }
    let ga = groebner_basis(a, ord, config)?;
    let gb = groebner_basis(b, ord, config)?;
    Ok(ga.elements() == gb.elements())
}

/// I ∩ F_p[back variables], computed with a block order that eliminates
/// `front_vars`. The result lives in a fresh context over the back variables
/// (original relative order, same names).
pub fn eliminate(ideal: &Ideal, front_vars: &[usize], config: &GroebnerConfig) -> Result<Ideal> {
    let ctx = ideal.context();
    let n = ctx.num_vars();
    for &v in front_vars {
        if v >= n {
            return Err(Error::InvalidContext(format!(
                "eliminated variable index {v} out of range"
            )));
        }
    }
    let front: Vec<usize> = {
        let set: BTreeSet<usize> = front_vars.iter().copied().collect();
        set.into_iter().collect()
    };
    let back: Vec<usize> = (0..n).filter(|i| !front.contains(i)).collect();
    let back_ctx = PolyContext::new(
        ctx.modulus(),
        back.iter().map(|&i| ctx.vars()[i].clone()).collect(),
    )?;

    let ord = MonomialOrder::eliminating(front.clone());
    let gb = groebner_basis(ideal, &ord, config)?;
    let mut gens = Vec::new();
    for g in gb.elements() {
        let uses_front = g
            .terms()
            .iter()
            .any(|(m, _)| front.iter().any(|&i| m.exps()[i] > 0));
        if !uses_front {
            gens.push(g.project(&back_ctx, &back)?);
        }
    }
    Ideal::new(&back_ctx, gens)
}

// ---------------------------------------------------------------------------
// Module-finiteness over the image of a ring map
// ---------------------------------------------------------------------------

/// Proof object for a Finite verdict: generators of the target as a module
/// over the source image, plus a re-expansion of every product
/// (target variable × generator) in terms of the generators with
/// source-algebra coefficients. Checkable independently of how it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessCertificate {
    /// Module generators, as target-context polynomials (standard monomials).
    pub generators: Vec<PrimePoly>,
    /// One entry per (target variable, generator), ordered by those indices.
    pub expansions: Vec<CertExpansion>,
    /// Human-readable description of the basis the verdict came from.
    pub verdict_source: String,
}

/// y_i · m_k = Σ_j coeffs[j] · m_j with coeffs in the source presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertExpansion {
    pub var_index: usize,
    pub gen_index: usize,
    pub coeffs: Vec<PrimePoly>,
}

/// Outcome of the module-finiteness decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinitenessVerdict {
    Finite(FinitenessCertificate),
    Infinite { witness_variable: String },
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessVerdict::Finite(_))
    }

    pub fn certificate(&self) -> Option<&FinitenessCertificate> {
        match self {
            FinitenessVerdict::Finite(c) => Some(c),
            FinitenessVerdict::Infinite { .. } => None,
        }
    }
}

/// The graph ring of a map φ: R → S — the scratch space where membership,
/// kernel, and finiteness questions about φ become Gröbner questions.
///
/// Context layout: S's variables first (the front block), then R's variables
/// renamed with a `src_` prefix (uniquified). Relations: S's relations plus
/// x'_j − φ(x_j).
pub(crate) struct MapGraph {
    pub ctx: Arc<PolyContext>,
    /// positions 0..n_target are the target variables
    pub n_target: usize,
    /// positions of source variables in the graph context
    pub back: Vec<usize>,
    pub gb: GroebnerBasis,
}

impl MapGraph {
    pub fn new(phi: &AlgebraMap, config: &GroebnerConfig) -> Result<MapGraph> {
        let src_ctx = phi.source().context();
        let tgt_ctx = phi.target().context();
        let p = tgt_ctx.modulus();

        let mut names: Vec<String> = tgt_ctx.vars().to_vec();
        for v in src_ctx.vars() {
            let mut name = format!("src_{v}");
            while names.contains(&name) {
                name.push('_');
            }
            names.push(name);
        }
        let n_target = tgt_ctx.num_vars();
        let ctx = PolyContext::new(p, names)?;
        let front: Vec<usize> = (0..n_target).collect();
        let back: Vec<usize> = (n_target..ctx.num_vars()).collect();

        let tgt_embed: Vec<usize> = front.clone();
        let mut rels: Vec<PrimePoly> = Vec::new();
        for r in phi.target().relations().generators() {
            rels.push(r.embed(&ctx, &tgt_embed)?);
        }
        for (j, img) in phi.images().iter().enumerate() {
            let xj = PrimePoly::var(&ctx, back[j]);
            let img_lift = img.embed(&ctx, &tgt_embed)?;
            rels.push(xj.sub(&img_lift)?);
        }

        let ideal = Ideal::new(&ctx, rels)?;
        let ord = MonomialOrder::eliminating(front);
        let gb = groebner_basis(&ideal, &ord, config)?;
        Ok(MapGraph { ctx, n_target, back, gb })
    }

    /// Lift a target element into the graph context.
    pub fn lift_target(&self, f: &PrimePoly) -> Result<PrimePoly> {
        let positions: Vec<usize> = (0..self.n_target).collect();
        f.embed(&self.ctx, &positions)
    }

    /// True iff `f` (already in graph context) involves only source variables.
    pub fn is_source_only(&self, f: &PrimePoly) -> bool {
        f.terms()
            .iter()
            .all(|(m, _)| m.exps()[..self.n_target].iter().all(|&e| e == 0))
    }

    /// Project a source-only graph element back into the source context.
    pub fn to_source(&self, f: &PrimePoly, src_ctx: &Arc<PolyContext>) -> Result<PrimePoly> {
        f.project(src_ctx, &self.back)
    }
}

/// Decide whether the target of `phi` is a finitely generated module over the
/// image of its source, returning either a checkable certificate or a witness
/// variable that escapes every pure power.
pub fn module_finiteness(phi: &AlgebraMap, config: &GroebnerConfig) -> Result<FinitenessVerdict> {
    let graph = MapGraph::new(phi, config)?;
    let tgt_ctx = phi.target().context();
    let src_ctx = phi.source().context();

    // Zero ring target: trivially finite with no generators at all.
    if graph.gb.is_unit() {
        return Ok(FinitenessVerdict::Finite(FinitenessCertificate {
            generators: Vec::new(),
            expansions: Vec::new(),
            verdict_source: "target collapses to the zero ring; block basis {1}".to_string(),
        }));
    }

    // Pure-power degrees per target variable.
    let mut degrees: Vec<Option<u64>> = vec![None; graph.n_target];
    for lt in graph.gb.leading_terms() {
        if let Some((i, d)) = lt.pure_power() {
            if i < graph.n_target {
                degrees[i] = Some(degrees[i].map_or(d, |b: u64| b.min(d)));
            }
        }
    }
    for (i, d) in degrees.iter().enumerate() {
        if d.is_none() {
            return Ok(FinitenessVerdict::Infinite {
                witness_variable: tgt_ctx.vars()[i].clone(),
            });
        }
    }
    let caps: Vec<u64> = degrees.into_iter().map(|d| d.unwrap()).collect();

    let mut count: u64 = 1;
    for &c in &caps {
        count = count
            .checked_mul(c)
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| Error::BudgetExceeded("generator box too large".into()))?;
    }

    // Enumerate the box of standard target monomials below the pure powers.
    let mut boxes: Vec<Monomial> = Vec::with_capacity(count as usize);
    let nt = graph.n_target;
    let mut exps = vec![0u64; nt];
    loop {
        boxes.push(Monomial::new(exps.clone()).expect("small exponents"));
        let mut k = 0;
        loop {
            if k == nt {
                break;
            }
            exps[k] += 1;
            if exps[k] < caps[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
        if k == nt {
            break;
        }
    }
    boxes.sort_by(|a, b| MonomialOrder::GrevLex.compare(a, b));

    let generators: Vec<PrimePoly> = boxes
        .iter()
        .map(|m| PrimePoly::from_monomial(tgt_ctx, m.clone(), 1))
        .collect();

    // Expansions: y_i · m_k, normal-formed in the graph ring, regrouped as
    // Σ_j c_j(source) · m_j. Every residual target-part lands in the box
    // because the pure powers y_i^{d_i} are leading terms.
    let box_index: std::collections::BTreeMap<Vec<u64>, usize> = boxes
        .iter()
        .enumerate()
        .map(|(k, m)| (m.exps().to_vec(), k))
        .collect();
    let mut expansions = Vec::new();
    for var_i in 0..nt {
        for (gen_k, m) in boxes.iter().enumerate() {
            let mut prod_exps = vec![0u64; graph.ctx.num_vars()];
            prod_exps[..nt].copy_from_slice(m.exps());
            prod_exps[var_i] += 1;
            let prod = PrimePoly::from_monomial(
                &graph.ctx,
                Monomial::new(prod_exps).expect("small exponents"),
                1,
            );
            let nf = graph.gb.normal_form(&prod)?;
            let mut coeff_terms: Vec<Vec<(Monomial, FpElem)>> =
                vec![Vec::new(); generators.len()];
            for (mono, c) in nf.terms() {
                let front_part = &mono.exps()[..nt];
                let j = *box_index.get(front_part).ok_or_else(|| {
                    Error::CertificateInvalid(format!(
                        "normal form escaped the generator box at {}",
                        graph.ctx.vars()[var_i]
                    ))
                })?;
                let back_exps: Vec<u64> =
                    graph.back.iter().map(|&pos| mono.exps()[pos]).collect();
                coeff_terms[j].push((
                    Monomial::new(back_exps).expect("projection shrinks degrees"),
                    FpElem::new(c.value(), src_ctx.modulus()),
                ));
            }
            let coeffs: Vec<PrimePoly> = coeff_terms
                .into_iter()
                .map(|terms| PrimePoly::from_terms(src_ctx, terms))
                .collect();
            expansions.push(CertExpansion { var_index: var_i, gen_index: gen_k, coeffs });
        }
    }

    let verdict_source = format!(
        "block elimination basis with {} elements; pure target-variable degrees {:?}",
        graph.gb.elements().len(),
        caps
    );
    Ok(FinitenessVerdict::Finite(FinitenessCertificate {
        generators,
        expansions,
        verdict_source,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::parse_poly;

    fn ctx(p: u64, vars: &[&str]) -> Arc<PolyContext> {
        PolyContext::new(p, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ideal(ctx: &Arc<PolyContext>, gens: &[&str]) -> Ideal {
        let polys = gens.iter().map(|s| parse_poly(s, ctx).unwrap()).collect();
        Ideal::new(ctx, polys).unwrap()
    }

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn lex_basis_matches_independent_computation() {
        // frozen from an independent CAS run: (x^2 - y, x*y - 1) over F_2,
        // lex x > y  ->  {x + y^2, y^3 + 1}
        let c = ctx(2, &["x", "y"]);
        let i = ideal(&c, &["x^2+y", "x*y+1"]);
        let gb = groebner_basis(&i, &MonomialOrder::Lex, &cfg()).unwrap();
        let texts: Vec<String> =
            gb.elements().iter().map(|g| g.to_text(&MonomialOrder::Lex)).collect();
        assert_eq!(texts, vec!["y^3+1", "x+y^2"]);
    }

    #[test]
    fn grevlex_basis_matches_independent_computation() {
        // frozen: same ideal under grevlex -> {y^2 + x, x*y + 1, x^2 + y}
        let c = ctx(2, &["x", "y"]);
        let i = ideal(&c, &["x^2+y", "x*y+1"]);
        let gb = groebner_basis(&i, &MonomialOrder::GrevLex, &cfg()).unwrap();
        let texts: Vec<String> =
            gb.elements().iter().map(|g| g.to_text(&MonomialOrder::GrevLex)).collect();
        assert_eq!(texts, vec!["y^2+x", "x*y+1", "x^2+y"]);
    }

    #[test]
    fn grevlex_basis_mod_three() {
        // frozen: (x^2 + y^2 - 1, x*y) over F_3 -> {x*y, x^2 + y^2 + 2, y^3 + 2y}
        let c = ctx(3, &["x", "y"]);
        let i = ideal(&c, &["x^2+y^2+2", "x*y"]);
        let gb = groebner_basis(&i, &MonomialOrder::GrevLex, &cfg()).unwrap();
        let texts: Vec<String> =
            gb.elements().iter().map(|g| g.to_text(&MonomialOrder::GrevLex)).collect();
        assert_eq!(texts, vec!["x*y", "x^2+y^2+2", "y^3+2*y"]);
    }

    #[test]
    fn zero_and_unit_ideals() {
        let c = ctx(2, &["x"]);
        let gb = groebner_basis(&Ideal::zero(&c), &MonomialOrder::Lex, &cfg()).unwrap();
        assert!(gb.elements().is_empty());
        let u = ideal(&c, &["x", "x+1"]);
        let gb = groebner_basis(&u, &MonomialOrder::Lex, &cfg()).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn normal_form_examples() {
        let c = ctx(2, &["x", "y"]);
        let i = ideal(&c, &["x^2+y", "x*y+1"]);
        let gb = groebner_basis(&i, &MonomialOrder::Lex, &cfg()).unwrap();
        // frozen: NF(x^3*y^2) = y^2
        let f = parse_poly("x^3*y^2", &c).unwrap();
        assert_eq!(gb.normal_form(&f).unwrap().to_text(&MonomialOrder::Lex), "y^2");
        // y^3 reduces to 1 (single step against y^3 + 1)
        let g = parse_poly("y^3", &c).unwrap();
        assert!(gb.normal_form(&g).unwrap().is_one());
        // membership
        let member = parse_poly("x^2+y", &c).unwrap();
        assert!(gb.contains(&member).unwrap());
        // 1 against a non-unit ideal stays 1
        assert!(gb.normal_form(&PrimePoly::one(&c)).unwrap().is_one());
    }

    #[test]
    fn normal_form_is_idempotent_and_linear() {
        let c = ctx(3, &["x", "y"]);
        let i = ideal(&c, &["x^2+y^2+2", "x*y"]);
        let gb = groebner_basis(&i, &MonomialOrder::GrevLex, &cfg()).unwrap();
        let f = parse_poly("x^3+2*x*y+y", &c).unwrap();
        let g = parse_poly("y^4+x", &c).unwrap();
        let nf = gb.normal_form(&f).unwrap();
        assert_eq!(gb.normal_form(&nf).unwrap(), nf);
        let sum_nf = gb.normal_form(&f.add(&g).unwrap()).unwrap();
        assert_eq!(sum_nf, nf.add(&gb.normal_form(&g).unwrap()).unwrap());
    }

    #[test]
    fn buchberger_criterion_on_output() {
        // every S-polynomial of the returned basis reduces to zero
        let c = ctx(3, &["x", "y", "z"]);
        let i = ideal(&c, &["x^2+y*z", "y^2+x*z", "z^2+x*y"]);
        for ord in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
            let gb = groebner_basis(&i, &ord, &cfg()).unwrap();
            let basis: Vec<OPoly> =
                gb.elements().iter().map(|g| OPoly::from_prime(g, &ord)).collect();
            for a in 0..basis.len() {
                for b in (a + 1)..basis.len() {
                    let (lta, lca) = basis[a].leading().unwrap().clone();
                    let (ltb, lcb) = basis[b].leading().unwrap().clone();
                    let lcm = lta.lcm(&ltb).unwrap();
                    let zero = OPoly { terms: Vec::new() };
                    let mut s = sub_scaled(
                        &zero,
                        lca.inv().unwrap().neg(),
                        &lta.quotient_of(&lcm),
                        &basis[a],
                        &ord,
                    )
                    .unwrap();
                    s = sub_scaled(&s, lcb.inv().unwrap(), &ltb.quotient_of(&lcm), &basis[b], &ord)
                        .unwrap();
                    assert!(full_reduce(s, &basis, &ord).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn ideal_equality_cases() {
        let c = ctx(2, &["x", "y"]);
        let a = ideal(&c, &["x"]);
        let b = ideal(&c, &["x", "x^2"]);
        assert!(ideal_equal(&a, &b, &MonomialOrder::GrevLex, &cfg()).unwrap());
        let d = ideal(&c, &["x^2"]);
        assert!(!ideal_equal(&a, &d, &MonomialOrder::GrevLex, &cfg()).unwrap());
        let e = ideal(&c, &["x+y", "y"]);
        let f = ideal(&c, &["x", "y"]);
        assert!(ideal_equal(&e, &f, &MonomialOrder::GrevLex, &cfg()).unwrap());
    }

    #[test]
    fn elimination_matches_independent_computation() {
        // frozen: (y - x^2, z - x^3) over F_5, eliminate x -> (y^3 - z^2)
        let c = ctx(5, &["x", "y", "z"]);
        let i = ideal(&c, &["y-x^2", "z-x^3"]);
        let out = eliminate(&i, &[0], &cfg()).unwrap();
        assert_eq!(out.context().vars(), &["y".to_string(), "z".to_string()]);
        let texts: Vec<String> = out
            .generators()
            .iter()
            .map(|g| g.to_text(&MonomialOrder::GrevLex))
            .collect();
        assert_eq!(texts, vec!["y^3+4*z^2"]);
    }

    #[test]
    fn elimination_trivial_cases() {
        let c = ctx(3, &["t", "x"]);
        // t is free: (t - x^2) ∩ F_3[x] = (0)
        let i = ideal(&c, &["t-x^2"]);
        let out = eliminate(&i, &[0], &cfg()).unwrap();
        assert!(out.is_zero());
        // the unit ideal survives elimination
        let u = ideal(&c, &["1"]);
        let out = eliminate(&u, &[0], &cfg()).unwrap();
        assert_eq!(out.generators().len(), 1);
        assert!(out.generators()[0].is_one());
    }

    #[test]
    fn finite_std_monomials_enumeration() {
        let c = ctx(2, &["x", "y"]);
        let i = ideal(&c, &["x^2", "x*y", "y^2"]);
        let gb = groebner_basis(&i, &MonomialOrder::GrevLex, &cfg()).unwrap();
        let basis = gb.finite_std_monomials().unwrap();
        assert_eq!(basis.len(), 3); // 1, y, x
        let free = ideal(&c, &["x^2"]);
        let gbf = groebner_basis(&free, &MonomialOrder::GrevLex, &cfg()).unwrap();
        assert!(gbf.finite_std_monomials().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let c = ctx(3, &["x", "y", "z"]);
        let i = ideal(&c, &["x^2+y*z", "y^2+x*z", "z^2+x*y"]);
        let tight = GroebnerConfig { spair_budget: 1 };
        assert!(matches!(
            groebner_basis(&i, &MonomialOrder::GrevLex, &tight),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
