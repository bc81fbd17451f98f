//! Finitely presented F_p-algebras and validated homomorphisms, plus the ring
//! constructions the verification suites exercise: quotients, principal
//! localizations, tensor products over a common base, and direct products.
//!
//! Every algebra carries its reduced grevlex basis from birth, so element
//! equality is always a normal-form computation and the zero ring announces
//! itself as basis = {1}. Every map is validated at construction: a relation
//! of the source must reduce to zero in the target, or the constructor
//! refuses.

use crate::error::{Error, Result};
use crate::field_poly::{parse_poly, MonomialOrder, PolyContext, PrimePoly};
use crate::groebner::{
    eliminate, groebner_basis, GroebnerBasis, GroebnerConfig, Ideal, MapGraph,
};
use std::fmt;
use std::sync::Arc;

/// How an algebra came to exist; metadata only, never part of equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Base,
    Quotient,
    Localization,
    Tensor,
    Product,
    Pushout,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Base => "base",
            Provenance::Quotient => "quotient",
            Provenance::Localization => "localization",
            Provenance::Tensor => "tensor",
            Provenance::Product => "product",
            Provenance::Pushout => "pushout",
        };
        write!(f, "{s}")
    }
}

/// F_p[vars]/(relations) with a cached reduced grevlex basis.
#[derive(Debug, Clone)]
pub struct PresentedAlgebra {
    ctx: Arc<PolyContext>,
    relations: Ideal,
    basis: GroebnerBasis,
    provenance: Provenance,
}

impl PartialEq for PresentedAlgebra {
    /// Presentation equality: same context and same canonical basis.
    /// Provenance is deliberately ignored.
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.basis.elements() == other.basis.elements()
    }
}

impl Eq for PresentedAlgebra {}

impl PresentedAlgebra {
    pub fn with_provenance(
        ctx: &Arc<PolyContext>,
        rels: Vec<PrimePoly>,
        provenance: Provenance,
        config: &GroebnerConfig,
    ) -> Result<Self> {
        let relations = Ideal::new(ctx, rels)?;
        let basis = groebner_basis(&relations, &MonomialOrder::GrevLex, config)?;
        Ok(PresentedAlgebra { ctx: Arc::clone(ctx), relations, basis, provenance })
    }

    pub fn new(ctx: &Arc<PolyContext>, rels: Vec<PrimePoly>, config: &GroebnerConfig) -> Result<Self> {
        Self::with_provenance(ctx, rels, Provenance::Base, config)
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// True iff the relations generate the unit ideal.
    pub fn is_zero_ring(&self) -> bool {
        self.basis.is_unit()
    }

    /// Canonical representative of an element.
    pub fn nf(&self, f: &PrimePoly) -> Result<PrimePoly> {
        self.basis.normal_form(f)
    }

    /// F_p-dimension, when finite.
    pub fn dimension(&self) -> Option<usize> {
        self.basis.finite_std_monomials().map(|b| b.len())
    }

    pub fn var(&self, i: usize) -> PrimePoly {
        PrimePoly::var(&self.ctx, i)
    }

    pub fn one(&self) -> PrimePoly {
        PrimePoly::one(&self.ctx)
    }

    pub fn parse(&self, src: &str) -> Result<PrimePoly> {
        parse_poly(src, &self.ctx).map_err(|e| Error::InvalidContext(e.to_string()))
    }

    /// Short description like "F_2[x,y]/(x^2, x*y)".
    pub fn describe(&self) -> String {
        let vars = self.ctx.vars().join(",");
        let head = format!("F_{}[{}]", self.ctx.modulus(), vars);
        if self.relations.is_zero() {
            head
        } else {
            let rels: Vec<String> = self
                .relations
                .generators()
                .iter()
                .map(|r| r.to_text(&MonomialOrder::GrevLex))
                .collect();
            format!("{head}/({})", rels.join(", "))
        }
    }
}

/// Build an algebra from string parts; the workhorse constructor for tests
/// and scripted scenarios.
pub fn make_algebra(p: u64, vars: &[&str], rels: &[&str]) -> Result<PresentedAlgebra> {
    let ctx = PolyContext::new(p, vars.iter().map(|s| s.to_string()).collect())?;
    let mut polys = Vec::with_capacity(rels.len());
    for r in rels {
        polys.push(parse_poly(r, &ctx).map_err(|e| Error::InvalidContext(e.to_string()))?);
    }
    PresentedAlgebra::new(&ctx, polys, &GroebnerConfig::default())
}

/// A validated homomorphism of presented algebras, stored by the normal forms
/// of its variable images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    source: PresentedAlgebra,
    target: PresentedAlgebra,
    images: Vec<PrimePoly>,
}

impl AlgebraMap {
    pub fn source(&self) -> &PresentedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PresentedAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[PrimePoly] {
        &self.images
    }

    /// Push an element of the source through the map, normal-formed.
    pub fn apply(&self, f: &PrimePoly) -> Result<PrimePoly> {
        if f.context() != self.source.context() {
            return Err(Error::ContextMismatch("element not in the map's source".into()));
        }
        let image = f.substitute(&self.images, self.target.context())?;
        self.target.nf(&image)
    }

    pub fn identity(a: &PresentedAlgebra) -> Result<AlgebraMap> {
        let images = (0..a.context().num_vars()).map(|i| a.var(i)).collect();
        make_map(a, a, images)
    }

    pub fn describe(&self) -> String {
        let assigns: Vec<String> = self
            .source
            .context()
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, im)| format!("{v} -> {}", im.to_text(&MonomialOrder::GrevLex)))
            .collect();
        format!("{} -> {} {{{}}}", self.source.describe(), self.target.describe(), assigns.join(", "))
    }
}

/// Construct and validate a homomorphism: every source relation must vanish
/// in the target under the substitution.
pub fn make_map(
    source: &PresentedAlgebra,
    target: &PresentedAlgebra,
    images: Vec<PrimePoly>,
) -> Result<AlgebraMap> {
    if source.context().modulus() != target.context().modulus() {
        return Err(Error::ContextMismatch("source and target have different moduli".into()));
    }
    if images.len() != source.context().num_vars() {
        return Err(Error::IllFormedMap(format!(
            "{} images given for {} source variables",
            images.len(),
            source.context().num_vars()
        )));
    }
    let mut nf_images = Vec::with_capacity(images.len());
    for im in &images {
        if im.context() != target.context() {
            return Err(Error::ContextMismatch("image not in the target context".into()));
        }
        nf_images.push(target.nf(im)?);
    }
    for r in source.relations().generators() {
        let pushed = r.substitute(&nf_images, target.context())?;
        let residue = target.nf(&pushed)?;
        if !residue.is_zero() {
            return Err(Error::NotAHomomorphism {
                relation: r.to_text(&MonomialOrder::GrevLex),
                residue: residue.to_text(&MonomialOrder::GrevLex),
            });
        }
    }
    Ok(AlgebraMap { source: source.clone(), target: target.clone(), images: nf_images })
}

/// gf: A → C from f: A → B and g: B → C.
pub fn compose_maps(f: &AlgebraMap, g: &AlgebraMap) -> Result<AlgebraMap> {
    if f.target() != g.source() {
        return Err(Error::ContextMismatch(
            "composition chain mismatch: target of first map differs from source of second".into(),
        ));
    }
    let mut images = Vec::with_capacity(f.images.len());
    for im in &f.images {
        images.push(g.apply(im)?);
    }
    make_map(&f.source, &g.target, images)
}

/// A/I together with the projection map.
pub fn quotient_algebra(
    a: &PresentedAlgebra,
    extra: &Ideal,
    config: &GroebnerConfig,
) -> Result<(PresentedAlgebra, AlgebraMap)> {
    if extra.context() != a.context() {
        return Err(Error::ContextMismatch("quotient ideal in wrong context".into()));
    }
    let mut rels = a.relations().generators().to_vec();
    rels.extend(extra.generators().iter().cloned());
    let quo = PresentedAlgebra::with_provenance(a.context(), rels, Provenance::Quotient, config)?;
    let images = (0..a.context().num_vars()).map(|i| quo.var(i)).collect();
    let proj = make_map(a, &quo, images)?;
    Ok((quo, proj))
}

pub(crate) fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// A_f = A[t]/(f·t − 1): the principal localization, presented finitely.
/// Localizing at 0 (or at a nilpotent) legitimately yields the zero ring.
pub fn localize_principal(
    a: &PresentedAlgebra,
    f: &PrimePoly,
    config: &GroebnerConfig,
) -> Result<(PresentedAlgebra, AlgebraMap)> {
    if f.context() != a.context() {
        return Err(Error::ContextMismatch("localized element in wrong context".into()));
    }
    let mut names = a.context().vars().to_vec();
    let t_name = fresh_name("t", &names);
    names.push(t_name);
    let ctx = PolyContext::new(a.context().modulus(), names)?;
    let old_positions: Vec<usize> = (0..a.context().num_vars()).collect();

    let mut rels = Vec::new();
    for r in a.relations().generators() {
        rels.push(r.embed(&ctx, &old_positions)?);
    }
    let f_lift = f.embed(&ctx, &old_positions)?;
    let t = PrimePoly::var(&ctx, ctx.num_vars() - 1);
    rels.push(f_lift.mul(&t)?.sub(&PrimePoly::one(&ctx))?);

    let loc = PresentedAlgebra::with_provenance(&ctx, rels, Provenance::Localization, config)?;
    let images = (0..a.context().num_vars()).map(|i| loc.var(i)).collect();
    let map = make_map(a, &loc, images)?;
    Ok((loc, map))
}

/// B ⊗_A C presented on the disjoint union of variables with gluing
/// relations u(a_j) = v(a_j), plus the two inclusions.
pub struct TensorData {
    pub algebra: PresentedAlgebra,
    pub left: AlgebraMap,
    pub right: AlgebraMap,
}

pub fn tensor_product(
    u: &AlgebraMap,
    v: &AlgebraMap,
    config: &GroebnerConfig,
) -> Result<TensorData> {
    if u.source() != v.source() {
        return Err(Error::ContextMismatch(
            "tensor factors must share the same base algebra".into(),
        ));
    }
    let b = u.target();
    let c = v.target();
    let p = b.context().modulus();
    if c.context().modulus() != p {
        return Err(Error::ContextMismatch("tensor factors over different moduli".into()));
    }

    let mut names: Vec<String> = b.context().vars().to_vec();
    let mut c_positions = Vec::with_capacity(c.context().num_vars());
    for vname in c.context().vars() {
        let fresh = fresh_name(vname, &names);
        c_positions.push(names.len());
        names.push(fresh);
    }
    let ctx = PolyContext::new(p, names)?;
    let b_positions: Vec<usize> = (0..b.context().num_vars()).collect();

    let mut rels = Vec::new();
    for r in b.relations().generators() {
        rels.push(r.embed(&ctx, &b_positions)?);
    }
    for r in c.relations().generators() {
        rels.push(r.embed(&ctx, &c_positions)?);
    }
    for (ub, vc) in u.images().iter().zip(v.images()) {
        let left = ub.embed(&ctx, &b_positions)?;
        let right = vc.embed(&ctx, &c_positions)?;
        rels.push(left.sub(&right)?);
    }

    let algebra = PresentedAlgebra::with_provenance(&ctx, rels, Provenance::Tensor, config)?;
    let left_images = b_positions.iter().map(|&i| algebra.var(i)).collect();
    let right_images = c_positions.iter().map(|&i| algebra.var(i)).collect();
    let left = make_map(b, &algebra, left_images)?;
    let right = make_map(c, &algebra, right_images)?;
    Ok(TensorData { algebra, left, right })
}

/// The universal property in action: a map out of B ⊗_A C from a compatible
/// pair B → D, C → D (agreement on the base is re-checked by validation).
pub fn tensor_pair_map(
    tensor: &TensorData,
    to_d_from_b: &AlgebraMap,
    to_d_from_c: &AlgebraMap,
) -> Result<AlgebraMap> {
    if to_d_from_b.target() != to_d_from_c.target() {
        return Err(Error::ContextMismatch("pair maps must share a target".into()));
    }
    let mut images = to_d_from_b.images().to_vec();
    images.extend(to_d_from_c.images().iter().cloned());
    make_map(&tensor.algebra, to_d_from_b.target(), images)
}

/// B × C presented with an explicit idempotent coordinate w, plus the two
/// projections.
pub struct ProductData {
    pub algebra: PresentedAlgebra,
    pub onto_left: AlgebraMap,
    pub onto_right: AlgebraMap,
}

pub fn direct_product(
    b: &PresentedAlgebra,
    c: &PresentedAlgebra,
    config: &GroebnerConfig,
) -> Result<ProductData> {
    let p = b.context().modulus();
    if c.context().modulus() != p {
        return Err(Error::ContextMismatch("product factors over different moduli".into()));
    }
    let mut names: Vec<String> = Vec::new();
    let mut taken: Vec<String> = b.context().vars().to_vec();
    {
        let mut all = taken.clone();
        all.extend(c.context().vars().iter().cloned());
        names.push(fresh_name("w", &all));
    }
    names.extend(b.context().vars().iter().cloned());
    let mut c_positions = Vec::with_capacity(c.context().num_vars());
    taken = names.clone();
    for vname in c.context().vars() {
        let fresh = fresh_name(vname, &taken);
        c_positions.push(names.len());
        names.push(fresh.clone());
        taken.push(fresh);
    }
    let ctx = PolyContext::new(p, names)?;
    let w = PrimePoly::var(&ctx, 0);
    let one = PrimePoly::one(&ctx);
    let b_positions: Vec<usize> = (1..=b.context().num_vars()).collect();

    let mut rels = Vec::new();
    // w is idempotent; b-variables live on the w side, c-variables opposite
    rels.push(w.mul(&w)?.sub(&w)?);
    for &i in &b_positions {
        let bi = PrimePoly::var(&ctx, i);
        rels.push(w.mul(&bi)?.sub(&bi)?);
    }
    for &j in &c_positions {
        let cj = PrimePoly::var(&ctx, j);
        rels.push(one.sub(&w)?.mul(&cj)?.sub(&cj)?);
    }
    for &i in &b_positions {
        for &j in &c_positions {
            rels.push(PrimePoly::var(&ctx, i).mul(&PrimePoly::var(&ctx, j))?);
        }
    }
    // relations of each factor, with constant terms steered through the
    // idempotent: r(b) − r(0) + r(0)·w vanishes on both components
    for r in b.relations().generators() {
        let lifted = r.embed(&ctx, &b_positions)?;
        let r0 = PrimePoly::constant(&ctx, lifted.constant_term().value());
        rels.push(lifted.sub(&r0)?.add(&r0.mul(&w)?)?);
    }
    for r in c.relations().generators() {
        let lifted = r.embed(&ctx, &c_positions)?;
        let r0 = PrimePoly::constant(&ctx, lifted.constant_term().value());
        rels.push(lifted.sub(&r0)?.add(&r0.mul(&one.sub(&w)?)?)?);
    }

    let algebra = PresentedAlgebra::with_provenance(&ctx, rels, Provenance::Product, config)?;

    // projections: w ↦ 1, b ↦ b, c ↦ 0 — and symmetrically
    let mut left_images = vec![b.one()];
    left_images.extend((0..b.context().num_vars()).map(|i| b.var(i)));
    left_images.extend(
        std::iter::repeat(PrimePoly::zero(b.context())).take(c.context().num_vars()),
    );
    let onto_left = make_map(&algebra, b, left_images)?;

    let mut right_images = vec![PrimePoly::zero(c.context())];
    right_images.extend(
        std::iter::repeat(PrimePoly::zero(c.context())).take(b.context().num_vars()),
    );
    right_images.extend((0..c.context().num_vars()).map(|j| c.var(j)));
    let onto_right = make_map(&algebra, c, right_images)?;

    Ok(ProductData { algebra, onto_left, onto_right })
}

// ---------------------------------------------------------------------------
// Kernels, images, and membership through the graph ring
// ---------------------------------------------------------------------------

/// Generators of ker(φ) as an ideal of the source presentation's polynomial
/// ring (the source relations are always contained in it).
pub fn map_kernel(phi: &AlgebraMap, config: &GroebnerConfig) -> Result<Ideal> {
    let graph = MapGraph::new(phi, config)?;
    let front: Vec<usize> = (0..graph.n_target).collect();
    let graph_ideal = Ideal::new(
        graph.gb.context(),
        graph.gb.elements().to_vec(),
    )?;
    let eliminated = eliminate(&graph_ideal, &front, config)?;
    // rename the eliminated generators back into the source context
    let src_ctx = phi.source().context();
    let positions: Vec<usize> = (0..src_ctx.num_vars()).collect();
    let gens = eliminated
        .generators()
        .iter()
        .map(|g| g.project(src_ctx, &positions))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(src_ctx, gens)
}

/// φ injective ⟺ its kernel reduces to zero in the source.
pub fn is_injective(phi: &AlgebraMap, config: &GroebnerConfig) -> Result<bool> {
    let kernel = map_kernel(phi, config)?;
    for g in kernel.generators() {
        if !phi.source().nf(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// φ surjective ⟺ every target variable lies in the image subalgebra.
pub fn is_surjective(phi: &AlgebraMap, config: &GroebnerConfig) -> Result<bool> {
    let graph = MapGraph::new(phi, config)?;
    if graph.gb.is_unit() {
        return Ok(true); // zero ring target: everything is hit
    }
    for i in 0..graph.n_target {
        let yi = PrimePoly::var(&graph.ctx, i);
        let nf = graph.gb.normal_form(&yi)?;
        if !graph.is_source_only(&nf) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A preimage of `b` under φ, if `b` lies in the image subalgebra.
pub fn preimage(
    phi: &AlgebraMap,
    b: &PrimePoly,
    config: &GroebnerConfig,
) -> Result<Option<PrimePoly>> {
    if b.context() != phi.target().context() {
        return Err(Error::ContextMismatch("preimage query in wrong context".into()));
    }
    let graph = MapGraph::new(phi, config)?;
    let lifted = graph.lift_target(b)?;
    let nf = graph.gb.normal_form(&lifted)?;
    if graph.is_source_only(&nf) {
        Ok(Some(graph.to_source(&nf, phi.source().context())?))
    } else {
        Ok(None)
    }
}
