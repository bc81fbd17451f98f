//! Brute-force module theory at desk scale: finite-dimensional modules over a
//! finite-dimensional F_p-algebra, with tensor products, hom spaces, purity
//! (= splitness at this scale), and a randomized verifier for the
//! surjectivity-descent lemmas — if φ: M → N is pure and 1_N⊗h is surjective
//! then 1_M⊗h is surjective; specialized to M = R it descends surjectivity of
//! h itself; and the constructive step that turns generators of B⊗G into a
//! surjection from a finite free module.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{make_algebra, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::field_poly::{Monomial, PrimePoly};
use crate::linalg::{FpMatrix, SpanBuilder};

/// A finite-dimensional module over a finite-dimensional F_p-algebra, given
/// by one action matrix per ring variable. Construction validates that the
/// matrices commute pairwise and kill every ring relation, so ideal elements
/// act as zero and the action is well-defined on the quotient ring.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteModule {
    ring: PresentedAlgebra,
    dim: usize,
    actions: Vec<FpMatrix>,
}

fn matrix_pow(m: &FpMatrix, mut e: u64) -> FpMatrix {
    let mut acc = FpMatrix::identity(m.modulus(), m.rows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

impl FiniteModule {
    pub fn new(ring: &PresentedAlgebra, dim: usize, actions: Vec<FpMatrix>) -> Result<Self> {
        let p = ring.context().modulus();
        if actions.len() != ring.context().num_vars() {
            return Err(Error::IllFormedMap(format!(
                "{} action matrices given for {} ring variables",
                actions.len(),
                ring.context().num_vars()
            )));
        }
        for a in &actions {
            if a.rows() != dim || a.cols() != dim || a.modulus() != p {
                return Err(Error::IllFormedMap(
                    "action matrix has the wrong shape or modulus".into(),
                ));
            }
        }
        for i in 0..actions.len() {
            for j in (i + 1)..actions.len() {
                if actions[i].mul(&actions[j]) != actions[j].mul(&actions[i]) {
                    return Err(Error::IllFormedMap(format!(
                        "action matrices for {} and {} do not commute",
                        ring.context().vars()[i],
                        ring.context().vars()[j]
                    )));
                }
            }
        }
        let module = FiniteModule { ring: ring.clone(), dim, actions };
        for r in ring.relations().generators() {
            if !module.ring_action(r)?.is_zero() {
                return Err(Error::IllFormedMap(format!(
                    "ring relation {} does not annihilate the module",
                    r.to_text(&crate::field_poly::MonomialOrder::GrevLex)
                )));
            }
        }
        Ok(module)
    }

    /// The zero module.
    pub fn zero(ring: &PresentedAlgebra) -> Self {
        let p = ring.context().modulus();
        let actions = (0..ring.context().num_vars())
            .map(|_| FpMatrix::zero(p, 0, 0))
            .collect();
        FiniteModule { ring: ring.clone(), dim: 0, actions }
    }

    /// F_p^dim with every variable acting as zero. Valid whenever no ring
    /// relation has a constant term (true for all presentations of nonzero
    /// rings used here).
    pub fn trivial(ring: &PresentedAlgebra, dim: usize) -> Result<Self> {
        let p = ring.context().modulus();
        let actions = (0..ring.context().num_vars())
            .map(|_| FpMatrix::zero(p, dim, dim))
            .collect();
        FiniteModule::new(ring, dim, actions)
    }

    pub fn ring(&self) -> &PresentedAlgebra {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.actions
    }

    /// The matrix by which an arbitrary ring element acts. Multiplicative on
    /// representatives, and relations act as zero, so this factors through
    /// the quotient ring.
    pub fn ring_action(&self, f: &PrimePoly) -> Result<FpMatrix> {
        if f.context() != self.ring.context() {
            return Err(Error::ContextMismatch("ring element in the wrong context".into()));
        }
        let p = self.ring.context().modulus();
        let mut out = FpMatrix::zero(p, self.dim, self.dim);
        for (mono, c) in f.terms() {
            let mut prod = FpMatrix::identity(p, self.dim);
            for (v, &e) in mono.exps().iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&matrix_pow(&self.actions[v], e));
                }
            }
            out = out.add(&prod.scale(c.value()));
        }
        Ok(out)
    }
}

/// The monomial basis underlying the regular module, ascending grevlex.
pub fn ring_monomial_basis(ring: &PresentedAlgebra) -> Result<Vec<Monomial>> {
    ring.basis().finite_std_monomials().ok_or_else(|| {
        Error::InvalidContext("the ring is not a finite-dimensional F_p-space".into())
    })
}

/// R as a module over itself, on its standard-monomial basis.
pub fn regular_module(ring: &PresentedAlgebra) -> Result<FiniteModule> {
    let basis = ring_monomial_basis(ring)?;
    let index: BTreeMap<Vec<u64>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.exps().to_vec(), i))
        .collect();
    let p = ring.context().modulus();
    let d = basis.len();
    let mut actions = Vec::with_capacity(ring.context().num_vars());
    for v in 0..ring.context().num_vars() {
        let xv = ring.var(v);
        let mut mat = FpMatrix::zero(p, d, d);
        for (j, m) in basis.iter().enumerate() {
            let mj = PrimePoly::from_monomial(ring.context(), m.clone(), 1);
            let nf = ring.nf(&xv.mul(&mj)?)?;
            for (mono, c) in nf.terms() {
                mat.set(index[mono.exps()], j, c.value());
            }
        }
        actions.push(mat);
    }
    FiniteModule::new(ring, d, actions)
}

/// R^rank, with block-diagonal regular actions.
pub fn free_module(ring: &PresentedAlgebra, rank: usize) -> Result<FiniteModule> {
    let reg = regular_module(ring)?;
    let p = ring.context().modulus();
    let d = reg.dim() * rank;
    let mut actions = Vec::with_capacity(ring.context().num_vars());
    for a in reg.actions() {
        let mut big = FpMatrix::zero(p, d, d);
        for block in 0..rank {
            let off = block * reg.dim();
            for r in 0..reg.dim() {
                for c in 0..reg.dim() {
                    big.set(off + r, off + c, a.get(r, c));
                }
            }
        }
        actions.push(big);
    }
    FiniteModule::new(ring, d, actions)
}

/// An R-linear map between finite modules: a matrix that intertwines every
/// action (checked at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    source: FiniteModule,
    target: FiniteModule,
    matrix: FpMatrix,
}

impl ModuleMap {
    pub fn new(source: &FiniteModule, target: &FiniteModule, matrix: FpMatrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::ContextMismatch("module map across different rings".into()));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::IllFormedMap(format!(
                "module map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        for (v, a) in source.actions().iter().enumerate() {
            if target.actions()[v].mul(&matrix) != matrix.mul(a) {
                return Err(Error::IllFormedMap(format!(
                    "matrix does not intertwine the action of {}",
                    source.ring().context().vars()[v]
                )));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(m: &FiniteModule) -> Self {
        let p = m.ring().context().modulus();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: FpMatrix::identity(p, m.dim()),
        }
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }
}

/// M ⊗_R N presented on explicit coordinates: the Kronecker space of the two
/// underlying F_p-spaces modulo the balancing relations
/// (r·m)⊗n − m⊗(r·n) for each ring variable r.
#[derive(Debug, Clone)]
pub struct ModuleTensor {
    pub module: FiniteModule,
    /// Projection from the Kronecker space (index i·dim(N)+j for e_i⊗f_j)
    /// onto the tensor coordinates; the bilinear structure map.
    pub projection: FpMatrix,
    /// Kronecker positions whose classes form the chosen basis; the unit
    /// vector there is a section of the projection.
    pub lift_positions: Vec<usize>,
}

pub fn module_tensor(m: &FiniteModule, n: &FiniteModule) -> Result<ModuleTensor> {
    if m.ring() != n.ring() {
        return Err(Error::ContextMismatch("tensor factors over different rings".into()));
    }
    let ring = m.ring();
    let p = ring.context().modulus();
    let (dm, dn) = (m.dim(), n.dim());
    let big = dm * dn;

    // Balancing relations (left action minus right action).
    let mut span = SpanBuilder::new(p, big);
    for v in 0..ring.context().num_vars() {
        let a = &m.actions()[v];
        let b = &n.actions()[v];
        for i in 0..dm {
            for j in 0..dn {
                let mut vec = vec![0u64; big];
                for k in 0..dm {
                    let c = a.get(k, i);
                    if c != 0 {
                        vec[k * dn + j] = (vec[k * dn + j] + c) % p;
                    }
                }
                for l in 0..dn {
                    let c = b.get(l, j);
                    if c != 0 {
                        vec[i * dn + l] = (vec[i * dn + l] + p - c) % p;
                    }
                }
                span.insert(vec);
            }
        }
    }

    let pivots = span.pivots();
    let lift_positions: Vec<usize> = (0..big).filter(|i| !pivots.contains(i)).collect();
    let qdim = lift_positions.len();

    let project = |v: Vec<u64>| -> Vec<u64> {
        let reduced = span.reduce(v);
        lift_positions.iter().map(|&pos| reduced[pos]).collect()
    };

    let mut projection = FpMatrix::zero(p, qdim, big);
    for col in 0..big {
        let mut unit = vec![0u64; big];
        unit[col] = 1;
        for (r, val) in project(unit).into_iter().enumerate() {
            projection.set(r, col, val);
        }
    }

    // Induced actions through the left factor (equal to the right one modulo
    // the balancing relations).
    let mut actions = Vec::with_capacity(ring.context().num_vars());
    for v in 0..ring.context().num_vars() {
        let a = &m.actions()[v];
        let mut mat = FpMatrix::zero(p, qdim, qdim);
        for (k, &pos) in lift_positions.iter().enumerate() {
            let (i, j) = (pos / dn, pos % dn);
            let mut vec = vec![0u64; big];
            for l in 0..dm {
                let c = a.get(l, i);
                if c != 0 {
                    vec[l * dn + j] = c;
                }
            }
            for (r, val) in project(vec).into_iter().enumerate() {
                mat.set(r, k, val);
            }
        }
        actions.push(mat);
    }
    let module = FiniteModule::new(ring, qdim, actions)?;
    Ok(ModuleTensor { module, projection, lift_positions })
}

/// 1_X ⊗ h: X⊗F → X⊗G for h: F → G.
pub fn tensor_map(x: &FiniteModule, h: &ModuleMap) -> Result<ModuleMap> {
    let tf = module_tensor(x, h.source())?;
    let tg = module_tensor(x, h.target())?;
    let p = x.ring().context().modulus();
    let df = h.source().dim();
    let dg = h.target().dim();
    let big_g = x.dim() * dg;

    let mut mat = FpMatrix::zero(p, tg.module.dim(), tf.module.dim());
    for (k, &pos) in tf.lift_positions.iter().enumerate() {
        let (i, j) = (pos / df, pos % df);
        let mut vec = vec![0u64; big_g];
        for l in 0..dg {
            let c = h.matrix().get(l, j);
            if c != 0 {
                vec[i * dg + l] = c;
            }
        }
        for r in 0..tg.module.dim() {
            let mut acc = 0u64;
            for (col, &val) in vec.iter().enumerate() {
                if val != 0 {
                    acc = (acc + tg.projection.get(r, col) * val) % p;
                }
            }
            mat.set(r, k, acc);
        }
    }
    ModuleMap::new(&tf.module, &tg.module, mat)
}

/// An F_p-basis of Hom_R(M, N), found as the nullspace of the intertwining
/// conditions.
pub fn hom_basis(m: &FiniteModule, n: &FiniteModule) -> Result<Vec<ModuleMap>> {
    if m.ring() != n.ring() {
        return Err(Error::ContextMismatch("hom between modules over different rings".into()));
    }
    let p = m.ring().context().modulus();
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dm * dn; // T[r][c] at r·dm + c, T: M → N is dn×dm
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let nv = m.ring().context().num_vars();
    let mut sys = FpMatrix::zero(p, nv * dn * dm, dn * dm);
    for v in 0..nv {
        let a = &m.actions()[v];
        let b = &n.actions()[v];
        for r in 0..dn {
            for c in 0..dm {
                let row = v * dn * dm + r * dm + c;
                // (B·T)[r,c] = Σ_k B[r,k] T[k,c]
                for k in 0..dn {
                    let coef = b.get(r, k);
                    if coef != 0 {
                        let col = k * dm + c;
                        sys.set(row, col, (sys.get(row, col) + coef) % p);
                    }
                }
                // −(T·A)[r,c] = −Σ_k T[r,k] A[k,c]
                for k in 0..dm {
                    let coef = a.get(k, c);
                    if coef != 0 {
                        let col = r * dm + k;
                        sys.set(row, col, (sys.get(row, col) + p - coef) % p);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for vecs in sys.nullspace() {
        let mut t = FpMatrix::zero(p, dn, dm);
        for r in 0..dn {
            for c in 0..dm {
                t.set(r, c, vecs[r * dm + c]);
            }
        }
        out.push(ModuleMap::new(m, n, t)?);
    }
    Ok(out)
}

/// Purity of an injective map of finite modules. At this scale purity and
/// splitness coincide (finite modules are pure-injective), so the decision is
/// one linear solve: does some combination ψ of Hom(N, M) satisfy ψ∘φ = id?
/// Non-injective maps are never pure and return false immediately.
pub fn is_pure_finite(phi: &ModuleMap) -> bool {
    if !phi.is_injective() {
        return false;
    }
    let dm = phi.source().dim();
    if dm == 0 {
        return true;
    }
    let basis = hom_basis(phi.target(), phi.source())
        .expect("source and target share a ring by construction");
    if basis.is_empty() {
        return false;
    }
    let p = phi.source().ring().context().modulus();
    let mut sys = FpMatrix::zero(p, dm * dm, basis.len());
    for (a, psi) in basis.iter().enumerate() {
        let comp = psi.matrix().mul(phi.matrix());
        for r in 0..dm {
            for c in 0..dm {
                sys.set(r * dm + c, a, comp.get(r, c));
            }
        }
    }
    let mut rhs = vec![0u64; dm * dm];
    for i in 0..dm {
        rhs[i * dm + i] = 1;
    }
    sys.solve(&rhs).is_some()
}

/// G / im(h), with the projection map. The image is action-invariant because
/// h intertwines, so the quotient inherits well-defined actions.
pub fn cokernel(h: &ModuleMap) -> Result<(FiniteModule, ModuleMap)> {
    let g = h.target();
    let p = g.ring().context().modulus();
    let dg = g.dim();
    let mut span = SpanBuilder::new(p, dg);
    for c in 0..h.matrix().cols() {
        span.insert((0..dg).map(|r| h.matrix().get(r, c)).collect());
    }
    let pivots = span.pivots();
    let coset: Vec<usize> = (0..dg).filter(|i| !pivots.contains(i)).collect();
    let qdim = coset.len();
    let project = |v: Vec<u64>| -> Vec<u64> {
        let reduced = span.reduce(v);
        coset.iter().map(|&pos| reduced[pos]).collect()
    };

    let mut actions = Vec::with_capacity(g.actions().len());
    for a in g.actions() {
        let mut mat = FpMatrix::zero(p, qdim, qdim);
        for (k, &pos) in coset.iter().enumerate() {
            let col: Vec<u64> = (0..dg).map(|r| a.get(r, pos)).collect();
            for (r, val) in project(col).into_iter().enumerate() {
                mat.set(r, k, val);
            }
        }
        actions.push(mat);
    }
    let quotient = FiniteModule::new(g.ring(), qdim, actions)?;

    let mut proj = FpMatrix::zero(p, qdim, dg);
    for c in 0..dg {
        let mut unit = vec![0u64; dg];
        unit[c] = 1;
        for (r, val) in project(unit).into_iter().enumerate() {
            proj.set(r, c, val);
        }
    }
    let map = ModuleMap::new(g, &quotient, proj)?;
    Ok((quotient, map))
}

// ---------------------------------------------------------------------------
// Randomized descent verification
// ---------------------------------------------------------------------------

/// Tally of a surjectivity-descent verification run. Serializable; zero
/// violations is the pass condition.
#[derive(Debug, Clone, Serialize)]
pub struct DescentReport {
    /// Instances attempted (including vacuous ones).
    pub instances: u64,
    /// Instances where the descent implication for general pure φ fired.
    pub lemma_checks: u64,
    /// Instances specialized to φ: R → N (surjectivity of h itself descends).
    pub corollary_checks: u64,
    /// Instances of the constructive step: generators of B⊗G induce a
    /// surjection from a finite free module after tensoring.
    pub constructive_checks: u64,
    /// Instances whose antecedent failed (φ not pure, or 1_N⊗h not
    /// surjective); counted, not checked.
    pub vacuous: u64,
    /// Checked instances where h was already surjective outright.
    pub trivial_surjections: u64,
    pub violations: u64,
    pub notes: Vec<String>,
}

/// The four smallest interesting coefficient rings: the field itself plus
/// three non-semisimple local algebras.
pub fn enumeration_rings() -> Result<Vec<PresentedAlgebra>> {
    Ok(vec![
        make_algebra(2, &[], &[])?,
        make_algebra(2, &["e"], &["e^2"])?,
        make_algebra(2, &["x"], &["x^3"])?,
        make_algebra(2, &["x", "y"], &["x^2", "x*y", "y^2"])?,
    ])
}

fn library_modules(ring: &PresentedAlgebra) -> Result<Vec<FiniteModule>> {
    Ok(vec![
        FiniteModule::zero(ring),
        FiniteModule::trivial(ring, 1)?,
        FiniteModule::trivial(ring, 2)?,
        regular_module(ring)?,
    ])
}

fn random_matrix(p: u64, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
    let mut m = FpMatrix::zero(p, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..p));
        }
    }
    m
}

fn sample_module(
    ring: &PresentedAlgebra,
    lib: &[FiniteModule],
    rng: &mut ChaCha8Rng,
) -> FiniteModule {
    if rng.gen_bool(0.35) {
        return lib[rng.gen_range(0..lib.len())].clone();
    }
    let p = ring.context().modulus();
    let nv = ring.context().num_vars();
    let d = rng.gen_range(0..=3usize);
    for _ in 0..60 {
        let actions: Vec<FpMatrix> = (0..nv).map(|_| random_matrix(p, d, d, rng)).collect();
        if let Ok(m) = FiniteModule::new(ring, d, actions) {
            return m;
        }
    }
    lib[rng.gen_range(0..lib.len())].clone()
}

fn sample_map(m: &FiniteModule, n: &FiniteModule, rng: &mut ChaCha8Rng) -> Result<ModuleMap> {
    let basis = hom_basis(m, n)?;
    let p = m.ring().context().modulus();
    let mut mat = FpMatrix::zero(p, n.dim(), m.dim());
    for b in &basis {
        let c = rng.gen_range(0..p);
        if c != 0 {
            mat = mat.add(&b.matrix().scale(c));
        }
    }
    ModuleMap::new(m, n, mat)
}

/// Build the constructive-step surjection for a tensor: decompose each basis
/// class of B⊗G into elementary tensors Σ_i e_i ⊗ g_i, collect the nonzero
/// g-parts, and map a free module onto them.
fn constructive_surjection(
    ring: &PresentedAlgebra,
    b: &FiniteModule,
    g: &FiniteModule,
    tensor: &ModuleTensor,
) -> Result<ModuleMap> {
    let p = ring.context().modulus();
    let dg = g.dim();
    let mut g_parts: Vec<Vec<u64>> = Vec::new();
    for &pos in &tensor.lift_positions {
        // Each chosen basis class lifts to an elementary tensor; decompose
        // the lift into its g-parts per b-coordinate and keep the nonzero
        // ones (for a unit lift that is a single basis vector of G).
        let mut kron = vec![0u64; b.dim() * dg];
        kron[pos] = 1;
        for i in 0..b.dim() {
            let part: Vec<u64> = (0..dg).map(|l| kron[i * dg + l]).collect();
            if part.iter().any(|&x| x != 0) {
                g_parts.push(part);
            }
        }
    }
    let rank = g_parts.len();
    let free = free_module(ring, rank)?;
    let reg_basis = ring_monomial_basis(ring)?;
    let dr = reg_basis.len();
    let mut mat = FpMatrix::zero(p, g.dim(), rank * dr);
    for (a, part) in g_parts.iter().enumerate() {
        for (bidx, mono) in reg_basis.iter().enumerate() {
            let act = g.ring_action(&PrimePoly::from_monomial(ring.context(), mono.clone(), 1))?;
            let col = act.apply(part);
            for (r, val) in col.into_iter().enumerate() {
                mat.set(r, a * dr + bidx, val);
            }
        }
    }
    ModuleMap::new(&free, g, mat)
}

/// Randomized sweep over the enumeration rings checking the descent lemmas:
/// every instance with pure φ and surjective 1_N⊗h must have surjective
/// 1_M⊗h; specialized to M = R, surjectivity of h itself must descend; and
/// the constructive free-module surjection must always be surjective after
/// tensoring. Deterministic for a fixed seed.
pub fn verify_surjectivity_descent(budget: u64, seed: u64) -> Result<DescentReport> {
    let rings = enumeration_rings()?;
    let libraries: Vec<Vec<FiniteModule>> =
        rings.iter().map(library_modules).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DescentReport {
        instances: 0,
        lemma_checks: 0,
        corollary_checks: 0,
        constructive_checks: 0,
        vacuous: 0,
        trivial_surjections: 0,
        violations: 0,
        notes: Vec::new(),
    };

    while report.instances < budget {
        let ri = (report.instances as usize) % rings.len();
        let ring = &rings[ri];
        let lib = &libraries[ri];
        match report.instances % 3 {
            0 => {
                // General descent: φ: M → N pure, 1_N⊗h surjective
                // ⇒ 1_M⊗h surjective.
                let m = sample_module(ring, lib, &mut rng);
                let n = sample_module(ring, lib, &mut rng);
                let f = sample_module(ring, lib, &mut rng);
                let g = sample_module(ring, lib, &mut rng);
                let phi = sample_map(&m, &n, &mut rng)?;
                let h = sample_map(&f, &g, &mut rng)?;
                if is_pure_finite(&phi) && tensor_map(&n, &h)?.is_surjective() {
                    report.lemma_checks += 1;
                    if h.is_surjective() {
                        report.trivial_surjections += 1;
                    }
                    if !tensor_map(&m, &h)?.is_surjective() {
                        report.violations += 1;
                        report.notes.push(format!(
                            "descent failed over {} at instance {}",
                            ring.describe(),
                            report.instances
                        ));
                    }
                } else {
                    report.vacuous += 1;
                }
            }
            1 => {
                // Specialization to the unit map: φ: R → N pure and 1_N⊗h
                // surjective force h itself surjective (via R⊗F ≅ F).
                let reg = regular_module(ring)?;
                let n = sample_module(ring, lib, &mut rng);
                let f = sample_module(ring, lib, &mut rng);
                let g = sample_module(ring, lib, &mut rng);
                let phi = sample_map(&reg, &n, &mut rng)?;
                let h = sample_map(&f, &g, &mut rng)?;
                if is_pure_finite(&phi) && tensor_map(&n, &h)?.is_surjective() {
                    report.corollary_checks += 1;
                    if h.is_surjective() {
                        report.trivial_surjections += 1;
                    } else {
                        report.violations += 1;
                        report.notes.push(format!(
                            "unit-map descent failed over {} at instance {}",
                            ring.describe(),
                            report.instances
                        ));
                    }
                } else {
                    report.vacuous += 1;
                }
            }
            _ => {
                // Constructive step: a spanning set of B⊗G, decomposed into
                // elementary tensors, induces F free → G with 1_B⊗h surjective.
                let b = sample_module(ring, lib, &mut rng);
                let g = sample_module(ring, lib, &mut rng);
                let tensor = module_tensor(&b, &g)?;
                let h = constructive_surjection(ring, &b, &g, &tensor)?;
                report.constructive_checks += 1;
                if !tensor_map(&b, &h)?.is_surjective() {
                    report.violations += 1;
                    report.notes.push(format!(
                        "constructive surjection failed over {} at instance {}",
                        ring.describe(),
                        report.instances
                    ));
                }
            }
        }
        report.instances += 1;
    }
    report.notes.push(format!(
        "enumeration stopped at the configured budget of {budget} instances"
    ));
    report.notes.push(
        "rings: F_2, F_2[e]/(e^2), F_2[x]/(x^3), F_2[x,y]/(x^2, x*y, y^2); module dimension <= 3"
            .to_string(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps_ring() -> PresentedAlgebra {
        make_algebra(2, &["e"], &["e^2"]).unwrap()
    }

    fn cubic_ring() -> PresentedAlgebra {
        make_algebra(2, &["x"], &["x^3"]).unwrap()
    }

    #[test]
    fn regular_module_of_the_cubic_ring() {
        let ring = cubic_ring();
        let reg = regular_module(&ring).unwrap();
        assert_eq!(reg.dim(), 3);
        // x acts as the shift 1 ↦ x ↦ x^2 ↦ 0.
        let a = &reg.actions()[0];
        assert_eq!(a.get(1, 0), 1);
        assert_eq!(a.get(2, 1), 1);
        assert!(matrix_pow(a, 3).is_zero());
    }

    #[test]
    fn module_validation_rejects_bad_actions() {
        let ring = eps_ring();
        // e^2 must act as zero; the identity action does not satisfy that.
        let bad = FiniteModule::new(&ring, 2, vec![FpMatrix::identity(2, 2)]);
        assert!(bad.is_err());

        let ring2 = make_algebra(2, &["x", "y"], &[]).unwrap();
        let mut a = FpMatrix::zero(2, 2, 2);
        a.set(0, 1, 1);
        let mut b = FpMatrix::zero(2, 2, 2);
        b.set(1, 0, 1);
        // a and b do not commute.
        assert!(FiniteModule::new(&ring2, 2, vec![a, b]).is_err());
    }

    #[test]
    fn tensor_with_regular_module_is_identity_up_to_iso() {
        let ring = cubic_ring();
        let reg = regular_module(&ring).unwrap();
        let n = FiniteModule::trivial(&ring, 2).unwrap();
        let t = module_tensor(&reg, &n).unwrap();
        assert_eq!(t.module.dim(), n.dim());

        // The canonical map class(r_i ⊗ f_j) ↦ r_i·f_j is an isomorphism.
        let basis = ring_monomial_basis(&ring).unwrap();
        let p = 2;
        let mut mat = FpMatrix::zero(p, n.dim(), t.module.dim());
        for (k, &pos) in t.lift_positions.iter().enumerate() {
            let (i, j) = (pos / n.dim(), pos % n.dim());
            let act = n
                .ring_action(&PrimePoly::from_monomial(ring.context(), basis[i].clone(), 1))
                .unwrap();
            for r in 0..n.dim() {
                mat.set(r, k, act.get(r, j));
            }
        }
        let iso = ModuleMap::new(&t.module, &n, mat).unwrap();
        assert!(iso.is_injective() && iso.is_surjective());
    }

    #[test]
    fn tensor_of_residue_fields_over_dual_numbers() {
        let ring = eps_ring();
        let k = FiniteModule::trivial(&ring, 1).unwrap(); // R/(e)
        let t = module_tensor(&k, &k).unwrap();
        assert_eq!(t.module.dim(), 1);
    }

    #[test]
    fn tensor_with_zero_module_vanishes() {
        let ring = eps_ring();
        let z = FiniteModule::zero(&ring);
        let reg = regular_module(&ring).unwrap();
        assert_eq!(module_tensor(&z, &reg).unwrap().module.dim(), 0);
        assert_eq!(module_tensor(&reg, &z).unwrap().module.dim(), 0);
    }

    #[test]
    fn hom_from_regular_is_evaluation_at_one() {
        let ring = eps_ring();
        let reg = regular_module(&ring).unwrap();
        for n in [FiniteModule::trivial(&ring, 1).unwrap(), regular_module(&ring).unwrap()] {
            assert_eq!(hom_basis(&reg, &n).unwrap().len(), n.dim());
        }
    }

    #[test]
    fn hom_from_residue_field_into_dual_numbers() {
        let ring = eps_ring();
        let k = FiniteModule::trivial(&ring, 1).unwrap();
        let reg = regular_module(&ring).unwrap();
        // Only the socle e·R receives R/(e).
        assert_eq!(hom_basis(&k, &reg).unwrap().len(), 1);
    }

    #[test]
    fn hom_into_zero_module_is_empty() {
        let ring = eps_ring();
        let reg = regular_module(&ring).unwrap();
        let z = FiniteModule::zero(&ring);
        assert!(hom_basis(&reg, &z).unwrap().is_empty());
    }

    #[test]
    fn split_inclusion_is_pure() {
        let ring = eps_ring();
        let reg = regular_module(&ring).unwrap();
        let rr = free_module(&ring, 2).unwrap();
        let mut mat = FpMatrix::zero(2, 4, 2);
        mat.set(0, 0, 1);
        mat.set(1, 1, 1);
        let inc = ModuleMap::new(&reg, &rr, mat).unwrap();
        assert!(is_pure_finite(&inc));
    }

    #[test]
    fn socle_inclusion_is_not_pure() {
        let ring = eps_ring();
        let reg = regular_module(&ring).unwrap();
        // e·R is one-dimensional with e acting as zero; it sits at the basis
        // vector e inside R.
        let socle = FiniteModule::trivial(&ring, 1).unwrap();
        let mut mat = FpMatrix::zero(2, 2, 1);
        mat.set(1, 0, 1); // 1 ↦ e
        let inc = ModuleMap::new(&socle, &reg, mat).unwrap();
        assert!(inc.is_injective());
        assert!(!is_pure_finite(&inc));

        // Purity fails concretely: tensoring with R/(e) kills the image.
        let k = FiniteModule::trivial(&ring, 1).unwrap();
        let tensored = tensor_map(&k, &inc).unwrap();
        assert!(!tensored.is_injective());
    }

    #[test]
    fn identity_is_pure() {
        let ring = cubic_ring();
        let reg = regular_module(&ring).unwrap();
        assert!(is_pure_finite(&ModuleMap::identity(&reg)));
    }

    #[test]
    fn pure_maps_stay_injective_after_tensoring() {
        let ring = eps_ring();
        let reg = regular_module(&ring).unwrap();
        let rr = free_module(&ring, 2).unwrap();
        let mut mat = FpMatrix::zero(2, 4, 2);
        mat.set(0, 0, 1);
        mat.set(1, 1, 1);
        let inc = ModuleMap::new(&reg, &rr, mat).unwrap();
        assert!(is_pure_finite(&inc));
        for x in library_modules(&ring).unwrap() {
            assert!(tensor_map(&x, &inc).unwrap().is_injective());
        }
    }

    #[test]
    fn tensor_dimension_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rings = enumeration_rings().unwrap();
        let libs: Vec<_> = rings.iter().map(|r| library_modules(r).unwrap()).collect();
        for trial in 0..50 {
            let ri = trial % rings.len();
            let m = sample_module(&rings[ri], &libs[ri], &mut rng);
            let n = sample_module(&rings[ri], &libs[ri], &mut rng);
            assert_eq!(
                module_tensor(&m, &n).unwrap().module.dim(),
                module_tensor(&n, &m).unwrap().module.dim()
            );
        }
    }

    #[test]
    fn tensoring_is_right_exact() {
        // dim coker(1_M⊗h) must equal dim M⊗coker(h).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rings = enumeration_rings().unwrap();
        let libs: Vec<_> = rings.iter().map(|r| library_modules(r).unwrap()).collect();
        for trial in 0..50 {
            let ri = trial % rings.len();
            let m = sample_module(&rings[ri], &libs[ri], &mut rng);
            let f = sample_module(&rings[ri], &libs[ri], &mut rng);
            let g = sample_module(&rings[ri], &libs[ri], &mut rng);
            let h = sample_map(&f, &g, &mut rng).unwrap();
            let tensored = tensor_map(&m, &h).unwrap();
            let coker_dim = tensored.target().dim() - tensored.matrix().rank();
            let (coker, _) = cokernel(&h).unwrap();
            assert_eq!(coker_dim, module_tensor(&m, &coker).unwrap().module.dim());
        }
    }

    #[test]
    fn descent_verification_runs_clean() {
        let report = verify_surjectivity_descent(540, 0).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.instances >= 500);
        assert!(report.lemma_checks > 0);
        assert!(report.corollary_checks > 0);
        assert!(report.constructive_checks > 0);
        assert!(report.vacuous > 0);
        assert!(report.trivial_surjections > 0);
    }

    #[test]
    fn descent_verification_is_deterministic() {
        let a = verify_surjectivity_descent(120, 7).unwrap();
        let b = verify_surjectivity_descent(120, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
