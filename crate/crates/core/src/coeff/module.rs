//! Finitely generated modules as direct sums of cyclic factors, and their
//! morphisms as matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::matrix::Matrix;
use super::ring::{Elem, Factor, Ring, RingKind};
use super::smith::{normal_form, Track};
use crate::error::{Error, Result};

/// `⊕ R/(r_i)`, one generator per factor. Factors may be stored in any order;
/// [`Module::invariant_factors`] gives the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    ring: Ring,
    factors: Vec<Factor>,
}

impl Module {
    pub fn new(ring: &Ring, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            ring.check_factor(f)?;
        }
        Ok(Module { ring: ring.clone(), factors })
    }

    pub(crate) fn from_factors_unchecked(ring: &Ring, factors: Vec<Factor>) -> Self {
        Module { ring: ring.clone(), factors }
    }

    pub fn free(ring: &Ring, rank: usize) -> Self {
        Module { ring: ring.clone(), factors: vec![Factor::Free; rank] }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free(ring, 0)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of generators.
    pub fn gens(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of free factors.
    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_free()).count()
    }

    /// Finitely generated flat modules over the supported rings are free.
    pub fn is_flat(&self) -> bool {
        self.factors.iter().all(Factor::is_free)
    }

    pub fn is_projective(&self) -> bool {
        self.is_flat()
    }

    pub fn is_free(&self) -> bool {
        self.is_flat()
    }

    /// Relation of generator `i` (zero for free generators).
    pub fn relation(&self, i: usize) -> Elem {
        self.ring.factor_relation(&self.factors[i])
    }

    /// Relation matrix: one column `r_i e_i` per torsion generator.
    pub fn relation_matrix(&self) -> Matrix {
        let tors: Vec<usize> = (0..self.gens()).filter(|&i| !self.factors[i].is_free()).collect();
        let mut m = Matrix::zeros(&self.ring, self.gens(), tors.len());
        for (c, &i) in tors.iter().enumerate() {
            m[(i, c)] = self.relation(i);
        }
        m
    }

    /// Canonical invariant factors: torsion ascending (with successive
    /// divisibility over `Z`), then free.
    pub fn invariant_factors(&self) -> Vec<Factor> {
        let mut free = 0;
        let mut tors = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Free => free += 1,
                t => tors.push(t.clone()),
            }
        }
        let mut out = match self.ring.kind() {
            RingKind::Integers if tors.len() > 1 => {
                let diag: Vec<Elem> = tors.iter().map(|f| self.ring.factor_relation(f)).collect();
                let nf = normal_form(&self.ring, &Matrix::diagonal(&self.ring, &diag), Track::NONE);
                nf.diagonal().iter().filter_map(|d| self.ring.factor_from_diagonal(d)).collect()
            }
            _ => {
                tors.sort();
                tors
            }
        };
        out.extend(std::iter::repeat(Factor::Free).take(free));
        out
    }

    /// The module with its factors in canonical form.
    pub fn normalized(&self) -> Module {
        Module { ring: self.ring.clone(), factors: self.invariant_factors() }
    }

    pub fn is_isomorphic(&self, other: &Module) -> bool {
        self.ring == other.ring && self.invariant_factors() == other.invariant_factors()
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Module { ring: self.ring.clone(), factors }
    }

    pub fn direct_sum_all(ring: &Ring, parts: &[&Module]) -> Module {
        let factors = parts.iter().flat_map(|m| m.factors.iter().cloned()).collect();
        Module { ring: ring.clone(), factors }
    }

    /// `M ⊗ N` with generators ordered `(i, j)` lexicographically; pairs whose
    /// tensor vanishes are dropped.
    pub fn tensor(&self, other: &Module) -> Result<Module> {
        same_ring(&self.ring, &other.ring)?;
        Ok(self.tensor_layout(other).0)
    }

    /// The tensor product together with the index of each pair `(i, j)`.
    pub fn tensor_layout(&self, other: &Module) -> (Module, Vec<Option<usize>>) {
        let mut factors = Vec::new();
        let mut index = Vec::with_capacity(self.gens() * other.gens());
        for a in &self.factors {
            for b in &other.factors {
                match self.ring.tensor_factor(a, b) {
                    Some(f) => {
                        index.push(Some(factors.len()));
                        factors.push(f);
                    }
                    None => index.push(None),
                }
            }
        }
        (Module { ring: self.ring.clone(), factors }, index)
    }

    /// Reduce a coordinate vector into canonical representatives.
    pub fn reduce_vec(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().zip(&self.factors).map(|(x, f)| self.ring.reduce_in(x, f)).collect()
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariant_factors();
        if inv.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<(String, usize)> = Vec::new();
        for fac in &inv {
            let name = factor_name(&self.ring, fac);
            match parts.last_mut() {
                Some((n, c)) if *n == name => *c += 1,
                _ => parts.push((name, 1)),
            }
        }
        let s: Vec<String> = parts
            .into_iter()
            .map(|(n, c)| {
                if c == 1 {
                    n
                } else if n.contains('/') || n.contains('[') {
                    format!("({n})^{c}")
                } else {
                    format!("{n}^{c}")
                }
            })
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

fn factor_name(ring: &Ring, f: &Factor) -> String {
    match (f, ring.kind()) {
        (Factor::Free, _) => ring.to_string(),
        (Factor::Torsion(d), RingKind::Integers) => format!("Z/{d}"),
        (Factor::Torsion(e), RingKind::Chain { p, .. }) => {
            format!("Z/{}", BigInt::from(*p).pow(e.to_u32().unwrap()))
        }
        (Factor::Torsion(e), RingKind::DualChain { p, .. }) => format!("F_{p}[e]/(e^{e})"),
        (Factor::Torsion(t), _) => format!("R/({t})"),
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.to_string(), b.to_string()))
    }
}

/// A module map, with matrix indexed (codomain generator, domain generator).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    domain: Module,
    codomain: Module,
    matrix: Matrix,
}

impl Morphism {
    /// Checks shape and the order congruence, and reduces entries.
    pub fn new(domain: Module, codomain: Module, matrix: Matrix) -> Result<Self> {
        same_ring(&domain.ring, &codomain.ring)?;
        if matrix.shape() != (codomain.gens(), domain.gens()) {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.gens(),
                domain.gens()
            )));
        }
        let ring = domain.ring.clone();
        for j in 0..domain.gens() {
            let rj = domain.relation(j);
            if ring.is_zero(&rj) {
                continue;
            }
            for i in 0..codomain.gens() {
                let c = &matrix[(i, j)];
                if ring.is_zero(c) {
                    continue;
                }
                if !ring.divides(&codomain.relation(i), &ring.mul(&rj, c)) {
                    return Err(Error::Congruence { row: i, col: j });
                }
            }
        }
        Ok(Self::reduced(domain, codomain, matrix))
    }

    /// Reduces entries without checking the congruence.
    pub(crate) fn reduced(domain: Module, codomain: Module, mut matrix: Matrix) -> Self {
        let ring = domain.ring.clone();
        for i in 0..codomain.gens() {
            let f = &codomain.factors[i];
            if f.is_free() {
                continue;
            }
            for j in 0..domain.gens() {
                let x = ring.reduce_in(&matrix[(i, j)], f);
                matrix[(i, j)] = x;
            }
        }
        Morphism { domain, codomain, matrix }
    }

    pub fn identity(m: &Module) -> Self {
        Morphism { domain: m.clone(), codomain: m.clone(), matrix: Matrix::identity(&m.ring, m.gens()) }
    }

    pub fn zero(domain: &Module, codomain: &Module) -> Self {
        Morphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: Matrix::zeros(&domain.ring, codomain.gens(), domain.gens()),
        }
    }

    /// Multiplication by a scalar on `M`.
    pub fn scalar(m: &Module, c: &Elem) -> Self {
        let ring = &m.ring;
        let mat = Matrix::identity(ring, m.gens()).scale(ring, c);
        Self::reduced(m.clone(), m.clone(), mat)
    }

    pub fn domain(&self) -> &Module {
        &self.domain
    }

    pub fn codomain(&self) -> &Module {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> &Ring {
        &self.domain.ring
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero(&self.domain.ring)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.codomain != self.domain {
            return Err(Error::Shape("composition of non-composable morphisms".into()));
        }
        let m = self.matrix.mul(self.ring(), &other.matrix);
        Ok(Self::reduced(other.domain.clone(), self.codomain.clone(), m))
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        let m = self.matrix.add(self.ring(), &other.matrix);
        Ok(Self::reduced(self.domain.clone(), self.codomain.clone(), m))
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        let m = self.matrix.sub(self.ring(), &other.matrix);
        Ok(Self::reduced(self.domain.clone(), self.codomain.clone(), m))
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Shape("morphisms are not parallel".into()));
        }
        Ok(())
    }

    /// `f ⊗ g` in the generator layout of [`Module::tensor_layout`].
    pub fn tensor(&self, other: &Morphism) -> Result<Morphism> {
        same_ring(self.ring(), other.ring())?;
        let ring = self.ring();
        let (dom, di) = self.domain.tensor_layout(&other.domain);
        let (cod, ci) = self.codomain.tensor_layout(&other.codomain);
        let mut m = Matrix::zeros(ring, cod.gens(), dom.gens());
        let (a, b) = (&self.matrix, &other.matrix);
        for i in 0..a.cols() {
            for j in 0..b.cols() {
                let Some(col) = di[i * b.cols() + j] else { continue };
                for k in 0..a.rows() {
                    let x = &a[(k, i)];
                    if ring.is_zero(x) {
                        continue;
                    }
                    for l in 0..b.rows() {
                        let Some(row) = ci[k * b.rows() + l] else { continue };
                        let y = &b[(l, j)];
                        if !ring.is_zero(y) {
                            m[(row, col)] = ring.mul(x, y);
                        }
                    }
                }
            }
        }
        Ok(Self::reduced(dom, cod, m))
    }

    /// Apply to a coordinate vector of the domain.
    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        self.codomain.reduce_vec(&self.matrix.mul_vec(self.ring(), v))
    }

    /// Kernel, image, cokernel and the derived predicates.
    pub fn analyze(&self) -> Analysis {
        analyze(self)
    }

    pub fn is_surjective(&self) -> bool {
        let ring = self.ring();
        let big = self.matrix.hstack(&self.codomain.relation_matrix());
        quotient_free(ring, self.codomain.gens(), &big, false).factors.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        kernel_gens(self).1.is_empty()
    }
}

/// Result of [`Morphism::analyze`].
#[derive(Clone, Debug)]
pub struct Analysis {
    pub kernel: Module,
    pub kernel_inclusion: Morphism,
    pub image: Module,
    pub image_inclusion: Morphism,
    pub cokernel: Module,
    pub cokernel_projection: Morphism,
    /// A set-theoretic section of the cokernel projection at the level of
    /// coordinate vectors (`codomain gens x cokernel gens`).
    pub cokernel_section: Matrix,
    pub surjective: bool,
    pub injective: bool,
    pub split_mono: bool,
}

/// `R^n / span(k)`: canonical factors, projection `q x n` and a coordinate
/// section `n x q` with `proj * section = id`.
pub(crate) struct FreeQuotient {
    pub factors: Vec<Factor>,
    pub proj: Matrix,
    pub section: Matrix,
}

pub(crate) fn quotient_free(ring: &Ring, n: usize, k: &Matrix, track: bool) -> FreeQuotient {
    debug_assert_eq!(k.rows(), n);
    let nf = normal_form(ring, k, if track { Track::LEFT } else { Track::NONE });
    let mut kept = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        let d = if i < k.cols() { nf.d[(i, i)].clone() } else { ring.zero() };
        if let Some(f) = ring.factor_from_diagonal(&d) {
            kept.push(i);
            factors.push(f);
        }
    }
    let (proj, section) = if track {
        let p = nf.p.as_ref().unwrap();
        let pi = nf.p_inv.as_ref().unwrap();
        (p.select_rows(&kept), pi.select_cols(&kept))
    } else {
        (Matrix::zeros(ring, 0, 0), Matrix::zeros(ring, 0, 0))
    };
    FreeQuotient { factors, proj, section }
}

/// Generators of `{x in R^m : a x = 0}` as columns.
pub(crate) fn kernel_free(ring: &Ring, a: &Matrix) -> Matrix {
    let (n, m) = a.shape();
    let nf = normal_form(ring, a, Track::RIGHT);
    let q = nf.q.as_ref().unwrap();
    let mut cols = Vec::new();
    for i in 0..m {
        let d = if i < n { nf.d[(i, i)].clone() } else { ring.zero() };
        if let Some(g) = ring.annihilator(&d) {
            cols.push(q.column(i).iter().map(|x| ring.mul(x, &g)).collect::<Vec<_>>());
        }
    }
    let mut out = Matrix::zeros(ring, m, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..m {
            out[(i, j)] = c[i].clone();
        }
    }
    out
}

/// Some `x` with `a x = b` (column by column), if one exists.
pub(crate) fn solve_free(ring: &Ring, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let (n, m) = a.shape();
    debug_assert_eq!(b.rows(), n);
    let nf = normal_form(ring, a, Track::BOTH);
    let pb = nf.p.as_ref().unwrap().mul(ring, b);
    let mut y = Matrix::zeros(ring, m, b.cols());
    for c in 0..b.cols() {
        for i in 0..n {
            let rhs = &pb[(i, c)];
            let d = if i < m { nf.d[(i, i)].clone() } else { ring.zero() };
            let x = ring.div_exact(rhs, &d)?;
            if i < m {
                y[(i, c)] = x;
            }
        }
    }
    Some(nf.q.as_ref().unwrap().mul(ring, &y))
}

/// Some `x` with `a x ≡ b` modulo the column span of `rel`.
pub(crate) fn solve_modulo(ring: &Ring, a: &Matrix, b: &Matrix, rel: &Matrix) -> Option<Matrix> {
    let big = a.hstack(rel);
    let x = solve_free(ring, &big, b)?;
    Some(x.block(0, 0, a.cols(), b.cols()))
}

/// Image of `span(g)` in `R^n / span(h)`: factors and the inclusion `n x q`.
pub(crate) struct SubQuotient {
    pub factors: Vec<Factor>,
    pub incl: Matrix,
}

pub(crate) fn subquotient(ring: &Ring, g: &Matrix, h: &Matrix) -> SubQuotient {
    let gc = g.cols();
    let ker = kernel_free(ring, &g.hstack(h));
    let k = ker.block(0, 0, gc, ker.cols());
    let q = quotient_free(ring, gc, &k, true);
    SubQuotient { incl: g.mul(ring, &q.section), factors: q.factors }
}

/// Kernel generators of a morphism in domain coordinates, and the kernel
/// factors.
fn kernel_gens(f: &Morphism) -> (Matrix, Vec<Factor>) {
    let ring = f.ring();
    let r = f.domain.gens();
    let ker = kernel_free(ring, &f.matrix.hstack(&f.codomain.relation_matrix()));
    let kp = ker.block(0, 0, r, ker.cols());
    let sq = subquotient(ring, &kp, &f.domain.relation_matrix());
    (sq.incl, sq.factors)
}

fn analyze(f: &Morphism) -> Analysis {
    let ring = f.ring().clone();
    let (kincl, kf) = kernel_gens(f);
    let kernel = Module::from_factors_unchecked(&ring, kf);
    let kernel_inclusion = Morphism::reduced(kernel.clone(), f.domain.clone(), kincl);

    let rel_n = f.codomain.relation_matrix();
    let im = subquotient(&ring, &f.matrix, &rel_n);
    let image = Module::from_factors_unchecked(&ring, im.factors);
    let image_inclusion = Morphism::reduced(image.clone(), f.codomain.clone(), im.incl);

    let cq = quotient_free(&ring, f.codomain.gens(), &f.matrix.hstack(&rel_n), true);
    let cokernel = Module::from_factors_unchecked(&ring, cq.factors);
    let cokernel_projection = Morphism::reduced(f.codomain.clone(), cokernel.clone(), cq.proj);

    let surjective = cokernel.is_zero();
    let injective = kernel.is_zero();
    let split_mono = injective && f.codomain.is_isomorphic(&f.domain.direct_sum(&cokernel));
    Analysis {
        kernel,
        kernel_inclusion,
        image,
        image_inclusion,
        cokernel,
        cokernel_projection,
        cokernel_section: cq.section,
        surjective,
        injective,
        split_mono,
    }
}

/// A canonical surjection `θ: R → k` with nilpotent kernel between supported
/// rings of the same residue characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingExtension {
    source: Ring,
    target: Ring,
    kernel_exponent: u32,
    small: bool,
}

impl RingExtension {
    pub fn new(source: &Ring, target: &Ring) -> Result<Self> {
        let bad = || Error::InvalidExtension(format!("{source} -> {target}"));
        let (ms, mt) = match (source.kind(), target.kind()) {
            (RingKind::Chain { p, m }, RingKind::Chain { p: q, m: n })
            | (RingKind::DualChain { p, m }, RingKind::DualChain { p: q, m: n })
                if p == q && m > n =>
            {
                (*m, *n)
            }
            (RingKind::Chain { p, m } | RingKind::DualChain { p, m }, RingKind::PrimeField { p: q })
                if p == q =>
            {
                (*m, 1)
            }
            _ => return Err(bad()),
        };
        let kernel_exponent = ms.div_ceil(mt);
        Ok(RingExtension {
            source: source.clone(),
            target: target.clone(),
            kernel_exponent,
            small: kernel_exponent <= 2,
        })
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// Least `n` with `I^n = 0`.
    pub fn kernel_exponent(&self) -> u32 {
        self.kernel_exponent
    }

    /// Whether `I^2 = 0`.
    pub fn is_small(&self) -> bool {
        self.small
    }

    fn m_source(&self) -> u32 {
        self.source.nilpotency().unwrap()
    }

    fn m_target(&self) -> u32 {
        self.target.nilpotency().unwrap()
    }

    /// Factorization into small steps `R = R_0 → R_1 → ... → k`, halving the
    /// nilpotency each step.
    pub fn small_steps(&self) -> Vec<RingExtension> {
        let mt = self.m_target();
        let mut levels = vec![self.m_source()];
        while *levels.last().unwrap() > 2 * mt {
            let cur = *levels.last().unwrap();
            levels.push(cur.div_ceil(2).max(mt));
        }
        levels.push(mt);
        levels.dedup();
        let ring_at = |m: u32| -> Ring {
            if m == mt {
                return self.target.clone();
            }
            let p = self.source.prime().unwrap();
            match self.source.kind() {
                RingKind::Chain { .. } => Ring::chain(p, m).unwrap(),
                _ => Ring::dual_chain(p, m).unwrap(),
            }
        };
        levels
            .windows(2)
            .map(|w| RingExtension::new(&ring_at(w[0]), &ring_at(w[1])).unwrap())
            .collect()
    }

    /// `θ(x)`: the canonical representative reduced modulo `π^{m_k}`.
    pub fn reduce(&self, x: &Elem) -> Elem {
        match x {
            Elem::Res(v) => Elem::Res(v % self.target_modulus()),
            _ => unreachable!("extensions are between finite rings"),
        }
    }

    fn target_modulus(&self) -> u64 {
        self.source.prime().unwrap().pow(self.m_target())
    }

    /// Canonical lift of `x ∈ k` to `R`.
    pub fn lift(&self, x: &Elem) -> Elem {
        x.clone()
    }

    /// `k ⊗_R M`.
    pub fn base_change(&self, m: &Module) -> Result<Module> {
        same_ring(&self.source, m.ring())?;
        let mt = self.m_target() as u64;
        let factors = m
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Torsion(e) if e < &BigInt::from(mt) => Factor::Torsion(e.clone()),
                _ => Factor::Free,
            })
            .collect();
        Ok(Module::from_factors_unchecked(&self.target, factors))
    }

    /// `k ⊗_R f`, entrywise reduction.
    pub fn base_change_morphism(&self, f: &Morphism) -> Result<Morphism> {
        let dom = self.base_change(f.domain())?;
        let cod = self.base_change(f.codomain())?;
        Ok(Morphism::reduced(dom, cod, self.reduce_matrix(f.matrix())))
    }

    pub fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        m.map(|x| self.reduce(x))
    }

    /// A `k`-module viewed as an `R`-module.
    pub fn restrict_scalars(&self, m: &Module) -> Result<Module> {
        same_ring(&self.target, m.ring())?;
        let mt = self.m_target() as u64;
        let factors = m
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Free => Factor::torsion(mt),
                t => t.clone(),
            })
            .collect();
        Ok(Module::from_factors_unchecked(&self.source, factors))
    }

    pub fn restrict_morphism(&self, f: &Morphism) -> Result<Morphism> {
        let dom = self.restrict_scalars(f.domain())?;
        let cod = self.restrict_scalars(f.codomain())?;
        Ok(Morphism::reduced(dom, cod, f.matrix().map(|x| self.lift(x))))
    }

    /// The kernel ideal `I = (π^{m_k})` as a `k`-module; requires `I^2 = 0`.
    pub fn ideal_as_target_module(&self) -> Result<Module> {
        if !self.small {
            return Err(Error::InvalidExtension(format!(
                "{} -> {} is not small; factor it into small steps first",
                self.source, self.target
            )));
        }
        let (ms, mt) = (self.m_source(), self.m_target());
        let e = ms - mt;
        let f = if e >= mt { Factor::Free } else { Factor::torsion(e as u64) };
        Ok(Module::from_factors_unchecked(&self.target, vec![f]))
    }

    /// Generator `π^{m_k}` of the kernel ideal, an element of `R`.
    pub fn ideal_generator(&self) -> Elem {
        self.source.uniformizer_pow(self.m_target())
    }
}

/// Whether `A --f--> B --g--> C` is exact at `B`.
pub fn is_exact(f: &Morphism, g: &Morphism) -> Result<bool> {
    let gf = g.compose(f)?;
    if !gf.is_zero() {
        return Ok(false);
    }
    let k = g.analyze().kernel_inclusion;
    let ring = f.ring();
    Ok(solve_modulo(ring, f.matrix(), k.matrix(), &f.codomain().relation_matrix()).is_some())
}

impl fmt::Display for RingExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Ring {
        Ring::integers()
    }

    fn mor(ring: &Ring, dom: &Module, cod: &Module, rows: &[Vec<i64>]) -> Morphism {
        let m = if rows.is_empty() {
            Matrix::zeros(ring, cod.gens(), dom.gens())
        } else {
            Matrix::from_rows(ring, rows)
        };
        Morphism::new(dom.clone(), cod.clone(), m).unwrap()
    }

    #[test]
    fn times_two_has_cokernel_z2() {
        let r = z();
        let m = Module::free(&r, 1);
        let a = mor(&r, &m, &m, &[vec![2]]).analyze();
        assert!(a.injective);
        assert!(!a.surjective);
        assert!(!a.split_mono);
        assert_eq!(a.cokernel.factors(), &[Factor::torsion(2)]);
        assert_eq!(a.cokernel.to_string(), "Z/2");
    }

    #[test]
    fn zero_map() {
        let r = Ring::chain(3, 2).unwrap();
        let m = Module::new(&r, vec![Factor::torsion(1), Factor::Free]).unwrap();
        let a = Morphism::zero(&m, &m).analyze();
        assert!(a.kernel.is_isomorphic(&m));
        assert!(a.image.is_zero());
        assert!(a.cokernel.is_isomorphic(&m));
    }

    #[test]
    fn projection_over_f5() {
        let r = Ring::prime_field(5).unwrap();
        let a = mor(&r, &Module::free(&r, 2), &Module::free(&r, 1), &[vec![1, 0]]).analyze();
        assert!(a.surjective);
        assert_eq!(a.kernel.factors(), &[Factor::Free]);
        assert!(!a.injective);
    }

    #[test]
    fn congruence_is_enforced() {
        let r = z();
        let z2 = Module::new(&r, vec![Factor::torsion(2)]).unwrap();
        let z4 = Module::new(&r, vec![Factor::torsion(4)]).unwrap();
        assert!(Morphism::new(z2.clone(), z4.clone(), Matrix::from_rows(&r, &[vec![1]])).is_err());
        assert!(Morphism::new(z2.clone(), z4.clone(), Matrix::from_rows(&r, &[vec![2]])).is_ok());
        assert!(Morphism::new(z4, z2.clone(), Matrix::from_rows(&r, &[vec![1]])).is_ok());
        assert!(Morphism::new(z2, Module::free(&r, 1), Matrix::from_rows(&r, &[vec![1]])).is_err());
    }

    #[test]
    fn split_mono_detection() {
        let r = z();
        // Z -> Z^2, t ↦ (t, 2t) splits; t ↦ (2t, 4t) does not
        let a = mor(&r, &Module::free(&r, 1), &Module::free(&r, 2), &[vec![1], vec![2]]).analyze();
        assert!(a.split_mono);
        let b = mor(&r, &Module::free(&r, 1), &Module::free(&r, 2), &[vec![2], vec![4]]).analyze();
        assert!(b.injective && !b.split_mono);
        // Z/2 -> Z/4, 1 ↦ 2 is injective but not split
        let z2 = Module::new(&r, vec![Factor::torsion(2)]).unwrap();
        let z4 = Module::new(&r, vec![Factor::torsion(4)]).unwrap();
        let c = mor(&r, &z2, &z4, &[vec![2]]).analyze();
        assert!(c.injective && !c.split_mono);
    }

    #[test]
    fn tensor_examples() {
        let r = z();
        let z4 = Module::new(&r, vec![Factor::torsion(4)]).unwrap();
        let z2 = Module::new(&r, vec![Factor::torsion(2)]).unwrap();
        assert_eq!(z4.tensor(&z2).unwrap().invariant_factors(), vec![Factor::torsion(2)]);
        let m = Module::new(&r, vec![Factor::torsion(3), Factor::Free]).unwrap();
        assert!(Module::free(&r, 1).tensor(&m).unwrap().is_isomorphic(&m));
        let f2 = Ring::chain(2, 1).unwrap_or_else(|_| Ring::prime_field(2).unwrap());
        let a = Module::free(&f2, 2).tensor(&Module::free(&f2, 3)).unwrap();
        assert_eq!(a.free_rank(), 6);
        let c = Ring::chain(2, 3).unwrap();
        let x = Module::new(&c, vec![Factor::torsion(1)]).unwrap();
        let y = Module::new(&c, vec![Factor::torsion(2)]).unwrap();
        assert_eq!(x.tensor(&y).unwrap().factors(), &[Factor::torsion(1)]);
    }

    #[test]
    fn flatness() {
        let z2 = Module::new(&z(), vec![Factor::torsion(2)]).unwrap();
        assert!(!z2.is_flat());
        let d = Ring::dual_chain(3, 2).unwrap();
        assert!(Module::free(&d, 2).is_flat());
        let c = Ring::chain(2, 2).unwrap();
        assert!(!Module::new(&c, vec![Factor::torsion(1)]).unwrap().is_flat());
    }

    #[test]
    fn base_change_examples() {
        let z4 = Ring::chain(2, 2).unwrap();
        let f2 = Ring::prime_field(2).unwrap();
        let th = RingExtension::new(&z4, &f2).unwrap();
        assert_eq!(th.base_change(&Module::free(&z4, 3)).unwrap(), Module::free(&f2, 3));
        let d = Ring::dual_chain(3, 2).unwrap();
        let f3 = Ring::prime_field(3).unwrap();
        let th = RingExtension::new(&d, &f3).unwrap();
        let m = Module::free(&d, 1);
        let f = Morphism::new(m.clone(), m, Matrix::from_vec(1, 1, vec![d.parse_elem("1+e").unwrap()])).unwrap();
        let g = th.base_change_morphism(&f).unwrap();
        assert_eq!(g.matrix()[(0, 0)], f3.one());
        let z8 = Ring::chain(2, 3).unwrap();
        let th = RingExtension::new(&z8, &f2).unwrap();
        let m = Module::new(&z8, vec![Factor::torsion(2)]).unwrap();
        assert_eq!(th.base_change(&m).unwrap(), Module::free(&f2, 1));
    }

    #[test]
    fn extension_metadata() {
        let z8 = Ring::chain(2, 3).unwrap();
        let z2 = Ring::prime_field(2).unwrap();
        let th = RingExtension::new(&z8, &z2).unwrap();
        assert_eq!(th.kernel_exponent(), 3);
        assert!(!th.is_small());
        let steps = th.small_steps();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].target(), &Ring::chain(2, 2).unwrap());
        assert!(steps.iter().all(RingExtension::is_small));
        assert!(RingExtension::new(&z2, &z8).is_err());
        assert!(RingExtension::new(&Ring::integers(), &z2).is_err());
        let d4 = Ring::dual_chain(2, 4).unwrap();
        let d3 = Ring::dual_chain(2, 3).unwrap();
        let th = RingExtension::new(&d4, &d3).unwrap();
        assert_eq!(th.kernel_exponent(), 2);
        assert_eq!(th.ideal_as_target_module().unwrap().factors(), &[Factor::torsion(1)]);
    }

    #[test]
    fn display_forms() {
        let r = z();
        let m = Module::new(&r, vec![Factor::Free, Factor::torsion(2), Factor::Free]).unwrap();
        assert_eq!(m.to_string(), "Z/2 + Z^2");
        assert_eq!(Module::zero(&r).to_string(), "0");
        let c = Ring::chain(2, 3).unwrap();
        assert_eq!(Module::new(&c, vec![Factor::torsion(2)]).unwrap().to_string(), "Z/4");
    }

    #[test]
    fn integer_invariant_factors_combine() {
        let r = z();
        let m = Module::new(&r, vec![Factor::torsion(2), Factor::torsion(3)]).unwrap();
        assert_eq!(m.invariant_factors(), vec![Factor::torsion(6)]);
    }
}
