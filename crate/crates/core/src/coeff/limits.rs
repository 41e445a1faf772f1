//! Finite limits and colimits of modules.
//!
//! The limit of a diagram is the kernel of
//! `⊕_d Y_d → ⊕_a Y_{tgt a}, (y_d) ↦ (Y_a(y_{src a}) − y_{tgt a})`,
//! and the colimit is the cokernel of the dual map.

use super::matrix::Matrix;
use super::module::{kernel_free, quotient_free, same_ring, solve_modulo, subquotient, Module, Morphism};
use super::ring::Ring;
use crate::error::{Error, Result};

/// A finite diagram of modules.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub ring: Ring,
    pub objects: Vec<Module>,
    /// `(source, target, map)`.
    pub arrows: Vec<(usize, usize, Morphism)>,
}

impl Diagram {
    pub fn new(ring: &Ring) -> Self {
        Diagram { ring: ring.clone(), objects: Vec::new(), arrows: Vec::new() }
    }

    pub fn add_object(&mut self, m: Module) -> usize {
        self.objects.push(m);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, src: usize, tgt: usize, f: Morphism) {
        self.arrows.push((src, tgt, f));
    }

    fn check(&self) -> Result<()> {
        for m in &self.objects {
            same_ring(&self.ring, m.ring())?;
        }
        for (k, (s, t, f)) in self.arrows.iter().enumerate() {
            let (Some(ms), Some(mt)) = (self.objects.get(*s), self.objects.get(*t)) else {
                return Err(Error::Diagram(format!("arrow {k} has an endpoint outside the diagram")));
            };
            if f.domain() != ms || f.codomain() != mt {
                return Err(Error::Diagram(format!("arrow {k} ({s} -> {t}) does not match its endpoints")));
            }
        }
        Ok(())
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.objects.len() + 1);
        let mut acc = 0;
        off.push(0);
        for m in &self.objects {
            acc += m.gens();
            off.push(acc);
        }
        off
    }

    fn sum_of_objects(&self) -> Module {
        let parts: Vec<&Module> = self.objects.iter().collect();
        Module::direct_sum_all(&self.ring, &parts)
    }
}

/// A limit with its projection cone.
#[derive(Clone, Debug)]
pub struct Limit {
    pub module: Module,
    /// `cone[d]: limit → Y_d`.
    pub cone: Vec<Morphism>,
    inclusion: Matrix,
    sum: Module,
}

/// `lim D`. The empty diagram gives the zero module.
pub fn finite_limit(d: &Diagram) -> Result<Limit> {
    d.check()?;
    let ring = &d.ring;
    let off = d.offsets();
    let total = *off.last().unwrap();
    let sum = d.sum_of_objects();
    let arrow_rows: usize = d.arrows.iter().map(|(_, t, _)| d.objects[*t].gens()).sum();
    let mut phi = Matrix::zeros(ring, arrow_rows, total);
    let mut rel_blocks = Vec::new();
    let mut r0 = 0;
    for (s, t, f) in &d.arrows {
        phi.set_block(r0, off[*s], f.matrix());
        let nt = d.objects[*t].gens();
        for i in 0..nt {
            let c = off[*t] + i;
            phi[(r0 + i, c)] = ring.sub(&phi[(r0 + i, c)], &ring.one());
        }
        rel_blocks.push(d.objects[*t].relation_matrix());
        r0 += nt;
    }
    let rel_cod = Matrix::block_diagonal(ring, &rel_blocks.iter().collect::<Vec<_>>());
    let big = phi.hstack(&rel_cod);
    let ker = kernel_free(ring, &big);
    let kp = ker.block(0, 0, total, ker.cols());
    let sq = subquotient(ring, &kp, &sum.relation_matrix());
    let module = Module::from_factors_unchecked(ring, sq.factors);
    let cone = d
        .objects
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let block = sq.incl.block(off[k], 0, m.gens(), module.gens());
            Morphism::reduced(module.clone(), m.clone(), block)
        })
        .collect();
    Ok(Limit { module, cone, inclusion: sq.incl, sum })
}

impl Limit {
    /// The unique `u: L → lim` with `cone[d] ∘ u = legs[d]`, for a cone
    /// `legs` over the same diagram.
    pub fn factor(&self, legs: &[Morphism]) -> Result<Morphism> {
        if legs.len() != self.cone.len() {
            return Err(Error::Diagram("cone has the wrong number of legs".into()));
        }
        let ring = self.module.ring();
        let Some(apex) = legs.first().map(|l| l.domain().clone()) else {
            return Err(Error::Diagram("cannot factor a cone over the empty diagram".into()));
        };
        let blocks: Vec<&Matrix> = legs.iter().map(|l| l.matrix()).collect();
        let mut c = Matrix::zeros(ring, 0, apex.gens());
        for b in blocks {
            c = c.vstack(b);
        }
        let u = solve_modulo(ring, &self.inclusion, &c, &self.sum.relation_matrix())
            .ok_or_else(|| Error::NotSolvable("legs do not form a cone".into()))?;
        Morphism::new(apex, self.module.clone(), u)
    }

    /// `Y_{apex} → lim` assembled from the maps `apex → Y_d`.
    pub fn inclusion_into_sum(&self) -> Morphism {
        Morphism::reduced(self.module.clone(), self.sum.clone(), self.inclusion.clone())
    }
}

/// A colimit with its injection cocone.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub module: Module,
    /// `cocone[d]: Y_d → colim`.
    pub cocone: Vec<Morphism>,
    section: Matrix,
    offsets: Vec<usize>,
}

/// `colim D`. The empty diagram gives the zero module.
pub fn finite_colimit(d: &Diagram) -> Result<Colimit> {
    d.check()?;
    let ring = &d.ring;
    let off = d.offsets();
    let total = *off.last().unwrap();
    let sum = d.sum_of_objects();
    let arrow_cols: usize = d.arrows.iter().map(|(s, _, _)| d.objects[*s].gens()).sum();
    let mut psi = Matrix::zeros(ring, total, arrow_cols);
    let mut c0 = 0;
    for (s, t, f) in &d.arrows {
        psi.set_block(off[*t], c0, f.matrix());
        for i in 0..d.objects[*s].gens() {
            let r = off[*s] + i;
            psi[(r, c0 + i)] = ring.sub(&psi[(r, c0 + i)], &ring.one());
        }
        c0 += d.objects[*s].gens();
    }
    let big = psi.hstack(&sum.relation_matrix());
    let q = quotient_free(ring, total, &big, true);
    let module = Module::from_factors_unchecked(ring, q.factors);
    let cocone = d
        .objects
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let block = q.proj.block(0, off[k], module.gens(), m.gens());
            Morphism::reduced(m.clone(), module.clone(), block)
        })
        .collect();
    Ok(Colimit { module, cocone, section: q.section, offsets: off })
}

impl Colimit {
    /// The unique `u: colim → L` with `u ∘ cocone[d] = legs[d]`.
    pub fn factor(&self, legs: &[Morphism]) -> Result<Morphism> {
        if legs.len() != self.cocone.len() {
            return Err(Error::Diagram("cocone has the wrong number of legs".into()));
        }
        let ring = self.module.ring();
        let Some(apex) = legs.first().map(|l| l.codomain().clone()) else {
            return Ok(Morphism::zero(&self.module, &self.module));
        };
        let mut c = Matrix::zeros(ring, apex.gens(), 0);
        for l in legs {
            c = c.hstack(l.matrix());
        }
        debug_assert_eq!(c.cols(), *self.offsets.last().unwrap());
        Morphism::new(self.module.clone(), apex, c.mul(ring, &self.section))
    }
}
