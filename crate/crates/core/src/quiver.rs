//! Quivers of modules over a finite ordered vertex set, their tensor product
//! `⊗_S` and hom-wise limits.

use crate::coeff::limits::{finite_colimit, finite_limit, Diagram};
use crate::coeff::{Matrix, Module, Morphism, Ring};
use crate::error::{Error, Result};

/// `Q(a, b)` for `a, b ∈ S`. Homs are stored densely; a zero module stands
/// for an absent entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    ring: Ring,
    vertices: Vec<String>,
    homs: Vec<Module>,
}

impl Quiver {
    pub fn zero(ring: &Ring, vertices: &[String]) -> Self {
        let s = vertices.len();
        Quiver { ring: ring.clone(), vertices: vertices.to_vec(), homs: vec![Module::zero(ring); s * s] }
    }

    /// `I_S`: `R` on the diagonal, zero elsewhere.
    pub fn unit(ring: &Ring, vertices: &[String]) -> Self {
        let mut q = Self::zero(ring, vertices);
        for a in 0..vertices.len() {
            q.set_hom(a, a, Module::free(ring, 1));
        }
        q
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn hom(&self, a: usize, b: usize) -> &Module {
        &self.homs[a * self.size() + b]
    }

    pub fn set_hom(&mut self, a: usize, b: usize, m: Module) {
        let s = self.size();
        self.homs[a * s + b] = m;
    }

    /// Pairs `(a, b)` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let s = self.size();
        (0..s).flat_map(move |a| (0..s).map(move |b| (a, b)))
    }

    pub fn is_zero(&self) -> bool {
        self.homs.iter().all(Module::is_zero)
    }

    fn check_compatible(&self, other: &Quiver) -> Result<()> {
        if self.vertices != other.vertices {
            return Err(Error::VertexMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    /// `(P ⊗_S Q)(a, c) = ⊕_b P(a, b) ⊗ Q(b, c)`, generators ordered
    /// `(b, P-generator, Q-generator)`.
    pub fn tensor(&self, other: &Quiver) -> Result<Quiver> {
        self.check_compatible(other)?;
        let mut out = Quiver::zero(&self.ring, &self.vertices);
        for (a, c) in self.pairs() {
            let parts: Vec<Module> =
                (0..self.size()).map(|b| self.hom(a, b).tensor_layout(other.hom(b, c)).0).collect();
            let refs: Vec<&Module> = parts.iter().collect();
            out.set_hom(a, c, Module::direct_sum_all(&self.ring, &refs));
        }
        Ok(out)
    }

    /// `Q ⊗ M` hom-wise.
    pub fn tensor_module(&self, m: &Module) -> Result<Quiver> {
        let mut out = self.clone();
        for (a, b) in self.pairs() {
            out.set_hom(a, b, self.hom(a, b).tensor(m)?);
        }
        Ok(out)
    }
}

/// Componentwise morphisms `f_{a,b}: P(a, b) → Q(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverMorphism {
    source: Quiver,
    target: Quiver,
    comps: Vec<Morphism>,
}

impl QuiverMorphism {
    pub fn new(source: Quiver, target: Quiver, comps: Vec<Morphism>) -> Result<Self> {
        source.check_compatible(&target)?;
        if comps.len() != source.size() * source.size() {
            return Err(Error::Shape("wrong number of quiver morphism components".into()));
        }
        for (k, (a, b)) in source.pairs().enumerate() {
            if comps[k].domain() != source.hom(a, b) || comps[k].codomain() != target.hom(a, b) {
                return Err(Error::Shape(format!("component ({a},{b}) has the wrong shape")));
            }
        }
        Ok(QuiverMorphism { source, target, comps })
    }

    /// Build from matrices, checking congruences.
    pub fn from_matrices(source: Quiver, target: Quiver, mats: Vec<Matrix>) -> Result<Self> {
        let mut comps = Vec::with_capacity(mats.len());
        for ((a, b), m) in source.pairs().zip(mats) {
            comps.push(Morphism::new(source.hom(a, b).clone(), target.hom(a, b).clone(), m)?);
        }
        Self::new(source, target, comps)
    }

    pub fn identity(q: &Quiver) -> Self {
        let comps = q.pairs().map(|(a, b)| Morphism::identity(q.hom(a, b))).collect();
        QuiverMorphism { source: q.clone(), target: q.clone(), comps }
    }

    pub fn zero(source: &Quiver, target: &Quiver) -> Self {
        let comps = source.pairs().map(|(a, b)| Morphism::zero(source.hom(a, b), target.hom(a, b))).collect();
        QuiverMorphism { source: source.clone(), target: target.clone(), comps }
    }

    pub fn source(&self) -> &Quiver {
        &self.source
    }

    pub fn target(&self) -> &Quiver {
        &self.target
    }

    pub fn component(&self, a: usize, b: usize) -> &Morphism {
        &self.comps[a * self.source.size() + b]
    }

    pub fn components(&self) -> &[Morphism] {
        &self.comps
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &QuiverMorphism) -> Result<QuiverMorphism> {
        let comps = self.comps.iter().zip(&other.comps).map(|(f, g)| f.compose(g)).collect::<Result<_>>()?;
        Ok(QuiverMorphism { source: other.source.clone(), target: self.target.clone(), comps })
    }

    /// `f ⊗_S g`.
    pub fn tensor(&self, other: &QuiverMorphism) -> Result<QuiverMorphism> {
        let source = self.source.tensor(&other.source)?;
        let target = self.target.tensor(&other.target)?;
        let ring = self.source.ring().clone();
        let s = self.source.size();
        let mut comps = Vec::with_capacity(s * s);
        for (a, c) in source.pairs() {
            let blocks: Vec<Morphism> =
                (0..s).map(|b| self.component(a, b).tensor(other.component(b, c))).collect::<Result<_>>()?;
            let mats: Vec<&Matrix> = blocks.iter().map(|m| m.matrix()).collect();
            let m = Matrix::block_diagonal(&ring, &mats);
            comps.push(Morphism::new(source.hom(a, c).clone(), target.hom(a, c).clone(), m)?);
        }
        Ok(QuiverMorphism { source, target, comps })
    }
}

/// A finite diagram of quivers.
#[derive(Clone, Debug)]
pub struct QuiverDiagram {
    pub ring: Ring,
    pub vertices: Vec<String>,
    pub objects: Vec<Quiver>,
    pub arrows: Vec<(usize, usize, QuiverMorphism)>,
}

impl QuiverDiagram {
    fn hom_diagram(&self, a: usize, b: usize) -> Result<Diagram> {
        let mut d = Diagram::new(&self.ring);
        for q in &self.objects {
            if q.vertices() != self.vertices.as_slice() {
                return Err(Error::VertexMismatch);
            }
            d.add_object(q.hom(a, b).clone());
        }
        for (s, t, f) in &self.arrows {
            d.add_arrow(*s, *t, f.component(a, b).clone());
        }
        Ok(d)
    }
}

/// Hom-wise limit with its cone. The empty diagram gives the zero quiver.
pub fn quiver_limit(d: &QuiverDiagram) -> Result<(Quiver, Vec<QuiverMorphism>)> {
    let mut out = Quiver::zero(&d.ring, &d.vertices);
    let mut legs: Vec<Vec<Morphism>> = vec![Vec::new(); d.objects.len()];
    for (a, b) in out.clone().pairs() {
        let l = finite_limit(&d.hom_diagram(a, b)?)?;
        out.set_hom(a, b, l.module.clone());
        for (k, c) in l.cone.into_iter().enumerate() {
            legs[k].push(c);
        }
    }
    let cone = legs
        .into_iter()
        .zip(&d.objects)
        .map(|(comps, q)| QuiverMorphism::new(out.clone(), q.clone(), comps))
        .collect::<Result<_>>()?;
    Ok((out, cone))
}

/// Hom-wise colimit with its cocone.
pub fn quiver_colimit(d: &QuiverDiagram) -> Result<(Quiver, Vec<QuiverMorphism>)> {
    let mut out = Quiver::zero(&d.ring, &d.vertices);
    let mut legs: Vec<Vec<Morphism>> = vec![Vec::new(); d.objects.len()];
    for (a, b) in out.clone().pairs() {
        let c = finite_colimit(&d.hom_diagram(a, b)?)?;
        out.set_hom(a, b, c.module.clone());
        for (k, m) in c.cocone.into_iter().enumerate() {
            legs[k].push(m);
        }
    }
    let cocone = legs
        .into_iter()
        .zip(&d.objects)
        .map(|(comps, q)| QuiverMorphism::new(q.clone(), out.clone(), comps))
        .collect::<Result<_>>()?;
    Ok((out, cocone))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Factor;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn unit_law() {
        let r = Ring::prime_field(3).unwrap();
        let v = names(2);
        let mut q = Quiver::zero(&r, &v);
        q.set_hom(0, 1, Module::free(&r, 2));
        q.set_hom(1, 1, Module::free(&r, 1));
        let u = Quiver::unit(&r, &v);
        assert_eq!(u.tensor(&q).unwrap(), q);
        assert_eq!(q.tensor(&u).unwrap(), q);
    }

    #[test]
    fn one_vertex_is_module_tensor() {
        let r = Ring::integers();
        let v = names(1);
        let mut p = Quiver::zero(&r, &v);
        p.set_hom(0, 0, Module::new(&r, vec![Factor::torsion(4), Factor::Free]).unwrap());
        let mut q = Quiver::zero(&r, &v);
        q.set_hom(0, 0, Module::new(&r, vec![Factor::torsion(6)]).unwrap());
        let t = p.tensor(&q).unwrap();
        let expect = p.hom(0, 0).tensor(q.hom(0, 0)).unwrap();
        assert!(t.hom(0, 0).is_isomorphic(&expect));
    }

    #[test]
    fn three_vertex_expansion() {
        let r = Ring::prime_field(2).unwrap();
        let v = names(3);
        let mut p = Quiver::zero(&r, &v);
        p.set_hom(0, 1, Module::free(&r, 1));
        let mut q = Quiver::zero(&r, &v);
        q.set_hom(1, 2, Module::free(&r, 2));
        let t = p.tensor(&q).unwrap();
        for (a, c) in t.pairs() {
            let expect = if (a, c) == (0, 2) { 2 } else { 0 };
            assert_eq!(t.hom(a, c).gens(), expect);
        }
    }

    #[test]
    fn limits_homwise() {
        let r = Ring::integers();
        let v = names(2);
        let mut q = Quiver::zero(&r, &v);
        q.set_hom(0, 1, Module::free(&r, 2));
        let d = QuiverDiagram { ring: r.clone(), vertices: v.clone(), objects: vec![q.clone()], arrows: vec![] };
        let (l, cone) = quiver_limit(&d).unwrap();
        assert!(l.hom(0, 1).is_isomorphic(q.hom(0, 1)));
        assert!(cone[0].component(0, 1).analyze().surjective);
        let e = QuiverDiagram { ring: r.clone(), vertices: v, objects: vec![], arrows: vec![] };
        assert!(quiver_limit(&e).unwrap().0.is_zero());
    }
}
