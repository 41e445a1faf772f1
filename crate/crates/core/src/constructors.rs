//! Producers of templicial modules: nerves of linear categories, free
//! templicial modules on truncated simplicial sets, built-in examples and
//! seeded generators.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Elem, Factor, Matrix, Module, Morphism, Ring};
use crate::error::{Error, Result};
use crate::necklace::{fint_maps, FintMap};
use crate::quiver::{Quiver, QuiverMorphism};
use crate::templicial::{required_keys, StructureKind, TemplicialModule, TensorBasis};

// ----------------------------------------------------------------------
// linear categories

/// A category enriched in modules over a ring, with finitely many objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCategory {
    ring: Ring,
    objects: Vec<String>,
    homs: Quiver,
    /// `C(a,b) ⊗ C(b,c) → C(a,c)`, keyed `(a, b, c)`.
    mult: BTreeMap<(usize, usize, usize), Morphism>,
    /// Coordinates of the unit in `C(a,a)`.
    units: Vec<Vec<Elem>>,
}

impl LinearCategory {
    /// `mult(a, b, c)` gives the matrix of composition with columns in the
    /// layout of `C(a,b) ⊗ C(b,c)`.
    pub fn new(
        ring: &Ring,
        objects: Vec<String>,
        homs: Quiver,
        mut mult: impl FnMut(usize, usize, usize) -> Result<Matrix>,
        units: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let s = objects.len();
        if homs.vertices() != objects.as_slice() {
            return Err(Error::VertexMismatch);
        }
        if units.len() != s {
            return Err(Error::Invalid("one unit per object is required".into()));
        }
        let mut table = BTreeMap::new();
        for a in 0..s {
            if units[a].len() != homs.hom(a, a).gens() {
                return Err(Error::Invalid(format!("unit of {} has the wrong length", objects[a])));
            }
            for b in 0..s {
                for c in 0..s {
                    let dom = homs.hom(a, b).tensor(homs.hom(b, c))?;
                    let m = Morphism::new(dom, homs.hom(a, c).clone(), mult(a, b, c)?)?;
                    table.insert((a, b, c), m);
                }
            }
        }
        let units = units.iter().enumerate().map(|(a, u)| homs.hom(a, a).reduce_vec(u)).collect();
        let cat = LinearCategory { ring: ring.clone(), objects, homs, mult: table, units };
        cat.validate()?;
        Ok(cat)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn homs(&self) -> &Quiver {
        &self.homs
    }

    pub fn unit(&self, a: usize) -> &[Elem] {
        &self.units[a]
    }

    pub fn multiplication(&self, a: usize, b: usize, c: usize) -> &Morphism {
        &self.mult[&(a, b, c)]
    }

    /// Product of generator `i` of `C(a,b)` with generator `j` of `C(b,c)`.
    pub fn product_of_gens(&self, a: usize, b: usize, c: usize, i: usize, j: usize) -> Vec<Elem> {
        let (_, layout) = self.homs.hom(a, b).tensor_layout(self.homs.hom(b, c));
        let n = self.homs.hom(a, c).gens();
        match layout[i * self.homs.hom(b, c).gens() + j] {
            Some(col) => self.mult[&(a, b, c)].matrix().column(col),
            None => vec![self.ring.zero(); n],
        }
    }

    /// Bilinear product of coordinate vectors.
    pub fn product(&self, a: usize, b: usize, c: usize, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        let mut out = vec![r.zero(); self.homs.hom(a, c).gens()];
        for (i, x) in u.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in v.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                let xy = r.mul(x, y);
                for (k, z) in self.product_of_gens(a, b, c, i, j).iter().enumerate() {
                    out[k] = r.add(&out[k], &r.mul(&xy, z));
                }
            }
        }
        self.homs.hom(a, c).reduce_vec(&out)
    }

    fn basis_vec(&self, a: usize, b: usize, i: usize) -> Vec<Elem> {
        let mut v = vec![self.ring.zero(); self.homs.hom(a, b).gens()];
        v[i] = self.ring.one();
        v
    }

    /// Associativity and unitality on generators.
    pub fn validate(&self) -> Result<()> {
        let s = self.objects.len();
        let h = &self.homs;
        for a in 0..s {
            for b in 0..s {
                for i in 0..h.hom(a, b).gens() {
                    let x = self.basis_vec(a, b, i);
                    if self.product(a, a, b, &self.units[a], &x) != x || self.product(a, b, b, &x, &self.units[b]) != x {
                        return Err(Error::Invalid(format!(
                            "unit law fails on generator {i} of C({},{})",
                            self.objects[a], self.objects[b]
                        )));
                    }
                    for c in 0..s {
                        for j in 0..h.hom(b, c).gens() {
                            let y = self.basis_vec(b, c, j);
                            let xy = self.product(a, b, c, &x, &y);
                            for d in 0..s {
                                for k in 0..h.hom(c, d).gens() {
                                    let z = self.basis_vec(c, d, k);
                                    let l = self.product(a, c, d, &xy, &z);
                                    let r = self.product(a, b, d, &x, &self.product(b, c, d, &y, &z));
                                    if l != r {
                                        return Err(Error::Invalid(format!(
                                            "associativity fails on objects {},{},{},{}",
                                            self.objects[a], self.objects[b], self.objects[c], self.objects[d]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The one-object category `R` itself.
    pub fn unit_category(ring: &Ring) -> Self {
        let objs = vec!["*".to_string()];
        let homs = Quiver::unit(ring, &objs);
        Self::new(ring, objs, homs, |_, _, _| Ok(Matrix::identity(ring, 1)), vec![vec![ring.one()]]).unwrap()
    }

    /// The one-object category `R[x]/(f)` for monic `f` of degree `d ≥ 1`,
    /// given by its lower coefficients `f_0, ..., f_{d−1}`; basis `1, x, ...,
    /// x^{d−1}`.
    pub fn polynomial_algebra(ring: &Ring, lower: &[Elem]) -> Result<Self> {
        let d = lower.len();
        if d == 0 {
            return Err(Error::Invalid("polynomial degree must be at least 1".into()));
        }
        // reduce x^k for k < 2d - 1
        let mut powers: Vec<Vec<Elem>> = Vec::new();
        for k in 0..2 * d - 1 {
            if k < d {
                let mut v = vec![ring.zero(); d];
                v[k] = ring.one();
                powers.push(v);
            } else {
                let prev = &powers[k - 1];
                let mut v = vec![ring.zero(); d];
                for i in 1..d {
                    v[i] = prev[i - 1].clone();
                }
                let top = &prev[d - 1];
                for i in 0..d {
                    v[i] = ring.sub(&v[i], &ring.mul(top, &lower[i]));
                }
                powers.push(v);
            }
        }
        let objs = vec!["*".to_string()];
        let mut homs = Quiver::zero(ring, &objs);
        homs.set_hom(0, 0, Module::free(ring, d));
        let mut unit = vec![ring.zero(); d];
        unit[0] = ring.one();
        Self::new(
            ring,
            objs,
            homs,
            |_, _, _| {
                let mut m = Matrix::zeros(ring, d, d * d);
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            m[(k, i * d + j)] = powers[i + j][k].clone();
                        }
                    }
                }
                Ok(m)
            },
            vec![unit],
        )
    }

    /// The linearisation of a finite poset: `C(a,b) = R` if `a ≤ b`, else 0.
    pub fn poset(ring: &Ring, names: Vec<String>, leq: &dyn Fn(usize, usize) -> bool) -> Result<Self> {
        let s = names.len();
        let mut homs = Quiver::zero(ring, &names);
        for a in 0..s {
            for b in 0..s {
                if leq(a, b) {
                    homs.set_hom(a, b, Module::free(ring, 1));
                }
            }
        }
        let h2 = homs.clone();
        Self::new(
            ring,
            names,
            homs,
            |a, b, c| {
                let cols = h2.hom(a, b).gens() * h2.hom(b, c).gens();
                let rows = h2.hom(a, c).gens();
                let mut m = Matrix::zeros(ring, rows, cols);
                if rows == 1 && cols == 1 {
                    m[(0, 0)] = ring.one();
                }
                Ok(m)
            },
            (0..s).map(|_| vec![ring.one()]).collect(),
        )
    }

    /// Change of coefficients along a ring map given on elements.
    pub fn base_change(&self, target: &Ring, f: &dyn Fn(&Elem) -> Elem, module: &dyn Fn(&Module) -> Module) -> Result<Self> {
        let mut homs = Quiver::zero(target, &self.objects);
        for (a, b) in self.homs.pairs() {
            homs.set_hom(a, b, module(self.homs.hom(a, b)));
        }
        let me = self.clone();
        let h2 = homs.clone();
        Self::new(
            target,
            self.objects.clone(),
            homs,
            |a, b, c| {
                let (_, old_layout) = me.homs.hom(a, b).tensor_layout(me.homs.hom(b, c));
                let (dom, new_layout) = h2.hom(a, b).tensor_layout(h2.hom(b, c));
                let old = me.mult[&(a, b, c)].matrix();
                let mut m = Matrix::zeros(target, h2.hom(a, c).gens(), dom.gens());
                for (pos, col) in new_layout.iter().enumerate() {
                    let (Some(col), Some(oc)) = (col, old_layout[pos]) else { continue };
                    for r in 0..old.rows() {
                        m[(r, *col)] = f(&old[(r, oc)]);
                    }
                }
                Ok(m)
            },
            self.units.iter().map(|u| u.iter().map(f).collect()).collect(),
        )
    }
}

/// Split a flat key `[g_1, v_1, ..., g_n]` into generators and the full
/// vertex path `[a, v_1, ..., v_{n−1}, b]`.
fn split_key(key: &[usize], a: usize, b: usize) -> (Vec<usize>, Vec<usize>) {
    let gens = key.iter().step_by(2).copied().collect();
    let mut path = vec![a];
    path.extend(key.iter().skip(1).step_by(2).copied());
    path.push(b);
    (gens, path)
}

fn join_key(gens: &[usize], path: &[usize]) -> Vec<usize> {
    let mut key = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        if i > 0 {
            key.push(path[i]);
        }
        key.push(*g);
    }
    key
}

/// Assemble quiver morphisms from per-column sparse images.
fn assemble(
    ring: &Ring,
    src: &Quiver,
    tgt: &Quiver,
    tgt_index: &dyn Fn(usize, usize, &[usize]) -> Option<usize>,
    image: &dyn Fn(usize, usize, usize) -> Vec<(Vec<usize>, Elem)>,
) -> Result<QuiverMorphism> {
    let mut mats = Vec::new();
    for (a, b) in src.pairs() {
        let mut m = Matrix::zeros(ring, tgt.hom(a, b).gens(), src.hom(a, b).gens());
        for col in 0..src.hom(a, b).gens() {
            for (key, c) in image(a, b, col) {
                if let Some(row) = tgt_index(a, b, &key) {
                    m[(row, col)] = ring.add(&m[(row, col)], &c);
                }
            }
        }
        mats.push(m);
    }
    QuiverMorphism::from_matrices(src.clone(), tgt.clone(), mats)
}

/// The templicial nerve: `N_n = C^{⊗_S n}`.
pub fn nerve(c: &LinearCategory, n_max: usize) -> Result<TemplicialModule> {
    if n_max == 0 {
        return Err(Error::Truncation("truncation level must be at least 1".into()));
    }
    let ring = c.ring();
    let objs = c.objects().to_vec();
    let s = objs.len();
    let hq = c.homs();
    // bases[n][(a,b)]
    let mut bases: Vec<Vec<TensorBasis>> = Vec::new();
    let mut levels: Vec<Quiver> = Vec::new();
    for n in 0..=n_max {
        let qs: Vec<&Quiver> = vec![hq; n];
        let bs: Vec<TensorBasis> = hq.pairs().map(|(a, b)| TensorBasis::build(ring, &qs, a, b)).collect();
        let mut q = Quiver::zero(ring, &objs);
        for (k, (a, b)) in hq.pairs().enumerate() {
            q.set_hom(a, b, bs[k].module.clone());
        }
        bases.push(bs);
        levels.push(q);
    }
    let idx = |n: usize, a: usize, b: usize, key: &[usize]| bases[n][a * s + b].index.get(key).copied();

    let mut faces = BTreeMap::new();
    for (n, j) in required_keys(StructureKind::Face, n_max) {
        let m = assemble(ring, &levels[n], &levels[n - 1], &|a, b, k| idx(n - 1, a, b, k), &|a, b, col| {
            let (gens, path) = split_key(&bases[n][a * s + b].keys[col], a, b);
            let (u, v, w) = (path[j - 1], path[j], path[j + 1]);
            let prod = c.product_of_gens(u, v, w, gens[j - 1], gens[j]);
            let mut out = Vec::new();
            for (r, coef) in prod.into_iter().enumerate() {
                if ring.is_zero(&coef) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.splice(j - 1..=j, [r]);
                let mut p2 = path.clone();
                p2.remove(j);
                out.push((join_key(&g2, &p2), coef));
            }
            out
        })?;
        faces.insert((n, j), m);
    }
    let mut degens = BTreeMap::new();
    for (n, i) in required_keys(StructureKind::Degeneracy, n_max) {
        let m = assemble(ring, &levels[n], &levels[n + 1], &|a, b, k| idx(n + 1, a, b, k), &|a, b, col| {
            let (gens, path) = split_key(&bases[n][a * s + b].keys[col], a, b);
            let v = path[i];
            let mut out = Vec::new();
            for (r, coef) in c.unit(v).iter().enumerate() {
                if ring.is_zero(coef) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.insert(i, r);
                let mut p2 = path.clone();
                p2.insert(i, v);
                out.push((join_key(&g2, &p2), coef.clone()));
            }
            out
        })?;
        degens.insert((n, i), m);
    }
    let mut comults = BTreeMap::new();
    for (k, l) in required_keys(StructureKind::Comultiplication, n_max) {
        let tgt = levels[k].tensor(&levels[l])?;
        let pair_bases: Vec<TensorBasis> =
            hq.pairs().map(|(a, b)| TensorBasis::build(ring, &[&levels[k], &levels[l]], a, b)).collect();
        let m = assemble(
            ring,
            &levels[k + l],
            &tgt,
            &|a, b, key| pair_bases[a * s + b].index.get(key).copied(),
            &|a, b, col| {
                let (gens, path) = split_key(&bases[k + l][a * s + b].keys[col], a, b);
                let mid = path[k];
                let front = idx(k, a, mid, &join_key(&gens[..k], &path[..=k]));
                let back = idx(l, mid, b, &join_key(&gens[k..], &path[k..]));
                match (front, back) {
                    (Some(f), Some(g)) => vec![(vec![f, mid, g], ring.one())],
                    _ => Vec::new(),
                }
            },
        )?;
        comults.insert((k, l), m);
    }
    TemplicialModule::new(ring, objs, levels.split_off(1), faces, degens, comults)
}

// ----------------------------------------------------------------------
// simplicial sets

/// A truncated simplicial set whose simplices are determined by their
/// vertices: an ordered simplicial complex. Level `n` consists of the
/// non-decreasing vertex tuples of length `n + 1` whose support is a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSetTrunc {
    vertices: Vec<String>,
    max_level: usize,
    faces: BTreeSet<Vec<usize>>,
    levels: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// Recipes for [`sset_build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SSetKind {
    Simplex(usize),
    Boundary(usize),
    Horn(usize, usize),
    /// Elements and pairs `(x, y)` meaning `x ≤ y`; the order is the
    /// reflexive-transitive closure.
    PosetNerve { elements: Vec<String>, relation: Vec<(usize, usize)> },
    /// Identify the face `a_face` of `a` with the face `b_face` of `b`
    /// (vertex indices, increasing).
    Glue { a: Box<SSetKind>, b: Box<SSetKind>, a_face: Vec<usize>, b_face: Vec<usize> },
    /// Named vertices and the generating faces.
    Generated { vertices: Vec<String>, maximal: Vec<Vec<usize>> },
}

fn subsets_of(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1u64 << (n + 1))).map(move |mask| (0..=n).filter(|i| mask >> i & 1 == 1).collect())
}

impl SimplicialSetTrunc {
    /// From named vertices and generating faces (increasing vertex lists).
    pub fn generated(vertices: Vec<String>, maximal: &[Vec<usize>], max_level: usize) -> Result<Self> {
        let mut faces = BTreeSet::new();
        for v in 0..vertices.len() {
            faces.insert(vec![v]);
        }
        for m in maximal {
            if m.is_empty() || m.windows(2).any(|w| w[0] >= w[1]) || m.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Invalid(format!("face {m:?} must be a strictly increasing list of vertices")));
            }
            for sub in subsets_of(m.len() - 1) {
                faces.insert(sub.iter().map(|&i| m[i]).collect());
            }
        }
        Ok(Self::from_faces(vertices, faces, max_level))
    }

    fn from_faces(vertices: Vec<String>, faces: BTreeSet<Vec<usize>>, max_level: usize) -> Self {
        let mut levels = Vec::new();
        let mut index = Vec::new();
        for n in 0..=max_level {
            let mut lvl = Vec::new();
            for f in &faces {
                if f.len() > n + 1 {
                    continue;
                }
                // surjections [n] -> [f.len() - 1]
                for cut in fint_maps(n, f.len() - 1).into_iter().filter(FintMap::is_surjective) {
                    lvl.push(cut.values().iter().map(|&i| f[i]).collect::<Vec<usize>>());
                }
            }
            lvl.sort();
            let idx = lvl.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            levels.push(lvl);
            index.push(idx);
        }
        SimplicialSetTrunc { vertices, max_level, faces, levels, index }
    }

    pub fn simplex(n: usize, max_level: usize) -> Self {
        let faces = subsets_of(n).collect();
        Self::from_faces((0..=n).map(|i| i.to_string()).collect(), faces, max_level)
    }

    pub fn boundary(n: usize, max_level: usize) -> Self {
        let faces = subsets_of(n).filter(|s| s.len() <= n).collect();
        Self::from_faces((0..=n).map(|i| i.to_string()).collect(), faces, max_level)
    }

    /// `Λ^n_j`: faces missing some vertex other than `j`.
    pub fn horn(n: usize, j: usize, max_level: usize) -> Result<Self> {
        if j > n {
            return Err(Error::Range(format!("horn index {j} exceeds {n}")));
        }
        let faces = subsets_of(n).filter(|s| (0..=n).any(|v| v != j && !s.contains(&v))).collect();
        Ok(Self::from_faces((0..=n).map(|i| i.to_string()).collect(), faces, max_level))
    }

    /// The nerve of a finite poset; vertices are placed in a linear
    /// extension of the order, ties broken by the given order.
    pub fn poset_nerve(elements: Vec<String>, relation: &[(usize, usize)], max_level: usize) -> Result<Self> {
        let leq = poset_closure(elements.len(), relation)?;
        let order = linear_extension(&leq);
        let pos: Vec<usize> = {
            let mut p = vec![0; order.len()];
            for (i, &e) in order.iter().enumerate() {
                p[e] = i;
            }
            p
        };
        let names: Vec<String> = order.iter().map(|&e| elements[e].clone()).collect();
        let mut faces = BTreeSet::new();
        // chains of length up to max_level + 1
        let mut frontier: Vec<Vec<usize>> = (0..order.len()).map(|i| vec![i]).collect();
        while let Some(ch) = frontier.pop() {
            if ch.len() < max_level + 1 {
                let last = *ch.last().unwrap();
                for nxt in last + 1..order.len() {
                    if leq[order[last]][order[nxt]] {
                        let mut c2 = ch.clone();
                        c2.push(nxt);
                        frontier.push(c2);
                    }
                }
            }
            faces.insert(ch);
        }
        let _ = pos;
        Ok(Self::from_faces(names, faces, max_level))
    }

    /// Rename the vertices (same order).
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.vertices.len() {
            return Err(Error::Invalid("wrong number of vertex names".into()));
        }
        let mut s = self.clone();
        s.vertices = names;
        Ok(s)
    }

    /// Glue `b` to `self` by identifying the face `b_face` of `b` with the
    /// face `a_face` of `self`. The vertex orders must be compatible.
    pub fn glue(&self, b: &SimplicialSetTrunc, a_face: &[usize], b_face: &[usize]) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("invalid gluing data: {m}"));
        if a_face.len() != b_face.len() || a_face.is_empty() {
            return Err(bad("faces must have the same positive size"));
        }
        if !self.faces.contains(a_face) || !b.faces.contains(b_face) {
            return Err(bad("faces are not simplices of their complexes"));
        }
        // merged vertex list: self's vertices, then b's non-identified ones
        let mut names = self.vertices.clone();
        let mut map_b = vec![usize::MAX; b.vertices.len()];
        for (x, y) in a_face.iter().zip(b_face) {
            map_b[*y] = *x;
        }
        for (v, slot) in map_b.iter_mut().enumerate() {
            if *slot == usize::MAX {
                let mut name = b.vertices[v].clone();
                while names.contains(&name) {
                    name.push('\'');
                }
                *slot = names.len();
                names.push(name);
            }
        }
        // order constraints from both complexes
        let n = names.len();
        let mut before = vec![vec![false; n]; n];
        for f in &self.faces {
            for w in f.windows(2) {
                before[w[0]][w[1]] = true;
            }
        }
        for f in &b.faces {
            for w in f.windows(2) {
                before[map_b[w[0]]][map_b[w[1]]] = true;
            }
        }
        let leq = transitive_closure(n, &before);
        if (0..n).any(|i| (0..n).any(|j| i != j && leq[i][j] && leq[j][i])) {
            return Err(bad("vertex orders are incompatible"));
        }
        let order = linear_extension(&leq);
        let mut pos = vec![0; n];
        for (i, &e) in order.iter().enumerate() {
            pos[e] = i;
        }
        let mut faces = BTreeSet::new();
        for f in &self.faces {
            let mut g: Vec<usize> = f.iter().map(|&v| pos[v]).collect();
            g.sort();
            faces.insert(g);
        }
        for f in &b.faces {
            let mut g: Vec<usize> = f.iter().map(|&v| pos[map_b[v]]).collect();
            g.sort();
            faces.insert(g);
        }
        let names = order.iter().map(|&e| names[e].clone()).collect();
        Ok(Self::from_faces(names, faces, self.max_level.min(b.max_level)))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Simplices of level `n` as vertex tuples, sorted.
    pub fn simplices(&self, n: usize) -> &[Vec<usize>] {
        &self.levels[n]
    }

    pub fn count(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    /// Non-degenerate simplices of level `n`.
    pub fn nondegenerate(&self, n: usize) -> Vec<&Vec<usize>> {
        self.levels[n].iter().filter(|t| t.windows(2).all(|w| w[0] < w[1])).collect()
    }

    pub fn index_of(&self, n: usize, t: &[usize]) -> Option<usize> {
        self.index[n].get(t).copied()
    }

    /// `d_j` on the `x`-th simplex of level `n`.
    pub fn face(&self, n: usize, x: usize, j: usize) -> usize {
        let mut t = self.levels[n][x].clone();
        t.remove(j);
        self.index[n - 1][&t]
    }

    /// `s_i` on the `x`-th simplex of level `n`.
    pub fn degeneracy(&self, n: usize, x: usize, i: usize) -> usize {
        let mut t = self.levels[n][x].clone();
        t.insert(i, t[i]);
        self.index[n + 1][&t]
    }

    /// Check the full simplicial identities on the index tables.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Invalid(m));
        for n in 0..=self.max_level {
            for x in 0..self.count(n) {
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            if self.face(n - 1, self.face(n, x, j), i) != self.face(n - 1, self.face(n, x, i), j - 1) {
                                return fail(format!("d{i} d{j} fails at level {n}"));
                            }
                        }
                    }
                }
                if n + 2 <= self.max_level {
                    for j in 0..=n {
                        for i in 0..=j {
                            if self.degeneracy(n + 1, self.degeneracy(n, x, j), i)
                                != self.degeneracy(n + 1, self.degeneracy(n, x, i), j + 1)
                            {
                                return fail(format!("s{i} s{j} fails at level {n}"));
                            }
                        }
                    }
                }
                if n < self.max_level {
                    for j in 0..=n {
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, self.degeneracy(n, x, j), i);
                            let rhs = if i < j {
                                self.degeneracy(n - 1, self.face(n, x, i), j - 1)
                            } else if i == j || i == j + 1 {
                                x
                            } else {
                                self.degeneracy(n - 1, self.face(n, x, i - 1), j)
                            };
                            if lhs != rhs {
                                return fail(format!("d{i} s{j} fails at level {n}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn poset_closure(n: usize, relation: &[(usize, usize)]) -> Result<Vec<Vec<bool>>> {
    let mut m = vec![vec![false; n]; n];
    for &(x, y) in relation {
        if x >= n || y >= n {
            return Err(Error::Range(format!("relation ({x},{y}) out of range")));
        }
        m[x][y] = true;
    }
    let leq = transitive_closure(n, &m);
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(Error::Invalid("relation is not antisymmetric".into()));
            }
        }
    }
    Ok(leq)
}

fn transitive_closure(n: usize, m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let mut c = m.to_vec();
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if c[i][k] {
                for j in 0..n {
                    if c[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}

/// Kahn's algorithm, smallest available index first.
fn linear_extension(leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n).find(|&v| !done[v] && (0..n).all(|u| u == v || done[u] || !leq[u][v])).unwrap();
        done[next] = true;
        out.push(next);
    }
    out
}

/// Build a simplicial set from a recipe.
pub fn sset_build(kind: &SSetKind, max_level: usize) -> Result<SimplicialSetTrunc> {
    let s = match kind {
        SSetKind::Simplex(n) => SimplicialSetTrunc::simplex(*n, max_level),
        SSetKind::Boundary(n) => SimplicialSetTrunc::boundary(*n, max_level),
        SSetKind::Horn(n, j) => SimplicialSetTrunc::horn(*n, *j, max_level)?,
        SSetKind::PosetNerve { elements, relation } => {
            SimplicialSetTrunc::poset_nerve(elements.clone(), relation, max_level)?
        }
        SSetKind::Glue { a, b, a_face, b_face } => {
            sset_build(a, max_level)?.glue(&sset_build(b, max_level)?, a_face, b_face)?
        }
        SSetKind::Generated { vertices, maximal } => SimplicialSetTrunc::generated(vertices.clone(), maximal, max_level)?,
    };
    s.validate()?;
    Ok(s)
}

// ----------------------------------------------------------------------
// free templicial modules

/// Extra comultiplication terms on a non-degenerate simplex `y` split at
/// `c`: `(front tuple, back tuple, coefficient)`.
pub type ComultTerms<'a> = &'a dyn Fn(&[usize], usize) -> Vec<(Vec<usize>, Vec<usize>, Elem)>;

/// `F̃(K)`: free on simplices, with `μ_{k,l}(x) = front ⊗ back`.
pub fn free_templicial(k: &SimplicialSetTrunc, ring: &Ring, n_max: usize) -> Result<TemplicialModule> {
    free_templicial_with(k, ring, n_max, &|_, _| Vec::new())
}

/// Free levels and faces as in [`free_templicial`], with extra terms added to
/// the comultiplication of non-degenerate simplices and extended to
/// degenerate ones by `μ(σ^* y) = (X(σ_1) ⊗ X(σ_2)) μ(y)`.
pub fn free_templicial_with(
    k: &SimplicialSetTrunc,
    ring: &Ring,
    n_max: usize,
    extra: ComultTerms<'_>,
) -> Result<TemplicialModule> {
    if n_max == 0 || n_max > k.max_level() {
        return Err(Error::Truncation(format!(
            "truncation {n_max} must lie between 1 and the simplicial set's level {}",
            k.max_level()
        )));
    }
    let verts = k.vertices().to_vec();
    let s = verts.len();
    // per level and (a,b): sorted tuples and their positions
    let mut tuples: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    let mut pos: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    let mut levels = Vec::new();
    for n in 0..=n_max {
        let mut per = vec![Vec::new(); s * s];
        let mut p = HashMap::new();
        for t in k.simplices(n) {
            let slot = &mut per[t[0] * s + t[n]];
            p.insert(t.clone(), slot.len());
            slot.push(t.clone());
        }
        let mut q = Quiver::zero(ring, &verts);
        for a in 0..s {
            for b in 0..s {
                q.set_hom(a, b, Module::free(ring, per[a * s + b].len()));
            }
        }
        tuples.push(per);
        pos.push(p);
        levels.push(q);
    }
    let at = |n: usize, t: &[usize]| pos[n].get(t).copied();

    let mut faces = BTreeMap::new();
    for (n, j) in required_keys(StructureKind::Face, n_max) {
        let m = assemble(ring, &levels[n], &levels[n - 1], &|_, _, key| at(n - 1, key), &|a, b, col| {
            let mut t = tuples[n][a * s + b][col].clone();
            t.remove(j);
            vec![(t, ring.one())]
        })?;
        faces.insert((n, j), m);
    }
    let mut degens = BTreeMap::new();
    for (n, i) in required_keys(StructureKind::Degeneracy, n_max) {
        let m = assemble(ring, &levels[n], &levels[n + 1], &|_, _, key| at(n + 1, key), &|a, b, col| {
            let mut t = if n == 0 { vec![a] } else { tuples[n][a * s + b][col].clone() };
            t.insert(i, t[i]);
            vec![(t, ring.one())]
        })?;
        degens.insert((n, i), m);
    }
    let mut comults = BTreeMap::new();
    for (kk, l) in required_keys(StructureKind::Comultiplication, n_max) {
        let n = kk + l;
        let tgt = levels[kk].tensor(&levels[l])?;
        let pair: Vec<TensorBasis> =
            (0..s * s).map(|ab| TensorBasis::build(ring, &[&levels[kk], &levels[l]], ab / s, ab % s)).collect();
        let encode = |front: &[usize], back: &[usize]| -> Option<Vec<usize>> {
            Some(vec![at(kk, front)?, front[kk], at(l, back)?])
        };
        let m = assemble(
            ring,
            &levels[n],
            &tgt,
            &|a, b, key| pair[a * s + b].index.get(key).copied(),
            &|a, b, col| {
                let x = &tuples[n][a * s + b][col];
                let mut out = Vec::new();
                if let Some(key) = encode(&x[..=kk], &x[kk..]) {
                    out.push((key, ring.one()));
                }
                // x = y σ with y non-degenerate
                let mut y = x.clone();
                y.dedup();
                let sigma: Vec<usize> = x.iter().map(|v| y.iter().position(|w| w == v).unwrap()).collect();
                let c = sigma[kk];
                let m = y.len() - 1;
                if c > 0 && c < m {
                    for (front, back, coef) in extra(&y, c) {
                        let f2: Vec<usize> = (0..=kk).map(|i| front[sigma[i]]).collect();
                        let b2: Vec<usize> = (kk..=n).map(|i| back[sigma[i] - c]).collect();
                        if let Some(key) = encode(&f2, &b2) {
                            out.push((key, coef));
                        }
                    }
                }
                out
            },
        )?;
        comults.insert((kk, l), m);
    }
    TemplicialModule::new(ring, verts, levels.split_off(1), faces, degens, comults)
}

// ----------------------------------------------------------------------
// built-in examples

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 3] = ["s0_times_2", "paper_P", "paper_P_deformed"];

/// Default truncation for built-in examples.
pub const BUILTIN_LEVEL: usize = 4;

/// A built-in example at truncation `n_max`.
pub fn builtin(name: &str, n_max: usize) -> Result<TemplicialModule> {
    match name {
        "s0_times_2" => s0_times_2(n_max),
        "paper_P" => free_p(&Ring::prime_field(2)?, n_max),
        "paper_P_deformed" => free_p_deformed(2, n_max),
        _ => Err(Error::Invalid(format!("unknown example '{name}'; known: {}", BUILTINS.join(", ")))),
    }
}

/// One vertex, `X_n = Z`, `s_0: X_0 → X_1` and every `μ_{k,l}` multiply by
/// 2, all other maps the identity.
pub fn s0_times_2(n_max: usize) -> Result<TemplicialModule> {
    let ring = Ring::integers();
    let verts = vec!["*".to_string()];
    let mut q = Quiver::zero(&ring, &verts);
    q.set_hom(0, 0, Module::free(&ring, 1));
    let unit = Quiver::unit(&ring, &verts);
    let scalar = |src: &Quiver, tgt: &Quiver, c: i64| {
        QuiverMorphism::from_matrices(src.clone(), tgt.clone(), vec![Matrix::diagonal(&ring, &[ring.from_i64(c)])])
    };
    let lvl = |n: usize| if n == 0 { &unit } else { &q };
    let qq = q.tensor(&q)?;
    let faces = required_keys(StructureKind::Face, n_max)
        .into_iter()
        .map(|k| Ok((k, scalar(&q, &q, 1)?)))
        .collect::<Result<_>>()?;
    let degens = required_keys(StructureKind::Degeneracy, n_max)
        .into_iter()
        .map(|(n, i)| Ok(((n, i), scalar(lvl(n), &q, if n == 0 { 2 } else { 1 })?)))
        .collect::<Result<_>>()?;
    let comults = required_keys(StructureKind::Comultiplication, n_max)
        .into_iter()
        .map(|k| Ok((k, scalar(&q, &qq, 2)?)))
        .collect::<Result<_>>()?;
    TemplicialModule::new(&ring, verts, vec![q.clone(); n_max], faces, degens, comults)
}

/// The shape `Δ² ⊔_{Δ¹} ∂Δ²` on vertices `a, b1, b2, c`, glued along the
/// edge `(a, c)`.
pub fn shape_p(n_max: usize) -> Result<SimplicialSetTrunc> {
    let names = |v: [&str; 3]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let top = SimplicialSetTrunc::simplex(2, n_max).renamed(names(["a", "b1", "c"]))?;
    let bdry = SimplicialSetTrunc::boundary(2, n_max).renamed(names(["a", "b2", "c"]))?;
    let p = top.glue(&bdry, &[0, 2], &[0, 2])?;
    p.validate()?;
    Ok(p)
}

/// The free templicial module on [`shape_p`].
pub fn free_p(ring: &Ring, n_max: usize) -> Result<TemplicialModule> {
    free_templicial(&shape_p(n_max)?, ring, n_max)
}

/// The deformation of [`free_p`] over `F_p[e]/(e²)` with
/// `μ_{1,1}(α) = f1 ⊗ g1 + e · f2 ⊗ g2`.
pub fn free_p_deformed(p: u64, n_max: usize) -> Result<TemplicialModule> {
    let ring = Ring::dual_chain(p, 2)?;
    let shape = shape_p(n_max)?;
    let v = |n: &str| shape.vertices().iter().position(|x| x == n).unwrap();
    let (a, b1, b2, c) = (v("a"), v("b1"), v("b2"), v("c"));
    let alpha_top = c;
    let e = ring.uniformizer().expect("dual chain rings have a uniformizer");
    let extra = move |y: &[usize], cut: usize| {
        if y == [a, b1, alpha_top] && cut == 1 {
            vec![(vec![a, b2], vec![b2, c], e.clone())]
        } else {
            Vec::new()
        }
    };
    free_templicial_with(&shape, &ring, n_max, &extra)
}

// ----------------------------------------------------------------------
// generators

/// Seeded generator profiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    /// The nerve of `F_p[x]/(f)` for a random monic `f` of the given degree.
    NerveOfRandomAlgebra { p: u64, rank: usize },
    /// The free templicial module on the nerve of a random poset.
    FreeOnRandomQuasicat { ring: Ring, elements: usize },
    /// A levelwise invertible change of basis of the given instance.
    RandomPerturbation(Box<TemplicialModule>),
}

/// Deterministic generation for a seed and profile.
pub fn generate(seed: u64, profile: &Profile, n_max: usize) -> Result<TemplicialModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        Profile::NerveOfRandomAlgebra { p, rank } => {
            let ring = Ring::prime_field(*p)?;
            let lower: Vec<Elem> = (0..*rank).map(|_| ring.from_i64(rng.gen_range(0..*p as i64))).collect();
            nerve(&LinearCategory::polynomial_algebra(&ring, &lower)?, n_max)
        }
        Profile::FreeOnRandomQuasicat { ring, elements } => {
            let k = random_poset_nerve(&mut rng, *elements, n_max)?;
            free_templicial(&k, ring, n_max)
        }
        Profile::RandomPerturbation(x) => perturb(&mut rng, x),
    }
}

/// The nerve of a random poset on `n` elements.
pub fn random_poset_nerve(rng: &mut impl rand::Rng, n: usize, n_max: usize) -> Result<SimplicialSetTrunc> {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                rel.push((i, j));
            }
        }
    }
    SimplicialSetTrunc::poset_nerve(names, &rel, n_max)
}

/// A random invertible matrix of size `n`, as `(P, P^{-1})`.
fn random_invertible(rng: &mut impl rand::Rng, ring: &Ring, n: usize) -> (Matrix, Matrix) {
    let mut p = Matrix::identity(ring, n);
    let mut q = Matrix::identity(ring, n);
    if n < 2 {
        return (p, q);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = ring.from_i64(rng.gen_range(1..4));
        // row_i += c row_j on P; inverse applies the opposite column operation
        p.add_row_multiple(ring, i, j, &c);
        q.add_col_multiple(ring, j, i, &ring.neg(&c));
    }
    (p, q)
}

/// Conjugate every structure map by random invertible changes of basis on
/// the free hom components of each level.
pub fn perturb(rng: &mut impl rand::Rng, x: &TemplicialModule) -> Result<TemplicialModule> {
    let ring = x.ring().clone();
    let s = x.vertex_count();
    // change[n][(a,b)] = (P, P^{-1}); identity on level 0 and non-free homs
    let mut change: Vec<Vec<(Matrix, Matrix)>> = Vec::new();
    for n in 0..=x.max_level() {
        let mut per = Vec::new();
        for (a, b) in x.level(n).pairs() {
            let m = x.level(n).hom(a, b);
            if n > 0 && m.factors().iter().all(Factor::is_free) {
                per.push(random_invertible(rng, &ring, m.gens()));
            } else {
                per.push((Matrix::identity(&ring, m.gens()), Matrix::identity(&ring, m.gens())));
            }
        }
        change.push(per);
    }
    let tensor_change = |k: usize, l: usize, a: usize, c: usize, inv: bool| -> Matrix {
        let blocks: Vec<Matrix> = (0..s)
            .map(|b| {
                let (p1, q1) = &change[k][a * s + b];
                let (p2, q2) = &change[l][b * s + c];
                let (m1, m2) = if inv { (q1, q2) } else { (p1, p2) };
                let full = m1.kronecker(&ring, m2);
                let (_, layout) = x.level(k).hom(a, b).tensor_layout(x.level(l).hom(b, c));
                let keep: Vec<usize> = layout.iter().enumerate().filter(|(_, v)| v.is_some()).map(|(i, _)| i).collect();
                full.select_rows(&keep).select_cols(&keep)
            })
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::block_diagonal(&ring, &refs)
    };
    let conj = |m: &QuiverMorphism, src: usize, tgt: Option<usize>, tgt_pair: Option<(usize, usize)>| {
        let mats = m
            .source()
            .pairs()
            .map(|(a, b)| {
                let inner = m.component(a, b).matrix();
                let q_src = &change[src][a * s + b].1;
                let p_tgt = match (tgt, tgt_pair) {
                    (Some(t), _) => change[t][a * s + b].0.clone(),
                    (None, Some((k, l))) => tensor_change(k, l, a, b, false),
                    _ => unreachable!(),
                };
                p_tgt.mul(&ring, &inner.mul(&ring, q_src))
            })
            .collect();
        QuiverMorphism::from_matrices(m.source().clone(), m.target().clone(), mats)
    };
    let mut y = x.clone();
    for (kind, key, m) in x.structure_maps() {
        let new = match kind {
            StructureKind::Face => conj(m, key.0, Some(key.0 - 1), None)?,
            StructureKind::Degeneracy => conj(m, key.0, Some(key.0 + 1), None)?,
            StructureKind::Comultiplication => conj(m, key.0 + key.1, None, Some(key))?,
        };
        y = y.with_structure_map(kind, key, new)?;
    }
    Ok(y)
}
