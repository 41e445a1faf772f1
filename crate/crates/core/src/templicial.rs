//! Truncated templicial modules and necklicial modules.
//!
//! A templicial module stores levels `X_1, ..., X_N` (with `X_0 = I_S`
//! implicit), inner faces, degeneracies and comultiplications. Evaluating on
//! a necklace `T` gives `X_T = X_{t_1} ⊗_S X_{t_2 − t_1} ⊗_S ...`; a necklace
//! map acts by iterated comultiplication (inert part) followed by bead-wise
//! faces and degeneracies (active part).
//!
//! Generators of `X_T(a, b)` are addressed by keys `[g_1, v_1, g_2, ...,
//! v_{k−1}, g_k]`: the generator of each bead and the intermediate vertices.
//! They are ordered lexicographically by `(v_1, g_1, v_2, g_2, ..., g_k)`,
//! which agrees with right-nested binary `⊗_S`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::coeff::{Elem, Factor, Matrix, Module, Morphism, Ring};
use crate::error::{Error, Result};
use crate::necklace::{fint_factorize, fint_maps, necklace_maps, necklaces_up_to, FintMap, Generator, Necklace, NecklaceMap};
use crate::quiver::{Quiver, QuiverMorphism};

/// The three kinds of structure map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    /// `d_j: X_n → X_{n−1}`, keyed `(n, j)`.
    Face,
    /// `s_i: X_n → X_{n+1}`, keyed `(n, i)`.
    Degeneracy,
    /// `μ_{k,l}: X_{k+l} → X_k ⊗_S X_l`, keyed `(k, l)`.
    Comultiplication,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Face => "face",
            StructureKind::Degeneracy => "degeneracy",
            StructureKind::Comultiplication => "comultiplication",
        })
    }
}

/// A templicial module truncated at level `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplicialModule {
    ring: Ring,
    vertices: Vec<String>,
    max_level: usize,
    /// `levels[0] = I_S`.
    levels: Vec<Quiver>,
    faces: BTreeMap<(usize, usize), QuiverMorphism>,
    degeneracies: BTreeMap<(usize, usize), QuiverMorphism>,
    comults: BTreeMap<(usize, usize), QuiverMorphism>,
}

/// Keys of all structure maps required at truncation `n_max`.
pub fn required_keys(kind: StructureKind, n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match kind {
        StructureKind::Face => {
            for n in 2..=n_max {
                for j in 1..n {
                    out.push((n, j));
                }
            }
        }
        StructureKind::Degeneracy => {
            for n in 0..n_max {
                for i in 0..=n {
                    out.push((n, i));
                }
            }
        }
        StructureKind::Comultiplication => {
            for k in 1..n_max {
                for l in 1..=n_max - k {
                    out.push((k, l));
                }
            }
        }
    }
    out
}

impl TemplicialModule {
    /// Assemble and shape-check. `levels` holds `X_1, ..., X_N`.
    pub fn new(
        ring: &Ring,
        vertices: Vec<String>,
        levels: Vec<Quiver>,
        faces: BTreeMap<(usize, usize), QuiverMorphism>,
        degeneracies: BTreeMap<(usize, usize), QuiverMorphism>,
        comults: BTreeMap<(usize, usize), QuiverMorphism>,
    ) -> Result<Self> {
        let max_level = levels.len();
        if max_level == 0 {
            return Err(Error::Truncation("a templicial module needs at least level 1".into()));
        }
        let mut all = vec![Quiver::unit(ring, &vertices)];
        for q in levels {
            if q.vertices() != vertices.as_slice() {
                return Err(Error::VertexMismatch);
            }
            if q.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), q.ring().to_string()));
            }
            all.push(q);
        }
        let x = TemplicialModule { ring: ring.clone(), vertices, max_level, levels: all, faces, degeneracies, comults };
        x.check_shapes()?;
        Ok(x)
    }

    fn expected_shape(&self, kind: StructureKind, key: (usize, usize)) -> Result<(Quiver, Quiver)> {
        let (p, q) = key;
        Ok(match kind {
            StructureKind::Face => (self.levels[p].clone(), self.levels[p - 1].clone()),
            StructureKind::Degeneracy => (self.levels[p].clone(), self.levels[p + 1].clone()),
            StructureKind::Comultiplication => (self.levels[p + q].clone(), self.levels[p].tensor(&self.levels[q])?),
        })
    }

    fn check_shapes(&self) -> Result<()> {
        for kind in [StructureKind::Face, StructureKind::Degeneracy, StructureKind::Comultiplication] {
            let required = required_keys(kind, self.max_level);
            let map = self.map_table(kind);
            for key in map.keys() {
                if !required.contains(key) {
                    return Err(Error::Shape(format!("unexpected {kind} map {key:?}")));
                }
            }
            for key in required {
                let Some(m) = map.get(&key) else {
                    return Err(Error::Shape(format!("missing {kind} map {key:?}")));
                };
                let (src, tgt) = self.expected_shape(kind, key)?;
                if m.source() != &src || m.target() != &tgt {
                    return Err(Error::Shape(format!("{kind} map {key:?} has the wrong source or target")));
                }
            }
        }
        Ok(())
    }

    fn map_table(&self, kind: StructureKind) -> &BTreeMap<(usize, usize), QuiverMorphism> {
        match kind {
            StructureKind::Face => &self.faces,
            StructureKind::Degeneracy => &self.degeneracies,
            StructureKind::Comultiplication => &self.comults,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// `X_n`, with `X_0 = I_S`.
    pub fn level(&self, n: usize) -> &Quiver {
        &self.levels[n]
    }

    pub fn face(&self, n: usize, j: usize) -> &QuiverMorphism {
        &self.faces[&(n, j)]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &QuiverMorphism {
        &self.degeneracies[&(n, i)]
    }

    pub fn comultiplication(&self, k: usize, l: usize) -> &QuiverMorphism {
        &self.comults[&(k, l)]
    }

    pub fn structure_map(&self, kind: StructureKind, key: (usize, usize)) -> Option<&QuiverMorphism> {
        self.map_table(kind).get(&key)
    }

    /// All structure maps in a fixed order.
    pub fn structure_maps(&self) -> Vec<(StructureKind, (usize, usize), &QuiverMorphism)> {
        let mut out = Vec::new();
        for kind in [StructureKind::Face, StructureKind::Degeneracy, StructureKind::Comultiplication] {
            for (k, m) in self.map_table(kind) {
                out.push((kind, *k, m));
            }
        }
        out
    }

    /// A copy with one structure map replaced (shape-checked).
    pub fn with_structure_map(&self, kind: StructureKind, key: (usize, usize), m: QuiverMorphism) -> Result<Self> {
        let mut x = self.clone();
        let table = match kind {
            StructureKind::Face => &mut x.faces,
            StructureKind::Degeneracy => &mut x.degeneracies,
            StructureKind::Comultiplication => &mut x.comults,
        };
        if !table.contains_key(&key) {
            return Err(Error::Range(format!("no {kind} map {key:?}")));
        }
        table.insert(key, m);
        x.check_shapes()?;
        Ok(x)
    }

    /// The same data truncated at a lower level.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.max_level {
            return Err(Error::Truncation(format!("cannot truncate level {} at {n}", self.max_level)));
        }
        let keep = |kind: StructureKind, t: &BTreeMap<(usize, usize), QuiverMorphism>| {
            let req = required_keys(kind, n);
            t.iter().filter(|(k, _)| req.contains(k)).map(|(k, v)| (*k, v.clone())).collect()
        };
        Ok(TemplicialModule {
            ring: self.ring.clone(),
            vertices: self.vertices.clone(),
            max_level: n,
            levels: self.levels[..=n].to_vec(),
            faces: keep(StructureKind::Face, &self.faces),
            degeneracies: keep(StructureKind::Degeneracy, &self.degeneracies),
            comults: keep(StructureKind::Comultiplication, &self.comults),
        })
    }

    /// Matrix of a generator acting on the `(a, b)` component.
    fn generator_matrix(&self, g: &Generator, a: usize, b: usize) -> &Matrix {
        match *g {
            Generator::Coface { n, j } => self.face(n, j).component(a, b).matrix(),
            Generator::Codegeneracy { n, i } => self.degeneracy(n, i).component(a, b).matrix(),
        }
    }

    /// `X(h): X_q → X_p` for `h: [p] → [q]` in `fint`, on the `(a, b)`
    /// component, via the canonical word of `h`.
    pub fn fint_action(&self, h: &FintMap, a: usize, b: usize) -> Result<Morphism> {
        let (p, q) = (h.source_dim(), h.target_dim());
        if p > self.max_level || q > self.max_level {
            return Err(Error::Truncation(format!("{h} exceeds level {}", self.max_level)));
        }
        let word = fint_factorize(h);
        let mut m = Matrix::identity(&self.ring, self.levels[q].hom(a, b).gens());
        // X(h) = X(g_1) ∘ ... ∘ X(g_k); X(g_k) is applied first
        for g in word.iter().rev() {
            m = self.generator_matrix(g, a, b).mul(&self.ring, &m);
        }
        Morphism::new(self.levels[q].hom(a, b).clone(), self.levels[p].hom(a, b).clone(), m)
    }

    /// `X(h)` as a quiver morphism.
    pub fn fint_action_quiver(&self, h: &FintMap) -> Result<QuiverMorphism> {
        let src = self.levels[h.target_dim()].clone();
        let tgt = self.levels[h.source_dim()].clone();
        let comps = src.pairs().map(|(a, b)| self.fint_action(h, a, b)).collect::<Result<_>>()?;
        QuiverMorphism::new(src, tgt, comps)
    }

    /// `μ_{k,l}` including the implicit unitors for `k = 0` or `l = 0`.
    pub fn comultiplication_full(&self, k: usize, l: usize) -> Result<QuiverMorphism> {
        if k == 0 || l == 0 {
            let src = self.levels[k + l].clone();
            let tgt = self.levels[k].tensor(&self.levels[l])?;
            let comps = src
                .pairs()
                .map(|(a, b)| {
                    let n = src.hom(a, b).gens();
                    Morphism::new(src.hom(a, b).clone(), tgt.hom(a, b).clone(), Matrix::identity(&self.ring, n))
                })
                .collect::<Result<_>>()?;
            return QuiverMorphism::new(src, tgt, comps);
        }
        Ok(self.comultiplication(k, l).clone())
    }

    /// `X_T` as a quiver.
    pub fn eval_necklace(&self, t: &Necklace) -> Result<Quiver> {
        let mut ev = Evaluator::new(self);
        let mut q = Quiver::zero(&self.ring, &self.vertices);
        for (a, b) in q.clone().pairs() {
            q.set_hom(a, b, ev.value(t, a, b)?.module.clone());
        }
        Ok(q)
    }

    /// `X_f: X_U → X_T` for `f: T → U`.
    pub fn eval_map(&self, f: &NecklaceMap) -> Result<QuiverMorphism> {
        let mut ev = Evaluator::new(self);
        let src = self.eval_necklace(f.target())?;
        let tgt = self.eval_necklace(f.source())?;
        let comps = src.pairs().map(|(a, b)| ev.action(f, a, b)).collect::<Result<_>>()?;
        QuiverMorphism::new(src, tgt, comps)
    }
}

// ----------------------------------------------------------------------
// evaluation

/// Generators of `X_{d_1} ⊗_S ... ⊗_S X_{d_k}` at `(a, b)`.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    pub keys: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub module: Module,
}

impl TensorBasis {
    /// Generators of `Q_1 ⊗_S ... ⊗_S Q_k` at `(a, b)`; for `k = 0` this is
    /// `I_S(a, b)`. Vanishing tensor products are dropped.
    pub fn build(ring: &Ring, quivers: &[&Quiver], a: usize, b: usize) -> TensorBasis {
        let mut keys = Vec::new();
        let mut factors = Vec::new();
        if quivers.is_empty() {
            if a == b {
                keys.push(Vec::new());
                factors.push(Factor::Free);
            }
        } else {
            #[allow(clippy::too_many_arguments)]
            fn rec(
                ring: &Ring,
                quivers: &[&Quiver],
                i: usize,
                cur: usize,
                b: usize,
                key: &mut Vec<usize>,
                fac: Factor,
                keys: &mut Vec<Vec<usize>>,
                factors: &mut Vec<Factor>,
            ) {
                let last = i + 1 == quivers.len();
                let targets: Vec<usize> = if last { vec![b] } else { (0..quivers[i].size()).collect() };
                for v in targets {
                    for (g, gf) in quivers[i].hom(cur, v).factors().iter().enumerate() {
                        let Some(nf) = ring.tensor_factor(&fac, gf) else { continue };
                        key.push(g);
                        if last {
                            keys.push(key.clone());
                            factors.push(nf);
                        } else {
                            key.push(v);
                            rec(ring, quivers, i + 1, v, b, key, nf, keys, factors);
                            key.pop();
                        }
                        key.pop();
                    }
                }
            }
            rec(ring, quivers, 0, a, b, &mut Vec::new(), Factor::Free, &mut keys, &mut factors);
        }
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        TensorBasis { keys, index, module: Module::from_factors_unchecked(ring, factors) }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

type SparseVec = Vec<(Vec<usize>, Elem)>;

/// Caching evaluator for necklaces and necklace maps.
pub struct Evaluator<'a> {
    x: &'a TemplicialModule,
    bases: HashMap<(Vec<usize>, usize, usize), Rc<TensorBasis>>,
    /// `X(h)` columns at `(v, w)`, as one-bead sparse vectors.
    words: HashMap<(FintMap, usize, usize), Rc<Vec<SparseVec>>>,
    /// Iterated comultiplication `X_l(v, w) → X_{d_1} ⊗ ... ⊗ X_{d_r}`.
    deltas: HashMap<(Vec<usize>, usize, usize), Rc<Vec<SparseVec>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(x: &'a TemplicialModule) -> Self {
        Evaluator { x, bases: HashMap::new(), words: HashMap::new(), deltas: HashMap::new() }
    }

    pub fn module(&self) -> &'a TemplicialModule {
        self.x
    }

    /// Basis of `X_T(a, b)`.
    pub fn value(&mut self, t: &Necklace, a: usize, b: usize) -> Result<Rc<TensorBasis>> {
        if t.dim() > self.x.max_level {
            return Err(Error::Truncation(format!("{t} exceeds level {}", self.x.max_level)));
        }
        Ok(self.basis(&t.bead_dims(), a, b))
    }

    fn basis(&mut self, dims: &[usize], a: usize, b: usize) -> Rc<TensorBasis> {
        let key = (dims.to_vec(), a, b);
        if let Some(bs) = self.bases.get(&key) {
            return bs.clone();
        }
        let qs: Vec<&Quiver> = dims.iter().map(|&d| &self.x.levels[d]).collect();
        let bs = Rc::new(TensorBasis::build(&self.x.ring, &qs, a, b));
        self.bases.insert(key, bs.clone());
        bs
    }

    /// Columns of `X(h)` at `(v, w)`.
    fn word(&mut self, h: &FintMap, v: usize, w: usize) -> Result<Rc<Vec<SparseVec>>> {
        let key = (h.clone(), v, w);
        if let Some(c) = self.words.get(&key) {
            return Ok(c.clone());
        }
        let m = self.x.fint_action(h, v, w)?;
        let ring = &self.x.ring;
        let cols: Vec<SparseVec> = (0..m.matrix().cols())
            .map(|j| {
                (0..m.matrix().rows())
                    .filter(|&i| !ring.is_zero(&m.matrix()[(i, j)]))
                    .map(|i| (vec![i], m.matrix()[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let rc = Rc::new(cols);
        self.words.insert(key, rc.clone());
        Ok(rc)
    }

    /// Columns of the right-first iterated comultiplication of `X_l(v, w)`
    /// into the pieces `dims`.
    fn delta(&mut self, dims: &[usize], v: usize, w: usize) -> Result<Rc<Vec<SparseVec>>> {
        let key = (dims.to_vec(), v, w);
        if let Some(c) = self.deltas.get(&key) {
            return Ok(c.clone());
        }
        let x = self.x;
        let ring = &x.ring;
        let l: usize = dims.iter().sum();
        let n = x.levels[l].hom(v, w).gens();
        let cols: Vec<SparseVec> = if dims.len() == 1 {
            (0..n).map(|g| vec![(vec![g], ring.one())]).collect()
        } else {
            let (d1, rest) = (dims[0], &dims[1..]);
            let mu = x.comultiplication(d1, l - d1).component(v, w).matrix().clone();
            let layout = self.basis(&[d1, l - d1], v, w);
            let mut cols = Vec::with_capacity(n);
            for g in 0..n {
                let mut acc: HashMap<Vec<usize>, Elem> = HashMap::new();
                for (r, bkey) in layout.keys.iter().enumerate() {
                    let c = &mu[(r, g)];
                    if ring.is_zero(c) {
                        continue;
                    }
                    let (g1, mid, g2) = (bkey[0], bkey[1], bkey[2]);
                    let tail = self.delta(rest, mid, w)?;
                    for (tk, tc) in &tail[g2] {
                        let mut k = vec![g1, mid];
                        k.extend_from_slice(tk);
                        let e = acc.entry(k).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &ring.mul(c, tc));
                    }
                }
                let mut col: SparseVec = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
                col.sort_by(|x, y| x.0.cmp(&y.0));
                cols.push(col);
            }
            cols
        };
        let rc = Rc::new(cols);
        self.deltas.insert(key, rc.clone());
        Ok(rc)
    }

    /// `X_f` on the `(a, b)` component, as a morphism `X_U(a,b) → X_T(a,b)`.
    pub fn action(&mut self, f: &NecklaceMap, a: usize, b: usize) -> Result<Morphism> {
        let ring = self.x.ring.clone();
        let src_basis = self.value(f.target(), a, b)?;
        let tgt_basis = self.value(f.source(), a, b)?;
        let (active, inert) = f.factor();
        let refinements = inert.refinements()?;
        let actions = active.bead_actions()?;
        let mid = active.target().clone();
        let mid_joints = mid.joints().to_vec();
        let mut m = Matrix::zeros(&ring, tgt_basis.keys.len(), src_basis.keys.len());
        for (col, ukey) in src_basis.keys.iter().enumerate() {
            // inert part: comultiply each bead of U
            let mut partial: Vec<(Vec<usize>, Elem)> = vec![(Vec::new(), ring.one())];
            let k = f.target().bead_dims().len();
            for (j, pieces) in refinements.iter().enumerate() {
                let g = ukey[2 * j];
                let v = if j == 0 { a } else { ukey[2 * j - 1] };
                let w = if j + 1 == k { b } else { ukey[2 * j + 1] };
                let d = self.delta(pieces, v, w)?;
                let mut next = Vec::new();
                for (pk, pc) in &partial {
                    for (dk, dc) in &d[g] {
                        let mut nk = pk.clone();
                        if j > 0 {
                            nk.push(v);
                        }
                        nk.extend_from_slice(dk);
                        next.push((nk, ring.mul(pc, dc)));
                    }
                }
                partial = next;
            }
            // active part: act bead-wise on each term
            for (vkey, vc) in partial {
                let vertex_at = |joint: usize| -> usize {
                    if joint == 0 {
                        a
                    } else if joint + 1 == mid_joints.len() {
                        b
                    } else {
                        vkey[2 * joint - 1]
                    }
                };
                let mut terms: Vec<(Vec<usize>, Elem)> = vec![(Vec::new(), vc.clone())];
                let src_beads = f.source().beads();
                for (i, act) in actions.iter().enumerate() {
                    let (start, _) = src_beads[i];
                    let (cols, g, v) = match act.target_bead {
                        Some(jb) => {
                            let v = vertex_at(jb);
                            let w = vertex_at(jb + 1);
                            (self.word(&act.map, v, w)?, vkey[2 * jb], v)
                        }
                        None => {
                            let joint = mid_joints.binary_search(&active.map().at(start)).unwrap();
                            let v = vertex_at(joint);
                            (self.word(&act.map, v, v)?, 0, v)
                        }
                    };
                    let mut next = Vec::new();
                    for (tk, tc) in &terms {
                        for (wk, wc) in &cols[g] {
                            let mut nk = tk.clone();
                            if i > 0 {
                                nk.push(v);
                            }
                            nk.extend_from_slice(wk);
                            next.push((nk, ring.mul(tc, wc)));
                        }
                    }
                    terms = next;
                }
                for (tk, tc) in terms {
                    if let Some(&row) = tgt_basis.index.get(&tk) {
                        m[(row, col)] = ring.add(&m[(row, col)], &tc);
                    }
                }
            }
        }
        Morphism::new(src_basis.module.clone(), tgt_basis.module.clone(), m)
    }
}

// ----------------------------------------------------------------------
// validation

/// One violated identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Human-readable identity with its indices.
    pub identity: String,
    /// Hom component `(a, b)` by vertex name, when applicable.
    pub hom: Option<(String, String)>,
    /// First differing entries `(row, col, lhs, rhs)`.
    pub entries: Vec<(usize, usize, String, String)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.identity)?;
        if let Some((a, b)) = &self.hom {
            write!(f, " at ({a},{b})")?;
        }
        for (r, c, x, y) in &self.entries {
            write!(f, "; [{r},{c}] {x} != {y}")?;
        }
        Ok(())
    }
}

/// Outcome of a validator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_ENTRIES: usize = 4;

fn diff_entries(ring: &Ring, lhs: &Matrix, rhs: &Matrix) -> Vec<(usize, usize, String, String)> {
    let mut out = Vec::new();
    if lhs.shape() != rhs.shape() {
        out.push((lhs.rows(), lhs.cols(), "shape".into(), format!("{}x{}", rhs.rows(), rhs.cols())));
        return out;
    }
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs[(i, j)] != rhs[(i, j)] && out.len() < MAX_ENTRIES {
                out.push((i, j, ring.format_elem(&lhs[(i, j)]), ring.format_elem(&rhs[(i, j)])));
            }
        }
    }
    out
}

struct Checker<'a> {
    x: &'a TemplicialModule,
    report: ValidationReport,
}

impl Checker<'_> {
    fn compare(&mut self, identity: &dyn Fn() -> String, lhs: &QuiverMorphism, rhs: &QuiverMorphism) {
        self.report.checks += 1;
        let names = self.x.vertices();
        for (k, (a, b)) in lhs.source().pairs().enumerate() {
            let (l, r) = (&lhs.components()[k], &rhs.components()[k]);
            if l.matrix() != r.matrix() {
                self.report.violations.push(Violation {
                    identity: identity(),
                    hom: Some((names[a].clone(), names[b].clone())),
                    entries: diff_entries(&self.x.ring, l.matrix(), r.matrix()),
                });
            }
        }
    }
}

/// Check the simplicial identities, coassociativity and colax naturality.
pub fn validate_templicial(x: &TemplicialModule) -> Result<ValidationReport> {
    x.check_shapes()?;
    let n_max = x.max_level;
    let mut ck = Checker { x, report: ValidationReport::default() };
    let d = |n: usize, j: usize| x.face(n, j);
    let s = |n: usize, i: usize| x.degeneracy(n, i);

    // d_i d_j = d_{j-1} d_i for 0 < i < j < n
    for n in 3..=n_max {
        for j in 2..n {
            for i in 1..j {
                let lhs = d(n - 1, i).compose(d(n, j))?;
                let rhs = d(n - 1, j - 1).compose(d(n, i))?;
                ck.compare(&|| format!("d{i} d{j} = d{} d{i} on X_{n}", j - 1), &lhs, &rhs);
            }
        }
    }
    // s_i s_j = s_{j+1} s_i for i <= j, s_j: X_n -> X_{n+1}
    for n in 0..n_max.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                let lhs = s(n + 1, i).compose(s(n, j))?;
                let rhs = s(n + 1, j + 1).compose(s(n, i))?;
                ck.compare(&|| format!("s{i} s{j} = s{} s{i} on X_{n}", j + 1), &lhs, &rhs);
            }
        }
    }
    // d_i s_j on X_n with d_i inner on X_{n+1}
    for n in 0..n_max {
        for j in 0..=n {
            for i in 1..=n {
                let lhs = d(n + 1, i).compose(s(n, j))?;
                let rhs = if i < j {
                    s(n - 1, j - 1).compose(d(n, i))?
                } else if i == j || i == j + 1 {
                    QuiverMorphism::identity(x.level(n))
                } else {
                    s(n - 1, j).compose(d(n, i - 1))?
                };
                ck.compare(&|| format!("d{i} s{j} on X_{n}"), &lhs, &rhs);
            }
        }
    }
    check_coassociativity(x, &mut ck)?;
    check_naturality(x, &mut ck)?;
    Ok(ck.report)
}

/// `(μ_{k,l} ⊗ id) ∘ μ_{k+l,m} = (id ⊗ μ_{l,m}) ∘ μ_{k,l+m}`, compared in the
/// flat layout of `X_k ⊗ X_l ⊗ X_m`.
fn check_coassociativity(x: &TemplicialModule, ck: &mut Checker<'_>) -> Result<()> {
    let ring = x.ring.clone();
    let mut ev = Evaluator::new(x);
    for n in 3..=x.max_level {
        for k in 1..n {
            for l in 1..n - k {
                let m = n - k - l;
                ck.report.checks += 1;
                for (a, b) in x.level(n).pairs() {
                    let flat = ev.basis(&[k, l, m], a, b);
                    let right = ev.delta(&[k, l, m], a, b)?;
                    // left-first: μ_{k+l,m} then μ_{k,l} on the first factor
                    let mu = x.comultiplication(k + l, m).component(a, b).matrix().clone();
                    let layout = ev.basis(&[k + l, m], a, b);
                    let cols = x.level(n).hom(a, b).gens();
                    let mut lhs = Matrix::zeros(&ring, flat.keys.len(), cols);
                    let mut rhs = Matrix::zeros(&ring, flat.keys.len(), cols);
                    for g in 0..cols {
                        for (r, bkey) in layout.keys.iter().enumerate() {
                            let c = &mu[(r, g)];
                            if ring.is_zero(c) {
                                continue;
                            }
                            let (g1, mid, g2) = (bkey[0], bkey[1], bkey[2]);
                            let inner = ev.delta(&[k, l], a, mid)?;
                            for (ik, ic) in &inner[g1] {
                                let mut key = ik.clone();
                                key.push(mid);
                                key.push(g2);
                                if let Some(&row) = flat.index.get(&key) {
                                    lhs[(row, g)] = ring.add(&lhs[(row, g)], &ring.mul(c, ic));
                                }
                            }
                        }
                        for (key, c) in &right[g] {
                            if let Some(&row) = flat.index.get(key) {
                                rhs[(row, g)] = ring.add(&rhs[(row, g)], c);
                            }
                        }
                    }
                    let lhs = Morphism::new(x.level(n).hom(a, b).clone(), flat.module.clone(), lhs)?;
                    let rhs = Morphism::new(x.level(n).hom(a, b).clone(), flat.module.clone(), rhs)?;
                    if lhs.matrix() != rhs.matrix() {
                        ck.report.violations.push(Violation {
                            identity: format!("coassociativity (k,l,m)=({k},{l},{m})"),
                            hom: Some((x.vertices[a].clone(), x.vertices[b].clone())),
                            entries: diff_entries(&ring, lhs.matrix(), rhs.matrix()),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `μ_{k',l'} ∘ X(f + g) = (X(f) ⊗ X(g)) ∘ μ_{k,l}` for `f: [k'] → [k]`,
/// `g: [l'] → [l]`.
fn check_naturality(x: &TemplicialModule, ck: &mut Checker<'_>) -> Result<()> {
    let n_max = x.max_level;
    let mut actions: HashMap<FintMap, QuiverMorphism> = HashMap::new();
    let mut act = |h: &FintMap| -> Result<QuiverMorphism> {
        if let Some(m) = actions.get(h) {
            return Ok(m.clone());
        }
        let m = x.fint_action_quiver(h)?;
        actions.insert(h.clone(), m.clone());
        Ok(m)
    };
    for n in 1..=n_max {
        for k in 0..=n {
            let l = n - k;
            let mu = x.comultiplication_full(k, l)?;
            for n2 in 1..=n_max {
                for k2 in 0..=n2 {
                    let l2 = n2 - k2;
                    // skip the cases where both sides are identities by counitality
                    if (k == 0 || l == 0) && (k2 == 0 || l2 == 0) && k == k2 && l == l2 {
                        continue;
                    }
                    let mu2 = x.comultiplication_full(k2, l2)?;
                    for f in fint_maps(k2, k) {
                        for g in fint_maps(l2, l) {
                            let lhs = mu2.compose(&act(&f.plus(&g))?)?;
                            let rhs = act(&f)?.tensor(&act(&g)?)?.compose(&mu)?;
                            ck.compare(&|| format!("naturality of mu_{{{k},{l}}} along {f} + {g}"), &lhs, &rhs);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// ----------------------------------------------------------------------
// necklicial modules

/// A functor `Nec^op → Mod(R)` truncated at dimension `N`: a module for each
/// necklace and a morphism `Y_U → Y_T` for each necklace map `T → U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklicialModule {
    ring: Ring,
    max_level: usize,
    values: BTreeMap<Necklace, Module>,
    actions: BTreeMap<NecklaceMap, Morphism>,
}

/// All necklace maps between necklaces of dimension at most `n`.
pub fn all_necklace_maps(n: usize) -> Vec<NecklaceMap> {
    let ns = necklaces_up_to(n);
    let mut out = Vec::new();
    for t in &ns {
        for u in &ns {
            out.extend(necklace_maps(t, u));
        }
    }
    out
}

impl NecklicialModule {
    /// Build from a value and an action function; shapes are checked.
    pub fn from_fn(
        ring: &Ring,
        max_level: usize,
        mut value: impl FnMut(&Necklace) -> Result<Module>,
        mut action: impl FnMut(&NecklaceMap) -> Result<Morphism>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for t in necklaces_up_to(max_level) {
            let v = value(&t)?;
            if v.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), v.ring().to_string()));
            }
            values.insert(t, v);
        }
        let mut actions = BTreeMap::new();
        for f in all_necklace_maps(max_level) {
            let m = action(&f)?;
            if m.domain() != &values[f.target()] || m.codomain() != &values[f.source()] {
                return Err(Error::Shape(format!("action of {f} has the wrong shape")));
            }
            actions.insert(f, m);
        }
        Ok(NecklicialModule { ring: ring.clone(), max_level, values, actions })
    }

    /// The zero necklicial module.
    pub fn zero(ring: &Ring, max_level: usize) -> Self {
        let z = Module::zero(ring);
        Self::from_fn(ring, max_level, |_| Ok(z.clone()), |_| Ok(Morphism::identity(&z))).unwrap()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn value(&self, t: &Necklace) -> &Module {
        &self.values[t]
    }

    pub fn action(&self, f: &NecklaceMap) -> &Morphism {
        &self.actions[f]
    }

    pub fn values(&self) -> &BTreeMap<Necklace, Module> {
        &self.values
    }

    pub fn actions(&self) -> &BTreeMap<NecklaceMap, Morphism> {
        &self.actions
    }

    /// A copy with one action replaced (shape-checked).
    pub fn with_action(&self, f: &NecklaceMap, m: Morphism) -> Result<Self> {
        let old = self.actions.get(f).ok_or_else(|| Error::Range(format!("no action for {f}")))?;
        if old.domain() != m.domain() || old.codomain() != m.codomain() {
            return Err(Error::Shape(format!("replacement action for {f} has the wrong shape")));
        }
        let mut y = self.clone();
        y.actions.insert(f.clone(), m);
        Ok(y)
    }

    /// Restrict to necklaces of dimension at most `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.max_level {
            return Err(Error::Truncation(format!("cannot raise truncation {} to {n}", self.max_level)));
        }
        Ok(NecklicialModule {
            ring: self.ring.clone(),
            max_level: n,
            values: self.values.iter().filter(|(t, _)| t.dim() <= n).map(|(t, m)| (t.clone(), m.clone())).collect(),
            actions: self
                .actions
                .iter()
                .filter(|(f, _)| f.source().dim() <= n && f.target().dim() <= n)
                .map(|(f, m)| (f.clone(), m.clone()))
                .collect(),
        })
    }

    /// `(Y ⊗ M)_T = Y_T ⊗ M`.
    pub fn tensor_external(&self, m: &Module) -> Result<Self> {
        crate::coeff::module::same_ring(&self.ring, m.ring())?;
        let id = Morphism::identity(m);
        let values = self.values.iter().map(|(t, v)| Ok((t.clone(), v.tensor(m)?))).collect::<Result<_>>()?;
        let actions =
            self.actions.iter().map(|(f, a)| Ok((f.clone(), a.tensor(&id)?))).collect::<Result<_>>()?;
        Ok(NecklicialModule { ring: self.ring.clone(), max_level: self.max_level, values, actions })
    }
}

/// `X_•(a, b)`.
pub fn hom_necklicial(x: &TemplicialModule, a: &str, b: &str) -> Result<NecklicialModule> {
    let (ai, bi) = (x.vertex_index(a)?, x.vertex_index(b)?);
    hom_necklicial_at(x, ai, bi)
}

pub fn hom_necklicial_at(x: &TemplicialModule, a: usize, b: usize) -> Result<NecklicialModule> {
    let ev = std::cell::RefCell::new(Evaluator::new(x));
    NecklicialModule::from_fn(
        x.ring(),
        x.max_level(),
        |t| Ok(ev.borrow_mut().value(t, a, b)?.module.clone()),
        |f| ev.borrow_mut().action(f, a, b),
    )
}

/// Exhaustive functoriality check: `Y_id = id` and `Y_{g∘f} = Y_f ∘ Y_g`.
pub fn validate_necklicial(y: &NecklicialModule) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut by_source: HashMap<&Necklace, Vec<&NecklaceMap>> = HashMap::new();
    for f in y.actions.keys() {
        by_source.entry(f.source()).or_default().push(f);
    }
    for (f, yf) in &y.actions {
        if f.is_identity() {
            report.checks += 1;
            if yf != &Morphism::identity(y.value(f.source())) {
                report.violations.push(Violation {
                    identity: format!("identity action on {}", f.source()),
                    hom: None,
                    entries: diff_entries(&y.ring, yf.matrix(), &Matrix::identity(&y.ring, yf.domain().gens())),
                });
            }
        }
        let Some(nexts) = by_source.get(f.target()) else { continue };
        for g in nexts {
            report.checks += 1;
            let gf = g.after(f).expect("composable by construction");
            let lhs = &y.actions[&gf];
            let rhs = yf.compose(&y.actions[*g]).expect("shapes agree");
            if lhs.matrix() != rhs.matrix() {
                report.violations.push(Violation {
                    identity: format!("Y({gf}) = Y({f}) Y({g})"),
                    hom: None,
                    entries: diff_entries(&y.ring, lhs.matrix(), rhs.matrix()),
                });
            }
        }
    }
    report
}

/// Run [`validate_necklicial`] on every hom.
pub fn validate_all_homs(x: &TemplicialModule) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for (a, b) in x.level(0).pairs() {
        let y = hom_necklicial_at(x, a, b)?;
        let r = validate_necklicial(&y);
        report.checks += r.checks;
        for mut v in r.violations {
            v.hom = Some((x.vertices[a].clone(), x.vertices[b].clone()));
            report.violations.push(v);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{free_templicial, nerve, LinearCategory, SimplicialSetTrunc};

    fn f3() -> Ring {
        Ring::prime_field(3).unwrap()
    }

    fn dual_numbers(n: usize) -> TemplicialModule {
        let k = f3();
        nerve(&LinearCategory::polynomial_algebra(&k, &[k.zero(), k.zero()]).unwrap(), n).unwrap()
    }

    #[test]
    fn key_counts() {
        assert_eq!(required_keys(StructureKind::Face, 4).len(), 1 + 2 + 3);
        assert_eq!(required_keys(StructureKind::Degeneracy, 3).len(), 1 + 2 + 3);
        assert_eq!(required_keys(StructureKind::Comultiplication, 4), vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]);
    }

    #[test]
    fn inert_spine_map_is_comultiplication() {
        let x = dual_numbers(3);
        let spine = Necklace::spine(2);
        let f = NecklaceMap::inert(&spine, &Necklace::simplex(2)).unwrap();
        assert_eq!(x.eval_map(&f).unwrap(), *x.comultiplication(1, 1));
        assert_eq!(x.eval_necklace(&spine).unwrap(), x.level(1).tensor(x.level(1)).unwrap());
        let id = NecklaceMap::identity(&Necklace::simplex(3));
        assert_eq!(x.eval_map(&id).unwrap(), QuiverMorphism::identity(x.level(3)));
    }

    #[test]
    fn face_action_matches_stored_face() {
        let x = free_templicial(&SimplicialSetTrunc::simplex(2, 3), &f3(), 3).unwrap();
        let d = crate::necklace::coface_map(3, 2);
        assert_eq!(x.eval_map(&d).unwrap(), *x.face(3, 2));
        assert_eq!(x.fint_action_quiver(d.map()).unwrap(), *x.face(3, 2));
    }

    #[test]
    fn validators_name_broken_identities() {
        let x = dual_numbers(3);
        assert!(validate_templicial(&x).unwrap().passed());
        assert!(validate_all_homs(&x).unwrap().passed());
        // doubling μ_{1,1} breaks counitality against s_0
        let mu = x.comultiplication(1, 1);
        let k = f3();
        let mats: Vec<Matrix> = mu.components().iter().map(|c| c.matrix().scale(&k, &k.from_i64(2))).collect();
        let bad = QuiverMorphism::from_matrices(mu.source().clone(), mu.target().clone(), mats).unwrap();
        let y = x.with_structure_map(StructureKind::Comultiplication, (1, 1), bad).unwrap();
        let rep = validate_templicial(&y).unwrap();
        assert!(!rep.passed());
        assert!(rep.violations.iter().all(|v| !v.identity.is_empty()));
        assert!(!validate_all_homs(&y).unwrap().passed());
    }

    #[test]
    fn structure_maps_are_shape_checked() {
        let x = dual_numbers(2);
        let wrong = QuiverMorphism::identity(x.level(1));
        assert!(x.with_structure_map(StructureKind::Face, (2, 1), wrong).is_err());
        assert!(x.truncate(3).is_err());
        assert_eq!(x.truncate(1).unwrap().max_level(), 1);
        assert!(hom_necklicial(&x, "*", "nowhere").is_err());
    }

    #[test]
    fn external_tensor_scales_ranks() {
        let x = dual_numbers(3);
        let y = hom_necklicial(&x, "*", "*").unwrap();
        let y2 = y.tensor_external(&Module::free(&f3(), 2)).unwrap();
        for (t, m) in y.values() {
            assert_eq!(y2.value(t).gens(), 2 * m.gens());
        }
        assert!(validate_necklicial(&y2).passed());
        assert_eq!(y.value(&Necklace::spine(3)).gens(), 8);
    }
}
