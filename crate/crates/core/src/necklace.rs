//! The finite interval category `fint` and the necklace category.
//!
//! A necklace `(T, p)` is a subset `T ⊆ [p]` containing `0` and `p`, read as
//! a wedge of simplices `Δ^{t_1} ∨ Δ^{t_2 − t_1} ∨ ...`. A necklace map
//! `(T, p) → (U, q)` is an endpoint-preserving monotone `f: [p] → [q]` with
//! `U ⊆ f(T)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Endpoint-preserving monotone map `[p] → [q]`, stored as its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FintMap {
    values: Vec<usize>,
}

impl FintMap {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() || values[0] != 0 {
            return Err(Error::Necklace(format!("{values:?} does not preserve the initial point")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Necklace(format!("{values:?} is not monotone")));
        }
        Ok(FintMap { values })
    }

    /// A map `[p] → [q]`, where `q` must equal the last value.
    pub fn with_target(values: Vec<usize>, q: usize) -> Result<Self> {
        let f = Self::new(values)?;
        if f.target_dim() != q {
            return Err(Error::Necklace(format!("{:?} does not end at {q}", f.values)));
        }
        Ok(f)
    }

    pub fn identity(n: usize) -> Self {
        FintMap { values: (0..=n).collect() }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        *self.values.last().unwrap()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FintMap) -> Result<FintMap> {
        if first.target_dim() != self.source_dim() {
            return Err(Error::Necklace("composition of non-composable fint maps".into()));
        }
        Ok(FintMap { values: first.values.iter().map(|&i| self.values[i]).collect() })
    }

    /// `f + g: [p + p'] → [q + q']`, the ordinal sum glued at the endpoint.
    pub fn plus(&self, g: &FintMap) -> FintMap {
        let q = self.target_dim();
        let mut values = self.values.clone();
        values.extend(g.values[1..].iter().map(|v| v + q));
        FintMap { values }
    }

    /// Image as a sorted set.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.values.clone();
        v.dedup();
        v
    }

    /// Apply to a set of points.
    pub fn apply_set(&self, t: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = t.iter().map(|&i| self.values[i]).collect();
        s.into_iter().collect()
    }

    /// Restriction to `[a, b]`, reindexed as a map `[b − a] → [f(b) − f(a)]`.
    pub fn restrict(&self, a: usize, b: usize) -> FintMap {
        let base = self.values[a];
        FintMap { values: self.values[a..=b].iter().map(|v| v - base).collect() }
    }
}

impl fmt::Display for FintMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// A generator of `fint`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Inner coface `δ_j: [n − 1] → [n]`, `0 < j < n`; `n` is the target.
    Coface { n: usize, j: usize },
    /// Codegeneracy `σ_i: [n + 1] → [n]`, `0 ≤ i ≤ n`; `n` is the target.
    Codegeneracy { n: usize, i: usize },
}

impl Generator {
    pub fn as_map(&self) -> FintMap {
        match *self {
            Generator::Coface { n, j } => FintMap { values: (0..n).map(|k| if k < j { k } else { k + 1 }).collect() },
            Generator::Codegeneracy { n, i } => {
                FintMap { values: (0..=n + 1).map(|k| if k <= i { k } else { k - 1 }).collect() }
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Coface { j, .. } => write!(f, "δ{j}"),
            Generator::Codegeneracy { i, .. } => write!(f, "σ{i}"),
        }
    }
}

/// Canonical word for `f`, listed in order of application: the
/// codegeneracies first (indices descending), then the inner cofaces
/// (indices ascending). Composing the word reproduces `f`.
pub fn fint_factorize(f: &FintMap) -> Vec<Generator> {
    let v = f.values();
    let mut word = Vec::new();
    // surjective part [p] ↠ [m]
    let collapses: Vec<usize> = (0..f.source_dim()).filter(|&j| v[j] == v[j + 1]).collect();
    let mut n = f.source_dim();
    for &j in collapses.iter().rev() {
        n -= 1;
        word.push(Generator::Codegeneracy { n, i: j });
    }
    // injective part [m] ↪ [q]
    let image: BTreeSet<usize> = v.iter().copied().collect();
    let missing: Vec<usize> = (0..=f.target_dim()).filter(|x| !image.contains(x)).collect();
    for &j in &missing {
        n += 1;
        word.push(Generator::Coface { n, j });
    }
    word
}

/// Compose a word given in order of application, starting at `[p]`.
pub fn eval_word(p: usize, word: &[Generator]) -> Result<FintMap> {
    let mut acc = FintMap::identity(p);
    for g in word {
        acc = g.as_map().after(&acc)?;
    }
    Ok(acc)
}

/// A necklace `(T, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace {
    p: usize,
    t: Vec<usize>,
}

impl Necklace {
    pub fn new(p: usize, t: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = t.into_iter().collect();
        if !set.contains(&0) || !set.contains(&p) || set.iter().any(|&x| x > p) {
            return Err(Error::Necklace(format!("{set:?} is not a necklace of dimension {p}")));
        }
        Ok(Necklace { p, t: set.into_iter().collect() })
    }

    /// `Δ^n = ({0, n}, n)`.
    pub fn simplex(n: usize) -> Self {
        if n == 0 {
            Necklace { p: 0, t: vec![0] }
        } else {
            Necklace { p: n, t: vec![0, n] }
        }
    }

    /// `Δ^{n_1} ∨ ... ∨ Δ^{n_k}`.
    pub fn from_beads(dims: &[usize]) -> Self {
        dims.iter().fold(Self::simplex(0), |acc, &d| acc.wedge(&Self::simplex(d)))
    }

    /// `(T, p)` with `T = [p]`: the spine.
    pub fn spine(p: usize) -> Self {
        Necklace { p, t: (0..=p).collect() }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn joints(&self) -> &[usize] {
        &self.t
    }

    pub fn is_simplex(&self) -> bool {
        self.t.len() <= 2
    }

    /// Beads as intervals `[t_{i−1}, t_i]`.
    pub fn beads(&self) -> Vec<(usize, usize)> {
        self.t.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn bead_dims(&self) -> Vec<usize> {
        self.t.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `(T ∪ (p + U), p + q)`.
    pub fn wedge(&self, other: &Necklace) -> Necklace {
        let mut t = self.t.clone();
        t.extend(other.t.iter().map(|u| u + self.p));
        t.dedup();
        Necklace { p: self.p + other.p, t }
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.t.iter().map(|x| x.to_string()).collect();
        write!(f, "({{{}}},{})", v.join(","), self.p)
    }
}

/// A necklace map `(T, p) → (U, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NecklaceMap {
    source: Necklace,
    target: Necklace,
    map: FintMap,
}

/// The parts of a bead-wise description of an active map: for each source
/// bead, either the target bead it covers or `None` if it collapses to a
/// point, together with the restricted fint map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeadAction {
    pub target_bead: Option<usize>,
    pub map: FintMap,
}

impl NecklaceMap {
    pub fn new(source: Necklace, target: Necklace, map: FintMap) -> Result<Self> {
        if map.source_dim() != source.p || map.target_dim() != target.p {
            return Err(Error::Necklace(format!("{map} does not go from [{}] to [{}]", source.p, target.p)));
        }
        let img = map.apply_set(&source.t);
        if !target.t.iter().all(|u| img.binary_search(u).is_ok()) {
            return Err(Error::Necklace(format!("{map}: {source} -> {target} misses a joint")));
        }
        Ok(NecklaceMap { source, target, map })
    }

    pub fn identity(t: &Necklace) -> Self {
        NecklaceMap { source: t.clone(), target: t.clone(), map: FintMap::identity(t.p) }
    }

    /// The inert map `(T, p) → (U, p)` for `U ⊆ T`.
    pub fn inert(source: &Necklace, target: &Necklace) -> Result<Self> {
        Self::new(source.clone(), target.clone(), FintMap::identity(source.p))
    }

    pub fn source(&self) -> &Necklace {
        &self.source
    }

    pub fn target(&self) -> &Necklace {
        &self.target
    }

    pub fn map(&self) -> &FintMap {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity() && self.source == self.target
    }

    pub fn is_inert(&self) -> bool {
        self.map.is_identity()
    }

    pub fn is_active(&self) -> bool {
        self.map.apply_set(&self.source.t) == self.target.t
    }

    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NecklaceMap) -> Result<NecklaceMap> {
        if first.target != self.source {
            return Err(Error::Necklace("composition of non-composable necklace maps".into()));
        }
        NecklaceMap::new(first.source.clone(), self.target.clone(), self.map.after(&first.map)?)
    }

    /// `f = inert ∘ active`, through `(f(T), q)`.
    pub fn factor(&self) -> (NecklaceMap, NecklaceMap) {
        let mid = Necklace { p: self.target.p, t: self.map.apply_set(&self.source.t) };
        let active = NecklaceMap { source: self.source.clone(), target: mid.clone(), map: self.map.clone() };
        let inert = NecklaceMap { source: mid, target: self.target.clone(), map: FintMap::identity(self.target.p) };
        (active, inert)
    }

    /// For an active map, the action on each source bead.
    pub fn bead_actions(&self) -> Result<Vec<BeadAction>> {
        if !self.is_active() {
            return Err(Error::Necklace(format!("{self} is not active")));
        }
        let u = &self.target.t;
        Ok(self
            .source
            .beads()
            .into_iter()
            .map(|(a, b)| {
                let (fa, fb) = (self.map.at(a), self.map.at(b));
                let target_bead = (fa < fb).then(|| u.binary_search(&fa).unwrap());
                BeadAction { target_bead, map: self.map.restrict(a, b) }
            })
            .collect())
    }

    /// For an inert map, the source bead dimensions refining each target bead.
    pub fn refinements(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_inert() {
            return Err(Error::Necklace(format!("{self} is not inert")));
        }
        Ok(self
            .target
            .beads()
            .into_iter()
            .map(|(a, b)| {
                let pts: Vec<usize> = self.source.t.iter().copied().filter(|&x| a <= x && x <= b).collect();
                pts.windows(2).map(|w| w[1] - w[0]).collect()
            })
            .collect())
    }
}

impl fmt::Display for NecklaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.map, self.target)
    }
}

// ----------------------------------------------------------------------
// enumeration

/// All endpoint-preserving monotone maps `[p] → [q]`, lexicographic.
pub fn fint_maps(p: usize, q: usize) -> Vec<FintMap> {
    if p == 0 {
        return if q == 0 { vec![FintMap::identity(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; p + 1];
    fn rec(i: usize, p: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<FintMap>) {
        if i == p {
            cur[p] = q;
            out.push(FintMap { values: cur.clone() });
            return;
        }
        for v in cur[i - 1]..=q {
            cur[i] = v;
            rec(i + 1, p, q, cur, out);
        }
    }
    rec(1, p, q, &mut cur, &mut out);
    out
}

/// All necklaces of dimension `p`, ordered by `T`.
pub fn necklaces(p: usize) -> Vec<Necklace> {
    if p == 0 {
        return vec![Necklace::simplex(0)];
    }
    let inner = p - 1;
    let mut out: Vec<Necklace> = (0u64..1 << inner)
        .map(|mask| {
            let mut t = vec![0];
            t.extend((1..p).filter(|i| mask >> (i - 1) & 1 == 1));
            t.push(p);
            Necklace { p, t }
        })
        .collect();
    out.sort();
    out
}

/// All necklaces of dimension at most `n`.
pub fn necklaces_up_to(n: usize) -> Vec<Necklace> {
    (0..=n).flat_map(necklaces).collect()
}

/// All necklace maps between two necklaces.
pub fn necklace_maps(source: &Necklace, target: &Necklace) -> Vec<NecklaceMap> {
    fint_maps(source.p, target.p)
        .into_iter()
        .filter_map(|f| NecklaceMap::new(source.clone(), target.clone(), f).ok())
        .collect()
}

/// All injective necklace maps into `Δ^n`, ordered by source then values.
pub fn injective_into_simplex(n: usize) -> Vec<NecklaceMap> {
    let target = Necklace::simplex(n);
    let mut out = Vec::new();
    for p in 0..=n {
        for t in necklaces(p) {
            for f in fint_maps(p, n) {
                if f.is_injective() {
                    out.push(NecklaceMap { source: t.clone(), target: target.clone(), map: f });
                }
            }
        }
    }
    out
}

/// All inert maps into `Δ^n`.
pub fn inert_into_simplex(n: usize) -> Vec<NecklaceMap> {
    let target = Necklace::simplex(n);
    necklaces(n)
        .into_iter()
        .map(|t| NecklaceMap { source: t, target: target.clone(), map: FintMap::identity(n) })
        .collect()
}

/// All surjections in `fint` out of `[n]`, ordered by values.
pub fn surjections(n: usize) -> Vec<FintMap> {
    let mut out: Vec<FintMap> = (0..=n).flat_map(|m| fint_maps(n, m)).filter(FintMap::is_surjective).collect();
    out.sort();
    out
}

// ----------------------------------------------------------------------
// index diagrams

/// A finite diagram indexed by maps into a fixed object. `arrows` are
/// `(source, target, g)` with `objects[target] ∘ g = objects[source]`
/// for necklace diagrams.
#[derive(Clone, Debug)]
pub struct IndexDiagram<O, A> {
    pub objects: Vec<O>,
    pub arrows: Vec<(usize, usize, A)>,
}

/// Objects of the horn, wing and truncated-wing diagrams are maps into
/// `Δ^n`; all commuting necklace maps between their sources are arrows.
fn over_simplex(objects: Vec<NecklaceMap>) -> IndexDiagram<NecklaceMap, NecklaceMap> {
    let mut arrows = Vec::new();
    for (a, fa) in objects.iter().enumerate() {
        for (b, fb) in objects.iter().enumerate() {
            if a == b {
                continue;
            }
            // g = fb^{-1} ∘ fa, defined when image(fa) ⊆ image(fb)
            let img_b = fb.map.values();
            let vals: Option<Vec<usize>> =
                fa.map.values().iter().map(|v| img_b.iter().position(|w| w == v)).collect();
            let Some(vals) = vals else { continue };
            let Ok(g) = FintMap::with_target(vals, fb.source.p) else { continue };
            if let Ok(g) = NecklaceMap::new(fa.source.clone(), fb.source.clone(), g) {
                arrows.push((a, b, g));
            }
        }
    }
    IndexDiagram { objects, arrows }
}

/// The inner coface `δ_j: Δ^{n−1} → Δ^n` as a necklace map.
pub fn coface_map(n: usize, j: usize) -> NecklaceMap {
    let map = Generator::Coface { n, j }.as_map();
    NecklaceMap { source: Necklace::simplex(n - 1), target: Necklace::simplex(n), map }
}

/// Objects: injective maps into `Δ^n` other than `δ_j` and the identity.
pub fn horn_diagram(n: usize, j: usize) -> Result<IndexDiagram<NecklaceMap, NecklaceMap>> {
    if !(0 < j && j < n) {
        return Err(Error::Range(format!("horn ({n},{j}) needs 0 < j < n")));
    }
    let dj = coface_map(n, j);
    let objects = injective_into_simplex(n)
        .into_iter()
        .filter(|f| *f != dj && !f.is_identity())
        .collect();
    Ok(over_simplex(objects))
}

/// Objects: non-identity inert maps into `Δ^n`.
pub fn wings_diagram(n: usize) -> Result<IndexDiagram<NecklaceMap, NecklaceMap>> {
    if n < 2 {
        return Err(Error::Range(format!("wings need n >= 2, got {n}")));
    }
    truncated_wings_diagram(n, n - 1)
}

/// Objects: non-identity inert `T ↪ Δ^n` with `T ∩ {i+1, ..., n−1} = ∅`.
pub fn truncated_wings_diagram(n: usize, i: usize) -> Result<IndexDiagram<NecklaceMap, NecklaceMap>> {
    if i >= n {
        return Err(Error::Range(format!("truncated wings ({n},{i}) need i < n")));
    }
    let objects = inert_into_simplex(n)
        .into_iter()
        .filter(|f| !f.is_identity() && f.source.t.iter().all(|&x| x <= i || x == n))
        .collect();
    Ok(over_simplex(objects))
}

/// Objects: non-identity surjections out of `[n]`; arrows `(σ, σ', τ)` with
/// `σ' = τ ∘ σ`.
pub fn degeneracy_diagram(n: usize) -> Result<IndexDiagram<FintMap, FintMap>> {
    if n < 1 {
        return Err(Error::Range("degeneracy diagram needs n >= 1".into()));
    }
    let objects: Vec<FintMap> = surjections(n).into_iter().filter(|s| !s.is_identity()).collect();
    let mut arrows = Vec::new();
    for (a, s) in objects.iter().enumerate() {
        for (b, s2) in objects.iter().enumerate() {
            if a == b {
                continue;
            }
            // τ(s(k)) = s2(k) must be well defined
            let mut tau = vec![usize::MAX; s.target_dim() + 1];
            let ok = (0..=n).all(|k| {
                let slot = &mut tau[s.at(k)];
                if *slot == usize::MAX {
                    *slot = s2.at(k);
                    true
                } else {
                    *slot == s2.at(k)
                }
            });
            if ok {
                arrows.push((a, b, FintMap { values: tau }));
            }
        }
    }
    Ok(IndexDiagram { objects, arrows })
}
