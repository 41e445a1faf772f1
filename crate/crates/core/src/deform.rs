//! Base change, deformations, extensions of necklicial modules and the
//! verification harnesses for the preservation results.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{is_exact, Factor, Matrix, Module, Morphism, RingExtension};
use crate::error::{Error, Result};
use crate::kan::{
    check_deg_projective, check_levelwise, check_quasicategory, check_wedge_pullbacks, check_weak_kan,
    degenerate_subobject, truncated_wing_object, CheckReport, IndexResult, Levelwise,
};
use crate::necklace::{Necklace, NecklaceMap};
use crate::quiver::{Quiver, QuiverMorphism};
use crate::templicial::{hom_necklicial_at, validate_necklicial, validate_templicial, NecklicialModule, TemplicialModule};

// ----------------------------------------------------------------------
// base change

fn base_change_quiver(theta: &RingExtension, q: &Quiver) -> Result<Quiver> {
    let mut out = Quiver::zero(theta.target(), q.vertices());
    for (a, b) in q.pairs() {
        out.set_hom(a, b, theta.base_change(q.hom(a, b))?);
    }
    Ok(out)
}

/// `k ⊗_R X`: levels and structure matrices reduced along `θ`.
pub fn base_change_templicial(theta: &RingExtension, x: &TemplicialModule) -> Result<TemplicialModule> {
    if x.ring() != theta.source() {
        return Err(Error::RingMismatch(theta.source().to_string(), x.ring().to_string()));
    }
    let levels: Vec<Quiver> =
        (0..=x.max_level()).map(|n| base_change_quiver(theta, x.level(n))).collect::<Result<_>>()?;
    let map = |m: &QuiverMorphism, src: &Quiver, tgt: &Quiver| {
        let mats = m.components().iter().map(|c| theta.reduce_matrix(c.matrix())).collect();
        QuiverMorphism::from_matrices(src.clone(), tgt.clone(), mats)
    };
    let mut faces = BTreeMap::new();
    let mut degens = BTreeMap::new();
    let mut comults = BTreeMap::new();
    for (kind, key, m) in x.structure_maps() {
        use crate::templicial::StructureKind::*;
        match kind {
            Face => {
                faces.insert(key, map(m, &levels[key.0], &levels[key.0 - 1])?);
            }
            Degeneracy => {
                degens.insert(key, map(m, &levels[key.0], &levels[key.0 + 1])?);
            }
            Comultiplication => {
                let tgt = levels[key.0].tensor(&levels[key.1])?;
                comults.insert(key, map(m, &levels[key.0 + key.1], &tgt)?);
            }
        }
    }
    TemplicialModule::new(theta.target(), x.vertices().to_vec(), levels[1..].to_vec(), faces, degens, comults)
}

/// `k ⊗_R Y`.
pub fn base_change_necklicial(theta: &RingExtension, y: &NecklicialModule) -> Result<NecklicialModule> {
    NecklicialModule::from_fn(
        theta.target(),
        y.max_level(),
        |t| theta.base_change(y.value(t)),
        |f| theta.base_change_morphism(y.action(f)),
    )
}

/// A `k`-linear necklicial module viewed over `R`.
pub fn restrict_necklicial(theta: &RingExtension, y: &NecklicialModule) -> Result<NecklicialModule> {
    NecklicialModule::from_fn(
        theta.source(),
        y.max_level(),
        |t| theta.restrict_scalars(y.value(t)),
        |f| theta.restrict_morphism(y.action(f)),
    )
}

// ----------------------------------------------------------------------
// deformations

/// A templicial module over `R` with its special fibre over `k`.
#[derive(Clone, Debug)]
pub struct DeformationPair {
    pub extension: RingExtension,
    pub deformed: TemplicialModule,
    pub special_fiber: TemplicialModule,
    /// Optional isomorphisms `(k ⊗_R X̄)_n → X_n` for `n = 1, ..., N`.
    pub witness: Option<Vec<QuiverMorphism>>,
}

impl DeformationPair {
    pub fn new(
        extension: RingExtension,
        deformed: TemplicialModule,
        special_fiber: TemplicialModule,
        witness: Option<Vec<QuiverMorphism>>,
    ) -> Result<Self> {
        if deformed.ring() != extension.source() {
            return Err(Error::RingMismatch(extension.source().to_string(), deformed.ring().to_string()));
        }
        if special_fiber.ring() != extension.target() {
            return Err(Error::RingMismatch(extension.target().to_string(), special_fiber.ring().to_string()));
        }
        if deformed.vertices() != special_fiber.vertices() {
            return Err(Error::VertexMismatch);
        }
        if deformed.max_level() != special_fiber.max_level() {
            return Err(Error::Truncation("deformation and fibre have different truncations".into()));
        }
        if let Some(w) = &witness {
            if w.len() != deformed.max_level() {
                return Err(Error::Shape("the witness needs one isomorphism per level".into()));
            }
        }
        Ok(DeformationPair { extension, deformed, special_fiber, witness })
    }

    /// The pair whose fibre is the base change itself.
    pub fn from_deformed(extension: RingExtension, deformed: TemplicialModule) -> Result<Self> {
        let fiber = base_change_templicial(&extension, &deformed)?;
        Self::new(extension, deformed, fiber, None)
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        Ok(DeformationPair {
            extension: self.extension.clone(),
            deformed: self.deformed.truncate(n)?,
            special_fiber: self.special_fiber.truncate(n)?,
            witness: self.witness.as_ref().map(|w| w[..n].to_vec()),
        })
    }
}

fn result(n: usize, j: Option<usize>, passed: bool, witness: Option<String>) -> IndexResult {
    IndexResult { hom: None, n, j, passed, cokernel: None, witness }
}

/// Levelwise flatness of the deformation and the fibre condition.
pub fn validate_deformation(pair: &DeformationPair, n_max: usize) -> Result<CheckReport> {
    let pair = pair.truncate(n_max.min(pair.deformed.max_level()))?;
    for (name, x) in [("deformation", &pair.deformed), ("special fibre", &pair.special_fiber)] {
        let r = validate_templicial(x)?;
        if !r.passed() {
            return Err(Error::Invalid(format!("{name} does not validate: {}", r.violations[0])));
        }
    }
    let mut rep = CheckReport::new("deformation");
    let flat = check_levelwise(&pair.deformed, Levelwise::Flat);
    for r in flat.results {
        rep.push(r);
    }
    let bc = base_change_templicial(&pair.extension, &pair.deformed)?;
    let fib = &pair.special_fiber;
    match &pair.witness {
        None => {
            for n in 1..=bc.max_level() {
                let same = bc.level(n) == fib.level(n);
                rep.push(result(n, None, same, (!same).then(|| format!("fibre level {n} differs"))));
            }
            if (1..=bc.max_level()).all(|n| bc.level(n) == fib.level(n)) {
                for (kind, key, m) in bc.structure_maps() {
                    let same = Some(m) == fib.structure_map(kind, key);
                    rep.push(result(key.0, Some(key.1), same, (!same).then(|| format!("fibre {kind} map {key:?} differs"))));
                }
            }
        }
        Some(w) => {
            let psi = |n: usize| -> QuiverMorphism {
                if n == 0 {
                    QuiverMorphism::identity(bc.level(0))
                } else {
                    w[n - 1].clone()
                }
            };
            for n in 1..=bc.max_level() {
                let p = psi(n);
                let ok = p.source() == bc.level(n)
                    && p.target() == fib.level(n)
                    && p.components().iter().all(|c| c.is_injective() && c.is_surjective());
                rep.push(result(n, None, ok, (!ok).then(|| format!("witness at level {n} is not an isomorphism"))));
            }
            if rep.passed() {
                use crate::templicial::StructureKind::*;
                for (kind, key, m) in bc.structure_maps() {
                    let f = fib.structure_map(kind, key).expect("same truncation");
                    let (lhs, rhs) = match kind {
                        Face => (psi(key.0 - 1).compose(m)?, f.compose(&psi(key.0))?),
                        Degeneracy => (psi(key.0 + 1).compose(m)?, f.compose(&psi(key.0))?),
                        Comultiplication => {
                            (psi(key.0).tensor(&psi(key.1))?.compose(m)?, f.compose(&psi(key.0 + key.1))?)
                        }
                    };
                    let same = lhs == rhs;
                    rep.push(result(
                        key.0,
                        Some(key.1),
                        same,
                        (!same).then(|| format!("witness does not intertwine the {kind} map {key:?}")),
                    ));
                }
            }
        }
    }
    Ok(rep)
}

// ----------------------------------------------------------------------
// extensions

/// `I ⊗_R Y` for a small extension, as a necklicial `k`-module.
pub fn ideal_tensor(theta: &RingExtension, y: &NecklicialModule) -> Result<NecklicialModule> {
    let ideal = theta.ideal_as_target_module()?;
    y.tensor_external(&ideal)
}

/// A short exact sequence `0 → sub → total → quotient → 0` of necklicial
/// modules over one ring.
#[derive(Clone, Debug)]
pub struct NecklicialExtension {
    pub sub: NecklicialModule,
    pub total: NecklicialModule,
    pub quotient: NecklicialModule,
    pub inclusion: BTreeMap<Necklace, Morphism>,
    pub projection: BTreeMap<Necklace, Morphism>,
}

impl NecklicialExtension {
    /// Necklaces where the sequence fails to be exact.
    pub fn exactness_failures(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (t, i) in &self.inclusion {
            let p = &self.projection[t];
            if !i.is_injective() {
                out.push(format!("inclusion not injective at {t}"));
            }
            if !is_exact(i, p)? {
                out.push(format!("not exact in the middle at {t}"));
            }
            if !p.is_surjective() {
                out.push(format!("projection not surjective at {t}"));
            }
        }
        Ok(out)
    }

    /// Necklace maps where inclusion or projection is not natural.
    pub fn naturality_failures(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (f, tot) in self.total.actions() {
            let (t, u) = (f.source(), f.target());
            if tot.compose(&self.inclusion[u])? != self.inclusion[t].compose(self.sub.action(f))? {
                out.push(format!("inclusion not natural along {f}"));
            }
            if self.projection[t].compose(tot)? != self.quotient.action(f).compose(&self.projection[u])? {
                out.push(format!("projection not natural along {f}"));
            }
        }
        Ok(out)
    }
}

/// `0 → I ⊗_R Ȳ → Ȳ → k ⊗_R Ȳ → 0` over `R`, for a small extension and a
/// levelwise free `Ȳ`. The sub-object is compared with
/// [`ideal_tensor`] of the fibre through an explicit map.
pub fn extension_sequence(theta: &RingExtension, ybar: &NecklicialModule) -> Result<NecklicialExtension> {
    let ideal_k = theta.ideal_as_target_module()?;
    let ideal_r = theta.restrict_scalars(&ideal_k)?;
    let gen = theta.ideal_generator();
    let r = theta.source().clone();
    for (t, m) in ybar.values() {
        if !m.is_free() {
            return Err(Error::Invalid(format!("value at {t} is not free: {m}")));
        }
    }
    let sub_mod = |m: &Module| {
        let parts: Vec<&Module> = (0..m.gens()).map(|_| &ideal_r).collect();
        Module::direct_sum_all(&r, &parts)
    };
    let sub = NecklicialModule::from_fn(
        &r,
        ybar.max_level(),
        |t| Ok(sub_mod(ybar.value(t))),
        |f| {
            let a = ybar.action(f);
            Morphism::new(sub_mod(a.domain()), sub_mod(a.codomain()), a.matrix().clone())
        },
    )?;
    let fiber = base_change_necklicial(theta, ybar)?;
    let quotient = restrict_necklicial(theta, &fiber)?;
    let mut inclusion = BTreeMap::new();
    let mut projection = BTreeMap::new();
    let comparison = ideal_tensor(theta, &fiber)?;
    for (t, m) in ybar.values() {
        let n = m.gens();
        inclusion.insert(t.clone(), Morphism::new(sub.value(t).clone(), m.clone(), Matrix::identity(&r, n).scale(&r, &gen))?);
        projection.insert(t.clone(), Morphism::new(m.clone(), quotient.value(t).clone(), Matrix::identity(&r, n))?);
        // I ⊗_k X_T → I ⊗_R X̄_T, generator to generator
        let c = theta.restrict_scalars(comparison.value(t))?;
        let phi = Morphism::new(c, sub.value(t).clone(), Matrix::identity(&r, n))?;
        if !(phi.is_injective() && phi.is_surjective()) {
            return Err(Error::Invalid(format!("ideal tensor comparison is not an isomorphism at {t}")));
        }
    }
    Ok(NecklicialExtension { sub, total: ybar.clone(), quotient, inclusion, projection })
}

/// `total_T = sub_T ⊕ quotient_T` with actions `[[sub_f, c_f], [0, quot_f]]`.
/// The cocycle gives `c_f: quotient_U → sub_T` for `f: T → U`.
pub fn build_extension(
    sub: &NecklicialModule,
    quotient: &NecklicialModule,
    cocycle: &dyn Fn(&NecklaceMap) -> Matrix,
) -> Result<NecklicialExtension> {
    if sub.ring() != quotient.ring() {
        return Err(Error::RingMismatch(sub.ring().to_string(), quotient.ring().to_string()));
    }
    if sub.max_level() != quotient.max_level() {
        return Err(Error::Truncation("sub and quotient have different truncations".into()));
    }
    let r = sub.ring().clone();
    let total = NecklicialModule::from_fn(
        &r,
        sub.max_level(),
        |t| Ok(sub.value(t).direct_sum(quotient.value(t))),
        |f| {
            let (s, q) = (sub.action(f), quotient.action(f));
            let c = cocycle(f);
            if c.shape() != (s.codomain().gens(), q.domain().gens()) {
                return Err(Error::Shape(format!("cocycle at {f} has the wrong shape")));
            }
            let top = s.matrix().hstack(&c);
            let bottom = Matrix::zeros(&r, q.codomain().gens(), s.domain().gens()).hstack(q.matrix());
            Morphism::new(s.domain().direct_sum(q.domain()), s.codomain().direct_sum(q.codomain()), top.vstack(&bottom))
        },
    )?;
    let v = validate_necklicial(&total);
    if !v.passed() {
        return Err(Error::Invalid(format!("cocycle is not functorial: {}", v.violations[0])));
    }
    let mut inclusion = BTreeMap::new();
    let mut projection = BTreeMap::new();
    for (t, m) in total.values() {
        let (a, b) = (sub.value(t).gens(), quotient.value(t).gens());
        let inc = Matrix::identity(&r, a).vstack(&Matrix::zeros(&r, b, a));
        let pr = Matrix::zeros(&r, b, a).hstack(&Matrix::identity(&r, b));
        inclusion.insert(t.clone(), Morphism::new(sub.value(t).clone(), m.clone(), inc)?);
        projection.insert(t.clone(), Morphism::new(m.clone(), quotient.value(t).clone(), pr)?);
    }
    Ok(NecklicialExtension { sub: sub.clone(), total, quotient: quotient.clone(), inclusion, projection })
}

/// The coboundary `c_f = sub_f ∘ h_U − h_T ∘ quot_f` of a family
/// `h_T: quotient_T → sub_T`.
pub fn coboundary(
    sub: &NecklicialModule,
    quotient: &NecklicialModule,
    h: &BTreeMap<Necklace, Matrix>,
) -> impl Fn(&NecklaceMap) -> Matrix {
    let r = sub.ring().clone();
    let (sub, quotient, h) = (sub.clone(), quotient.clone(), h.clone());
    move |f: &NecklaceMap| {
        let a = sub.action(f).matrix().mul(&r, &h[f.target()]);
        let b = h[f.source()].mul(&r, quotient.action(f).matrix());
        a.sub(&r, &b)
    }
}

// ----------------------------------------------------------------------
// harnesses

/// Outcome of a verification harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Hypotheses hold but the conclusion or a diagnostic fails.
    Fail,
    HypothesisFailure,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "conclusion failure",
            Outcome::HypothesisFailure => "hypothesis failure",
        })
    }
}

/// Report of a harness: hypotheses, conclusion and diagnostics kept apart.
#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub theorem: String,
    pub outcome: Outcome,
    pub hypotheses: Vec<CheckReport>,
    pub conclusion: Option<CheckReport>,
    pub diagnostics: Vec<CheckReport>,
}

impl HarnessReport {
    fn finish(theorem: &str, hypotheses: Vec<CheckReport>, conclusion: Option<CheckReport>, diagnostics: Vec<CheckReport>) -> Self {
        let outcome = if !hypotheses.iter().all(CheckReport::passed) {
            Outcome::HypothesisFailure
        } else if conclusion.as_ref().is_some_and(|c| !c.passed()) || !diagnostics.iter().all(CheckReport::passed) {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        HarnessReport { theorem: theorem.into(), outcome, hypotheses, conclusion, diagnostics }
    }

    fn hypothesis_failure(theorem: &str, hypotheses: Vec<CheckReport>) -> Self {
        Self::finish(theorem, hypotheses, None, Vec::new())
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// The first failing index of the conclusion or a diagnostic.
    pub fn first_failure(&self) -> Option<(&str, &IndexResult)> {
        self.conclusion
            .iter()
            .chain(&self.diagnostics)
            .find_map(|r| r.failures().next().map(|f| (r.property.as_str(), f)))
    }
}

impl fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.theorem, self.outcome)?;
        for h in &self.hypotheses {
            write!(f, "hypothesis {h}")?;
        }
        if let Some(c) = &self.conclusion {
            write!(f, "conclusion {c}")?;
        }
        for d in &self.diagnostics {
            write!(f, "diagnostic {d}")?;
        }
        Ok(())
    }
}

fn hom_names(x: &TemplicialModule, a: usize, b: usize) -> (String, String) {
    (x.vertices()[a].clone(), x.vertices()[b].clone())
}

/// A hypothesis that could not even be evaluated, as a failed report.
fn failed_hypothesis(property: &str, why: String) -> CheckReport {
    let mut r = CheckReport::new(property);
    r.push(IndexResult { hom: None, n: 0, j: None, passed: false, cokernel: None, witness: Some(why) });
    r
}

/// The chain of small extensions through which `θ` factors, with the base
/// changes of `X̄` to each intermediate ring (first entry `X̄` itself).
fn small_tower(pair: &DeformationPair) -> Result<(Vec<RingExtension>, Vec<TemplicialModule>)> {
    let steps = pair.extension.small_steps();
    let mut xs = vec![pair.deformed.clone()];
    for s in &steps {
        let next = base_change_templicial(s, xs.last().unwrap())?;
        xs.push(next);
    }
    Ok((steps, xs))
}

fn deformation_hypotheses(pair: &DeformationPair, n_max: usize) -> Result<CheckReport> {
    match validate_deformation(pair, n_max) {
        Ok(r) => Ok(r),
        Err(e @ Error::Invalid(_)) => Ok(failed_hypothesis("deformation", e.to_string())),
        Err(e) => Err(e),
    }
}

/// A deformation of a quasi-category is a quasi-category.
pub fn verify_thm_main(pair: &DeformationPair, n_max: usize, diagnostics: bool) -> Result<HarnessReport> {
    const NAME: &str = "deformations of quasi-categories";
    let pair = pair.truncate(n_max)?;
    let mut hyps = vec![deformation_hypotheses(&pair, n_max)?];
    if hyps[0].passed() {
        hyps.push(check_quasicategory(&pair.special_fiber, n_max)?);
    }
    if !hyps.iter().all(CheckReport::passed) {
        return Ok(HarnessReport::hypothesis_failure(NAME, hyps));
    }
    let conclusion = check_quasicategory(&pair.deformed, n_max)?;
    let mut diags = Vec::new();
    if diagnostics {
        let (steps, xs) = small_tower(&pair)?;
        let mut exact = CheckReport::new("extension-sequence");
        let mut subs = CheckReport::new("sub-weak-kan");
        let mut quots = CheckReport::new("quotient-weak-kan");
        let mut tots = CheckReport::new("total-weak-kan");
        for (k, step) in steps.iter().enumerate() {
            let x = &xs[k];
            for (a, b) in x.level(0).pairs() {
                let hom = hom_names(x, a, b);
                let ybar = hom_necklicial_at(x, a, b)?;
                let ext = extension_sequence(step, &ybar)?;
                let mut fails = ext.exactness_failures()?;
                fails.extend(ext.naturality_failures()?);
                let mut r = CheckReport::new("extension-sequence");
                r.push(IndexResult {
                    hom: None,
                    n: n_max,
                    j: Some(k),
                    passed: fails.is_empty(),
                    cokernel: None,
                    witness: (!fails.is_empty()).then(|| format!("step {step}: {}", fails.join("; "))),
                });
                exact.absorb(r, hom.clone());
                // restriction along R → k creates limits and reflects
                // surjections, so the two ends are checked k-linearly
                let fiber = base_change_necklicial(step, &ybar)?;
                subs.absorb(check_weak_kan(&ideal_tensor(step, &fiber)?, n_max)?, hom.clone());
                quots.absorb(check_weak_kan(&fiber, n_max)?, hom.clone());
                tots.absorb(check_weak_kan(&ext.total, n_max)?, hom);
            }
        }
        exact.notes.push(format!("small steps: {}", steps.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")));
        diags.extend([exact, subs, quots, tots]);
    }
    Ok(HarnessReport::finish(NAME, hyps, Some(conclusion), diags))
}

/// `X_•(a,b) ⊗ M` is weak Kan for a levelwise flat quasi-category `X`.
pub fn verify_wings_tensor(x: &TemplicialModule, m: &Module, n_max: usize, diagnostics: bool) -> Result<HarnessReport> {
    const NAME: &str = "tensoring flat quasi-categories";
    if m.ring() != x.ring() {
        return Err(Error::RingMismatch(x.ring().to_string(), m.ring().to_string()));
    }
    let x = x.truncate(n_max)?;
    let hyps = vec![check_quasicategory(&x, n_max)?, check_levelwise(&x, Levelwise::Flat)];
    if !hyps.iter().all(CheckReport::passed) {
        return Ok(HarnessReport::hypothesis_failure(NAME, hyps));
    }
    let mut conclusion = CheckReport::new("weak-kan of tensor");
    let mut comparison = CheckReport::new("wings-tensor-comparison");
    let mut pullbacks = CheckReport::new("flat-pullback");
    let id_m = Morphism::identity(m);
    for (a, b) in x.level(0).pairs() {
        let hom = hom_names(&x, a, b);
        let y = hom_necklicial_at(&x, a, b)?;
        let ym = y.tensor_external(m)?;
        conclusion.absorb(check_weak_kan(&ym, n_max)?, hom.clone());
        if !diagnostics {
            continue;
        }
        let mut cmp = CheckReport::new("wings-tensor-comparison");
        for n in 2..=n_max {
            for i in 0..n {
                let w = truncated_wing_object(&y, n, i)?;
                let wm = truncated_wing_object(&ym, n, i)?;
                let src = w.module.tensor(m)?;
                let u = if w.objects.is_empty() {
                    Morphism::zero(&src, &wm.module)
                } else {
                    let legs: Vec<Morphism> =
                        w.limit.cone.iter().map(|c| c.tensor(&id_m)).collect::<Result<_>>()?;
                    wm.limit.factor(&legs)?
                };
                let an = u.analyze();
                let ok = an.injective && an.surjective;
                cmp.push(IndexResult {
                    hom: None,
                    n,
                    j: Some(i),
                    passed: ok,
                    cokernel: (!an.surjective).then(|| an.cokernel.normalized()),
                    witness: (!an.injective).then(|| format!("kernel {}", an.kernel.normalized())),
                });
            }
            pullbacks.absorb(check_wedge_pullbacks(&ym, n)?, hom.clone());
        }
        comparison.absorb(cmp, hom);
    }
    let diags = if diagnostics { vec![comparison, pullbacks] } else { Vec::new() };
    Ok(HarnessReport::finish(NAME, hyps, Some(conclusion), diags))
}

/// The short exact sequences of the 3×3 diagram at one `(a, b, n)`, for a
/// small step `θ: R → k` and `X̄` over `R`; returns the failures.
fn three_by_three(theta: &RingExtension, xbar: &TemplicialModule, fiber: &TemplicialModule, n: usize, a: usize, b: usize) -> Result<Vec<String>> {
    let r = theta.source().clone();
    let ideal = theta.restrict_scalars(&theta.ideal_as_target_module()?)?;
    let gen = theta.ideal_generator();
    let ds = degenerate_subobject(xbar, n)?;
    let can = ds.canonical.component(a, b).clone();
    let an = can.analyze();
    let proj = an.cokernel_projection.clone();
    let mid = [can.domain().clone(), can.codomain().clone(), an.cokernel.clone()];
    let row_maps = [can.clone(), proj.clone()];

    // I ⊗_R (-), the map I ⊗ M → M, and M → k ⊗ M viewed over R
    let top = |m: &Module| m.tensor(&ideal);
    let bottom = |m: &Module| theta.restrict_scalars(&theta.base_change(m)?);
    let iota = |m: &Module| Morphism::new(top(m)?, m.clone(), Matrix::identity(&r, m.gens()).scale(&r, &gen));
    let rho = |m: &Module| Morphism::new(m.clone(), bottom(m)?, Matrix::identity(&r, m.gens()));
    let top_map = |f: &Morphism| f.tensor(&Morphism::identity(&ideal));
    let bottom_map = |f: &Morphism| -> Result<Morphism> {
        Morphism::new(bottom(f.domain())?, bottom(f.codomain())?, f.matrix().clone())
    };

    let mut fails = Vec::new();
    let mut short_exact = |name: &str, f: &Morphism, g: &Morphism| -> Result<()> {
        if !f.is_injective() {
            fails.push(format!("{name}: first map not injective"));
        }
        if !is_exact(f, g)? {
            fails.push(format!("{name}: not exact in the middle"));
        }
        if !g.is_surjective() {
            fails.push(format!("{name}: last map not surjective"));
        }
        Ok(())
    };
    let top_row = [top_map(&row_maps[0])?, top_map(&row_maps[1])?];
    let bottom_row = [bottom_map(&row_maps[0])?, bottom_map(&row_maps[1])?];
    short_exact("row I⊗E", &top_row[0], &top_row[1])?;
    short_exact("row E over R", &row_maps[0], &row_maps[1])?;
    short_exact("row E over k", &bottom_row[0], &bottom_row[1])?;
    let names = ["deg", "level", "nd"];
    let iotas: Vec<Morphism> = mid.iter().map(iota).collect::<Result<_>>()?;
    let rhos: Vec<Morphism> = mid.iter().map(rho).collect::<Result<_>>()?;
    for k in 0..3 {
        short_exact(&format!("column {}", names[k]), &iotas[k], &rhos[k])?;
    }
    for k in 0..2 {
        if iotas[k + 1].compose(&top_row[k])? != row_maps[k].compose(&iotas[k])? {
            fails.push(format!("upper square {} does not commute", k + 1));
        }
        if rhos[k + 1].compose(&row_maps[k])? != bottom_row[k].compose(&rhos[k])? {
            fails.push(format!("lower square {} does not commute", k + 1));
        }
    }
    // E_X agrees with k ⊗ E_X̄ on invariant factors
    let dsf = degenerate_subobject(fiber, n)?;
    let fiber_mods =
        [dsf.degenerate.hom(a, b).clone(), fiber.level(n).hom(a, b).clone(), dsf.nondegenerate.hom(a, b).clone()];
    for k in 0..3 {
        if !theta.base_change(&mid[k])?.is_isomorphic(&fiber_mods[k]) {
            fails.push(format!("k ⊗ {} differs from the fibre's", names[k]));
        }
    }
    if !an.cokernel.is_flat() {
        fails.push(format!("X̄^nd_{n} = {} is not flat, Tor does not vanish", an.cokernel.normalized()));
    }
    Ok(fails)
}

/// A deformation of a deg-projective templicial module is deg-projective.
pub fn verify_degproj_lift(pair: &DeformationPair, n_max: usize, diagnostics: bool) -> Result<HarnessReport> {
    const NAME: &str = "deg-projectivity lifts along deformations";
    let pair = pair.truncate(n_max)?;
    let mut hyps = vec![deformation_hypotheses(&pair, n_max)?];
    if hyps[0].passed() {
        hyps.push(check_deg_projective(&pair.special_fiber, n_max)?);
    }
    if !hyps.iter().all(CheckReport::passed) {
        return Ok(HarnessReport::hypothesis_failure(NAME, hyps));
    }
    let conclusion = check_deg_projective(&pair.deformed, n_max)?;
    let mut diags = Vec::new();
    if diagnostics {
        let (steps, xs) = small_tower(&pair)?;
        let mut rep = CheckReport::new("3x3-exactness");
        for (k, step) in steps.iter().enumerate() {
            for n in 1..=n_max {
                for (a, b) in xs[k].level(0).pairs() {
                    let fails = three_by_three(step, &xs[k], &xs[k + 1], n, a, b)?;
                    rep.push(IndexResult {
                        hom: Some(hom_names(&xs[k], a, b)),
                        n,
                        j: None,
                        passed: fails.is_empty(),
                        cokernel: None,
                        witness: (!fails.is_empty()).then(|| format!("step {step}: {}", fails.join("; "))),
                    });
                }
            }
        }
        diags.push(rep);
    }
    Ok(HarnessReport::finish(NAME, hyps, Some(conclusion), diags))
}

/// Weak Kan for the three terms of an extension; the two ends are the
/// hypotheses, the middle term the conclusion.
pub fn check_extension_weak_kan(ext: &NecklicialExtension, n_max: usize) -> Result<HarnessReport> {
    let mut sub = check_weak_kan(&ext.sub, n_max)?;
    sub.property = "sub weak-kan".into();
    let mut quot = check_weak_kan(&ext.quotient, n_max)?;
    quot.property = "quotient weak-kan".into();
    let hyps = vec![sub, quot];
    if !hyps.iter().all(CheckReport::passed) {
        return Ok(HarnessReport::hypothesis_failure("extensions of weak Kan modules", hyps));
    }
    let mut tot = check_weak_kan(&ext.total, n_max)?;
    tot.property = "total weak-kan".into();
    Ok(HarnessReport::finish("extensions of weak Kan modules", hyps, Some(tot), Vec::new()))
}

/// Over `F_p[e]/(e²)`, a levelwise free `Ȳ` seen as an `F_p`-module is an
/// extension of `k ⊗ Ȳ` by itself; returns `(fibre, cocycle)` where the
/// cocycle is the `e`-part of each action.
pub fn dual_number_extension(theta: &RingExtension, ybar: &NecklicialModule) -> Result<(NecklicialModule, BTreeMap<NecklaceMap, Matrix>)> {
    let fiber = base_change_necklicial(theta, ybar)?;
    let k = theta.target().clone();
    let p = k.prime().ok_or_else(|| Error::UnsupportedRing("needs a prime field".into()))?;
    if theta.source() != &crate::coeff::Ring::dual_chain(p, 2)? || !k.is_field() {
        return Err(Error::InvalidExtension("expected F_p[e]/(e^2) -> F_p".into()));
    }
    let mut cocycle = BTreeMap::new();
    for (f, a) in ybar.actions() {
        if !a.domain().factors().iter().all(Factor::is_free) || !a.codomain().factors().iter().all(Factor::is_free) {
            return Err(Error::Invalid(format!("action at {f} is not between free modules")));
        }
        let m = a.matrix().map(|x| match x {
            crate::coeff::Elem::Res(v) => crate::coeff::Elem::Res(v / p),
            other => other.clone(),
        });
        cocycle.insert(f.clone(), m);
    }
    Ok((fiber, cocycle))
}
