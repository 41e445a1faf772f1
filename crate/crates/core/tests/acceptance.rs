//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every tolerance is pinned below.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use templikit::coeff::{Elem, Matrix, Module, Ring, RingExtension};
use templikit::constructors::{
    free_templicial, generate, nerve, free_p, free_p_deformed, shape_p, s0_times_2, LinearCategory, Profile,
    SimplicialSetTrunc,
};
use templikit::deform::{
    build_extension, check_extension_weak_kan, coboundary, dual_number_extension, verify_degproj_lift,
    verify_thm_main, verify_wings_tensor, DeformationPair, Outcome,
};
use templikit::kan::{
    check_deg_projective, check_lifts_wings, check_quasicategory, check_weak_kan, degenerate_subobject, ez_check,
};
use templikit::necklace::{
    injective_into_simplex, necklace_maps, necklaces, necklaces_up_to, surjections,
    Necklace, NecklaceMap,
};
use templikit::quiver::QuiverMorphism;
use templikit::templicial::{
    all_necklace_maps, hom_necklicial_at, validate_necklicial, validate_templicial, NecklicialModule, StructureKind,
    TemplicialModule,
};

/// Truncation level for the property criteria.
const MAX_LEVEL: usize = 4;
/// Necklace counts are checked for `1 ≤ p ≤ NECKLACE_P`.
const NECKLACE_P: usize = 8;
/// Injective maps into `Δ^n` are counted for `1 ≤ n ≤ INJECTIVE_N`.
const INJECTIVE_N: usize = 6;
/// Factorizations are checked exhaustively up to this dimension.
const FACTOR_DIM: usize = 4;
/// Minimum size of the wings/horns corpus.
const MIN_CORPUS: usize = 20;
/// Divergences tolerated between weak Kan and wing lifting.
const MAX_DIVERGENCES: usize = 0;
/// Truncation for the extension criterion.
const EXTENSION_LEVEL: usize = 3;
/// Minimum number of nontrivial cocycle extensions.
const MIN_COCYCLES: usize = 5;
/// Truncation for the deg-projectivity lift.
const DEGPROJ_LEVEL: usize = 3;
/// Number of single-entry corruptions and how many may pass silently.
const MUTATIONS: usize = 50;
const MAX_SILENT: usize = 0;
/// Seed for corpus generation and mutation sampling.
const SEED: u64 = 20_240_611;
/// Wall-clock budget per criterion in seconds.
const BUDGET_SECS: f64 = 60.0;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn f(p: u64) -> Ring {
    Ring::prime_field(p).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    // Pascal's triangle, independent of any closed form in the library
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn chain_poset(max_level: usize) -> SimplicialSetTrunc {
    SimplicialSetTrunc::poset_nerve(vec!["0".into(), "1".into(), "2".into()], &[(0, 1), (1, 2)], max_level).unwrap()
}

/// `F_p[x]/(x^2 + c_1 x + c_0)` with `lower = [c_0, c_1]`.
fn quadratic(ring: &Ring, lower: [Elem; 2]) -> LinearCategory {
    LinearCategory::polynomial_algebra(ring, &lower).unwrap()
}

fn dual_numbers_nerve(n: usize) -> TemplicialModule {
    let k = f(3);
    nerve(&quadratic(&k, [k.zero(), k.zero()]), n).unwrap()
}

// ----------------------------------------------------------------------
// 1

fn criterion_1() -> Verdict {
    for p in 1..=NECKLACE_P {
        let lib = necklaces(p).len();
        let brute = (0u32..1 << (p - 1)).count();
        ensure(lib == brute && lib == 1 << (p - 1), || format!("necklaces({p}) = {lib}, expected {brute}"))?;
    }
    for n in 1..=INJECTIVE_N {
        let lib = injective_into_simplex(n).len();
        // image S ⊆ [n] with 0, n ∈ S, and joints J ⊆ S with 0, n ∈ J
        let mut brute = 0usize;
        for s in 0u32..1 << (n + 1) {
            if s & 1 == 0 || s >> n & 1 == 0 {
                continue;
            }
            for j in 0u32..1 << (n + 1) {
                if j & !s == 0 && j & 1 == 1 && j >> n & 1 == 1 {
                    brute += 1;
                }
            }
        }
        let closed = 3usize.pow(n as u32 - 1);
        ensure(lib == brute && brute == closed, || format!("injective into Δ^{n}: lib {lib}, brute {brute}, 3^(n-1) {closed}"))?;
    }
    let maps = all_necklace_maps(FACTOR_DIM);
    let mids = necklaces_up_to(FACTOR_DIM);
    for m in &maps {
        let (active, inert) = m.factor();
        ensure(active.is_active() && inert.is_inert(), || format!("factorization of {m} has the wrong kinds"))?;
        ensure(inert.after(&active).ok().as_ref() == Some(m), || format!("factorization of {m} does not compose back"))?;
        let mut count = 0;
        for v in &mids {
            let Ok(i) = NecklaceMap::inert(v, m.target()) else { continue };
            for a in necklace_maps(m.source(), v) {
                if a.is_active() && i.after(&a).ok().as_ref() == Some(m) {
                    count += 1;
                }
            }
        }
        ensure(count == 1, || format!("{m} has {count} active-inert factorizations"))?;
    }
    Ok(format!("p ≤ {NECKLACE_P}, n ≤ {INJECTIVE_N}, {} maps factor uniquely", maps.len()))
}

// ----------------------------------------------------------------------
// 2

fn criterion_2() -> Verdict {
    let x = dual_numbers_nerve(MAX_LEVEL);
    let rep = ok(check_quasicategory(&x, MAX_LEVEL))?;
    ensure(rep.passed(), || format!("nerve is not a quasi-category: {}", rep.failures().next().unwrap()))?;
    let mut count = 0;
    for k in 1..MAX_LEVEL {
        for l in 1..=MAX_LEVEL - k {
            for c in x.comultiplication(k, l).components() {
                let an = c.analyze();
                ensure(an.injective && an.surjective, || format!("μ_{{{k},{l}}} is not invertible"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{} horn indices pass, {count} μ components invertible", rep.results.len()))
}

// ----------------------------------------------------------------------
// 3

/// Cokernel rank of the `(2,1)` horn at `(a, c)` for a free module on a
/// simplicial set: spines `a → x → c` through a third vertex, minus the
/// nondegenerate 2-simplices filling them.
fn horn_cokernel_oracle(k: &SimplicialSetTrunc, a: usize, c: usize) -> usize {
    let edges: Vec<&Vec<usize>> = k.nondegenerate(1);
    let has = |u: usize, v: usize| edges.iter().any(|e| e[0] == u && e[1] == v);
    let spines = (0..k.vertices().len()).filter(|&x| x != a && x != c && has(a, x) && has(x, c)).count();
    let fillers = k.nondegenerate(2).iter().filter(|s| s[0] == a && s[2] == c).count();
    spines - fillers
}

fn criterion_3() -> Verdict {
    let good = ok(free_templicial(&chain_poset(MAX_LEVEL), &f(2), MAX_LEVEL))?;
    let rep = ok(check_quasicategory(&good, MAX_LEVEL))?;
    ensure(rep.passed(), || "free functor on 0<1<2 is not a quasi-category".into())?;
    let shape = ok(shape_p(MAX_LEVEL))?;
    let x = ok(free_p(&f(2), MAX_LEVEL))?;
    let rep = ok(check_quasicategory(&x, MAX_LEVEL))?;
    let fails: Vec<_> = rep.failures().collect();
    ensure(fails.len() == 1, || format!("expected exactly one failure, got {}", fails.len()))?;
    let r = fails[0];
    ensure(r.hom == Some(("a".into(), "c".into())) && (r.n, r.j) == (2, Some(1)), || format!("failure at {r}"))?;
    let (a, c) = (shape.vertices().iter().position(|v| v == "a").unwrap(), shape.vertices().iter().position(|v| v == "c").unwrap());
    let expected = horn_cokernel_oracle(&shape, a, c);
    let got = r.cokernel.as_ref().map_or(0, |m| m.gens());
    ensure(expected == 1 && got == expected, || format!("cokernel rank {got}, oracle {expected}"))?;
    Ok(format!("F̃(0<1<2) passes; P fails only at {r}"))
}

// ----------------------------------------------------------------------
// 4

fn free_corpus(n: usize) -> Vec<(String, SimplicialSetTrunc, Ring)> {
    let z = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![
        ("Δ^0".to_string(), SimplicialSetTrunc::simplex(0, n), z.clone()),
        ("Δ^1".to_string(), SimplicialSetTrunc::simplex(1, n), z.clone()),
        ("Δ^2".to_string(), SimplicialSetTrunc::simplex(2, n), f(2)),
        ("Δ^3".to_string(), SimplicialSetTrunc::simplex(3, n), "Z/8".parse().unwrap()),
        ("∂Δ^2".to_string(), SimplicialSetTrunc::boundary(2, n), z.clone()),
        ("Λ^2_1".to_string(), SimplicialSetTrunc::horn(2, 1, n).unwrap(), f(3)),
        ("0<1<2".to_string(), chain_poset(n), z.clone()),
        ("P".to_string(), shape_p(n).unwrap(), f(2)),
    ];
    for i in 0..2 {
        let k = templikit::constructors::random_poset_nerve(&mut rng, 3, n).unwrap();
        out.push((format!("random poset {i}"), k, z.clone()));
    }
    out
}

fn criterion_4() -> Verdict {
    let s0 = ok(s0_times_2(2))?;
    let rep = ok(check_deg_projective(&s0, 2))?;
    let first = rep.failures().next().ok_or("s0_times_2 is deg-projective")?;
    let cok = first.cokernel.as_ref().map(|m| m.to_string()).unwrap_or_default();
    ensure(first.n == 1 && cok == "Z/2", || format!("s0_times_2 first fails at {first}"))?;

    // surjections [n] ↠ [m] against Pascal's triangle
    for n in 0..=MAX_LEVEL {
        for m in 0..=n {
            let lib = surjections(n).iter().filter(|s| s.target_dim() == m).count();
            ensure(lib == binomial(n, m), || format!("surjections [{n}] -> [{m}]: {lib}"))?;
        }
    }
    let corpus = free_corpus(MAX_LEVEL);
    for (name, k, ring) in &corpus {
        let x = ok(free_templicial(k, ring, MAX_LEVEL))?;
        ensure(ok(check_deg_projective(&x, MAX_LEVEL))?.passed(), || format!("F̃({name}) is not deg-projective"))?;
        ensure(ok(ez_check(&x, MAX_LEVEL))?.passed(), || format!("EZ fails on F̃({name})"))?;
        let nd = |m: usize, a: usize, b: usize| k.nondegenerate(m).iter().filter(|s| s[0] == a && s[m] == b).count();
        for n in 1..=MAX_LEVEL {
            let ds = ok(degenerate_subobject(&x, n))?;
            for (a, b) in x.level(0).pairs() {
                let rank = x.level(n).hom(a, b).gens();
                let oracle: usize = (0..=n).map(|m| binomial(n, m) * nd(m, a, b)).sum();
                ensure(rank == oracle, || format!("F̃({name}): rank X_{n}({a},{b}) = {rank}, oracle {oracle}"))?;
                let got = ds.nondegenerate.hom(a, b).gens();
                ensure(got == nd(n, a, b), || format!("F̃({name}): X^nd_{n}({a},{b}) has rank {got}"))?;
            }
        }
    }
    let edge = ok(free_templicial(&SimplicialSetTrunc::simplex(1, 2), &Ring::integers(), 2))?;
    ensure(edge.level(2).hom(0, 1).gens() == 2, || "rank X_2(0,1) of F̃(Δ^1) is not 2".into())?;
    Ok(format!("s0_times_2 fails at n=1 with Z/2; {} free instances pass with EZ ranks", corpus.len()))
}

// ----------------------------------------------------------------------
// 5

enum Item {
    Templicial(TemplicialModule),
    Tensor(TemplicialModule, Module),
}

fn wings_corpus() -> Vec<(String, Item)> {
    use Item::*;
    let n = MAX_LEVEL;
    let z = Ring::integers();
    let r = |s: &str| -> Ring { s.parse().unwrap() };
    let (f2, f3) = (f(2), f(3));
    let alg = |ring: &Ring, c0: &str, c1: &str| {
        let c = quadratic(ring, [ring.parse_elem(c0).unwrap(), ring.parse_elem(c1).unwrap()]);
        nerve(&c, n).unwrap()
    };
    let free = |k: SimplicialSetTrunc, ring: &Ring| free_templicial(&k, ring, n).unwrap();
    let perturbed = |seed: u64, x: TemplicialModule| generate(seed, &Profile::RandomPerturbation(Box::new(x)), n).unwrap();
    let poset_cat = LinearCategory::poset(&Ring::rationals(), vec!["0".into(), "1".into(), "2".into()], &|a, b| a <= b).unwrap();
    let d2 = || SimplicialSetTrunc::simplex(2, n);
    vec![
        ("nerve F_3[x]/(x^2)".into(), Templicial(alg(&f3, "0", "0"))),
        ("nerve F_3[x]/(x^2-1)".into(), Templicial(alg(&f3, "2", "0"))),
        ("nerve F_2[x]/(x^2+x+1)".into(), Templicial(alg(&f2, "1", "1"))),
        ("nerve random F_5 algebra".into(), Templicial(generate(SEED, &Profile::NerveOfRandomAlgebra { p: 5, rank: 2 }, n).unwrap())),
        ("nerve Q-linear poset 0<1<2".into(), Templicial(nerve(&poset_cat, n).unwrap())),
        ("free Δ^2 over Z".into(), Templicial(free(d2(), &z))),
        ("free 0<1<2 over F_2".into(), Templicial(free(chain_poset(n), &f2))),
        ("free Λ^2_1 over F_3".into(), Templicial(free(SimplicialSetTrunc::horn(2, 1, n).unwrap(), &f3))),
        ("free ∂Δ^2 over Z".into(), Templicial(free(SimplicialSetTrunc::boundary(2, n), &z))),
        ("free random quasi-category over Z".into(), Templicial(generate(SEED + 1, &Profile::FreeOnRandomQuasicat { ring: z.clone(), elements: 3 }, n).unwrap())),
        ("free random quasi-category over Z/8".into(), Templicial(generate(SEED + 2, &Profile::FreeOnRandomQuasicat { ring: r("Z/8"), elements: 3 }, n).unwrap())),
        ("deformed P over F_2[e]/(e^2)".into(), Templicial(free_p_deformed(2, n).unwrap())),
        ("nerve F_3[e]/(e^2)[x]/(x^2-e)".into(), Templicial(alg(&r("F_3[e]/(e^2)"), "2e", "0"))),
        ("free Δ^2 over F_2[e]/(e^2)".into(), Templicial(free(d2(), &r("F_2[e]/(e^2)")))),
        ("perturbed nerve F_3[x]/(x^2)".into(), Templicial(perturbed(SEED + 3, alg(&f3, "0", "0")))),
        ("perturbed free Δ^2 over Z".into(), Templicial(perturbed(SEED + 4, free(d2(), &z)))),
        ("perturbed P over F_2".into(), Templicial(perturbed(SEED + 5, free_p(&f2, n).unwrap()))),
        ("P over F_2".into(), Templicial(free_p(&f2, n).unwrap())),
        ("s0_times_2".into(), Templicial(s0_times_2(n).unwrap())),
        ("nerve F_3[x]/(x^2) ⊗ F_3^2".into(), Tensor(alg(&f3, "0", "0"), Module::free(&f3, 2))),
        ("P ⊗ F_2^2".into(), Tensor(free_p(&f2, n).unwrap(), Module::free(&f2, 2))),
        ("free Δ^2 over Z ⊗ Z/2".into(), Tensor(free(d2(), &z), Module::new(&z, vec![templikit::coeff::Factor::torsion(2)]).unwrap())),
    ]
}

fn criterion_5() -> Verdict {
    let corpus = wings_corpus();
    ensure(corpus.len() >= MIN_CORPUS, || format!("corpus has only {} instances", corpus.len()))?;
    let mut divergences = Vec::new();
    let (mut compared, mut negatives) = (0, 0);
    for (name, item) in &corpus {
        let (x, m) = match item {
            Item::Templicial(x) => (x, None),
            Item::Tensor(x, m) => (x, Some(m)),
        };
        let v = ok(validate_templicial(x))?;
        ensure(v.passed(), || format!("{name} does not validate"))?;
        let mut negative = false;
        for (a, b) in x.level(0).pairs() {
            let y = ok(hom_necklicial_at(x, a, b))?;
            let y = match m {
                Some(m) => ok(y.tensor_external(m))?,
                None => y,
            };
            for n in 2..=MAX_LEVEL {
                let yn = ok(y.truncate(n))?;
                let kan = ok(check_weak_kan(&yn, n))?.passed();
                let wings = ok(check_lifts_wings(&yn, n))?.passed();
                compared += 1;
                negative |= !kan;
                if kan != wings {
                    divergences.push(format!("{name} ({a},{b}) N={n}: weak Kan {kan}, wings {wings}"));
                }
            }
        }
        negatives += negative as usize;
    }
    ensure(divergences.len() <= MAX_DIVERGENCES, || divergences.join("; "))?;
    ensure(negatives > 0, || "corpus has no negative instance".into())?;
    Ok(format!("{} instances, {compared} (hom, N) comparisons, {negatives} negative, 0 divergences", corpus.len()))
}

// ----------------------------------------------------------------------
// 6

fn criterion_6() -> Verdict {
    let x = dual_numbers_nerve(MAX_LEVEL);
    let mut lines = Vec::new();
    let mut cases: Vec<(String, TemplicialModule, Module)> =
        (1..=3).map(|r| (format!("nerve ⊗ F_3^{r}"), x.clone(), Module::free(&f(3), r))).collect();
    let z = Ring::integers();
    let free_z = ok(free_templicial(&chain_poset(MAX_LEVEL), &z, MAX_LEVEL))?;
    cases.push(("free 0<1<2 over Z ⊗ Z/2".into(), free_z, Module::new(&z, vec![templikit::coeff::Factor::torsion(2)]).unwrap()));
    for (name, x, m) in cases {
        let rep = ok(verify_wings_tensor(&x, &m, MAX_LEVEL, true))?;
        ensure(rep.outcome == Outcome::Pass, || format!("{name}: {rep}"))?;
        let iso = rep.diagnostics.iter().find(|d| d.property == "wings-tensor-comparison").ok_or("missing comparison")?;
        // one comparison per hom and 0 ≤ i < n ≤ MAX_LEVEL, n ≥ 2
        let per_hom: usize = (2..=MAX_LEVEL).sum();
        let homs = x.level(0).pairs().count();
        ensure(iso.results.len() == per_hom * homs, || format!("{name}: {} comparisons", iso.results.len()))?;
        lines.push(name);
    }
    Ok(format!("pass for {}", lines.join(", ")))
}

// ----------------------------------------------------------------------
// 7

fn criterion_7() -> Verdict {
    let n = EXTENSION_LEVEL;
    let f2 = f(2);
    let r: Ring = "F_2[e]/(e^2)".parse().unwrap();
    let theta = ok(RingExtension::new(&r, &f2))?;
    let base = |c0: &str, c1: &str| {
        nerve(&quadratic(&f2, [f2.parse_elem(c0).unwrap(), f2.parse_elem(c1).unwrap()]), n).unwrap()
    };
    let y1 = ok(hom_necklicial_at(&base("0", "0"), 0, 0))?;
    let y2 = ok(hom_necklicial_at(&ok(free_templicial(&SimplicialSetTrunc::simplex(2, n), &f2, n))?, 0, 2))?;
    let y3 = ok(hom_necklicial_at(&base("1", "1"), 0, 0))?;
    for (i, y) in [&y1, &y2, &y3].into_iter().enumerate() {
        ensure(ok(check_weak_kan(y, n))?.passed(), || format!("summand {i} is not weak Kan"))?;
    }
    // direct sums: zero cocycle
    let mut sums = 0;
    for (s, q) in [(&y1, &y1), (&y1, &y2), (&y2, &y3)] {
        let zero = |g: &NecklaceMap| Matrix::zeros(&f2, s.action(g).codomain().gens(), q.action(g).domain().gens());
        let ext = ok(build_extension(s, q, &zero))?;
        let rep = ok(check_extension_weak_kan(&ext, n))?;
        ensure(rep.outcome == Outcome::Pass, || format!("direct sum fails: {rep}"))?;
        sums += 1;
    }
    // nontrivial cocycles: e-parts of deformations over F_2[e]/(e^2)
    let mut cocycles = 0;
    for (c0, c1) in [("e", "0"), ("1+e", "1"), ("e", "1"), ("0", "e"), ("1", "e"), ("1+e", "e")] {
        let c = quadratic(&r, [r.parse_elem(c0).unwrap(), r.parse_elem(c1).unwrap()]);
        let x = ok(nerve(&c, n))?;
        let ybar = ok(hom_necklicial_at(&x, 0, 0))?;
        let (fiber, cocycle) = ok(dual_number_extension(&theta, &ybar))?;
        ensure(cocycle.values().any(|m| !m.is_zero(&f2)), || format!("cocycle of x^2+({c1})x+({c0}) vanishes"))?;
        let ext = ok(build_extension(&fiber, &fiber, &|g| cocycle[g].clone()))?;
        ensure(ext.exactness_failures().map_err(|e| e.to_string())?.is_empty(), || "not exact".into())?;
        let rep = ok(check_extension_weak_kan(&ext, n))?;
        ensure(rep.outcome == Outcome::Pass, || format!("extension x^2+({c1})x+({c0}): {rep}"))?;
        cocycles += 1;
    }
    // coboundary cocycles on Y1 ⊕ Y2
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..2 {
        let h: BTreeMap<Necklace, Matrix> = y1
            .values()
            .iter()
            .map(|(t, m)| {
                let (rows, cols) = (m.gens(), y2.value(t).gens());
                let data = (0..rows * cols).map(|_| f2.from_i64(rng.gen_range(0..2))).collect();
                (t.clone(), Matrix::from_vec(rows, cols, data))
            })
            .collect();
        let c = coboundary(&y1, &y2, &h);
        let ext = ok(build_extension(&y1, &y2, &c))?;
        let rep = ok(check_extension_weak_kan(&ext, n))?;
        ensure(rep.outcome == Outcome::Pass, || format!("coboundary extension: {rep}"))?;
        cocycles += 1;
    }
    ensure(cocycles >= MIN_COCYCLES, || format!("only {cocycles} cocycle extensions"))?;
    Ok(format!("{sums} direct sums and {cocycles} nonzero cocycle extensions are weak Kan at N={n}"))
}

// ----------------------------------------------------------------------
// 8

fn criterion_8() -> Verdict {
    let r: Ring = "F_3[e]/(e^2)".parse().unwrap();
    let k = f(3);
    let deformed = ok(nerve(&quadratic(&r, [r.parse_elem("2e").unwrap(), r.zero()]), MAX_LEVEL))?;
    let fiber = dual_numbers_nerve(MAX_LEVEL);
    let nerve_pair = ok(DeformationPair::new(ok(RingExtension::new(&r, &k))?, deformed, fiber, None))?;

    let z8: Ring = "Z/8".parse().unwrap();
    let z2: Ring = "Z/2".parse().unwrap();
    let theta = ok(RingExtension::new(&z8, &z2))?;
    ensure(theta.small_steps().len() == 2, || format!("Z/8 -> Z/2 has {} small steps", theta.small_steps().len()))?;
    let shape = chain_poset(MAX_LEVEL);
    let free8 = ok(free_templicial(&shape, &z8, MAX_LEVEL))?;
    let free2 = ok(free_templicial(&shape, &z2, MAX_LEVEL))?;
    let chain_pair = ok(DeformationPair::new(theta.clone(), free8.clone(), free2, None))?;
    let perturbed = ok(generate(SEED + 6, &Profile::RandomPerturbation(Box::new(free8)), MAX_LEVEL))?;
    let perturbed_pair = ok(DeformationPair::from_deformed(theta, perturbed))?;

    let mut out = Vec::new();
    for (name, pair) in [("nerve pair", nerve_pair), ("Z/8 free pair", chain_pair), ("perturbed Z/8 pair", perturbed_pair)] {
        let rep = ok(verify_thm_main(&pair, MAX_LEVEL, true))?;
        ensure(rep.outcome == Outcome::Pass, || format!("{name}: {rep}"))?;
        let props: Vec<&str> = rep.diagnostics.iter().map(|d| d.property.as_str()).collect();
        for want in ["extension-sequence", "sub-weak-kan", "quotient-weak-kan"] {
            ensure(props.contains(&want), || format!("{name}: missing diagnostic {want}"))?;
        }
        out.push(name);
    }
    Ok(format!("verify main passes at N={MAX_LEVEL} with diagnostics for {}", out.join(", ")))
}

// ----------------------------------------------------------------------
// 9

fn criterion_9() -> Verdict {
    let x = ok(free_p_deformed(2, DEGPROJ_LEVEL))?;
    let pair = ok(DeformationPair::from_deformed(ok(RingExtension::new(x.ring(), &f(2)))?, x))?;
    let rep = ok(verify_degproj_lift(&pair, DEGPROJ_LEVEL, true))?;
    ensure(rep.outcome == Outcome::Pass, || format!("{rep}"))?;
    let d = rep.diagnostics.iter().find(|d| d.property == "3x3-exactness").ok_or("missing 3x3 diagnostic")?;
    ensure(!d.results.is_empty() && d.passed(), || "3x3 diagram not exact".into())?;
    Ok(format!("3x3 diagram exact at {} (hom, n) indices", d.results.len()))
}

// ----------------------------------------------------------------------
// 10

/// Replace one entry of a component of `m`.
fn mutate(m: &QuiverMorphism, comp: usize, row: usize, col: usize, delta: &Elem) -> Option<QuiverMorphism> {
    let ring = m.source().ring();
    let mut mats: Vec<Matrix> = m.components().iter().map(|c| c.matrix().clone()).collect();
    let e = &mut mats[comp][(row, col)];
    *e = ring.add(e, delta);
    QuiverMorphism::from_matrices(m.source().clone(), m.target().clone(), mats).ok()
}

fn nonzero_rows(m: &Matrix, ring: &Ring) -> Vec<usize> {
    (0..m.rows()).filter(|&r| m.row(r).iter().any(|e| !ring.is_zero(e))).collect()
}

/// A corruption of a templicial structure matrix together with an identity
/// that held before and in which the corrupted map occurs exactly once:
/// `d_j s_j = id`, `d s_i = id` for an inner face `d`, or naturality of
/// `μ_{k,l}` along `s_i`, whose other side does not involve `μ_{k,l}`.
/// Returns the mutant only if that side of the identity changed.
fn templicial_mutant(x: &TemplicialModule, rng: &mut ChaCha8Rng) -> Option<(TemplicialModule, String)> {
    let ring = x.ring();
    let maps = x.structure_maps();
    let (kind, key, m) = maps[rng.gen_range(0..maps.len())];
    let comp = rng.gen_range(0..m.components().len());
    let c = &m.components()[comp];
    if c.matrix().rows() == 0 || c.matrix().cols() == 0 {
        return None;
    }
    let delta = ring.from_i64(rng.gen_range(1..=2));
    if ring.is_zero(&delta) {
        return None;
    }
    // partner matrix and whether it composes on the right (M P) or left (P M)
    let (partner, right, what) = match kind {
        StructureKind::Degeneracy => {
            let (n, i) = key;
            if n == 0 {
                return None;
            }
            let j = if i >= 1 { i } else { i + 1 };
            (x.face(n + 1, j).components()[comp].matrix().clone(), false, format!("d_{j} s_{i} = id on X_{n}"))
        }
        StructureKind::Face => {
            let (n, j) = key;
            (x.degeneracy(n - 1, j).components()[comp].matrix().clone(), true, format!("d_{j} s_{j} = id on X_{}", n - 1))
        }
        StructureKind::Comultiplication => {
            let (k, l) = key;
            let i = rng.gen_range(0..k + l);
            (x.degeneracy(k + l - 1, i).components()[comp].matrix().clone(), true, format!("μ_{{{k},{l}}} s_{i} natural"))
        }
    };
    let (row, col) = if right {
        // the column must be hit by the degeneracy
        let hit = nonzero_rows(&partner, ring);
        if hit.is_empty() {
            return None;
        }
        (rng.gen_range(0..c.matrix().rows()), hit[rng.gen_range(0..hit.len())])
    } else {
        (rng.gen_range(0..c.matrix().rows()), rng.gen_range(0..c.matrix().cols()))
    };
    let mutated = mutate(m, comp, row, col, &delta)?;
    let new = &mutated.components()[comp];
    let changed = if right {
        c.matrix().mul(ring, &partner) != new.matrix().mul(ring, &partner)
    } else {
        partner.mul(ring, c.matrix()) != partner.mul(ring, new.matrix())
    };
    if !changed {
        return None;
    }
    let y = x.with_structure_map(kind, key, mutated).ok()?;
    Some((y, format!("{kind} {key:?} entry ({row},{col}) breaks {what}")))
}

/// A corruption of `Y(d^j)` for an inner coface `d^j: Δ^{n-1} → Δ^n`
/// that changes `Y(d^j) Y(s^k) = Y(s^k d^j) = id`.
fn necklicial_mutant(y: &NecklicialModule, rng: &mut ChaCha8Rng) -> Option<(NecklicialModule, String)> {
    let ring = y.ring();
    let n = rng.gen_range(2..=y.max_level());
    let j = rng.gen_range(1..n);
    let k = if rng.gen_bool(0.5) { j - 1 } else { j };
    let d = templikit::necklace::coface_map(n, j);
    let s_vals: Vec<usize> = (0..=n).map(|i| if i <= k { i } else { i - 1 }).collect();
    let s = NecklaceMap::new(Necklace::simplex(n), Necklace::simplex(n - 1), templikit::necklace::FintMap::new(s_vals).ok()?).ok()?;
    let yd = y.action(&d);
    let ys = y.action(&s);
    let hit = nonzero_rows(ys.matrix(), ring);
    if yd.matrix().rows() == 0 || hit.is_empty() {
        return None;
    }
    let (row, col) = (rng.gen_range(0..yd.matrix().rows()), hit[rng.gen_range(0..hit.len())]);
    let mut mat = yd.matrix().clone();
    mat[(row, col)] = ring.add(&mat[(row, col)], &ring.one());
    let changed = mat.mul(ring, ys.matrix()) != yd.matrix().mul(ring, ys.matrix());
    if !changed {
        return None;
    }
    let m = templikit::coeff::Morphism::new(yd.domain().clone(), yd.codomain().clone(), mat).ok()?;
    let z = y.with_action(&d, m).ok()?;
    Some((z, format!("Y({d}) entry ({row},{col}) breaks Y(d^{j}) Y(s^{k}) = id")))
}

fn criterion_10() -> Verdict {
    const LEVEL: usize = 3;
    const NECKLICIAL_SHARE: usize = 10;
    const MAX_DRAWS: usize = 100_000;
    let corpus: Vec<(String, TemplicialModule)> = wings_corpus()
        .into_iter()
        .filter_map(|(name, item)| match item {
            Item::Templicial(x) => Some((name, x.truncate(LEVEL).unwrap())),
            Item::Tensor(..) => None,
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut detected, mut silent, mut draws) = (0, Vec::new(), 0);
    while detected + silent.len() < MUTATIONS - NECKLICIAL_SHARE && draws < MAX_DRAWS {
        draws += 1;
        let (name, x) = &corpus[rng.gen_range(0..corpus.len())];
        let Some((mutant, what)) = templicial_mutant(x, &mut rng) else { continue };
        let rep = ok(validate_templicial(&mutant))?;
        match rep.violations.first() {
            Some(v) if !v.identity.is_empty() => detected += 1,
            _ => silent.push(format!("{name}: {what}")),
        }
    }
    let homs: Vec<NecklicialModule> = corpus
        .iter()
        .flat_map(|(_, x)| x.level(0).pairs().map(|(a, b)| hom_necklicial_at(x, a, b).unwrap()).collect::<Vec<_>>())
        .filter(|y| y.values().values().any(|m| m.gens() > 0))
        .collect();
    while detected + silent.len() < MUTATIONS && draws < MAX_DRAWS {
        draws += 1;
        let y = &homs[rng.gen_range(0..homs.len())];
        let Some((mutant, what)) = necklicial_mutant(y, &mut rng) else { continue };
        match validate_necklicial(&mutant).violations.first() {
            Some(v) if !v.identity.is_empty() => detected += 1,
            _ => silent.push(what),
        }
    }
    let total = detected + silent.len();
    ensure(total == MUTATIONS, || format!("only {total} certified mutants in {draws} draws"))?;
    ensure(silent.len() <= MAX_SILENT, || format!("silent passes: {}", silent.join("; ")))?;
    Ok(format!("{detected}/{MUTATIONS} certified corruptions named by the validators, {} silent", silent.len()))
}

// ----------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("combinatorics", criterion_1),
        ("nerve quasi-category", criterion_2),
        ("free functor", criterion_3),
        ("deg-projectivity", criterion_4),
        ("wings/horns equivalence", criterion_5),
        ("tensor preservation", criterion_6),
        ("extension closure", criterion_7),
        ("main deformation theorem", criterion_8),
        ("deg-projectivity lift", criterion_9),
        ("validator soundness", criterion_10),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let res = match res {
            Ok(_) if secs > BUDGET_SECS => Err(format!("took {secs:.1}s, budget {BUDGET_SECS}s")),
            r => r,
        };
        match &res {
            Ok(detail) => println!("criterion {id:>2} {name}: PASS ({secs:.1}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({secs:.1}s) {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
