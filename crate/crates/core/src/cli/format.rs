//! The on-disk instance format: JSON, every ring element a decimal string,
//! matrices row-major with explicit dimensions.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coeff::{Factor, Matrix, Module, Ring, RingExtension};
use crate::deform::DeformationPair;
use crate::error::{Error, Result};
use crate::quiver::{Quiver, QuiverMorphism};
use crate::templicial::{StructureKind, TemplicialModule};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub ring: String,
    pub vertices: Vec<String>,
    pub max_level: usize,
    /// Levels `1..=max_level`.
    pub levels: Vec<LevelFile>,
    pub faces: Vec<MapFile>,
    pub degeneracies: Vec<MapFile>,
    pub comultiplications: Vec<MapFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationFile>,
}

/// Nonzero homs of one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    pub level: usize,
    pub homs: Vec<HomFile>,
}

/// `factors` lists cyclic summands: `"free"`, or the torsion payload (the
/// order over `Z`, the exponent of the uniformizer over a chain ring).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub source: String,
    pub target: String,
    pub factors: Vec<String>,
}

/// A structure map with key `[n, j]`, `[n, i]` or `[k, l]`; all-zero
/// components are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub key: [usize; 2],
    pub components: Vec<ComponentFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub source: String,
    pub target: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

/// The module of the file is a deformation over its ring of a fibre over
/// `target`. Without `fiber` the fibre is the base change itself; otherwise
/// it is another instance file, relative to this one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationFile {
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<String>,
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub module: TemplicialModule,
    pub deformation: Option<DeformationFile>,
}

fn parse_factor(ring: &Ring, s: &str) -> Result<Factor> {
    let f = if s == "free" {
        Factor::Free
    } else {
        Factor::Torsion(s.parse().map_err(|_| Error::Parse(format!("bad factor '{s}'")))?)
    };
    ring.check_factor(&f)?;
    Ok(f)
}

fn vertex(vertices: &[String], name: &str) -> Result<usize> {
    vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.into()))
}

impl InstanceFile {
    pub fn from_module(x: &TemplicialModule, deformation: Option<DeformationFile>) -> Self {
        let ring = x.ring();
        let names = x.vertices();
        let levels = (1..=x.max_level())
            .map(|n| LevelFile {
                level: n,
                homs: x
                    .level(n)
                    .pairs()
                    .filter(|&(a, b)| x.level(n).hom(a, b).gens() > 0)
                    .map(|(a, b)| HomFile {
                        source: names[a].clone(),
                        target: names[b].clone(),
                        factors: x.level(n).hom(a, b).factors().iter().map(|f| f.to_string()).collect(),
                    })
                    .collect(),
            })
            .collect();
        let mut tables: BTreeMap<StructureKind, Vec<MapFile>> = BTreeMap::new();
        for (kind, key, m) in x.structure_maps() {
            let pairs: Vec<(usize, usize)> = m.source().pairs().collect();
            let components = pairs
                .iter()
                .zip(m.components())
                .filter(|(_, c)| !c.matrix().is_zero(ring))
                .map(|(&(a, b), c)| ComponentFile {
                    source: names[a].clone(),
                    target: names[b].clone(),
                    rows: c.matrix().rows(),
                    cols: c.matrix().cols(),
                    entries: c.matrix().data().iter().map(|e| ring.format_elem(e)).collect(),
                })
                .collect();
            tables.entry(kind).or_default().push(MapFile { key: [key.0, key.1], components });
        }
        let mut take = |k| tables.remove(&k).unwrap_or_default();
        InstanceFile {
            format_version: FORMAT_VERSION,
            ring: ring.to_string(),
            vertices: names.to_vec(),
            max_level: x.max_level(),
            levels,
            faces: take(StructureKind::Face),
            degeneracies: take(StructureKind::Degeneracy),
            comultiplications: take(StructureKind::Comultiplication),
            deformation,
        }
    }

    pub fn to_module(&self) -> Result<TemplicialModule> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {}", self.format_version)));
        }
        let ring: Ring = self.ring.parse()?;
        let names = &self.vertices;
        if self.levels.len() != self.max_level || self.levels.iter().enumerate().any(|(i, l)| l.level != i + 1) {
            return Err(Error::Parse("levels must be listed as 1, ..., max_level".into()));
        }
        let mut levels = Vec::new();
        for l in &self.levels {
            let mut q = Quiver::zero(&ring, names);
            for h in &l.homs {
                let (a, b) = (vertex(names, &h.source)?, vertex(names, &h.target)?);
                let factors = h.factors.iter().map(|f| parse_factor(&ring, f)).collect::<Result<_>>()?;
                q.set_hom(a, b, Module::new(&ring, factors)?);
            }
            levels.push(q);
        }
        let all = |n: usize| if n == 0 { Quiver::unit(&ring, names) } else { levels[n - 1].clone() };
        let get = |n: usize| -> Result<Quiver> {
            if n > self.max_level {
                Err(Error::Range(format!("level {n} exceeds max_level {}", self.max_level)))
            } else {
                Ok(all(n))
            }
        };
        let mut tables: [BTreeMap<(usize, usize), QuiverMorphism>; 3] = Default::default();
        let kinds = [
            (StructureKind::Face, &self.faces),
            (StructureKind::Degeneracy, &self.degeneracies),
            (StructureKind::Comultiplication, &self.comultiplications),
        ];
        for (slot, (kind, maps)) in kinds.into_iter().enumerate() {
            for mf in maps {
                let [p, q] = mf.key;
                let (src, tgt) = match kind {
                    StructureKind::Face if p >= 2 && q > 0 && q < p => (get(p)?, get(p - 1)?),
                    StructureKind::Degeneracy if q <= p => (get(p)?, get(p + 1)?),
                    StructureKind::Comultiplication if p >= 1 && q >= 1 => (get(p + q)?, get(p)?.tensor(&get(q)?)?),
                    _ => return Err(Error::Parse(format!("bad {kind} key {:?}", mf.key))),
                };
                let pairs: Vec<(usize, usize)> = src.pairs().collect();
                let mut mats: Vec<Matrix> =
                    pairs.iter().map(|&(a, b)| Matrix::zeros(&ring, tgt.hom(a, b).gens(), src.hom(a, b).gens())).collect();
                for c in &mf.components {
                    let (a, b) = (vertex(names, &c.source)?, vertex(names, &c.target)?);
                    let i = pairs.iter().position(|&pr| pr == (a, b)).expect("all pairs listed");
                    if (c.rows, c.cols) != mats[i].shape() || c.entries.len() != c.rows * c.cols {
                        return Err(Error::Shape(format!(
                            "{kind} {:?} at ({},{}) should be {}x{}",
                            mf.key,
                            c.source,
                            c.target,
                            mats[i].rows(),
                            mats[i].cols()
                        )));
                    }
                    let data = c.entries.iter().map(|e| ring.parse_elem(e)).collect::<Result<_>>()?;
                    mats[i] = Matrix::from_vec(c.rows, c.cols, data);
                }
                let m = QuiverMorphism::from_matrices(src, tgt, mats)?;
                if tables[slot].insert((p, q), m).is_some() {
                    return Err(Error::Parse(format!("duplicate {kind} key {:?}", mf.key)));
                }
            }
        }
        let [faces, degens, comults] = tables;
        TemplicialModule::new(&ring, names.clone(), levels, faces, degens, comults)
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Instance { module: f.to_module()?, deformation: f.deformation })
}

pub fn serialize_instance(x: &TemplicialModule, deformation: Option<DeformationFile>) -> String {
    InstanceFile::from_module(x, deformation).to_canonical_string()
}

/// Read an instance file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// The deformation pair of an instance with a deformation block, reading the
/// fibre relative to `path`.
pub fn load_pair(path: &Path, inst: &Instance) -> Result<DeformationPair> {
    let d = inst
        .deformation
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("{} has no deformation block", path.display())))?;
    let target: Ring = d.target.parse()?;
    let theta = RingExtension::new(inst.module.ring(), &target)?;
    match &d.fiber {
        None => DeformationPair::from_deformed(theta, inst.module.clone()),
        Some(f) => {
            let p: PathBuf = path.parent().unwrap_or(Path::new(".")).join(f);
            let fiber = load_instance(&p)?.module;
            DeformationPair::new(theta, inst.module.clone(), fiber, None)
        }
    }
}
