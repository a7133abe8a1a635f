//! JSON descriptions of extensions and finite modules.
//!
//! Ring elements are written in the ring's canonical notation. A map on a
//! finite ring lists the image of every element in element order; a map on
//! a polynomial ring lists the images of the ring variables.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{FiniteModule, SubmoduleSet};
use crate::pbw::{MonomialOrder, OrderKind, PairRelation, SkewPBWExtension};
use crate::ring::{FiniteRing, PolyRing, Ring, RingMap, RingSpec, SigmaDerivation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub ring: RingSpec,
    pub vars: Vec<String>,
    /// Variable name → images. Unlisted variables have σ = id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sigma: BTreeMap<String, Vec<String>>,
    /// Variable name → images. Unlisted variables have δ = 0.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
}

/// x_j x_i = d x_i x_j + r0 + Σ r_k x_k, for i listed before j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub i: String,
    pub j: String,
    pub d: String,
    #[serde(default = "zero_text")]
    pub r0: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub r: BTreeMap<String, String>,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderSpec {
    pub kind: OrderKind,
    /// Variables from most to least significant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub significance: Option<Vec<String>>,
}

/// An extension over either coefficient backend.
pub enum AnyExtension {
    Finite(SkewPBWExtension<FiniteRing>),
    Poly(SkewPBWExtension<PolyRing>),
}

impl AnyExtension {
    pub fn finite(&self) -> Option<&SkewPBWExtension<FiniteRing>> {
        match self {
            AnyExtension::Finite(e) => Some(e),
            AnyExtension::Poly(_) => None,
        }
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn load_extension(spec: &ExtensionSpec) -> Result<AnyExtension> {
    match &spec.ring {
        RingSpec::Poly { .. } => {
            let ring = PolyRing::from_spec(&spec.ring)?;
            let images = |ring: &PolyRing, texts: &[String]| -> Result<Vec<crate::ring::Poly>> {
                if texts.len() != ring.nvars() {
                    return Err(Error::InvalidInput(format!("a map needs {} generator images", ring.nvars())));
                }
                texts.iter().map(|t| ring.parse_element(t)).collect()
            };
            Ok(AnyExtension::Poly(build_extension(ring, spec, images)?))
        }
        _ => {
            let ring = FiniteRing::from_spec(&spec.ring)?;
            let table = |ring: &FiniteRing, texts: &[String]| -> Result<Vec<usize>> {
                if texts.len() != ring.size() {
                    return Err(Error::InvalidInput(format!("a map needs {} images", ring.size())));
                }
                texts.iter().map(|t| ring.parse_element(t)).collect()
            };
            Ok(AnyExtension::Finite(build_extension(ring, spec, table)?))
        }
    }
}

fn var_index(spec: &ExtensionSpec, name: &str) -> Result<usize> {
    spec.vars
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))
}

/// Goes through [`SkewPBWExtension::from_raw`], so a corrupted table is
/// reported as the failure it causes in the extension.
fn build_extension<R: Ring>(
    ring: R,
    spec: &ExtensionSpec,
    map_data: impl Fn(&R, &[String]) -> Result<R::MapData>,
) -> Result<SkewPBWExtension<R>> {
    let n = spec.vars.len();
    for name in spec.sigma.keys().chain(spec.delta.keys()) {
        var_index(spec, name)?;
    }
    let mut sigma = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    for name in &spec.vars {
        let s = match spec.sigma.get(name) {
            Some(texts) => map_data(&ring, texts)?,
            None => RingMap::identity(&ring).data().clone(),
        };
        let d = match spec.delta.get(name) {
            Some(texts) => map_data(&ring, texts)?,
            None => SigmaDerivation::zero(&ring, &RingMap::unchecked(&ring, s.clone())).data().clone(),
        };
        sigma.push(s);
        delta.push(d);
    }
    let mut relations = BTreeMap::new();
    for rel in &spec.relations {
        let (i, j) = (var_index(spec, &rel.i)?, var_index(spec, &rel.j)?);
        if i >= j {
            return Err(Error::InvalidInput(format!("relation {} {} must list the earlier variable first", rel.i, rel.j)));
        }
        let mut r = vec![ring.zero(); n];
        for (k, text) in &rel.r {
            r[var_index(spec, k)?] = ring.parse_element(text)?;
        }
        let pair = PairRelation { d: ring.parse_element(&rel.d)?, r0: ring.parse_element(&rel.r0)?, r };
        if relations.insert((i, j), pair).is_some() {
            return Err(Error::InvalidInput(format!("relation {} {} is given twice", rel.i, rel.j)));
        }
    }
    let order = match &spec.order {
        None => MonomialOrder::deglex(n),
        Some(OrderSpec { kind, significance: None }) => MonomialOrder::new(*kind, n),
        Some(OrderSpec { kind, significance: Some(names) }) => MonomialOrder::with_significance(
            *kind,
            names.iter().map(|v| var_index(spec, v)).collect::<Result<_>>()?,
        )?,
    };
    SkewPBWExtension::from_raw(Arc::new(ring), &spec.vars, sigma, delta, relations, order)
}

/// The JSON description of an extension; loading it gives the same
/// extension back.
pub fn extension_spec<R: Ring>(ext: &SkewPBWExtension<R>) -> ExtensionSpec
where
    R::MapData: MapTexts<R>,
{
    let ring = ext.ring();
    let names = ext.names();
    let n = ext.nvars();
    let mut sigma = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for i in 0..n {
        if !ext.sigma(i).is_identity() {
            sigma.insert(names[i].clone(), ext.sigma(i).data().texts(ring));
        }
        if !ext.delta(i).is_zero() {
            delta.insert(names[i].clone(), ext.delta(i).data().texts(ring));
        }
    }
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rel = ext.relation(i, j);
            let trivial = ring.is_one(&rel.d) && ring.is_zero(&rel.r0) && rel.r.iter().all(|c| ring.is_zero(c));
            if trivial {
                continue;
            }
            relations.push(RelationSpec {
                i: names[i].clone(),
                j: names[j].clone(),
                d: ring.format(&rel.d),
                r0: ring.format(&rel.r0),
                r: rel
                    .r
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !ring.is_zero(c))
                    .map(|(k, c)| (names[k].clone(), ring.format(c)))
                    .collect(),
            });
        }
    }
    let order = (*ext.order() != MonomialOrder::deglex(n)).then(|| OrderSpec {
        kind: ext.order().kind(),
        significance: Some(ext.order().significance().iter().map(|&v| names[v].clone()).collect()),
    });
    ExtensionSpec { ring: ring.spec(), vars: names.to_vec(), sigma, delta, relations, order }
}

/// Map data written as element strings.
pub trait MapTexts<R: Ring> {
    fn texts(&self, ring: &R) -> Vec<String>;
}

impl MapTexts<FiniteRing> for Vec<usize> {
    fn texts(&self, ring: &FiniteRing) -> Vec<String> {
        self.iter().map(|&v| ring.label(v).to_string()).collect()
    }
}

impl MapTexts<PolyRing> for Vec<crate::ring::Poly> {
    fn texts(&self, ring: &PolyRing) -> Vec<String> {
        self.iter().map(|p| ring.format(p)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// R as a right module over itself.
    Regular,
    Zero,
    RightIdeal {
        generators: Vec<String>,
    },
    /// The submodule of `of` generated by `generators`.
    Submodule {
        of: Box<ModuleSpec>,
        generators: Vec<String>,
    },
    DirectSum {
        summands: Vec<ModuleSpec>,
    },
    /// Explicit tables over element ids 0..size; `add[m][n]` and
    /// `act[m][r]` with r a ring element id.
    Tables {
        add: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// A module file: the module and, when it is used without an extension,
/// its ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    pub module: ModuleSpec,
}

pub fn load_module(ring: &Arc<FiniteRing>, spec: &ModuleSpec) -> Result<FiniteModule> {
    Ok(match spec {
        ModuleSpec::Regular => FiniteModule::regular(ring.clone()),
        ModuleSpec::Zero => FiniteModule::zero_module(ring.clone()),
        ModuleSpec::RightIdeal { generators } => {
            let gens = generators.iter().map(|g| ring.parse_element(g)).collect::<Result<Vec<_>>>()?;
            FiniteModule::right_ideal(ring.clone(), &gens)
        }
        ModuleSpec::Submodule { of, generators } => {
            let outer = load_module(ring, of)?;
            let gens = generators.iter().map(|g| outer.parse_element(g)).collect::<Result<Vec<_>>>()?;
            outer.restrict(&SubmoduleSet::generate(&outer, &gens))
        }
        ModuleSpec::DirectSum { summands } => {
            let mut parts = summands.iter().map(|s| load_module(ring, s));
            let first = parts.next().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))??;
            parts.try_fold(first, |acc, m| acc.direct_sum(&m?))?
        }
        ModuleSpec::Tables { add, act, labels } => match labels {
            Some(l) => FiniteModule::from_tables_labeled(ring.clone(), add, act, l.clone())?,
            None => FiniteModule::from_tables(ring.clone(), add, act)?,
        },
    })
}

/// Loads a module file, taking the ring from `ext_ring` when given. A ring
/// in the file must then match it.
pub fn load_module_file(file: &ModuleFile, ext_ring: Option<&FiniteRing>) -> Result<FiniteModule> {
    let ring = match (ext_ring, &file.ring) {
        (Some(r), Some(spec)) if r.spec() != *spec => {
            return Err(Error::InvalidInput("module ring differs from the extension's ring".into()))
        }
        (Some(r), _) => r.clone(),
        (None, Some(spec)) => FiniteRing::from_spec(spec)?,
        (None, None) => return Err(Error::InvalidInput("module file needs a ring".into())),
    };
    load_module(&Arc::new(ring), &file.module)
}
