//! Named algebras with exact rational or prime-field parameters. Building a
//! preset checks its classification and reproduces its defining relations
//! under multiplication.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pbw::{Classification, ExtensionBuilder, Monomial, SkewPBWExtension, SkewPoly};
use crate::ring::{BaseField, Poly, PolyRing, Ring, RingMap, SigmaDerivation};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: &'static str,
    pub about: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamInfo],
}

const BASE: ParamInfo = ParamInfo { name: "base", default: "Q", about: "coefficient field: Q or a prime p" };

pub const PRESETS: [PresetInfo; 7] = [
    PresetInfo {
        name: "quantum-plane",
        about: "k[y][x; σ] with σ(y) = qy, so xy = qyx",
        params: &[
            ParamInfo { name: "q", default: "2", about: "nonzero scalar" },
            ParamInfo { name: "base", default: "3", about: "coefficient field: Q or a prime p" },
        ],
    },
    PresetInfo {
        name: "Dqh",
        about: "q-differential operators k[y][x; σ, δ], σ(y) = qy, δ(y) = h",
        params: &[
            ParamInfo { name: "q", default: "2", about: "nonzero scalar" },
            ParamInfo { name: "h", default: "1", about: "scalar" },
            BASE,
        ],
    },
    PresetInfo {
        name: "An",
        about: "additive Weyl analogue over k[t₁..tₙ]: xᵢtᵢ = qᵢtᵢxᵢ + 1",
        params: &[
            ParamInfo { name: "n", default: "1", about: "number of pairs" },
            ParamInfo { name: "q<i>", default: "3", about: "nonzero scalar for pair i" },
            BASE,
        ],
    },
    PresetInfo {
        name: "diffusion",
        about: "diffusion algebra over k[x₁..xₙ]: c_ij DᵢDⱼ - c_ji DⱼDᵢ = xⱼDᵢ - xᵢDⱼ",
        params: &[
            ParamInfo { name: "n", default: "2", about: "number of generators Dᵢ" },
            ParamInfo { name: "c<i><j>", default: "2 if i < j, else 3", about: "nonzero scalars; for n ≥ 3 only overlap-consistent choices build" },
            BASE,
        ],
    },
    PresetInfo { name: "so5", about: "U(so(5)) with generators J_ab, 1 ≤ a < b ≤ 5", params: &[BASE] },
    PresetInfo {
        name: "Uq'so3",
        about: "U'_q(so₃) with q = s²",
        params: &[ParamInfo { name: "s", default: "2", about: "nonzero square root of q" }, BASE],
    },
    PresetInfo {
        name: "AW3",
        about: "Askey-Wilson algebra AW(3) with e^ω replaced by a rational w",
        params: &[
            ParamInfo { name: "w", default: "2", about: "nonzero scalar" },
            ParamInfo { name: "B", default: "1", about: "scalar" },
            ParamInfo { name: "C0", default: "1", about: "scalar" },
            ParamInfo { name: "C1", default: "1", about: "scalar" },
            ParamInfo { name: "D0", default: "1", about: "scalar" },
            ParamInfo { name: "D1", default: "1", about: "scalar" },
            BASE,
        ],
    },
];

/// A defining relation: the product as typed and its expected normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub product: String,
    pub normal_form: String,
}

pub struct Preset {
    pub name: &'static str,
    pub ext: SkewPBWExtension<PolyRing>,
    pub signatures: Vec<Signature>,
}

struct Params {
    given: BTreeMap<String, String>,
    used: Vec<String>,
}

impl Params {
    fn raw(&mut self, key: &str, default: &str) -> String {
        self.used.push(key.to_string());
        self.given.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    fn rational(&mut self, key: &str, default: &str) -> Result<BigRational> {
        let text = self.raw(key, default);
        BigRational::from_str(text.trim()).map_err(|_| Error::BadParameter(format!("{key} = {text} is not a rational")))
    }

    fn nonzero(&mut self, ring: &PolyRing, key: &str, default: &str) -> Result<Poly> {
        let c = self.scalar(ring, key, default)?;
        if c.is_zero() {
            return Err(Error::BadParameter(format!("{key} must be nonzero")));
        }
        Ok(c)
    }

    fn scalar(&mut self, ring: &PolyRing, key: &str, default: &str) -> Result<Poly> {
        let q = self.rational(key, default)?;
        ring.from_rational(&q).map_err(|_| Error::BadParameter(format!("{key} = {q} has no image in the base field")))
    }

    fn count(&mut self, key: &str, default: &str) -> Result<usize> {
        let text = self.raw(key, default);
        match text.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::BadParameter(format!("{key} = {text} must be a positive integer"))),
        }
    }

    fn field(&mut self, default: &str) -> Result<BaseField> {
        let text = self.raw("base", default);
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(BaseField::Rational);
        }
        let digits = t.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')).unwrap_or(t);
        let p: u64 = digits.parse().map_err(|_| Error::BadParameter(format!("base = {text}")))?;
        BaseField::from_spec(&crate::ring::FieldSpec::Gf { p }).map_err(|e| Error::BadParameter(e.to_string()))
    }

    fn finish(self) -> Result<()> {
        match self.given.keys().find(|k| !self.used.contains(k)) {
            Some(k) => Err(Error::BadParameter(format!("unknown parameter {k}"))),
            None => Ok(()),
        }
    }
}

pub fn preset_info(name: &str) -> Option<&'static PresetInfo> {
    let key = canonical(name);
    PRESETS.iter().find(|p| canonical(p.name) == key)
}

fn canonical(name: &str) -> String {
    name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

/// Builds a preset, asserts its classification and checks every signature
/// relation.
pub fn build_preset(name: &str, params: &BTreeMap<String, String>) -> Result<Preset> {
    let info = preset_info(name).ok_or_else(|| Error::BadParameter(format!("unknown preset {name}")))?;
    let mut p = Params { given: params.clone(), used: Vec::new() };
    let (ext, expected, checks) = match info.name {
        "quantum-plane" => quantum_plane(&mut p)?,
        "Dqh" => dqh(&mut p)?,
        "An" => an(&mut p)?,
        "diffusion" => diffusion(&mut p)?,
        "so5" => so5(&mut p)?,
        "Uq'so3" => uq_so3(&mut p)?,
        _ => aw3(&mut p)?,
    };
    p.finish()?;
    if ext.classify() != expected {
        return Err(Error::AssertionFailed(format!(
            "{} classifies as {:?}, expected {:?}",
            info.name,
            ext.classify(),
            expected
        )));
    }
    let mut signatures = Vec::new();
    for (product, normal) in checks {
        let got = ext.parse(&product)?;
        if got != normal {
            return Err(Error::AssertionFailed(format!(
                "{}: {product} gives {} instead of {}",
                info.name,
                ext.format(&got),
                ext.format(&normal)
            )));
        }
        signatures.push(Signature { product, normal_form: ext.format(&got) });
    }
    Ok(Preset { name: info.name, ext, signatures })
}

type Built = (SkewPBWExtension<PolyRing>, Classification, Vec<(String, SkewPoly<Poly>)>);

fn flags(quasi_commutative: bool, endomorphism_type: bool, derivation_type: bool) -> Classification {
    Classification { quasi_commutative, bijective: true, endomorphism_type, derivation_type }
}

fn mono(n: usize, exps: &[(usize, u32)]) -> Monomial {
    let mut e = vec![0; n];
    for &(i, k) in exps {
        e[i] += k;
    }
    Monomial::new(e)
}

/// Sum of c·x_k terms.
fn linear(ext: &SkewPBWExtension<PolyRing>, terms: &[(Poly, usize)]) -> SkewPoly<Poly> {
    let n = ext.nvars();
    terms.iter().fold(ext.zero(), |acc, (c, k)| ext.add(&acc, &ext.term(c.clone(), Monomial::var(n, *k))))
}

fn quantum_plane(p: &mut Params) -> Result<Built> {
    let k = PolyRing::new(p.field("3")?, vec!["y".into()])?;
    let q = p.nonzero(&k, "q", "2")?;
    let y = k.var(0);
    let sigma = RingMap::validate(&k, vec![k.mul(&q, &y)])?;
    let ext = ExtensionBuilder::new(Arc::new(k.clone()), &["x"]).sigma(0, sigma).build()?;
    let expected = ext.term(k.mul(&q, &y), Monomial::var(1, 0));
    Ok((ext, flags(true, true, k.is_one(&q)), vec![("x*y".into(), expected)]))
}

fn dqh(p: &mut Params) -> Result<Built> {
    let k = PolyRing::new(p.field("Q")?, vec!["y".into()])?;
    let q = p.nonzero(&k, "q", "2")?;
    let h = p.scalar(&k, "h", "1")?;
    let y = k.var(0);
    let sigma = RingMap::validate(&k, vec![k.mul(&q, &y)])?;
    let delta = SigmaDerivation::validate(&k, &sigma, vec![h.clone()])?;
    let ext = ExtensionBuilder::new(Arc::new(k.clone()), &["x"]).derivation(0, delta).build()?;
    let expected = ext.add(&ext.term(k.mul(&q, &y), Monomial::var(1, 0)), &ext.constant(h.clone()));
    let flat = k.is_zero(&h);
    Ok((ext, flags(flat, flat, k.is_one(&q)), vec![("x*y".into(), expected)]))
}

fn an(p: &mut Params) -> Result<Built> {
    let field = p.field("Q")?;
    let n = p.count("n", "1")?;
    let ts: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let k = PolyRing::new(field, ts.clone())?;
    let mut builder = ExtensionBuilder::new(Arc::new(k.clone()), &xs);
    let mut qs = Vec::new();
    for i in 0..n {
        let q = p.nonzero(&k, &format!("q{}", i + 1), "3")?;
        let images: Vec<Poly> = (0..n).map(|j| if j == i { k.mul(&q, &k.var(j)) } else { k.var(j) }).collect();
        let sigma = RingMap::validate(&k, images)?;
        let delta_images: Vec<Poly> = (0..n).map(|j| if j == i { k.one() } else { k.zero() }).collect();
        builder = builder.derivation(i, SigmaDerivation::validate(&k, &sigma, delta_images)?);
        qs.push(q);
    }
    let ext = builder.build()?;
    let checks = (0..n)
        .map(|i| {
            let normal = ext.add(&ext.term(k.mul(&qs[i], &k.var(i)), Monomial::var(n, i)), &ext.one());
            (format!("{}*{}", xs[i], ts[i]), normal)
        })
        .collect();
    let identity = qs.iter().all(|q| k.is_one(q));
    Ok((ext, flags(false, false, identity), checks))
}

fn diffusion(p: &mut Params) -> Result<Built> {
    let field = p.field("Q")?;
    let n = p.count("n", "2")?;
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ds: Vec<String> = (1..=n).map(|i| format!("D{i}")).collect();
    let k = PolyRing::new(field, xs)?;
    let mut c = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let default = if i < j { "2" } else { "3" };
                c.insert((i, j), p.nonzero(&k, &format!("c{}{}", i + 1, j + 1), default)?);
            }
        }
    }
    let mut builder = ExtensionBuilder::new(Arc::new(k.clone()), &ds);
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let inv = k.unit_inverse(&c[&(j, i)]).expect("nonzero scalar");
            let d = k.mul(&c[&(i, j)], &inv);
            let mut r = vec![k.zero(); n];
            r[i] = k.neg(&k.mul(&inv, &k.var(j)));
            r[j] = k.mul(&inv, &k.var(i));
            builder = builder.relation(i, j, d.clone(), k.zero(), r.clone());
            relations.push((i, j, d, r));
        }
    }
    let ext = builder.build()?;
    let checks = relations
        .into_iter()
        .map(|(i, j, d, r)| {
            let head = ext.term(d, mono(n, &[(i, 1), (j, 1)]));
            let tail = linear(&ext, &[(r[i].clone(), i), (r[j].clone(), j)]);
            (format!("{}*{}", ds[j], ds[i]), ext.add(&head, &tail))
        })
        .collect();
    Ok((ext, flags(false, true, true), checks))
}

/// The index pairs (a, b), a < b, of U(so(5)) in generator order.
fn so5_pairs() -> Vec<(usize, usize)> {
    (1..=5).flat_map(|a| (a + 1..=5).map(move |b| (a, b))).collect()
}

/// [J_ab, J_mn] = δ_bm J_an + δ_an J_bm - δ_bn J_am - δ_am J_bn, as
/// (coefficient, generator index) with J_ba = -J_ab and J_aa = 0.
fn so5_bracket(x: (usize, usize), y: (usize, usize)) -> BTreeMap<usize, i64> {
    let pairs = so5_pairs();
    let (a, b) = x;
    let (m, n) = y;
    let delta = |u: usize, v: usize| i64::from(u == v);
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    for (coeff, u, v) in [(delta(b, m), a, n), (delta(a, n), b, m), (-delta(b, n), a, m), (-delta(a, m), b, n)] {
        if coeff == 0 || u == v {
            continue;
        }
        let (sign, key) = if u < v { (1, (u, v)) } else { (-1, (v, u)) };
        let idx = pairs.iter().position(|&p| p == key).expect("valid pair");
        *out.entry(idx).or_insert(0) += sign * coeff;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn so5(p: &mut Params) -> Result<Built> {
    let k = PolyRing::new(p.field("Q")?, vec![])?;
    let pairs = so5_pairs();
    let names: Vec<String> = pairs.iter().map(|(a, b)| format!("J{a}{b}")).collect();
    let n = names.len();
    let mut builder = ExtensionBuilder::new(Arc::new(k.clone()), &names);
    let mut checks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // x_j x_i = x_i x_j - [x_i, x_j]
            let mut r = vec![k.zero(); n];
            for (idx, c) in so5_bracket(pairs[i], pairs[j]) {
                r[idx] = k.int(-c);
            }
            builder = builder.relation(i, j, k.one(), k.zero(), r.clone());
            checks.push((i, j, r));
        }
    }
    let ext = builder.build()?;
    let checks = checks
        .into_iter()
        .map(|(i, j, r)| {
            let terms: Vec<(Poly, usize)> =
                r.iter().enumerate().filter(|(_, c)| !k.is_zero(c)).map(|(idx, c)| (k.neg(c), idx)).collect();
            (format!("{0}*{1} - {1}*{0}", names[i], names[j]), linear(&ext, &terms))
        })
        .collect();
    Ok((ext, flags(false, true, true), checks))
}

fn uq_so3(p: &mut Params) -> Result<Built> {
    let k = PolyRing::new(p.field("Q")?, vec![])?;
    let s = p.nonzero(&k, "s", "2")?;
    let q = k.mul(&s, &s);
    let q_inv = k.unit_inverse(&q).expect("nonzero scalar");
    let s_inv = k.unit_inverse(&s).expect("nonzero scalar");
    let minus_s = k.neg(&s);
    let z = k.zero();
    let ext = ExtensionBuilder::new(Arc::new(k.clone()), &["I1", "I2", "I3"])
        .relation(0, 1, q.clone(), z.clone(), vec![z.clone(), z.clone(), minus_s.clone()])
        .relation(0, 2, q_inv.clone(), z.clone(), vec![z.clone(), s_inv.clone(), z.clone()])
        .relation(1, 2, q.clone(), z.clone(), vec![minus_s.clone(), z.clone(), z.clone()])
        .build()?;
    let pair = |d: &Poly, i, j, rest: &[(Poly, usize)]| ext.add(&ext.term(d.clone(), mono(3, &[(i, 1), (j, 1)])), &linear(&ext, rest));
    let checks = vec![
        ("I2*I1".to_string(), pair(&q, 0, 1, &[(minus_s.clone(), 2)])),
        ("I3*I1".to_string(), pair(&q_inv, 0, 2, &[(s_inv, 1)])),
        ("I3*I2".to_string(), pair(&q, 1, 2, &[(minus_s, 0)])),
    ];
    Ok((ext, flags(false, true, true), checks))
}

fn aw3(p: &mut Params) -> Result<Built> {
    let k = PolyRing::new(p.field("Q")?, vec![])?;
    let w = p.nonzero(&k, "w", "2")?;
    let b = p.scalar(&k, "B", "1")?;
    let c0 = p.scalar(&k, "C0", "1")?;
    let c1 = p.scalar(&k, "C1", "1")?;
    let d0 = p.scalar(&k, "D0", "1")?;
    let d1 = p.scalar(&k, "D1", "1")?;
    let w_inv = k.unit_inverse(&w).expect("nonzero scalar");
    let w2 = k.mul(&w, &w);
    let w_inv2 = k.mul(&w_inv, &w_inv);
    let z = k.zero();
    let neg_w = k.neg(&w);
    // K1K0 = w²K0K1 - wK2
    let r01 = vec![z.clone(), z.clone(), neg_w.clone()];
    // K2K0 = w⁻²K0K2 + w⁻¹(BK0 + C1K1 + D1)
    let r02 = vec![k.mul(&w_inv, &b), k.mul(&w_inv, &c1), z.clone()];
    let c02 = k.mul(&w_inv, &d1);
    // K2K1 = w²K1K2 - w(BK1 + C0K0 + D0)
    let r12 = vec![k.mul(&neg_w, &c0), k.mul(&neg_w, &b), z.clone()];
    let c12 = k.mul(&neg_w, &d0);
    let ext = ExtensionBuilder::new(Arc::new(k.clone()), &["K0", "K1", "K2"])
        .relation(0, 1, w2.clone(), z.clone(), r01.clone())
        .relation(0, 2, w_inv2.clone(), c02.clone(), r02.clone())
        .relation(1, 2, w2.clone(), c12.clone(), r12.clone())
        .build()?;
    let pair = |d: &Poly, i, j, c: &Poly, r: &[Poly]| {
        let rest: Vec<(Poly, usize)> = r.iter().cloned().zip(0..3).collect();
        ext.add(&ext.add(&ext.term(d.clone(), mono(3, &[(i, 1), (j, 1)])), &linear(&ext, &rest)), &ext.constant(c.clone()))
    };
    let checks = vec![
        ("K1*K0".to_string(), pair(&w2, 0, 1, &z, &r01)),
        ("K2*K0".to_string(), pair(&w_inv2, 0, 2, &c02, &r02)),
        ("K2*K1".to_string(), pair(&w2, 1, 2, &c12, &r12)),
    ];
    Ok((ext, flags(false, true, true), checks))
}
