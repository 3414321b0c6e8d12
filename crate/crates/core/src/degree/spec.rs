//! Galois image data: a conductor m and the mod-m image G(m), standing for
//! the full preimage of G(m) in GL_r of the completion.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::MatGroup;
use crate::ideal::{Ideal, RingSpec};
use crate::matrix::MatAlgebra;
use crate::orders::gl_order;
use crate::residue::ResidueRing;

/// Order data of `G(g)` for a divisor g of the conductor.
#[derive(Debug, Clone)]
pub(crate) struct BaseData {
    pub group_order: BigUint,
    pub scalar_order: BigUint,
}

pub struct GaloisImageSpec {
    label: String,
    r: usize,
    m: Ideal,
    gm: Arc<MatGroup>,
    minimal_conductor: bool,
    base_cache: Mutex<HashMap<Ideal, BaseData>>,
}

impl Clone for GaloisImageSpec {
    fn clone(&self) -> Self {
        GaloisImageSpec {
            label: self.label.clone(),
            r: self.r,
            m: self.m.clone(),
            gm: self.gm.clone(),
            minimal_conductor: self.minimal_conductor,
            base_cache: Mutex::new(self.base_cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for GaloisImageSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaloisImageSpec")
            .field("label", &self.label)
            .field("ring", self.ring())
            .field("r", &self.r)
            .field("m", &self.m)
            .field("order", &self.gm.order())
            .finish()
    }
}

impl PartialEq for GaloisImageSpec {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.r == other.r && self.m == other.m && *self.gm == *other.gm
    }
}

impl GaloisImageSpec {
    pub fn new(label: impl Into<String>, gm: MatGroup) -> Result<Self> {
        let r = gm.rank();
        if r < 2 {
            return Err(Error::InvalidSpec(format!("rank must be at least 2, got {r}")));
        }
        let m = gm.ideal().clone();
        Ok(GaloisImageSpec {
            label: label.into(),
            r,
            m,
            gm: Arc::new(gm),
            minimal_conductor: false,
            base_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Image generated by `generators` (row-major residue codes) mod m.
    pub fn from_generators(
        label: impl Into<String>,
        r: usize,
        m: &Ideal,
        generators: &[Vec<u64>],
        cap: usize,
    ) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidSpec(format!("rank must be at least 2, got {r}")));
        }
        let alg = MatAlgebra::new(ResidueRing::new(m)?, r);
        let gens = generators
            .iter()
            .map(|g| alg.from_entries(g))
            .collect::<Result<Vec<_>>>()?;
        GaloisImageSpec::new(label, MatGroup::closure(alg, gens, cap)?)
    }

    /// Surjective image: conductor (1).
    pub fn full_image(label: impl Into<String>, ring: &RingSpec, r: usize) -> Result<Self> {
        let alg = MatAlgebra::new(ResidueRing::new(&Ideal::unit(ring))?, r);
        let mut spec = GaloisImageSpec::new(label, MatGroup::trivial(alg))?;
        spec.minimal_conductor = true;
        Ok(spec)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &RingSpec {
        self.m.ring()
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn conductor(&self) -> &Ideal {
        &self.m
    }

    pub fn image(&self) -> &MatGroup {
        &self.gm
    }

    pub fn is_minimal_conductor(&self) -> bool {
        self.minimal_conductor
    }

    /// `G(g)` for a divisor g of the conductor, by elementwise reduction.
    pub fn image_at_divisor(&self, g: &Ideal) -> Result<MatGroup> {
        self.gm.reduce_elementwise(g)
    }

    pub(crate) fn base_data(&self, g: &Ideal) -> Result<BaseData> {
        if let Some(d) = self.base_cache.lock().unwrap().get(g) {
            return Ok(d.clone());
        }
        let group = self.image_at_divisor(g)?;
        let data = BaseData {
            group_order: group.order_big(),
            scalar_order: BigUint::from(group.scalar_subgroup().len()),
        };
        self.base_cache.lock().unwrap().insert(g.clone(), data.clone());
        Ok(data)
    }

    /// `true` if G(m) is the full preimage of its reduction mod `d`, d | m.
    pub fn is_preimage_of(&self, d: &Ideal) -> Result<bool> {
        let reduced = self.base_data(d)?.group_order;
        let expected = reduced * gl_order(self.r, &self.m)?;
        Ok(self.gm.order_big() * gl_order(self.r, d)? == expected)
    }

    /// The spec restated at its smallest conductor. The valid divisors are
    /// those d with G(m) the full preimage of G(d); the one of least norm
    /// is returned after checking it divides every other valid divisor.
    pub fn conductor_reduce(&self) -> Result<GaloisImageSpec> {
        let mut valid = Vec::new();
        for d in self.m.divisors()? {
            if self.is_preimage_of(&d)? {
                valid.push(d);
            }
        }
        let best = valid
            .iter()
            .min_by(|x, y| x.norm().cmp(&y.norm()).then(x.cmp(y)))
            .expect("m itself is always valid")
            .clone();
        for d in &valid {
            if !best.divides(d)? {
                return Err(Error::IdentityFailed(format!(
                    "conductor candidates {best} and {d} are not comparable"
                )));
            }
        }
        let mut spec = GaloisImageSpec::new(self.label.clone(), self.image_at_divisor(&best)?)?;
        spec.minimal_conductor = true;
        Ok(spec)
    }

    pub fn to_file(&self) -> SpecFile {
        let alg = self.gm.algebra();
        SpecFile {
            label: self.label.clone(),
            ring: match self.ring() {
                RingSpec::Integers => RingFile::Z,
                RingSpec::Polynomial(f) => RingFile::FqT { q: f.order() },
            },
            r: self.r,
            m: self.m.to_string(),
            generators: self
                .gm
                .generators()
                .iter()
                .map(|g| {
                    alg.format(g)
                        .into_iter()
                        .map(|e| match e.split_once(';') {
                            Some((_, coeffs)) => Entry::Text(coeffs.to_string()),
                            None => Entry::Text(e),
                        })
                        .collect()
                })
                .collect(),
            order: Some(self.gm.order() as u64),
        }
    }

    /// Pretty JSON with one generator per line.
    pub fn to_json(&self) -> String {
        let file = self.to_file();
        let mut value = serde_json::to_value(&file).expect("spec files serialize");
        value["generators"] = serde_json::Value::Array(Vec::new());
        let mut text = serde_json::to_string_pretty(&value).expect("spec files serialize");
        let rows: Vec<String> = file
            .generators
            .iter()
            .map(|g| format!("    {}", serde_json::to_string(g).expect("spec files serialize")))
            .collect();
        let body = if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        text = text.replace("\"generators\": []", &format!("\"generators\": {body}"));
        text
    }

    pub fn from_json(text: &str, cap: usize) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("malformed spec: {e}")))?;
        file.build(cap)
    }

    pub fn load(path: &Path, cap: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
        GaloisImageSpec::from_json(&text, cap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingFile {
    Z,
    FqT { q: u32 },
}

/// A residue written either as a string or as a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

/// On-disk form of a spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub label: String,
    pub ring: RingFile,
    pub r: usize,
    pub m: String,
    pub generators: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
}

// Polynomial-ring residues and ideals may omit the "q=" prefix, or be a
// single field element code.
fn normalize(text: &str, q: Option<u32>) -> String {
    let t = text.trim();
    match q {
        Some(q) if t.starts_with('[') => format!("q={q};{t}"),
        Some(q) if !t.starts_with("q=") => format!("q={q};[{t}]"),
        _ => t.to_string(),
    }
}

impl SpecFile {
    pub fn build(&self, cap: usize) -> Result<GaloisImageSpec> {
        let invalid = |e: Error| match e {
            Error::CapExceeded { .. } => e,
            other => Error::InvalidSpec(other.to_string()),
        };
        let ring = match self.ring {
            RingFile::Z => RingSpec::Integers,
            RingFile::FqT { q } => RingSpec::polynomial(q).map_err(invalid)?,
        };
        let q = ring.q();
        let m = Ideal::parse_in(&ring, &self.m).map_err(invalid)?;
        if self.r < 2 {
            return Err(Error::InvalidSpec(format!("rank must be at least 2, got {}", self.r)));
        }
        let alg = MatAlgebra::new(ResidueRing::new(&m).map_err(invalid)?, self.r);
        let mut gens = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.r * self.r {
                return Err(Error::InvalidSpec(format!(
                    "generator {i} has {} entries, expected {}",
                    g.len(),
                    self.r * self.r
                )));
            }
            let texts: Vec<String> = g
                .iter()
                .map(|e| match e {
                    Entry::Int(v) => normalize(&v.to_string(), q),
                    Entry::Text(s) => normalize(s, q),
                })
                .collect();
            gens.push(alg.parse(&texts).map_err(invalid)?);
        }
        let gm = MatGroup::closure(alg, gens, cap).map_err(invalid)?;
        if let Some(order) = self.order {
            if gm.order() as u64 != order {
                return Err(Error::InvalidSpec(format!(
                    "declared order {order} but the generators give {}",
                    gm.order()
                )));
            }
        }
        GaloisImageSpec::new(self.label.clone(), gm)
    }
}
