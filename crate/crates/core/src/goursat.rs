//! Subgroups of direct products as fibered products over a common quotient,
//! and their intersections with box subgroups `H1 x H2`.
//!
//! Groups are handled through element labels `0..order`; any finite group
//! exposing a multiplication oracle on labels can take part.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{unit_generators, MatGroup, DEFAULT_CAP};
use crate::ideal::Ideal;
use crate::matrix::MatAlgebra;
use crate::residue::ResidueRing;

pub trait FiniteGroup: Send + Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generators(&self) -> Vec<usize>;
}

impl FiniteGroup for MatGroup {
    fn order(&self) -> usize {
        MatGroup::order(self)
    }

    fn identity(&self) -> usize {
        self.index_of(&self.algebra().identity())
            .expect("identity is an element")
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let e = self.elements();
        self.index_of(&self.algebra().mul(&e[a], &e[b]))
            .expect("group is closed")
    }

    fn inv(&self, a: usize) -> usize {
        let m = self
            .algebra()
            .inverse(&self.elements()[a])
            .expect("group elements are invertible");
        self.index_of(&m).expect("group is closed under inverses")
    }

    fn generators(&self) -> Vec<usize> {
        MatGroup::generators(self)
            .iter()
            .map(|g| self.index_of(g).expect("generators are elements"))
            .collect()
    }
}

/// The unit group of a residue ring, labelled by ascending code.
pub struct UnitGroup {
    ring: Arc<ResidueRing>,
    units: Vec<u64>,
}

impl UnitGroup {
    pub fn new(ring: Arc<ResidueRing>) -> Self {
        let units = ring.units();
        UnitGroup { ring, units }
    }

    pub fn label(&self, u: u64) -> Option<usize> {
        self.units.binary_search(&u).ok()
    }

    pub fn element(&self, label: usize) -> u64 {
        self.units[label]
    }
}

impl FiniteGroup for UnitGroup {
    fn order(&self) -> usize {
        self.units.len()
    }

    fn identity(&self) -> usize {
        self.label(self.ring.one()).expect("one is a unit")
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.label(self.ring.mul(self.units[a], self.units[b]))
            .expect("units are closed")
    }

    fn inv(&self, a: usize) -> usize {
        self.label(self.ring.inv(self.units[a]).expect("unit"))
            .expect("units are closed")
    }

    fn generators(&self) -> Vec<usize> {
        unit_generators(&self.ring)
            .into_iter()
            .map(|u| self.label(u).expect("unit"))
            .collect()
    }
}

/// `G / N` for a normal subgroup N, realized as cosets labelled in order of
/// their minimal element.
pub struct QuotientGroup {
    parent: Arc<dyn FiniteGroup>,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl QuotientGroup {
    /// `normal` must be a normal subgroup of `parent`.
    pub fn new(parent: Arc<dyn FiniteGroup>, normal: &[usize]) -> QuotientGroup {
        let n = parent.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let label = reps.len();
            reps.push(g);
            for &k in normal {
                coset_of[parent.mul(k, g)] = label;
            }
        }
        QuotientGroup { parent, reps, coset_of }
    }

    /// The quotient map on labels of the parent.
    pub fn project(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.reps[coset]
    }
}

impl FiniteGroup for QuotientGroup {
    fn order(&self) -> usize {
        self.reps.len()
    }

    fn identity(&self) -> usize {
        self.coset_of[self.parent.identity()]
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.coset_of[self.parent.mul(self.reps[a], self.reps[b])]
    }

    fn inv(&self, a: usize) -> usize {
        self.coset_of[self.parent.inv(self.reps[a])]
    }

    fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self
            .parent
            .generators()
            .into_iter()
            .map(|g| self.coset_of[g])
            .filter(|&c| c != self.identity())
            .collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }
}

/// Subgroup generated by `gens`, as a sorted label list.
pub fn generate(group: &dyn FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    let id = group.identity();
    seen[id] = true;
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        for &s in gens {
            let y = group.mul(list[i], s);
            if !seen[y] {
                seen[y] = true;
                list.push(y);
            }
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// Checks that `subset` is a subgroup; returns it sorted and deduplicated.
pub fn check_subgroup(group: &dyn FiniteGroup, subset: &[usize]) -> Result<Vec<usize>> {
    let n = group.order();
    let mut member = vec![false; n];
    for &x in subset {
        if x >= n {
            return Err(Error::SubgroupViolation(format!(
                "label {x} outside a group of order {n}"
            )));
        }
        member[x] = true;
    }
    if !member[group.identity()] {
        return Err(Error::SubgroupViolation("identity missing".into()));
    }
    // Greedy generators: each element outside the current span is added and
    // the span re-closed; the span must never leave the subset.
    let mut in_span = vec![false; n];
    in_span[group.identity()] = true;
    let mut span = vec![group.identity()];
    let mut gens = Vec::new();
    for x in (0..n).filter(|&x| member[x]) {
        if in_span[x] {
            continue;
        }
        gens.push(x);
        let start = span.len();
        for k in 0..start {
            let y = group.mul(span[k], x);
            if !in_span[y] {
                in_span[y] = true;
                span.push(y);
            }
        }
        let mut i = start;
        while i < span.len() {
            for &s in &gens {
                let y = group.mul(span[i], s);
                if !in_span[y] {
                    in_span[y] = true;
                    span.push(y);
                }
            }
            i += 1;
        }
        if let Some(bad) = span[start..].iter().find(|&&y| !member[y]) {
            return Err(Error::SubgroupViolation(format!(
                "product {bad} of subset elements lies outside the subset"
            )));
        }
    }
    span.sort_unstable();
    Ok(span)
}

/// Subgroup of `g1 x g2` generated by label pairs, sorted.
pub fn generate_in_product(g1: &dyn FiniteGroup, g2: &dyn FiniteGroup, gens: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let n2 = g2.order();
    let mut seen = vec![false; g1.order() * n2];
    let id = (g1.identity(), g2.identity());
    seen[id.0 * n2 + id.1] = true;
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        let (a, b) = list[i];
        for &(s, t) in gens {
            let y = (g1.mul(a, s), g2.mul(b, t));
            if !seen[y.0 * n2 + y.1] {
                seen[y.0 * n2 + y.1] = true;
                list.push(y);
            }
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// Goursat data: `G = {(x, y) : psi1(x) = psi2(y)}` with both maps onto
/// `gamma`.
pub struct FiberedProduct {
    pub g1: Arc<dyn FiniteGroup>,
    pub g2: Arc<dyn FiniteGroup>,
    pub gamma: Arc<QuotientGroup>,
    pub psi1: Vec<usize>,
    pub psi2: Vec<usize>,
    /// The subgroup that was decomposed, sorted.
    members: Vec<(usize, usize)>,
}

impl FiberedProduct {
    pub fn gamma_order(&self) -> usize {
        self.gamma.order()
    }

    /// `|G1| |G2| / |Gamma|`.
    pub fn order(&self) -> usize {
        self.g1.order() * self.g2.order() / self.gamma.order()
    }

    pub fn members(&self) -> &[(usize, usize)] {
        &self.members
    }

    /// Every pair over a common point of Gamma, sorted.
    pub fn realize(&self) -> Vec<(usize, usize)> {
        let fibers2 = fibers(&self.psi2, self.gamma.order());
        let mut out = Vec::with_capacity(self.order());
        for (x, &c) in self.psi1.iter().enumerate() {
            for &y in &fibers2[c] {
                out.push((x, y));
            }
        }
        out
    }

    /// Homomorphism property on all (element, generator) pairs and
    /// surjectivity by image count.
    pub fn check_maps(&self) -> Result<()> {
        for (name, g, psi) in [("psi1", &self.g1, &self.psi1), ("psi2", &self.g2, &self.psi2)] {
            let gens = g.generators();
            for x in 0..g.order() {
                for &s in &gens {
                    if psi[g.mul(x, s)] != self.gamma.mul(psi[x], psi[s]) {
                        return Err(Error::IdentityFailed(format!("{name} is not a homomorphism")));
                    }
                }
            }
            let image: HashSet<usize> = psi.iter().copied().collect();
            if image.len() != self.gamma.order() {
                return Err(Error::IdentityFailed(format!("{name} is not surjective")));
            }
        }
        Ok(())
    }
}

fn fibers(psi: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (x, &c) in psi.iter().enumerate() {
        out[c].push(x);
    }
    out
}

/// Decomposes a subgroup `g` of `g1 x g2` whose projections are onto.
pub fn goursat_decompose(
    g1: Arc<dyn FiniteGroup>,
    g2: Arc<dyn FiniteGroup>,
    g: &[(usize, usize)],
) -> Result<FiberedProduct> {
    let mut members = g.to_vec();
    members.sort_unstable();
    members.dedup();
    for (factor, group, image) in [
        (1usize, &g1, members.iter().map(|p| p.0).collect::<HashSet<_>>()),
        (2usize, &g2, members.iter().map(|p| p.1).collect::<HashSet<_>>()),
    ] {
        if image.len() != group.order() {
            return Err(Error::ProjectionNotSurjective {
                factor,
                image: image.len(),
                order: group.order(),
            });
        }
    }
    let e1 = g1.identity();
    let n2: Vec<usize> = members.iter().filter(|p| p.0 == e1).map(|p| p.1).collect();
    let gamma = Arc::new(QuotientGroup::new(g2.clone(), &n2));
    let psi2: Vec<usize> = (0..g2.order()).map(|y| gamma.project(y)).collect();
    let mut psi1 = vec![usize::MAX; g1.order()];
    for &(x, y) in &members {
        if psi1[x] == usize::MAX {
            psi1[x] = psi2[y];
        } else if psi1[x] != psi2[y] {
            return Err(Error::IdentityFailed(format!(
                "psi1 is not well defined at label {x}: partners lie in different cosets"
            )));
        }
    }
    let fp = FiberedProduct {
        g1,
        g2,
        gamma,
        psi1,
        psi2,
        members,
    };
    // Every member lies over a common point, so equal sizes mean equality.
    if fp.order() * fp.gamma_order() != fp.g1.order() * fp.g2.order() || fp.order() != fp.members.len() {
        return Err(Error::IdentityFailed(format!(
            "realized fibered product has {} elements, the input {}",
            fp.order(),
            fp.members.len()
        )));
    }
    fp.check_maps()?;
    Ok(fp)
}

/// `(H1 x H2) ∩ G` computed through Gamma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedIntersection {
    /// `psi1(H1) ∩ psi2(H2)`, sorted.
    pub gamma_h: Vec<usize>,
    /// `H1 ∩ psi1^{-1}(gamma_h)`, sorted.
    pub h1_restricted: Vec<usize>,
    /// `H2 ∩ psi2^{-1}(gamma_h)`, sorted.
    pub h2_restricted: Vec<usize>,
    /// The intersection, sorted.
    pub pairs: Vec<(usize, usize)>,
}

/// Intersects the fibered product with `h1 x h2`, cross-checks against the
/// direct filter of the decomposed group, and checks that both projections
/// of the result are onto the restricted subgroups.
pub fn fibered_intersect(fp: &FiberedProduct, h1: &[usize], h2: &[usize]) -> Result<FiberedIntersection> {
    let h1 = check_subgroup(fp.g1.as_ref(), h1)?;
    let h2 = check_subgroup(fp.g2.as_ref(), h2)?;
    let ng = fp.gamma.order();
    let mut hit1 = vec![false; ng];
    let mut hit2 = vec![false; ng];
    h1.iter().for_each(|&x| hit1[fp.psi1[x]] = true);
    h2.iter().for_each(|&y| hit2[fp.psi2[y]] = true);
    let gamma_h: Vec<usize> = (0..ng).filter(|&c| hit1[c] && hit2[c]).collect();
    let in_gamma_h = |c: usize| hit1[c] && hit2[c];
    let h1_restricted: Vec<usize> = h1.iter().copied().filter(|&x| in_gamma_h(fp.psi1[x])).collect();
    let h2_restricted: Vec<usize> = h2.iter().copied().filter(|&y| in_gamma_h(fp.psi2[y])).collect();

    let over = fibers(&fp.psi2, ng);
    let mut pairs = Vec::new();
    for &x in &h1_restricted {
        for &y in &over[fp.psi1[x]] {
            if h2_restricted.binary_search(&y).is_ok() {
                pairs.push((x, y));
            }
        }
    }
    pairs.sort_unstable();

    let mut in_h1 = vec![false; fp.g1.order()];
    let mut in_h2 = vec![false; fp.g2.order()];
    h1.iter().for_each(|&x| in_h1[x] = true);
    h2.iter().for_each(|&y| in_h2[y] = true);
    let direct: Vec<(usize, usize)> = fp
        .members
        .iter()
        .copied()
        .filter(|&(x, y)| in_h1[x] && in_h2[y])
        .collect();
    if direct != pairs {
        return Err(Error::IdentityFailed(format!(
            "fibered intersection has {} pairs, direct intersection {}",
            pairs.len(),
            direct.len()
        )));
    }
    let mut p1: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut p2: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    p1.sort_unstable();
    p1.dedup();
    p2.sort_unstable();
    p2.dedup();
    if p1 != h1_restricted || p2 != h2_restricted {
        return Err(Error::IdentityFailed(
            "a projection of the intersection is not onto".into(),
        ));
    }
    Ok(FiberedIntersection {
        gamma_h,
        h1_restricted,
        h2_restricted,
        pairs,
    })
}

/// Subgroup generated by `count` uniformly random elements.
pub fn random_subgroup<R: Rng>(group: &dyn FiniteGroup, rng: &mut R, count: usize) -> Vec<usize> {
    let gens: Vec<usize> = (0..count).map(|_| rng.gen_range(0..group.order())).collect();
    generate(group, &gens)
}

/// A random subgroup of `g1 x g2` with both projections onto: each
/// generator of either factor is paired with a random partner, and
/// `extra` uniformly random pairs are added.
pub fn random_subdirect<R: Rng>(
    g1: &dyn FiniteGroup,
    g2: &dyn FiniteGroup,
    rng: &mut R,
    extra: usize,
) -> Vec<(usize, usize)> {
    let mut gens = Vec::new();
    for s in g1.generators() {
        gens.push((s, rng.gen_range(0..g2.order())));
    }
    for t in g2.generators() {
        gens.push((rng.gen_range(0..g1.order()), t));
    }
    for _ in 0..extra {
        gens.push((rng.gen_range(0..g1.order()), rng.gen_range(0..g2.order())));
    }
    generate_in_product(g1, g2, &gens)
}

/// Outcome of a seeded run of the decomposition and intersection checks.
#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    /// Distinct (factor pair, subgroup) samples checked.
    pub samples: usize,
    /// Random draws made, repeats included.
    pub draws: usize,
    pub intersections: usize,
    pub failures: Vec<String>,
}

/// The factor groups sampled from: GL_2(Z/2), GL_2(Z/3) and unit groups
/// of Z/n.
pub fn sample_factors() -> Result<Vec<(String, Arc<dyn FiniteGroup>)>> {
    let mut out: Vec<(String, Arc<dyn FiniteGroup>)> = Vec::new();
    for n in [2u64, 3] {
        let alg = MatAlgebra::new(ResidueRing::new(&Ideal::integer(n)?)?, 2);
        out.push((
            format!("GL_2(Z/{n})"),
            Arc::new(MatGroup::full_linear(alg, DEFAULT_CAP)?),
        ));
    }
    for n in [5u64, 7, 8, 9, 12, 15, 16, 20, 21, 24] {
        out.push((
            format!("(Z/{n})^x"),
            Arc::new(UnitGroup::new(ResidueRing::new(&Ideal::integer(n)?)?)),
        ));
    }
    Ok(out)
}

/// Draws random subgroups G of G1 x G2 with onto projections until
/// `samples` distinct ones are found (or 50 draws per sample were spent).
/// Each is decomposed, checked to realize G with `|G| |Gamma| = |G1| |G2|`,
/// and intersected with `boxes` random `H1 x H2`, every intersection
/// cross-checked against direct filtering.
pub fn property_suite(seed: u64, samples: usize, boxes: usize) -> Result<SuiteReport> {
    let factors = sample_factors()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    let mut seen = HashSet::new();
    while report.samples < samples && report.draws < 50 * samples {
        report.draws += 1;
        let i = rng.gen_range(0..factors.len());
        let j = rng.gen_range(0..factors.len());
        let (name1, g1) = &factors[i];
        let (name2, g2) = &factors[j];
        let extra = rng.gen_range(0..=3);
        let g = random_subdirect(g1.as_ref(), g2.as_ref(), &mut rng, extra);
        if !seen.insert((i, j, g.clone())) {
            continue;
        }
        report.samples += 1;
        let tag = format!("{name1} x {name2}, subgroup of order {}", g.len());
        let fp = match goursat_decompose(g1.clone(), g2.clone(), &g) {
            Ok(fp) => fp,
            Err(e) => {
                report.failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        if fp.realize() != g {
            report.failures.push(format!("{tag}: realized group differs"));
        }
        if g.len() * fp.gamma_order() != g1.order() * g2.order() {
            report.failures.push(format!("{tag}: order law fails"));
        }
        for _ in 0..boxes {
            let k1 = rng.gen_range(1..=2);
            let k2 = rng.gen_range(1..=2);
            let h1 = random_subgroup(g1.as_ref(), &mut rng, k1);
            let h2 = random_subgroup(g2.as_ref(), &mut rng, k2);
            report.intersections += 1;
            if let Err(e) = fibered_intersect(&fp, &h1, &h2) {
                report.failures.push(format!("{tag}: {e}"));
            }
        }
    }
    Ok(report)
}
