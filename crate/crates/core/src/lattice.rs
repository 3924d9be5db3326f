//! Subgroups of the finite phase space ℤ_N^d × ℤ_N^d.
//!
//! A [`Lattice`] is stored as its full, canonically sorted point set together
//! with the generators it was built from. Covolumes are exact rationals.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupParams, PhaseSpacePoint, Twiddles};
use crate::signal::Signal;
use crate::transform::{commutation_phase, tf_shift_flat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    params: GroupParams,
    generators: Vec<PhaseSpacePoint>,
    indices: Vec<usize>,
    member: Vec<bool>,
}

impl Lattice {
    pub fn from_generators(params: GroupParams, gens: &[PhaseSpacePoint]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut flat = Vec::with_capacity(gens.len());
        let mut canon = Vec::with_capacity(gens.len());
        for g in gens {
            let g = PhaseSpacePoint::new(&params, &g.x, &g.omega)?;
            flat.push(g.flat(&params));
            canon.push(g);
        }
        let member = span(&params, &flat);
        Ok(Self::assemble(params, canon, member))
    }

    /// Builds a lattice from an explicit point set, which must already be a
    /// subgroup. A small generating set is extracted greedily.
    pub fn from_member_mask(params: GroupParams, member: Vec<bool>) -> Result<Self> {
        if member.len() != params.phase_size() {
            return Err(Error::DimensionMismatch { expected: params.phase_size(), got: member.len() });
        }
        if !member[0] {
            return Err(Error::InvalidParams("point set does not contain the origin".into()));
        }
        let gens = greedy_generators(&params, &member);
        let generated = span(&params, &gens);
        if generated != member {
            return Err(Error::InvalidParams("point set is not a subgroup".into()));
        }
        let canon = if gens.is_empty() {
            vec![PhaseSpacePoint::origin(&params)]
        } else {
            gens.iter().map(|&z| PhaseSpacePoint::from_flat(&params, z)).collect()
        };
        Ok(Self::assemble(params, canon, member))
    }

    fn assemble(params: GroupParams, generators: Vec<PhaseSpacePoint>, member: Vec<bool>) -> Self {
        let indices = member.iter().enumerate().filter_map(|(z, &m)| m.then_some(z)).collect();
        Self { params, generators, indices, member }
    }

    pub fn full(params: GroupParams) -> Self {
        Self::from_member_mask(params, vec![true; params.phase_size()]).expect("whole group")
    }

    pub fn trivial(params: GroupParams) -> Self {
        Self::from_generators(params, &[PhaseSpacePoint::origin(&params)]).expect("origin")
    }

    /// Separable lattice `aℤ_N^d × bℤ_N^d`.
    pub fn separable(params: GroupParams, a: usize, b: usize) -> Result<Self> {
        let d = params.d();
        let mut gens = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut x = vec![0; d];
            x[i] = a;
            gens.push(PhaseSpacePoint::new(&params, &x, &vec![0; d])?);
            let mut w = vec![0; d];
            w[i] = b;
            gens.push(PhaseSpacePoint::new(&params, &vec![0; d], &w)?);
        }
        Self::from_generators(params, &gens)
    }

    #[inline]
    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn generators(&self) -> &[PhaseSpacePoint] {
        &self.generators
    }

    /// Sorted flat phase-space indices of the lattice points.
    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn points(&self) -> Vec<PhaseSpacePoint> {
        self.indices.iter().map(|&z| PhaseSpacePoint::from_flat(&self.params, z)).collect()
    }

    #[inline]
    pub fn cardinality(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn contains_flat(&self, z: usize) -> bool {
        self.member[z]
    }

    pub fn contains(&self, z: &PhaseSpacePoint) -> bool {
        self.member[z.flat(&self.params)]
    }

    /// `N^d / |Λ|`, reduced.
    pub fn covolume(&self) -> Ratio<u64> {
        Ratio::new(self.params.size() as u64, self.cardinality() as u64)
    }

    /// `|Λ| / N^d`, the normalizer in front of adjoint-lattice sums.
    pub fn inverse_covolume(&self) -> Ratio<u64> {
        self.covolume().recip()
    }

    /// Exhaustively re-checks the subgroup invariants.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let fail = |m: &str| Err(Error::InvalidParams(format!("{self}: {m}")));
        if !self.member[0] {
            return fail("missing origin");
        }
        for &a in &self.indices {
            for &b in &self.indices {
                if !self.member[add_flat(p, a, b)] {
                    return fail("not closed under addition");
                }
            }
        }
        if !p.phase_size().is_multiple_of(self.cardinality()) {
            return fail("cardinality does not divide N^(2d)");
        }
        if self.covolume() * Ratio::from_integer(self.cardinality() as u64) != Ratio::from_integer(p.size() as u64) {
            return fail("covolume · cardinality ≠ N^d");
        }
        Ok(())
    }

    /// `"N=12;d=1;gens=(3,0),(0,4)"`. A generator lists its `d` position
    /// components followed by its `d` frequency components.
    pub fn literal(&self) -> String {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let parts: Vec<String> = g.x.iter().chain(&g.omega).map(|c| c.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect::<Vec<_>>()
            .join(",");
        format!("{};gens={}", self.params, gens)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_literal(s)
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.literal())
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn parse_literal(s: &str) -> Result<Lattice> {
    let err = |m: String| Error::LatticeLiteral(m);
    let (mut n, mut d, mut gens) = (None, None, None);
    for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
        let (key, value) = field.split_once('=').ok_or_else(|| err(format!("field '{field}' is not key=value")))?;
        let value = value.trim();
        match key.trim() {
            "N" | "n" => {
                n = Some(value.parse::<usize>().map_err(|e| err(format!("N: {e}")))?);
            }
            "d" => d = Some(value.parse::<usize>().map_err(|e| err(format!("d: {e}")))?),
            "gens" => gens = Some(parse_tuples(value).map_err(err)?),
            other => return Err(err(format!("unknown field '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| err("missing N".into()))?;
    let params = GroupParams::new(n, d.unwrap_or(1))?;
    let gens = gens.ok_or_else(|| err("missing gens".into()))?;
    let dim = params.d();
    let points = gens
        .iter()
        .map(|t| {
            if t.len() != 2 * dim {
                return Err(err(format!("generator has {} components, expected {}", t.len(), 2 * dim)));
            }
            PhaseSpacePoint::from_signed(&params, &t[..dim], &t[dim..])
        })
        .collect::<Result<Vec<_>>>()?;
    Lattice::from_generators(params, &points)
}

fn parse_tuples(s: &str) -> std::result::Result<Vec<Vec<i64>>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(').ok_or_else(|| format!("expected '(' at '{rest}'"))?;
        let close = rest.find(')').ok_or("unterminated tuple")?;
        let tuple = rest[..close]
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|e| format!("component '{c}': {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        out.push(tuple);
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        }
    }
    if out.is_empty() {
        return Err("empty generator list".into());
    }
    Ok(out)
}

fn add_flat(p: &GroupParams, a: usize, b: usize) -> usize {
    let (ax, aw) = p.split(a);
    let (bx, bw) = p.split(b);
    p.join(p.add(ax, bx), p.add(aw, bw))
}

/// Membership mask of the subgroup generated by flat points.
fn span(p: &GroupParams, gens: &[usize]) -> Vec<bool> {
    let mut member = vec![false; p.phase_size()];
    member[0] = true;
    let mut points = vec![0usize];
    for &g in gens {
        if member[g] {
            continue;
        }
        // S + <g> = union of cosets S + k·g until k·g falls back into S.
        let base = points.clone();
        let mut step = g;
        while !member[step] {
            for &s in &base {
                let q = add_flat(p, s, step);
                if !member[q] {
                    member[q] = true;
                    points.push(q);
                }
            }
            step = add_flat(p, step, g);
        }
    }
    member
}

fn greedy_generators(p: &GroupParams, target: &[bool]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = span(p, &gens);
    for (z, &m) in target.iter().enumerate() {
        if m && !current[z] {
            gens.push(z);
            current = span(p, &gens);
        }
    }
    gens
}

/// Adjoint lattice `Λ⁰ = {z : σ(λ, z) ≡ 0 mod N for all λ ∈ Λ}`, i.e. the
/// points whose time-frequency shifts commute with every `π(λ)`.
pub fn adjoint_lattice(lattice: &Lattice) -> Lattice {
    let p = *lattice.params();
    let gens: Vec<usize> = lattice.generators.iter().map(|g| g.flat(&p)).collect();
    let member = (0..p.phase_size()).map(|z| gens.iter().all(|&g| commutation_phase(&p, g, z) == 0)).collect();
    Lattice::from_member_mask(p, member).expect("annihilator is a subgroup")
}

/// Adjoint lattice computed from the operator definition: the points `z`
/// with `π(λ)π(z) = π(z)π(λ)` on every basis signal, for every `λ ∈ Λ`.
/// Quadratic in the group size; intended as an independent cross-check.
pub fn adjoint_by_commutation(lattice: &Lattice) -> Result<Lattice> {
    let p = *lattice.params();
    let tw = Twiddles::new(p.n());
    let basis: Vec<Signal> = (0..p.size()).map(|t| Signal::delta(p, &p.unflatten(t))).collect::<Result<_>>()?;
    let member = (0..p.phase_size())
        .map(|z| {
            let (zx, zw) = p.split(z);
            lattice.indices.iter().all(|&l| {
                let (lx, lw) = p.split(l);
                basis.iter().all(|e| {
                    let a = tf_shift_flat(&tf_shift_flat(e, zx, zw, &tw), lx, lw, &tw);
                    let b = tf_shift_flat(&tf_shift_flat(e, lx, lw, &tw), zx, zw, &tw);
                    a.max_abs_diff(&b) < 1e-9
                })
            })
        })
        .collect();
    Lattice::from_member_mask(p, member)
}

/// Annihilator under the pairing `⟨(x,ω),(u,η)⟩ = x·u + ω·η mod N`.
pub fn dual_lattice(lattice: &Lattice) -> Lattice {
    let p = *lattice.params();
    let gens: Vec<usize> = lattice.generators.iter().map(|g| g.flat(&p)).collect();
    let member = (0..p.phase_size())
        .map(|z| {
            let (zx, zw) = p.split(z);
            gens.iter().all(|&g| {
                let (gx, gw) = p.split(g);
                (p.dot(gx, zx) + p.dot(gw, zw)).is_multiple_of(p.n())
            })
        })
        .collect();
    Lattice::from_member_mask(p, member).expect("annihilator is a subgroup")
}

/// `J(x, ω) = (ω, -x)` on a flat index.
pub fn rotate_point(p: &GroupParams, z: usize) -> usize {
    let (x, w) = p.split(z);
    p.join(w, p.neg(x))
}

/// `J⁻¹(x, ω) = (-ω, x)` on a flat index.
pub fn rotate_point_inverse(p: &GroupParams, z: usize) -> usize {
    let (x, w) = p.split(z);
    p.join(p.neg(w), x)
}

/// Image of the lattice under the quarter rotation `J`.
pub fn rotate_j(lattice: &Lattice) -> Lattice {
    map_lattice(lattice, rotate_point)
}

pub(crate) fn map_lattice(lattice: &Lattice, f: fn(&GroupParams, usize) -> usize) -> Lattice {
    let p = *lattice.params();
    let mut member = vec![false; p.phase_size()];
    for &z in &lattice.indices {
        member[f(&p, z)] = true;
    }
    let generators = lattice.generators.iter().map(|g| PhaseSpacePoint::from_flat(&p, f(&p, g.flat(&p)))).collect();
    Lattice::assemble(p, generators, member)
}

/// Every subgroup of ℤ_N × ℤ_N (d = 1), canonically ordered by point set.
pub fn all_subgroups(params: GroupParams) -> Result<Vec<Lattice>> {
    if params.d() != 1 {
        return Err(Error::InvalidParams("subgroup enumeration is implemented for d = 1 only".into()));
    }
    let ps = params.phase_size();
    // Every subgroup of ℤ_N² is generated by two elements.
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in 0..ps {
        for b in a..ps {
            let m = span(&params, &[a, b]);
            let key: Vec<usize> = m.iter().enumerate().filter_map(|(z, &v)| v.then_some(z)).collect();
            if seen.insert(key) {
                out.push(Lattice::from_member_mask(params, m)?);
            }
        }
    }
    out.sort_by(|a, b| a.indices.cmp(&b.indices));
    Ok(out)
}
