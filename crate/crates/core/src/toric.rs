//! Smooth complete fans, their torus fixed points, equivariant line bundles
//! given by Cartier data, and lattice polytopes.
//!
//! Orientation: at the fixed point of a maximal cone `σ` the cotangent
//! characters are the dual basis of `σ`'s ray generators, and `O(D)` has fiber
//! character `t^{m_σ}` where `⟨m_σ, v_ρ⟩ = -a_ρ` on the rays of `σ`. With these
//! signs the fixed-point sum for a nef `D` is exactly the lattice-point
//! generating function of `P_D = {m : ⟨m, v_ρ⟩ ≥ -a_ρ}`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characters::{Character, CharacterGroup};
use crate::error::{Error, Result};
use crate::lattice::{self, Matrix};

const ORACLE_LIMIT: u128 = 1_000_000;
const COMPLETENESS_SAMPLES: usize = 2000;

#[derive(Deserialize)]
struct RawFan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// A validated smooth complete fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    /// ray indices of each maximal cone, sorted
    cones: Vec<Vec<usize>>,
    /// dual basis per cone, rows aligned with `cones[i]`
    #[serde(skip)]
    duals: Vec<Matrix>,
}

pub fn parse_fan(description: &str) -> Result<Fan> {
    let raw: RawFan = serde_json::from_str(description)
        .map_err(|e| Error::MalformedInput(format!("fan: {e}")))?;
    Fan::new(raw.dim, raw.rays, raw.cones)
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFan::deserialize(d)?;
        Fan::new(raw.dim, raw.rays, raw.cones).map_err(serde::de::Error::custom)
    }
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedInput(
                "fan dimension must be at least 1".into(),
            ));
        }
        if cones.is_empty() {
            return Err(Error::MalformedInput("fan has no maximal cones".into()));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::MalformedInput(format!(
                    "ray {i} has {} entries, expected {dim}",
                    ray.len()
                )));
            }
            if lattice::gcd_all(ray) != 1 {
                return Err(Error::NotPrimitive {
                    index: i,
                    ray: ray.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        let mut sorted_cones = Vec::with_capacity(cones.len());
        for (i, cone) in cones.iter().enumerate() {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if c.len() != dim || cone.len() != dim {
                return Err(Error::MalformedInput(format!(
                    "cone {i} must list {dim} distinct rays"
                )));
            }
            if let Some(&bad) = c.iter().find(|&&r| r >= rays.len()) {
                return Err(Error::MalformedInput(format!(
                    "cone {i} refers to missing ray {bad}"
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::MalformedInput(format!("cone {i} is listed twice")));
            }
            sorted_cones.push(c);
        }
        let used: BTreeSet<usize> = sorted_cones.iter().flatten().copied().collect();
        if let Some(unused) = (0..rays.len()).find(|r| !used.contains(r)) {
            return Err(Error::MalformedInput(format!(
                "ray {unused} lies in no maximal cone"
            )));
        }

        let mut duals = Vec::with_capacity(sorted_cones.len());
        for (i, cone) in sorted_cones.iter().enumerate() {
            let columns: Matrix = cone.iter().map(|&r| rays[r].clone()).collect();
            let m = lattice::transpose(&columns, dim);
            let det = lattice::det(&m);
            if det.abs() != 1 {
                return Err(Error::NotSmooth { index: i, det });
            }
            duals.push(lattice::unimodular_inverse(&m).expect("unimodular"));
        }
        let fan = Fan {
            dim,
            rays,
            cones: sorted_cones,
            duals,
        };
        fan.check_complete()?;
        Ok(fan)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn group(&self) -> CharacterGroup {
        CharacterGroup::torus(self.dim)
    }

    /// Dual basis of cone `i`: row `j` pairs to 1 with the `j`-th ray of the cone.
    pub fn dual_basis(&self, i: usize) -> &Matrix {
        &self.duals[i]
    }

    fn check_complete(&self) -> Result<()> {
        // every facet in exactly two maximal cones, lying on opposite sides of it
        let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.cones.iter().enumerate() {
            for drop in 0..self.dim {
                let facet: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != drop)
                    .map(|(_, &r)| r)
                    .collect();
                facets.entry(facet).or_default().push((ci, drop));
            }
        }
        let mut adjacency = vec![Vec::new(); self.cones.len()];
        for (facet, owners) in &facets {
            if owners.len() != 2 {
                return Err(Error::NotComplete(format!(
                    "facet spanned by rays {facet:?} lies in {} maximal cone(s)",
                    owners.len()
                )));
            }
            let (a, drop_a) = owners[0];
            let (b, drop_b) = owners[1];
            let normal = &self.duals[a][drop_a];
            let other_ray = &self.rays[self.cones[b][drop_b]];
            if lattice::dot(normal, other_ray) >= 0 {
                return Err(Error::NotComplete(format!(
                    "cones {a} and {b} overlap across the facet {facet:?}"
                )));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut reached = vec![false; self.cones.len()];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &adjacency[c] {
                if !reached[d] {
                    reached[d] = true;
                    stack.push(d);
                }
            }
        }
        if let Some(lost) = reached.iter().position(|r| !r) {
            return Err(Error::NotComplete(format!(
                "cone {lost} is not connected to cone 0"
            )));
        }
        if self.dim <= 3 {
            self.sample_coverage()?;
        }
        Ok(())
    }

    fn sample_coverage(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fa11);
        for _ in 0..COMPLETENESS_SAMPLES {
            let p: Vec<i64> = (0..self.dim).map(|_| rng.gen_range(-1000..=1000)).collect();
            let mut closed = 0;
            let mut interior = 0;
            for dual in &self.duals {
                let coords = lattice::mat_vec(dual, &p);
                if coords.iter().all(|&x| x >= 0) {
                    closed += 1;
                    if coords.iter().all(|&x| x > 0) {
                        interior += 1;
                    }
                }
            }
            if closed == 0 {
                return Err(Error::NotComplete(format!("point {p:?} lies in no cone")));
            }
            if interior > 1 {
                return Err(Error::NotComplete(format!(
                    "point {p:?} lies in several cones"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fan serializes")
    }

    /// Product fan; rays of `other` follow those of `self`.
    pub fn product(&self, other: &Fan) -> Result<Fan> {
        let dim = self.dim + other.dim;
        let mut rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| {
                r.iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, other.dim))
                    .collect()
            })
            .collect();
        rays.extend(other.rays.iter().map(|r| {
            std::iter::repeat_n(0, self.dim)
                .chain(r.iter().copied())
                .collect()
        }));
        let offset = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.cones {
            for b in &other.cones {
                cones.push(
                    a.iter()
                        .copied()
                        .chain(b.iter().map(|&r| r + offset))
                        .collect(),
                );
            }
        }
        Fan::new(dim, rays, cones)
    }

    /// Image under a unimodular change of lattice basis, rays `v ↦ U v`.
    pub fn transform(&self, u: &Matrix) -> Result<Fan> {
        let rays = self.rays.iter().map(|r| lattice::mat_vec(u, r)).collect();
        Fan::new(self.dim, rays, self.cones.clone())
    }
}

/// An equivariant line bundle `O(Σ a_ρ D_ρ)` with its local characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierData {
    #[serde(skip)]
    fan: Fan,
    ray_coeffs: Vec<i64>,
    per_cone_m: Vec<Vec<i64>>,
}

/// Divisor wire form `{"coeffs": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub coeffs: Vec<i64>,
}

pub fn cartier_from_divisor(fan: &Fan, ray_coeffs: &[i64]) -> Result<CartierData> {
    if ray_coeffs.len() != fan.rays.len() {
        return Err(Error::MalformedInput(format!(
            "divisor has {} coefficients for {} rays",
            ray_coeffs.len(),
            fan.rays.len()
        )));
    }
    let per_cone_m = fan
        .cones
        .iter()
        .zip(&fan.duals)
        .map(|(cone, dual)| {
            // m = Σ_j (-a_{ρ_j}) u_j
            (0..fan.dim)
                .map(|k| {
                    cone.iter()
                        .enumerate()
                        .map(|(j, &r)| -ray_coeffs[r] * dual[j][k])
                        .sum()
                })
                .collect()
        })
        .collect();
    CartierData::new(fan, ray_coeffs.to_vec(), per_cone_m)
}

impl CartierData {
    pub fn new(fan: &Fan, ray_coeffs: Vec<i64>, per_cone_m: Vec<Vec<i64>>) -> Result<Self> {
        if ray_coeffs.len() != fan.rays.len() || per_cone_m.len() != fan.cones.len() {
            return Err(Error::MalformedInput(
                "Cartier data does not match the fan".into(),
            ));
        }
        for (ci, (cone, m)) in fan.cones.iter().zip(&per_cone_m).enumerate() {
            if m.len() != fan.dim {
                return Err(Error::MalformedInput(format!(
                    "m for cone {ci} has the wrong length"
                )));
            }
            // local linearity; facet agreement follows since shared rays get the same value
            for &r in cone {
                if lattice::dot(m, &fan.rays[r]) != -ray_coeffs[r] {
                    return Err(Error::InconsistentData(format!(
                        "<m_{ci}, v_{r}> != -a_{r}"
                    )));
                }
            }
        }
        Ok(CartierData {
            fan: fan.clone(),
            ray_coeffs,
            per_cone_m,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn ray_coeffs(&self) -> &[i64] {
        &self.ray_coeffs
    }

    pub fn per_cone_m(&self) -> &[Vec<i64>] {
        &self.per_cone_m
    }

    /// `D ⊠ E` on the product fan built by [`Fan::product`].
    pub fn product(&self, other: &CartierData) -> Result<CartierData> {
        let fan = self.fan.product(&other.fan)?;
        let coeffs: Vec<i64> = self
            .ray_coeffs
            .iter()
            .chain(&other.ray_coeffs)
            .copied()
            .collect();
        cartier_from_divisor(&fan, &coeffs)
    }
}

/// Global convexity of the support function.
pub fn is_nef(d: &CartierData) -> bool {
    d.per_cone_m.iter().all(|m| {
        d.fan
            .rays
            .iter()
            .zip(&d.ray_coeffs)
            .all(|(v, &a)| lattice::dot(m, v) >= -a)
    })
}

/// A torus fixed point `x_σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointDatum {
    pub cone: usize,
    pub cotangent_chars: Vec<Character>,
    pub fiber_char: Option<Character>,
}

pub fn fixed_points(fan: &Fan, d: Option<&CartierData>) -> Vec<FixedPointDatum> {
    let group = fan.group();
    (0..fan.cones.len())
        .map(|i| FixedPointDatum {
            cone: i,
            cotangent_chars: fan.duals[i]
                .iter()
                .map(|u| group.free_character(u).expect("torus character"))
                .collect(),
            fiber_char: d.map(|d| {
                group
                    .free_character(&d.per_cone_m[i])
                    .expect("torus character")
            }),
        })
        .collect()
}

fn bounding_box_points<F>(points: &[Vec<i64>], dim: usize, keep: F) -> Result<Vec<Vec<i64>>>
where
    F: Fn(&[i64]) -> bool,
{
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let lo: Vec<i64> = (0..dim)
        .map(|k| points.iter().map(|p| p[k]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|k| points.iter().map(|p| p[k]).max().unwrap())
        .collect();
    let count: u128 = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| (h - l + 1) as u128)
        .product();
    if count > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge(count));
    }
    let mut out = Vec::new();
    let mut p = lo.clone();
    // odometer over the box, innermost coordinate last, so output is lexicographic
    loop {
        if keep(&p) {
            out.push(p.clone());
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if p[k] < hi[k] {
                p[k] += 1;
                p[k + 1..].copy_from_slice(&lo[k + 1..]);
                break;
            }
        }
    }
}

/// Lattice points of `{m : ⟨m, v_ρ⟩ ≥ -a_ρ}` inside the bounding box of the `m_σ`, sorted.
pub fn polytope_points(d: &CartierData) -> Result<Vec<Vec<i64>>> {
    let fan = &d.fan;
    bounding_box_points(&d.per_cone_m, fan.dim, |m| {
        fan.rays
            .iter()
            .zip(&d.ray_coeffs)
            .all(|(v, &a)| lattice::dot(m, v) >= -a)
    })
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    #[serde(default)]
    normals: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    offsets: Option<Vec<i64>>,
    #[serde(default)]
    vertices: Option<Vec<Vec<i64>>>,
}

/// A lattice polytope `{m : ⟨m, normal_i⟩ ≥ -offset_i}` together with its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polytope {
    dim: usize,
    normals: Vec<Vec<i64>>,
    offsets: Vec<i64>,
    vertices: Vec<Vec<i64>>,
}

pub fn parse_polytope(description: &str) -> Result<Polytope> {
    let raw: RawPolytope = serde_json::from_str(description)
        .map_err(|e| Error::MalformedInput(format!("polytope: {e}")))?;
    match (raw.normals, raw.offsets, raw.vertices) {
        (Some(n), Some(o), None) => Polytope::from_inequalities(raw.dim, n, o),
        (None, None, Some(v)) => Polytope::from_vertices(raw.dim, v),
        (None, None, None) if raw.dim == 0 => Polytope::from_inequalities(0, vec![], vec![]),
        _ => Err(Error::MalformedInput(
            "polytope needs either normals+offsets or vertices".into(),
        )),
    }
}

impl Polytope {
    pub fn from_inequalities(
        dim: usize,
        normals: Vec<Vec<i64>>,
        offsets: Vec<i64>,
    ) -> Result<Self> {
        if normals.len() != offsets.len() || normals.iter().any(|n| n.len() != dim) {
            return Err(Error::MalformedInput(
                "inequality shapes do not match".into(),
            ));
        }
        if !recession_cone_is_trivial(dim, &normals) {
            return Err(Error::Unbounded);
        }
        let vertices = enumerate_vertices(dim, &normals, &offsets)?;
        if vertices.is_empty() {
            return Err(Error::Unbounded);
        }
        Ok(Polytope {
            dim,
            normals,
            offsets,
            vertices,
        })
    }

    /// Convex hull of lattice points; must be a single point or full-dimensional.
    pub fn from_vertices(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| p.len() != dim) {
            return Err(Error::MalformedInput(
                "vertex list shapes do not match".into(),
            ));
        }
        let mut distinct = points.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() == 1 {
            let p = &distinct[0];
            let mut normals = Vec::new();
            let mut offsets = Vec::new();
            for k in 0..dim {
                let mut e = vec![0; dim];
                e[k] = 1;
                offsets.push(-p[k]);
                normals.push(e.clone());
                e[k] = -1;
                offsets.push(p[k]);
                normals.push(e);
            }
            return Ok(Polytope {
                dim,
                normals,
                offsets,
                vertices: distinct,
            });
        }
        let diffs: Matrix = distinct[1..]
            .iter()
            .map(|p| p.iter().zip(&distinct[0]).map(|(a, b)| a - b).collect())
            .collect();
        if lattice::smith(&diffs, dim).rank != dim {
            return Err(Error::MalformedInput(
                "vertex list must be a single point or full-dimensional".into(),
            ));
        }
        let mut facets: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
        for subset in combinations(distinct.len(), dim) {
            let base = &distinct[subset[0]];
            let rows: Matrix = subset[1..]
                .iter()
                .map(|&i| distinct[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let normal = cofactor_normal(&rows, dim);
            let g = lattice::gcd_all(&normal);
            if g == 0 {
                continue;
            }
            let normal: Vec<i64> = normal.iter().map(|x| x / g).collect();
            let level = lattice::dot(&normal, base);
            let sides: Vec<i64> = distinct
                .iter()
                .map(|p| lattice::dot(&normal, p) - level)
                .collect();
            if sides.iter().all(|&s| s >= 0) {
                facets.insert((normal, -level));
            } else if sides.iter().all(|&s| s <= 0) {
                facets.insert((normal.iter().map(|x| -x).collect(), level));
            }
        }
        let (normals, offsets) = facets.into_iter().unzip();
        Self::from_inequalities(dim, normals, offsets)
    }

    /// `P_D` of a Cartier divisor.
    pub fn from_cartier(d: &CartierData) -> Result<Self> {
        Self::from_inequalities(d.fan.dim, d.fan.rays.clone(), d.ray_coeffs.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(v, &a)| lattice::dot(m, v) >= -a)
    }

    /// Indices of the inequalities tight at `m`.
    pub fn tight(&self, m: &[i64]) -> Vec<usize> {
        (0..self.normals.len())
            .filter(|&i| lattice::dot(m, &self.normals[i]) == -self.offsets[i])
            .collect()
    }

    /// Lattice points by bounding-box enumeration, sorted.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        bounding_box_points(&self.vertices, self.dim, |m| self.contains(m))
    }

    /// Primitive edge directions of the tangent cone at a vertex, when it is simple and unimodular.
    pub fn vertex_cone(&self, vertex: &[i64]) -> Result<Matrix> {
        let tight = self.tight(vertex);
        if tight.len() != self.dim {
            return Err(Error::NotSmoothVertexCone(vertex.to_vec()));
        }
        let columns: Matrix = tight.iter().map(|&i| self.normals[i].clone()).collect();
        let m = lattice::transpose(&columns, self.dim);
        let dual = lattice::unimodular_inverse(&m)
            .ok_or_else(|| Error::NotSmoothVertexCone(vertex.to_vec()))?;
        for edge in &dual {
            // some inequality must eventually cut the edge off
            if self.normals.iter().all(|v| lattice::dot(edge, v) >= 0) {
                return Err(Error::Unbounded);
            }
        }
        Ok(dual)
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Normal to the hyperplane spanned by `dim - 1` row vectors (generalized cross product).
fn cofactor_normal(rows: &Matrix, dim: usize) -> Vec<i64> {
    (0..dim)
        .map(|i| {
            let minor: Matrix = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * lattice::det(&minor)
        })
        .collect()
}

/// `{u : ⟨u, normal_i⟩ ≥ 0 ∀i} = {0}`: the normals span, and no candidate
/// extreme ray (cut out by `dim - 1` of them) satisfies every inequality.
fn recession_cone_is_trivial(dim: usize, normals: &[Vec<i64>]) -> bool {
    if dim == 0 {
        return true;
    }
    if lattice::smith(&normals.to_vec(), dim).rank != dim {
        return false;
    }
    for subset in combinations(normals.len(), dim - 1) {
        let rows: Matrix = subset.iter().map(|&i| normals[i].clone()).collect();
        let u = cofactor_normal(&rows, dim);
        if u.iter().all(|&x| x == 0) {
            continue;
        }
        for sign in [1, -1] {
            if normals.iter().all(|v| sign * lattice::dot(&u, v) >= 0) {
                return false;
            }
        }
    }
    true
}

fn enumerate_vertices(dim: usize, normals: &[Vec<i64>], offsets: &[i64]) -> Result<Vec<Vec<i64>>> {
    if dim == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut found = BTreeSet::new();
    for subset in combinations(normals.len(), dim) {
        let a: Matrix = subset.iter().map(|&i| normals[i].clone()).collect();
        let det = lattice::det(&a);
        if det == 0 {
            continue;
        }
        let rhs: Vec<i64> = subset.iter().map(|&i| -offsets[i]).collect();
        // Cramer's rule; only lattice vertices are accepted
        let mut point = Vec::with_capacity(dim);
        let mut integral = true;
        for k in 0..dim {
            let mut ak = a.clone();
            for (row, &b) in ak.iter_mut().zip(&rhs) {
                row[k] = b;
            }
            let num = lattice::det(&ak);
            if num % det != 0 {
                integral = false;
                break;
            }
            point.push(num / det);
        }
        let feasible = |p: &[i64]| {
            normals
                .iter()
                .zip(offsets)
                .all(|(v, &o)| lattice::dot(p, v) >= -o)
        };
        if !integral {
            // a rational vertex of the polyhedron is still a vertex
            let feasible_rational = rational_feasible(&a, &rhs, det, normals, offsets);
            if feasible_rational {
                return Err(Error::MalformedInput(
                    "polytope has a non-lattice vertex".into(),
                ));
            }
            continue;
        }
        if feasible(&point) {
            found.insert(point);
        }
    }
    Ok(found.into_iter().collect())
}

fn rational_feasible(
    a: &Matrix,
    rhs: &[i64],
    det: i64,
    normals: &[Vec<i64>],
    offsets: &[i64],
) -> bool {
    let dim = a.len();
    // scaled point det·x is integral
    let scaled: Vec<i64> = (0..dim)
        .map(|k| {
            let mut ak = a.clone();
            for (row, &b) in ak.iter_mut().zip(rhs) {
                row[k] = b;
            }
            lattice::det(&ak)
        })
        .collect();
    let s = det.signum();
    normals
        .iter()
        .zip(offsets)
        .all(|(v, &o)| s * lattice::dot(&scaled, v) >= -o * det.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    fn p2() -> Fan {
        parse_fan(r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,0]]}"#)
            .unwrap()
    }

    #[test]
    fn fan_validation() {
        assert_eq!(p1().cones().len(), 2);
        assert_eq!(p2().cones().len(), 3);
        let bad = parse_fan(
            r#"{"dim": 2, "rays": [[1,0],[1,2],[-1,0],[0,-1]], "cones": [[0,1],[1,2],[2,3],[3,0]]}"#,
        );
        assert!(matches!(bad, Err(Error::NotSmooth { index: 0, det: 2 })));
        let bad = parse_fan(r#"{"dim": 1, "rays": [[2],[-1]], "cones": [[0],[1]]}"#);
        assert!(matches!(bad, Err(Error::NotPrimitive { index: 0, .. })));
        // the positive quadrant alone is not complete
        let bad = parse_fan(r#"{"dim": 2, "rays": [[1,0],[0,1]], "cones": [[0,1]]}"#);
        assert!(matches!(bad, Err(Error::NotComplete(_))));
        // a double cover of the plane pairs every facet but overlaps
        let bad = parse_fan(r#"{"dim": 1, "rays": [[1],[1]], "cones": [[0],[1]]}"#);
        assert!(matches!(bad, Err(Error::NotComplete(_))));
        assert!(matches!(
            parse_fan("{\"dim\": 2}"),
            Err(Error::MalformedInput(_))
        ));
        let bad =
            parse_fan(r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,5]]}"#);
        assert!(matches!(bad, Err(Error::MalformedInput(_))));
    }

    #[test]
    fn fixed_point_counts() {
        assert_eq!(fixed_points(&p1(), None).len(), 2);
        assert_eq!(fixed_points(&p2(), None).len(), 3);
        assert_eq!(fixed_points(&p1().product(&p1()).unwrap(), None).len(), 4);
    }

    #[test]
    fn cotangent_characters_are_dual() {
        let fan = p2();
        for (i, fp) in fixed_points(&fan, None).iter().enumerate() {
            for (j, u) in fp.cotangent_chars.iter().enumerate() {
                for (k, &r) in fan.cones()[i].iter().enumerate() {
                    assert_eq!(lattice::dot(&u.free, &fan.rays()[r]), i64::from(j == k));
                }
            }
        }
    }

    #[test]
    fn cartier_examples() {
        let d = cartier_from_divisor(&p1(), &[0, 3]).unwrap();
        assert_eq!(d.per_cone_m(), &[vec![0], vec![3]]);
        let d = cartier_from_divisor(&p2(), &[0, 0, 1]).unwrap();
        let ms: BTreeSet<Vec<i64>> = d.per_cone_m().iter().cloned().collect();
        assert_eq!(
            ms,
            [vec![0, 0], vec![1, 0], vec![0, 1]].into_iter().collect()
        );
        let d = cartier_from_divisor(&p2(), &[0, 0, 0]).unwrap();
        assert!(d.per_cone_m().iter().all(|m| m == &vec![0, 0]));
        assert!(CartierData::new(&p1(), vec![0, 1], vec![vec![0], vec![0]]).is_err());
    }

    #[test]
    fn nef_examples() {
        assert!(is_nef(&cartier_from_divisor(&p2(), &[0, 0, 1]).unwrap()));
        assert!(is_nef(&cartier_from_divisor(&p2(), &[0, 0, 0]).unwrap()));
        assert!(!is_nef(&cartier_from_divisor(&p1(), &[0, -1]).unwrap()));
    }

    #[test]
    fn point_enumeration() {
        let d = cartier_from_divisor(&p1(), &[0, 2]).unwrap();
        assert_eq!(
            polytope_points(&d).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        let d = cartier_from_divisor(&p2(), &[0, 0, 1]).unwrap();
        assert_eq!(
            polytope_points(&d).unwrap(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0]]
        );
        let d = cartier_from_divisor(&p2(), &[0, 0, 0]).unwrap();
        assert_eq!(polytope_points(&d).unwrap(), vec![vec![0, 0]]);
        let d = cartier_from_divisor(&p1(), &[0, 2_000_000]).unwrap();
        assert!(matches!(polytope_points(&d), Err(Error::OracleTooLarge(_))));
    }

    #[test]
    fn polytope_vertices_from_both_sides() {
        let square =
            Polytope::from_vertices(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
                .unwrap();
        assert_eq!(square.normals().len(), 4);
        assert_eq!(square.lattice_points().unwrap().len(), 4);
        let tri = Polytope::from_inequalities(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![0, 0, 2],
        )
        .unwrap();
        assert_eq!(tri.vertices(), &[vec![0, 0], vec![0, 2], vec![2, 0]]);
        let half = Polytope::from_inequalities(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-2, -2]],
            vec![0, 0, 1],
        );
        assert!(half.is_err());
        let point = parse_polytope(r#"{"dim": 0}"#).unwrap();
        assert_eq!(point.vertices(), &[Vec::<i64>::new()]);
        let quadrant = Polytope::from_inequalities(2, vec![vec![1, 0], vec![0, 1]], vec![0, 0]);
        assert!(matches!(quadrant, Err(Error::Unbounded)));
        let strip = Polytope::from_inequalities(
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1]],
            vec![0, 1, 0],
        );
        assert!(matches!(strip, Err(Error::Unbounded)));
    }
}
