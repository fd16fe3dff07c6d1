//! Brute-force references shared by the integration tests. Nothing here calls
//! into the fixed-point or Brion code paths.
#![allow(dead_code)]

use eqloc::rep_ring::{int, Coeff};
use eqloc::{CharacterGroup, Fan, RingElement};
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every point of the cube `[-bound, bound]^dim`.
pub fn cube(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// A side length covering every `m_σ` for fans whose dual bases have entries of size at most 2.
pub fn search_bound(coeffs: &[i64]) -> i64 {
    2 * coeffs.iter().map(|a| a.abs()).sum::<i64>() + 2
}

/// `Σ t^m` over lattice points with `⟨m, v_ρ⟩ ≥ -a_ρ` for every ray, by scanning a cube.
pub fn enumerate_polytope(fan: &Fan, coeffs: &[i64]) -> RingElement {
    let group = fan.group();
    let bound = search_bound(coeffs);
    let terms = cube(fan.dim(), bound)
        .into_iter()
        .filter(|m| fan.rays().iter().zip(coeffs).all(|(v, a)| dot(m, v) >= -a))
        .map(|m| (group.free_character(&m).unwrap(), Coeff::one()));
    RingElement::from_terms(&group, terms).unwrap()
}

/// Čech count on the cover by maximal cones: for each weight `m`, the
/// alternating count over nonempty sets of cones whose common face has no ray
/// violated by `m`.
pub fn cech_euler_characteristic(fan: &Fan, coeffs: &[i64], bound: i64) -> RingElement {
    let group = fan.group();
    let cones = fan.cones();
    let k = cones.len();
    let face_masks: Vec<(u64, i64)> = (1u64..(1 << k))
        .map(|s| {
            let mut rays = u64::MAX;
            for (i, cone) in cones.iter().enumerate() {
                if s & (1 << i) != 0 {
                    rays &= cone.iter().fold(0u64, |acc, &r| acc | (1 << r));
                }
            }
            let sign = if s.count_ones() % 2 == 1 { 1 } else { -1 };
            (rays, sign)
        })
        .collect();
    let mut terms = Vec::new();
    for m in cube(fan.dim(), bound) {
        let violated = fan
            .rays()
            .iter()
            .zip(coeffs)
            .enumerate()
            .filter(|(_, (v, a))| dot(&m, v) < -**a)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        let chi: i64 = face_masks
            .iter()
            .filter(|(rays, _)| rays & violated == 0)
            .map(|(_, s)| s)
            .sum();
        if chi != 0 {
            terms.push((group.free_character(&m).unwrap(), int(chi)));
        }
    }
    RingElement::from_terms(&group, terms).unwrap()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// `Σ_{J ⊆ chars} (-1)^{|J|} t^{Σ_J χ}` by subset enumeration.
pub fn lambda_by_subsets(group: &CharacterGroup, chars: &[Vec<i64>]) -> RingElement {
    let terms = (0u32..(1 << chars.len())).map(|s| {
        let mut m = vec![0; group.rank()];
        for (i, c) in chars.iter().enumerate() {
            if s & (1 << i) != 0 {
                m.iter_mut().zip(c).for_each(|(x, y)| *x += y);
            }
        }
        let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
        (group.free_character(&m).unwrap(), int(sign))
    });
    RingElement::from_terms(group, terms).unwrap()
}

pub fn random_vec<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_nonzero_vec<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<i64> {
    loop {
        let v = random_vec(rng, dim, bound);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A Laurent polynomial with up to `terms` terms, exponents in `[-e, e]` and small coefficients.
pub fn random_element<R: Rng>(
    rng: &mut R,
    group: &CharacterGroup,
    terms: usize,
    e: i64,
) -> RingElement {
    let count = rng.gen_range(0..=terms);
    let entries: Vec<_> = (0..count)
        .map(|_| {
            let m = random_vec(rng, group.rank(), e);
            (
                group.free_character(&m).unwrap(),
                int(rng.gen_range(-4..=4)),
            )
        })
        .collect();
    RingElement::from_terms(group, entries).unwrap()
}

/// Every coefficient vector in `[lo, hi]^len`.
pub fn divisor_grid(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}
