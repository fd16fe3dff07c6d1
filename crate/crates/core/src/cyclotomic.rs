//! Finite-stabilizer machinery: cyclotomic polynomials, restriction
//! `R(T)_{1/r} -> R(μ_n)_{1/r} = Z[1/r][t]/(t^n - 1)`, the splitting of the
//! latter into `∏_{d|n} Z[1/r][t]/Φ_d`, and membership in the preimage of 1
//! under the `Φ_n` projection.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::{restrict_character, CharacterGroup, Subgroup};
use crate::error::{Error, Result};
use crate::rep_ring::{in_z_inverse, int, parse_coeff, Coeff, RingElement};

/// Dense univariate polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Coeff>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `t^n - 1`.
    pub fn t_pow_minus_one(n: usize) -> Self {
        let mut c = vec![Coeff::zero(); n + 1];
        c[0] = int(-1);
        c[n] = int(1);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Coeff {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Coeff::zero();
        Self::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Coeff::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Coeff::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// `(g, u, v)` with `u·self + v·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Coeff::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Coefficient vector padded with zeros to `len`.
    pub fn padded(&self, len: usize) -> Vec<Coeff> {
        let mut c = self.coeffs.clone();
        c.resize(len.max(c.len()), Coeff::zero());
        c
    }

    pub fn evaluate(&self, x: &Coeff) -> Coeff {
        self.coeffs
            .iter()
            .rev()
            .fold(Coeff::zero(), |acc, c| acc * x + c)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<UniPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UniPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Φ_n(t) = (t^n - 1) / ∏_{d|n, d<n} Φ_d(t)`.
pub fn cyclotomic_poly(n: u64) -> Arc<UniPoly> {
    assert!(n >= 1, "cyclotomic_poly: n must be positive");
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    let mut p = UniPoly::t_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d < n {
            let (q, r) = p.div_rem(&cyclotomic_poly(d));
            assert!(r.is_zero(), "Φ_{d} does not divide t^{n} - 1");
            p = q;
        }
    }
    assert_eq!(p.degree(), Some(totient(n) as usize), "deg Φ_{n} != φ({n})");
    let p = Arc::new(p);
    phi_cache()
        .lock()
        .expect("cache poisoned")
        .insert(n, p.clone());
    p
}

fn serialize_coeffs<S: Serializer>(c: &[Coeff], s: S) -> std::result::Result<S::Ok, S::Error> {
    c.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .serialize(s)
}

fn deserialize_coeffs<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<Coeff>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| parse_coeff(s))
        .collect::<Result<Vec<_>>>()
        .map_err(serde::de::Error::custom)
}

/// An element of `Z[1/r][t]/(t^n - 1)`; `poly` has exactly `n` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicImage {
    pub n: u64,
    pub r: u64,
    #[serde(
        serialize_with = "serialize_coeffs",
        deserialize_with = "deserialize_coeffs"
    )]
    pub poly: Vec<Coeff>,
}

/// An element of `Z[1/r][t]/Φ_d(t)`; `poly` has exactly `φ(d)` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiComponent {
    pub n: u64,
    pub d: u64,
    pub r: u64,
    #[serde(
        serialize_with = "serialize_coeffs",
        deserialize_with = "deserialize_coeffs"
    )]
    pub poly: Vec<Coeff>,
}

impl CyclotomicImage {
    /// Reduce an arbitrary polynomial modulo `t^n - 1`.
    pub fn from_poly(n: u64, r: u64, p: &UniPoly) -> Result<Self> {
        let mut poly = vec![Coeff::zero(); n as usize];
        for (i, c) in p.coeffs().iter().enumerate() {
            poly[i % n as usize] += c;
        }
        let img = CyclotomicImage { n, r, poly };
        img.validate()?;
        Ok(img)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.poly.len() != self.n as usize {
            return Err(Error::MalformedInput(format!(
                "image in Z[t]/(t^{} - 1) needs {} coefficients, got {}",
                self.n,
                self.n,
                self.poly.len()
            )));
        }
        check_in_z_inverse(&self.poly, self.r)
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.poly.clone())
    }

    /// Projection onto the `Φ_d` factor.
    pub fn component(&self, d: u64) -> PhiComponent {
        let phi = cyclotomic_poly(d);
        let rem = self.to_poly().rem(&phi);
        PhiComponent {
            n: self.n,
            d,
            r: self.r,
            poly: rem.padded(totient(d) as usize),
        }
    }
}

impl PhiComponent {
    pub fn is_one(&self) -> bool {
        UniPoly::new(self.poly.clone()) == UniPoly::one()
    }
}

fn check_in_z_inverse(coeffs: &[Coeff], r: u64) -> Result<()> {
    match coeffs.iter().find(|c| !in_z_inverse(c, r)) {
        Some(c) => Err(Error::NotInverted(c.to_string(), r)),
        None => Ok(()),
    }
}

fn check_primes_inverted(n: u64, r: u64) -> Result<()> {
    match prime_factors(n).into_iter().find(|p| !r.is_multiple_of(*p)) {
        Some(prime) => Err(Error::PrimeNotInverted { prime, n, r }),
        None => Ok(()),
    }
}

/// `t^χ ↦ t^{⟨χ, c⟩ mod n}` on a torus element with coefficients in `Z[1/r]`.
pub fn restrict_to_mu_n(
    a: &RingElement,
    embedding: &[i64],
    n: u64,
    r: u64,
) -> Result<CyclotomicImage> {
    let group = a.group();
    if !group.is_torsion_free() || group.rank() != embedding.len() {
        return Err(Error::InvalidEmbedding(format!(
            "embedding {embedding:?} does not match the torus {group}"
        )));
    }
    let n_i =
        i64::try_from(n).map_err(|_| Error::InvalidEmbedding(format!("n = {n} too large")))?;
    let h = Subgroup::mu_in_torus(embedding, n_i)?;
    a.check_coefficients_in(r)?;
    let mut poly = vec![Coeff::zero(); n as usize];
    for (chi, c) in a.terms() {
        let k = restrict_character(chi, &h)?
            .tors
            .first()
            .copied()
            .unwrap_or(0);
        poly[k as usize] += c;
    }
    Ok(CyclotomicImage { n, r, poly })
}

type Idempotents = Arc<Vec<(u64, UniPoly)>>;

/// CRT idempotents `e_d` (`e_d ≡ δ_{dd'} mod Φ_{d'}`) reduced mod `t^n - 1`.
fn idempotents(n: u64) -> Idempotents {
    static CACHE: OnceLock<Mutex<HashMap<u64, Idempotents>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().expect("cache poisoned").get(&n) {
        return e.clone();
    }
    let modulus = UniPoly::t_pow_minus_one(n as usize);
    let out: Vec<(u64, UniPoly)> = divisors(n)
        .into_iter()
        .map(|d| {
            let phi = cyclotomic_poly(d);
            let (cofactor, r) = modulus.div_rem(&phi);
            debug_assert!(r.is_zero());
            // u·cofactor ≡ 1 (mod Φ_d) from the Bézout relation over Q[t]
            let (g, u, _) = cofactor.ext_gcd(&phi);
            assert_eq!(g, UniPoly::one(), "Φ_{d} and its cofactor are not coprime");
            (d, u.mul(&cofactor).rem(&modulus))
        })
        .collect();
    let out = Arc::new(out);
    cache.lock().expect("cache poisoned").insert(n, out.clone());
    out
}

/// One `Φ_d` component per divisor `d | n`, in increasing order of `d`.
pub fn crt_decompose(x: &CyclotomicImage) -> Result<Vec<PhiComponent>> {
    x.validate()?;
    check_primes_inverted(x.n, x.r)?;
    Ok(divisors(x.n).into_iter().map(|d| x.component(d)).collect())
}

pub fn crt_reconstruct(components: &[PhiComponent]) -> Result<CyclotomicImage> {
    let first = components.first().ok_or(Error::EmptySet)?;
    let (n, r) = (first.n, first.r);
    check_primes_inverted(n, r)?;
    let divs = divisors(n);
    let mut got: Vec<u64> = components.iter().map(|c| c.d).collect();
    got.sort_unstable();
    if got != divs || components.iter().any(|c| c.n != n || c.r != r) {
        return Err(Error::MalformedInput(format!(
            "need exactly one component per divisor of {n} with a common r"
        )));
    }
    let modulus = UniPoly::t_pow_minus_one(n as usize);
    let mut total = UniPoly::zero();
    for (d, e) in idempotents(n).iter() {
        // verification of the Bézout data: idempotents must live over Z[1/r]
        check_in_z_inverse(e.coeffs(), r)?;
        let comp = components
            .iter()
            .find(|c| c.d == *d)
            .expect("checked above");
        if comp.poly.len() != totient(*d) as usize {
            return Err(Error::MalformedInput(format!(
                "Φ_{d} component needs {} coefficients",
                totient(*d)
            )));
        }
        check_in_z_inverse(&comp.poly, r)?;
        total = total.add(&UniPoly::new(comp.poly.clone()).mul(e));
    }
    CyclotomicImage::from_poly(n, r, &total.rem(&modulus))
}

/// Whether `s` maps to 1 in `Z[1/r][t]/Φ_n(t)`.
pub fn in_sbar_mu_n(s: &RingElement, embedding: &[i64], n: u64, r: u64) -> Result<bool> {
    check_primes_inverted(n, r)?;
    let img = restrict_to_mu_n(s, embedding, n, r)?;
    Ok(img.component(n).is_one())
}

/// `lcm` of the stabilizer orders.
pub fn compute_r(orders: &[u64]) -> Result<u64> {
    if orders.is_empty() {
        return Err(Error::EmptySet);
    }
    if orders.contains(&0) {
        return Err(Error::MalformedInput(
            "stabilizer orders must be positive".into(),
        ));
    }
    Ok(orders.iter().fold(1u64, |l, &n| l.lcm(&n)))
}

/// A character `χ` with `⟨χ, c⟩ ≡ 1 (mod n)`, so `t^χ` restricts to the chosen generator.
pub fn unit_character(embedding: &[i64], n: u64) -> Result<Vec<i64>> {
    let n = n as i64;
    if n == 1 {
        return Ok(vec![0; embedding.len()]);
    }
    // running Bézout combination g ≡ Σ x_i c_i (mod n)
    let mut g = n;
    let mut x = vec![0i64; embedding.len()];
    for (i, &c) in embedding.iter().enumerate() {
        let e = g.extended_gcd(&c);
        for xi in x.iter_mut() {
            *xi = (*xi * e.x).rem_euclid(n);
        }
        x[i] = (x[i] + e.y).rem_euclid(n);
        g = e.gcd;
    }
    if g.abs() != 1 {
        return Err(Error::InvalidEmbedding(format!(
            "{embedding:?} is not primitive mod {n}"
        )));
    }
    Ok(x.into_iter().map(|v| (v * g).rem_euclid(n)).collect())
}

/// A preimage in `R(T)` of a polynomial in `t`, via `t ↦ t^{unit_character}`.
pub fn lift_from_mu_n(p: &UniPoly, embedding: &[i64], n: u64) -> Result<RingElement> {
    let unit = unit_character(embedding, n)?;
    let group = CharacterGroup::torus(embedding.len());
    RingElement::from_terms(
        &group,
        p.coeffs().iter().enumerate().map(|(k, c)| {
            let free: Vec<i64> = unit.iter().map(|u| u * k as i64).collect();
            (
                group.free_character(&free).expect("torus character"),
                c.clone(),
            )
        }),
    )
}
