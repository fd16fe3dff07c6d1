//! The representation ring `R(G) = Z[G^∨]` as sparse exact group-ring
//! elements, the `λ_{-1}` class of a split bundle, and the augmentation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::{Character, CharacterGroup};
use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Whether every prime in the denominator of `q` divides `r`.
pub fn in_z_inverse(q: &Coeff, r: u64) -> bool {
    let mut d = q.denom().clone();
    let r = BigInt::from(r);
    loop {
        let g = d.gcd(&r);
        if g.is_one() {
            return d.is_one();
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

/// A finite exact combination of characters. No zero coefficients are stored
/// and torsion exponents are canonical, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    group: CharacterGroup,
    terms: BTreeMap<Character, Coeff>,
}

impl RingElement {
    pub fn zero(group: &CharacterGroup) -> Self {
        RingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &CharacterGroup) -> Self {
        Self::monomial(group, group.zero())
    }

    pub fn constant(group: &CharacterGroup, c: Coeff) -> Self {
        Self::term(group, group.zero(), c)
    }

    /// `t^chi`. The character must already be canonical for `group`.
    pub fn monomial(group: &CharacterGroup, chi: Character) -> Self {
        Self::term(group, chi, Coeff::one())
    }

    pub fn term(group: &CharacterGroup, chi: Character, c: Coeff) -> Self {
        debug_assert!(group.contains(&chi));
        let mut e = Self::zero(group);
        e.add_term(chi, c);
        e
    }

    /// `1 - t^chi`.
    pub fn one_minus(group: &CharacterGroup, chi: &Character) -> Self {
        let mut e = Self::one(group);
        e.add_term(chi.clone(), -Coeff::one());
        e
    }

    /// Collect terms, canonicalizing characters and merging duplicates.
    pub fn from_terms<I>(group: &CharacterGroup, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Character, Coeff)>,
    {
        let mut e = Self::zero(group);
        for (chi, c) in terms {
            let chi = group.canonicalize(&chi)?;
            e.add_term(chi, c);
        }
        Ok(e)
    }

    /// Like [`RingElement::from_terms`], rejecting coefficients outside `Z[1/r]`.
    pub fn from_terms_over<I>(group: &CharacterGroup, terms: I, r: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (Character, Coeff)>,
    {
        let e = Self::from_terms(group, terms)?;
        e.check_coefficients_in(r)?;
        Ok(e)
    }

    fn add_term(&mut self, chi: Character, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(chi) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Character, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(chi, c)| chi.is_zero() && c.is_one())
    }

    pub fn coefficient(&self, chi: &Character) -> Coeff {
        self.terms.get(chi).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn check_coefficients_in(&self, r: u64) -> Result<()> {
        match self.terms.values().find(|c| !in_z_inverse(c, r)) {
            Some(c) => Err(Error::NotInverted(c.to_string(), r)),
            None => Ok(()),
        }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.group, other.group
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (chi, c) in &other.terms {
            out.add_term(chi.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(&self.group);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(self.group.add(a, b), x * y);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(&self.group);
        if !c.is_zero() {
            for (chi, x) in &self.terms {
                out.terms.insert(chi.clone(), x * c);
            }
        }
        out
    }

    /// Multiply by the monomial `t^chi`.
    pub fn shift(&self, chi: &Character) -> Self {
        RingElement {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (self.group.add(a, chi), c.clone()))
                .collect(),
        }
    }

    /// Multiply by `1 - t^chi`.
    pub fn mul_one_minus(&self, chi: &Character) -> Self {
        let mut out = self.clone();
        for (a, c) in &self.terms {
            out.add_term(self.group.add(a, chi), -c.clone());
        }
        out
    }

    /// Exact quotient by `1 - t^chi` in a Laurent polynomial ring.
    ///
    /// Monomials are grouped along the lines `m + Z·chi`; on each line the
    /// element is a one-variable Laurent polynomial in `s = t^chi`, divided by
    /// `1 - s` through prefix sums. A nonzero line sum is a remainder.
    pub fn div_one_minus(&self, chi: &Character) -> Result<Self> {
        if !self.group.is_torsion_free() {
            return Err(Error::TorsionUnsupported);
        }
        let Some(axis) = chi.free.iter().position(|&x| x != 0) else {
            return Err(Error::NotPolynomial("0 (division by zero)".into()));
        };
        let step = chi.free[axis];
        let mut lines: BTreeMap<Vec<i64>, Vec<(i64, &Coeff)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.free[axis].div_euclid(step);
            let base: Vec<i64> = m
                .free
                .iter()
                .zip(&chi.free)
                .map(|(x, y)| x - k * y)
                .collect();
            lines.entry(base).or_default().push((k, c));
        }
        let mut out = Self::zero(&self.group);
        for (base, mut line) in lines {
            line.sort_by_key(|&(k, _)| k);
            let last = line[line.len() - 1].0;
            let mut acc = Coeff::zero();
            let mut idx = 0;
            let mut k = line[0].0;
            loop {
                while idx < line.len() && line[idx].0 == k {
                    acc += line[idx].1;
                    idx += 1;
                }
                if k == last {
                    break;
                }
                if acc.is_zero() {
                    // prefix sum stays zero until the next term
                    k = line[idx].0;
                    continue;
                }
                let free = base.iter().zip(&chi.free).map(|(b, y)| b + k * y).collect();
                out.terms.insert(
                    Character {
                        free,
                        tors: Vec::new(),
                    },
                    acc.clone(),
                );
                k += 1;
            }
            if !acc.is_zero() {
                return Err(Error::NotPolynomial(format!("{:?}", chi.free)));
            }
        }
        Ok(out)
    }

    /// Sum of coefficients: the ring map sending every character to 1.
    pub fn augmentation(&self) -> Coeff {
        self.terms.values().sum()
    }

    /// Apply a group homomorphism `G^∨ -> target` to every exponent.
    pub fn map_characters<F>(&self, target: &CharacterGroup, f: F) -> Self
    where
        F: Fn(&Character) -> Character,
    {
        let mut out = Self::zero(target);
        for (chi, c) in &self.terms {
            out.add_term(f(chi), c.clone());
        }
        out
    }

    /// Image in `R(G × G')` of `self ⊗ other` (free parts concatenated).
    pub fn external_product(&self, other: &Self) -> Result<Self> {
        if !self.group.is_torsion_free() || !other.group.is_torsion_free() {
            return Err(Error::TorsionUnsupported);
        }
        let group = CharacterGroup::torus(self.group.rank() + other.group.rank());
        let mut out = Self::zero(&group);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let free = a.free.iter().chain(&b.free).copied().collect();
                out.add_term(
                    Character {
                        free,
                        tors: Vec::new(),
                    },
                    x * y,
                );
            }
        }
        Ok(out)
    }

    /// Substitute `t_i ↦ values[i]` (torus only); `None` on a zero value with a negative exponent.
    pub fn evaluate(&self, values: &[Coeff]) -> Option<Coeff> {
        debug_assert!(self.group.is_torsion_free());
        let mut total = Coeff::zero();
        for (chi, c) in &self.terms {
            let mut v = c.clone();
            for (x, e) in values.iter().zip(&chi.free) {
                if x.is_zero() && *e < 0 {
                    return None;
                }
                v *= x.pow(i32::try_from(*e).ok()?);
            }
            total += v;
        }
        Some(total)
    }

    /// Parse the canonical text form, e.g. `1 - t1 + 1/2*t1*t2^-1` or `2 + u^3`.
    pub fn parse(group: &CharacterGroup, text: &str) -> Result<Self> {
        text::parse(group, text)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs)
            .expect("ring elements over different groups")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs)
            .expect("ring elements over different groups")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs)
            .expect("ring elements over different groups")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

pub fn ring_add(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.try_add(b)
}

pub fn ring_mul(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.try_mul(b)
}

pub fn ring_neg(a: &RingElement) -> RingElement {
    -a
}

pub fn augmentation(a: &RingElement) -> Coeff {
    a.augmentation()
}

/// Variable names: `t` (rank 1) or `t1..tr` for free generators, `u` or `u1..` for torsion.
fn variable_names(group: &CharacterGroup) -> Vec<String> {
    let named = |prefix: &str, count: usize| -> Vec<String> {
        match count {
            1 => vec![prefix.to_string()],
            _ => (1..=count).map(|i| format!("{prefix}{i}")).collect(),
        }
    };
    let mut names = named("t", group.rank());
    names.extend(named("u", group.torsion().len()));
    names
}

/// `t1*t2^-1`, or `1` for the trivial character.
pub fn format_monomial(group: &CharacterGroup, chi: &Character) -> String {
    let names = variable_names(group);
    let factors: Vec<String> = chi
        .flat()
        .iter()
        .zip(&names)
        .filter(|(&e, _)| e != 0)
        .map(|(&e, name)| match e {
            1 => name.clone(),
            e => format!("{name}^{e}"),
        })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (chi, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if chi.is_zero() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", format_monomial(&self.group, chi))?;
            } else {
                write!(f, "{abs}*{}", format_monomial(&self.group, chi))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    free: Vec<i64>,
    #[serde(default)]
    tors: Vec<i64>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct JsonElement {
    group: CharacterGroup,
    terms: Vec<JsonTerm>,
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::MalformedInput(format!("bad coefficient {s:?}")))
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JsonElement {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(chi, c)| JsonTerm {
                    free: chi.free.clone(),
                    tors: chi.tors.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = JsonElement::deserialize(deserializer)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                Ok((
                    Character {
                        free: t.free,
                        tors: t.tors,
                    },
                    parse_coeff(&t.coeff)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RingElement::from_terms(&raw.group, terms).map_err(serde::de::Error::custom)
    }
}

/// A direct sum of one-dimensional eigenspaces, kept as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EquivariantBundleClass {
    group: CharacterGroup,
    characters: Vec<Character>,
}

impl EquivariantBundleClass {
    pub fn new(group: &CharacterGroup, mut characters: Vec<Character>) -> Result<Self> {
        for chi in &characters {
            group.check(chi)?;
        }
        characters.sort();
        Ok(EquivariantBundleClass {
            group: group.clone(),
            characters,
        })
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn rank(&self) -> usize {
        self.characters.len()
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.group, other.group
            )));
        }
        let mut chars = self.characters.clone();
        chars.extend(other.characters.iter().cloned());
        Self::new(&self.group, chars)
    }

    /// `[⋀^j]`: the elementary symmetric polynomial `e_j` in the monomials.
    pub fn exterior_power(&self, j: usize) -> RingElement {
        // e_i over a growing prefix of the characters
        let mut e: Vec<RingElement> = vec![RingElement::one(&self.group)];
        for chi in &self.characters {
            let mut next = e.clone();
            next.push(RingElement::zero(&self.group));
            for i in 1..next.len() {
                next[i] = &next[i] + &e[i - 1].shift(chi);
            }
            e = next;
        }
        e.into_iter()
            .nth(j)
            .unwrap_or_else(|| RingElement::zero(&self.group))
    }

    /// `Σ_j (-1)^j [⋀^j]`, expanded through exterior powers.
    pub fn alternating_exterior_sum(&self) -> RingElement {
        let mut total = RingElement::zero(&self.group);
        for j in 0..=self.rank() {
            let p = self.exterior_power(j);
            total = if j % 2 == 0 { &total + &p } else { &total - &p };
        }
        total
    }
}

/// `λ_{-1}(N) = ∏ (1 - t^χ)` over the characters of `N`.
pub fn lambda_minus_one(n: &EquivariantBundleClass) -> RingElement {
    n.characters
        .iter()
        .fold(RingElement::one(&n.group), |acc, chi| {
            acc.mul_one_minus(chi)
        })
}

mod text {
    use super::*;

    pub(super) fn parse(group: &CharacterGroup, input: &str) -> Result<RingElement> {
        let names = variable_names(group);
        let bad = |msg: &str| Error::MalformedInput(format!("{msg} in {input:?}"));
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty expression"));
        }
        // split into signed terms at top-level + and -, keeping '^-' exponents intact
        let bytes = s.as_bytes();
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            negative = bytes[0] == b'-';
            start = 1;
        }
        let mut i = start;
        while i < bytes.len() {
            let c = bytes[i];
            if (c == b'+' || c == b'-') && i > start && bytes[i - 1] != b'^' {
                pieces.push((negative, &s[start..i]));
                negative = c == b'-';
                start = i + 1;
            }
            i += 1;
        }
        pieces.push((negative, &s[start..]));

        let mut out = RingElement::zero(group);
        for (negative, piece) in pieces {
            if piece.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut coeff = Coeff::one();
            let mut flat = vec![0i64; group.generators()];
            for factor in piece.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_coeff(factor)?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let idx = names
                    .iter()
                    .position(|v| v == name)
                    .or_else(|| alias(group, name))
                    .ok_or_else(|| bad(&format!("unknown variable {name:?}")))?;
                flat[idx] += exp;
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(group.from_flat(&flat), coeff);
        }
        Ok(out)
    }

    // `t1` for a rank-one torus, `u1` for a single torsion generator
    fn alias(group: &CharacterGroup, name: &str) -> Option<usize> {
        match name {
            "t1" if group.rank() == 1 => Some(0),
            "u1" if group.torsion().len() == 1 => Some(group.rank()),
            _ => None,
        }
    }
}
