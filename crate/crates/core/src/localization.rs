//! Localization `S_H^{-1} R(G)` at the multiplicative set generated by the
//! binomials `1 - t^χ` with `χ` nontrivial on `H`.
//!
//! Fractions keep their denominator as an explicit multiset of generator
//! characters. No saturation and no gcd reduction is ever computed; equality
//! is decided by cross-multiplication, which is only sound in a domain, so it
//! is restricted to torus character groups.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::characters::{is_nontrivial_on, Character, CharacterGroup, Subgroup};
use crate::error::{Error, Result};
use crate::rep_ring::{lambda_minus_one, EquivariantBundleClass, RingElement};

/// `S_H`, generated by `{1 - t^χ : χ|_H ≠ 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiplicativeSet {
    subgroup: Subgroup,
}

impl MultiplicativeSet {
    pub fn new(subgroup: Subgroup) -> Self {
        MultiplicativeSet { subgroup }
    }

    /// `S_G`: every nonzero character is inverted.
    pub fn whole(group: &CharacterGroup) -> Self {
        Self::new(Subgroup::whole(group))
    }

    pub fn group(&self) -> &CharacterGroup {
        self.subgroup.ambient()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Whether `1 - t^chi` is a generator.
    pub fn has_generator(&self, chi: &Character) -> Result<bool> {
        is_nontrivial_on(chi, &self.subgroup)
    }
}

/// `numerator / ∏ (1 - t^χ)` over the denominator multiset.
#[derive(Clone, Debug)]
pub struct LocalizedElement {
    set: MultiplicativeSet,
    numerator: RingElement,
    denominator: Vec<Character>,
}

impl LocalizedElement {
    pub fn new(
        set: &MultiplicativeSet,
        numerator: RingElement,
        mut denominator: Vec<Character>,
    ) -> Result<Self> {
        if numerator.group() != set.group() {
            return Err(Error::GroupMismatch(format!(
                "numerator over {} in a localization of R({})",
                numerator.group(),
                set.group()
            )));
        }
        for chi in &denominator {
            if !set.has_generator(chi)? {
                return Err(Error::NotInvertible(format!("{:?}", chi.flat())));
            }
        }
        denominator.sort();
        Ok(LocalizedElement {
            set: set.clone(),
            numerator,
            denominator,
        })
    }

    pub fn from_ring(set: &MultiplicativeSet, numerator: RingElement) -> Result<Self> {
        Self::new(set, numerator, Vec::new())
    }

    pub fn one(set: &MultiplicativeSet) -> Self {
        LocalizedElement {
            set: set.clone(),
            numerator: RingElement::one(set.group()),
            denominator: Vec::new(),
        }
    }

    pub fn zero(set: &MultiplicativeSet) -> Self {
        LocalizedElement {
            set: set.clone(),
            numerator: RingElement::zero(set.group()),
            denominator: Vec::new(),
        }
    }

    pub fn set(&self) -> &MultiplicativeSet {
        &self.set
    }

    pub fn numerator(&self) -> &RingElement {
        &self.numerator
    }

    /// Sorted denominator multiset.
    pub fn denominator(&self) -> &[Character] {
        &self.denominator
    }

    pub fn denominator_product(&self) -> RingElement {
        product_of_binomials(self.set.group(), &self.denominator)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.set.group() != other.set.group() {
            return Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.set.group(),
                other.set.group()
            )));
        }
        if self.set != other.set {
            return Err(Error::SetMismatch);
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        LocalizedElement {
            set: self.set.clone(),
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    /// Multiply by an element of `R(G)`.
    pub fn mul_ring(&self, r: &RingElement) -> Result<Self> {
        Ok(LocalizedElement {
            set: self.set.clone(),
            numerator: self.numerator.try_mul(r)?,
            denominator: self.denominator.clone(),
        })
    }

    pub fn to_json(&self) -> LocalizedJson {
        LocalizedJson {
            num: self.numerator.clone(),
            den: self.denominator.clone(),
        }
    }

    pub fn from_json(set: &MultiplicativeSet, json: LocalizedJson) -> Result<Self> {
        let den = json
            .den
            .iter()
            .map(|chi| set.group().canonicalize(chi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(set, json.num, den)
    }
}

/// Wire form `{"num": <ring element>, "den": [<character>, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalizedJson {
    pub num: RingElement,
    pub den: Vec<Character>,
}

pub fn product_of_binomials(group: &CharacterGroup, chars: &[Character]) -> RingElement {
    chars
        .iter()
        .fold(RingElement::one(group), |acc, chi| acc.mul_one_minus(chi))
}

/// Multiset difference `a \ b` of sorted lists.
pub(crate) fn multiset_minus(a: &[Character], b: &[Character]) -> Vec<Character> {
    let mut out = Vec::new();
    let mut j = 0;
    for chi in a {
        while j < b.len() && b[j] < *chi {
            j += 1;
        }
        if j < b.len() && b[j] == *chi {
            j += 1;
        } else {
            out.push(chi.clone());
        }
    }
    out
}

pub fn frac_add(a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
    a.compatible(b)?;
    let group = a.set.group();
    let left = a.numerator.try_mul(&b.denominator_product())?;
    let right = b.numerator.try_mul(&a.denominator_product())?;
    let mut denominator = a.denominator.clone();
    denominator.extend(b.denominator.iter().cloned());
    denominator.sort();
    debug_assert_eq!(left.group(), group);
    Ok(LocalizedElement {
        set: a.set.clone(),
        numerator: left.try_add(&right)?,
        denominator,
    })
}

pub fn frac_mul(a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
    a.compatible(b)?;
    let mut denominator = a.denominator.clone();
    denominator.extend(b.denominator.iter().cloned());
    denominator.sort();
    Ok(LocalizedElement {
        set: a.set.clone(),
        numerator: a.numerator.try_mul(&b.numerator)?,
        denominator,
    })
}

/// `a = b` in `S_H^{-1} R(T)`: cancel shared denominator factors, then cross-multiply.
pub fn frac_eq(a: &LocalizedElement, b: &LocalizedElement) -> Result<bool> {
    a.compatible(b)?;
    let group = a.set.group();
    if !group.is_torsion_free() {
        return Err(Error::TorsionUnsupported);
    }
    let a_only = multiset_minus(&a.denominator, &b.denominator);
    let b_only = multiset_minus(&b.denominator, &a.denominator);
    let lhs = a.numerator.try_mul(&product_of_binomials(group, &b_only))?;
    let rhs = b.numerator.try_mul(&product_of_binomials(group, &a_only))?;
    Ok(lhs == rhs)
}

/// `(λ_{-1}(N) · -)^{-1}` applied to 1.
pub fn invert_lambda(
    n: &EquivariantBundleClass,
    set: &MultiplicativeSet,
) -> Result<LocalizedElement> {
    if n.group() != set.group() {
        return Err(Error::GroupMismatch(format!(
            "{} vs {}",
            n.group(),
            set.group()
        )));
    }
    LocalizedElement::new(set, RingElement::one(set.group()), n.characters().to_vec())
}

/// `λ_{-1}(N)` as a fraction with trivial denominator.
pub fn lambda_fraction(
    n: &EquivariantBundleClass,
    set: &MultiplicativeSet,
) -> Result<LocalizedElement> {
    LocalizedElement::from_ring(set, lambda_minus_one(n))
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        if self.numerator.len() > 1 {
            write!(f, "({})", self.numerator)?;
        } else {
            write!(f, "{}", self.numerator)?;
        }
        write!(f, " / ")?;
        let group = self.set.group();
        for chi in &self.denominator {
            write!(f, "(1 - {})", crate::rep_ring::format_monomial(group, chi))?;
        }
        Ok(())
    }
}
