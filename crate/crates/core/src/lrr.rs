//! Fixed-point evaluation of equivariant Euler characteristics on smooth
//! complete toric varieties, Brion's vertex-cone formula, and the K₀-level
//! checks of concentration, self-intersection and the finite-stabilizer
//! decomposition.

use num_bigint::BigInt;
use num_traits::One;

use crate::characters::{Character, CharacterGroup};
use crate::cyclotomic::{compute_r, crt_decompose, crt_reconstruct, restrict_to_mu_n};
use crate::error::{Error, Result};
use crate::localization::{
    frac_add, frac_eq, frac_mul, invert_lambda, multiset_minus, LocalizedElement, MultiplicativeSet,
};
use crate::rep_ring::{lambda_minus_one, EquivariantBundleClass, RingElement};
use crate::toric::{fixed_points, is_nef, polytope_points, CartierData, Fan, Polytope};

/// Multiset union with multiplicity `max`, of sorted lists.
fn multiset_lcm(lists: &[&[Character]]) -> Vec<Character> {
    let mut out: Vec<Character> = Vec::new();
    for list in lists {
        let missing = multiset_minus(list, &out);
        out.extend(missing);
        out.sort();
    }
    out
}

/// Sum of fractions known to lie in `R(T)`: bring to a common denominator,
/// then divide the numerator by each binomial factor exactly, factors taken
/// in lexicographic order of their characters.
pub fn sum_fractions_exact(terms: &[LocalizedElement]) -> Result<RingElement> {
    let first = terms.first().ok_or(Error::EmptySet)?;
    let group = first.set().group().clone();
    if !group.is_torsion_free() {
        return Err(Error::TorsionUnsupported);
    }
    if let Some(t) = terms.iter().find(|t| t.set().group() != &group) {
        return Err(Error::GroupMismatch(format!(
            "{} vs {}",
            t.set().group(),
            group
        )));
    }
    let dens: Vec<&[Character]> = terms.iter().map(|t| t.denominator()).collect();
    let common = multiset_lcm(&dens);
    let mut numerator = RingElement::zero(&group);
    for t in terms {
        let mut part = t.numerator().clone();
        for chi in multiset_minus(&common, t.denominator()) {
            part = part.mul_one_minus(&chi);
        }
        numerator = &numerator + &part;
    }
    for chi in &common {
        numerator = numerator.div_one_minus(chi)?;
    }
    Ok(numerator)
}

fn fixed_point_terms(fan: &Fan, d: &CartierData) -> Result<Vec<LocalizedElement>> {
    let group = fan.group();
    let set = MultiplicativeSet::whole(&group);
    fixed_points(fan, Some(d))
        .into_iter()
        .map(|fp| {
            let fiber = fp.fiber_char.expect("divisor given");
            LocalizedElement::new(
                &set,
                RingElement::monomial(&group, fiber),
                fp.cotangent_chars,
            )
        })
        .collect()
}

/// `Σ_σ t^{m_σ} / ∏ (1 - t^{u_{σ,j}})`, evaluated to a Laurent polynomial.
pub fn euler_characteristic(fan: &Fan, d: &CartierData) -> Result<RingElement> {
    if d.fan() != fan {
        return Err(Error::MalformedInput(
            "divisor belongs to a different fan".into(),
        ));
    }
    sum_fractions_exact(&fixed_point_terms(fan, d)?)
}

/// `Σ_{m ∈ points} t^m`.
pub fn lattice_point_series(group: &CharacterGroup, points: &[Vec<i64>]) -> Result<RingElement> {
    RingElement::from_terms(
        group,
        points
            .iter()
            .map(|p| Ok((group.free_character(p)?, BigInt::one().into())))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Brion: the lattice-point generating function as a sum over vertex cones.
pub fn brion_generating_function(p: &Polytope) -> Result<RingElement> {
    let group = CharacterGroup::torus(p.dim());
    if let [only] = p.vertices() {
        return Ok(RingElement::monomial(&group, group.free_character(only)?));
    }
    let set = MultiplicativeSet::whole(&group);
    let terms = p
        .vertices()
        .iter()
        .map(|v| {
            let edges = p.vertex_cone(v)?;
            let den = edges
                .iter()
                .map(|e| group.free_character(e))
                .collect::<Result<Vec<_>>>()?;
            LocalizedElement::new(
                &set,
                RingElement::monomial(&group, group.free_character(v)?),
                den,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    sum_fractions_exact(&terms)
}

/// Number of lattice points: the augmentation, taken only after exact summation.
pub fn count_points(p: &Polytope) -> Result<BigInt> {
    let series = brion_generating_function(p)?;
    let count = series.augmentation();
    debug_assert!(count.is_integer());
    Ok(count.to_integer())
}

/// A class on `X` in the fixed-point model: one fraction per fixed point.
#[derive(Clone, Debug)]
pub struct LocalizedTuple {
    fan: Fan,
    set: MultiplicativeSet,
    entries: Vec<LocalizedElement>,
}

impl LocalizedTuple {
    pub fn new(fan: &Fan, entries: Vec<LocalizedElement>) -> Result<Self> {
        let set = MultiplicativeSet::whole(&fan.group());
        if entries.len() != fan.cones().len() {
            return Err(Error::MalformedInput(format!(
                "{} entries for {} fixed points",
                entries.len(),
                fan.cones().len()
            )));
        }
        if entries.iter().any(|e| e.set() != &set) {
            return Err(Error::SetMismatch);
        }
        Ok(LocalizedTuple {
            fan: fan.clone(),
            set,
            entries,
        })
    }

    /// Restrictions `(t^{m_σ})_σ` of a line bundle.
    pub fn of_line_bundle(d: &CartierData) -> Result<Self> {
        let group = d.fan().group();
        let set = MultiplicativeSet::whole(&group);
        let entries = d
            .per_cone_m()
            .iter()
            .map(|m| {
                LocalizedElement::from_ring(
                    &set,
                    RingElement::monomial(&group, group.free_character(m)?),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d.fan(), entries)
    }

    pub fn entries(&self) -> &[LocalizedElement] {
        &self.entries
    }

    /// `ι_x^*`.
    pub fn restrict(&self, x: usize) -> Result<&LocalizedElement> {
        self.entries
            .get(x)
            .ok_or_else(|| Error::MalformedInput(format!("no fixed point {x}")))
    }

    /// `ι_{x*} α`: `λ_{-1}(T^∨_x) · α` at `x`, zero elsewhere.
    pub fn pushforward_from_point(fan: &Fan, x: usize, alpha: &LocalizedElement) -> Result<Self> {
        let fps = fixed_points(fan, None);
        let fp = fps
            .get(x)
            .ok_or_else(|| Error::MalformedInput(format!("no fixed point {x}")))?;
        let group = fan.group();
        let conormal = EquivariantBundleClass::new(&group, fp.cotangent_chars.clone())?;
        // exterior-power expansion here; the product form is used by the checks
        let class = conormal.alternating_exterior_sum();
        let set = MultiplicativeSet::whole(&group);
        let entries = (0..fps.len())
            .map(|y| {
                if y == x {
                    alpha.mul_ring(&class)
                } else {
                    Ok(LocalizedElement::zero(&set))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(fan, entries)
    }

    /// Apply `(λ_{-1}(T^∨_x) · -)^{-1}` at every fixed point.
    pub fn divide_by_lambda(&self) -> Result<Self> {
        let group = self.fan.group();
        let entries = fixed_points(&self.fan, None)
            .into_iter()
            .zip(&self.entries)
            .map(|(fp, e)| {
                let n = EquivariantBundleClass::new(&group, fp.cotangent_chars)?;
                frac_mul(e, &invert_lambda(&n, &self.set)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.fan, entries)
    }

    /// The co-diagonal: sum over all fixed points.
    pub fn codiagonal(&self) -> Result<LocalizedElement> {
        self.entries
            .iter()
            .try_fold(LocalizedElement::zero(&self.set), |acc, e| {
                frac_add(&acc, e)
            })
    }
}

/// `ι_x^* ι_{x*} α = λ_{-1}(T^∨_x) · α`.
pub fn self_intersection_check(fan: &Fan, x: usize, alpha: &LocalizedElement) -> Result<bool> {
    let pushed = LocalizedTuple::pushforward_from_point(fan, x, alpha)?;
    let lhs = pushed.restrict(x)?;
    let fps = fixed_points(fan, None);
    let group = fan.group();
    let n = EquivariantBundleClass::new(&group, fps[x].cotangent_chars.clone())?;
    let rhs = alpha.mul_ring(&lambda_minus_one(&n))?;
    frac_eq(lhs, &rhs)
}

/// Restrict `O(D)`, divide by `λ_{-1}` pointwise and push to a point; compare
/// with the cohomological Euler characteristic.
pub fn concentration_roundtrip(fan: &Fan, d: &CartierData) -> Result<bool> {
    let pushed = LocalizedTuple::of_line_bundle(d)?
        .divide_by_lambda()?
        .codiagonal()?;
    let chi = euler_characteristic(fan, d)?;
    let set = MultiplicativeSet::whole(&fan.group());
    frac_eq(&pushed, &LocalizedElement::from_ring(&set, chi)?)
}

/// Round-trip the restriction of `χ(O(D))` to each `μ_n` through its `Φ_d`
/// components over `Z[1/r]`.
pub fn decomposition_check(
    fan: &Fan,
    embeddings: &[(u64, Vec<i64>)],
    d: &CartierData,
) -> Result<bool> {
    let orders: Vec<u64> = embeddings.iter().map(|(n, _)| *n).collect();
    let r = compute_r(&orders)?;
    let class = euler_characteristic(fan, d)?;
    for (n, c) in embeddings {
        let image = restrict_to_mu_n(&class, c, *n, r)?;
        let components = crt_decompose(&image)?;
        // the Φ_1 component is evaluation at 1, i.e. the augmentation
        if components[0].poly[0] != class.augmentation() {
            return Ok(false);
        }
        if crt_reconstruct(&components)? != image {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For nef `D`: the fixed-point sum equals the lattice-point series of `P_D`.
pub fn oracle_equivalence(fan: &Fan, d: &CartierData) -> Result<bool> {
    if !is_nef(d) {
        return Err(Error::MalformedInput(
            "the lattice-point oracle needs a nef divisor".into(),
        ));
    }
    let points = polytope_points(d)?;
    Ok(euler_characteristic(fan, d)? == lattice_point_series(&fan.group(), &points)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{cartier_from_divisor, parse_fan};

    fn p1() -> Fan {
        parse_fan(r#"{"dim":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#).unwrap()
    }

    fn p2() -> Fan {
        parse_fan(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[2,0]]}"#).unwrap()
    }

    fn series(group: &CharacterGroup, s: &str) -> RingElement {
        RingElement::parse(group, s).unwrap()
    }

    fn frac(group: &CharacterGroup, num: &str, den: &[i64]) -> LocalizedElement {
        let set = MultiplicativeSet::whole(group);
        let den = den
            .iter()
            .map(|&e| group.free_character(&[e]).unwrap())
            .collect();
        LocalizedElement::new(&set, series(group, num), den).unwrap()
    }

    #[test]
    fn exact_sums() {
        let g = CharacterGroup::torus(1);
        let sum = sum_fractions_exact(&[frac(&g, "1", &[1]), frac(&g, "1", &[-1])]).unwrap();
        assert_eq!(sum, RingElement::one(&g));
        let sum = sum_fractions_exact(&[frac(&g, "1", &[1]), frac(&g, "t^2", &[-1])]).unwrap();
        assert_eq!(sum, series(&g, "1 + t + t^2"));
        let sum = sum_fractions_exact(&[frac(&g, "3 - t", &[])]).unwrap();
        assert_eq!(sum, series(&g, "3 - t"));
        let err = sum_fractions_exact(&[frac(&g, "1", &[1])]);
        assert!(matches!(err, Err(Error::NotPolynomial(_))));
    }

    #[test]
    fn euler_characteristic_examples() {
        let fan = p1();
        let g = fan.group();
        let d = cartier_from_divisor(&fan, &[0, 2]).unwrap();
        assert_eq!(
            euler_characteristic(&fan, &d).unwrap(),
            series(&g, "1 + t + t^2")
        );
        let d = cartier_from_divisor(&fan, &[0, -1]).unwrap();
        assert!(euler_characteristic(&fan, &d).unwrap().is_zero());
        let fan = p2();
        let d = cartier_from_divisor(&fan, &[0, 0, 1]).unwrap();
        assert_eq!(
            euler_characteristic(&fan, &d).unwrap(),
            series(&fan.group(), "1 + t1 + t2")
        );
    }

    #[test]
    fn brion_examples() {
        let seg = Polytope::from_vertices(1, vec![vec![0], vec![2]]).unwrap();
        assert_eq!(
            brion_generating_function(&seg).unwrap(),
            series(&CharacterGroup::torus(1), "1 + t + t^2")
        );
        assert_eq!(count_points(&seg).unwrap(), BigInt::from(3));
        let sq = Polytope::from_vertices(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        let g2 = CharacterGroup::torus(2);
        assert_eq!(
            brion_generating_function(&sq).unwrap(),
            series(&g2, "1 + t1 + t2 + t1*t2")
        );
        assert_eq!(count_points(&sq).unwrap(), BigInt::from(4));
        let pt = Polytope::from_vertices(1, vec![vec![0]]).unwrap();
        assert!(brion_generating_function(&pt).unwrap().is_one());
        assert_eq!(count_points(&pt).unwrap(), BigInt::from(1));
        // the apex of this square pyramid is not simple
        let pyramid = Polytope::from_vertices(
            3,
            vec![
                vec![0, 0, 0],
                vec![2, 0, 0],
                vec![0, 2, 0],
                vec![2, 2, 0],
                vec![1, 1, 1],
            ],
        )
        .unwrap();
        assert!(matches!(
            brion_generating_function(&pyramid),
            Err(Error::NotSmoothVertexCone(_))
        ));
    }

    #[test]
    fn self_intersection_examples() {
        let fan = p1();
        let g = fan.group();
        let set = MultiplicativeSet::whole(&g);
        let one = LocalizedElement::one(&set);
        let pushed = LocalizedTuple::pushforward_from_point(&fan, 0, &one).unwrap();
        assert_eq!(
            pushed.restrict(0).unwrap().numerator(),
            &series(&g, "1 - t")
        );
        assert!(pushed.restrict(1).unwrap().numerator().is_zero());
        assert!(self_intersection_check(&fan, 0, &one).unwrap());
        assert!(self_intersection_check(&fan, 1, &LocalizedElement::zero(&set)).unwrap());
        let fan = p2();
        let g = fan.group();
        let set = MultiplicativeSet::whole(&g);
        let alpha = LocalizedElement::new(
            &set,
            RingElement::one(&g),
            vec![g.free_character(&[1, 0]).unwrap()],
        )
        .unwrap();
        for x in 0..3 {
            assert!(self_intersection_check(&fan, x, &alpha).unwrap());
        }
    }

    #[test]
    fn roundtrip_examples() {
        let fan = p1();
        for a in [0, 2] {
            let d = cartier_from_divisor(&fan, &[0, a]).unwrap();
            assert!(concentration_roundtrip(&fan, &d).unwrap());
        }
        let quad = p1().product(&p1()).unwrap();
        let d = cartier_from_divisor(&quad, &[0, 1, 0, 1]).unwrap();
        assert!(concentration_roundtrip(&quad, &d).unwrap());
        assert_eq!(
            euler_characteristic(&quad, &d).unwrap(),
            series(&quad.group(), "1 + t1 + t2 + t1*t2")
        );
    }

    #[test]
    fn decomposition_examples() {
        let fan = p1();
        let d = cartier_from_divisor(&fan, &[0, 2]).unwrap();
        assert!(decomposition_check(&fan, &[(1, vec![1])], &d).unwrap());
        assert!(decomposition_check(&fan, &[(2, vec![1])], &d).unwrap());
        let class = euler_characteristic(&fan, &d).unwrap();
        let image = restrict_to_mu_n(&class, &[1], 2, 2).unwrap();
        assert_eq!(
            image.poly,
            vec![crate::rep_ring::int(2), crate::rep_ring::int(1)]
        );
        let comps = crt_decompose(&image).unwrap();
        assert_eq!(comps[0].poly, vec![crate::rep_ring::int(3)]);
        assert_eq!(comps[1].poly, vec![crate::rep_ring::int(1)]);
        let fan = p2();
        let d = cartier_from_divisor(&fan, &[0, 0, 1]).unwrap();
        assert!(decomposition_check(&fan, &[(3, vec![1, 1])], &d).unwrap());
        assert!(matches!(
            decomposition_check(&fan, &[(3, vec![3, 3])], &d),
            Err(Error::InvalidEmbedding(_))
        ));
    }

    #[test]
    fn oracle_needs_nef() {
        let fan = p1();
        let d = cartier_from_divisor(&fan, &[0, -1]).unwrap();
        assert!(oracle_equivalence(&fan, &d).is_err());
        let d = cartier_from_divisor(&fan, &[1, 1]).unwrap();
        assert!(oracle_equivalence(&fan, &d).unwrap());
    }
}
