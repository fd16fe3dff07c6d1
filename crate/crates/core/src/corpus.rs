//! Built-in fans and named check cases.

use crate::characters::CharacterGroup;
use crate::error::{Error, Result};
use crate::localization::{LocalizedElement, MultiplicativeSet};
use crate::lrr::{
    concentration_roundtrip, decomposition_check, oracle_equivalence, self_intersection_check,
};
use crate::rep_ring::{int, RingElement};
use crate::toric::{cartier_from_divisor, is_nef, parse_fan, Fan};

const FANS: &[(&str, &str)] = &[
    ("p1", r#"{"dim":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#),
    (
        "p2",
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]}"#,
    ),
    (
        "p1xp1",
        r#"{"dim":2,"rays":[[1,0],[-1,0],[0,1],[0,-1]],"cones":[[0,2],[0,3],[1,2],[1,3]]}"#,
    ),
    (
        "f0",
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,0],[0,-1]],"cones":[[0,1],[1,2],[2,3],[0,3]]}"#,
    ),
    (
        "f1",
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,1],[0,-1]],"cones":[[0,1],[1,2],[2,3],[0,3]]}"#,
    ),
    (
        "f2",
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,2],[0,-1]],"cones":[[0,1],[1,2],[2,3],[0,3]]}"#,
    ),
    (
        "p3",
        r#"{"dim":3,"rays":[[1,0,0],[0,1,0],[0,0,1],[-1,-1,-1]],"cones":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#,
    ),
];

/// Names of the built-in fans.
pub fn fan_names() -> impl Iterator<Item = &'static str> {
    FANS.iter().map(|(name, _)| *name)
}

pub fn fan_json(name: &str) -> Option<&'static str> {
    FANS.iter().find(|(n, _)| *n == name).map(|(_, json)| *json)
}

pub fn fan(name: &str) -> Result<Fan> {
    parse_fan(fan_json(name).ok_or_else(|| Error::MalformedInput(format!("unknown fan {name:?}")))?)
}

/// A fan, a divisor `Σ a_ρ D_ρ`, and optional `μ_n` embeddings `(n, c)`.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: &'static str,
    pub fan: &'static str,
    pub coeffs: &'static [i64],
    pub embeddings: &'static [(u64, &'static [i64])],
}

const CASES: &[Case] = &[
    Case {
        name: "p1-o0",
        fan: "p1",
        coeffs: &[0, 0],
        embeddings: &[(1, &[1])],
    },
    Case {
        name: "p1-o2",
        fan: "p1",
        coeffs: &[0, 2],
        embeddings: &[(2, &[1])],
    },
    Case {
        name: "p1-om1",
        fan: "p1",
        coeffs: &[0, -1],
        embeddings: &[],
    },
    Case {
        name: "p1-om3",
        fan: "p1",
        coeffs: &[0, -3],
        embeddings: &[(2, &[1])],
    },
    Case {
        name: "p2-o1",
        fan: "p2",
        coeffs: &[0, 0, 1],
        embeddings: &[(3, &[1, 1])],
    },
    Case {
        name: "p2-o2",
        fan: "p2",
        coeffs: &[0, 0, 2],
        embeddings: &[(3, &[1, 1]), (2, &[1, 0])],
    },
    Case {
        name: "p2-om3",
        fan: "p2",
        coeffs: &[0, 0, -3],
        embeddings: &[],
    },
    Case {
        name: "p1xp1-o1-1",
        fan: "p1xp1",
        coeffs: &[0, 1, 0, 1],
        embeddings: &[(2, &[1, 1])],
    },
    Case {
        name: "p1xp1-o2-m1",
        fan: "p1xp1",
        coeffs: &[0, 2, 0, -1],
        embeddings: &[],
    },
    Case {
        name: "f0-o1-1",
        fan: "f0",
        coeffs: &[1, 1, 0, 0],
        embeddings: &[],
    },
    Case {
        name: "f1-o1-1",
        fan: "f1",
        coeffs: &[0, 0, 1, 1],
        embeddings: &[(2, &[1, 0])],
    },
    Case {
        name: "f1-exc",
        fan: "f1",
        coeffs: &[0, 0, 0, -1],
        embeddings: &[],
    },
    Case {
        name: "f2-o1-2",
        fan: "f2",
        coeffs: &[0, 0, 1, 2],
        embeddings: &[],
    },
    Case {
        name: "p3-o1",
        fan: "p3",
        coeffs: &[0, 0, 0, 1],
        embeddings: &[(2, &[1, 0, 0])],
    },
    Case {
        name: "p3-o2",
        fan: "p3",
        coeffs: &[0, 0, 0, 2],
        embeddings: &[],
    },
];

pub fn cases() -> &'static [Case] {
    CASES
}

pub fn case(name: &str) -> Result<&'static Case> {
    CASES
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::MalformedInput(format!("unknown case {name:?}")))
}

/// Outcome of one suite; `None` when the suite does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub passed: Option<bool>,
}

/// Fixed test classes for the self-intersection suite.
fn sample_classes(group: &CharacterGroup) -> Result<Vec<LocalizedElement>> {
    let set = MultiplicativeSet::whole(group);
    let mut out = vec![LocalizedElement::one(&set)];
    for i in 0..group.rank() {
        let e = group.generator(i);
        let num = &RingElement::constant(group, int(2)) - &RingElement::monomial(group, e.clone());
        let mut den = vec![e.clone()];
        if i + 1 < group.rank() {
            den.push(group.add(&e, &group.neg(&group.generator(i + 1))));
        }
        out.push(LocalizedElement::new(&set, num, den)?);
    }
    Ok(out)
}

/// Run every applicable suite on a case.
pub fn run_case(c: &Case) -> Result<Vec<SuiteResult>> {
    let fan = fan(c.fan)?;
    let d = cartier_from_divisor(&fan, c.coeffs)?;
    let mut self_int = true;
    for alpha in sample_classes(&fan.group())? {
        for x in 0..fan.cones().len() {
            self_int &= self_intersection_check(&fan, x, &alpha)?;
        }
    }
    let oracle = if is_nef(&d) {
        Some(oracle_equivalence(&fan, &d)?)
    } else {
        None
    };
    let decomposition = if c.embeddings.is_empty() {
        None
    } else {
        let embeddings: Vec<(u64, Vec<i64>)> =
            c.embeddings.iter().map(|(n, v)| (*n, v.to_vec())).collect();
        Some(decomposition_check(&fan, &embeddings, &d)?)
    };
    Ok(vec![
        SuiteResult {
            suite: "self-intersection",
            passed: Some(self_int),
        },
        SuiteResult {
            suite: "concentration",
            passed: Some(concentration_roundtrip(&fan, &d)?),
        },
        SuiteResult {
            suite: "oracle",
            passed: oracle,
        },
        SuiteResult {
            suite: "decomposition",
            passed: decomposition,
        },
    ])
}
