mod common;

use eqloc::characters::Character;
use eqloc::corpus;
use eqloc::error::Error;
use eqloc::lrr::{
    brion_generating_function, count_points, euler_characteristic, oracle_equivalence,
};
use eqloc::toric::{cartier_from_divisor, is_nef, Fan};
use eqloc::{CharacterGroup, Polytope, RingElement};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn chi(fan: &Fan, coeffs: &[i64]) -> RingElement {
    euler_characteristic(fan, &cartier_from_divisor(fan, coeffs).unwrap()).unwrap()
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// A random product of elementary matrices and its inverse.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let (mut u, mut inv) = (identity(n), identity(n));
    for _ in 0..4 {
        let mut e = identity(n);
        let mut e_inv = identity(n);
        if n > 1 && rng.gen_bool(0.7) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let k = rng.gen_range(-2..=2);
            e[i][j] = k;
            e_inv[i][j] = -k;
        } else {
            let i = rng.gen_range(0..n);
            e[i][i] = -1;
            e_inv[i][i] = -1;
        }
        u = matmul(&e, &u);
        inv = matmul(&inv, &e_inv);
    }
    (u, inv)
}

#[test]
fn cech_oracle_agrees_on_surfaces() {
    for name in ["p2", "p1xp1", "f0", "f1", "f2"] {
        let fan = corpus::fan(name).unwrap();
        for coeffs in divisor_grid(fan.rays().len(), -2, 2) {
            let bound = search_bound(&coeffs);
            let cech = cech_euler_characteristic(&fan, &coeffs, bound);
            assert_eq!(chi(&fan, &coeffs), cech, "{name} {coeffs:?}");
        }
    }
}

#[test]
fn cech_oracle_is_stable_under_a_larger_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, samples) in [("p1", 20), ("f2", 20), ("p3", 6)] {
        let fan = corpus::fan(name).unwrap();
        for _ in 0..samples {
            let coeffs = random_vec(&mut rng, fan.rays().len(), 2);
            let bound = search_bound(&coeffs);
            let small = cech_euler_characteristic(&fan, &coeffs, bound);
            let large = cech_euler_characteristic(&fan, &coeffs, bound + 3);
            assert_eq!(small, large, "{name} {coeffs:?}");
            assert_eq!(chi(&fan, &coeffs), small, "{name} {coeffs:?}");
        }
    }
}

#[test]
fn projective_line_matches_cech_including_negative_degrees() {
    let fan = corpus::fan("p1").unwrap();
    for a in -3..=3 {
        for b in -6..=6 {
            let coeffs = [a, b];
            assert_eq!(
                chi(&fan, &coeffs),
                cech_euler_characteristic(&fan, &coeffs, search_bound(&coeffs))
            );
        }
    }
}

#[test]
fn serre_duality_on_the_projective_line() {
    let fan = corpus::fan("p1").unwrap();
    let g = fan.group();
    for d in 0..=3 {
        let positive = chi(&fan, &[0, d]);
        let negative = chi(&fan, &[0, -d - 2]);
        let dual = positive
            .map_characters(&g, |c| g.neg(c))
            .shift(&g.free_character(&[-1]).unwrap());
        assert_eq!(negative, -&dual, "d = {d}");
        let coeffs = [0, -d - 2];
        assert_eq!(
            negative,
            cech_euler_characteristic(&fan, &coeffs, search_bound(&coeffs))
        );
        assert_eq!(negative.augmentation(), eqloc::rep_ring::int(-d - 1));
    }
}

#[test]
fn nef_divisors_match_the_polytope() {
    for name in corpus::fan_names() {
        let fan = corpus::fan(name).unwrap();
        let mut nef = 0;
        for coeffs in divisor_grid(fan.rays().len(), 0, 2) {
            let d = cartier_from_divisor(&fan, &coeffs).unwrap();
            if !is_nef(&d) {
                continue;
            }
            nef += 1;
            assert!(oracle_equivalence(&fan, &d).unwrap(), "{name} {coeffs:?}");
            let enumerated = enumerate_polytope(&fan, &coeffs);
            let value = euler_characteristic(&fan, &d).unwrap();
            assert_eq!(value, enumerated, "{name} {coeffs:?}");
        }
        assert!(nef > 0, "{name}");
    }
}

#[test]
fn higher_cohomology_vanishes_exactly_for_nef_on_p2() {
    // on P² every divisor is linearly equivalent to a multiple of a line
    let fan = corpus::fan("p2").unwrap();
    for coeffs in divisor_grid(3, -2, 2) {
        let d = cartier_from_divisor(&fan, &coeffs).unwrap();
        let cech = cech_euler_characteristic(&fan, &coeffs, search_bound(&coeffs));
        let enumerated = enumerate_polytope(&fan, &coeffs);
        let degree: i64 = coeffs.iter().sum();
        assert_eq!(is_nef(&d), degree >= 0, "{coeffs:?}");
        assert_eq!(cech == enumerated, degree >= -2, "{coeffs:?}");
    }
}

#[test]
fn brion_on_ample_polytopes() {
    let ample: &[(&str, &[i64])] = &[
        ("p2", &[0, 0, 1]),
        ("p2", &[1, 1, 1]),
        ("p1xp1", &[0, 2, 0, 1]),
        ("f1", &[0, 0, 1, 2]),
        ("f2", &[0, 0, 1, 3]),
        ("p3", &[0, 0, 0, 2]),
        ("p3", &[1, 0, 2, 0]),
    ];
    for (name, coeffs) in ample {
        let fan = corpus::fan(name).unwrap();
        let p = Polytope::from_cartier(&cartier_from_divisor(&fan, coeffs).unwrap()).unwrap();
        let expected = enumerate_polytope(&fan, coeffs);
        assert_eq!(
            brion_generating_function(&p).unwrap(),
            expected,
            "{name} {coeffs:?}"
        );
        assert_eq!(count_points(&p).unwrap(), BigInt::from(expected.len()));
    }
}

#[test]
fn brion_on_boxes_and_simplices() {
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=2 {
                let mut vertices = Vec::new();
                for x in [0, a] {
                    for y in [0, b] {
                        for z in [0, c] {
                            vertices.push(vec![x, y, z]);
                        }
                    }
                }
                let p = Polytope::from_vertices(3, vertices).unwrap();
                assert_eq!(
                    count_points(&p).unwrap(),
                    BigInt::from((a + 1) * (b + 1) * (c + 1))
                );
            }
        }
    }
    for n in 1..=3usize {
        for d in 1..=4i64 {
            let mut vertices = vec![vec![0; n]];
            for i in 0..n {
                let mut v = vec![0; n];
                v[i] = d;
                vertices.push(v);
            }
            let p = Polytope::from_vertices(n, vertices).unwrap();
            assert_eq!(
                count_points(&p).unwrap(),
                binomial(n as u64 + d as u64, n as u64)
            );
            let g = CharacterGroup::torus(n);
            let scan: Vec<(Character, _)> = cube(n, d)
                .into_iter()
                .filter(|m| m.iter().all(|&x| x >= 0) && m.iter().sum::<i64>() <= d)
                .map(|m| (g.free_character(&m).unwrap(), eqloc::rep_ring::int(1)))
                .collect();
            assert_eq!(
                brion_generating_function(&p).unwrap(),
                RingElement::from_terms(&g, scan).unwrap()
            );
        }
    }
}

#[test]
fn unimodular_change_of_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in corpus::fan_names() {
        let fan = corpus::fan(name).unwrap();
        let g = fan.group();
        for _ in 0..6 {
            let (u, u_inv) = random_unimodular(&mut rng, fan.dim());
            let moved = fan.transform(&u).unwrap();
            let coeffs = random_vec(&mut rng, fan.rays().len(), 2);
            // characters transform by the inverse transpose
            let inv_t: Vec<Vec<i64>> = (0..fan.dim())
                .map(|i| (0..fan.dim()).map(|j| u_inv[j][i]).collect())
                .collect();
            let expected = chi(&fan, &coeffs).map_characters(&g, |c| {
                let v: Vec<i64> = inv_t.iter().map(|row| dot(row, &c.free)).collect();
                g.free_character(&v).unwrap()
            });
            assert_eq!(chi(&moved, &coeffs), expected, "{name} {u:?} {coeffs:?}");
        }
    }
}

#[test]
fn products_are_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pairs = [
        ("p1", "p1"),
        ("p1", "p2"),
        ("p2", "p1"),
        ("p1", "f1"),
        ("f2", "p1"),
    ];
    for (x, y) in pairs {
        let (fx, fy) = (corpus::fan(x).unwrap(), corpus::fan(y).unwrap());
        let product = fx.product(&fy).unwrap();
        for _ in 0..8 {
            let a = random_vec(&mut rng, fx.rays().len(), 2);
            let b = random_vec(&mut rng, fy.rays().len(), 2);
            let (dx, dy) = (
                cartier_from_divisor(&fx, &a).unwrap(),
                cartier_from_divisor(&fy, &b).unwrap(),
            );
            let joint = dx.product(&dy).unwrap();
            assert_eq!(joint.fan(), &product);
            let lhs = euler_characteristic(&product, &joint).unwrap();
            let rhs = chi(&fx, &a).external_product(&chi(&fy, &b)).unwrap();
            assert_eq!(lhs, rhs, "{x} x {y}: {a:?} {b:?}");
        }
    }
}

#[test]
fn relabeling_rays_and_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in corpus::fan_names() {
        let fan = corpus::fan(name).unwrap();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..fan.rays().len()).collect();
            perm.shuffle(&mut rng);
            // new ray i is old ray perm[i]
            let mut position = vec![0; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                position[p] = i;
            }
            let rays = perm.iter().map(|&p| fan.rays()[p].clone()).collect();
            let mut cones: Vec<Vec<usize>> = fan
                .cones()
                .iter()
                .map(|c| c.iter().rev().map(|&r| position[r]).collect())
                .collect();
            cones.shuffle(&mut rng);
            let relabeled = Fan::new(fan.dim(), rays, cones).unwrap();
            let coeffs = random_vec(&mut rng, perm.len(), 2);
            let permuted: Vec<i64> = perm.iter().map(|&p| coeffs[p]).collect();
            assert_eq!(chi(&relabeled, &permuted), chi(&fan, &coeffs), "{name}");
        }
    }
}

#[test]
fn invalid_fans_are_rejected() {
    let singular = Fan::new(
        2,
        vec![vec![1, 0], vec![1, 2], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    );
    assert!(matches!(singular, Err(Error::NotSmooth { .. })));
    let incomplete = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2]],
    );
    assert!(matches!(incomplete, Err(Error::NotComplete(_))));
    let imprimitive = Fan::new(1, vec![vec![2], vec![-1]], vec![vec![0], vec![1]]);
    assert!(matches!(imprimitive, Err(Error::NotPrimitive { .. })));
    let fan = corpus::fan("p2").unwrap();
    assert!(cartier_from_divisor(&fan, &[1, 2]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hirzebruch_values_at_primes(a in 0usize..3, coeffs in prop::collection::vec(-3i64..=3, 4)) {
        // exact value of the fixed-point sum at a point where no denominator vanishes
        let fan = corpus::fan(["f0", "f1", "f2"][a]).unwrap();
        let d = cartier_from_divisor(&fan, &coeffs).unwrap();
        let at = [eqloc::rep_ring::int(2), eqloc::rep_ring::int(3)];
        let mut direct = eqloc::rep_ring::int(0);
        for fp in eqloc::toric::fixed_points(&fan, Some(&d)) {
            let mut term = eqloc::rep_ring::int(1);
            let fiber = fp.fiber_char.unwrap();
            term *= at[0].pow(fiber.free[0] as i32) * at[1].pow(fiber.free[1] as i32);
            for u in &fp.cotangent_chars {
                term /= eqloc::rep_ring::int(1) - at[0].pow(u.free[0] as i32) * at[1].pow(u.free[1] as i32);
            }
            direct += term;
        }
        prop_assert_eq!(euler_characteristic(&fan, &d).unwrap().evaluate(&at).unwrap(), direct);
    }
}
