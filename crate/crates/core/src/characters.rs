//! Character groups `Z^r ⊕ ⊕ Z/n_i` of diagonalizable groups, restriction to
//! closed subgroups, and the support of an evaluation-at-a-torsion-point prime.
//!
//! Characters are written additively throughout; multiplicative notation
//! `t^χ` only appears when ring elements are printed.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

/// Character group `Z^rank ⊕ Z/torsion[0] ⊕ ...`, torsion sorted nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct CharacterGroup {
    rank: usize,
    torsion: Vec<i64>,
}

#[derive(Deserialize)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

impl TryFrom<RawGroup> for CharacterGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        CharacterGroup::new(raw.rank, raw.torsion)
    }
}

impl CharacterGroup {
    pub fn new(rank: usize, mut torsion: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = torsion.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidOrder(bad));
        }
        torsion.sort_unstable();
        Ok(CharacterGroup { rank, torsion })
    }

    /// Character group of a split torus of the given rank.
    pub fn torus(rank: usize) -> Self {
        CharacterGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Character group `Z/n` of `μ_n`; `n = 1` gives the trivial group.
    pub fn mu(n: i64) -> Result<Self> {
        match n {
            1 => Ok(CharacterGroup::torus(0)),
            n => CharacterGroup::new(0, vec![n]),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of generators (free plus torsion).
    pub fn generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn zero(&self) -> Character {
        Character {
            free: vec![0; self.rank],
            tors: vec![0; self.torsion.len()],
        }
    }

    /// The `i`-th generator, counting free generators first.
    pub fn generator(&self, i: usize) -> Character {
        let mut flat = vec![0; self.generators()];
        flat[i] = 1;
        self.from_flat(&flat)
    }

    /// Build a character from raw coordinates, reducing torsion entries.
    pub fn character(&self, free: Vec<i64>, tors: Vec<i64>) -> Result<Character> {
        if free.len() != self.rank || tors.len() != self.torsion.len() {
            return Err(Error::GroupMismatch(format!(
                "character with {} free and {} torsion entries in a group of shape {}",
                free.len(),
                tors.len(),
                self
            )));
        }
        Ok(self.reduce(Character { free, tors }))
    }

    /// Free-part-only character of a torus.
    pub fn free_character(&self, free: &[i64]) -> Result<Character> {
        self.character(free.to_vec(), vec![0; self.torsion.len()])
    }

    /// Reduce from a flat coordinate vector (free coordinates first).
    pub fn from_flat(&self, flat: &[i64]) -> Character {
        debug_assert_eq!(flat.len(), self.generators());
        self.reduce(Character {
            free: flat[..self.rank].to_vec(),
            tors: flat[self.rank..].to_vec(),
        })
    }

    fn reduce(&self, mut chi: Character) -> Character {
        for (x, &n) in chi.tors.iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(n);
        }
        chi
    }

    /// Re-canonicalize a character that is already shaped for this group.
    pub fn canonicalize(&self, chi: &Character) -> Result<Character> {
        self.character(chi.free.clone(), chi.tors.clone())
    }

    /// True when `chi` has this group's shape and canonical torsion entries.
    pub fn contains(&self, chi: &Character) -> bool {
        chi.free.len() == self.rank
            && chi.tors.len() == self.torsion.len()
            && chi
                .tors
                .iter()
                .zip(&self.torsion)
                .all(|(&x, &n)| (0..n).contains(&x))
    }

    pub fn check(&self, chi: &Character) -> Result<()> {
        if self.contains(chi) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "{chi:?} is not a character of {self}"
            )))
        }
    }

    pub fn add(&self, a: &Character, b: &Character) -> Character {
        self.reduce(Character {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            tors: a.tors.iter().zip(&b.tors).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn neg(&self, a: &Character) -> Character {
        self.scale(a, -1)
    }

    pub fn scale(&self, a: &Character, k: i64) -> Character {
        self.reduce(Character {
            free: a.free.iter().map(|x| k * x).collect(),
            tors: a.tors.iter().map(|x| k * x).collect(),
        })
    }
}

impl std::fmt::Display for CharacterGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An element of a character group. Only meaningful together with its group;
/// torsion entries are kept in `[0, n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub free: Vec<i64>,
    #[serde(default)]
    pub tors: Vec<i64>,
}

impl Character {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.tors).all(|&x| x == 0)
    }

    /// Coordinates with the free part first.
    pub fn flat(&self) -> Vec<i64> {
        self.free.iter().chain(&self.tors).copied().collect()
    }
}

/// A closed subgroup `H ⊆ G`, presented by the restriction map `G^∨ ↠ H^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSubgroup")]
pub struct Subgroup {
    ambient: CharacterGroup,
    /// `target.generators()` rows by `ambient.generators()` columns.
    matrix: Vec<Vec<i64>>,
    target: CharacterGroup,
}

#[derive(Deserialize)]
struct RawSubgroup {
    ambient: CharacterGroup,
    matrix: Vec<Vec<i64>>,
    target: CharacterGroup,
}

impl TryFrom<RawSubgroup> for Subgroup {
    type Error = Error;

    fn try_from(raw: RawSubgroup) -> Result<Self> {
        Subgroup::new(raw.ambient, raw.matrix, raw.target)
    }
}

impl Subgroup {
    pub fn new(
        ambient: CharacterGroup,
        matrix: Vec<Vec<i64>>,
        target: CharacterGroup,
    ) -> Result<Self> {
        let (rows, cols) = (target.generators(), ambient.generators());
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidSubgroup(format!(
                "restriction matrix must be {rows}x{cols}"
            )));
        }
        // torsion generators of G^∨ must land on elements of compatible order
        for (j, &n) in ambient.torsion.iter().enumerate() {
            let col = ambient.rank + j;
            for (i, row) in matrix.iter().enumerate() {
                let ok = if i < target.rank {
                    row[col] == 0
                } else {
                    (n * row[col]) % target.torsion[i - target.rank] == 0
                };
                if !ok {
                    return Err(Error::InvalidSubgroup(format!(
                        "column {col} does not respect the torsion order {n}"
                    )));
                }
            }
        }
        // surjectivity of G^∨ -> H^∨: columns plus torsion relations span Z^rows
        let mut block = matrix.clone();
        for (i, row) in block.iter_mut().enumerate() {
            for (k, &m) in target.torsion.iter().enumerate() {
                row.push(if i == target.rank + k { m } else { 0 });
            }
        }
        let s = lattice::smith(&block, cols + target.torsion.len());
        if s.rank != rows || s.diagonal.iter().any(|&d| d != 1) {
            return Err(Error::InvalidSubgroup(
                "restriction map is not surjective".into(),
            ));
        }
        Ok(Subgroup {
            ambient,
            matrix,
            target,
        })
    }

    /// `H = G`.
    pub fn whole(group: &CharacterGroup) -> Self {
        Subgroup {
            ambient: group.clone(),
            matrix: lattice::identity(group.generators()),
            target: group.clone(),
        }
    }

    /// `μ_n ⊂ T` embedded by `ζ ↦ (ζ^c_1, ..., ζ^c_r)`; requires `gcd(c, n) = 1`.
    pub fn mu_in_torus(embedding: &[i64], n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidEmbedding(format!("n = {n} must be positive")));
        }
        if lattice::gcd_all(embedding).gcd(&n) != 1 {
            return Err(Error::InvalidEmbedding(format!(
                "{embedding:?} is not primitive mod {n}"
            )));
        }
        let ambient = CharacterGroup::torus(embedding.len());
        let target = CharacterGroup::mu(n)?;
        let matrix = if n == 1 {
            Vec::new()
        } else {
            vec![embedding.iter().map(|c| c.rem_euclid(n)).collect()]
        };
        Subgroup::new(ambient, matrix, target)
    }

    /// `μ_n ⊂ 𝔾_m`.
    pub fn mu_in_gm(n: i64) -> Result<Self> {
        Subgroup::mu_in_torus(&[1], n)
    }

    /// Subtorus `T' ⊆ T` with restriction `χ ↦ matrix · χ`.
    pub fn subtorus(ambient_rank: usize, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let target = CharacterGroup::torus(matrix.len());
        Subgroup::new(CharacterGroup::torus(ambient_rank), matrix, target)
    }

    pub fn ambient(&self) -> &CharacterGroup {
        &self.ambient
    }

    pub fn target(&self) -> &CharacterGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }
}

/// Image of `chi` under `G^∨ ↠ H^∨`.
pub fn restrict_character(chi: &Character, h: &Subgroup) -> Result<Character> {
    h.ambient.check(chi)?;
    Ok(h.target
        .from_flat(&lattice::mat_vec(&h.matrix, &chi.flat())))
}

/// Whether `1 - t^chi` is one of the generators of `S_H`.
pub fn is_nontrivial_on(chi: &Character, h: &Subgroup) -> Result<bool> {
    Ok(!restrict_character(chi, h)?.is_zero())
}

/// A torsion point `g` of `G`: generator `i` evaluates to `exp(2πi a_i / m_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub roots: Vec<(i64, i64)>,
}

/// `K_ρ = {χ : χ(g) = 1}` as a congruence `⟨weights, χ⟩ ≡ 0 (mod modulus)`,
/// together with the support `H_ρ = D(G^∨ / K_ρ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSupport {
    pub weights: Vec<i64>,
    pub modulus: i64,
    /// Generators of `K_ρ`, canonical in `G^∨`.
    pub kernel: Vec<Character>,
    /// `G^∨ ↠ H_ρ^∨ ≅ G^∨ / K_ρ` from the Smith normal form.
    pub support: Subgroup,
}

impl PrimeSupport {
    /// Exponent `k` with `χ(g) = exp(2πi k / modulus)`.
    pub fn evaluate(&self, chi: &Character) -> i64 {
        lattice::dot(&self.weights, &chi.flat()).rem_euclid(self.modulus)
    }

    pub fn in_kernel(&self, chi: &Character) -> bool {
        self.evaluate(chi) == 0
    }
}

pub fn prime_support(group: &CharacterGroup, g: &Evaluation) -> Result<PrimeSupport> {
    let k = group.generators();
    if g.roots.len() != k {
        return Err(Error::InvalidEvaluation(format!(
            "{} roots given for {k} generators",
            g.roots.len()
        )));
    }
    if let Some(&(_, m)) = g.roots.iter().find(|&&(_, m)| m < 1) {
        return Err(Error::InvalidEvaluation(format!(
            "root order {m} must be positive"
        )));
    }
    let modulus = g.roots.iter().fold(1i64, |l, &(_, m)| l.lcm(&m));
    let weights: Vec<i64> = g
        .roots
        .iter()
        .map(|&(a, m)| a.rem_euclid(m) * (modulus / m))
        .collect();
    for (j, &n) in group.torsion.iter().enumerate() {
        let w = weights[group.rank + j];
        if (n * w) % modulus != 0 {
            let (a, m) = g.roots[group.rank + j];
            return Err(Error::InvalidEvaluation(format!(
                "torsion generator of order {n} sent to exp(2πi·{a}/{m}), whose order does not divide {n}"
            )));
        }
    }

    // K' = {x in Z^k : w·x ≡ 0 mod L}, the projection of ker [w | L]
    let mut row = weights.clone();
    row.push(modulus);
    let lifted: Vec<Vec<i64>> = lattice::kernel_basis(&vec![row], k + 1)
        .into_iter()
        .map(|v| v[..k].to_vec())
        .collect();

    // G^∨/K_ρ = Z^k / K'; columns of `basis` span K'
    let basis: Vec<Vec<i64>> = (0..k)
        .map(|i| lifted.iter().map(|v| v[i]).collect())
        .collect();
    let s = lattice::smith(&basis, lifted.len());
    let mut matrix = Vec::new();
    let mut orders = Vec::new();
    for (i, &d) in s.diagonal.iter().enumerate() {
        if d != 1 {
            debug_assert!(d > 1, "kernel of a torsion point has full rank");
            matrix.push(s.u[i].clone());
            orders.push(d);
        }
    }
    let target = CharacterGroup::new(0, orders.clone())?;
    let matrix: Vec<Vec<i64>> = matrix
        .into_iter()
        .zip(&orders)
        .map(|(r, &d)| r.into_iter().map(|x| x.rem_euclid(d)).collect())
        .collect();
    // Smith orders are already nondecreasing, so rows line up with `target`
    let support = Subgroup::new(group.clone(), matrix, target)?;
    let kernel = lifted.iter().map(|v| group.from_flat(v)).collect();
    Ok(PrimeSupport {
        weights,
        modulus,
        kernel,
        support,
    })
}
