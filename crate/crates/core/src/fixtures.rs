//! Deterministic test lattices inside a fixed Leech lattice.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::borcherds::{self, LorentzianModel};
use crate::enumeration;
use crate::error::{Error, Result};
use crate::lattice::{standard, GroupAction, Lattice};
use crate::linalg::IntegerMatrix;

pub const FIXTURE_NAMES: [&str; 3] = ["leech-itself", "rank1-min", "e8-2"];

/// The Leech lattice as `w₀^⊥/ℤw₀`, built once per process.
pub fn leech() -> &'static Lattice {
    static LEECH: OnceLock<Lattice> = OnceLock::new();
    LEECH.get_or_init(|| borcherds::build_leech(&LorentzianModel::build()).expect("the model quotient is valid"))
}

/// Minimal vectors of [`leech`], one per ± pair, with `i64` coordinates.
pub struct MinimalShell {
    pub vectors: Vec<Vec<i64>>,
    images: Vec<Vec<i64>>,
}

impl MinimalShell {
    fn new(l: &Lattice) -> Result<Self> {
        let report = enumeration::short_vectors(l, &BigInt::from(4))?;
        let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Precondition("coordinate exceeds i64".into()));
        let g = l.gram();
        let gram: Vec<i64> = g.entries().iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        let vectors = report
            .vectors
            .iter()
            .map(|v| v.iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let n = g.rows();
        let images = vectors
            .iter()
            .map(|v| (0..n).map(|j| (0..n).map(|i| v[i] * gram[i * n + j]).sum()).collect())
            .collect();
        Ok(MinimalShell { vectors, images })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn pairing(&self, i: usize, j: usize) -> i64 {
        self.images[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, i: usize) -> i64 {
        self.pairing(i, i)
    }
}

/// The 98280 ± pairs of minimal vectors of [`leech`].
pub fn minimal_shell() -> &'static MinimalShell {
    static SHELL: OnceLock<MinimalShell> = OnceLock::new();
    SHELL.get_or_init(|| MinimalShell::new(leech()).expect("the Leech shell fits in i64"))
}

/// A named pipeline input: `s` is a sublattice of [`leech`].
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub s: Lattice,
    pub group: GroupAction,
}

pub fn fixture(name: &str, seed: u64) -> Result<Fixture> {
    let l = leech();
    let (s, rank) = match name {
        "leech-itself" => (l.sublattice("Leech", &IntegerMatrix::identity(24))?, 24),
        "rank1-min" => {
            let (v, _) = enumeration::minimal_vector(l)?;
            (l.sublattice("Zv0", &IntegerMatrix::from_rows(24, vec![v])?)?, 1)
        }
        "e8-2" => (l.sublattice("E8(2)", &find_e8_2(seed)?)?, 8),
        other => {
            return Err(Error::Malformed(format!("unknown fixture '{other}'; expected one of {FIXTURE_NAMES:?}")))
        }
    };
    Ok(Fixture { name: name.to_string(), s, group: GroupAction::minus_identity(rank) })
}

/// Order in which E8 nodes are placed; each node is adjacent to an earlier one.
const E8_ORDER: [usize; 8] = [0, 2, 3, 1, 4, 5, 6, 7];

/// Leech coordinates of eight minimal vectors with Gram matrix `E8(2)`
/// spanning a primitive sublattice, found by a seeded backtracking search.
pub fn find_e8_2(seed: u64) -> Result<IntegerMatrix> {
    let shell = minimal_shell();
    let target = standard::e8_2().gram();
    let mut order: Vec<usize> = (0..shell.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // chosen[k] = (shell index, sign) for node E8_ORDER[k]
    let mut chosen: Vec<(usize, i64)> = Vec::with_capacity(8);
    let mut cursor = [0usize; 8];
    let l = leech();
    loop {
        let depth = chosen.len();
        if depth == 8 {
            let rows = chosen_rows(shell, &chosen);
            let sub = l.sublattice("E8(2)", &rows)?;
            if l.is_primitive_sublattice(&sub)? && sub.gram() == target {
                return Ok(rows);
            }
            log::debug!("E8(2) candidate is not primitive; backtracking");
            chosen.pop();
            continue;
        }
        let node = E8_ORDER[depth];
        let mut next = None;
        while cursor[depth] < order.len() {
            let idx = order[cursor[depth]];
            cursor[depth] += 1;
            if let Some(sign) = placement_sign(shell, &target, &chosen, node, idx) {
                next = Some((idx, sign));
                break;
            }
        }
        match next {
            Some(c) => {
                chosen.push(c);
                if depth + 1 < 8 {
                    cursor[depth + 1] = 0;
                }
            }
            None => {
                if chosen.pop().is_none() {
                    return Err(Error::NoSolution("no E8(2) among the minimal vectors".into()));
                }
            }
        }
    }
}

/// The sign with which shell vector `idx` fits as `node`, if any.
fn placement_sign(
    shell: &MinimalShell,
    target: &IntegerMatrix,
    chosen: &[(usize, i64)],
    node: usize,
    idx: usize,
) -> Option<i64> {
    let mut sign = None;
    for (k, &(j, sj)) in chosen.iter().enumerate() {
        if j == idx {
            return None;
        }
        let want = target[(node, E8_ORDER[k])].to_i64().expect("small");
        let have = sj * shell.pairing(j, idx);
        match (want, sign) {
            (0, _) if have != 0 => return None,
            (0, _) => {}
            (_, None) if have == want => sign = Some(1),
            (_, None) if have == -want => sign = Some(-1),
            (_, None) => return None,
            (_, Some(s)) if s * have != want => return None,
            _ => {}
        }
    }
    Some(sign.unwrap_or(1))
}

fn chosen_rows(shell: &MinimalShell, chosen: &[(usize, i64)]) -> IntegerMatrix {
    let mut rows = vec![Vec::new(); 8];
    for (k, &(idx, sign)) in chosen.iter().enumerate() {
        rows[E8_ORDER[k]] = shell.vectors[idx].iter().map(|&x| BigInt::from(sign * x)).collect();
    }
    IntegerMatrix::from_rows(24, rows).expect("24 columns")
}

/// Saturation of the span of `rank` random independent minimal vectors.
/// Sublattices of the Leech lattice are rootless automatically.
pub fn random_primitive_sublattice(rank: usize, rng: &mut impl Rng) -> Result<Lattice> {
    if rank == 0 || rank > 24 {
        return Err(Error::Precondition(format!("rank {rank} out of range 1..=24")));
    }
    let shell = minimal_shell();
    let l = leech();
    loop {
        let picks: Vec<Vec<BigInt>> = (0..rank)
            .map(|_| shell.vectors[rng.gen_range(0..shell.len())].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let m = IntegerMatrix::from_rows(24, picks)?;
        if m.rank() < rank {
            continue;
        }
        let span = l.sublattice("span", &m)?;
        let (sat, _) = l.saturate(&span)?;
        return Ok(sat.with_label(format!("random rank {rank}")));
    }
}

/// `true` when the Gram of `m` is the `E8(2)` Gram.
pub fn is_e8_2_frame(m: &IntegerMatrix) -> bool {
    leech().sublattice("check", m).map(|s| s.gram() == standard::e8_2().gram()).unwrap_or(false)
}
