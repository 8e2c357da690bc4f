//! Minimum distance, orbit and bound checks on whole codes.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::algebra::{all_subspaces, normalized_vectors, rref_slice, Elem, Field, Subspace};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;

/// A constant-dimension code: distinct subspaces of one dimension in one
/// ambient space, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    k: usize,
    words: Vec<Subspace>,
}

impl Code {
    pub fn new(mut words: Vec<Subspace>) -> Result<Self> {
        let Some(first) = words.first() else {
            return Err(Error::TooFewCodewords);
        };
        let (n, k) = (first.ambient(), first.dim());
        if let Some(w) = words.iter().find(|w| w.ambient() != n) {
            return Err(Error::AmbientMismatch(n, w.ambient()));
        }
        if words.iter().any(|w| w.dim() != k) {
            return Err(Error::MixedDimensions);
        }
        let mut order: Vec<usize> = (0..words.len()).collect();
        order.sort_by(|&a, &b| words[a].cmp(&words[b]).then(a.cmp(&b)));
        if let Some(w) = order.windows(2).find(|w| words[w[0]] == words[w[1]]) {
            return Err(Error::DuplicateCodeword(w[0], w[1]));
        }
        words.sort();
        Ok(Code { n, k, words })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn into_words(self) -> Vec<Subspace> {
        self.words
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.words.binary_search(s).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Planes only: a repeated line means distance 2, a repeated point 4,
    /// neither 6.
    LineHash,
    Pairwise,
}

impl Strategy {
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::LineHash => "line_hash",
            Strategy::Pairwise => "pairwise",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub strategy: Strategy,
    pub codewords: usize,
    pub n: usize,
    pub k: usize,
    pub min_distance: usize,
    /// Indices into the sorted code of a pair at minimum distance.
    pub witness: Option<(usize, usize)>,
    /// Number of repeated line keys (line-hash only).
    pub line_collisions: u64,
    pub line_keys: u64,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn passes(&self, expected: usize) -> bool {
        self.min_distance >= expected
    }

    /// Stable `key=value` lines, without timing.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "strategy={}", self.strategy.tag());
        let _ = writeln!(s, "codewords={}", self.codewords);
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "k={}", self.k);
        if self.strategy == Strategy::LineHash {
            let _ = writeln!(s, "line_keys={}", self.line_keys);
            let _ = writeln!(s, "line_collisions={}", self.line_collisions);
        }
        let _ = writeln!(s, "min_distance={}", self.min_distance);
        match self.witness {
            Some((i, j)) => {
                let _ = writeln!(s, "witness={i},{j}");
            }
            None => {
                let _ = writeln!(s, "witness=none");
            }
        }
        s
    }
}

fn pack_key(q: u64, row: &[Elem]) -> u64 {
    row.iter().fold(0u64, |acc, &x| acc * q + x as u64)
}

fn key_fits(q: u64, len: usize) -> bool {
    (q as f64).powi(len as i32) < u64::MAX as f64
}

/// Sorted `(key, codeword)` pairs for the `d`-subspaces of every codeword.
fn sub_keys(f: &Field, code: &Code, d: usize) -> Result<Vec<(u64, u32)>> {
    let (n, k) = (code.n, code.k);
    let q = f.order() as u64;
    if !key_fits(q, d * n) {
        return Err(Error::KeyOverflow { q: f.order(), n });
    }
    let coeffs: Vec<Vec<Elem>> = if d == 1 {
        normalized_vectors(f, k)
    } else {
        all_subspaces(f, k, d).into_iter().map(|s| s.data().to_vec()).collect()
    };
    let mut keys: Vec<(u64, u32)> = code
        .words
        .par_iter()
        .enumerate()
        .flat_map_iter(|(idx, w)| {
            let mut buf = vec![0 as Elem; d * n];
            coeffs
                .iter()
                .map(|c| {
                    for r in 0..d {
                        let row = &mut buf[r * n..(r + 1) * n];
                        row.fill(0);
                        for (i, &ci) in c[r * k..(r + 1) * k].iter().enumerate() {
                            if ci != 0 {
                                for (x, &b) in row.iter_mut().zip(w.row(i)) {
                                    *x = f.add(*x, f.mul(ci, b));
                                }
                            }
                        }
                    }
                    rref_slice(f, &mut buf, d, n);
                    (pack_key(q, &buf), idx as u32)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    keys.par_sort_unstable();
    Ok(keys)
}

fn first_repeat(keys: &[(u64, u32)]) -> (u64, Option<(usize, usize)>) {
    let mut count = 0;
    let mut witness = None;
    for w in keys.windows(2) {
        if w[0].0 == w[1].0 {
            count += 1;
            let pair = (w[0].1 as usize, w[1].1 as usize);
            if witness.map_or(true, |p| pair < p) {
                witness = Some(pair);
            }
        }
    }
    (count, witness)
}

pub fn min_distance(f: &Field, code: &Code, strategy: Strategy) -> Result<VerificationReport> {
    if code.len() < 2 {
        return Err(Error::TooFewCodewords);
    }
    let start = Instant::now();
    let mut report = VerificationReport {
        strategy,
        codewords: code.len(),
        n: code.n,
        k: code.k,
        min_distance: 0,
        witness: None,
        line_collisions: 0,
        line_keys: 0,
        elapsed_ms: 0,
    };
    match strategy {
        Strategy::LineHash => {
            if code.k != 3 {
                return Err(Error::InvalidParameters(
                    "line hashing needs codewords of dimension 3".into(),
                ));
            }
            let lines = sub_keys(f, code, 2)?;
            report.line_keys = lines.len() as u64;
            let (count, witness) = first_repeat(&lines);
            drop(lines);
            report.line_collisions = count;
            if witness.is_some() {
                report.min_distance = 2;
                report.witness = witness;
            } else {
                let (_, witness) = first_repeat(&sub_keys(f, code, 1)?);
                report.min_distance = if witness.is_some() { 4 } else { 6 };
                report.witness = witness;
            }
        }
        Strategy::Pairwise => {
            let words = &code.words;
            let best = (0..words.len())
                .into_par_iter()
                .filter_map(|i| {
                    (i + 1..words.len())
                        .map(|j| (words[i].distance(f, &words[j]).expect("same ambient"), i, j))
                        .min()
                })
                .min()
                .expect("at least one pair");
            report.min_distance = best.0;
            report.witness = Some((best.1, best.2));
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Whether the code is closed under the group and is a single orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub group: String,
    pub closed: bool,
    pub single_orbit: bool,
}

impl OrbitReport {
    pub fn passed(&self) -> bool {
        self.closed && self.single_orbit
    }
}

pub fn orbit_check(f: &Field, code: &Code, group: &GroupSpec) -> Result<OrbitReport> {
    if group.ambient() != code.n {
        return Err(Error::AmbientMismatch(code.n, group.ambient()));
    }
    let closed = code
        .words
        .par_iter()
        .all(|w| group.generators.iter().all(|g| code.contains(&g.apply(f, w))));
    let single_orbit = closed && group.orbit(f, &code.words[0])?.len() == code.len();
    Ok(OrbitReport { group: group.name.clone(), closed, single_orbit })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub q: u32,
    pub skk: BigUint,
    pub johnson: Option<BigUint>,
    pub constructed: Option<BigUint>,
}

impl BoundReport {
    /// `skk <= constructed <= johnson`, for whichever values are present.
    pub fn consistent(&self) -> bool {
        match &self.constructed {
            Some(c) => &self.skk <= c && self.johnson.as_ref().map_or(true, |j| c <= j),
            None => true,
        }
    }

    pub fn to_line(&self) -> String {
        let mut s = format!("skk={}", self.skk);
        if let Some(c) = &self.constructed {
            let _ = write!(s, " constructed={c}");
        }
        if let Some(j) = &self.johnson {
            let _ = write!(s, " johnson={j}");
        }
        s
    }
}

fn pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// Lower bound `q^{(n-k)(k-δ+1)}` and, where available, the Johnson upper
/// bound for `A_q(n, d; k)` with `d = 2δ`.
///
/// The Johnson bound is given in closed form for `(9, 4; 3)`. Otherwise it
/// is applied once, from a caller-supplied value of `A_q(n-k+δ, d; δ)`.
pub fn bounds(n: u32, d: u32, k: u32, q: u32, known_a: Option<u64>) -> Result<BoundReport> {
    let delta = d / 2;
    if d % 2 != 0 || delta == 0 || delta > k || k + delta > n {
        return Err(Error::InvalidParameters(format!("n={n} d={d} k={k}")));
    }
    let one = || BigUint::from(1u32);
    let skk = pow(q, (n - k) * (k - delta + 1));
    let johnson = if (n, d, k) == (9, 4, 3) {
        Some((pow(q, 6) + pow(q, 3) + one()) * (pow(q, 2) + one()) * (pow(q, 4) + one()))
    } else {
        known_a.map(|a| {
            let mut num = BigUint::from(a);
            let mut den = one();
            for i in 0..k - delta {
                num *= pow(q, n - i) - one();
                den *= pow(q, k - i) - one();
            }
            num / den
        })
    };
    Ok(BoundReport { n, d, k, q, skk, johnson, constructed: None })
}
