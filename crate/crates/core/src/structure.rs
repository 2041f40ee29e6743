//! Cayley-Klein parameters, the bracket table of the rotation subalgebra
//! `so_ω(N)`, and the generalized trigonometric functions `C_ω`, `S_ω`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude a contraction parameter is treated as zero by
/// [`c_omega`] and [`s_omega`].
pub const OMEGA_ZERO_EPS: f64 = 1e-14;

/// The contraction parameters `ω_2, …, ω_N` of a Cayley-Klein algebra.
///
/// Products `ω_{ij} = ω_{i+1} ⋯ ω_j` are available through
/// [`OmegaParams::omega_product`]. The values are arbitrary reals; the
/// canonical choices are `-1`, `0` and `1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaParams {
    n: usize,
    omegas: Vec<f64>,
}

impl OmegaParams {
    /// Builds the parameter set for dimension `n = omegas.len() + 1`.
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        let n = omegas.len() + 1;
        Self::with_dimension(n, omegas)
    }

    pub fn with_dimension(n: usize, omegas: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("dimension must be at least 2, got {n}")));
        }
        if omegas.len() != n - 1 {
            return Err(Error::InvalidParams(format!(
                "dimension {n} needs {} omegas, got {}",
                n - 1,
                omegas.len()
            )));
        }
        if let Some(w) = omegas.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidParams(format!("omega {w} is not finite")));
        }
        Ok(Self { n, omegas })
    }

    /// All parameters equal to one: the compact algebra `so(N)`.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::with_dimension(n, vec![1.0; n.saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// `ω_s` for `2 ≤ s ≤ N`.
    pub fn omega(&self, s: usize) -> Result<f64> {
        if s < 2 || s > self.n {
            return Err(Error::IndexOutOfRange { index: s, n: self.n });
        }
        Ok(self.omegas[s - 2])
    }

    /// `ω_{ij} = ∏_{s=i+1}^{j} ω_s`, equal to one when `i = j`.
    pub fn omega_product(&self, i: usize, j: usize) -> Result<f64> {
        if i < 1 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        if j < i || j > self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        Ok(self.w(i, j))
    }

    /// Unchecked `ω_{ij}`; callers guarantee `1 ≤ i ≤ j ≤ N`.
    pub(crate) fn w(&self, i: usize, j: usize) -> f64 {
        self.omegas[i - 1..j - 1].iter().product()
    }

    /// `ω_{sN}` for every `s = 1, …, N-1`.
    pub(crate) fn boost_weights(&self) -> Vec<f64> {
        (1..self.n).map(|s| self.w(s, self.n)).collect()
    }
}

/// Label of a generator `J_{ij}` with `1 ≤ i < j ≤ N`. When `j = N` the
/// generator acts nonlinearly on the deformed translation group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorId {
    pub i: usize,
    pub j: usize,
}

impl GeneratorId {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        let id = Self { i, j };
        id.check(n)?;
        Ok(id)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.i >= 1 && self.i < self.j && self.j <= n {
            Ok(())
        } else {
            Err(Error::InvalidGenerator { i: self.i, j: self.j, n })
        }
    }

    /// `true` for the deformed generators `J_{iN}`.
    pub fn is_boost(&self, n: usize) -> bool {
        self.j == n
    }

    /// All generators of `so_ω(n)` in lexicographic order.
    pub fn all(n: usize) -> Vec<GeneratorId> {
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(GeneratorId { i, j });
            }
        }
        out
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{},{}", self.i, self.j)
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    /// Parses `"i,j"` (an optional leading `J` is accepted).
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(['J', 'j']);
        let bad = || Error::InvalidParams(format!("cannot parse generator label {s:?}"));
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let i = a.trim().parse().map_err(|_| bad())?;
        let j = b.trim().parse().map_err(|_| bad())?;
        if i < 1 || j <= i {
            return Err(bad());
        }
        Ok(Self { i, j })
    }
}

/// One term `coeff · gen` of a bracket expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coeff: f64,
    pub gen: GeneratorId,
}

/// Nonvanishing brackets `[A, B]` of `so_ω(N)`, stored for `A < B` only.
#[derive(Debug, Clone)]
pub struct StructureTable {
    n: usize,
    basis: Vec<GeneratorId>,
    entries: BTreeMap<(GeneratorId, GeneratorId), Vec<Term>>,
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[GeneratorId] {
        &self.basis
    }

    /// Stored entries, keyed by lexicographically ordered pairs.
    pub fn entries(&self) -> impl Iterator<Item = (&(GeneratorId, GeneratorId), &Vec<Term>)> {
        self.entries.iter()
    }

    /// `[a, b]` as a list of terms; antisymmetry is applied on lookup.
    pub fn bracket(&self, a: GeneratorId, b: GeneratorId) -> Vec<Term> {
        if let Some(terms) = self.entries.get(&(a, b)) {
            return terms.clone();
        }
        if let Some(terms) = self.entries.get(&(b, a)) {
            return terms.iter().map(|t| Term { coeff: -t.coeff, gen: t.gen }).collect();
        }
        Vec::new()
    }

    pub fn index_of(&self, g: GeneratorId) -> Option<usize> {
        self.basis.binary_search(&g).ok()
    }

    /// Bracket of two algebra elements given by coefficients in [`Self::basis`].
    pub fn bracket_dense(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.len()];
        for (ia, &ca) in x.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (ib, &cb) in y.iter().enumerate() {
                if cb == 0.0 || ia == ib {
                    continue;
                }
                for t in self.bracket(self.basis[ia], self.basis[ib]) {
                    let k = self.index_of(t.gen).expect("bracket closes on the basis");
                    out[k] += ca * cb * t.coeff;
                }
            }
        }
        out
    }
}

/// Bracket table of `so_ω(N)`. For `i < j < k`:
/// `[J_ij, J_ik] = ω_ij J_jk`, `[J_ij, J_jk] = -J_ik`, `[J_ik, J_jk] = ω_jk J_ij`;
/// every other pair commutes.
pub fn structure_constants(params: &OmegaParams) -> StructureTable {
    let n = params.dim();
    let mut entries = BTreeMap::new();
    let mut push = |a: GeneratorId, b: GeneratorId, coeff: f64, gen: GeneratorId| {
        if coeff != 0.0 {
            entries.insert((a, b), vec![Term { coeff, gen }]);
        }
    };
    let g = |i, j| GeneratorId { i, j };
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                push(g(i, j), g(i, k), params.w(i, j), g(j, k));
                push(g(i, j), g(j, k), -1.0, g(i, k));
                push(g(i, k), g(j, k), params.w(j, k), g(i, j));
            }
        }
    }
    StructureTable { n, basis: GeneratorId::all(n), entries }
}

/// Largest entry of `[A,[B,C]] + [B,[C,A]] + [C,[A,B]]` over all basis triples.
pub fn jacobi_residual(params: &OmegaParams) -> f64 {
    let table = structure_constants(params);
    let m = table.basis().len();
    let unit = |k: usize| {
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        v
    };
    let mut worst = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let (ea, eb, ec) = (unit(a), unit(b), unit(c));
                let t1 = table.bracket_dense(&ea, &table.bracket_dense(&eb, &ec));
                let t2 = table.bracket_dense(&eb, &table.bracket_dense(&ec, &ea));
                let t3 = table.bracket_dense(&ec, &table.bracket_dense(&ea, &eb));
                for k in 0..m {
                    worst = worst.max((t1[k] + t2[k] + t3[k]).abs());
                }
            }
        }
    }
    worst
}

/// `C_ω(t)`: `cos(√ω t)` for `ω > 0`, `cosh(√|ω| t)` for `ω < 0`, `1` at `ω = 0`.
pub fn c_omega(omega: f64, t: f64) -> f64 {
    cs_omega(omega, t).0
}

/// `S_ω(t)`: `sin(√ω t)/√ω`, `sinh(√|ω| t)/√|ω|`, or `t` at `ω = 0`.
pub fn s_omega(omega: f64, t: f64) -> f64 {
    cs_omega(omega, t).1
}

/// `(C_ω(t), S_ω(t))` in one evaluation.
pub fn cs_omega(omega: f64, t: f64) -> (f64, f64) {
    if omega.abs() < OMEGA_ZERO_EPS {
        (1.0, t)
    } else if omega > 0.0 {
        let r = omega.sqrt();
        let (s, c) = (r * t).sin_cos();
        (c, s / r)
    } else {
        let r = (-omega).sqrt();
        ((r * t).cosh(), (r * t).sinh() / r)
    }
}
