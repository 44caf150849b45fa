//! 3×3 matrices over `Z[ξ, 1/3]`, the formal unit phases that decorate them,
//! and the exact single-qutrit gate constants.
//!
//! The Hadamard `H = F/√3` is not a ring matrix because `√3 ∉ Q(ξ)`. Since
//! `(1 + 2ω)² = −3`, we have `1/√3 = i/(1 + 2ω)` and `H = i · F/(1 + 2ω)`.
//! [`PhasedOp`] therefore carries a formal power of `i` next to its ring
//! matrix; every product with an even number of Hadamards has `i_pow = 0`.

use std::fmt;
use std::ops::{Index, Mul};

use num_bigint::Sign;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycInt, Parity, RingElem};

pub const MATRIX_RING_TAG: &str = "Z[zeta9,1/3]";

/// A formal unit `i^t · (±ξʲ)` with `t ∈ {0, 1}` and `j ∈ Z₉`: the 36 global
/// phases that relate projectively equal operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct UnitPhase {
    pub i: bool,
    pub neg: bool,
    pub xi: u8,
}

impl UnitPhase {
    pub const ONE: UnitPhase = UnitPhase {
        i: false,
        neg: false,
        xi: 0,
    };
    pub const I: UnitPhase = UnitPhase {
        i: true,
        neg: false,
        xi: 0,
    };
    pub const MINUS_ONE: UnitPhase = UnitPhase {
        i: false,
        neg: true,
        xi: 0,
    };

    pub fn xi_pow(k: i64) -> UnitPhase {
        UnitPhase {
            i: false,
            neg: false,
            xi: k.rem_euclid(9) as u8,
        }
    }

    /// `ω = ξ³`.
    pub fn omega() -> UnitPhase {
        UnitPhase::xi_pow(3)
    }

    pub fn is_one(self) -> bool {
        self == UnitPhase::ONE
    }

    pub fn inverse(self) -> UnitPhase {
        // (i·s·ξʲ)⁻¹ = −i·s·ξ⁻ʲ
        UnitPhase {
            i: self.i,
            neg: self.neg ^ self.i,
            xi: (9 - self.xi) % 9,
        }
    }

    /// The real-field part `±ξʲ` as a ring element.
    pub fn ring_part(self) -> RingElem {
        let r = RingElem::xi_pow(self.xi as i64);
        if self.neg {
            -r
        } else {
            r
        }
    }

    /// All 36 formal phases.
    pub fn all() -> impl Iterator<Item = UnitPhase> {
        (0..36u8).map(|n| UnitPhase {
            i: n >= 18,
            neg: (n / 9) % 2 == 1,
            xi: n % 9,
        })
    }
}

impl Mul for UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: UnitPhase) -> UnitPhase {
        // i·i = −1
        let both_i = self.i && rhs.i;
        UnitPhase {
            i: self.i ^ rhs.i,
            neg: self.neg ^ rhs.neg ^ both_i,
            xi: (self.xi + rhs.xi) % 9,
        }
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.neg {
            parts.push("-".to_string());
        }
        if self.i {
            parts.push("i".to_string());
        }
        match self.xi {
            0 => {}
            1 => parts.push("xi".to_string()),
            k => parts.push(format!("xi^{k}")),
        }
        let body: String = match parts.as_slice() {
            [] => "1".into(),
            [s] if s == "-" => "-1".into(),
            _ => {
                let mut out = String::new();
                let mut rest = parts.as_slice();
                if rest[0] == "-" {
                    out.push('-');
                    rest = &rest[1..];
                }
                out.push_str(&rest.join("*"));
                out
            }
        };
        f.write_str(&body)
    }
}

/// A 3×3 matrix over `Z[ξ, 1/3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UMat {
    e: [[RingElem; 3]; 3],
}

impl UMat {
    pub fn new(e: [[RingElem; 3]; 3]) -> UMat {
        UMat { e }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> RingElem) -> UMat {
        UMat {
            e: std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))),
        }
    }

    pub fn identity() -> UMat {
        UMat::diag([RingElem::one(), RingElem::one(), RingElem::one()])
    }

    pub fn diag(d: [RingElem; 3]) -> UMat {
        let [a, b, c] = d;
        let z = RingElem::zero;
        UMat {
            e: [[a, z(), z()], [z(), b, z()], [z(), z(), c]],
        }
    }

    /// Permutation matrix sending `|k⟩` to `|perm[k]⟩`.
    pub fn permutation(perm: [usize; 3]) -> UMat {
        UMat::from_fn(|r, c| {
            if perm[c] == r {
                RingElem::one()
            } else {
                RingElem::zero()
            }
        })
    }

    pub fn entries(&self) -> &[[RingElem; 3]; 3] {
        &self.e
    }

    pub fn dagger(&self) -> UMat {
        UMat::from_fn(|r, c| self.e[c][r].conj())
    }

    pub fn scale(&self, s: &RingElem) -> UMat {
        UMat::from_fn(|r, c| &self.e[r][c] * s)
    }

    pub fn neg(&self) -> UMat {
        UMat::from_fn(|r, c| -&self.e[r][c])
    }

    pub fn mul_xi_pow(&self, k: i64) -> UMat {
        UMat::from_fn(|r, c| self.e[r][c].mul_xi_pow(k))
    }

    /// Multiplies by `±ξʲ`; the `i` flag of the phase is ignored.
    pub fn mul_ring_phase(&self, u: UnitPhase) -> UMat {
        let m = self.mul_xi_pow(u.xi as i64);
        if u.neg {
            m.neg()
        } else {
            m
        }
    }

    /// One entry of the product `self · rhs`.
    pub fn product_entry(&self, rhs: &UMat, r: usize, c: usize) -> RingElem {
        let mut acc = RingElem::zero();
        for k in 0..3 {
            if self.e[r][k].is_zero() || rhs.e[k][c].is_zero() {
                continue;
            }
            acc = &acc + &(&self.e[r][k] * &rhs.e[k][c]);
        }
        acc
    }

    pub fn is_unitary(&self) -> bool {
        self * &self.dagger() == UMat::identity()
    }

    /// Least `k` such that `χᵏ·M` has entries in `Z[ξ]`.
    pub fn denom_exp(&self) -> u32 {
        self.e
            .iter()
            .flatten()
            .map(RingElem::denom_exp_chi)
            .max()
            .unwrap_or(0)
    }

    /// `χᵏ·M` as an integral matrix, or `None` if `k < d(M)`.
    pub fn times_chi_pow(&self, k: u32) -> Option<[[CycInt; 3]; 3]> {
        let mut out: [[CycInt; 3]; 3] = Default::default();
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = self.e[r][c].times_chi_pow(k)?;
            }
        }
        Some(out)
    }

    /// `P_k(M) = P(χᵏ·M)`; `None` if `k` is not a denominator exponent.
    pub fn parity_matrix(&self, k: u32) -> Option<ParityMat> {
        let m = self.times_chi_pow(k)?;
        Some(ParityMat(std::array::from_fn(|r| {
            std::array::from_fn(|c| m[r][c].parity())
        })))
    }

    /// Residues `M_(0), …, M_(depth−1)` of the χ-adic expansion
    /// `M = χ^{−k} Σ lift(M_(i)) χⁱ` with `k = d(M)`.
    pub fn residues(&self, depth: usize, lift: Lift) -> Residues {
        let k = self.denom_exp();
        let mut cur = self.times_chi_pow(k).expect("k = d(M) is a denominator exponent");
        let mut out = Vec::with_capacity(depth);
        for step in 0..depth {
            let pm = ParityMat(std::array::from_fn(|r| {
                std::array::from_fn(|c| cur[r][c].parity())
            }));
            if step + 1 < depth {
                for r in 0..3 {
                    for c in 0..3 {
                        let shifted = &cur[r][c] - &lift.apply(pm.0[r][c]);
                        cur[r][c] = shifted.chi_divide().expect("residue removed");
                    }
                }
            }
            out.push(pm);
        }
        Residues {
            denom_exp: k,
            lift,
            mats: out,
        }
    }

    /// Serialisation used by [`canonical_key`]: length-prefixed so that the
    /// lexicographic order of whole keys is decided by the first entry that
    /// differs.
    fn write_bytes(&self, out: &mut Vec<u8>) {
        for x in self.e.iter().flatten() {
            write_elem(x, out);
        }
    }
}

fn write_elem(x: &RingElem, out: &mut Vec<u8>) {
    out.extend_from_slice(&x.three_exp().to_be_bytes());
    for c in x.num().coeffs() {
        let (sign, mag) = c.to_bytes_be();
        out.push(match sign {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        });
        out.extend_from_slice(&(mag.len() as u32).to_be_bytes());
        out.extend_from_slice(&mag);
    }
}

impl Index<(usize, usize)> for UMat {
    type Output = RingElem;
    fn index(&self, (r, c): (usize, usize)) -> &RingElem {
        &self.e[r][c]
    }
}

impl Mul for &UMat {
    type Output = UMat;
    fn mul(self, rhs: &UMat) -> UMat {
        UMat::from_fn(|r, c| self.product_entry(rhs, r, c))
    }
}

impl Mul for UMat {
    type Output = UMat;
    fn mul(self, rhs: UMat) -> UMat {
        &self * &rhs
    }
}

impl fmt::Display for UMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.e.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
            if i < 2 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// `i^{i_pow} · mat`, with `i_pow ∈ {0, 1}` after canonicalisation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedOp {
    pub i_pow: u8,
    pub mat: UMat,
}

impl PhasedOp {
    pub fn new(i_pow: u8, mat: UMat) -> PhasedOp {
        match i_pow % 4 {
            0 => PhasedOp { i_pow: 0, mat },
            1 => PhasedOp { i_pow: 1, mat },
            2 => PhasedOp {
                i_pow: 0,
                mat: mat.neg(),
            },
            _ => PhasedOp {
                i_pow: 1,
                mat: mat.neg(),
            },
        }
    }

    pub fn identity() -> PhasedOp {
        PhasedOp::from(UMat::identity())
    }

    pub fn dagger(&self) -> PhasedOp {
        // (i·M)† = −i·M†
        PhasedOp::new(3 * self.i_pow, self.mat.dagger())
    }

    pub fn mul_phase(&self, u: UnitPhase) -> PhasedOp {
        PhasedOp::new(self.i_pow + u.i as u8, self.mat.mul_ring_phase(u))
    }

    pub fn is_unitary(&self) -> bool {
        self.mat.is_unitary()
    }

    pub fn pow(&self, n: usize) -> PhasedOp {
        (0..n).fold(PhasedOp::identity(), |acc, _| &acc * self)
    }
}

impl From<UMat> for PhasedOp {
    fn from(mat: UMat) -> PhasedOp {
        PhasedOp { i_pow: 0, mat }
    }
}

impl Mul for &PhasedOp {
    type Output = PhasedOp;
    fn mul(self, rhs: &PhasedOp) -> PhasedOp {
        PhasedOp::new(self.i_pow + rhs.i_pow, &self.mat * &rhs.mat)
    }
}

impl Mul for PhasedOp {
    type Output = PhasedOp;
    fn mul(self, rhs: PhasedOp) -> PhasedOp {
        &self * &rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("operators are not equal up to a global phase")]
pub struct NotEqual;

/// Finds the formal phase `u` with `a = u·b`.
///
/// Decided by testing whether `a.mat · b.mat†` is a scalar matrix `λ·I` with
/// `λ = ±ξʲ`. Both arguments are expected to be unitary.
pub fn projective_eq(a: &PhasedOp, b: &PhasedOp) -> Result<UnitPhase, NotEqual> {
    let prod = &a.mat * &b.mat.dagger();
    let lambda = &prod.e[0][0];
    for r in 0..3 {
        for c in 0..3 {
            let expected_zero = r != c;
            if expected_zero && !prod.e[r][c].is_zero() {
                return Err(NotEqual);
            }
            if !expected_zero && &prod.e[r][c] != lambda {
                return Err(NotEqual);
            }
        }
    }
    let ring = UnitPhase::all()
        .take(18)
        .find(|u| &u.ring_part() == lambda)
        .ok_or(NotEqual)?;
    // a = i^{a_i} λ M_b = i^{a_i − b_i} λ · b
    let i_shift = match (a.i_pow, b.i_pow) {
        (x, y) if x == y => UnitPhase::ONE,
        (1, 0) => UnitPhase::I,
        _ => UnitPhase::I.inverse(),
    };
    Ok(i_shift * ring)
}

/// Hashable label of a projective class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjKey(Vec<u8>);

impl ProjKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// The lexicographically least serialisation among all 36 phase multiples
/// of `a`. Multiplying by `i` only moves a sign between the `i` flag and the
/// matrix, so the minimum is taken over the 18 ring phases `±ξʲ` of the
/// matrix part; the first non-zero entry decides it.
pub fn canonical_key(a: &PhasedOp) -> ProjKey {
    canonical_key_with_phase(&a.mat).0
}

/// Like [`canonical_key`] on a bare matrix, also returning the ring phase `u`
/// such that the key is the serialisation of `u·m`.
pub fn canonical_key_with_phase(m: &UMat) -> (ProjKey, UnitPhase) {
    let Some(first) = m.e.iter().flatten().find(|x| !x.is_zero()) else {
        return (ProjKey(Vec::new()), UnitPhase::ONE);
    };
    let best = UnitPhase::all()
        .take(18)
        .map(|u| {
            let v = first.mul_xi_pow(u.xi as i64);
            let v = if u.neg { -v } else { v };
            let mut bytes = Vec::new();
            write_elem(&v, &mut bytes);
            (bytes, u)
        })
        .min()
        .map(|(_, u)| u)
        .unwrap_or(UnitPhase::ONE);
    let mut out = Vec::new();
    m.mul_ring_phase(best).write_bytes(&mut out);
    (ProjKey(out), best)
}

/// Single-qutrit gate tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H,
    S,
    T,
    X,
    Z,
    /// `V₋₁`, the permutation swapping `|1⟩` and `|2⟩`.
    V,
    /// `A = H S² H S² H`.
    A,
    /// `H′_m = Sᵐ H S H`.
    HPrime(u8),
}

impl Gate {
    pub const ALL: [Gate; 10] = [
        Gate::H,
        Gate::S,
        Gate::T,
        Gate::X,
        Gate::Z,
        Gate::V,
        Gate::A,
        Gate::HPrime(0),
        Gate::HPrime(1),
        Gate::HPrime(2),
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Gate::H => "H",
            Gate::S => "S",
            Gate::T => "T",
            Gate::X => "X",
            Gate::Z => "Z",
            Gate::V => "V",
            Gate::A => "A",
            Gate::HPrime(0) => "H0'",
            Gate::HPrime(1) => "H1'",
            Gate::HPrime(_) => "H2'",
        }
    }

    pub fn is_clifford(self) -> bool {
        self != Gate::T
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn omega_pow(k: i64) -> RingElem {
    RingElem::xi_pow(3 * k)
}

/// `F/(1 + 2ω)` with `F_{jk} = ω^{jk}`; the Hadamard is `i` times this.
fn hadamard_core() -> UMat {
    // 1/(1 + 2ω) = −(1 + 2ω)/3
    let inv = RingElem::new(CycInt::from_i64s([-1, 0, 0, -2, 0, 0]), 1);
    UMat::from_fn(|j, k| &omega_pow((j * k) as i64) * &inv)
}

/// Exact matrix of a gate token.
pub fn gate_matrix(g: Gate) -> PhasedOp {
    match g {
        Gate::H => PhasedOp::new(1, hadamard_core()),
        Gate::S => PhasedOp::from(UMat::diag([RingElem::one(), omega_pow(1), RingElem::one()])),
        Gate::T => PhasedOp::from(UMat::diag([
            RingElem::xi_pow(1),
            RingElem::one(),
            RingElem::xi_pow(-1),
        ])),
        Gate::X => PhasedOp::from(UMat::permutation([1, 2, 0])),
        Gate::Z => PhasedOp::from(UMat::diag([RingElem::one(), omega_pow(1), omega_pow(2)])),
        Gate::V => PhasedOp::from(UMat::permutation([0, 2, 1])),
        Gate::A => {
            let h = gate_matrix(Gate::H);
            let s2 = gate_matrix(Gate::S).pow(2);
            &(&(&(&h * &s2) * &h) * &s2) * &h
        }
        Gate::HPrime(m) => {
            let h = gate_matrix(Gate::H);
            let s = gate_matrix(Gate::S);
            let hsh = &(&h * &s) * &h;
            &s.pow(m as usize % 3) * &hsh
        }
    }
}

/// Lifts `Z₃ → Z[ξ]` used when peeling residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Lift {
    /// `{0, 1, 2}`
    #[default]
    Standard,
    /// `{0, 1, −1}`
    Balanced,
}

impl Lift {
    pub fn apply(self, p: Parity) -> CycInt {
        let v = match (self, p.value()) {
            (Lift::Balanced, 2) => -1,
            (_, v) => v as i64,
        };
        CycInt::from_int(v)
    }
}

/// A 3×3 matrix over `Z₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ParityMat(pub [[Parity; 3]; 3]);

impl ParityMat {
    pub fn from_u8(rows: [[u8; 3]; 3]) -> ParityMat {
        ParityMat(rows.map(|r| r.map(|v| Parity::new(v as i64))))
    }

    pub fn all_ones() -> ParityMat {
        ParityMat::from_u8([[1; 3]; 3])
    }

    pub fn identity() -> ParityMat {
        ParityMat::from_u8([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn scale(self, s: Parity) -> ParityMat {
        ParityMat(self.0.map(|r| r.map(|v| v * s)))
    }

    pub fn column(&self, c: usize) -> [Parity; 3] {
        [self.0[0][c], self.0[1][c], self.0[2][c]]
    }

    pub fn permute_columns(&self, perm: [usize; 3]) -> ParityMat {
        ParityMat(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[r][perm[c]])
        }))
    }

    /// Equality up to a permutation of columns.
    pub fn eq_up_to_column_perm(&self, other: &ParityMat) -> bool {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        PERMS.iter().any(|&p| &self.permute_columns(p) == other)
    }
}

impl fmt::Display for ParityMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            write!(f, "{} {} {}", row[0], row[1], row[2])?;
            if i < 2 {
                write!(f, "; ")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residues {
    pub denom_exp: u32,
    pub lift: Lift,
    pub mats: Vec<ParityMat>,
}

#[derive(Debug, Error)]
pub enum MatrixFormatError {
    #[error("invalid matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported ring tag {0:?}")]
    Ring(String),
    #[error("matrix must be 3x3")]
    Shape,
    #[error("i_pow must be 0..3, got {0}")]
    IPow(u8),
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    ring: String,
    i_pow: u8,
    entries: Vec<Vec<RingElem>>,
}

impl PhasedOp {
    /// `{"ring":"Z[zeta9,1/3]","i_pow":0,"entries":[[e,..],..]}` with
    /// `e = {"c":[six decimal strings],"p3":n}`.
    pub fn to_json(&self) -> String {
        let j = MatrixJson {
            ring: MATRIX_RING_TAG.to_string(),
            i_pow: self.i_pow,
            entries: self.mat.e.iter().map(|r| r.to_vec()).collect(),
        };
        serde_json::to_string(&j).expect("matrix serialises")
    }

    pub fn from_json(s: &str) -> Result<PhasedOp, MatrixFormatError> {
        let j: MatrixJson = serde_json::from_str(s)?;
        if j.ring != MATRIX_RING_TAG {
            return Err(MatrixFormatError::Ring(j.ring));
        }
        if j.i_pow > 3 {
            return Err(MatrixFormatError::IPow(j.i_pow));
        }
        if j.entries.len() != 3 || j.entries.iter().any(|r| r.len() != 3) {
            return Err(MatrixFormatError::Shape);
        }
        let mut it = j.entries.into_iter().flatten();
        let mat = UMat::from_fn(|_, _| it.next().expect("shape checked"));
        Ok(PhasedOp::new(j.i_pow, mat))
    }
}
