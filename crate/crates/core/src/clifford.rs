//! The single-qutrit Clifford group modulo phases.
//!
//! Two descriptions live here. [`CliffordElem`] is the Appleby label
//! `D_(x,z) V_F` with `F ∈ SL(2, Z₃)`; it composes symbolically. The
//! [`CliffordTables`] describe the same 216 elements as products `h·p` with
//! `h ∈ {1, H′₀, H′₁, H′₂}` and `p` in the 54-element subgroup `𝒫 = ⟨S, X, V₋₁⟩`,
//! and carry the exact phases of the rewrite rules the normaliser needs.
//! The tables are derived from exact matrices on first use.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use serde::Serialize;

use crate::cyclotomic::{CycInt, RingElem};
use crate::exactmat::{canonical_key, gate_matrix, projective_eq, Gate, PhasedOp, ProjKey, UMat, UnitPhase};

fn z3(v: i64) -> u8 {
    v.rem_euclid(3) as u8
}

/// Multiplicative inverse in `Z₃` (`x ≠ 0`): both units are involutions.
fn inv3(x: u8) -> u8 {
    debug_assert!(!x.is_multiple_of(3));
    x % 3
}

/// `2⁻¹` in `Z₃`.
const HALF: i64 = 2;

/// A matrix `(a b; c d)` over `Z₃` with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SL2Z3 {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
}

impl SL2Z3 {
    pub const IDENTITY: SL2Z3 = SL2Z3 { a: 1, b: 0, c: 0, d: 1 };
    /// `Ŝ = (1 0; 1 1)`
    pub const S: SL2Z3 = SL2Z3 { a: 1, b: 0, c: 1, d: 1 };
    /// `Ĥ = (0 −1; 1 0)`
    pub const H: SL2Z3 = SL2Z3 { a: 0, b: 2, c: 1, d: 0 };

    /// Builds the matrix if its determinant is 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<SL2Z3> {
        let m = SL2Z3 {
            a: z3(a),
            b: z3(b),
            c: z3(c),
            d: z3(d),
        };
        (m.det() == 1).then_some(m)
    }

    pub fn det(&self) -> u8 {
        z3(self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64)
    }

    pub fn inverse(&self) -> SL2Z3 {
        SL2Z3 {
            a: self.d,
            b: z3(-(self.b as i64)),
            c: z3(-(self.c as i64)),
            d: self.a,
        }
    }

    pub fn neg(&self) -> SL2Z3 {
        SL2Z3 {
            a: z3(-(self.a as i64)),
            b: z3(-(self.b as i64)),
            c: z3(-(self.c as i64)),
            d: z3(-(self.d as i64)),
        }
    }

    pub fn pow(&self, n: u8) -> SL2Z3 {
        (0..n).fold(SL2Z3::IDENTITY, |acc, _| acc * *self)
    }

    pub fn apply(&self, v: (u8, u8)) -> (u8, u8) {
        (
            z3(self.a as i64 * v.0 as i64 + self.b as i64 * v.1 as i64),
            z3(self.c as i64 * v.0 as i64 + self.d as i64 * v.1 as i64),
        )
    }

    /// All 24 elements.
    pub fn all() -> Vec<SL2Z3> {
        let mut out = Vec::with_capacity(24);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        if let Some(m) = SL2Z3::new(a, b, c, d) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Decomposes into the generators `Ŝ`, `Ĥ`: `Ŝᵐ Ĥ Ŝⁿ Ĥ Ŝ^q` when `b ≠ 0`
    /// (`n = b`, `q = (a+1)b⁻¹`, `m = (d+1)b⁻¹`), otherwise
    /// `Ĥ Ŝᵐ Ĥ Ŝⁿ Ĥ Ŝ^q` (`n = d`, `m = d⁻¹(1−b)`, `q = (c+1)d⁻¹`).
    pub fn word(&self) -> Vec<SlGen> {
        let (lead_h, m, n, q) = if self.b != 0 {
            let bi = inv3(self.b) as i64;
            (
                false,
                z3((self.d as i64 + 1) * bi),
                self.b,
                z3((self.a as i64 + 1) * bi),
            )
        } else {
            // det = ad = 1 forces d ≠ 0
            let di = inv3(self.d) as i64;
            (
                true,
                z3(di * (1 - self.b as i64)),
                self.d,
                z3((self.c as i64 + 1) * di),
            )
        };
        let mut w = Vec::new();
        if lead_h {
            w.push(SlGen::H);
        }
        w.extend(std::iter::repeat_n(SlGen::S, m as usize));
        w.push(SlGen::H);
        w.extend(std::iter::repeat_n(SlGen::S, n as usize));
        w.push(SlGen::H);
        w.extend(std::iter::repeat_n(SlGen::S, q as usize));
        w
    }

    /// Whether the matrix lies in `⟨Ŝ, −1⟩`, the lower-triangular `(±1 0; n ±1)`.
    pub fn in_s_minus_one(&self) -> bool {
        self.b == 0
    }
}

impl Mul for SL2Z3 {
    type Output = SL2Z3;
    fn mul(self, o: SL2Z3) -> SL2Z3 {
        let (a, b, c, d) = (self.a as i64, self.b as i64, self.c as i64, self.d as i64);
        let (e, f, g, h) = (o.a as i64, o.b as i64, o.c as i64, o.d as i64);
        SL2Z3 {
            a: z3(a * e + b * g),
            b: z3(a * f + b * h),
            c: z3(c * e + d * g),
            d: z3(c * f + d * h),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlGen {
    S,
    H,
}

impl SlGen {
    pub fn matrix(self) -> SL2Z3 {
        match self {
            SlGen::S => SL2Z3::S,
            SlGen::H => SL2Z3::H,
        }
    }
}

pub fn word_product(w: &[SlGen]) -> SL2Z3 {
    w.iter().fold(SL2Z3::IDENTITY, |acc, g| acc * g.matrix())
}

/// Appleby label `D_(x,z) V_F` of a projective Clifford element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CliffordElem {
    pub x: u8,
    pub z: u8,
    pub f: SL2Z3,
}

impl CliffordElem {
    pub const IDENTITY: CliffordElem = CliffordElem {
        x: 0,
        z: 0,
        f: SL2Z3::IDENTITY,
    };

    pub fn new(x: i64, z: i64, f: SL2Z3) -> CliffordElem {
        CliffordElem {
            x: z3(x),
            z: z3(z),
            f,
        }
    }

    /// `S = D_(0,2⁻¹) V_Ŝ`
    pub fn s() -> CliffordElem {
        CliffordElem::new(0, HALF, SL2Z3::S)
    }

    /// `H = V_Ĥ`
    pub fn h() -> CliffordElem {
        CliffordElem::new(0, 0, SL2Z3::H)
    }

    /// All 216 labels.
    pub fn all() -> Vec<CliffordElem> {
        let mut out = Vec::with_capacity(216);
        for f in SL2Z3::all() {
            for x in 0..3 {
                for z in 0..3 {
                    out.push(CliffordElem::new(x, z, f));
                }
            }
        }
        out
    }

    /// `D_χ₁V_F₁ · D_χ₂V_F₂ ∼ D_{χ₁ + F₁χ₂} V_{F₁F₂}`.
    pub fn compose(&self, other: &CliffordElem) -> CliffordElem {
        let (fx, fz) = self.f.apply((other.x, other.z));
        CliffordElem {
            x: z3(self.x as i64 + fx as i64),
            z: z3(self.z as i64 + fz as i64),
            f: self.f * other.f,
        }
    }

    /// Exact matrix of `D_(x,z) V_F`.
    pub fn matrix(&self) -> PhasedOp {
        let displacement = {
            let phase = omega(HALF * self.x as i64 * self.z as i64);
            let xz = &gate_matrix(Gate::X).pow(self.x as usize) * &gate_matrix(Gate::Z).pow(self.z as usize);
            PhasedOp::new(xz.i_pow, xz.mat.scale(&phase))
        };
        &displacement * &v_matrix(self.f)
    }

    /// The `(h, p)` decomposition of this element.
    pub fn classify_hp(&self) -> (Option<u8>, PElem) {
        let (idx, _) = tables()
            .classify(&self.matrix())
            .expect("every Appleby label is a Clifford element");
        tables().rep_label(idx)
    }
}

fn omega(k: i64) -> RingElem {
    RingElem::xi_pow(3 * k)
}

/// `V_F` for `F ∈ SL(2, Z₃)`; the `1/√3` prefactor of the `b ≠ 0` branch is
/// realised as `i/(1 + 2ω)`.
fn v_matrix(f: SL2Z3) -> PhasedOp {
    let (a, b, c, d) = (f.a as i64, f.b as i64, f.c as i64, f.d as i64);
    if b != 0 {
        let bi = inv3(f.b) as i64;
        let inv_sqrt = RingElem::new(CycInt::from_i64s([-1, 0, 0, -2, 0, 0]), 1);
        let mat = UMat::from_fn(|j, k| {
            let (j, k) = (j as i64, k as i64);
            let e = HALF * bi * (a * k * k - 2 * j * k + d * j * j);
            &omega(e) * &inv_sqrt
        });
        PhasedOp::new(1, mat)
    } else {
        let mat = UMat::from_fn(|row, k| {
            if row as i64 == (a * k as i64).rem_euclid(3) {
                omega(HALF * a * c * (k * k) as i64)
            } else {
                RingElem::zero()
            }
        });
        PhasedOp::from(mat)
    }
}

/// `V₋₁ᵛ Sˢ Xˣ Zᶻ`, an element of the 54-element subgroup `𝒫`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct PElem {
    pub v: u8,
    pub s: u8,
    pub x: u8,
    pub z: u8,
}

impl PElem {
    pub const IDENTITY: PElem = PElem { v: 0, s: 0, x: 0, z: 0 };

    pub fn new(v: u8, s: u8, x: u8, z: u8) -> PElem {
        PElem {
            v: v % 2,
            s: s % 3,
            x: x % 3,
            z: z % 3,
        }
    }

    pub fn index(&self) -> usize {
        self.v as usize * 27 + self.s as usize * 9 + self.x as usize * 3 + self.z as usize
    }

    pub fn from_index(i: usize) -> PElem {
        PElem::new((i / 27) as u8, (i / 9 % 3) as u8, (i / 3 % 3) as u8, (i % 3) as u8)
    }

    pub fn all() -> impl Iterator<Item = PElem> {
        (0..54).map(PElem::from_index)
    }

    pub fn is_identity(&self) -> bool {
        *self == PElem::IDENTITY
    }

    /// Gate tokens in the order `V₋₁ S X Z`.
    pub fn gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        out.extend(std::iter::repeat_n(Gate::V, self.v as usize));
        out.extend(std::iter::repeat_n(Gate::S, self.s as usize));
        out.extend(std::iter::repeat_n(Gate::X, self.x as usize));
        out.extend(std::iter::repeat_n(Gate::Z, self.z as usize));
        out
    }

    pub fn matrix(&self) -> PhasedOp {
        self.gates()
            .into_iter()
            .fold(PhasedOp::identity(), |acc, g| &acc * &gate_matrix(g))
    }
}

impl fmt::Display for PElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |sym: &str, e: u8| match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            e => parts.push(format!("{sym}{e}")),
        };
        push("V", self.v);
        push("S", self.s);
        push("X", self.x);
        push("Z", self.z);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Exact rewrite tables over the 216 representatives `H′_h · p`.
///
/// Representative index `slot·54 + p.index()`, where slot 0 is the identity
/// coset and slot `h+1` is `H′_h`.
pub struct CliffordTables {
    hprime: [PhasedOp; 3],
    t_pows: [PhasedOp; 3],
    reps: Vec<PhasedOp>,
    rep_index: HashMap<ProjKey, usize>,
    t_p_index: HashMap<ProjKey, (u8, PElem)>,
    p_mul: Vec<(PElem, UnitPhase)>,
    p_hprime: Vec<[(u8, PElem, UnitPhase); 3]>,
    p_t: Vec<[(u8, PElem, UnitPhase); 2]>,
    hh: [[(usize, UnitPhase); 3]; 3],
    gate_class: HashMap<Gate, (usize, UnitPhase)>,
}

static TABLES: OnceLock<CliffordTables> = OnceLock::new();

/// The shared tables, built on first call.
pub fn tables() -> &'static CliffordTables {
    TABLES.get_or_init(CliffordTables::build)
}

impl CliffordTables {
    fn build() -> CliffordTables {
        let hprime = [0u8, 1, 2].map(|m| gate_matrix(Gate::HPrime(m)));
        let t = gate_matrix(Gate::T);
        let t_pows = [PhasedOp::identity(), t.clone(), t.pow(2)];
        let p_mats: Vec<PhasedOp> = PElem::all().map(|p| p.matrix()).collect();

        let mut reps = Vec::with_capacity(216);
        for slot in 0..4 {
            for pm in &p_mats {
                reps.push(if slot == 0 {
                    pm.clone()
                } else {
                    &hprime[slot - 1] * pm
                });
            }
        }
        let rep_index: HashMap<ProjKey, usize> =
            reps.iter().enumerate().map(|(i, m)| (canonical_key(m), i)).collect();
        assert_eq!(rep_index.len(), 216, "h·p representatives must be distinct");

        let mut t_p_index = HashMap::with_capacity(162);
        for (a, tp) in t_pows.iter().enumerate() {
            for p in PElem::all() {
                t_p_index.insert(canonical_key(&(tp * &p_mats[p.index()])), (a as u8, p));
            }
        }
        assert_eq!(t_p_index.len(), 162, "T^a·p elements must be distinct");

        let classify_in = |m: &PhasedOp| -> (usize, UnitPhase) {
            let idx = *rep_index.get(&canonical_key(m)).expect("element of the Clifford group");
            let u = projective_eq(m, &reps[idx]).expect("key match implies projective equality");
            (idx, u)
        };
        let as_p = |idx: usize| -> PElem {
            assert!(idx < 54, "expected an element of P");
            PElem::from_index(idx)
        };

        let mut p_mul = Vec::with_capacity(54 * 54);
        for a in &p_mats {
            for b in &p_mats {
                let (idx, u) = classify_in(&(a * b));
                p_mul.push((as_p(idx), u));
            }
        }

        let mut p_hprime = Vec::with_capacity(54);
        for pm in &p_mats {
            p_hprime.push(std::array::from_fn(|h| {
                let (idx, u) = classify_in(&(pm * &hprime[h]));
                assert!((54..216).contains(&idx), "P·H′ must stay in H′·P");
                ((idx / 54 - 1) as u8, PElem::from_index(idx % 54), u)
            }));
        }

        let mut p_t = Vec::with_capacity(54);
        for pm in &p_mats {
            p_t.push(std::array::from_fn(|a| {
                let m = pm * &t_pows[a + 1];
                let (ap, p) = *t_p_index.get(&canonical_key(&m)).expect("P·T ⊆ T·P");
                assert!(ap != 0, "P·T^a keeps one T");
                let rhs = &t_pows[ap as usize] * &p_mats[p.index()];
                (ap, p, projective_eq(&m, &rhs).expect("same key"))
            }));
        }

        let hh = std::array::from_fn(|i| std::array::from_fn(|j| classify_in(&(&hprime[i] * &hprime[j]))));

        let gate_class = Gate::ALL
            .into_iter()
            .filter(|g| g.is_clifford())
            .map(|g| (g, classify_in(&gate_matrix(g))))
            .collect();

        CliffordTables {
            hprime,
            t_pows,
            reps,
            rep_index,
            t_p_index,
            p_mul,
            p_hprime,
            p_t,
            hh,
            gate_class,
        }
    }

    pub fn representative(&self, idx: usize) -> &PhasedOp {
        &self.reps[idx]
    }

    pub fn rep_label(&self, idx: usize) -> (Option<u8>, PElem) {
        let slot = idx / 54;
        let h = (slot > 0).then(|| (slot - 1) as u8);
        (h, PElem::from_index(idx % 54))
    }

    pub fn rep_index(h: Option<u8>, p: PElem) -> usize {
        h.map_or(0, |h| h as usize + 1) * 54 + p.index()
    }

    pub fn hprime_matrix(&self, h: u8) -> &PhasedOp {
        &self.hprime[h as usize]
    }

    pub fn t_pow_matrix(&self, a: u8) -> &PhasedOp {
        &self.t_pows[a as usize % 3]
    }

    /// Exact class of a Clifford operator: `m = u · representative(idx)`.
    pub fn classify(&self, m: &PhasedOp) -> Option<(usize, UnitPhase)> {
        let idx = *self.rep_index.get(&canonical_key(m))?;
        let u = projective_eq(m, &self.reps[idx]).ok()?;
        Some((idx, u))
    }

    /// Looks `m` up among the 162 elements `T^a·p`: `m = u · T^a · p`.
    pub fn classify_t_p(&self, m: &PhasedOp) -> Option<(u8, PElem, UnitPhase)> {
        let (a, p) = *self.t_p_index.get(&canonical_key(m))?;
        let rhs = &self.t_pows[a as usize] * &p.matrix();
        let u = projective_eq(m, &rhs).ok()?;
        Some((a, p, u))
    }

    /// `p·q = u·r`.
    pub fn p_mul(&self, p: PElem, q: PElem) -> (PElem, UnitPhase) {
        self.p_mul[p.index() * 54 + q.index()]
    }

    /// `p·H′_h = u·H′_{h′}·p′`.
    pub fn p_past_hprime(&self, p: PElem, h: u8) -> (u8, PElem, UnitPhase) {
        self.p_hprime[p.index()][h as usize]
    }

    /// `p·Tᵃ = u·T^{a′}·p′` for `a ∈ {1, 2}`.
    pub fn p_past_t(&self, p: PElem, a: u8) -> (u8, PElem, UnitPhase) {
        assert!(a == 1 || a == 2, "T exponent must be 1 or 2");
        self.p_t[p.index()][a as usize - 1]
    }

    /// `H′_i·H′_j = u·representative(idx)`.
    pub fn hprime_product(&self, i: u8, j: u8) -> (usize, UnitPhase) {
        self.hh[i as usize][j as usize]
    }

    /// Class of a Clifford gate token; `None` for `T`.
    pub fn gate_class(&self, g: Gate) -> Option<(usize, UnitPhase)> {
        self.gate_class.get(&g).copied()
    }

    pub fn dump(&self) -> TablesDump {
        let label = |h: Option<u8>, p: PElem| match h {
            Some(h) => format!("H{h}' {p}"),
            None => p.to_string(),
        };
        let mut p_past_hprime = Vec::new();
        let mut p_past_t = Vec::new();
        for p in PElem::all() {
            for h in 0..3 {
                let (h2, p2, u) = self.p_past_hprime(p, h);
                p_past_hprime.push(RuleDump {
                    lhs: format!("{p} . H{h}'"),
                    rhs: format!("H{h2}' . {p2}"),
                    phase: u.to_string(),
                });
            }
            for a in 1..3 {
                let (a2, p2, u) = self.p_past_t(p, a);
                p_past_t.push(RuleDump {
                    lhs: format!("{p} . T{a}"),
                    rhs: format!("T{a2} . {p2}"),
                    phase: u.to_string(),
                });
            }
        }
        let mut hprime_products = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let (idx, u) = self.hprime_product(i, j);
                let (h, p) = self.rep_label(idx);
                hprime_products.push(RuleDump {
                    lhs: format!("H{i}' . H{j}'"),
                    rhs: label(h, p),
                    phase: u.to_string(),
                });
            }
        }
        let mut gates: Vec<_> = self.gate_class.iter().collect();
        gates.sort_by_key(|(g, _)| **g);
        let gate_classes = gates
            .into_iter()
            .map(|(g, &(idx, u))| {
                let (h, p) = self.rep_label(idx);
                RuleDump {
                    lhs: g.to_string(),
                    rhs: label(h, p),
                    phase: u.to_string(),
                }
            })
            .collect();
        TablesDump {
            representatives: (0..216).map(|i| {
                let (h, p) = self.rep_label(i);
                label(h, p)
            }).collect(),
            p_past_hprime,
            p_past_t,
            hprime_products,
            gate_classes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RuleDump {
    pub lhs: String,
    pub rhs: String,
    pub phase: String,
}

/// JSON-serialisable view of the rewrite tables.
#[derive(Debug, Serialize)]
pub struct TablesDump {
    pub representatives: Vec<String>,
    pub p_past_hprime: Vec<RuleDump>,
    pub p_past_t: Vec<RuleDump>,
    pub hprime_products: Vec<RuleDump>,
    pub gate_classes: Vec<RuleDump>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn prod(gs: &[Gate]) -> PhasedOp {
        gs.iter()
            .fold(PhasedOp::identity(), |acc, &g| &acc * &gate_matrix(g))
    }

    #[test]
    fn sl2_basics() {
        assert_eq!(SL2Z3::S.pow(3), SL2Z3::IDENTITY);
        assert_eq!(SL2Z3::H * SL2Z3::H, SL2Z3::IDENTITY.neg());
        assert_eq!(SL2Z3::H.pow(4), SL2Z3::IDENTITY);
        let all = SL2Z3::all();
        assert_eq!(all.len(), 24);
        for f in &all {
            assert_eq!(*f * f.inverse(), SL2Z3::IDENTITY);
            assert_eq!(f.det(), 1);
            for g in &all {
                assert_eq!((*f * *g).det(), 1);
            }
        }
    }

    #[test]
    fn sl2_words_round_trip() {
        for f in SL2Z3::all() {
            assert_eq!(word_product(&f.word()), f, "{f:?}");
        }
        assert_eq!(word_product(&SL2Z3::S.word()), SL2Z3::S);
        assert_eq!(word_product(&SL2Z3::H.word()), SL2Z3::H);
        assert_eq!(word_product(&SL2Z3::IDENTITY.word()), SL2Z3::IDENTITY);
    }

    #[test]
    fn appleby_generators() {
        assert_eq!(CliffordElem::IDENTITY.matrix(), PhasedOp::identity());
        assert!(projective_eq(&CliffordElem::h().matrix(), &gate_matrix(Gate::H)).is_ok());
        assert!(projective_eq(&CliffordElem::s().matrix(), &gate_matrix(Gate::S)).is_ok());
        // V_Ĥ to the fourth is the identity label and matrix
        let h = CliffordElem::h();
        let h4 = h.compose(&h).compose(&h).compose(&h);
        assert_eq!(h4, CliffordElem::IDENTITY);
        assert!(projective_eq(&h.matrix().pow(4), &PhasedOp::identity()).is_ok());
    }

    #[test]
    fn appleby_matrices_are_distinct_unitaries() {
        let keys: HashSet<_> = CliffordElem::all()
            .iter()
            .map(|e| {
                let m = e.matrix();
                assert!(m.is_unitary());
                canonical_key(&m)
            })
            .collect();
        assert_eq!(keys.len(), 216);
    }

    #[test]
    fn composition_agrees_with_matrices() {
        let all = CliffordElem::all();
        let mats: Vec<_> = all.iter().map(CliffordElem::matrix).collect();
        // a stride through all pairs keeps this quick in debug builds
        for (i, e1) in all.iter().enumerate() {
            for (j, e2) in all.iter().enumerate().skip(i % 7).step_by(7) {
                let lhs = e1.compose(e2).matrix();
                let rhs = &mats[i] * &mats[j];
                assert!(projective_eq(&lhs, &rhs).is_ok(), "{e1:?} {e2:?}");
            }
        }
        let (a, b, c) = (all[5], all[77], all[190]);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        assert_eq!(a.compose(&CliffordElem::IDENTITY), a);
    }

    #[test]
    fn group_orders() {
        let t = tables();
        assert_eq!(t.reps.len(), 216);
        assert_eq!(PElem::all().count(), 54);
        let p_keys: HashSet<_> = PElem::all().map(|p| canonical_key(&p.matrix())).collect();
        assert_eq!(p_keys.len(), 54);
        // four left cosets of P
        let slots: HashSet<_> = (0..216).map(|i| t.rep_label(i).0).collect();
        assert_eq!(slots.len(), 4);
    }

    #[test]
    fn classification_is_a_bijection() {
        let mut seen = HashSet::new();
        for e in CliffordElem::all() {
            let (h, p) = e.classify_hp();
            assert!(seen.insert((h, p)));
            assert_eq!(h.is_none(), e.f.in_s_minus_one(), "{e:?}");
        }
        assert_eq!(seen.len(), 216);
        assert_eq!(CliffordElem::s().classify_hp(), (None, PElem::new(0, 1, 0, 0)));
        let hsh = CliffordElem::h().compose(&CliffordElem::s()).compose(&CliffordElem::h());
        assert_eq!(hsh.classify_hp(), (Some(0), PElem::IDENTITY));
    }

    #[test]
    fn p_past_hprime_table() {
        let t = tables();
        for p in PElem::all() {
            for h in 0..3 {
                let (h2, p2, u) = t.p_past_hprime(p, h);
                let lhs = &p.matrix() * t.hprime_matrix(h);
                let rhs = (t.hprime_matrix(h2) * &p2.matrix()).mul_phase(u);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(t.p_past_hprime(PElem::IDENTITY, 2), (2, PElem::IDENTITY, UnitPhase::ONE));
        assert_eq!(
            t.p_past_hprime(PElem::new(0, 1, 0, 0), 0),
            (1, PElem::IDENTITY, UnitPhase::ONE)
        );
    }

    #[test]
    fn p_past_t_table() {
        let t = tables();
        for p in PElem::all() {
            for a in 1..3 {
                let (a2, p2, u) = t.p_past_t(p, a);
                let lhs = &p.matrix() * t.t_pow_matrix(a);
                let rhs = (t.t_pow_matrix(a2) * &p2.matrix()).mul_phase(u);
                assert_eq!(lhs, rhs);
            }
        }
        let s = PElem::new(0, 1, 0, 0);
        assert_eq!(t.p_past_t(s, 1), (1, s, UnitPhase::ONE));
        // XT = ξ·T·XZS²; XZS² is a P element, canonically V⁰S²X¹Z¹ up to phase
        let (a, p, u) = t.p_past_t(PElem::new(0, 0, 1, 0), 1);
        assert_eq!(a, 1);
        let xzs2 = prod(&[Gate::X, Gate::Z, Gate::S, Gate::S]);
        let ours = (t.t_pow_matrix(1) * &p.matrix()).mul_phase(u);
        assert_eq!(
            projective_eq(&prod(&[Gate::X, Gate::T]), &(t.t_pow_matrix(1) * &xzs2)),
            Ok(UnitPhase::xi_pow(1))
        );
        assert_eq!(ours, prod(&[Gate::X, Gate::T]));
        // V₋₁ turns T into T² times a P element
        assert_eq!(t.p_past_t(PElem::new(1, 0, 0, 0), 1).0, 2);
    }

    #[test]
    fn gate_classes_reproduce_gates() {
        let t = tables();
        for g in Gate::ALL.into_iter().filter(|g| g.is_clifford()) {
            let (idx, u) = t.gate_class(g).unwrap();
            assert_eq!(t.representative(idx).mul_phase(u), gate_matrix(g));
        }
        assert!(t.gate_class(Gate::T).is_none());
    }

    #[test]
    fn dump_has_every_rule() {
        let d = tables().dump();
        assert_eq!(d.representatives.len(), 216);
        assert_eq!(d.p_past_hprime.len(), 162);
        assert_eq!(d.p_past_t.len(), 108);
        assert_eq!(d.hprime_products.len(), 9);
        assert!(serde_json::to_string(&d).is_ok());
    }
}
