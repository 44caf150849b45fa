//! Exact synthesis of ring unitaries by syllable peeling.
//!
//! A group element with `h ≥ 1` `H′` syllables has denominator exponent
//! `k = h + 2`, and exactly one of the nine left factors `(TⁿH′ᵢ)⁻¹` lowers it
//! by one. Peeling until `k = 0` leaves an element of `(T|T²|ε)𝒫`, which is
//! found in a 162-entry table.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::clifford::tables;
use crate::exactmat::{Gate, ParityMat, PhasedOp, UMat, UnitPhase};
use crate::normalform::{normalize, GateString, NormalForm};

/// Why a ring matrix is not a Clifford+T element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason")]
pub enum NotInGroup {
    NotUnitary,
    /// Denominator exponent 1 or 2, which no group element has.
    BadDenomExp { denom_exp: u32 },
    /// Leading parity matrix is not of the required shape.
    ParityFailed { denom_exp: u32 },
    /// No left factor lowers the denominator exponent at peel `step`.
    PeelFailed { step: usize, denom_exp: u32 },
    /// The `k = 0` remainder is not in `(T|T²|ε)𝒫`.
    LookupFailed,
}

impl fmt::Display for NotInGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotInGroup::NotUnitary => f.write_str("NotUnitary"),
            NotInGroup::BadDenomExp { denom_exp } => write!(f, "BadDenomExp (k={denom_exp})"),
            NotInGroup::ParityFailed { denom_exp } => write!(f, "ParityFailed (k={denom_exp})"),
            NotInGroup::PeelFailed { step, denom_exp } => {
                write!(f, "PeelFailed at step {step} (k={denom_exp})")
            }
            NotInGroup::LookupFailed => f.write_str("LookupFailed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthResult {
    /// `nf.matrix()·unit` is the input; `nf.phase == unit`.
    Member { nf: NormalForm, unit: UnitPhase },
    NotInGroup(NotInGroup),
}

impl SynthResult {
    pub fn is_member(&self) -> bool {
        matches!(self, SynthResult::Member { .. })
    }

    pub fn normal_form(&self) -> Option<&NormalForm> {
        match self {
            SynthResult::Member { nf, .. } => Some(nf),
            SynthResult::NotInGroup(_) => None,
        }
    }
}

/// Internal inconsistencies. These indicate a bug, never a property of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("{count} peel candidates reduce the denominator exponent at step {step}")]
    AmbiguousPeel { step: usize, count: usize },
    #[error("reconstructed normal form differs from the input")]
    ReconstructionMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no group element has denominator exponent {0}")]
pub struct InvalidDenomExp(pub u32);

/// `H′`-count implied by a denominator exponent.
pub fn hcount_from_k(k: u32) -> Result<u32, InvalidDenomExp> {
    match k {
        0 => Ok(0),
        1 | 2 => Err(InvalidDenomExp(k)),
        k => Ok(k - 2),
    }
}

/// Checks the leading parity matrix: a scaled permutation when `k = 0`, all
/// ones when `k ≥ 3`. Both up to global scaling by 2, which absorbs a `−1`
/// phase.
pub fn parity_prefilter(m: &UMat) -> bool {
    let k = m.denom_exp();
    let Some(p) = m.parity_matrix(k) else {
        return false;
    };
    let scalings = [p, p.scale(crate::Parity::TWO)];
    match k {
        0 => scalings
            .iter()
            .any(|q| q.eq_up_to_column_perm(&ParityMat::identity())),
        1 | 2 => false,
        _ => scalings.iter().any(|q| *q == ParityMat::all_ones()),
    }
}

/// One left factor `(TⁿH′ᵢ)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub t: u8,
    pub h: u8,
}

impl Syllable {
    pub fn all() -> impl Iterator<Item = Syllable> {
        (0..3u8).flat_map(|t| (0..3u8).map(move |h| Syllable { t, h }))
    }

    pub fn gates(&self) -> Vec<Gate> {
        let mut g = vec![Gate::T; self.t as usize];
        g.push(Gate::HPrime(self.h));
        g
    }

    /// Exact `TⁿH′ᵢ`.
    pub fn matrix(&self) -> PhasedOp {
        let tb = tables();
        tb.t_pow_matrix(self.t) * tb.hprime_matrix(self.h)
    }

    fn index(&self) -> usize {
        self.t as usize * 3 + self.h as usize
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            0 => write!(f, "H{}'", self.h),
            1 => write!(f, "T H{}'", self.h),
            _ => write!(f, "T2 H{}'", self.h),
        }
    }
}

fn inverse_syllables() -> &'static [UMat; 9] {
    static INV: OnceLock<[UMat; 9]> = OnceLock::new();
    INV.get_or_init(|| {
        std::array::from_fn(|idx| {
            let s = Syllable {
                t: (idx / 3) as u8,
                h: (idx % 3) as u8,
            };
            let m = s.matrix();
            debug_assert_eq!(m.i_pow, 0);
            m.mat.dagger()
        })
    })
}

/// `(TⁿH′ᵢ)⁻¹·m` if every entry has exponent below `k`.
fn try_reduce(s: Syllable, m: &UMat, k: u32) -> Option<UMat> {
    let inv = &inverse_syllables()[s.index()];
    let mut entries: [[Option<crate::RingElem>; 3]; 3] = Default::default();
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let e = inv.product_entry(m, r, c);
            if e.denom_exp_chi() >= k {
                return None;
            }
            *slot = Some(e);
        }
    }
    Some(UMat::from_fn(|r, c| entries[r][c].take().expect("filled")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peel {
    pub syllable: Syllable,
    pub rest: UMat,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeelError {
    #[error("no candidate lowers the denominator exponent")]
    PeelFailed,
    #[error("{0} candidates lower the denominator exponent")]
    Ambiguous(usize),
}

/// Finds the unique leftmost syllable of `m`: `m = TⁿH′ᵢ · rest` with
/// `d(rest) < d(m)`. All nine candidates are tried.
pub fn peel(m: &UMat) -> Result<Peel, PeelError> {
    let k = m.denom_exp();
    let mut hits: Vec<Peel> = Syllable::all()
        .filter_map(|s| try_reduce(s, m, k).map(|rest| Peel { syllable: s, rest }))
        .collect();
    match hits.len() {
        0 => Err(PeelError::PeelFailed),
        1 => Ok(hits.pop().expect("one hit")),
        n => Err(PeelError::Ambiguous(n)),
    }
}

/// Synthesises `m` or explains why it is not a group element.
pub fn exact_synthesize(m: &UMat) -> Result<SynthResult, SynthError> {
    use SynthResult::NotInGroup as Reject;
    if !m.is_unitary() {
        return Ok(Reject(NotInGroup::NotUnitary));
    }
    let mut k = m.denom_exp();
    if hcount_from_k(k).is_err() {
        return Ok(Reject(NotInGroup::BadDenomExp { denom_exp: k }));
    }
    if !parity_prefilter(m) {
        return Ok(Reject(NotInGroup::ParityFailed { denom_exp: k }));
    }

    let mut word = Vec::new();
    let mut cur = m.clone();
    let mut step = 0;
    while k >= 3 {
        match peel(&cur) {
            Ok(p) => {
                word.extend(p.syllable.gates());
                cur = p.rest;
            }
            Err(PeelError::PeelFailed) => {
                return Ok(Reject(NotInGroup::PeelFailed { step, denom_exp: k }));
            }
            Err(PeelError::Ambiguous(count)) => return Err(SynthError::AmbiguousPeel { step, count }),
        }
        k = cur.denom_exp();
        step += 1;
    }
    if k != 0 {
        return Ok(Reject(NotInGroup::BadDenomExp { denom_exp: k }));
    }

    let Some((a, p, u)) = tables().classify_t_p(&PhasedOp::from(cur)) else {
        return Ok(Reject(NotInGroup::LookupFailed));
    };
    word.extend(std::iter::repeat_n(Gate::T, a as usize));
    word.extend(p.gates());
    let mut nf = normalize(&GateString(word));
    nf.phase = nf.phase * u;
    if nf.operator() != PhasedOp::from(m.clone()) {
        return Err(SynthError::ReconstructionMismatch);
    }
    let unit = nf.phase;
    Ok(SynthResult::Member { nf, unit })
}

/// Denominator exponent after one candidate left factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CandidateTrial {
    pub syllable: Syllable,
    pub denom_exp: u32,
}

/// Everything the synthesiser looks at, computed without early exits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub unitary: bool,
    pub denom_exp: u32,
    pub prefilter: bool,
    pub leading_parity: String,
    pub candidates: Vec<CandidateTrial>,
}

impl Diagnosis {
    /// Whether no candidate lowers the exponent.
    pub fn no_candidate_reduces(&self) -> bool {
        self.candidates.iter().all(|c| c.denom_exp >= self.denom_exp)
    }
}

pub fn diagnose(m: &UMat) -> Diagnosis {
    let k = m.denom_exp();
    let candidates = Syllable::all()
        .map(|s| CandidateTrial {
            syllable: s,
            denom_exp: (&inverse_syllables()[s.index()] * m).denom_exp(),
        })
        .collect();
    Diagnosis {
        unitary: m.is_unitary(),
        denom_exp: k,
        prefilter: parity_prefilter(m),
        leading_parity: m
            .parity_matrix(k)
            .map(|p| p.to_string())
            .unwrap_or_default(),
        candidates,
    }
}

/// The residue conditions an element `(H′T)*(H′T)` satisfies: the first four
/// residues are all ones; constant columns `0, 1, 2` in some order; columns
/// shifted by `+m`, `−m` down the rows; equal column sums.
pub fn satisfies_p1_p4(m: &UMat) -> bool {
    if m.denom_exp() < 3 {
        return false;
    }
    let res = m.residues(4, crate::Lift::Standard);
    let [r0, r1, r2, r3] = [&res.mats[0], &res.mats[1], &res.mats[2], &res.mats[3]];
    if *r0 != ParityMat::all_ones() {
        return false;
    }
    if !r1.eq_up_to_column_perm(&ParityMat::from_u8([[0, 1, 2]; 3])) {
        return false;
    }
    let shift = r2.0[1][0] - r2.0[0][0];
    let shifted = (0..3).all(|c| {
        r2.0[1][c] - r2.0[0][c] == shift && r2.0[2][c] - r2.0[0][c] == -shift
    });
    if !shifted {
        return false;
    }
    let sums: Vec<_> = (0..3)
        .map(|c| r3.0[0][c] + r3.0[1][c] + r3.0[2][c])
        .collect();
    sums.iter().all(|&s| s == sums[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::PElem;
    use crate::exactmat::{gate_matrix, projective_eq};
    use proptest::prelude::*;

    fn fixture(name: &str) -> UMat {
        let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(path).unwrap();
        PhasedOp::from_json(&text).unwrap().mat
    }

    fn gs(s: &str) -> GateString {
        GateString::parse(s).unwrap()
    }

    #[test]
    fn hcount() {
        assert_eq!(hcount_from_k(0), Ok(0));
        assert_eq!(hcount_from_k(5), Ok(3));
        assert_eq!(hcount_from_k(2), Err(InvalidDenomExp(2)));
        assert_eq!(hcount_from_k(1), Err(InvalidDenomExp(1)));
    }

    #[test]
    fn member_example() {
        let m = fixture("synth_member.json");
        assert_eq!(m.denom_exp(), 5);
        assert!(parity_prefilter(&m));
        let first = peel(&m).unwrap();
        assert_eq!(first.syllable, Syllable { t: 0, h: 2 });
        assert_eq!(first.rest, fixture("synth_member_peeled.json"));
        assert_eq!(first.rest.denom_exp(), 4);
        let second = peel(&first.rest).unwrap();
        assert_eq!(second.syllable, Syllable { t: 1, h: 1 });

        let res = exact_synthesize(&m).unwrap();
        let SynthResult::Member { nf, unit } = res else {
            panic!("expected a member: {res:?}");
        };
        assert_eq!(nf.to_string(), "H2' T H1' T H2' T2");
        assert_eq!(nf.expanded(), "S2HSH T SHSH T S2HSH T2");
        assert_eq!(nf.t_count(), 3);
        assert_eq!(unit, UnitPhase::ONE);
        assert_eq!(nf.matrix().mat, m);
    }

    #[test]
    fn perturbed_example() {
        let m = fixture("synth_perturbed.json");
        assert_eq!(
            exact_synthesize(&m),
            Ok(SynthResult::NotInGroup(NotInGroup::NotUnitary))
        );
        let d = diagnose(&m);
        assert!(!d.unitary);
        assert_eq!(d.denom_exp, 6);
        assert!(!d.prefilter);
        assert!(d.no_candidate_reduces());
        assert_eq!(d.candidates.len(), 9);
        assert_eq!(peel(&m), Err(PeelError::PeelFailed));
    }

    #[test]
    fn small_members() {
        let id = exact_synthesize(&UMat::identity()).unwrap();
        assert_eq!(id.normal_form(), Some(&NormalForm::identity()));
        let t = exact_synthesize(&gate_matrix(Gate::T).mat).unwrap();
        let nf = t.normal_form().unwrap();
        assert_eq!((nf.lead_t, nf.body.len(), nf.tail_h), (1, 0, None));
        assert!(parity_prefilter(&UMat::identity()));
    }

    #[test]
    fn rejections() {
        let two = crate::RingElem::from_int(2);
        let z = crate::RingElem::zero();
        let not_unitary = UMat::diag([two, z.clone(), z]);
        assert_eq!(
            exact_synthesize(&not_unitary),
            Ok(SynthResult::NotInGroup(NotInGroup::NotUnitary))
        );
        let one = crate::RingElem::one;
        let neg = UMat::diag([crate::RingElem::from_int(-1), one(), one()]);
        assert_eq!(
            exact_synthesize(&neg),
            Ok(SynthResult::NotInGroup(NotInGroup::ParityFailed { denom_exp: 0 }))
        );
        // unitary with k = 0 and identity parity, but not in T^a·P
        let xi = UMat::diag([crate::RingElem::xi_pow(1), one(), one()]);
        assert_eq!(
            exact_synthesize(&xi),
            Ok(SynthResult::NotInGroup(NotInGroup::LookupFailed))
        );
        let k2 = UMat::diag([crate::RingElem::new(crate::CycInt::from_i64s([-1, 0, 0, -2, 0, 0]), 1), one(), one()]);
        assert!(matches!(
            exact_synthesize(&k2),
            Ok(SynthResult::NotInGroup(NotInGroup::NotUnitary))
        ));
    }

    #[test]
    fn p1_p4_examples() {
        for s in Syllable::all().filter(|s| s.t == 0) {
            for n in 1..3u8 {
                let m = tables().hprime_matrix(s.h) * tables().t_pow_matrix(n);
                assert!(satisfies_p1_p4(&m.mat), "H{}' T^{n}", s.h);
            }
        }
        let m = gs("H1'T2H0'TH2'T").matrix();
        assert!(satisfies_p1_p4(&m.mat));
        assert!(!satisfies_p1_p4(&UMat::identity()));
    }

    fn arb_form() -> impl Strategy<Value = GateString> {
        (
            0u8..3,
            prop::collection::vec((0u8..3, 1u8..3), 0..6),
            prop::option::of(0u8..3),
            0usize..54,
        )
            .prop_map(|(lead, body, tail, p)| {
                let mut g = vec![Gate::T; lead as usize];
                for (h, t) in body {
                    g.push(Gate::HPrime(h));
                    g.extend(std::iter::repeat_n(Gate::T, t as usize));
                }
                if let Some(h) = tail {
                    g.push(Gate::HPrime(h));
                }
                g.extend(PElem::from_index(p).gates());
                GateString(g)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn synthesis_round_trip(g in arb_form(), phase in 0usize..18) {
            let u = UnitPhase::all().nth(phase).unwrap();
            let m = g.matrix().mat.mul_ring_phase(u);
            let res = exact_synthesize(&m).unwrap();
            let SynthResult::Member { nf, unit } = res else {
                return Err(TestCaseError::fail(format!("{g} rejected: {res:?}")));
            };
            prop_assert_eq!(nf.matrix().mul_phase(unit).mat, m.clone());
            prop_assert!(nf.same_form(&normalize(&g)));
            prop_assert_eq!(projective_eq(&nf.matrix(), &g.matrix()).is_ok(), true);
            let k = m.denom_exp();
            prop_assert_eq!(hcount_from_k(k), Ok(nf.h_count() as u32));
        }
    }
}
