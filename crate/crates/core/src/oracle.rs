//! Brute-force enumeration of the projective Clifford+T group by T-count.
//!
//! Layer 0 is the closure of `{H, S}`. Layer `t+1` is every `g·M` with `M` in
//! layer `t` and `g ∈ {T, T², H′ᵢT, H′ᵢT²}`, minus keys already seen. That
//! generator set suffices because the Clifford group factors as `𝒣𝒫` and
//! `𝒫𝒯 = 𝒯𝒫`; [`check_generator_relations`] verifies both by enumeration.
//! Nothing here goes through the normaliser or the rewrite tables.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::exactmat::{canonical_key, gate_matrix, Gate, PhasedOp, ProjKey};
use crate::normalform::{normalize, GateString, NormalForm};
use crate::synth::{exact_synthesize, parity_prefilter, SynthResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub key: ProjKey,
    pub min_t_count: usize,
    pub witness: GateString,
    pub h_count: usize,
    pub denom_exp: u32,
}

#[derive(Debug, Clone, Default)]
pub struct GroupAtlas {
    pub entries: Vec<AtlasEntry>,
    pub layer_sizes: Vec<usize>,
    /// False when the entry budget stopped enumeration early.
    pub complete: bool,
    index: HashMap<ProjKey, usize>,
}

impl GroupAtlas {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &ProjKey) -> Option<&AtlasEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    /// Looks up the class of an operator.
    pub fn lookup(&self, m: &PhasedOp) -> Option<&AtlasEntry> {
        self.get(&canonical_key(m))
    }

    pub fn layer(&self, t: usize) -> impl Iterator<Item = &AtlasEntry> {
        self.entries.iter().filter(move |e| e.min_t_count == t)
    }

    fn insert(&mut self, key: ProjKey, t: usize, witness: GateString, m: &PhasedOp) -> bool {
        if self.index.contains_key(&key) {
            return false;
        }
        let h_count = normalize(&witness).h_count();
        self.index.insert(key.clone(), self.entries.len());
        self.entries.push(AtlasEntry {
            key,
            min_t_count: t,
            witness,
            h_count,
            denom_exp: m.mat.denom_exp(),
        });
        true
    }

    /// One JSON object per line: key (hex), min_t_count, witness, h_count, denom_exp.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            key: String,
            min_t_count: usize,
            witness: &'a str,
            h_count: usize,
            denom_exp: u32,
        }
        for e in &self.entries {
            let key: String = e.key.as_bytes().iter().map(|b| format!("{b:02x}")).collect();
            let witness = e.witness.to_string();
            let line = Line {
                key,
                min_t_count: e.min_t_count,
                witness: &witness,
                h_count: e.h_count,
                denom_exp: e.denom_exp,
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Closure of a generator set under left multiplication, with witnesses.
pub fn closure(gens: &[Gate]) -> Vec<(GateString, PhasedOp)> {
    let mats: Vec<PhasedOp> = gens.iter().map(|&g| gate_matrix(g)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_key(&PhasedOp::identity()));
    queue.push_back((Vec::new(), PhasedOp::identity()));
    while let Some((w, m)) = queue.pop_front() {
        for (g, gm) in gens.iter().zip(&mats) {
            let next = gm * &m;
            if seen.insert(canonical_key(&next)) {
                let mut nw = vec![*g];
                nw.extend(&w);
                queue.push_back((nw, next));
            }
        }
        out.push((GateString(w), m));
    }
    out
}

/// Left factors that raise the T-count by one.
fn layer_generators() -> Vec<(Vec<Gate>, PhasedOp)> {
    let mut out = Vec::new();
    for h in [None, Some(0), Some(1), Some(2)] {
        for a in 1..3 {
            let mut w: Vec<Gate> = h.map(Gate::HPrime).into_iter().collect();
            w.extend(std::iter::repeat_n(Gate::T, a));
            let m = GateString(w.clone()).matrix();
            out.push((w, m));
        }
    }
    out
}

pub fn bfs_enumerate(max_t: usize) -> GroupAtlas {
    bfs_enumerate_with(max_t, usize::MAX, |_, _| {})
}

/// Enumerates layers `0..=max_t`, stopping once `budget` entries exist.
/// `visit` sees every new entry with its exact matrix.
pub fn bfs_enumerate_with(
    max_t: usize,
    budget: usize,
    mut visit: impl FnMut(&AtlasEntry, &PhasedOp),
) -> GroupAtlas {
    let mut atlas = GroupAtlas {
        complete: true,
        ..GroupAtlas::default()
    };
    let mut frontier = Vec::new();
    let mut mats = Vec::new();
    for (w, m) in closure(&[Gate::H, Gate::S]) {
        if atlas.len() >= budget {
            atlas.complete = false;
            break;
        }
        if atlas.insert(canonical_key(&m), 0, w, &m) {
            visit(atlas.entries.last().expect("inserted"), &m);
            frontier.push(atlas.len() - 1);
            mats.push(m);
        }
    }
    atlas.layer_sizes.push(frontier.len());

    let gens = layer_generators();
    for t in 1..=max_t {
        if !atlas.complete {
            break;
        }
        let mut next = Vec::new();
        let mut next_mats = Vec::new();
        let is_last = t == max_t;
        for (chunk_idx, chunk) in frontier.chunks(512).enumerate() {
            let base = chunk_idx * 512;
            let products: Vec<Vec<(ProjKey, PhasedOp)>> = chunk
                .par_iter()
                .enumerate()
                .map(|(off, _)| {
                    let m = &mats[base + off];
                    gens.iter()
                        .map(|(_, g)| {
                            let p = g * m;
                            (canonical_key(&p), p)
                        })
                        .collect()
                })
                .collect();
            for (off, prods) in products.into_iter().enumerate() {
                let src = chunk[off];
                for ((key, p), (gw, _)) in prods.into_iter().zip(&gens) {
                    if atlas.index.contains_key(&key) {
                        continue;
                    }
                    if atlas.len() >= budget {
                        atlas.complete = false;
                        break;
                    }
                    let mut w = gw.clone();
                    w.extend(atlas.entries[src].witness.tokens());
                    atlas.insert(key, t, GateString(w), &p);
                    visit(atlas.entries.last().expect("inserted"), &p);
                    next.push(atlas.len() - 1);
                    if !is_last {
                        next_mats.push(p);
                    }
                }
            }
        }
        atlas.layer_sizes.push(next.len());
        frontier = next;
        mats = next_mats;
    }
    atlas
}

/// Checks `𝒞 = 𝒣𝒫` (with `𝒣 = {1, H′₀, H′₁, H′₂}`) and `𝒫𝒯 = 𝒯𝒫` by enumeration.
pub fn check_generator_relations() -> Vec<String> {
    let mut problems = Vec::new();
    let cliffords: HashSet<ProjKey> = closure(&[Gate::H, Gate::S])
        .iter()
        .map(|(_, m)| canonical_key(m))
        .collect();
    let p_group = closure(&[Gate::S, Gate::X, Gate::V]);
    if p_group.len() != 54 {
        problems.push(format!("P has {} elements", p_group.len()));
    }
    let mut hp = HashSet::new();
    for h in [None, Some(0u8), Some(1), Some(2)] {
        let hm = h.map_or_else(PhasedOp::identity, |h| gate_matrix(Gate::HPrime(h)));
        for (_, p) in &p_group {
            hp.insert(canonical_key(&(&hm * p)));
        }
    }
    if hp != cliffords {
        problems.push(format!("H·P has {} elements, Clifford group {}", hp.len(), cliffords.len()));
    }
    let t = gate_matrix(Gate::T);
    let t_pows = [t.clone(), t.pow(2)];
    let tp: HashSet<ProjKey> = t_pows
        .iter()
        .flat_map(|tm| p_group.iter().map(move |(_, p)| canonical_key(&(tm * p))))
        .collect();
    let pt: HashSet<ProjKey> = t_pows
        .iter()
        .flat_map(|tm| p_group.iter().map(move |(_, p)| canonical_key(&(p * tm))))
        .collect();
    if tp != pt {
        problems.push("P·T differs from T·P".to_string());
    }
    problems
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct UniquenessReport {
    pub checked: usize,
    /// `normalize(witness)` and `exact_synthesize(matrix)` disagree.
    pub mismatches: Vec<String>,
    /// Two keys share a normal form.
    pub collisions: Vec<String>,
    /// Normal form T-count differs from the enumerated minimum.
    pub t_count_violations: Vec<String>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.collisions.is_empty() && self.t_count_violations.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExponentReport {
    pub checked: usize,
    /// `k ≠ h + 2` for `h ≥ 1`, or `k ≠ 0` for `h = 0`.
    pub exponent_violations: Vec<String>,
    pub parity_violations: Vec<String>,
}

impl ExponentReport {
    pub fn passed(&self) -> bool {
        self.exponent_violations.is_empty() && self.parity_violations.is_empty()
    }
}

/// Per-entry checks shared by the two reports, run on one matrix.
#[derive(Debug, Default)]
pub struct AtlasChecker {
    pub uniqueness: UniquenessReport,
    pub exponents: ExponentReport,
    forms: HashMap<NormalForm, ProjKey>,
}

impl AtlasChecker {
    pub fn new() -> AtlasChecker {
        AtlasChecker::default()
    }

    pub fn check(&mut self, e: &AtlasEntry, m: &PhasedOp) {
        let nf = normalize(&e.witness);
        self.uniqueness.checked += 1;
        self.exponents.checked += 1;

        match exact_synthesize(&m.mat) {
            Ok(SynthResult::Member { nf: synth_nf, .. }) => {
                // the witness may carry an odd power of i that the bare matrix drops
                let i_factor = if m.i_pow == 1 {
                    crate::UnitPhase::I
                } else {
                    crate::UnitPhase::ONE
                };
                if !synth_nf.same_form(&nf) || synth_nf.phase * i_factor != nf.phase {
                    self.uniqueness
                        .mismatches
                        .push(format!("{}: normalize {nf}, synthesize {synth_nf}", e.witness));
                }
            }
            other => self
                .uniqueness
                .mismatches
                .push(format!("{}: synthesis gave {other:?}", e.witness)),
        }
        if let Some(prev) = self.forms.insert(nf.without_phase(), e.key.clone()) {
            if prev != e.key {
                self.uniqueness
                    .collisions
                    .push(format!("{}: form {nf} already taken", e.witness));
            }
        }
        if nf.t_count() != e.min_t_count {
            self.uniqueness.t_count_violations.push(format!(
                "{}: normal form T-count {} but minimum {}",
                e.witness,
                nf.t_count(),
                e.min_t_count
            ));
        }

        let h = e.h_count as u32;
        let expected = if h == 0 { 0 } else { h + 2 };
        if e.denom_exp != expected {
            self.exponents.exponent_violations.push(format!(
                "{}: h={h} k={}",
                e.witness, e.denom_exp
            ));
        }
        if !parity_prefilter(&m.mat) {
            self.exponents
                .parity_violations
                .push(format!("{}: leading parity rejected", e.witness));
        }
    }
}

fn run_checks(atlas: &GroupAtlas) -> AtlasChecker {
    let mut c = AtlasChecker::new();
    for e in &atlas.entries {
        c.check(e, &e.witness.matrix());
    }
    c
}

/// Normal forms agree between the normaliser and the synthesiser, are
/// distinct across keys, and have the enumerated minimal T-count.
pub fn check_uniqueness(atlas: &GroupAtlas) -> UniquenessReport {
    run_checks(atlas).uniqueness
}

/// Denominator exponent against `H′`-count, and the leading parity matrix.
pub fn check_exponents(atlas: &GroupAtlas) -> ExponentReport {
    run_checks(atlas).exponents
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::tables;

    #[test]
    fn clifford_layer() {
        let atlas = bfs_enumerate(0);
        assert_eq!(atlas.len(), 216);
        assert_eq!(atlas.layer_sizes, vec![216]);
        assert!(atlas.complete);
        for e in &atlas.entries {
            assert_eq!(e.min_t_count, 0);
            assert!(e.witness.tokens().iter().all(|g| matches!(g, Gate::H | Gate::S)));
            let expected = if e.h_count == 0 { 0 } else { 3 };
            assert_eq!(e.denom_exp, expected, "{}", e.witness);
        }
        // agrees with the rewrite tables' representatives
        for i in 0..216 {
            assert!(atlas.lookup(tables().representative(i)).is_some());
        }
    }

    #[test]
    fn relations_hold() {
        assert!(check_generator_relations().is_empty());
    }

    #[test]
    fn small_atlas() {
        let atlas = bfs_enumerate(2);
        assert_eq!(atlas.layer_sizes, vec![216, 1728, 10368]);
        // one T syllable leaves room for at most two H′ syllables
        let layer1: HashSet<(usize, u32)> = atlas.layer(1).map(|e| (e.h_count, e.denom_exp)).collect();
        assert_eq!(layer1, HashSet::from([(0, 0), (1, 3), (2, 4)]));
        let layer2: HashSet<(usize, u32)> = atlas.layer(2).map(|e| (e.h_count, e.denom_exp)).collect();
        assert_eq!(layer2, HashSet::from([(1, 3), (2, 4), (3, 5)]));
        let u = check_uniqueness(&atlas);
        assert!(u.passed(), "{u:?}");
        let t = check_exponents(&atlas);
        assert!(t.passed(), "{t:?}");
        let id = atlas.lookup(&PhasedOp::identity()).unwrap();
        assert_eq!(normalize(&id.witness).without_phase(), NormalForm::identity());
    }

    #[test]
    fn budget_marks_incomplete() {
        let atlas = bfs_enumerate_with(3, 500, |_, _| {});
        assert!(!atlas.complete);
        assert_eq!(atlas.len(), 500);
    }

    #[test]
    fn jsonl_export() {
        let atlas = bfs_enumerate(0);
        let mut buf = Vec::new();
        atlas.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 216);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["min_t_count"], 0);
        assert_eq!(first["witness"], "");
    }
}
