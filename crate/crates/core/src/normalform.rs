//! Gate strings and the normal form `(T|T²|ε)(H′(T|T²))*(ε|H′)𝒫`.
//!
//! A [`GateString`] is read as a matrix product: the leftmost token is applied
//! last. [`normalize`] consumes the tokens left to right, right-multiplying a
//! running [`NormalForm`]; every rewrite is an exact table lookup, so the
//! result carries the exact unit phase relating it to the input.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::clifford::{tables, PElem};
use crate::exactmat::{gate_matrix, Gate, PhasedOp, UnitPhase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("exponent {exp} not allowed on {token} at position {pos}")]
    BadExponent { pos: usize, token: String, exp: char },
}

/// An ordered list of gate tokens. Empty means the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GateString(pub Vec<Gate>);

impl GateString {
    pub fn new(tokens: Vec<Gate>) -> GateString {
        GateString(tokens)
    }

    pub fn tokens(&self) -> &[Gate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses tokens `H S T X Z V A H0' H1' H2'`, each optionally followed by
    /// the exponent 2 (or 3, for `T` only). Whitespace is ignored and letters
    /// are case-insensitive; `²`, `³` and `′` are accepted as well.
    pub fn parse(text: &str) -> Result<GateString, ParseError> {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let is_prime = |c: char| c == '\'' || c == '′';
        let exp_of = |c: char| match c {
            '2' | '²' => Some(2),
            '3' | '³' => Some(3),
            _ => None,
        };
        let mut out = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let (pos, c) = chars[k];
            let gate = match c.to_ascii_uppercase() {
                'H' => {
                    // H0' H1' H2' need the prime, otherwise the digit is an exponent
                    match (chars.get(k + 1), chars.get(k + 2)) {
                        (Some(&(_, d @ '0'..='2')), Some(&(_, p))) if is_prime(p) => {
                            k += 2;
                            Gate::HPrime(d as u8 - b'0')
                        }
                        _ => Gate::H,
                    }
                }
                'S' => Gate::S,
                'T' => Gate::T,
                'X' => Gate::X,
                'Z' => Gate::Z,
                'V' => Gate::V,
                'A' => Gate::A,
                _ => return Err(ParseError::UnexpectedChar { pos, ch: c }),
            };
            k += 1;
            let mut reps = 1;
            if let Some(&(epos, e)) = chars.get(k) {
                if let Some(n) = exp_of(e) {
                    if n == 3 && gate != Gate::T {
                        return Err(ParseError::BadExponent {
                            pos: epos,
                            token: gate.to_string(),
                            exp: e,
                        });
                    }
                    reps = n;
                    k += 1;
                } else if e.is_ascii_digit() {
                    return Err(ParseError::BadExponent {
                        pos: epos,
                        token: gate.to_string(),
                        exp: e,
                    });
                }
            }
            out.extend(std::iter::repeat_n(gate, reps));
        }
        Ok(GateString(out))
    }

    /// Exact product of the token matrices.
    pub fn matrix(&self) -> PhasedOp {
        self.0
            .iter()
            .fold(PhasedOp::identity(), |acc, &g| &acc * &gate_matrix(g))
    }

    /// Number of maximal runs of `T` tokens.
    pub fn t_runs(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|&(k, &g)| g == Gate::T && (k == 0 || self.0[k - 1] != Gate::T))
            .count()
    }
}

impl FromStr for GateString {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<GateString, ParseError> {
        GateString::parse(s)
    }
}

/// Compact text form; repeated tokens are folded into exponents, so
/// `parse(g.to_string()) == g`.
impl fmt::Display for GateString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut k = 0;
        while k < self.0.len() {
            let g = self.0[k];
            let run = self.0[k..].iter().take_while(|&&x| x == g).count();
            let max_exp = if g == Gate::T { 3 } else { 2 };
            let mut left = run;
            while left > 0 {
                let e = left.min(max_exp);
                f.write_str(g.symbol())?;
                if e > 1 {
                    write!(f, "{e}")?;
                }
                left -= e;
            }
            k += run;
        }
        Ok(())
    }
}

/// `phase · T^lead_t · Π (H′_h T^t) · H′_tail · tail_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub lead_t: u8,
    pub body: Vec<(u8, u8)>,
    pub tail_h: Option<u8>,
    pub tail_p: PElem,
    pub phase: UnitPhase,
}

impl Default for NormalForm {
    fn default() -> Self {
        NormalForm::identity()
    }
}

fn z_squared() -> PElem {
    PElem::new(0, 0, 0, 2)
}

impl NormalForm {
    pub fn identity() -> NormalForm {
        NormalForm {
            lead_t: 0,
            body: Vec::new(),
            tail_h: None,
            tail_p: PElem::IDENTITY,
            phase: UnitPhase::ONE,
        }
    }

    pub fn t_count(&self) -> usize {
        (self.lead_t > 0) as usize + self.body.len()
    }

    /// Number of `H′` syllables.
    pub fn h_count(&self) -> usize {
        self.body.len() + self.tail_h.is_some() as usize
    }

    /// The same form with unit phase.
    pub fn without_phase(&self) -> NormalForm {
        NormalForm {
            phase: UnitPhase::ONE,
            ..self.clone()
        }
    }

    /// Same gate sequence, phase ignored.
    pub fn same_form(&self, other: &NormalForm) -> bool {
        self.lead_t == other.lead_t
            && self.body == other.body
            && self.tail_h == other.tail_h
            && self.tail_p == other.tail_p
    }

    /// Gate tokens of the form, phase dropped.
    pub fn gate_string(&self) -> GateString {
        let mut out = Vec::new();
        out.extend(std::iter::repeat_n(Gate::T, self.lead_t as usize));
        for &(h, t) in &self.body {
            out.push(Gate::HPrime(h));
            out.extend(std::iter::repeat_n(Gate::T, t as usize));
        }
        if let Some(h) = self.tail_h {
            out.push(Gate::HPrime(h));
        }
        out.extend(self.tail_p.gates());
        GateString(out)
    }

    /// Exact matrix of the gate sequence, without the recorded phase.
    pub fn matrix(&self) -> PhasedOp {
        let tb = tables();
        let mut m = tb.t_pow_matrix(self.lead_t).clone();
        for &(h, t) in &self.body {
            m = &m * tb.hprime_matrix(h);
            m = &m * tb.t_pow_matrix(t);
        }
        if let Some(h) = self.tail_h {
            m = &m * tb.hprime_matrix(h);
        }
        &m * &self.tail_p.matrix()
    }

    /// `phase · matrix()`.
    pub fn operator(&self) -> PhasedOp {
        self.matrix().mul_phase(self.phase)
    }

    /// Syllable tokens: `T`, `T2`, `H0'`, …, then the `𝒫` part as one token.
    pub fn syllables(&self) -> Vec<String> {
        let t_tok = |t: u8| if t == 2 { "T2".to_string() } else { "T".to_string() };
        let mut out = Vec::new();
        if self.lead_t > 0 {
            out.push(t_tok(self.lead_t));
        }
        for &(h, t) in &self.body {
            out.push(Gate::HPrime(h).symbol().to_string());
            out.push(t_tok(t));
        }
        if let Some(h) = self.tail_h {
            out.push(Gate::HPrime(h).symbol().to_string());
        }
        if !self.tail_p.is_identity() {
            out.push(GateString(self.tail_p.gates()).to_string());
        }
        out
    }

    /// The form over `{H, S, T}` only: `H′_m → SᵐHSH`, `V₋₁ → HH`,
    /// `X → HS²HHSH`, `Z → HHS²HHS`. Equal to the form up to a phase.
    pub fn expanded(&self) -> String {
        let mut words: Vec<String> = Vec::new();
        let hprime = |h: u8| format!("{}HSH", ["", "S", "S2"][h as usize]);
        if self.lead_t > 0 {
            words.push(GateString(vec![Gate::T; self.lead_t as usize]).to_string());
        }
        for &(h, t) in &self.body {
            words.push(hprime(h));
            words.push(GateString(vec![Gate::T; t as usize]).to_string());
        }
        if let Some(h) = self.tail_h {
            words.push(hprime(h));
        }
        if !self.tail_p.is_identity() {
            let mut toks = Vec::new();
            for g in self.tail_p.gates() {
                toks.extend(expand_gate(g));
            }
            words.push(GateString(toks).to_string());
        }
        words.join(" ")
    }

    pub fn report(&self) -> NfReport {
        NfReport {
            normal_form: self.to_string(),
            expanded: self.expanded(),
            t_count: self.t_count(),
            h_count: self.h_count(),
            denom_exp: self.matrix().mat.denom_exp(),
            phase: self.phase.to_string(),
            syllables: self.syllables(),
        }
    }
}

/// `{H, S, T}` word for a `𝒫` generator, up to phase.
pub fn expand_gate(g: Gate) -> Vec<Gate> {
    use Gate::*;
    match g {
        V => vec![H, H],
        X => vec![H, S, S, H, H, S, H],
        Z => vec![H, H, S, S, H, H, S],
        HPrime(m) => {
            let mut w = vec![S; m as usize % 3];
            w.extend([H, S, H]);
            w
        }
        A => vec![H, S, S, H, S, S, H],
        g => vec![g],
    }
}

/// Syllables separated by spaces, e.g. `T H1' T2 VS2`. The identity is the
/// empty string, so the output always parses back.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.syllables().join(" "))
    }
}

/// Summary record of a normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NfReport {
    pub normal_form: String,
    pub expanded: String,
    pub t_count: usize,
    pub h_count: usize,
    pub denom_exp: u32,
    pub phase: String,
    pub syllables: Vec<String>,
}

impl NormalForm {
    /// `self · p`.
    fn push_p(&mut self, p: PElem) {
        let (r, u) = tables().p_mul(self.tail_p, p);
        self.tail_p = r;
        self.phase = self.phase * u;
    }

    /// `self · H′_h · p`.
    fn push_hprime(&mut self, h: u8, p: PElem) {
        let tb = tables();
        let (h1, p1, u1) = tb.p_past_hprime(self.tail_p, h);
        self.phase = self.phase * u1;
        match self.tail_h.take() {
            None => {
                self.tail_h = Some(h1);
                self.tail_p = p1;
            }
            Some(h0) => {
                let (idx, u2) = tb.hprime_product(h0, h1);
                let (h2, q) = tb.rep_label(idx);
                self.phase = self.phase * u2;
                self.tail_h = h2;
                self.tail_p = q;
                self.push_p(p1);
            }
        }
        self.push_p(p);
    }

    /// `self · Tᵃ`, `a ∈ {1, 2}`.
    fn push_t(&mut self, a: u8) {
        let (a1, p1, u) = tables().p_past_t(self.tail_p, a);
        self.phase = self.phase * u;
        self.tail_p = PElem::IDENTITY;
        if let Some(h) = self.tail_h.take() {
            self.body.push((h, a1));
        } else {
            let slot = match self.body.last_mut() {
                Some((_, t)) => t,
                None => &mut self.lead_t,
            };
            let sum = *slot + a1;
            if sum < 3 {
                *slot = sum;
            } else {
                // T³ = ωZ²
                self.phase = self.phase * UnitPhase::omega();
                self.tail_p = z_squared();
                if sum == 4 {
                    *slot = 1;
                } else if let Some((h, _)) = self.body.pop() {
                    self.tail_h = Some(h);
                } else {
                    self.lead_t = 0;
                }
            }
        }
        self.push_p(p1);
    }

    /// `self · g` for a single token.
    pub fn push_gate(&mut self, g: Gate) {
        if g == Gate::T {
            self.push_t(1);
            return;
        }
        let tb = tables();
        let (idx, u) = tb.gate_class(g).expect("Clifford token");
        self.phase = self.phase * u;
        match tb.rep_label(idx) {
            (None, p) => self.push_p(p),
            (Some(h), p) => self.push_hprime(h, p),
        }
    }

    /// `self · other`, phases multiplied.
    pub fn push_form(&mut self, other: &NormalForm) {
        if other.lead_t > 0 {
            self.push_t(other.lead_t);
        }
        for &(h, t) in &other.body {
            self.push_hprime(h, PElem::IDENTITY);
            self.push_t(t);
        }
        if let Some(h) = other.tail_h {
            self.push_hprime(h, PElem::IDENTITY);
        }
        self.push_p(other.tail_p);
        self.phase = self.phase * other.phase;
    }
}

/// Rewrites a gate string into its normal form, tracking the exact phase:
/// `g.matrix() == normalize(g).operator()`.
pub fn normalize(g: &GateString) -> NormalForm {
    let mut nf = NormalForm::identity();
    for &tok in g.tokens() {
        nf.push_gate(tok);
    }
    nf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::projective_eq;
    use proptest::prelude::*;

    const EXAMPLE_A: &str = "TSHSHTSXTS2HSHT2SXTZSHS";

    fn gs(s: &str) -> GateString {
        GateString::parse(s).unwrap()
    }

    #[test]
    fn parse_basics() {
        use Gate::*;
        assert_eq!(gs("HSH").0, vec![H, S, H]);
        assert!(gs("").is_empty());
        assert!(gs("  \n").is_empty());
        assert_eq!(gs("h s  t").0, vec![H, S, T]);
        assert_eq!(gs("H0'H1'h2'").0, vec![HPrime(0), HPrime(1), HPrime(2)]);
        assert_eq!(gs("H2").0, vec![H, H]);
        assert_eq!(gs("H2H").0, vec![H, H, H]);
        assert_eq!(gs("T3S²H1′").0, vec![T, T, T, S, S, HPrime(1)]);
        assert_eq!(gs("VA").0, vec![V, A]);
        assert_eq!(
            gs(EXAMPLE_A).0,
            vec![T, S, H, S, H, T, S, X, T, S, S, H, S, H, T, T, S, X, T, Z, S, H, S]
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            GateString::parse("HQ"),
            Err(ParseError::UnexpectedChar { pos: 1, ch: 'Q' })
        );
        assert!(matches!(GateString::parse("S3"), Err(ParseError::BadExponent { pos: 1, .. })));
        assert!(matches!(GateString::parse("T4"), Err(ParseError::BadExponent { .. })));
        assert!(matches!(GateString::parse("2"), Err(ParseError::UnexpectedChar { .. })));
        assert_eq!(
            GateString::parse("H S x"),
            Ok(GateString(vec![Gate::H, Gate::S, Gate::X]))
        );
    }

    #[test]
    fn string_matrices() {
        let ttt = gs("TTT").matrix();
        assert_eq!(projective_eq(&ttt, &gs("ZZ").matrix()), Ok(UnitPhase::omega()));
        assert_eq!(gs("HSH").matrix(), gate_matrix(Gate::HPrime(0)));
        assert_eq!(gs("A").matrix(), gs("HS2HS2H").matrix());
        assert_eq!(gs("").matrix(), PhasedOp::identity());
    }

    #[test]
    fn example_a() {
        let g = gs(EXAMPLE_A);
        assert_eq!(g.t_runs(), 5);
        let nf = normalize(&g);
        // five T runs collapse to two syllables
        assert_eq!(nf.to_string(), "T H1' T2 S2X2Z");
        assert_eq!(nf.t_count(), 2);
        assert_eq!(g.matrix(), nf.operator());
        let mut tail = NormalForm::identity();
        tail.tail_h = nf.tail_h;
        tail.tail_p = nf.tail_p;
        assert!(projective_eq(&tail.matrix(), &gs("X2Z2S2").matrix()).is_ok(), "{nf}");
    }

    #[test]
    fn small_examples() {
        assert_eq!(normalize(&gs("HHHH")), NormalForm::identity());
        let xt = normalize(&gs("XT"));
        assert_eq!(xt.lead_t, 1);
        assert!(xt.body.is_empty() && xt.tail_h.is_none());
        assert!(projective_eq(&xt.tail_p.matrix(), &gs("XZS2").matrix()).is_ok());
        assert_eq!(xt.operator(), gs("XT").matrix());
        assert_eq!(
            projective_eq(&gs("XT").matrix(), &gs("TXZS2").matrix()),
            Ok(UnitPhase::xi_pow(1))
        );
        assert_eq!(normalize(&gs("HSHTHSHT2HSHTS")).t_count(), 3);
        let ttt = normalize(&gs("TTT"));
        assert_eq!(ttt.t_count(), 0);
        assert_eq!(ttt.tail_p, PElem::new(0, 0, 0, 2));
        assert_eq!(ttt.phase, UnitPhase::omega());
    }

    #[test]
    fn example_b_form() {
        let nf = normalize(&gs("H2'TH1'TH2'T2"));
        assert_eq!(nf.phase, UnitPhase::ONE);
        assert_eq!(nf.to_string(), "H2' T H1' T H2' T2");
        assert_eq!(nf.expanded(), "S2HSH T SHSH T S2HSH T2");
        assert_eq!(nf.t_count(), 3);
        assert_eq!(nf.h_count(), 3);
        assert_eq!(nf.report().denom_exp, 5);
    }

    #[test]
    fn expansions_match() {
        for g in Gate::ALL {
            let e = GateString(expand_gate(g)).matrix();
            assert!(projective_eq(&e, &gate_matrix(g)).is_ok(), "{g}");
        }
    }

    fn arb_string() -> impl Strategy<Value = GateString> {
        prop::collection::vec(prop::sample::select(Gate::ALL.to_vec()), 0..40).prop_map(GateString)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn normalize_is_exact(g in arb_string()) {
            let nf = normalize(&g);
            prop_assert_eq!(g.matrix(), nf.operator());
            prop_assert!(nf.t_count() <= g.t_runs());
            prop_assert_eq!(nf.matrix().i_pow, 0);
        }

        #[test]
        fn normalize_is_idempotent(g in arb_string()) {
            let nf = normalize(&g).without_phase();
            let again = normalize(&GateString::parse(&nf.gate_string().to_string()).unwrap());
            prop_assert_eq!(&again, &nf);
            let from_display = normalize(&GateString::parse(&nf.to_string()).unwrap());
            prop_assert_eq!(&from_display, &nf);
        }

        #[test]
        fn unparse_round_trips(g in arb_string()) {
            prop_assert_eq!(GateString::parse(&g.to_string()).unwrap(), g);
        }

        #[test]
        fn equivalent_strings_share_a_form(g in arb_string(), pos in 0usize..40, pad in 0usize..4) {
            // splice an identity word into the string
            let ids = ["HHHH", "SSS", "XXX", "ZZZ", "VV"];
            let mut toks = g.0.clone();
            let at = pos.min(toks.len());
            let extra = gs(ids[pad]).0;
            toks.splice(at..at, extra);
            let a = normalize(&g);
            let b = normalize(&GateString(toks));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn push_form_composes(g in arb_string(), h in arb_string()) {
            let mut a = normalize(&g);
            a.push_form(&normalize(&h));
            let mut joined = g.0.clone();
            joined.extend(h.0.iter().copied());
            prop_assert_eq!(a, normalize(&GateString(joined)));
        }
    }
}
