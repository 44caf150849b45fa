//! Exact compilation tools for single-qutrit Clifford+T operators.
//!
//! * [`cyclotomic`]: arithmetic in `Z[ξ]` and `Z[ξ, 1/3]` with `ξ = e^{2πi/9}`.
//! * [`exactmat`]: 3×3 ring matrices, gate constants, residues, projective keys.
//! * [`clifford`]: the 216-element projective Clifford group and its rewrite tables.
//! * [`normalform`]: gate strings and the T-optimal normal form
//!   `(T|T²|ε)(H′(T|T²))* (ε|H′) 𝒫`.
//! * [`synth`]: exact synthesis and membership testing for ring unitaries.
//! * [`oracle`]: brute-force enumeration used as ground truth.

pub mod cyclotomic;
pub mod exactmat;
pub mod clifford;
pub mod normalform;
pub mod synth;
pub mod oracle;

pub use cyclotomic::{CycInt, Parity, RingElem, RingError};
pub use exactmat::{
    canonical_key, gate_matrix, projective_eq, Gate, Lift, NotEqual, ParityMat, PhasedOp,
    ProjKey, Residues, UMat, UnitPhase,
};
