//! Exact operator perturbation theory on ladder algebras.
//!
//! The crate builds, order by order, a similarity transformation that
//! diagonalizes a perturbed Hamiltonian `H0 + V` symbolically: every
//! intermediate is a finite combination of normal-ordered ladder monomials
//! with exact coefficients — rationals, Gaussian rationals, symbolic
//! parameter powers, and an explicit `√2` where oscillator couplings need
//! one. Nothing is floating point until a result is evaluated.
//!
//! Two algebras are built in: the oscillator pair `a†, a` and the spin
//! triple `L+, L0, L-`. For an `H0` whose spectrum is an equally spaced
//! ladder (spacing `gap`), three linear maps on expressions do all the work:
//! the diagonal projector, the level shift (which multiplies a monomial by
//! its ladder grade times the gap), and the inverse shift on off-diagonal
//! terms. The recursion in [`engine`] produces at each order a diagonal
//! energy shift `W_n` and an anti-Hermitian generator `G_n`; conjugating by
//! `exp(ΣG_n)` removes off-diagonal terms to the achieved order.
//!
//! Two exactly solvable setups ship as presets — a linearly driven
//! oscillator and a spin in a tilted field — and [`oracle`] cross-checks the
//! symbolic results against exact rational matrix representations and a
//! self-contained Hermitian eigensolver. The `ladderpt` binary exposes all
//! of it: `run` prints a series, `spectrum` evaluates energies, `verify`
//! runs the self-check suite.

pub mod algebra;
pub mod config;
pub mod engine;
pub mod error;
pub mod models;
pub mod oracle;
pub mod param;
pub mod parse;
pub mod render;
pub mod scalar;
pub mod superops;
pub mod verify;

pub use algebra::{normal_order, Algebra, Generator, Monomial, OperatorExpr};
pub use engine::{PerturbationProblem, SeriesOrder, SeriesResult};
pub use error::Error;
pub use models::{
    diagonal_expectation, evaluate_spectrum, stark_problem, zeeman_problem, SpectrumRow,
    StateLabel,
};
pub use param::{ParamId, ParamValues};
pub use scalar::Scalar;
pub use superops::{pi_project, GapSpec};
