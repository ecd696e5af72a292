//! Order-by-order construction of the diagonalizing transformation.
//!
//! For a problem split as H = H⁰ + V, the engine produces per order n an
//! expansion operator Aₙ, its diagonal part Wₙ = Π(Aₙ), and a generator
//! increment Gₙ = Γ⁻¹(Aₙ − Wₙ). Aₙ collects nested commutators of the
//! already-known generator increments against two targets:
//!
//! ```text
//! Aₙ = Σ_{k≥0} 1/k! Σ_{n₁+…+n_k = n−1} ad_{G_{n₁}} ∘ … ∘ ad_{G_{n_k}} (V)
//!    + Σ_{k≥2} 1/k! Σ_{n₁+…+n_k = n}   ad_{G_{n₁}} ∘ … ∘ ad_{G_{n_k}} (H⁰)
//! ```
//!
//! over ordered tuples with every nᵢ ≥ 1; the lone tuple (n) against H⁰ is
//! what the iteration solves for, so it is excluded. The innermost bracket
//! against H⁰ is always [G_m, H⁰] = −Γ(G_m) — the unperturbed Hamiltonian
//! never appears explicitly, only through its gap structure.

use num_rational::BigRational;

use crate::algebra::{Algebra, OperatorExpr};
use crate::error::Error;
use crate::scalar::{int, Scalar};
use crate::superops::{pi_project, GapSpec};

/// Which fixed operator the nested commutators close on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoxTarget {
    H0,
    V,
}

/// One summand of the order-n assembly: apply `ad_{G_{indices[0]}} ∘ …`
/// (left to right = outermost to innermost) to the target, times `weight`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoxTerm {
    pub indices: Vec<u32>,
    pub target: BoxTarget,
    pub weight: BigRational,
}

/// Ordered compositions of `total` into parts ≥ 1, in deterministic order.
fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for rest in compositions(total - first) {
            let mut c = Vec::with_capacity(rest.len() + 1);
            c.push(first);
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

fn factorial(k: usize) -> BigRational {
    let mut f = int(1);
    for i in 1..=k as i64 {
        f *= int(i);
    }
    f
}

/// Enumerate every summand of the order-n expansion operator.
pub fn box_terms(order: u32) -> Vec<BoxTerm> {
    assert!(order >= 1, "orders are counted from 1");
    let mut out = Vec::new();
    for indices in compositions(order - 1) {
        let weight = int(1) / factorial(indices.len());
        out.push(BoxTerm {
            indices,
            target: BoxTarget::V,
            weight,
        });
    }
    for indices in compositions(order) {
        if indices.len() < 2 {
            continue; // the solitary (order) tuple is the unknown being solved for
        }
        let weight = int(1) / factorial(indices.len());
        out.push(BoxTerm {
            indices,
            target: BoxTarget::H0,
            weight,
        });
    }
    out
}

/// A perturbation problem over one ladder algebra. The unperturbed
/// Hamiltonian is carried implicitly: its graded part through the gap, its
/// central part as a scalar (it commutes with everything and only matters
/// for absolute energies).
#[derive(Clone, Debug)]
pub struct PerturbationProblem {
    gap: GapSpec,
    h0_central: Scalar,
    v: OperatorExpr,
    max_order: u32,
}

impl PerturbationProblem {
    pub fn new(
        gap: GapSpec,
        h0_central: Scalar,
        v: OperatorExpr,
        max_order: u32,
    ) -> Result<Self, Error> {
        if v.algebra() != gap.algebra() {
            return Err(Error::AlgebraMismatch(gap.algebra(), v.algebra()));
        }
        if max_order < 1 {
            return Err(Error::InvalidOrder);
        }
        if !v.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        if !pi_project(&v).is_zero() {
            return Err(Error::DiagonalPerturbation);
        }
        Ok(PerturbationProblem {
            gap,
            h0_central,
            v,
            max_order,
        })
    }

    pub fn algebra(&self) -> Algebra {
        self.gap.algebra()
    }

    pub fn gap(&self) -> &GapSpec {
        &self.gap
    }

    pub fn h0_central(&self) -> &Scalar {
        &self.h0_central
    }

    pub fn v(&self) -> &OperatorExpr {
        &self.v
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// The order-n expansion operator given the generator increments
    /// G₁..G_{n−1} (`prior_g[k-1]` holds G_k).
    pub fn expansion_term(&self, order: u32, prior_g: &[OperatorExpr]) -> OperatorExpr {
        assert!(
            prior_g.len() + 1 >= order as usize,
            "need all generator increments below order {order}"
        );
        let g = |k: u32| &prior_g[(k - 1) as usize];
        let mut acc = OperatorExpr::zero(self.algebra());
        for bt in box_terms(order) {
            let mut cur = match bt.target {
                BoxTarget::V => self.v.clone(),
                BoxTarget::H0 => {
                    // innermost bracket: [G_m, H⁰] = −Γ(G_m)
                    let m = *bt.indices.last().expect("H0 tuples have length ≥ 2");
                    self.gap.gamma(g(m)).negated()
                }
            };
            let outer = match bt.target {
                BoxTarget::V => &bt.indices[..],
                BoxTarget::H0 => &bt.indices[..bt.indices.len() - 1],
            };
            for &k in outer.iter().rev() {
                if cur.is_zero() {
                    break;
                }
                cur = g(k).commutator(&cur).expect("same algebra by construction");
            }
            acc = &acc + &cur.scale(&Scalar::from_rational(bt.weight));
        }
        acc
    }

    /// Run the recursion through `max_order`.
    pub fn iterate(&self) -> SeriesResult {
        let mut orders = Vec::with_capacity(self.max_order as usize);
        let mut g_list: Vec<OperatorExpr> = Vec::new();
        for n in 1..=self.max_order {
            let a = self.expansion_term(n, &g_list);
            let w = pi_project(&a);
            let g = self.gap.gamma_inverse(&(&a - &w));
            g_list.push(g.clone());
            orders.push(SeriesOrder { order: n, a, w, g });
        }
        SeriesResult {
            algebra: self.algebra(),
            orders,
        }
    }
}

/// One order of the expansion: the assembled operator and its split into
/// diagonal shift and generator increment.
#[derive(Clone, PartialEq, Debug)]
pub struct SeriesOrder {
    pub order: u32,
    /// Expansion operator Aₙ before splitting.
    pub a: OperatorExpr,
    /// Diagonal shift Wₙ = Π(Aₙ).
    pub w: OperatorExpr,
    /// Generator increment Gₙ = Γ⁻¹(Aₙ − Wₙ).
    pub g: OperatorExpr,
}

impl SeriesOrder {
    /// True when the whole order vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero()
    }
}

/// The full expansion up to the requested order.
#[derive(Clone, PartialEq, Debug)]
pub struct SeriesResult {
    algebra: Algebra,
    pub orders: Vec<SeriesOrder>,
}

impl SeriesResult {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn max_order(&self) -> u32 {
        self.orders.len() as u32
    }

    pub fn order(&self, n: u32) -> Option<&SeriesOrder> {
        self.orders.get((n - 1) as usize)
    }

    /// Accumulated diagonal shift Σ Wₙ.
    pub fn w_total(&self) -> OperatorExpr {
        self.orders
            .iter()
            .fold(OperatorExpr::zero(self.algebra), |acc, o| &acc + &o.w)
    }

    /// Accumulated generator Σ Gₙ.
    pub fn g_total(&self) -> OperatorExpr {
        self.orders
            .iter()
            .fold(OperatorExpr::zero(self.algebra), |acc, o| &acc + &o.g)
    }

    /// Orders that vanished identically.
    pub fn zero_orders(&self) -> Vec<u32> {
        self.orders
            .iter()
            .filter(|o| o.is_zero())
            .map(|o| o.order)
            .collect()
    }
}
