//! Left invariant means on `C(H)`.
//!
//! On a finite discrete carrier the weakly right uniformly continuous
//! functions, the right uniformly continuous functions, and `C(H)` all
//! coincide, so a single mean concept suffices: a positive normalized
//! weight vector `m` with `m(δ_x∗f) = m(f)` for every element `x` and
//! every function `f` — equivalently `Σ_y c[x][y][z]·m_y = m_z` for all
//! `x, z`. Means are solved for and verified independently of the Haar
//! pipeline so that the two sides of the amenability equivalence can be
//! cross-checked.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{integrate, FunctionOnH, Measure};
use crate::hypergroup::ConvolutionTable;
use crate::lp::{feasible_point, Constraint, Feasibility, LpError, Relation};
use crate::rational::Rational;
use crate::sample::random_positive_functions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeanError {
    #[error("mean weights must be nonnegative")]
    Negative,
    #[error("mean weights must sum to 1")]
    NotNormalized,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A positive normalized functional on `C(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mean {
    weights: Measure,
}

impl Mean {
    pub fn new(weights: Vec<Rational>) -> Result<Self, MeanError> {
        let weights = Measure::new(weights);
        if !weights.is_positive() {
            return Err(MeanError::Negative);
        }
        if !weights.total().is_one() {
            return Err(MeanError::NotNormalized);
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &Measure {
        &self.weights
    }

    /// `m(f) = Σ_x m_x f(x)`.
    pub fn apply(&self, f: &FunctionOnH) -> Rational {
        integrate(&self.weights, f)
    }
}

/// Existence outcome for the invariant mean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeanOutcome {
    Mean(Mean),
    /// Exact Farkas certificate that the invariance system together with
    /// positivity and normalization has no solution.
    NonExistent {
        farkas: Vec<Rational>,
    },
}

/// Solves `{m ≥ 0, Σ m = 1, Σ_y c[x][y][z] m_y = m_z ∀x,z}` exactly.
/// Always succeeds on a valid finite hypergroup; nonexistence is a value,
/// not an error, so relaxed tables can be probed too.
pub fn invariant_mean(table: &ConvolutionTable) -> Result<MeanOutcome, MeanError> {
    let n = table.len();
    let mut constraints = Vec::with_capacity(n * n + 1);
    for x in 0..n {
        for z in 0..n {
            let mut coeffs: Vec<Rational> = (0..n).map(|y| table.conv(x, y, z).clone()).collect();
            coeffs[z] -= Rational::one();
            constraints.push(Constraint::new(coeffs, Relation::Eq, Rational::zero()));
        }
    }
    constraints.push(Constraint::new(
        vec![Rational::one(); n],
        Relation::Eq,
        Rational::one(),
    ));
    match feasible_point(n, constraints, vec![false; n])? {
        Feasibility::Feasible(weights) => {
            let mean = Mean::new(weights).expect("solver output is positive and normalized");
            Ok(MeanOutcome::Mean(mean))
        }
        Feasibility::Infeasible(farkas) => Ok(MeanOutcome::NonExistent { farkas }),
    }
}

/// Result of checking a candidate mean for left invariance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanVerification {
    pub invariant: bool,
    /// Largest defect `|m(δ_x∗f) − m(f)|` seen, exact.
    pub worst: Rational,
    /// The matrix form `Σ_y c[x][y][z] m_y = m_z` holds.
    pub matrix_invariant: bool,
    /// Functions checked: all indicators plus the seeded sample.
    pub functions_checked: usize,
}

/// Checks `m(δ_x∗f) = m(f)` over every indicator function and
/// `sample_size` seeded pseudorandom positive functions, and separately
/// the matrix formulation of invariance; the two verdicts must agree.
pub fn verify_mean(
    table: &ConvolutionTable,
    mean: &Mean,
    seed: u64,
    sample_size: usize,
) -> MeanVerification {
    let n = table.len();
    let mut fs: Vec<FunctionOnH> = (0..n).map(|x| FunctionOnH::indicator(n, x)).collect();
    fs.extend(random_positive_functions(n, sample_size, seed));
    let mut worst = Rational::zero();
    for f in &fs {
        let base = mean.apply(f);
        for x in 0..n {
            let shifted = mean.apply(&table.translate_point(x, f));
            let defect = (shifted - &base).abs();
            if defect > worst {
                worst = defect;
            }
        }
    }
    let functional_invariant = worst.is_zero();

    let matrix_invariant = (0..n).all(|x| {
        (0..n).all(|z| {
            let lhs: Rational = (0..n)
                .map(|y| table.conv(x, y, z) * mean.weights().weight(y))
                .sum();
            lhs == *mean.weights().weight(z)
        })
    });
    // the functional check over all indicators is the matrix system read
    // through the pairing, so the two must agree
    assert_eq!(functional_invariant, matrix_invariant);

    MeanVerification {
        invariant: functional_invariant && matrix_invariant,
        worst,
        matrix_invariant,
        functions_checked: fs.len(),
    }
}
