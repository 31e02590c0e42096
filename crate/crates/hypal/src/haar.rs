//! The constructive Haar pipeline.
//!
//! For a fixed test function `f ≥ 0`, `f ≠ 0` on a table `H`:
//!
//! * [`ppt_check`] decides the positivity property of translations —
//!   `μ∗f ≤ ν∗f` pointwise forces `‖μ‖ ≤ ‖ν‖` for positive measures — by
//!   maximizing `ρ(H)` over signed `ρ = p − q` with `ρ∗f ≤ 0` and
//!   `‖ρ‖ ≤ 1`; optimum 0 means the property holds, a positive optimum
//!   yields a counterexample pair that is re-verified before return;
//! * [`gamma_well_defined`] checks the kernel of `ρ ↦ ρ∗f` against
//!   `ρ(H) = 0`, the constructive content of the claim that
//!   `Γ_f(μ∗f) = μ(H)` is well defined;
//! * [`dominate`] produces a positive `μ` with `g ≤ μ∗f`, the domination
//!   step that feeds the positive extension;
//! * [`build_k`] / [`k_feasible`] realize the polytope `K` of positive
//!   functionals `w` with `⟨w, δ_s∗f⟩ = 1` for every element `s`, and
//!   find a point of it by exact phase-1 LP instead of a nonconstructive
//!   extension argument;
//! * [`action_matrix`] gives the translation action on weight vectors
//!   as the matrix `(A_x)[z][y] = c[x][y][z]`, which maps `K` into
//!   itself and composes along the convolution;
//! * [`fixed_point_haar`] finds the fixed point of that action — the
//!   Haar measure — by the closed-form discrete formula, by exact
//!   nullspace solving, or by Cesàro-averaged iteration of the averaged
//!   operator `P = (1/n)·Σ_x A_x` in binary64 with an exact fallback.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{FunctionOnH, Measure};
use crate::hypergroup::ConvolutionTable;
use crate::lp::{
    feasible_point, nullspace, Constraint, Direction, Feasibility, LinearProgram, LpError,
    LpOutcome, Relation,
};
use crate::rational::{to_f64, Rational};
use crate::sample::random_positive_functions;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HaarError {
    #[error("test function must be nonnegative")]
    FunctionNegative,
    #[error("test function must be nonzero")]
    FunctionZero,
    #[error("translates of f do not dominate: every translate vanishes at `{element}`")]
    TranslateCoverage { element: String },
    #[error("domination system is infeasible")]
    DominationInfeasible,
    #[error("the polytope K is empty")]
    KInfeasible { farkas: Vec<Rational> },
    #[error("direct formula undefined: c[x̌][x][e] is not positive at `{element}`")]
    DirectUndefined { element: String },
    #[error(transparent)]
    Lp(#[from] LpError),
}

fn require_test_function(f: &FunctionOnH) -> Result<(), HaarError> {
    if !f.is_nonnegative() {
        return Err(HaarError::FunctionNegative);
    }
    if f.is_zero() {
        return Err(HaarError::FunctionZero);
    }
    Ok(())
}

/// The translate matrix `T[x][y] = (δ_x∗f)(y)`; its rows are the
/// functions every constraint system in this module is built from.
pub fn translate_matrix(table: &ConvolutionTable, f: &FunctionOnH) -> Vec<Vec<Rational>> {
    (0..table.len())
        .map(|x| table.translate_point(x, f).values().to_vec())
        .collect()
}

// ---------------------------------------------------------------------------
// ppt
// ---------------------------------------------------------------------------

/// Verdict of the positivity-of-translations decision. A failure carries
/// positive measures with `μ∗f ≤ ν∗f` pointwise yet `‖μ‖ > ‖ν‖`, already
/// re-verified through the measure algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PptVerdict {
    Holds,
    Fails { mu: Measure, nu: Measure },
}

impl PptVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PptVerdict::Holds)
    }
}

/// Decides ppt for `f` on a structurally well-formed table (the table may
/// violate hypergroup axioms; on a valid finite hypergroup the property
/// always holds, so the failure path is only reachable on relaxed input).
pub fn ppt_check(table: &ConvolutionTable, f: &FunctionOnH) -> Result<PptVerdict, HaarError> {
    require_test_function(f)?;
    let n = table.len();
    assert_eq!(f.len(), n);
    let translates = translate_matrix(table, f);

    // maximize ρ(H) over ρ = p − q, p,q ≥ 0, with ρ∗f ≤ 0 and Σ(p+q) ≤ 1
    let mut objective = vec![Rational::one(); n];
    objective.extend(std::iter::repeat_n(-Rational::one(), n));
    let mut lp = LinearProgram::new(Direction::Maximize, objective);
    for y in 0..n {
        let mut coeffs: Vec<Rational> = (0..n).map(|x| translates[x][y].clone()).collect();
        coeffs.extend((0..n).map(|x| -translates[x][y].clone()));
        lp.constrain(coeffs, Relation::Le, Rational::zero());
    }
    lp.constrain(vec![Rational::one(); 2 * n], Relation::Le, Rational::one());

    let LpOutcome::Optimal { point, value, .. } = lp.solve()? else {
        unreachable!("the ppt program is feasible at 0 and norm-bounded");
    };
    assert!(!value.is_negative(), "ρ = 0 is always feasible");
    if value.is_zero() {
        return Ok(PptVerdict::Holds);
    }
    let mu = Measure::new(point[..n].to_vec());
    let nu = Measure::new(point[n..].to_vec());
    // the certificate must reproduce through the measure algebra
    assert!(mu.is_positive() && nu.is_positive());
    assert!(
        table.translate(&mu, f).le(&table.translate(&nu, f)),
        "certificate fails μ∗f ≤ ν∗f"
    );
    assert!(mu.norm() > nu.norm(), "certificate fails ‖μ‖ > ‖ν‖");
    Ok(PptVerdict::Fails { mu, nu })
}

/// [`ppt_check`] over a batch of test functions; with the `parallel`
/// feature the LP solves run on the rayon pool.
pub fn ppt_batch(
    table: &ConvolutionTable,
    fs: &[FunctionOnH],
) -> Result<Vec<PptVerdict>, HaarError> {
    #[cfg(feature = "parallel")]
    {
        fs.par_iter().map(|f| ppt_check(table, f)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ppt_batch_seq(table, fs)
    }
}

/// Always-sequential batch; same result as [`ppt_batch`].
pub fn ppt_batch_seq(
    table: &ConvolutionTable,
    fs: &[FunctionOnH],
) -> Result<Vec<PptVerdict>, HaarError> {
    fs.iter().map(|f| ppt_check(table, f)).collect()
}

// ---------------------------------------------------------------------------
// Γ_f well-definedness and domination
// ---------------------------------------------------------------------------

/// Kernel report for the functional `Γ_f(ρ∗f) = ρ(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    /// Basis of `{ρ : ρ∗f = 0}`.
    pub kernel_basis: Vec<Measure>,
    /// True when `ρ(H) = 0` across the kernel, so the value of `Γ_f` does
    /// not depend on the representation `μ∗f`.
    pub well_defined: bool,
    /// A kernel element with `ρ(H) ≠ 0`, when one exists.
    pub witness: Option<Measure>,
}

/// Checks well-definedness of `Γ_f` by computing the kernel of
/// `ρ ↦ ρ∗f` exactly. Whenever ppt holds this must come back affirmative.
pub fn gamma_well_defined(
    table: &ConvolutionTable,
    f: &FunctionOnH,
) -> Result<GammaReport, HaarError> {
    require_test_function(f)?;
    let n = table.len();
    let translates = translate_matrix(table, f);
    // rows indexed by the evaluation point y, columns by x
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|y| (0..n).map(|x| translates[x][y].clone()).collect())
        .collect();
    let kernel_basis: Vec<Measure> = nullspace(n, &rows).into_iter().map(Measure::new).collect();
    let witness = kernel_basis
        .iter()
        .find(|rho| !rho.total().is_zero())
        .cloned();
    Ok(GammaReport {
        well_defined: witness.is_none(),
        kernel_basis,
        witness,
    })
}

/// Finds a positive measure `μ` minimizing `μ(H)` subject to `g ≤ μ∗f`
/// pointwise. Requires translate coverage: every point must see some
/// positive translate of `f`, otherwise no multiple of the translates can
/// reach above `g` there.
pub fn dominate(
    table: &ConvolutionTable,
    f: &FunctionOnH,
    g: &FunctionOnH,
) -> Result<Measure, HaarError> {
    require_test_function(f)?;
    let n = table.len();
    assert_eq!(g.len(), n);
    let translates = translate_matrix(table, f);
    for y in 0..n {
        if !(0..n).any(|x| translates[x][y].is_positive()) {
            return Err(HaarError::TranslateCoverage {
                element: table.symbol(y).to_owned(),
            });
        }
    }
    let mut lp = LinearProgram::new(Direction::Minimize, vec![Rational::one(); n]);
    for y in 0..n {
        lp.constrain(
            (0..n).map(|x| translates[x][y].clone()).collect(),
            Relation::Ge,
            g.value(y).clone(),
        );
    }
    let mu = match lp.solve()? {
        LpOutcome::Optimal { point, .. } => Measure::new(point),
        LpOutcome::Infeasible { .. } => return Err(HaarError::DominationInfeasible),
        LpOutcome::Unbounded { .. } => unreachable!("objective bounded below by zero"),
    };
    assert!(g.le(&table.translate(&mu, f)), "domination must re-verify");
    Ok(mu)
}

// ---------------------------------------------------------------------------
// the polytope K
// ---------------------------------------------------------------------------

/// The polytope of normalized positive functionals: weight vectors
/// `w ≥ 0` with `⟨w, δ_s∗f⟩ = 1` for every element `s`. By linearity its
/// members send every translate `μ∗f` to `μ(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPolytope {
    table: ConvolutionTable,
    f: FunctionOnH,
    /// Row `s` holds the values of `δ_s∗f`.
    rows: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KFeasibility {
    Point(Measure),
    Infeasible(Vec<Rational>),
}

pub fn build_k(table: &ConvolutionTable, f: &FunctionOnH) -> Result<KPolytope, HaarError> {
    require_test_function(f)?;
    Ok(KPolytope {
        table: table.clone(),
        f: f.clone(),
        rows: translate_matrix(table, f),
    })
}

impl KPolytope {
    pub fn table(&self) -> &ConvolutionTable {
        &self.table
    }

    pub fn test_function(&self) -> &FunctionOnH {
        &self.f
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Exact membership test.
    pub fn contains(&self, w: &Measure) -> bool {
        assert_eq!(w.len(), self.table.len());
        w.is_positive()
            && self.rows.iter().all(|row| {
                let pairing: Rational = row.iter().zip(w.weights()).map(|(r, wy)| r * wy).sum();
                pairing.is_one()
            })
    }

    /// A point of K, or an exact Farkas certificate of emptiness.
    pub fn feasible(&self) -> Result<KFeasibility, HaarError> {
        let n = self.table.len();
        let constraints = self
            .rows
            .iter()
            .map(|row| Constraint::new(row.clone(), Relation::Eq, Rational::one()))
            .collect();
        match feasible_point(n, constraints, vec![false; n])? {
            Feasibility::Feasible(w) => Ok(KFeasibility::Point(Measure::new(w))),
            Feasibility::Infeasible(farkas) => Ok(KFeasibility::Infeasible(farkas)),
        }
    }
}

/// [`KPolytope::feasible`] as a free function, mirroring the rest of the
/// pipeline's naming.
pub fn k_feasible(k: &KPolytope) -> Result<KFeasibility, HaarError> {
    k.feasible()
}

// ---------------------------------------------------------------------------
// the translation action
// ---------------------------------------------------------------------------

/// The matrix of the translation action of one element on weight
/// vectors: `(A_x)[z][y] = c[x][y][z]`, the adjoint of the point
/// translate, so that `⟨A_x w, g⟩ = ⟨w, δ_x∗g⟩` for all weights `w` and
/// functions `g`. Columns are the distributions `δ_x ∗ δ_y`, hence sum
/// to 1 on valid tables, and associativity of the table is exactly the
/// composition law `A_x·A_y = Σ_t c[x][y][t]·A_t`.
///
/// (The translate convention of the algebra module composes
/// contravariantly — `(μ∗ν)∗f = ν∗(μ∗f)` — so the involution that the
/// functional picture puts into `x·Λ(g) = Λ(δ_x̌∗g)` cancels against the
/// involution hidden in the measure-function convolution, leaving the
/// plain structure constants here.)
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMatrix {
    element: usize,
    n: usize,
    /// Row-major `[z][y]`.
    entries: Vec<Rational>,
}

impl ActionMatrix {
    pub fn element(&self) -> usize {
        self.element
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, z: usize, y: usize) -> &Rational {
        &self.entries[z * self.n + y]
    }

    /// `A_x · w` exactly.
    pub fn apply(&self, w: &[Rational]) -> Vec<Rational> {
        assert_eq!(w.len(), self.n);
        (0..self.n)
            .map(|z| {
                (0..self.n)
                    .filter(|&y| !self.entry(z, y).is_zero() && !w[y].is_zero())
                    .map(|y| self.entry(z, y) * &w[y])
                    .sum()
            })
            .collect()
    }

    /// Matrix product `A·B`, row-major.
    pub fn compose(&self, other: &ActionMatrix) -> Vec<Rational> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![Rational::zero(); n * n];
        for z in 0..n {
            for w in 0..n {
                if self.entry(z, w).is_zero() {
                    continue;
                }
                for y in 0..n {
                    if !other.entry(w, y).is_zero() {
                        out[z * n + y] += self.entry(z, w) * other.entry(w, y);
                    }
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }
}

pub fn action_matrix(table: &ConvolutionTable, x: usize) -> ActionMatrix {
    let n = table.len();
    let mut entries = Vec::with_capacity(n * n);
    for z in 0..n {
        for y in 0..n {
            entries.push(table.conv(x, y, z).clone());
        }
    }
    ActionMatrix {
        element: x,
        n,
        entries,
    }
}

/// Action matrices for every element; parallel when the feature is on.
pub fn all_action_matrices(table: &ConvolutionTable) -> Vec<ActionMatrix> {
    #[cfg(feature = "parallel")]
    {
        (0..table.len())
            .into_par_iter()
            .map(|x| action_matrix(table, x))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        all_action_matrices_seq(table)
    }
}

/// Always-sequential variant of [`all_action_matrices`].
pub fn all_action_matrices_seq(table: &ConvolutionTable) -> Vec<ActionMatrix> {
    (0..table.len()).map(|x| action_matrix(table, x)).collect()
}

// ---------------------------------------------------------------------------
// invariance checking
// ---------------------------------------------------------------------------

/// Result of the exact left-invariance check
/// `Σ_y c[x][y][z] λ_y = λ_z` for all `x, z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Largest absolute defect, exact.
    pub worst: Rational,
    /// Where the defect is attained, as `(x, z)`.
    pub worst_at: Option<(usize, usize)>,
}

pub fn check_left_invariance(table: &ConvolutionTable, lambda: &Measure) -> InvarianceReport {
    let n = table.len();
    assert_eq!(lambda.len(), n);
    let mut worst = Rational::zero();
    let mut worst_at = None;
    for x in 0..n {
        for z in 0..n {
            let lhs: Rational = (0..n)
                .filter(|&y| !table.conv(x, y, z).is_zero())
                .map(|y| table.conv(x, y, z) * lambda.weight(y))
                .sum();
            let defect = (lhs - lambda.weight(z)).abs();
            if defect > worst {
                worst = defect;
                worst_at = Some((x, z));
            }
        }
    }
    InvarianceReport {
        invariant: worst.is_zero(),
        worst,
        worst_at,
    }
}

/// Binary64 residual of the same system, for iterative weights:
/// `max_{x,z} |Σ_y c[x][y][z] w_y − w_z|`.
pub fn invariance_residual_f64(table: &ConvolutionTable, weights: &[f64]) -> f64 {
    let n = table.len();
    assert_eq!(weights.len(), n);
    let mut worst = 0.0f64;
    for x in 0..n {
        for z in 0..n {
            let mut lhs = 0.0;
            for y in 0..n {
                lhs += to_f64(table.conv(x, y, z)) * weights[y];
            }
            worst = worst.max((lhs - weights[z]).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// the Haar solvers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarMethod {
    /// Closed-form `λ_x = 1 / c[x̌][x][e]`, the unique left-invariant
    /// normalization on a valid table; serves as an independent oracle.
    Direct,
    /// Exact solve of the stacked fixed-point system `(A_x − I)w = 0`
    /// intersected with the equality constraints of K.
    Nullspace,
    /// Cesàro averages of iterates of `P = (1/n)·Σ_x A_x` in binary64,
    /// started from a point of K, with exact fallback.
    Cesaro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `λ_e = 1`.
    IdentityOne,
    /// `Λ(f) = 1`, the K normalization.
    FunctionalOne,
}

#[derive(Debug, Clone, Copy)]
pub struct CesaroOptions {
    /// ∞-norm residual target for per-element invariance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CesaroOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesaroInfo {
    /// Applications of the averaged operator.
    pub iterations: usize,
    /// Final per-element invariance residual of the averaged iterate.
    pub residual: f64,
    pub converged: bool,
    /// True when the exact nullspace solver supplied the weights.
    pub fell_back: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarResult {
    pub weights: Measure,
    pub normalization: Normalization,
    pub method: HaarMethod,
    pub cesaro: Option<CesaroInfo>,
}

impl HaarResult {
    /// Weights rescaled to `λ_e = 1`; `None` when the identity weight
    /// vanishes (impossible on a valid table).
    pub fn identity_normalized(&self) -> Option<Measure> {
        let at_e = self.weights.weight(ConvolutionTable::IDENTITY);
        if at_e.is_zero() {
            return None;
        }
        Some(self.weights.scaled(&at_e.recip()))
    }

    /// Weights rescaled to total mass 1.
    pub fn mass_normalized(&self) -> Option<Measure> {
        let total = self.weights.total();
        if total.is_zero() {
            return None;
        }
        Some(self.weights.scaled(&total.recip()))
    }
}

/// Computes a left Haar measure by the requested method.
///
/// `f` drives the K normalization for the nullspace and Cesàro methods
/// and is ignored by the direct formula. Errors surface exactly where the
/// theory says they can: an empty K (only on tables where ppt fails or an
/// axiom is violated) and a vanishing direct denominator (only on tables
/// violating the support axiom). Cesàro non-convergence is reported in
/// [`CesaroInfo`] and answered with the exact fallback.
pub fn fixed_point_haar(
    table: &ConvolutionTable,
    f: &FunctionOnH,
    method: HaarMethod,
    options: CesaroOptions,
) -> Result<HaarResult, HaarError> {
    match method {
        HaarMethod::Direct => direct_haar(table),
        HaarMethod::Nullspace => nullspace_haar(table, f),
        HaarMethod::Cesaro => cesaro_haar(table, f, options),
    }
}

fn direct_haar(table: &ConvolutionTable) -> Result<HaarResult, HaarError> {
    let n = table.len();
    let e = ConvolutionTable::IDENTITY;
    let weights = (0..n)
        .map(|x| {
            let d = table.conv(table.involute(x), x, e);
            if d.is_positive() {
                Ok(d.recip())
            } else {
                Err(HaarError::DirectUndefined {
                    element: table.symbol(x).to_owned(),
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HaarResult {
        weights: Measure::new(weights),
        normalization: Normalization::IdentityOne,
        method: HaarMethod::Direct,
        cesaro: None,
    })
}

fn nullspace_haar(table: &ConvolutionTable, f: &FunctionOnH) -> Result<HaarResult, HaarError> {
    require_test_function(f)?;
    let n = table.len();
    let actions = all_action_matrices(table);
    let mut constraints = Vec::with_capacity(n * n + n);
    for a in &actions {
        for z in 0..n {
            let mut coeffs: Vec<Rational> = (0..n).map(|y| a.entry(z, y).clone()).collect();
            coeffs[z] -= Rational::one();
            constraints.push(Constraint::new(coeffs, Relation::Eq, Rational::zero()));
        }
    }
    for row in translate_matrix(table, f) {
        constraints.push(Constraint::new(row, Relation::Eq, Rational::one()));
    }
    match feasible_point(n, constraints, vec![false; n])? {
        Feasibility::Infeasible(farkas) => Err(HaarError::KInfeasible { farkas }),
        Feasibility::Feasible(w) => {
            let w = Measure::new(w);
            let at_e = w.weight(ConvolutionTable::IDENTITY);
            if at_e.is_zero() {
                Ok(HaarResult {
                    weights: w,
                    normalization: Normalization::FunctionalOne,
                    method: HaarMethod::Nullspace,
                    cesaro: None,
                })
            } else {
                Ok(HaarResult {
                    weights: w.scaled(&at_e.recip()),
                    normalization: Normalization::IdentityOne,
                    method: HaarMethod::Nullspace,
                    cesaro: None,
                })
            }
        }
    }
}

fn cesaro_haar(
    table: &ConvolutionTable,
    f: &FunctionOnH,
    options: CesaroOptions,
) -> Result<HaarResult, HaarError> {
    let n = table.len();
    let k = build_k(table, f)?;
    let start = match k.feasible()? {
        KFeasibility::Point(w) => w,
        KFeasibility::Infeasible(farkas) => return Err(HaarError::KInfeasible { farkas }),
    };

    let p_matrix: Vec<f64> = {
        let actions = all_action_matrices(table);
        let mut p = vec![0.0; n * n];
        for a in actions.iter().map(ActionMatrix::to_f64) {
            for (acc, v) in p.iter_mut().zip(&a) {
                *acc += v / n as f64;
            }
        }
        p
    };
    let apply_p = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|z| (0..n).map(|y| p_matrix[z * n + y] * v[y]).sum())
            .collect()
    };

    let mut current = start.to_f64();
    let mut sum = current.clone();
    let mut terms = 1usize;
    let mut averaged: Vec<f64>;
    let mut residual;
    loop {
        averaged = sum.iter().map(|s| s / terms as f64).collect();
        residual = invariance_residual_f64(table, &averaged);
        if residual < options.tol || terms > options.max_iter {
            break;
        }
        current = apply_p(&current);
        for (acc, v) in sum.iter_mut().zip(&current) {
            *acc += v;
        }
        terms += 1;
    }
    let iterations = terms - 1;

    // per-element invariance verification; fall back to the exact solver
    // when the averages have not reached the tolerance
    let converged = invariance_residual_f64(table, &averaged) < options.tol;
    if converged {
        Ok(HaarResult {
            weights: Measure::from_f64(&averaged),
            normalization: Normalization::FunctionalOne,
            method: HaarMethod::Cesaro,
            cesaro: Some(CesaroInfo {
                iterations,
                residual,
                converged: true,
                fell_back: false,
            }),
        })
    } else {
        let fallback = nullspace_haar(table, f)?;
        Ok(HaarResult {
            weights: fallback.weights,
            normalization: fallback.normalization,
            method: HaarMethod::Cesaro,
            cesaro: Some(CesaroInfo {
                iterations,
                residual,
                converged: false,
                fell_back: true,
            }),
        })
    }
}

// ---------------------------------------------------------------------------
// the equivalence report
// ---------------------------------------------------------------------------

/// The three equivalent conditions for a table carrying an invariant
/// mean: a Haar measure exists; ppt holds for every tested `f`; ppt holds
/// for some `f`. Computed independently and cross-checked.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub haar_exists: bool,
    pub haar: Option<HaarResult>,
    pub ppt_all: bool,
    pub tested_functions: usize,
    /// Tags of test functions on which ppt failed.
    pub ppt_failures: Vec<String>,
    /// Tag of the first test function on which ppt holds.
    pub ppt_some: Option<String>,
    /// All three conditions agree.
    pub consistent: bool,
}

/// Runs the equivalence suite: ppt over every indicator plus `samples`
/// seeded random positive functions, and the exact nullspace Haar solver.
pub fn equivalence_report(
    table: &ConvolutionTable,
    seed: u64,
    samples: usize,
) -> EquivalenceReport {
    let n = table.len();
    let mut tagged: Vec<(String, FunctionOnH)> = (0..n)
        .map(|x| {
            (
                format!("indicator{{{}}}", table.symbol(x)),
                FunctionOnH::indicator(n, x),
            )
        })
        .collect();
    for (i, f) in random_positive_functions(n, samples, seed)
        .into_iter()
        .enumerate()
    {
        tagged.push((format!("seeded#{i}"), f));
    }
    let fs: Vec<FunctionOnH> = tagged.iter().map(|(_, f)| f.clone()).collect();
    let verdicts = ppt_batch(table, &fs).expect("indicators and positive samples are admissible");
    let ppt_failures: Vec<String> = tagged
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| !v.holds())
        .map(|((tag, _), _)| tag.clone())
        .collect();
    let ppt_some = tagged
        .iter()
        .zip(&verdicts)
        .find(|(_, v)| v.holds())
        .map(|((tag, _), _)| tag.clone());
    let ppt_all = ppt_failures.is_empty();

    let f0 = FunctionOnH::indicator(n, ConvolutionTable::IDENTITY);
    let haar = fixed_point_haar(table, &f0, HaarMethod::Nullspace, CesaroOptions::default()).ok();
    let haar_exists = haar
        .as_ref()
        .map(|h| h.weights.is_positive() && !h.weights.is_zero())
        .unwrap_or(false);

    EquivalenceReport {
        consistent: haar_exists == ppt_all && haar_exists == ppt_some.is_some(),
        haar_exists,
        haar,
        ppt_all,
        tested_functions: tagged.len(),
        ppt_failures,
        ppt_some,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integrate;
    use crate::corpus;
    use crate::rational::{rat, rat_int};

    fn ind(n: usize, x: usize) -> FunctionOnH {
        FunctionOnH::indicator(n, x)
    }

    #[test]
    fn ppt_holds_on_z2_indicator() {
        let z2 = corpus::gen_group(&corpus::z(2));
        assert!(ppt_check(&z2, &ind(2, 1)).unwrap().holds());
    }

    #[test]
    fn ppt_fails_on_no_support_with_identity_indicator() {
        let t = corpus::no_support_table();
        let verdict = ppt_check(&t, &ind(2, 0)).unwrap();
        let PptVerdict::Fails { mu, nu } = verdict else {
            panic!("ppt should fail on the NoSupport table");
        };
        // δ_a∗f ≡ 0 while ‖δ_a‖ = 1, so (δ_a, 0) is the canonical pair
        assert_eq!(mu.weights(), &[rat_int(0), rat_int(1)]);
        assert!(nu.is_zero());
    }

    #[test]
    fn ppt_holds_on_s3c_constant_function() {
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let one = FunctionOnH::constant(3, Rational::one());
        assert!(ppt_check(&s3c, &one).unwrap().holds());
    }

    #[test]
    fn ppt_rejects_bad_test_functions() {
        let z2 = corpus::gen_group(&corpus::z(2));
        let zero = FunctionOnH::constant(2, Rational::zero());
        assert_eq!(ppt_check(&z2, &zero), Err(HaarError::FunctionZero));
        let negative = FunctionOnH::new(vec![rat_int(1), rat_int(-1)]);
        assert_eq!(ppt_check(&z2, &negative), Err(HaarError::FunctionNegative));
    }

    #[test]
    fn gamma_kernel_trivial_on_h2_indicator() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let report = gamma_well_defined(&h, &ind(2, 1)).unwrap();
        assert!(report.kernel_basis.is_empty());
        assert!(report.well_defined);
    }

    #[test]
    fn gamma_affirmative_on_group_constant() {
        let z3 = corpus::gen_group(&corpus::z(3));
        let one = FunctionOnH::constant(3, Rational::one());
        let report = gamma_well_defined(&z3, &one).unwrap();
        assert_eq!(report.kernel_basis.len(), 2);
        assert!(report.well_defined);
    }

    #[test]
    fn gamma_negative_on_no_support() {
        let t = corpus::no_support_table();
        let report = gamma_well_defined(&t, &ind(2, 0)).unwrap();
        assert!(!report.well_defined);
        let witness = report.witness.expect("kernel witness");
        assert_eq!(witness.weights(), &[rat_int(0), rat_int(1)]);
        assert_eq!(witness.total(), rat_int(1));
    }

    #[test]
    fn dominate_zero_and_self() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let f = ind(2, 1);
        let below = FunctionOnH::new(vec![rat_int(-1), rat_int(0)]);
        let mu = dominate(&h, &f, &below).unwrap();
        assert!(mu.is_zero());

        let mu = dominate(&h, &f, &f).unwrap();
        assert!(mu.total() <= rat_int(1), "δ_e is feasible with mass 1");
        assert!(f.le(&h.translate(&mu, &f)));
    }

    #[test]
    fn dominate_constant_on_h2() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let f = ind(2, 1);
        let one = FunctionOnH::constant(2, Rational::one());
        let mu = dominate(&h, &f, &one).unwrap();
        assert!(one.le(&h.translate(&mu, &f)));
    }

    #[test]
    fn dominate_reports_uncovered_point() {
        let t = corpus::no_support_table();
        let g = FunctionOnH::constant(2, Rational::one());
        let err = dominate(&t, &ind(2, 0), &g).unwrap_err();
        assert_eq!(
            err,
            HaarError::TranslateCoverage {
                element: "a".into()
            }
        );
    }

    #[test]
    fn k_is_a_singleton_on_z2_indicator() {
        let z2 = corpus::gen_group(&corpus::z(2));
        let k = build_k(&z2, &ind(2, 1)).unwrap();
        let KFeasibility::Point(w) = k.feasible().unwrap() else {
            panic!("K must be non-empty");
        };
        assert_eq!(w.weights(), &[rat_int(1), rat_int(1)]);
        assert!(k.contains(&w));
    }

    #[test]
    fn k_point_on_h2_matches_hand_solution() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let k = build_k(&h, &ind(2, 1)).unwrap();
        let KFeasibility::Point(w) = k.feasible().unwrap() else {
            panic!("K must be non-empty");
        };
        // constraints w_a = 1 and w_e + w_a/2 = 1 pin (1/2, 1)
        assert_eq!(w.weights(), &[rat(1, 2), rat_int(1)]);
    }

    #[test]
    fn k_for_constant_function_is_the_simplex() {
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let one = FunctionOnH::constant(3, Rational::one());
        let k = build_k(&s3c, &one).unwrap();
        let KFeasibility::Point(w) = k.feasible().unwrap() else {
            panic!("K must be non-empty");
        };
        assert!(w.is_positive());
        assert_eq!(w.total(), rat_int(1));
        assert!(k.contains(&Measure::new(vec![rat(1, 3); 3])));
        assert!(!k.contains(&Measure::new(vec![rat(1, 2); 3])));
    }

    #[test]
    fn action_matrices_match_transcription() {
        let z2 = corpus::gen_group(&corpus::z(2));
        let a_e = action_matrix(&z2, 0);
        let a_a = action_matrix(&z2, 1);
        assert_eq!(a_e.entry(0, 0), &rat_int(1));
        assert_eq!(a_e.entry(0, 1), &rat_int(0));
        assert_eq!(a_a.entry(0, 0), &rat_int(0));
        assert_eq!(a_a.entry(0, 1), &rat_int(1));
        assert_eq!(a_a.entry(1, 0), &rat_int(1));
        assert_eq!(a_a.entry(1, 1), &rat_int(0));

        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let a = action_matrix(&h, 1);
        // columns are δ_a∗δ_e = δ_a and δ_a∗δ_a = (1/2, 1/2)
        assert_eq!(a.entry(0, 0), &rat_int(0));
        assert_eq!(a.entry(0, 1), &rat(1, 2));
        assert_eq!(a.entry(1, 0), &rat_int(1));
        assert_eq!(a.entry(1, 1), &rat(1, 2));
    }

    #[test]
    fn adjoint_identity_for_action_matrices() {
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let w = Measure::new(vec![rat(1, 3), rat(2, 5), rat(7, 2)]);
        let g = FunctionOnH::new(vec![rat_int(2), rat(1, 7), rat_int(0)]);
        for x in 0..3 {
            let a = action_matrix(&s3c, x);
            let lhs = integrate(&Measure::new(a.apply(w.weights())), &g);
            let rhs = integrate(&w, &s3c.translate_point(x, &g));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn haar_methods_agree_on_h2() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let f = ind(2, 0);
        let direct =
            fixed_point_haar(&h, &f, HaarMethod::Direct, CesaroOptions::default()).unwrap();
        let null =
            fixed_point_haar(&h, &f, HaarMethod::Nullspace, CesaroOptions::default()).unwrap();
        assert_eq!(direct.weights.weights(), &[rat_int(1), rat_int(2)]);
        assert_eq!(null.weights.weights(), &[rat_int(1), rat_int(2)]);

        let cesaro =
            fixed_point_haar(&h, &f, HaarMethod::Cesaro, CesaroOptions::default()).unwrap();
        let info = cesaro.cesaro.unwrap();
        assert!(info.converged && !info.fell_back);
        let approx = cesaro.identity_normalized().unwrap();
        for (got, want) in approx.to_f64().iter().zip([1.0, 2.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn haar_on_s3c_is_class_sizes() {
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let f = ind(3, 0);
        let null =
            fixed_point_haar(&s3c, &f, HaarMethod::Nullspace, CesaroOptions::default()).unwrap();
        assert_eq!(
            null.weights.weights(),
            &[rat_int(1), rat_int(3), rat_int(2)]
        );
        assert_eq!(null.normalization, Normalization::IdentityOne);
    }

    #[test]
    fn cesaro_with_identity_indicator_starts_at_the_fixed_point() {
        // with f = indicator{e} the support axiom makes K a singleton, so
        // the feasible point is already Haar and the loop exits at once
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let f = ind(3, 0);
        let result =
            fixed_point_haar(&s3c, &f, HaarMethod::Cesaro, CesaroOptions::default()).unwrap();
        let info = result.cesaro.unwrap();
        assert!(info.converged);
        assert_eq!(info.iterations, 0);
    }

    #[test]
    fn cesaro_running_average_stalls_and_falls_back_on_flat_k() {
        // f = constant 1 makes K the whole simplex; from a vertex the
        // running average approaches the fixed point only like 1/N, so a
        // small budget cannot reach 1e−12 and the exact solver answers
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let one = FunctionOnH::constant(3, Rational::one());
        let opts = CesaroOptions {
            tol: 1e-12,
            max_iter: 2_000,
        };
        let result = fixed_point_haar(&s3c, &one, HaarMethod::Cesaro, opts).unwrap();
        let info = result.cesaro.unwrap();
        assert!(!info.converged && info.fell_back);
        assert!(info.residual > 1e-12);
        assert_eq!(
            result.weights.weights(),
            &[rat_int(1), rat_int(3), rat_int(2)]
        );

        // a loose tolerance is reachable and reports genuine iteration
        let opts = CesaroOptions {
            tol: 1e-3,
            max_iter: 100_000,
        };
        let result = fixed_point_haar(&s3c, &one, HaarMethod::Cesaro, opts).unwrap();
        let info = result.cesaro.unwrap();
        assert!(info.converged && !info.fell_back);
        assert!(info.iterations > 0);
    }

    #[test]
    fn invariance_check_exact_and_residual() {
        let h = corpus::gen_order2(rat(1, 2)).unwrap();
        let good = check_left_invariance(&h, &Measure::new(vec![rat_int(1), rat_int(2)]));
        assert!(good.invariant);

        let bad = check_left_invariance(&h, &Measure::new(vec![rat_int(1), rat_int(1)]));
        assert!(!bad.invariant);
        assert_eq!(bad.worst, rat(1, 2));
        assert_eq!(bad.worst_at, Some((1, 0)));
    }

    #[test]
    fn k_infeasible_on_no_support_identity_indicator() {
        let t = corpus::no_support_table();
        let err = fixed_point_haar(
            &t,
            &ind(2, 0),
            HaarMethod::Nullspace,
            CesaroOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, HaarError::KInfeasible { .. }));
    }

    #[test]
    fn equivalence_report_consistent_on_fixtures() {
        let s3c = corpus::gen_conjugacy(&corpus::s3());
        let report = equivalence_report(&s3c, 0, 5);
        assert!(report.haar_exists && report.ppt_all && report.ppt_some.is_some());
        assert!(report.consistent);
        assert_eq!(report.tested_functions, 8);

        let t = corpus::no_support_table();
        let report = equivalence_report(&t, 0, 5);
        assert!(!report.haar_exists);
        assert!(!report.ppt_all);
        assert!(report.ppt_failures.iter().any(|tag| tag == "indicator{e}"));
    }
}
