//! Exact rational linear programming.
//!
//! A dense two-phase simplex over `BigRational` with Bland's anti-cycling
//! pivot rule. Problem sizes in this crate are tiny (at most a few dozen
//! variables), so the solver trades speed for decidability: every verdict
//! comes with a certificate — optimal dual, Farkas vector, or improving
//! ray — and [`LinearProgram::verify`] re-checks each certificate exactly
//! against the instance before `solve` returns it.
//!
//! Certificate conventions (`a_i` the i-th constraint row, `b_i` its
//! right-hand side):
//!
//! * optimal dual `y`: for a maximization, `y_i ≥ 0` on `≤` rows,
//!   `y_i ≤ 0` on `≥` rows, free on `=` rows; `Σ_i y_i a_ij ≥ c_j` for
//!   sign-constrained variables with equality for free ones; and
//!   `yᵀb` equals the optimal value (signs mirror for minimization);
//! * Farkas certificate `y`: same row-sign conditions, `Σ_i y_i a_ij ≥ 0`
//!   per sign-constrained variable (`= 0` for free), and `yᵀb < 0` — any
//!   feasible point would give `0 ≤ Σ_j (Σ_i y_i a_ij) x_j ≤ yᵀb < 0`;
//! * unbounded: a feasible point plus a recession direction `r` that
//!   respects every row relation homogeneously and strictly improves the
//!   objective.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// An exact LP instance. Variables are `x_j ≥ 0` unless flagged free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(direction: Direction, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            direction,
            objective,
            constraints: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.free.len() != n {
            return Err(LpError::DimensionMismatch);
        }
        if self.constraints.iter().any(|c| c.coeffs.len() != n) {
            return Err(LpError::DimensionMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint/objective dimensions disagree")]
    DimensionMismatch,
}

/// Solver outcome with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate has wrong dimension")]
    Dimension,
    #[error("point violates constraint {0}")]
    PointInfeasible(usize),
    #[error("point has negative sign-constrained variable {0}")]
    PointNegative(usize),
    #[error("stated value differs from objective at the point")]
    ValueMismatch,
    #[error("dual multiplier {0} has the wrong sign")]
    DualSign(usize),
    #[error("dual constraint for variable {0} violated")]
    DualInfeasible(usize),
    #[error("strong duality gap")]
    DualityGap,
    #[error("complementary slackness fails on constraint {0}")]
    SlacknessRow(usize),
    #[error("complementary slackness fails on variable {0}")]
    SlacknessVar(usize),
    #[error("Farkas multiplier {0} has the wrong sign")]
    FarkasSign(usize),
    #[error("Farkas combination has the wrong sign on variable {0}")]
    FarkasVar(usize),
    #[error("Farkas combination of right-hand sides is not negative")]
    FarkasRhs,
    #[error("ray escapes constraint {0}")]
    RayEscapes(usize),
    #[error("ray drives sign-constrained variable {0} negative")]
    RayNegative(usize),
    #[error("ray does not improve the objective")]
    RayNotImproving,
}

// ---------------------------------------------------------------------------
// simplex internals
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum ColKind {
    /// Structural column: original variable index and its sign in the split.
    Var(usize, i8),
    /// Slack (+1) or surplus (−1) of a row.
    Slack(i8),
}

struct Tableau {
    /// m × (nstruct + m); the trailing m marker columns start as the
    /// identity and therefore always hold the current basis inverse.
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    nstruct: usize,
}

enum SimplexEnd {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for value in self.rows[row].iter_mut() {
            *value /= &pivot;
        }
        self.rhs[row] /= &pivot;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.rows[r].len() {
                if !self.rows[row][c].is_zero() {
                    let delta = &factor * &self.rows[row][c];
                    self.rows[r][c] -= delta;
                }
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, costs: &[Rational], col: usize) -> Rational {
        let mut r = costs[col].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if !cb.is_zero() && !row[col].is_zero() {
                r -= cb * &row[col];
            }
        }
        r
    }

    /// Bland's rule: entering column is the lowest-index eligible column
    /// with positive reduced cost; the leaving row breaks ratio ties by
    /// the lowest basic column index. Marker columns are never eligible.
    fn run(&mut self, costs: &[Rational]) -> SimplexEnd {
        loop {
            let mut entering = None;
            for j in 0..self.nstruct {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(costs, j).is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return SimplexEnd::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.num_rows() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][col];
                let better = match &leaving {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                None => return SimplexEnd::Unbounded { entering: col },
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    /// Dual vector `c_B B⁻¹` read off the marker block.
    fn duals(&self, costs: &[Rational]) -> Vec<Rational> {
        let m = self.num_rows();
        (0..m)
            .map(|i| {
                let mut y = Rational::zero();
                for (k, row) in self.rows.iter().enumerate() {
                    let cb = &costs[self.basis[k]];
                    if !cb.is_zero() && !row[self.nstruct + i].is_zero() {
                        y += cb * &row[self.nstruct + i];
                    }
                }
                y
            })
            .collect()
    }

    /// Value of a structural column in the current basic solution.
    fn column_value(&self, col: usize) -> Rational {
        match self.basis.iter().position(|&b| b == col) {
            Some(row) => self.rhs[row].clone(),
            None => Rational::zero(),
        }
    }
}

impl LinearProgram {
    /// Solves the instance with a deterministic exact simplex. The
    /// returned certificate has been re-verified against `self`.
    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        self.check_dimensions()?;
        let outcome = self.solve_inner();
        // Certificates are the product; a failure here is a solver bug.
        self.verify(&outcome)
            .unwrap_or_else(|e| panic!("solver produced an invalid certificate: {e}"));
        Ok(outcome)
    }

    fn solve_inner(&self) -> LpOutcome {
        let n = self.num_vars();
        let m = self.constraints.len();
        let maximize = self.direction == Direction::Maximize;

        // structural columns: split free variables, then slack/surplus
        let mut kinds = Vec::new();
        let mut var_cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in 0..n {
            var_cols[j].push(kinds.len());
            kinds.push(ColKind::Var(j, 1));
            if self.free[j] {
                var_cols[j].push(kinds.len());
                kinds.push(ColKind::Var(j, -1));
            }
        }
        let mut slack_col_of_row = vec![None; m];
        for (i, con) in self.constraints.iter().enumerate() {
            let sign = match con.relation {
                Relation::Le => 1i8,
                Relation::Ge => -1i8,
                Relation::Eq => continue,
            };
            slack_col_of_row[i] = Some(kinds.len());
            kinds.push(ColKind::Slack(sign));
        }
        let nstruct = kinds.len();

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut flipped = vec![false; m];
        for (i, con) in self.constraints.iter().enumerate() {
            let mut row = Vec::with_capacity(nstruct + m);
            for kind in &kinds {
                row.push(match *kind {
                    ColKind::Var(j, s) => {
                        if s > 0 {
                            con.coeffs[j].clone()
                        } else {
                            -con.coeffs[j].clone()
                        }
                    }
                    ColKind::Slack(_) => Rational::zero(),
                });
            }
            if let Some(col) = slack_col_of_row[i] {
                let ColKind::Slack(sign) = kinds[col] else {
                    unreachable!()
                };
                row[col] = Rational::from_integer(i64::from(sign).into());
            }
            let mut b = con.rhs.clone();
            if b.is_negative() {
                for value in row.iter_mut() {
                    *value = -value.clone();
                }
                b = -b;
                flipped[i] = true;
            }
            for k in 0..m {
                row.push(if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            rows.push(row);
            rhs.push(b);
        }

        let mut tableau = Tableau {
            rows,
            rhs,
            basis: (nstruct..nstruct + m).collect(),
            nstruct,
        };

        // phase 1: maximize −Σ artificials
        let mut phase1_costs = vec![Rational::zero(); nstruct + m];
        for c in phase1_costs.iter_mut().skip(nstruct) {
            *c = -Rational::one();
        }
        match tableau.run(&phase1_costs) {
            SimplexEnd::Optimal => {}
            SimplexEnd::Unbounded { .. } => unreachable!("phase 1 is bounded by zero"),
        }
        let infeasibility: Rational = tableau
            .basis
            .iter()
            .zip(&tableau.rhs)
            .filter(|(&b, _)| b >= nstruct)
            .map(|(_, v)| v.clone())
            .sum();
        if !infeasibility.is_zero() {
            let y_std = tableau.duals(&phase1_costs);
            let farkas = y_std
                .into_iter()
                .zip(&flipped)
                .map(|(y, &f)| if f { -y } else { y })
                .collect();
            return LpOutcome::Infeasible { farkas };
        }

        // drive basic artificials out on zero rows; rows that are zero on
        // every structural column are redundant and keep their marker
        // basic at value 0, which phase 2 never disturbs.
        for i in 0..m {
            if tableau.basis[i] >= nstruct {
                if let Some(col) = (0..nstruct).find(|&j| !tableau.rows[i][j].is_zero()) {
                    tableau.pivot(i, col);
                }
            }
        }

        // phase 2
        let mut costs = vec![Rational::zero(); nstruct + m];
        for (col, kind) in kinds.iter().enumerate() {
            if let ColKind::Var(j, s) = *kind {
                let c = if maximize {
                    self.objective[j].clone()
                } else {
                    -self.objective[j].clone()
                };
                costs[col] = if s > 0 { c } else { -c };
            }
        }
        let end = tableau.run(&costs);

        let point_of = |tableau: &Tableau| -> Vec<Rational> {
            (0..n)
                .map(|j| {
                    var_cols[j]
                        .iter()
                        .map(|&col| {
                            let v = tableau.column_value(col);
                            match kinds[col] {
                                ColKind::Var(_, s) if s < 0 => -v,
                                _ => v,
                            }
                        })
                        .sum()
                })
                .collect()
        };

        match end {
            SimplexEnd::Optimal => {
                let point = point_of(&tableau);
                let value: Rational = self.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
                let y_std = tableau.duals(&costs);
                let dual = y_std
                    .into_iter()
                    .zip(&flipped)
                    .map(|(y, &f)| {
                        let y_max = if f { -y } else { y };
                        if maximize {
                            y_max
                        } else {
                            -y_max
                        }
                    })
                    .collect();
                LpOutcome::Optimal { point, value, dual }
            }
            SimplexEnd::Unbounded { entering } => {
                let point = point_of(&tableau);
                let mut ray_std = vec![Rational::zero(); nstruct];
                ray_std[entering] = Rational::one();
                for i in 0..m {
                    if tableau.basis[i] < nstruct {
                        ray_std[tableau.basis[i]] = -tableau.rows[i][entering].clone();
                    }
                }
                let ray = (0..n)
                    .map(|j| {
                        var_cols[j]
                            .iter()
                            .map(|&col| match kinds[col] {
                                ColKind::Var(_, s) if s < 0 => -ray_std[col].clone(),
                                _ => ray_std[col].clone(),
                            })
                            .sum()
                    })
                    .collect();
                LpOutcome::Unbounded { point, ray }
            }
        }
    }

    /// Exact certificate check; see the module docs for the conventions.
    pub fn verify(&self, outcome: &LpOutcome) -> Result<(), CertificateError> {
        let n = self.num_vars();
        let maximize = self.direction == Direction::Maximize;
        match outcome {
            LpOutcome::Optimal { point, value, dual } => {
                self.check_point(point)?;
                let attained: Rational = self.objective.iter().zip(point).map(|(c, x)| c * x).sum();
                if attained != *value {
                    return Err(CertificateError::ValueMismatch);
                }
                if dual.len() != self.constraints.len() {
                    return Err(CertificateError::Dimension);
                }
                for (i, (con, y)) in self.constraints.iter().zip(dual).enumerate() {
                    let ok = match (con.relation, maximize) {
                        (Relation::Eq, _) => true,
                        (Relation::Le, true) | (Relation::Ge, false) => !y.is_negative(),
                        (Relation::Ge, true) | (Relation::Le, false) => !y.is_positive(),
                    };
                    if !ok {
                        return Err(CertificateError::DualSign(i));
                    }
                }
                // reduced costs: s_j = Σ_i y_i a_ij − c_j, with the sign
                // depending on direction; zero on free variables.
                for j in 0..n {
                    let combo: Rational = self
                        .constraints
                        .iter()
                        .zip(dual)
                        .map(|(con, y)| y * &con.coeffs[j])
                        .sum();
                    let slack = &combo - &self.objective[j];
                    let ok = if self.free[j] {
                        slack.is_zero()
                    } else if maximize {
                        !slack.is_negative()
                    } else {
                        !slack.is_positive()
                    };
                    if !ok {
                        return Err(CertificateError::DualInfeasible(j));
                    }
                    if !self.free[j] && !point[j].is_zero() && !slack.is_zero() {
                        return Err(CertificateError::SlacknessVar(j));
                    }
                }
                let dual_value: Rational = self
                    .constraints
                    .iter()
                    .zip(dual)
                    .map(|(con, y)| y * &con.rhs)
                    .sum();
                if dual_value != *value {
                    return Err(CertificateError::DualityGap);
                }
                for (i, (con, y)) in self.constraints.iter().zip(dual).enumerate() {
                    let activity: Rational = con.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
                    if !y.is_zero() && activity != con.rhs {
                        return Err(CertificateError::SlacknessRow(i));
                    }
                }
                Ok(())
            }
            LpOutcome::Infeasible { farkas } => {
                if farkas.len() != self.constraints.len() {
                    return Err(CertificateError::Dimension);
                }
                for (i, (con, y)) in self.constraints.iter().zip(farkas).enumerate() {
                    let ok = match con.relation {
                        Relation::Le => !y.is_negative(),
                        Relation::Ge => !y.is_positive(),
                        Relation::Eq => true,
                    };
                    if !ok {
                        return Err(CertificateError::FarkasSign(i));
                    }
                }
                for j in 0..n {
                    let combo: Rational = self
                        .constraints
                        .iter()
                        .zip(farkas)
                        .map(|(con, y)| y * &con.coeffs[j])
                        .sum();
                    let ok = if self.free[j] {
                        combo.is_zero()
                    } else {
                        !combo.is_negative()
                    };
                    if !ok {
                        return Err(CertificateError::FarkasVar(j));
                    }
                }
                let rhs_combo: Rational = self
                    .constraints
                    .iter()
                    .zip(farkas)
                    .map(|(con, y)| y * &con.rhs)
                    .sum();
                if !rhs_combo.is_negative() {
                    return Err(CertificateError::FarkasRhs);
                }
                Ok(())
            }
            LpOutcome::Unbounded { point, ray } => {
                self.check_point(point)?;
                if ray.len() != n {
                    return Err(CertificateError::Dimension);
                }
                for (j, r) in ray.iter().enumerate() {
                    if !self.free[j] && r.is_negative() {
                        return Err(CertificateError::RayNegative(j));
                    }
                }
                for (i, con) in self.constraints.iter().enumerate() {
                    let drift: Rational = con.coeffs.iter().zip(ray).map(|(a, r)| a * r).sum();
                    let ok = match con.relation {
                        Relation::Le => !drift.is_positive(),
                        Relation::Ge => !drift.is_negative(),
                        Relation::Eq => drift.is_zero(),
                    };
                    if !ok {
                        return Err(CertificateError::RayEscapes(i));
                    }
                }
                let rate: Rational = self.objective.iter().zip(ray).map(|(c, r)| c * r).sum();
                let improving = if maximize {
                    rate.is_positive()
                } else {
                    rate.is_negative()
                };
                if !improving {
                    return Err(CertificateError::RayNotImproving);
                }
                Ok(())
            }
        }
    }

    fn check_point(&self, point: &[Rational]) -> Result<(), CertificateError> {
        if point.len() != self.num_vars() {
            return Err(CertificateError::Dimension);
        }
        for (j, x) in point.iter().enumerate() {
            if !self.free[j] && x.is_negative() {
                return Err(CertificateError::PointNegative(j));
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            let activity: Rational = con.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
            let ok = match con.relation {
                Relation::Le => activity <= con.rhs,
                Relation::Eq => activity == con.rhs,
                Relation::Ge => activity >= con.rhs,
            };
            if !ok {
                return Err(CertificateError::PointInfeasible(i));
            }
        }
        Ok(())
    }
}

/// Feasibility of a constraint system with no objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

/// Phase-1 feasibility: a point satisfying the system, or an exact Farkas
/// certificate that none exists.
pub fn feasible_point(
    num_vars: usize,
    constraints: Vec<Constraint>,
    free: Vec<bool>,
) -> Result<Feasibility, LpError> {
    let mut lp = LinearProgram::new(Direction::Maximize, vec![Rational::zero(); num_vars]);
    lp.constraints = constraints;
    lp.free = free;
    match lp.solve()? {
        LpOutcome::Optimal { point, .. } => Ok(Feasibility::Feasible(point)),
        LpOutcome::Infeasible { farkas } => Ok(Feasibility::Infeasible(farkas)),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Basis of the exact kernel `{v : Mv = 0}` via Gauss–Jordan elimination.
/// The returned vectors are linearly independent and span the kernel.
pub fn nullspace(num_cols: usize, rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    assert!(rows.iter().all(|r| r.len() == num_cols));
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..num_cols {
        let Some(pivot_row) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for value in m[rank].iter_mut() {
            *value /= &pivot;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..num_cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for col in 0..num_cols {
        if pivot_cols.contains(&col) {
            continue;
        }
        let mut v = vec![Rational::zero(); num_cols];
        v[col] = Rational::one();
        for (row, &p) in pivot_cols.iter().enumerate() {
            v[p] = -m[row][col].clone();
        }
        basis.push(v);
    }
    basis
}
