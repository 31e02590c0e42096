//! Structure-constant tables and hypergroup axiom validation.
//!
//! A candidate finite hypergroup is a [`ConvolutionTable`]: an ordered
//! element list with the identity at index 0, an involution permutation,
//! and a rational tensor `c[x][y][z]` read as the mass `(δ_x ∗ δ_y)({z})`.
//! [`validate_table`] checks the defining axioms exactly and reports a
//! minimal witness for each failure; a [`FiniteHypergroup`] can only be
//! obtained from a table on which every check passes.
//!
//! The two continuity axioms of the locally compact definition are vacuous
//! for a finite discrete carrier; the report records them as automatic so
//! that coverage of the definition stays honest without inventing a check.

use std::fmt;
use std::ops::Deref;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::Measure;
use crate::rational::{format_rational, Rational};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Structural malformation of a table. Distinct from axiom failure: a
/// structurally broken input cannot even be scored against the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table needs at least one element")]
    Empty,
    #[error("duplicate element symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("involution has {got} entries, expected {expected}")]
    InvolutionSize { expected: usize, got: usize },
    #[error("involution is not a permutation of the element indices")]
    InvolutionNotPermutation,
    #[error("involution is not self-inverse at index {0}")]
    InvolutionNotInvolutive(usize),
    #[error("convolution tensor has {got} entries, expected {expected}")]
    TensorSize { expected: usize, got: usize },
    #[error("unknown element symbol `{0}`")]
    UnknownElement(String),
}

/// A structure-constant table; the raw, not-yet-trusted form of a finite
/// hypergroup. Index 0 is the designated identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionTable {
    name: String,
    elements: Vec<String>,
    involution: Vec<usize>,
    /// Row-major `x * n² + y * n + z`.
    conv: Vec<Rational>,
}

impl ConvolutionTable {
    /// Builds a table from its parts, checking structure only (element
    /// symbols distinct, involution a self-inverse permutation, tensor
    /// complete). Whether the values satisfy the hypergroup axioms is
    /// [`validate_table`]'s job.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        involution: Vec<usize>,
        conv: Vec<Rational>,
    ) -> Result<Self, TableError> {
        let n = elements.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        for (i, sym) in elements.iter().enumerate() {
            if elements[..i].contains(sym) {
                return Err(TableError::DuplicateSymbol(sym.clone()));
            }
        }
        if involution.len() != n {
            return Err(TableError::InvolutionSize {
                expected: n,
                got: involution.len(),
            });
        }
        let mut seen = vec![false; n];
        for &img in &involution {
            if img >= n || seen[img] {
                return Err(TableError::InvolutionNotPermutation);
            }
            seen[img] = true;
        }
        for x in 0..n {
            if involution[involution[x]] != x {
                return Err(TableError::InvolutionNotInvolutive(x));
            }
        }
        if conv.len() != n * n * n {
            return Err(TableError::TensorSize {
                expected: n * n * n,
                got: conv.len(),
            });
        }
        Ok(Self {
            name: name.into(),
            elements,
            involution,
            conv,
        })
    }

    /// Builds the tensor from a closure over index triples.
    pub fn from_fn(
        name: impl Into<String>,
        elements: Vec<String>,
        involution: Vec<usize>,
        mut entry: impl FnMut(usize, usize, usize) -> Rational,
    ) -> Result<Self, TableError> {
        let n = elements.len();
        let mut conv = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    conv.push(entry(x, y, z));
                }
            }
        }
        Self::new(name, elements, involution, conv)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn symbol(&self, x: usize) -> &str {
        &self.elements[x]
    }

    /// Index of the identity element.
    pub const IDENTITY: usize = 0;

    pub fn element_index(&self, symbol: &str) -> Result<usize, TableError> {
        self.elements
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| TableError::UnknownElement(symbol.to_owned()))
    }

    /// The involution image `x̌` of an element index.
    pub fn involute(&self, x: usize) -> usize {
        self.involution[x]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    /// Structure constant `c[x][y][z] = (δ_x ∗ δ_y)({z})`.
    #[inline]
    pub fn conv(&self, x: usize, y: usize, z: usize) -> &Rational {
        let n = self.elements.len();
        &self.conv[(x * n + y) * n + z]
    }

    /// The distribution row `z ↦ c[x][y][z]`.
    #[inline]
    pub fn conv_row(&self, x: usize, y: usize) -> &[Rational] {
        let n = self.elements.len();
        let base = (x * n + y) * n;
        &self.conv[base..base + n]
    }

    /// The probability measure `δ_x ∗ δ_y`.
    pub fn convolve_points(&self, x: usize, y: usize) -> Measure {
        Measure::new(self.conv_row(x, y).to_vec())
    }

    /// As [`convolve_points`](Self::convolve_points), resolving element
    /// symbols first.
    pub fn convolve_symbols(&self, x: &str, y: &str) -> Result<Measure, TableError> {
        Ok(self.convolve_points(self.element_index(x)?, self.element_index(y)?))
    }

    /// `supp(δ_x ∗ δ_y) = {z : c[x][y][z] > 0}`.
    pub fn support(&self, x: usize, y: usize) -> Vec<usize> {
        self.conv_row(x, y)
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(z, _)| z)
            .collect()
    }

    pub fn support_symbols(&self, x: &str, y: &str) -> Result<Vec<String>, TableError> {
        let support = self.support(self.element_index(x)?, self.element_index(y)?);
        Ok(support.iter().map(|&z| self.elements[z].clone()).collect())
    }
}

/// A table on which every axiom check passed. Dereferences to the
/// underlying [`ConvolutionTable`]; immutable, so freely shareable across
/// threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHypergroup(ConvolutionTable);

impl FiniteHypergroup {
    /// Validates and wraps a table; the failed report comes back otherwise.
    pub fn new(table: ConvolutionTable) -> Result<Self, Box<ValidationReport>> {
        let report = validate_table(&table);
        if report.is_valid() {
            Ok(Self(table))
        } else {
            Err(Box::new(report))
        }
    }

    pub fn table(&self) -> &ConvolutionTable {
        &self.0
    }

    pub fn into_table(self) -> ConvolutionTable {
        self.0
    }
}

impl Deref for FiniteHypergroup {
    type Target = ConvolutionTable;

    fn deref(&self) -> &ConvolutionTable {
        &self.0
    }
}

impl AsRef<ConvolutionTable> for FiniteHypergroup {
    fn as_ref(&self) -> &ConvolutionTable {
        &self.0
    }
}

/// The axioms scored by [`validate_table`], in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// (A) associativity of point convolutions.
    Associativity,
    /// (B) every row is a probability measure.
    ProbabilityRows,
    /// (C) index 0 is a two-sided identity.
    Identity,
    /// No other index acts as a two-sided identity.
    IdentityUniqueness,
    /// (D) the involution reverses convolution: `c[x][y][z] = c[y̌][x̌][ž]`.
    InvolutionAntihom,
    /// (E) `e ∈ supp(δ_x ∗ δ_y)` exactly when `y = x̌`.
    Support,
    /// Continuity of convolution; automatic on a finite discrete carrier.
    ConvolutionContinuity,
    /// Continuity of the support map; automatic on a finite discrete carrier.
    SupportContinuity,
}

impl Axiom {
    pub fn label(&self) -> &'static str {
        match self {
            Axiom::Associativity => "(A) associativity",
            Axiom::ProbabilityRows => "(B) probability rows",
            Axiom::Identity => "(C) identity",
            Axiom::IdentityUniqueness => "(C') identity uniqueness",
            Axiom::InvolutionAntihom => "(D) involution anti-homomorphism",
            Axiom::Support => "(E) support",
            Axiom::ConvolutionContinuity => "(3) convolution continuity",
            Axiom::SupportContinuity => "(4) support-map continuity",
        }
    }
}

/// Minimal counterexample for a failed axiom: the first offending index
/// tuple in scan order together with the two values that should agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub symbols: Vec<String>,
    pub left: Rational,
    pub right: Rational,
    pub note: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at ({}): {} != {} ({})",
            self.symbols.join(","),
            format_rational(&self.left),
            format_rational(&self.right),
            self.note
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(Box<Witness>),
    /// Vacuously true for finite discrete spaces; recorded, not tested.
    Automatic,
}

impl CheckStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, CheckStatus::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub status: CheckStatus,
}

/// Outcome of [`validate_table`]: one entry per axiom, valid iff all pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    table_name: String,
    entries: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn table_name(&self) -> &str {
        &self.table_name
    }

    pub fn entries(&self) -> &[AxiomCheck] {
        &self.entries
    }

    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|e| e.status.passed())
    }

    pub fn check(&self, axiom: Axiom) -> &CheckStatus {
        &self
            .entries
            .iter()
            .find(|e| e.axiom == axiom)
            .expect("all axioms present in report")
            .status
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Axiom, &Witness)> {
        self.entries.iter().filter_map(|e| match &e.status {
            CheckStatus::Fail(w) => Some((&e.axiom, w.as_ref())),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.table_name,
            if self.is_valid() { "valid" } else { "invalid" }
        )?;
        for entry in &self.entries {
            match &entry.status {
                CheckStatus::Pass => writeln!(f, "  {}: pass", entry.axiom.label())?,
                CheckStatus::Automatic => {
                    writeln!(f, "  {}: automatic (finite discrete)", entry.axiom.label())?
                }
                CheckStatus::Fail(w) => writeln!(f, "  {}: fail {}", entry.axiom.label(), w)?,
            }
        }
        Ok(())
    }
}

fn witness(
    table: &ConvolutionTable,
    indices: Vec<usize>,
    left: Rational,
    right: Rational,
    note: &str,
) -> Witness {
    let symbols = indices
        .iter()
        .map(|&i| table.symbol(i).to_owned())
        .collect();
    Witness {
        indices,
        symbols,
        left,
        right,
        note: note.to_owned(),
    }
}

/// Scans one outer index of the associativity check. Returns the first
/// (lexicographically smallest) violating `(x,y,z,v)` with `x` fixed.
fn associativity_scan_x(table: &ConvolutionTable, x: usize) -> Option<Witness> {
    let n = table.len();
    let mut left = vec![Rational::zero(); n];
    let mut right = vec![Rational::zero(); n];
    for y in 0..n {
        let xy = table.conv_row(x, y);
        for z in 0..n {
            for value in left.iter_mut().chain(right.iter_mut()) {
                value.set_zero();
            }
            // (δ_x ∗ δ_y) ∗ δ_z and δ_x ∗ (δ_y ∗ δ_z), expanded over the
            // intermediate point w.
            for w in 0..n {
                if !xy[w].is_zero() {
                    for (v, acc) in left.iter_mut().enumerate() {
                        *acc += &xy[w] * table.conv(w, z, v);
                    }
                }
                let yzw = table.conv(y, z, w);
                if !yzw.is_zero() {
                    for (v, acc) in right.iter_mut().enumerate() {
                        *acc += yzw * table.conv(x, w, v);
                    }
                }
            }
            for v in 0..n {
                if left[v] != right[v] {
                    return Some(witness(
                        table,
                        vec![x, y, z, v],
                        left[v].clone(),
                        right[v].clone(),
                        "(x*y)*z and x*(y*z) assign different mass to v",
                    ));
                }
            }
        }
    }
    None
}

/// First violation of associativity `(δ_x∗δ_y)∗δ_z = δ_x∗(δ_y∗δ_z)` in
/// lexicographic `(x,y,z,v)` order, or `None` when the axiom holds. With
/// the `parallel` feature the outer index is scanned on the rayon pool;
/// the reported witness is identical either way.
pub fn associativity_witness(table: &ConvolutionTable) -> Option<Witness> {
    #[cfg(feature = "parallel")]
    {
        (0..table.len())
            .into_par_iter()
            .filter_map(|x| associativity_scan_x(table, x))
            .min_by_key(|w| w.indices.clone())
    }
    #[cfg(not(feature = "parallel"))]
    {
        associativity_witness_seq(table)
    }
}

/// Always-sequential associativity scan; same result as
/// [`associativity_witness`].
pub fn associativity_witness_seq(table: &ConvolutionTable) -> Option<Witness> {
    (0..table.len()).find_map(|x| associativity_scan_x(table, x))
}

fn probability_rows_witness(table: &ConvolutionTable) -> Option<Witness> {
    let n = table.len();
    for x in 0..n {
        for y in 0..n {
            let row = table.conv_row(x, y);
            for (z, value) in row.iter().enumerate() {
                if value.is_negative() {
                    return Some(witness(
                        table,
                        vec![x, y, z],
                        value.clone(),
                        Rational::zero(),
                        "negative mass",
                    ));
                }
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Some(witness(
                    table,
                    vec![x, y],
                    total,
                    Rational::one(),
                    "row mass differs from 1",
                ));
            }
        }
    }
    None
}

fn identity_witness(table: &ConvolutionTable) -> Option<Witness> {
    identity_violation_at(table, ConvolutionTable::IDENTITY)
}

/// First violation of "index `i` is a two-sided identity", if any.
fn identity_violation_at(table: &ConvolutionTable, i: usize) -> Option<Witness> {
    let n = table.len();
    for y in 0..n {
        for z in 0..n {
            let expected = if y == z {
                Rational::one()
            } else {
                Rational::zero()
            };
            let got = table.conv(i, y, z);
            if *got != expected {
                return Some(witness(
                    table,
                    vec![i, y, z],
                    got.clone(),
                    expected,
                    "left identity row",
                ));
            }
        }
    }
    for x in 0..n {
        for z in 0..n {
            let expected = if x == z {
                Rational::one()
            } else {
                Rational::zero()
            };
            let got = table.conv(x, i, z);
            if *got != expected {
                return Some(witness(
                    table,
                    vec![x, i, z],
                    got.clone(),
                    expected,
                    "right identity row",
                ));
            }
        }
    }
    None
}

fn identity_uniqueness_witness(table: &ConvolutionTable) -> Option<Witness> {
    (1..table.len())
        .find(|&i| identity_violation_at(table, i).is_none())
        .map(|i| {
            witness(
                table,
                vec![i],
                Rational::one(),
                Rational::zero(),
                "a second two-sided identity",
            )
        })
}

fn involution_witness(table: &ConvolutionTable) -> Option<Witness> {
    let n = table.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mirrored = table.conv(table.involute(y), table.involute(x), table.involute(z));
                if table.conv(x, y, z) != mirrored {
                    return Some(witness(
                        table,
                        vec![x, y, z],
                        table.conv(x, y, z).clone(),
                        mirrored.clone(),
                        "c[x][y][z] differs from c[y̌][x̌][ž]",
                    ));
                }
            }
        }
    }
    None
}

fn support_witness(table: &ConvolutionTable) -> Option<Witness> {
    let n = table.len();
    for x in 0..n {
        for y in 0..n {
            let at_identity = table.conv(x, y, ConvolutionTable::IDENTITY);
            let positive = at_identity.is_positive();
            let expected = y == table.involute(x);
            if positive != expected {
                let note = if expected {
                    "y = x̌ but e is missing from supp(δ_x∗δ_y)"
                } else {
                    "e ∈ supp(δ_x∗δ_y) but y ≠ x̌"
                };
                return Some(witness(
                    table,
                    vec![x, y],
                    at_identity.clone(),
                    Rational::zero(),
                    note,
                ));
            }
        }
    }
    None
}

/// Scores a structurally well-formed table against every hypergroup axiom.
///
/// Each entry carries a pass/fail status, with the lexicographically first
/// counterexample on failure. The two continuity axioms are reported as
/// automatic: on a finite discrete space every map involved is continuous.
pub fn validate_table(table: &ConvolutionTable) -> ValidationReport {
    let checks = [
        (Axiom::Associativity, associativity_witness(table)),
        (Axiom::ProbabilityRows, probability_rows_witness(table)),
        (Axiom::Identity, identity_witness(table)),
        (
            Axiom::IdentityUniqueness,
            identity_uniqueness_witness(table),
        ),
        (Axiom::InvolutionAntihom, involution_witness(table)),
        (Axiom::Support, support_witness(table)),
    ];
    let mut entries: Vec<AxiomCheck> = checks
        .into_iter()
        .map(|(axiom, failure)| AxiomCheck {
            axiom,
            status: match failure {
                None => CheckStatus::Pass,
                Some(w) => CheckStatus::Fail(Box::new(w)),
            },
        })
        .collect();
    entries.push(AxiomCheck {
        axiom: Axiom::ConvolutionContinuity,
        status: CheckStatus::Automatic,
    });
    entries.push(AxiomCheck {
        axiom: Axiom::SupportContinuity,
        status: CheckStatus::Automatic,
    });
    ValidationReport {
        table_name: table.name().to_owned(),
        entries,
    }
}
