//! Golden fixtures and generators.
//!
//! Three table families ground the test corpus:
//!
//! * [`gen_group`] — a finite group as a hypergroup: point convolutions
//!   are point masses, the involution is inversion, Haar is uniform;
//! * [`gen_conjugacy`] — the class hypergroup of a finite group: elements
//!   are conjugacy classes and structure constants come from brute-force
//!   products in the group algebra, so the table is computed rather than
//!   transcribed; Haar weights come out proportional to class sizes
//!   (verified downstream, never assumed);
//! * [`gen_order2`] — the smallest non-group family `{e,a}` with
//!   `δ_a∗δ_a = α·δ_e + (1−α)·δ_a`; Haar is `(1, 1/α)`.
//!
//! [`golden_suite`] bundles the positive fixtures with their expected Haar
//! weights and means plus two negative fixtures: a table violating the
//! support axiom and a non-associative one.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::hypergroup::{Axiom, ConvolutionTable, FiniteHypergroup};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("group table is malformed: {0}")]
    InvalidGroup(String),
    #[error("alpha must lie in (0, 1], got {0}")]
    AlphaOutOfRange(String),
}

/// A finite group given by its Cayley table; identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    elements: Vec<String>,
    /// `product[x][y]` is the index of `x·y`.
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Checks the group axioms exhaustively: identity at index 0,
    /// associativity over all triples, and two-sided inverses.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        product: Vec<Vec<usize>>,
    ) -> Result<Self, CorpusError> {
        let name = name.into();
        let n = elements.len();
        let fail = |msg: String| Err(CorpusError::InvalidGroup(msg));
        if n == 0 {
            return fail("no elements".into());
        }
        for (i, sym) in elements.iter().enumerate() {
            if elements[..i].contains(sym) {
                return fail(format!("duplicate element `{sym}`"));
            }
        }
        if product.len() != n || product.iter().any(|row| row.len() != n) {
            return fail("Cayley table is not n×n".into());
        }
        if product.iter().flatten().any(|&v| v >= n) {
            return fail("Cayley table entry out of range".into());
        }
        for j in 0..n {
            if product[0][j] != j || product[j][0] != j {
                return fail(format!("index 0 is not an identity at {j}"));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if product[product[x][y]][z] != product[x][product[y][z]] {
                        return fail(format!("not associative at ({x},{y},{z})"));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| product[x][y] == 0 && product[y][x] == 0) {
                Some(y) => inverse[x] = y,
                None => return fail(format!("element {x} has no two-sided inverse")),
            }
        }
        Ok(Self {
            name,
            elements,
            product,
            inverse,
        })
    }

    /// Builds the Cayley table from permutation representatives, composing
    /// as `(p·q)(i) = p(q(i))`.
    pub fn from_permutations(
        name: impl Into<String>,
        generators: Vec<(String, Vec<usize>)>,
    ) -> Result<Self, CorpusError> {
        let perms: Vec<Vec<usize>> = generators.iter().map(|(_, p)| p.clone()).collect();
        let elements = generators.into_iter().map(|(s, _)| s).collect();
        let compose =
            |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let n = perms.len();
        let mut product = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let xy = compose(&perms[x], &perms[y]);
                product[x][y] = perms
                    .iter()
                    .position(|p| *p == xy)
                    .ok_or_else(|| CorpusError::InvalidGroup("not closed".into()))?;
            }
        }
        Self::new(name, elements, product)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn product(&self, x: usize, y: usize) -> usize {
        self.product[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// Conjugacy classes in first-occurrence order; the identity class
    /// `{e}` always comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut members = Vec::new();
            for h in 0..n {
                let conj = self.product[self.product[h][g]][self.inverse[h]];
                if !assigned[conj] {
                    assigned[conj] = true;
                    members.push(conj);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }
}

/// The cyclic group of order `n`. `z(2)` is named with elements `{e,a}`;
/// larger orders use powers of a generator `g`.
pub fn z(n: usize) -> GroupTable {
    assert!(n >= 1);
    let elements: Vec<String> = if n == 2 {
        vec!["e".into(), "a".into()]
    } else {
        (0..n)
            .map(|i| match i {
                0 => "e".to_owned(),
                1 => "g".to_owned(),
                _ => format!("g{i}"),
            })
            .collect()
    };
    let product = (0..n)
        .map(|x| (0..n).map(|y| (x + y) % n).collect())
        .collect();
    GroupTable::new(format!("Z{n}"), elements, product).expect("cyclic group")
}

/// The symmetric group on three letters, transpositions first.
pub fn s3() -> GroupTable {
    GroupTable::from_permutations(
        "S3",
        vec![
            ("e".into(), vec![0, 1, 2]),
            ("t".into(), vec![1, 0, 2]),
            ("t2".into(), vec![2, 1, 0]),
            ("t3".into(), vec![0, 2, 1]),
            ("c".into(), vec![1, 2, 0]),
            ("c2".into(), vec![2, 0, 1]),
        ],
    )
    .expect("S3")
}

/// The dihedral group of the square as corner permutations. The element
/// order puts the central rotation right after the identity so that the
/// conjugacy classes enumerate as {e}, {r²}, {r,r³}, {s,r²s}, {rs,r³s}.
pub fn d4() -> GroupTable {
    GroupTable::from_permutations(
        "D4",
        vec![
            ("e".into(), vec![0, 1, 2, 3]),
            ("r2".into(), vec![2, 3, 0, 1]),
            ("r".into(), vec![1, 2, 3, 0]),
            ("r3".into(), vec![3, 0, 1, 2]),
            ("s".into(), vec![0, 3, 2, 1]),
            ("r2s".into(), vec![2, 1, 0, 3]),
            ("rs".into(), vec![1, 0, 3, 2]),
            ("r3s".into(), vec![3, 2, 1, 0]),
        ],
    )
    .expect("D4")
}

/// A group as a hypergroup: `c[x][y][z] = [z = x·y]`, involution the
/// inverse map. Always validates; Haar is uniform.
pub fn gen_group(group: &GroupTable) -> FiniteHypergroup {
    let n = group.len();
    let table = ConvolutionTable::from_fn(
        group.name().to_owned(),
        group.elements().to_vec(),
        (0..n).map(|x| group.inverse(x)).collect(),
        |x, y, z| {
            if group.product(x, y) == z {
                Rational::one()
            } else {
                Rational::zero()
            }
        },
    )
    .expect("group table is structurally sound");
    FiniteHypergroup::new(table).expect("a group satisfies the hypergroup axioms")
}

/// The conjugacy-class hypergroup. Structure constants are computed by
/// brute force: `c[i][j][k]` is the fraction of pairs in `C_i × C_j`
/// whose product lands in `C_k`.
pub fn gen_conjugacy(group: &GroupTable) -> FiniteHypergroup {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    let mut class_of = vec![0usize; group.len()];
    for (c, members) in classes.iter().enumerate() {
        for &g in members {
            class_of[g] = c;
        }
    }
    let elements: Vec<String> = classes
        .iter()
        .map(|members| group.elements()[members[0]].clone())
        .collect();
    let involution: Vec<usize> = classes
        .iter()
        .map(|members| class_of[group.inverse(members[0])])
        .collect();
    let mut conv = Vec::with_capacity(k * k * k);
    for ci in &classes {
        for cj in &classes {
            let mut counts = vec![0u64; k];
            for &a in ci {
                for &b in cj {
                    counts[class_of[group.product(a, b)]] += 1;
                }
            }
            let pairs = (ci.len() * cj.len()) as i64;
            for count in counts {
                conv.push(rat(count as i64, pairs));
            }
        }
    }
    let table = ConvolutionTable::new(format!("{}c", group.name()), elements, involution, conv)
        .expect("class table is structurally sound");
    FiniteHypergroup::new(table).expect("class hypergroups satisfy the axioms")
}

/// Raw order-two table `{e,a}` with `δ_a∗δ_a = α·δ_e + (1−α)·δ_a`, for
/// any rational `α`. Not validated: `α = 0` kills the support axiom and
/// `α ∉ [0,1]` breaks the probability rows, which is exactly what the
/// negative fixtures need.
pub fn order2_table(alpha: Rational) -> Result<ConvolutionTable, CorpusError> {
    let one = Rational::one();
    let complement = &one - &alpha;
    ConvolutionTable::new(
        format!("H2({})", format_rational(&alpha)),
        vec!["e".into(), "a".into()],
        vec![0, 1],
        vec![
            // e,e        e,a          a,e          a,a
            one.clone(),
            Rational::zero(),
            Rational::zero(),
            one.clone(),
            Rational::zero(),
            one,
            alpha,
            complement,
        ],
    )
    .map_err(|e| CorpusError::InvalidGroup(e.to_string()))
}

/// The validated order-two hypergroup; requires `0 < α ≤ 1`.
pub fn gen_order2(alpha: Rational) -> Result<FiniteHypergroup, CorpusError> {
    if !alpha.is_positive() || alpha > Rational::one() {
        return Err(CorpusError::AlphaOutOfRange(format_rational(&alpha)));
    }
    let table = order2_table(alpha)?;
    Ok(FiniteHypergroup::new(table).expect("order-2 family is valid on (0,1]"))
}

/// `{e,a}` with `δ_a∗δ_a = δ_a`: passes every axiom except support, which
/// fails at `(a,a)`. The canonical table on which ppt fails.
pub fn no_support_table() -> ConvolutionTable {
    let one = Rational::one;
    let zero = Rational::zero;
    ConvolutionTable::new(
        "NoSupport",
        vec!["e".into(), "a".into()],
        vec![0, 1],
        vec![one(), zero(), zero(), one(), zero(), one(), zero(), one()],
    )
    .expect("structurally sound")
}

/// Three elements with symmetric rows that satisfy probability, identity,
/// involution, and support axioms but fail associativity at `(a,a,b)`.
pub fn non_associative_table() -> ConvolutionTable {
    let half = rat(1, 2);
    let zero = Rational::zero;
    let one = Rational::one;
    let rows: Vec<(usize, usize, Vec<Rational>)> = vec![
        (1, 1, vec![one(), zero(), zero()]),
        (1, 2, vec![zero(), half.clone(), half.clone()]),
        (2, 1, vec![zero(), half.clone(), half.clone()]),
        (2, 2, vec![half.clone(), half.clone(), zero()]),
    ];
    let mut conv = vec![Rational::zero(); 27];
    // identity rows
    for y in 0..3 {
        conv[y * 3 + y] = one();
        conv[(y * 9) + y] = one();
    }
    for (x, y, row) in rows {
        for (z, v) in row.into_iter().enumerate() {
            conv[(x * 3 + y) * 3 + z] = v;
        }
    }
    ConvolutionTable::new(
        "NonAssoc",
        vec!["e".into(), "a".into(), "b".into()],
        vec![0, 1, 2],
        conv,
    )
    .expect("structurally sound")
}

/// What a golden fixture is expected to do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    /// Validates; Haar weights under `λ_e = 1` and the invariant mean.
    Valid {
        haar: Vec<Rational>,
        mean: Vec<Rational>,
    },
    /// Fails exactly this axiom, with this minimal witness tuple.
    Invalid {
        axiom: Axiom,
        witness_indices: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenEntry {
    pub name: &'static str,
    pub table: ConvolutionTable,
    pub expectation: Expectation,
}

/// Every fixture the acceptance suite runs: seven positive tables with
/// their expected Haar weights and means, and the two negative tables.
pub fn golden_suite() -> Vec<GoldenEntry> {
    let ones = |n: usize| vec![Rational::one(); n];
    let uniform = |n: i64| vec![rat(1, n); n as usize];
    vec![
        GoldenEntry {
            name: "Z2",
            table: gen_group(&z(2)).into_table(),
            expectation: Expectation::Valid {
                haar: ones(2),
                mean: uniform(2),
            },
        },
        GoldenEntry {
            name: "Z3",
            table: gen_group(&z(3)).into_table(),
            expectation: Expectation::Valid {
                haar: ones(3),
                mean: uniform(3),
            },
        },
        GoldenEntry {
            name: "S3",
            table: gen_group(&s3()).into_table(),
            expectation: Expectation::Valid {
                haar: ones(6),
                mean: uniform(6),
            },
        },
        GoldenEntry {
            name: "S3c",
            table: gen_conjugacy(&s3()).into_table(),
            expectation: Expectation::Valid {
                haar: vec![rat(1, 1), rat(3, 1), rat(2, 1)],
                mean: vec![rat(1, 6), rat(1, 2), rat(1, 3)],
            },
        },
        GoldenEntry {
            name: "H2(1/2)",
            table: gen_order2(rat(1, 2)).expect("valid alpha").into_table(),
            expectation: Expectation::Valid {
                haar: vec![rat(1, 1), rat(2, 1)],
                mean: vec![rat(1, 3), rat(2, 3)],
            },
        },
        GoldenEntry {
            name: "H2(1/4)",
            table: gen_order2(rat(1, 4)).expect("valid alpha").into_table(),
            expectation: Expectation::Valid {
                haar: vec![rat(1, 1), rat(4, 1)],
                mean: vec![rat(1, 5), rat(4, 5)],
            },
        },
        GoldenEntry {
            name: "D4c",
            table: gen_conjugacy(&d4()).into_table(),
            expectation: Expectation::Valid {
                haar: vec![rat(1, 1), rat(1, 1), rat(2, 1), rat(2, 1), rat(2, 1)],
                mean: vec![rat(1, 8), rat(1, 8), rat(1, 4), rat(1, 4), rat(1, 4)],
            },
        },
        GoldenEntry {
            name: "NoSupport",
            table: no_support_table(),
            expectation: Expectation::Invalid {
                axiom: Axiom::Support,
                witness_indices: vec![1, 1],
            },
        },
        GoldenEntry {
            name: "NonAssoc",
            table: non_associative_table(),
            expectation: Expectation::Invalid {
                axiom: Axiom::Associativity,
                witness_indices: vec![1, 1, 2, 0],
            },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergroup::validate_table;

    #[test]
    fn s3_class_constants_match_group_algebra_expansion() {
        // class sums in the group algebra of S3: T·T = 3E + 3C,
        // T·C = C·T = 2T, C·C = 2E + C, which normalize to the rows below
        let h = gen_conjugacy(&s3());
        assert_eq!(h.elements(), &["e", "t", "c"]);
        assert_eq!(h.conv_row(1, 1), &[rat(1, 3), rat(0, 1), rat(2, 3)]);
        assert_eq!(h.conv_row(1, 2), &[rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(h.conv_row(2, 1), &[rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(h.conv_row(2, 2), &[rat(1, 2), rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn abelian_conjugacy_recovers_the_group() {
        let g = z(4);
        let as_group = gen_group(&g);
        let as_classes = gen_conjugacy(&g);
        assert_eq!(as_group.len(), as_classes.len());
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(as_group.conv_row(x, y), as_classes.conv_row(x, y));
            }
        }
    }

    #[test]
    fn d4_classes_enumerate_by_size() {
        let classes = d4().conjugacy_classes();
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        let h = gen_conjugacy(&d4());
        assert_eq!(h.elements(), &["e", "r2", "r", "s", "rs"]);
    }

    #[test]
    fn order2_requires_alpha_in_unit_interval() {
        assert!(gen_order2(rat(1, 1)).is_ok());
        assert!(gen_order2(rat(1, 7)).is_ok());
        assert!(matches!(
            gen_order2(rat(0, 1)),
            Err(CorpusError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            gen_order2(rat(5, 4)),
            Err(CorpusError::AlphaOutOfRange(_))
        ));
        // the relaxed table for α = 0 exists and fails validation
        let relaxed = order2_table(Rational::zero()).unwrap();
        assert!(!validate_table(&relaxed).is_valid());
    }

    #[test]
    fn alpha_one_recovers_z2() {
        let h = gen_order2(rat(1, 1)).unwrap();
        let z2 = gen_group(&z(2));
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(h.conv_row(x, y), z2.conv_row(x, y));
            }
        }
    }

    #[test]
    fn golden_positive_fixtures_validate_and_negatives_fail_as_documented() {
        for entry in golden_suite() {
            let report = validate_table(&entry.table);
            match &entry.expectation {
                Expectation::Valid { .. } => {
                    assert!(report.is_valid(), "{}: {report}", entry.name)
                }
                Expectation::Invalid {
                    axiom,
                    witness_indices,
                } => {
                    assert!(!report.is_valid(), "{} should fail", entry.name);
                    let crate::hypergroup::CheckStatus::Fail(w) = report.check(*axiom) else {
                        panic!("{}: expected {axiom:?} to fail", entry.name);
                    };
                    assert_eq!(&w.indices, witness_indices, "{}", entry.name);
                }
            }
        }
    }

    #[test]
    fn bad_cayley_tables_are_rejected() {
        // not associative: a "left shift" table
        let err = GroupTable::new(
            "broken",
            vec!["e".into(), "x".into(), "y".into()],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]],
        );
        assert!(err.is_err());
    }
}
