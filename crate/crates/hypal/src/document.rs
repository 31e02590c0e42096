//! JSON interchange format for tables and groups.
//!
//! Rationals travel as exact strings (`"1/3"`) or integers so that no
//! weight is ever rounded. Convolution rows are sparse maps keyed by
//! `"x,y"` pairs; rows that the identity axiom determines (any pair
//! involving the identity, which is always the first listed element) may
//! be omitted and are filled in on parse. The involution map may omit
//! fixed points. Parsing rejects rows with negative mass or mass ≠ 1 and
//! names the offending pair, so every parsed table satisfies the
//! probability axiom even before validation.
//!
//! ```json
//! {
//!   "name": "S3c",
//!   "elements": ["e", "t", "c"],
//!   "involution": {},
//!   "convolution": {
//!     "t,t": {"e": "1/3", "c": "2/3"},
//!     "t,c": {"t": "1"},
//!     "c,t": {"t": "1"},
//!     "c,c": {"e": "1/2", "c": "1/2"}
//!   }
//! }
//! ```

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, GroupTable};
use crate::hypergroup::{ConvolutionTable, TableError};
use crate::rational::{format_rational, parse_rational, Rational, RationalParseError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("document has no elements")]
    NoElements,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown symbol `{symbol}` in {context}")]
    UnknownSymbol { symbol: String, context: String },
    #[error("convolution key `{0}` is not of the form \"x,y\"")]
    BadPairKey(String),
    #[error("missing convolution row for pair ({x},{y})")]
    MissingPair { x: String, y: String },
    #[error("bad rational in row ({pair}): {source}")]
    BadRational {
        pair: String,
        source: RationalParseError,
    },
    #[error("negative mass {value} at `{symbol}` in row ({pair})")]
    NegativeMass {
        pair: String,
        symbol: String,
        value: String,
    },
    #[error("row ({pair}) has total mass {total}, expected 1")]
    RowNotProbability { pair: String, total: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Group(#[from] CorpusError),
}

/// Exact rational in transit: a string like `"2/3"` or a bare integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    fn parse(&self) -> Result<Rational, RationalParseError> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }

    fn of(value: &Rational) -> Self {
        RationalText::Text(format_rational(value))
    }
}

/// On-disk form of a convolution table. The first listed element is the
/// identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypergroupDocument {
    pub name: String,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub involution: BTreeMap<String, String>,
    #[serde(default)]
    pub convolution: BTreeMap<String, BTreeMap<String, RationalText>>,
}

impl HypergroupDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Resolves the document into a structurally checked table.
    pub fn to_table(&self) -> Result<ConvolutionTable, DocumentError> {
        let n = self.elements.len();
        if n == 0 {
            return Err(DocumentError::NoElements);
        }
        for (i, sym) in self.elements.iter().enumerate() {
            if self.elements[..i].contains(sym) {
                return Err(DocumentError::DuplicateElement(sym.clone()));
            }
        }
        let index = |symbol: &str, context: &str| -> Result<usize, DocumentError> {
            self.elements
                .iter()
                .position(|s| s == symbol)
                .ok_or_else(|| DocumentError::UnknownSymbol {
                    symbol: symbol.to_owned(),
                    context: context.to_owned(),
                })
        };

        let mut involution: Vec<usize> = (0..n).collect();
        for (from, to) in &self.involution {
            involution[index(from, "involution")?] = index(to, "involution")?;
        }

        let mut rows: Vec<Option<Vec<Rational>>> = vec![None; n * n];
        for (key, dist) in &self.convolution {
            let (xs, ys) = key
                .split_once(',')
                .ok_or_else(|| DocumentError::BadPairKey(key.clone()))?;
            let x = index(xs.trim(), "convolution key")?;
            let y = index(ys.trim(), "convolution key")?;
            let mut row = vec![Rational::zero(); n];
            for (symbol, text) in dist {
                let z = index(symbol, &format!("row ({key})"))?;
                let value = text.parse().map_err(|source| DocumentError::BadRational {
                    pair: key.clone(),
                    source,
                })?;
                if value.is_negative() {
                    return Err(DocumentError::NegativeMass {
                        pair: key.clone(),
                        symbol: symbol.clone(),
                        value: format_rational(&value),
                    });
                }
                row[z] = value;
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Err(DocumentError::RowNotProbability {
                    pair: key.clone(),
                    total: format_rational(&total),
                });
            }
            rows[x * n + y] = Some(row);
        }

        // rows the identity axiom determines may be omitted
        let e = ConvolutionTable::IDENTITY;
        let point = |z: usize| {
            let mut row = vec![Rational::zero(); n];
            row[z] = Rational::one();
            row
        };
        for y in 0..n {
            rows[e * n + y].get_or_insert_with(|| point(y));
            rows[y * n + e].get_or_insert_with(|| point(y));
        }

        let mut conv = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                match rows[x * n + y].take() {
                    Some(row) => conv.extend(row),
                    None => {
                        return Err(DocumentError::MissingPair {
                            x: self.elements[x].clone(),
                            y: self.elements[y].clone(),
                        })
                    }
                }
            }
        }
        Ok(ConvolutionTable::new(
            self.name.clone(),
            self.elements.clone(),
            involution,
            conv,
        )?)
    }

    /// Document form of a table: identity-determined rows and zero masses
    /// are dropped, fixed points of the involution are left implicit.
    pub fn of_table(table: &ConvolutionTable) -> Self {
        let n = table.len();
        let e = ConvolutionTable::IDENTITY;
        let mut involution = BTreeMap::new();
        for x in 0..n {
            if table.involute(x) != x {
                involution.insert(
                    table.symbol(x).to_owned(),
                    table.symbol(table.involute(x)).to_owned(),
                );
            }
        }
        let mut convolution = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                let row = table.conv_row(x, y);
                // drop rows that parsing reconstructs from the identity axiom
                if x == e || y == e {
                    let expected = if x == e { y } else { x };
                    let determined = row.iter().enumerate().all(|(z, v)| {
                        if z == expected {
                            v.is_one()
                        } else {
                            v.is_zero()
                        }
                    });
                    if determined {
                        continue;
                    }
                }
                let dist: BTreeMap<String, RationalText> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(z, v)| (table.symbol(z).to_owned(), RationalText::of(v)))
                    .collect();
                convolution.insert(format!("{},{}", table.symbol(x), table.symbol(y)), dist);
            }
        }
        Self {
            name: table.name().to_owned(),
            elements: table.elements().to_vec(),
            involution,
            convolution,
        }
    }
}

/// Parses document text straight to a table.
pub fn parse_document(text: &str) -> Result<ConvolutionTable, DocumentError> {
    HypergroupDocument::from_json(text)?.to_table()
}

/// Serializes a table to pretty document JSON.
pub fn serialize_table(table: &ConvolutionTable) -> String {
    HypergroupDocument::of_table(table).to_json()
}

/// On-disk form of a finite group: sparse Cayley table keyed by `"x,y"`
/// pairs with products involving the identity omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDocument {
    pub name: String,
    pub elements: Vec<String>,
    #[serde(default)]
    pub products: BTreeMap<String, String>,
}

impl GroupDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn to_group(&self) -> Result<GroupTable, DocumentError> {
        let n = self.elements.len();
        if n == 0 {
            return Err(DocumentError::NoElements);
        }
        let index = |symbol: &str, context: &str| -> Result<usize, DocumentError> {
            self.elements
                .iter()
                .position(|s| s == symbol)
                .ok_or_else(|| DocumentError::UnknownSymbol {
                    symbol: symbol.to_owned(),
                    context: context.to_owned(),
                })
        };
        let mut product: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (key, to) in &self.products {
            let (xs, ys) = key
                .split_once(',')
                .ok_or_else(|| DocumentError::BadPairKey(key.clone()))?;
            let x = index(xs.trim(), "products key")?;
            let y = index(ys.trim(), "products key")?;
            product[x][y] = Some(index(to, &format!("product ({key})"))?);
        }
        for j in 0..n {
            product[0][j].get_or_insert(j);
            product[j][0].get_or_insert(j);
        }
        let mut table = vec![vec![0usize; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = product[x][y].ok_or_else(|| DocumentError::MissingPair {
                    x: self.elements[x].clone(),
                    y: self.elements[y].clone(),
                })?;
            }
        }
        Ok(GroupTable::new(
            self.name.clone(),
            self.elements.clone(),
            table,
        )?)
    }

    pub fn of_group(group: &GroupTable) -> Self {
        let n = group.len();
        let mut products = BTreeMap::new();
        for x in 1..n {
            for y in 1..n {
                products.insert(
                    format!("{},{}", group.elements()[x], group.elements()[y]),
                    group.elements()[group.product(x, y)].clone(),
                );
            }
        }
        Self {
            name: group.name().to_owned(),
            elements: group.elements().to_vec(),
            products,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::rat;

    #[test]
    fn table_documents_round_trip_semantically() {
        for entry in corpus::golden_suite() {
            let text = serialize_table(&entry.table);
            let parsed = parse_document(&text).unwrap_or_else(|e| {
                panic!("{}: {e}", entry.name);
            });
            assert_eq!(parsed, entry.table, "{}", entry.name);
            // a second trip is byte-identical
            assert_eq!(serialize_table(&parsed), text, "{}", entry.name);
        }
    }

    #[test]
    fn sparse_document_with_omitted_identity_rows_parses() {
        let text = r#"{
            "name": "H2(1/2)",
            "elements": ["e", "a"],
            "convolution": {
                "a,a": {"e": "1/2", "a": "1/2"}
            }
        }"#;
        let table = parse_document(text).unwrap();
        let fixture = corpus::gen_order2(rat(1, 2)).unwrap();
        assert_eq!(&table, fixture.table());
    }

    #[test]
    fn bad_row_mass_names_the_pair() {
        let text = r#"{
            "name": "broken",
            "elements": ["e", "a"],
            "convolution": {
                "a,a": {"e": "1/2", "a": "1/4"}
            }
        }"#;
        let err = parse_document(text).unwrap_err();
        let DocumentError::RowNotProbability { pair, total } = err else {
            panic!("expected row-mass error, got {err}");
        };
        assert_eq!(pair, "a,a");
        assert_eq!(total, "3/4");
    }

    #[test]
    fn negative_mass_and_unknown_symbols_are_rejected() {
        let negative = r#"{
            "name": "broken",
            "elements": ["e", "a"],
            "convolution": {
                "a,a": {"e": "3/2", "a": "-1/2"}
            }
        }"#;
        assert!(matches!(
            parse_document(negative),
            Err(DocumentError::NegativeMass { .. })
        ));

        let unknown = r#"{
            "name": "broken",
            "elements": ["e", "a"],
            "convolution": {
                "a,b": {"e": "1"}
            }
        }"#;
        assert!(matches!(
            parse_document(unknown),
            Err(DocumentError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn missing_non_identity_pair_is_an_error() {
        let text = r#"{
            "name": "broken",
            "elements": ["e", "a", "b"],
            "convolution": {
                "a,a": {"e": "1"}
            }
        }"#;
        assert!(matches!(
            parse_document(text),
            Err(DocumentError::MissingPair { .. })
        ));
    }

    #[test]
    fn integer_and_string_rationals_both_parse() {
        let text = r#"{
            "name": "Z2",
            "elements": ["e", "a"],
            "convolution": {
                "a,a": {"e": 1}
            }
        }"#;
        let table = parse_document(text).unwrap();
        let z2 = corpus::gen_group(&corpus::z(2));
        assert_eq!(&table, z2.table());
    }

    #[test]
    fn group_documents_round_trip() {
        for group in [corpus::z(3), corpus::s3(), corpus::d4()] {
            let doc = GroupDocument::of_group(&group);
            let parsed = doc.to_group().unwrap();
            assert_eq!(parsed, group);
            let reparsed = GroupDocument::from_json(&doc.to_json())
                .unwrap()
                .to_group()
                .unwrap();
            assert_eq!(reparsed, group);
        }
    }
}
