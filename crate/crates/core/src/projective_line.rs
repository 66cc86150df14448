//! Line bundles `O(n)` on the projective line, split bundles, and matrices of
//! twisted endomorphisms written in the affine chart with coordinate `x`.

use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{evaluate, Matrix};
use crate::algebra::{parse_unipoly, AlgebraError, Ring, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineBundle(pub i64);

impl LineBundle {
    pub fn degree(self) -> i64 {
        self.0
    }

    pub fn h0(self) -> usize {
        h0(self.0)
    }

    /// By Serre duality, `h^1(O(n)) = h^0(O(-n-2))`.
    pub fn h1(self) -> usize {
        h0(-self.0 - 2)
    }
}

pub fn h0(n: i64) -> usize {
    (n + 1).max(0) as usize
}

/// A global section of `O(n)`: a polynomial of degree at most `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    bundle: LineBundle,
    poly: UniPoly,
}

impl Section {
    pub fn new(bundle: LineBundle, poly: UniPoly) -> Result<Self, ProjectiveLineError> {
        if poly.degree_i64() > bundle.0 {
            return Err(ProjectiveLineError::SectionDegree { degree: poly.degree_i64(), bound: bundle.0 });
        }
        Ok(Section { bundle, poly })
    }

    pub fn bundle(&self) -> LineBundle {
        self.bundle
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectiveLineError {
    #[error("split bundle needs at least one summand")]
    EmptyBundle,
    #[error("twists must be sorted in descending order: {0:?}")]
    UnsortedTwists(Vec<i64>),
    #[error("section of degree {degree} exceeds the bound {bound}")]
    SectionDegree { degree: i64, bound: i64 },
    #[error("endomorphism matrix must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("entry ({row},{col}): {source}")]
    Entry { row: usize, col: usize, source: AlgebraError },
}

/// `O(e_1) + ... + O(e_r)` with `e_1 >= ... >= e_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SplitBundleJson", into = "SplitBundleJson")]
pub struct SplitBundle {
    twists: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SplitBundleJson {
    twists: Vec<i64>,
}

impl TryFrom<SplitBundleJson> for SplitBundle {
    type Error = ProjectiveLineError;
    fn try_from(j: SplitBundleJson) -> Result<Self, Self::Error> {
        SplitBundle::new(j.twists)
    }
}

impl From<SplitBundle> for SplitBundleJson {
    fn from(b: SplitBundle) -> Self {
        SplitBundleJson { twists: b.twists }
    }
}

impl SplitBundle {
    pub fn new(twists: Vec<i64>) -> Result<Self, ProjectiveLineError> {
        if twists.is_empty() {
            return Err(ProjectiveLineError::EmptyBundle);
        }
        if twists.windows(2).any(|w| w[0] < w[1]) {
            return Err(ProjectiveLineError::UnsortedTwists(twists));
        }
        Ok(SplitBundle { twists })
    }

    /// `r` copies of `O(0)`.
    pub fn trivial(r: usize) -> Self {
        SplitBundle { twists: vec![0; r.max(1)] }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// Degree bound for entry `(i, j)` of an endomorphism twisted by `O(n)`.
    pub fn entry_bound(&self, i: usize, j: usize, n: i64) -> i64 {
        self.twists[i] - self.twists[j] + n
    }
}

/// Matrix of a section of `End(E) (x) O(n)`: entry `(i, j)` is the component
/// `O(e_j) -> O(e_i + n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedEndo {
    pub source: SplitBundle,
    pub twist: LineBundle,
    pub entries: Matrix<UniPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub row: usize,
    pub col: usize,
    pub degree: i64,
    pub bound: i64,
}

impl TwistedEndo {
    pub fn new(source: SplitBundle, twist: i64, entries: Matrix<UniPoly>) -> Result<Self, ProjectiveLineError> {
        let r = source.rank();
        if entries.rows() != r || entries.cols() != r {
            return Err(ProjectiveLineError::Shape { expected: r });
        }
        Ok(TwistedEndo { source, twist: LineBundle(twist), entries })
    }

    pub fn zero(source: SplitBundle, twist: i64) -> Self {
        let r = source.rank();
        TwistedEndo { source, twist: LineBundle(twist), entries: Matrix::zeros(r, r, UniPoly::zero()) }
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    pub fn bound(&self, i: usize, j: usize) -> i64 {
        self.source.entry_bound(i, j, self.twist.0)
    }

    /// Matrix product; the twists add.
    pub fn compose(&self, other: &TwistedEndo) -> TwistedEndo {
        TwistedEndo {
            source: self.source.clone(),
            twist: LineBundle(self.twist.0 + other.twist.0),
            entries: self.entries.mul(&other.entries),
        }
    }

    pub fn evaluate<K: Ring>(&self, x0: &K) -> Matrix<K> {
        evaluate_endo(self, x0)
    }

    pub fn from_json(json: &TwistedEndoJson, source: &SplitBundle) -> Result<Self, ProjectiveLineError> {
        let r = source.rank();
        if json.entries.len() != r || json.entries.iter().any(|row| row.len() != r) {
            return Err(ProjectiveLineError::Shape { expected: r });
        }
        let mut rows = Vec::with_capacity(r);
        for (i, row) in json.entries.iter().enumerate() {
            let mut parsed = Vec::with_capacity(r);
            for (j, s) in row.iter().enumerate() {
                let p = parse_unipoly(s).map_err(|e| ProjectiveLineError::Entry { row: i, col: j, source: e.into() })?;
                parsed.push(p);
            }
            rows.push(parsed);
        }
        let entries = Matrix::from_rows(rows, UniPoly::zero()).expect("rows have equal length");
        TwistedEndo::new(source.clone(), json.twist, entries)
    }

    pub fn to_json(&self) -> TwistedEndoJson {
        TwistedEndoJson {
            twist: self.twist.0,
            entries: self.entries.to_rows().iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect(),
        }
    }
}

/// Wire form `{"twist": 1, "entries": [["0","1"],["x","0"]]}`; the split
/// bundle is supplied separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedEndoJson {
    pub twist: i64,
    pub entries: Vec<Vec<String>>,
}

/// Lists entries exceeding their degree bounds; empty means valid.
pub fn validate_twisted_endo(t: &TwistedEndo) -> Vec<BoundViolation> {
    let r = t.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let p = t.entries.get(i, j);
            let bound = t.bound(i, j);
            if !p.is_zero() && p.degree_i64() > bound {
                out.push(BoundViolation { row: i, col: j, degree: p.degree_i64(), bound });
            }
        }
    }
    out
}

pub fn evaluate_endo<K: Ring>(t: &TwistedEndo, x0: &K) -> Matrix<K> {
    evaluate(&t.entries, x0)
}
