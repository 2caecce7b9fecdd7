use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Zero-based class index.
pub type ClassId = usize;

/// A vector of signs, one per binary task.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Codeword(Vec<i8>);

impl Codeword {
    pub fn new(bits: Vec<i8>) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|b| **b != 1 && **b != -1) {
            return Err(invalid(format!("codeword entry {bad} is not +1 or -1")));
        }
        Ok(Self(bits))
    }

    pub fn from_bools(positive: impl IntoIterator<Item = bool>) -> Self {
        Self(positive.into_iter().map(|p| if p { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[i8] {
        &self.0
    }

    pub fn flipped(&self, j: usize) -> Codeword {
        let mut bits = self.0.clone();
        bits[j] = -bits[j];
        Codeword(bits)
    }
}

impl TryFrom<Vec<i8>> for Codeword {
    type Error = crate::error::Error;

    fn try_from(bits: Vec<i8>) -> Result<Self> {
        Codeword::new(bits)
    }
}

impl From<Codeword> for Vec<i8> {
    fn from(c: Codeword) -> Self {
        c.0
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

pub fn hamming_distance(a: &Codeword, b: &Codeword) -> Result<usize> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "codeword lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// L distinct codewords of a common length m; row `i` describes class `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Codeword>", into = "Vec<Codeword>")]
pub struct CodeMatrix {
    rows: Vec<Codeword>,
}

impl CodeMatrix {
    pub fn new(rows: Vec<Codeword>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let m = first.len();
            if rows.iter().any(|r| r.len() != m) {
                return Err(invalid("code matrix rows have different lengths"));
            }
        }
        for (i, a) in rows.iter().enumerate() {
            if let Some(j) = rows[i + 1..].iter().position(|b| a == b) {
                return Err(invalid(format!(
                    "code matrix rows {i} and {} are identical",
                    i + 1 + j
                )));
            }
        }
        Ok(Self { rows })
    }

    /// One-vs-all code: row i is +1 at position i and -1 elsewhere.
    pub fn one_vs_all(classes: usize) -> Self {
        let rows = (0..classes)
            .map(|i| Codeword::from_bools((0..classes).map(|j| i == j)))
            .collect();
        Self { rows }
    }

    pub fn num_classes(&self) -> usize {
        self.rows.len()
    }

    pub fn code_length(&self) -> usize {
        self.rows.first().map_or(0, Codeword::len)
    }

    pub fn rows(&self) -> &[Codeword] {
        &self.rows
    }

    pub fn row(&self, class: ClassId) -> &Codeword {
        &self.rows[class]
    }

    pub fn class_of(&self, word: &Codeword) -> Option<ClassId> {
        self.rows.iter().position(|r| r == word)
    }

    pub fn min_pairwise_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                let h = hamming_distance(a, b).expect("rows share a length");
                best = Some(best.map_or(h, |x| x.min(h)));
            }
        }
        best
    }
}

impl TryFrom<Vec<Codeword>> for CodeMatrix {
    type Error = crate::error::Error;

    fn try_from(rows: Vec<Codeword>) -> Result<Self> {
        CodeMatrix::new(rows)
    }
}

impl From<CodeMatrix> for Vec<Codeword> {
    fn from(c: CodeMatrix) -> Self {
        c.rows
    }
}

/// Nearest-codeword decoding; ties go to the smallest class index.
pub fn decode(predicted: &Codeword, code: &CodeMatrix) -> Result<ClassId> {
    if code.num_classes() == 0 {
        return Err(invalid("cannot decode against an empty code matrix"));
    }
    let mut best = (usize::MAX, 0);
    for (class, row) in code.rows().iter().enumerate() {
        let h = hamming_distance(predicted, row)?;
        if h < best.0 {
            best = (h, class);
        }
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(bits: &[i8]) -> Codeword {
        Codeword::new(bits.to_vec()).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&cw(&[1, -1, 1]), &cw(&[1, -1, 1])).unwrap(), 0);
        assert_eq!(hamming_distance(&cw(&[1, 1]), &cw(&[-1, -1])).unwrap(), 2);
        let ova = CodeMatrix::one_vs_all(5);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(hamming_distance(ova.row(i), ova.row(j)).unwrap(), 2);
                }
            }
        }
    }

    #[test]
    fn hamming_length_mismatch() {
        assert!(hamming_distance(&cw(&[1]), &cw(&[1, 1])).is_err());
    }

    #[test]
    fn rejects_non_sign_entries() {
        assert!(Codeword::new(vec![1, 0]).is_err());
        assert!(CodeMatrix::new(vec![cw(&[1, 1]), cw(&[1, 1])]).is_err());
        assert!(CodeMatrix::new(vec![cw(&[1, 1]), cw(&[1])]).is_err());
    }

    /// Exhaustive metric axioms for every triple of codewords with m <= 6.
    #[test]
    fn hamming_is_a_metric_exhaustively() {
        for m in 1..=6usize {
            let words: Vec<Codeword> = (0..1u32 << m)
                .map(|mask| Codeword::from_bools((0..m).map(|j| mask >> j & 1 == 1)))
                .collect();
            let d = |a: &Codeword, b: &Codeword| hamming_distance(a, b).unwrap();
            for a in &words {
                assert_eq!(d(a, a), 0);
                for b in &words {
                    assert_eq!(d(a, b), d(b, a));
                    if a != b {
                        assert!(d(a, b) > 0);
                    }
                    for c in &words {
                        assert!(d(a, c) <= d(a, b) + d(b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn decode_examples() {
        let code = CodeMatrix::new(vec![
            cw(&[1, 1, 1, 1]),
            cw(&[-1, -1, 1, 1]),
            cw(&[1, -1, -1, 1]),
            cw(&[-1, -1, -1, -1]),
        ])
        .unwrap();
        assert_eq!(decode(&cw(&[1, -1, -1, 1]), &code).unwrap(), 2);

        let ova = CodeMatrix::one_vs_all(3);
        assert_eq!(decode(&cw(&[1, -1, -1]), &ova).unwrap(), 0);

        // Equidistant (distance 1) from rows 0 and 2: smallest index wins.
        let tie2 = CodeMatrix::new(vec![cw(&[1, 1, 1]), cw(&[-1, -1, -1]), cw(&[1, -1, -1])]).unwrap();
        assert_eq!(hamming_distance(&cw(&[1, 1, -1]), tie2.row(0)).unwrap(), 1);
        assert_eq!(hamming_distance(&cw(&[1, 1, -1]), tie2.row(2)).unwrap(), 1);
        assert_eq!(decode(&cw(&[1, 1, -1]), &tie2).unwrap(), 0);
    }
}
