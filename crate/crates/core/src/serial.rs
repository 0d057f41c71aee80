//! JSON interchange. Integers are decimal strings and rationals are `"p/q"`,
//! so nothing is truncated to 64 bits on the way in or out.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{GroupAction, Lattice};
use crate::linalg::IntegerMatrix;

pub fn int_to_string(x: &BigInt) -> String {
    x.to_str_radix(10)
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Malformed(format!("'{s}' is not an integer")))
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        int_to_string(x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == BigInt::from(0) {
                return Err(Error::Malformed(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
    }
}

pub fn ints_to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(int_to_string).collect()
}

pub fn parse_ints(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| parse_int(s)).collect()
}

pub fn matrix_to_strings(m: &IntegerMatrix) -> Vec<Vec<String>> {
    m.row_iter().map(ints_to_strings).collect()
}

/// Parses a string matrix; `cols` supplies the width when there are no rows.
pub fn parse_matrix(rows: &[Vec<String>], cols: Option<usize>) -> Result<IntegerMatrix> {
    let width = rows.first().map(|r| r.len()).or(cols).unwrap_or(0);
    let parsed = rows.iter().map(|r| parse_ints(r)).collect::<Result<Vec<_>>>()?;
    IntegerMatrix::from_rows(width, parsed).map_err(|e| Error::Malformed(e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeDocument {
    pub label: String,
    pub ambient_gram: Vec<Vec<String>>,
    pub basis: Vec<Vec<String>>,
}

impl LatticeDocument {
    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeDocument {
            label: l.label.clone(),
            ambient_gram: matrix_to_strings(l.ambient_gram()),
            basis: matrix_to_strings(l.basis()),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let gram = parse_matrix(&self.ambient_gram, None)?;
        let basis = parse_matrix(&self.basis, Some(gram.rows()))?;
        Lattice::new(self.label.clone(), gram, basis).map_err(|e| Error::Malformed(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupDocument {
    pub generators: Vec<Vec<Vec<String>>>,
}

impl GroupDocument {
    pub fn from_action(g: &GroupAction) -> Self {
        GroupDocument { generators: g.generators.iter().map(matrix_to_strings).collect() }
    }

    pub fn to_action(&self) -> Result<GroupAction> {
        let gens = self.generators.iter().map(|m| parse_matrix(m, None)).collect::<Result<Vec<_>>>()?;
        Ok(GroupAction::new(gens))
    }
}

/// A single vector; coordinates may be rationals such as `"1/2"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VectorDocument {
    pub coordinates: Vec<String>,
}

impl VectorDocument {
    pub fn from_rationals(v: &[BigRational]) -> Self {
        VectorDocument { coordinates: v.iter().map(rational_to_string).collect() }
    }

    pub fn from_ints(v: &[BigInt]) -> Self {
        VectorDocument { coordinates: ints_to_strings(v) }
    }

    pub fn to_rationals(&self) -> Result<Vec<BigRational>> {
        self.coordinates.iter().map(|s| parse_rational(s)).collect()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}
