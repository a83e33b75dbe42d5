//! Space files: a JSON object with `labels` (strings) and `matrix` (rows of
//! integers or `"p/q"` strings in lowest terms).
//!
//! Canonical emission writes `labels` before `matrix`, uses no whitespace,
//! and writes integral entries as bare JSON integers.

use crate::rational::{self, Rational};
use crate::space::{validate, FiniteMetricSpace, ValidationError};
use num_integer::Integer;
use num_traits::One;
use serde::Serializer;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad space file: {0}")]
    Format(String),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

pub fn serialize_rational<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&rational::format(value))
}

fn entry_json(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("\"{}/{}\"", value.numer(), value.denom())
    }
}

/// Canonical single-line JSON for a space.
pub fn to_canonical_json(space: &FiniteMetricSpace) -> String {
    let labels: Vec<String> = space
        .labels()
        .iter()
        .map(|l| serde_json::to_string(l).expect("strings serialize"))
        .collect();
    let rows: Vec<String> = space
        .matrix()
        .iter()
        .map(|row| format!("[{}]", row.iter().map(entry_json).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{\"labels\":[{}],\"matrix\":[{}]}}", labels.join(","), rows.join(","))
}

fn parse_entry(value: &Value, row: usize, col: usize) -> Result<Rational, IoError> {
    let bad = |why: &str| IoError::Format(format!("matrix[{row}][{col}]: {why}"));
    match value {
        Value::Number(n) => rational::parse(&n.to_string()).map_err(|_| bad("numbers must be integers")),
        Value::String(s) => {
            let parsed = rational::parse(s).map_err(|e| bad(&e.to_string()))?;
            if let Some((num, den)) = s.split_once('/') {
                let (num, den): (num_bigint::BigInt, num_bigint::BigInt) =
                    (num.parse().expect("checked"), den.parse().expect("checked"));
                if !num.gcd(&den).is_one() {
                    return Err(bad("fraction not in lowest terms"));
                }
            }
            Ok(parsed)
        }
        _ => Err(bad("expected an integer or a \"p/q\" string")),
    }
}

/// Parses and validates a space file.
pub fn from_json(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let root: Value = serde_json::from_str(text)?;
    let object = root.as_object().ok_or_else(|| IoError::Format("expected a JSON object".into()))?;
    let labels = object
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Format("missing \"labels\" array".into()))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| IoError::Format("labels must be strings".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = object
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Format("missing \"matrix\" array".into()))?;
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| IoError::Format(format!("matrix row {i} is not an array")))?;
        matrix.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, v)| parse_entry(v, i, j))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(validate(labels, matrix)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{integers, rtilde_grid};
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let space = FiniteMetricSpace::from_line(&[ratio(0, 1), ratio(1, 2)]).unwrap();
        assert_eq!(
            to_canonical_json(&space),
            r#"{"labels":["0","1/2"],"matrix":[[0,"1/2"],["1/2",0]]}"#
        );
        assert_eq!(
            to_canonical_json(&integers(1).unwrap()),
            r#"{"labels":["-1","0","1"],"matrix":[[0,1,2],[1,0,1],[2,1,0]]}"#
        );
    }

    #[test]
    fn accepts_loose_whitespace_and_key_order() {
        let text = "{ \"matrix\": [[0, \"3/2\"], [\"3/2\", 0]],\n \"labels\": [\"a\", \"b\"] }";
        let space = from_json(text).unwrap();
        assert_eq!(space.dist(0, 1), &ratio(3, 2));
    }

    #[test]
    fn rejects_bad_files() {
        for text in [
            "[]",
            r#"{"labels":["a"]}"#,
            r#"{"labels":["a","b"],"matrix":[[0,1.5],[1.5,0]]}"#,
            r#"{"labels":["a","b"],"matrix":[[0,"2/4"],["2/4",0]]}"#,
            r#"{"labels":["a","b"],"matrix":[[0,"1/0"],["1/0",0]]}"#,
            r#"{"labels":[1,2],"matrix":[[0,1],[1,0]]}"#,
            "not json",
        ] {
            assert!(from_json(text).is_err(), "{text}");
        }
        assert!(matches!(
            from_json(r#"{"labels":["a","b"],"matrix":[[0,1],[2,0]]}"#),
            Err(IoError::Invalid(_))
        ));
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"labels":["a","b"],"matrix":[[0,123456789012345678901234567890],[123456789012345678901234567890,0]]}"#;
        let space = from_json(text).unwrap();
        assert_eq!(to_canonical_json(&space), text);
    }

    #[test]
    fn rtilde_round_trip() {
        let space = rtilde_grid(2, &ratio(1, 2)).unwrap();
        assert_eq!(from_json(&to_canonical_json(&space)).unwrap(), space);
    }

    proptest! {
        #[test]
        fn canonical_round_trip(seed in any::<u64>()) {
            let space = crate::random::random_space(&mut crate::random::rng(seed), 6, 6);
            let text = to_canonical_json(&space);
            let back = from_json(&text).unwrap();
            prop_assert_eq!(to_canonical_json(&back), text);
            prop_assert_eq!(back, space);
        }
    }
}
