//! CSV datasets with a header row.
//!
//! Column types are inferred (numeric when every cell parses as a number)
//! unless the header name carries a `:cat` or `:num` suffix; `:num[lo..hi]`
//! also fixes the domain bounds, which otherwise span the observed values.
//! The label is the last column unless named explicitly.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use crate::domain::{ClassId, Domain, Feature, FeatureSpace, OrdinalKind, Point, Value};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Debug)]
pub struct Dataset {
    pub space: FeatureSpace,
    pub classes: Vec<String>,
    pub rows: Vec<Point>,
    pub labels: Vec<ClassId>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq)]
enum ColType {
    Cat,
    Num(Option<(Rational, Rational)>),
    Infer,
}

fn column_spec(h: &str) -> Result<(String, ColType)> {
    if let Some(n) = h.strip_suffix(":cat") {
        return Ok((n.to_string(), ColType::Cat));
    }
    if let Some(n) = h.strip_suffix(":num") {
        return Ok((n.to_string(), ColType::Num(None)));
    }
    if let Some((n, rest)) = h.split_once(":num[") {
        let bounds = rest
            .strip_suffix(']')
            .and_then(|b| b.split_once(".."))
            .ok_or_else(|| Error::Dataset(format!("malformed column header {h:?}")))?;
        let lo = parse_rational(bounds.0.trim())?;
        let hi = parse_rational(bounds.1.trim())?;
        return Ok((n.to_string(), ColType::Num(Some((lo, hi)))));
    }
    Ok((h.to_string(), ColType::Infer))
}

pub fn read_csv(path: impl AsRef<Path>, label: Option<&str>) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    parse_csv(file, label)
}

pub fn parse_csv<R: Read>(reader: R, label: Option<&str>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header: Vec<(String, ColType)> = rdr.headers()?.iter().map(column_spec).collect::<Result<_>>()?;
    if header.len() < 2 {
        return Err(Error::Dataset("need at least one feature column and a label column".into()));
    }
    let label_col = match label {
        Some(name) => header
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::Dataset(format!("no label column {name:?}")))?,
        None => header.len() - 1,
    };
    let mut cells: Vec<Vec<String>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(Error::Dataset(format!("row {} has {} fields, expected {}", i + 2, rec.len(), header.len())));
        }
        cells.push(rec.iter().map(str::to_string).collect());
    }
    if cells.is_empty() {
        return Err(Error::Dataset("no data rows".into()));
    }
    let mut features = Vec::new();
    let mut parsers: Vec<Box<dyn Fn(&str) -> Result<Value>>> = Vec::new();
    for (c, (name, ty)) in header.iter().enumerate() {
        if c == label_col {
            continue;
        }
        let column: Vec<&str> = cells.iter().map(|r| r[c].as_str()).collect();
        let numeric: Option<Vec<Rational>> = match ty {
            ColType::Cat => None,
            ColType::Num(_) => Some(
                column
                    .iter()
                    .map(|t| parse_rational(t).map_err(|e| Error::Dataset(format!("column {name}: {e}"))))
                    .collect::<Result<_>>()?,
            ),
            ColType::Infer => column.iter().map(|t| parse_rational(t).ok()).collect(),
        };
        let domain = match (numeric, ty) {
            (Some(_), ColType::Num(Some((lo, hi)))) => Domain::ordinal(*lo, *hi, OrdinalKind::Continuous)?,
            (Some(xs), _) => {
                let lo = *xs.iter().min().expect("nonempty");
                let mut hi = *xs.iter().max().expect("nonempty");
                if hi == lo {
                    hi = lo + 1;
                }
                Domain::ordinal(lo, hi, OrdinalKind::Continuous)?
            }
            (None, _) => {
                let labels: BTreeSet<&str> = column.iter().copied().collect();
                if labels.len() < 2 {
                    return Err(Error::Dataset(format!("categorical column {name} has a single value")));
                }
                Domain::categorical(labels)?
            }
        };
        let d = domain.clone();
        parsers.push(Box::new(move |t| d.parse_value(t)));
        features.push(Feature { name: name.clone(), domain });
    }
    let space = FeatureSpace::new(features)?;
    let classes: Vec<String> =
        cells.iter().map(|r| r[label_col].clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows = Vec::with_capacity(cells.len());
    let mut labels = Vec::with_capacity(cells.len());
    for r in &cells {
        let values = r
            .iter()
            .enumerate()
            .filter(|(c, _)| *c != label_col)
            .zip(&parsers)
            .map(|((_, t), p)| p(t))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Point::new(&space, values)?);
        labels.push(classes.iter().position(|c| *c == r[label_col]).expect("collected"));
    }
    Ok(Dataset { space, classes, rows, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_types_and_label() {
        let text = "age,color,risk\n20,Red,yes\n40,Blue,no\n33.5,Red,no\n";
        let d = parse_csv(text.as_bytes(), None).unwrap();
        assert_eq!(d.len(), 3);
        assert!(!d.space.domain(0).is_categorical());
        assert_eq!(d.space.domain(1).labels().unwrap(), ["Blue", "Red"]);
        assert_eq!(d.classes, ["no", "yes"]);
        assert_eq!(d.labels, [1, 0, 0]);
    }

    #[test]
    fn suffixes_override_inference() {
        let text = "grade:cat,y\n1,a\n2,b\n";
        let d = parse_csv(text.as_bytes(), None).unwrap();
        assert!(d.space.domain(0).is_categorical());
        assert_eq!(d.space.name(0), "grade");
    }

    #[test]
    fn declared_bounds() {
        let d = parse_csv("x:num[0..10],y\n1,a\n2,b\n".as_bytes(), None).unwrap();
        assert_eq!(d.space.name(0), "x");
        assert_eq!(d.space.domain(0).bounds().unwrap().1, &Rational::from_integer(10));
        assert!(parse_csv("x:num[0..1],y\n5,a\n".as_bytes(), None).is_err());
        assert!(parse_csv("x:num[0..y\n5,a\n".as_bytes(), None).is_err());
    }

    #[test]
    fn explicit_label_column() {
        let text = "y,x\na,1\nb,2\n";
        let d = parse_csv(text.as_bytes(), Some("y")).unwrap();
        assert_eq!(d.space.name(0), "x");
        assert_eq!(d.classes, ["a", "b"]);
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(parse_csv("x,y\n".as_bytes(), None).is_err());
        assert!(parse_csv("x,y\n1,a\n2\n".as_bytes(), None).is_err());
    }
}
