//! Line format: one support point per record, `point-id TAB level`.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::spaces::Universe;

use super::StepFuzzySet;

pub fn write_fuzzy<U: Universe>(u: &StepFuzzySet<U>) -> String {
    let mut out = String::new();
    for (p, a) in u.membership() {
        out.push_str(&u.universe().format_point(p));
        out.push('\t');
        out.push_str(&a.to_string());
        out.push('\n');
    }
    out
}

pub fn read_fuzzy<U: Universe>(universe: Arc<U>, text: &str) -> Result<StepFuzzySet<U>> {
    let mut membership = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (id, level) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("line {}: expected point-id TAB level", n + 1)))?;
        let p = universe
            .parse_point(id)
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        let a = parse_rational(level).map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if membership.insert(p, a).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate point {id:?}", n + 1)));
        }
    }
    StepFuzzySet::new(universe, membership)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::spaces::finite::FiniteUniverse;

    #[test]
    fn round_trip_and_decimals() {
        let uni = Arc::new(FiniteUniverse::on_line("l", &[int(0), int(1), int(2)]).unwrap());
        let u = StepFuzzySet::from_pairs(uni.clone(), [(0, rat(1, 3)), (2, int(1))]).unwrap();
        let text = write_fuzzy(&u);
        assert_eq!(text, "0\t1/3\n2\t1\n");
        assert_eq!(read_fuzzy(uni.clone(), &text).unwrap(), u);
        let dec = read_fuzzy(uni.clone(), "# comment\n1\t0.25\n0\t1.0\n").unwrap();
        assert_eq!(dec.grade(&1), rat(1, 4));
    }

    #[test]
    fn rejects_bad_records() {
        let uni = Arc::new(FiniteUniverse::on_line("l", &[int(0), int(1)]).unwrap());
        assert!(matches!(read_fuzzy(uni.clone(), "0\t1/2\n"), Err(Error::Normality(_))));
        assert!(read_fuzzy(uni.clone(), "0 1\n").is_err());
        assert!(read_fuzzy(uni.clone(), "0\t1\n0\t1/2\n").is_err());
        assert!(read_fuzzy(uni.clone(), "7\t1\n").is_err());
        assert!(read_fuzzy(uni, "0\t3/2\n").is_err());
    }
}
