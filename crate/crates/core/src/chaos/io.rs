//! CSV tables. Every table starts with a `# seed=N` line followed by a header row.

use std::fmt::Display;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::classify::FlagStatus;
use super::matrix::ScrambledMatrix;
use super::profile::DistributionalProfile;
use super::transfer::TransferReport;
use super::DistanceTrace;

fn table<R, I>(seed: u64, header: &[&str], rows: I) -> Result<String>
where
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
    I: IntoIterator<Item = R>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("# seed={seed}\n{body}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn cell(x: impl Display) -> String {
    x.to_string()
}

/// Columns `j,d_j`.
pub fn trace_csv<S: Scalar>(trace: &DistanceTrace<S>, seed: u64) -> Result<String> {
    table(
        seed,
        &["j", "d_j"],
        trace.values.iter().enumerate().map(|(i, d)| [cell(i + 1), cell(d)]),
    )
}

/// Columns `delta,phi_lower,phi_upper`.
pub fn profile_csv<S: Scalar>(profile: &DistributionalProfile<S>, seed: u64) -> Result<String> {
    table(
        seed,
        &["delta", "phi_lower", "phi_upper"],
        (0..profile.grid.len()).map(|g| [cell(&profile.grid[g]), cell(profile.phi_lower(g)), cell(profile.phi_upper(g))]),
    )
}

/// Columns `m,mean`.
pub fn means_csv<S: Scalar>(profile: &DistributionalProfile<S>, seed: u64) -> Result<String> {
    table(
        seed,
        &["m", "mean"],
        profile.means.iter().enumerate().map(|(i, x)| [cell(i + 1), cell(x)]),
    )
}

/// Columns `j,hausdorff,sup,skorokhod,sendograph,endograph`.
pub fn transfer_csv(report: &TransferReport, seed: u64) -> Result<String> {
    let mut header = vec!["j".to_string(), "hausdorff".to_string()];
    header.extend(crate::fuzzy::MetricKind::ALL.iter().map(|m| m.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    table(
        seed,
        &header,
        report.rows.iter().map(|r| {
            let mut row = vec![cell(r.j), r.hausdorff.clone()];
            row.extend(r.values.values().cloned());
            row
        }),
    )
}

/// Columns `pair_i,pair_j,flag,evidence`; evidence is `status=…` followed by
/// `key=value` entries, separated by `;`.
pub fn matrix_csv(matrix: &ScrambledMatrix, seed: u64) -> Result<String> {
    let mut rows = Vec::new();
    for p in &matrix.pairs {
        for f in &p.verdict.flags {
            let status = match f.status {
                FlagStatus::True => "true",
                FlagStatus::False => "false",
                FlagStatus::InsufficientGrid => "insufficient-grid",
            };
            let mut ev = vec![format!("status={status}")];
            ev.extend(f.evidence.iter().map(|(k, v)| format!("{k}={v}")));
            rows.push([cell(p.i), cell(p.j), f.name.clone(), ev.join(";")]);
        }
    }
    table(seed, &["pair_i", "pair_j", "flag", "evidence"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::profile::distributional_profile;
    use crate::chaos::Level;
    use crate::scalar::{int, rat};

    #[test]
    fn trace_and_profile_tables() {
        let t = DistanceTrace {
            level: Level::Base,
            left: "a".into(),
            right: "b".into(),
            values: vec![rat(1, 2), int(2)],
        };
        assert_eq!(trace_csv(&t, 7).unwrap(), "# seed=7\nj,d_j\n1,1/2\n2,2\n");
        let p = distributional_profile(&t, &[int(1)], &[1, 2]).unwrap();
        assert_eq!(profile_csv(&p, 0).unwrap(), "# seed=0\ndelta,phi_lower,phi_upper\n1,0.5,1\n");
        assert_eq!(means_csv(&p, 0).unwrap(), "# seed=0\nm,mean\n1,0.5\n2,1.25\n");
    }
}
