//! The one-shot subcommands: `fixtures`, `mahler` and `snf`.

use abtorsion::foxcalc::{builtin_fixture, fixture_names};
use abtorsion::mahler::{default_fibered_grid, mahler_multivariate, mahler_one_var, MahlerMethod, OneVarMethod, Strategy};
use abtorsion::snf::smith_normal_form;
use abtorsion::{BigMatrix, LaurentPoly};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{LabError, LabResult};
use crate::report::round12;

/// One line per fixture: name, a tab, and the presentation text.
pub fn fixtures_list() -> String {
    fixture_names().into_iter().map(|n| format!("{n}\t{}\n", builtin_fixture(n).expect("listed fixture").text)).collect()
}

pub fn fixture_json(name: &str) -> LabResult<String> {
    let f = builtin_fixture(name).map_err(|e| LabError::Input(e.to_string()))?;
    Ok(serde_json::to_string_pretty(&f).expect("serializable fixture") + "\n")
}

const DEFAULT_RIEMANN_N: u64 = 4096;
const DEFAULT_GRID: usize = 512;
const DEFAULT_PRIME: u64 = 5;

/// `m(P)` by the named method; `auto` picks Jensen or fibered Jensen.
/// `n` is the grid or root-of-unity order, `p` the `G_{p,M}` prime.
pub fn mahler_command(poly: &str, method: &str, n: Option<u64>, p: Option<u64>) -> LabResult<Value> {
    let poly: LaurentPoly = poly.parse().map_err(|e: abtorsion::Error| LabError::Input(e.to_string()))?;
    let grid = |d: usize| n.map_or(d, |n| n as usize);
    let est = if method == "auto" {
        mahler_multivariate::<f64>(&poly, &Strategy::Auto)?
    } else {
        let m: MahlerMethod = method.parse().map_err(|e: abtorsion::Error| LabError::Usage(e.to_string()))?;
        match m {
            MahlerMethod::JensenRoots => mahler_one_var::<f64>(&poly, OneVarMethod::JensenRoots)?,
            MahlerMethod::RiemannCyclic => mahler_one_var::<f64>(&poly, OneVarMethod::RiemannCyclic { n: n.unwrap_or(DEFAULT_RIEMANN_N) })?,
            MahlerMethod::TorusGrid => mahler_multivariate(&poly, &Strategy::TorusGrid { n: grid(DEFAULT_GRID) })?,
            MahlerMethod::BoydLawton => {
                mahler_multivariate(&poly, &Strategy::BoydLawton { direction: None, p: p.unwrap_or(DEFAULT_PRIME) })?
            }
            MahlerMethod::GpmSequence => {
                let moduli = match n {
                    Some(n) => vec![n / 2, n],
                    None => vec![1009, 4001],
                };
                mahler_multivariate(&poly, &Strategy::GpmSequence { p: p.unwrap_or(DEFAULT_PRIME), moduli })?
            }
            MahlerMethod::FiberedJensen => {
                mahler_multivariate(&poly, &Strategy::FiberedJensen { n: grid(default_fibered_grid(poly.num_vars())) })?
            }
        }
    };
    Ok(json!({
        "polynomial": poly.to_string(),
        "method": est.method,
        "value": round12(est.value),
        "measure": round12(est.measure()),
        "error_budget": round12(est.error_budget),
        "samples": est.samples,
        "zeros_skipped": est.zeros_skipped,
    }))
}

fn entry(v: &Value) -> LabResult<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        Value::String(s) => s.trim().parse().map_err(|_| LabError::Input(format!("`{s}` is not an integer"))),
        other => Err(LabError::Input(format!("`{other}` is not an integer"))),
    }
}

/// Smith form of an integer matrix given as `[[...], ...]` or
/// `{"matrix": [[...], ...]}`; entries are integers or decimal strings.
pub fn snf_command(text: &str) -> LabResult<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| LabError::Input(e.to_string()))?;
    let rows = match &v {
        Value::Object(o) => o.get("matrix").ok_or_else(|| LabError::Input("missing `matrix`".into()))?,
        other => other,
    };
    let rows = rows.as_array().ok_or_else(|| LabError::Input("matrix must be an array of rows".into()))?;
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| LabError::Input("each row must be an array".into()))?
                .iter()
                .map(entry)
                .collect::<LabResult<Vec<_>>>()
        })
        .collect::<LabResult<_>>()?;
    let b = BigMatrix::from_rows(rows).map_err(|e| LabError::Input(e.to_string()))?;
    let s = smith_normal_form(&b, false);
    let strings = |v: &[BigInt]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "rows": s.rows,
        "cols": s.cols,
        "rank": s.rank,
        "divisors": strings(&s.divisors),
        "torsion": strings(&s.torsion_divisors()),
        "torsion_order": s.torsion_order().to_string(),
        "cokernel_free_rank": s.cokernel_free_rank(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mahler_methods_agree_on_one_variable() {
        let j = mahler_command("t1^2 - 3*t1 + 1", "jensen_roots", None, None).unwrap();
        let r = mahler_command("t1^2 - 3*t1 + 1", "riemann_cyclic", Some(2048), None).unwrap();
        let (a, b) = (j["value"].as_f64().unwrap(), r["value"].as_f64().unwrap());
        assert!((a - 0.962423650119).abs() < 1e-11);
        assert!((a - b).abs() < 1e-9);
        assert!(matches!(mahler_command("1 + t1", "simpson", None, None), Err(LabError::Usage(_))));
        assert!(matches!(mahler_command("1 + ", "auto", None, None), Err(LabError::Input(_))));
    }

    #[test]
    fn snf_of_small_matrices() {
        let v = snf_command("[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]").unwrap();
        assert_eq!(v["divisors"], json!(["2", "6", "12"]));
        let v = snf_command(r#"{"matrix": [["123456789012345678901234567890", 0]]}"#).unwrap();
        assert_eq!(v["rank"], 1);
        assert_eq!(v["cokernel_free_rank"], 0);
        assert!(snf_command("[[1, 2], [3]]").is_err());
        assert!(snf_command("[[1.5]]").is_err());
    }

    #[test]
    fn fixtures_are_listed() {
        let s = fixtures_list();
        assert_eq!(s.lines().count(), fixture_names().len());
        assert!(s.starts_with("trefoil\tgens: x y;"));
        assert!(fixture_json("whitehead_link").unwrap().contains("l2_acyclic"));
    }
}
