use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::lure::Trajectory;
use crate::splitting::SolverReport;

/// Shortest-form decimal with 17 significant digits, like C's `%.17g`.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn push_row<'a>(out: &mut String, fields: impl IntoIterator<Item = &'a str>) {
    let mut first = true;
    for f in fields {
        if !first {
            out.push(',');
        }
        out.push_str(f);
        first = false;
    }
    out.push('\n');
}

/// `iter,residual,x_1,...,x_n`, one row per iteration.
pub fn residual_csv(report: &SolverReport, dim: usize) -> String {
    let mut out = String::new();
    let mut header = vec!["iter".to_string(), "residual".to_string()];
    header.extend((1..=dim).map(|i| format!("x_{i}")));
    push_row(&mut out, header.iter().map(String::as_str));
    for (k, (r, x)) in report
        .residual_history
        .iter()
        .zip(&report.iterates)
        .enumerate()
    {
        let mut row = vec![(k + 1).to_string(), fmt_g17(*r)];
        row.extend(x.iter().map(|v| fmt_g17(*v)));
        push_row(&mut out, row.iter().map(String::as_str));
    }
    out
}

/// `t,x_1,...,x_n,lambda_1,...,lambda_m`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.states.first().map_or(0, |x| x.len());
    let m = traj.lambdas.first().map_or(0, |l| l.len());
    let mut out = String::new();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=m).map(|i| format!("lambda_{i}")));
    push_row(&mut out, header.iter().map(String::as_str));
    for ((t, x), l) in traj.times.iter().zip(&traj.states).zip(&traj.lambdas) {
        let mut row = vec![fmt_g17(*t)];
        row.extend(x.iter().map(|v| fmt_g17(*v)));
        row.extend(l.iter().map(|v| fmt_g17(*v)));
        push_row(&mut out, row.iter().map(String::as_str));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, contents)
}

pub fn fmt_vec(v: &crate::RealVec) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}", fmt_g17(*x));
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_c_printf() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.1, "0.10000000000000001"),
            (-2.5, "-2.5"),
            (0.68, "0.68000000000000005"),
            (1e-5, "1.0000000000000001e-05"),
            (1.5e-4, "0.00014999999999999999"),
            (123456789.0, "123456789"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (f64::INFINITY, "inf"),
        ];
        for (v, want) in cases {
            assert_eq!(fmt_g17(v), want, "{v:e}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for v in [std::f64::consts::PI, -1.0 / 3.0, 6.02214076e23, 1.2345e-300] {
            assert_eq!(fmt_g17(v).parse::<f64>().unwrap(), v);
        }
    }
}
