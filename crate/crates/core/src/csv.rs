//! Plot-ready CSV output (LF line endings, 15 significant digits).

use std::io::{self, Write};

/// Formats `x` with 15 significant digits in the style of C's `%.15g`.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Writes `header` then one row per entry, 1-based index first.
pub fn write_indexed<W: Write>(mut out: W, header: &str, rows: &[Vec<f64>]) -> io::Result<()> {
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for (i, row) in rows.iter().enumerate() {
        let mut line = (i + 1).to_string();
        for v in row {
            line.push(',');
            line.push_str(&fmt15(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Analytic and numerical spectra side by side, both sorted ascending.
pub fn write_spectrum<W: Write>(out: W, analytic: &[f64], numeric: &[f64]) -> io::Result<()> {
    let rows: Vec<Vec<f64>> = analytic.iter().zip(numeric).map(|(&a, &n)| vec![a, n, (a - n).abs()]).collect();
    write_indexed(out, "index,energy_analytic,energy_numeric,abs_diff", &rows)
}

pub fn write_density<W: Write>(out: W, density: &[f64]) -> io::Result<()> {
    let rows: Vec<Vec<f64>> = density.iter().map(|&d| vec![d]).collect();
    write_indexed(out, "site,density", &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt15(0.0), "0");
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(-0.5), "-0.5");
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(1.25f64.sqrt()), "1.11803398874989");
        assert_eq!(fmt15(1.5e-20), "1.5e-20");
        assert_eq!(fmt15(123456789012345678.0), "1.23456789012346e17");
    }

    #[test]
    fn parse_back_within_fifteen_digits() {
        for &x in &[0.555555555555556, 1e-9, 1.23456789012345, -2.5e-7] {
            let y: f64 = fmt15(x).parse().unwrap();
            assert!((x - y).abs() <= 1e-14 * x.abs());
        }
    }

    #[test]
    fn spectrum_layout() {
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &[-1.0, 0.0, 1.0], &[-1.0, 1e-17, 1.0]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "index,energy_analytic,energy_numeric,abs_diff\n1,-1,-1,0\n2,0,1e-17,1e-17\n3,1,1,0\n"
        );
    }

    #[test]
    fn density_layout() {
        let mut buf = Vec::new();
        write_density(&mut buf, &[0.8, 0.0, 0.2]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "site,density\n1,0.8\n2,0\n3,0.2\n");
    }
}
