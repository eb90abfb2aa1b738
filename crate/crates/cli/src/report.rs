use std::io::{self, Write};

use crate::config::{Dims, Precision};
use crate::run::BenchRecord;

pub const CSV_HEADER: &str = "size,precision,dims,batch,seconds,gflops,verified";

/// `printf("%g")`: six significant digits, trailing zeros removed,
/// exponent form below `1e-4` and from `1e6` on.
pub fn format_g(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(mut w: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.size,
            r.precision,
            r.dims,
            r.batch,
            format_g(r.seconds),
            format_g(r.gflops),
            r.verified
        )?;
    }
    Ok(())
}

/// One row per size with GFlop/s columns Single-2, Single-3, Double-2,
/// Double-3. Missing combinations print `-`; unverified rates get a `*`.
pub fn write_table<W: Write>(mut w: W, records: &[BenchRecord]) -> io::Result<()> {
    let columns = [
        (Precision::Single, Dims::Two, "Single-2"),
        (Precision::Single, Dims::Three, "Single-3"),
        (Precision::Double, Dims::Two, "Double-2"),
        (Precision::Double, Dims::Three, "Double-3"),
    ];
    write!(w, "{:>4}", "Size")?;
    for (_, _, name) in &columns {
        write!(w, " {name:>10}")?;
    }
    writeln!(w)?;
    let mut sizes: Vec<usize> = records.iter().map(|r| r.size).collect();
    sizes.dedup();
    for size in sizes {
        write!(w, "{size:>4}")?;
        for (p, d, _) in &columns {
            let cell = records
                .iter()
                .find(|r| r.size == size && r.precision == *p && r.dims == *d)
                .map(|r| format!("{:.2}{}", r.gflops, if r.verified { "" } else { "*" }))
                .unwrap_or_else(|| "-".into());
            write!(w, " {cell:>10}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
