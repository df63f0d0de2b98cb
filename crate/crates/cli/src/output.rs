use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Decimal with 17 significant digits, scientific outside `[1e-5, 1e16)`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        let decimals = (16 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

pub fn open_sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// One `#` header line, then rows.
pub fn write_csv(sink: &mut dyn Write, header: &str, rows: &[Vec<String>]) -> io::Result<()> {
    writeln!(sink, "# {header}")?;
    for row in rows {
        writeln!(sink, "{}", row.join(","))?;
    }
    sink.flush()
}
