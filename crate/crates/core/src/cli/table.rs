//! Comma-separated tables with fixed 12-significant-digit numbers.

use std::fmt::Write as _;

use super::CliError;

const SIG_DIGITS: i32 = 12;

/// Formats like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A table cell.
pub enum Cell {
    Int(u64),
    Num(f64),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

pub struct Table {
    out: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            out: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns);
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        writeln!(self.out, "{}", line.join(",")).expect("write to String");
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Reads `(n_prime, t)` rows from a schedule table. The header must name the
/// `n_prime` and `t` columns; other columns are ignored.
pub fn parse_schedule(text: &str) -> Result<Vec<(u64, f64)>, CliError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Input("schedule: empty input".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |name: &str| {
        names
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| CliError::Input(format!("schedule: header lacks a `{name}` column")))
    };
    let (n_col, t_col) = (col("n_prime")?, col("t")?);

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != names.len() {
            return Err(CliError::Input(format!(
                "schedule row {}: expected {} fields, got {}",
                i + 1,
                names.len(),
                fields.len()
            )));
        }
        let n: u64 = fields[n_col]
            .parse()
            .map_err(|_| CliError::Input(format!("schedule row {}: bad n_prime {:?}", i + 1, fields[n_col])))?;
        let t: f64 = fields[t_col]
            .parse()
            .map_err(|_| CliError::Input(format!("schedule row {}: bad t {:?}", i + 1, fields[t_col])))?;
        if n == 0 || !t.is_finite() {
            return Err(CliError::Input(format!("schedule row {}: out of range", i + 1)));
        }
        rows.push((n, t));
    }
    if rows.is_empty() {
        return Err(CliError::Input("schedule: no rows".into()));
    }
    if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(CliError::Input("schedule: n_prime must be strictly increasing".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(1.0 / 41.0), "0.0243902439024");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(1e-7), "1e-07");
        assert_eq!(fmt_num(1.5e-5), "1.5e-05");
        assert_eq!(fmt_num(1.5e-4), "0.00015");
        assert_eq!(fmt_num(1e12), "1e+12");
        assert_eq!(fmt_num(999999999999.0), "999999999999");
        assert_eq!(fmt_num(0.99999999999999), "1");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b", "c", "d"]);
        t.row(vec![3u64.into(), 0.5.into(), true.into(), None.into()]);
        assert_eq!(t.finish(), "a,b,c,d\n3,0.5,true,\n");
    }

    #[test]
    fn schedule_parsing() {
        let rows = parse_schedule("n_prime,t,achieved\n40,0.5,0.01\n\n80,0.75,0.01\n").unwrap();
        assert_eq!(rows, vec![(40, 0.5), (80, 0.75)]);
        assert!(parse_schedule("").is_err());
        assert!(parse_schedule("n_prime,t\n").is_err());
        assert!(parse_schedule("n,t\n40,0.5").is_err());
        assert!(parse_schedule("n_prime,t\n40,abc").is_err());
        assert!(parse_schedule("n_prime,t\n40").is_err());
        assert!(parse_schedule("n_prime,t\n80,0.5\n40,0.6").is_err());
    }
}
