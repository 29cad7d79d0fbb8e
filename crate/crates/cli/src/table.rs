use std::io::{self, Write};

use crate::config::RunConfig;

/// 12 significant digits, `.` as decimal separator, no locale.
///
/// Plain notation for exponents in `-5..12`, scientific otherwise.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exponent) {
        format!("{x:.*}", (11 - exponent) as usize)
    } else {
        sci
    }
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => (*s).to_string(),
        }
    }
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    /// A two-column `quantity,value` table.
    pub fn quantities(entries: Vec<(&'static str, Cell)>) -> Self {
        let mut t = Self::new(&["quantity", "value"]);
        t.rows = entries.into_iter().map(|(k, v)| vec![Cell::Text(k), v]).collect();
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Config echo, header, then rows.
    pub fn write_csv<W: Write>(&self, config: &RunConfig, out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", config.to_config_line())?;
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(5.232445013017794), "5.23244501302");
        assert_eq!(format_number(0.0), "0.00000000000");
        assert_eq!(format_number(-1234.5), "-1234.50000000");
        assert_eq!(format_number(9.99999999999951), "10.0000000000");
        assert_eq!(format_number(3.7407516e-3), "0.00374075160000");
        assert_eq!(format_number(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_number(2.0e15), "2.00000000000e15");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn every_plain_rendering_has_twelve_digits() {
        for x in [1e-5, 0.123456789012345, 1.0 / 3.0, 42.0, 99999999999.9] {
            let s = format_number(x);
            let digits: String = s.chars().filter(char::is_ascii_digit).collect();
            let significant = digits.trim_start_matches('0');
            assert_eq!(significant.len(), 12, "{x} → {s}");
        }
    }
}
