//! Hex and number formatting shared by the CLI-facing surfaces.

use crate::error::{Error, Result};

/// Decodes hex, tolerating surrounding whitespace and upper case.
pub fn decode(text: &str, what: &'static str) -> Result<Vec<u8>> {
    hex::decode(text.trim()).map_err(|source| Error::Hex { what, source })
}

pub fn encode(bytes: &[u8]) -> String {
    hex::encode(bytes)
}

/// Renders a millisecond figure without a trailing `.0` when it is integral.
pub fn number(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

/// Like [`number`], with thousands separators on the integer part.
pub fn grouped(value: f64) -> String {
    let plain = number(value);
    let (sign, rest) = match plain.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", plain.as_str()),
    };
    let (int, frac) = match rest.find('.') {
        Some(i) => rest.split_at(i),
        None => (rest, ""),
    };
    let mut out = String::with_capacity(plain.len() + int.len() / 3);
    for (i, ch) in int.chars().enumerate() {
        if i > 0 && (int.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    format!("{sign}{out}{frac}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(number(27450.0), "27450");
        assert_eq!(number(0.5), "0.5");
        assert_eq!(grouped(59_964_525.0), "59,964,525");
        assert_eq!(grouped(915.0), "915");
        assert_eq!(grouped(1234.5), "1,234.5");
        assert_eq!(grouped(-1000.0), "-1,000");
    }

    #[test]
    fn hex_errors_name_the_field() {
        let err = decode("zz", "iv").unwrap_err();
        assert!(err.to_string().contains("iv"));
    }
}
