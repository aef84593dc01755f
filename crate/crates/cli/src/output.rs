//! Serialization with fixed 17-significant-digit floats.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Writes every finite float as `d.dddddddddddddddde±x` (17 significant
/// digits). Non-finite values never reach it: serde_json emits `null`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", sci(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits in scientific notation; `nan`/`inf` spelled out.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("serializable record");
    String::from_utf8(buf).expect("json is utf-8")
}

/// Where a command's output goes: an explicit file, a file named after the
/// command inside the output directory, or stdout.
pub fn open(out: Option<&Path>, out_dir: Option<&Path>, default_name: &str) -> io::Result<Box<dyn Write>> {
    let target: Option<PathBuf> = match (out, out_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => {
            fs::create_dir_all(dir)?;
            Some(dir.join(default_name))
        }
        (None, None) => None,
    };
    Ok(match target {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(to_json(&0.5), "5.0000000000000000e-1");
        assert_eq!(to_json(&vec![0.1, f64::NAN]), "[1.0000000000000001e-1,null]");
        let back: f64 = serde_json::from_str(&to_json(&std::f64::consts::PI)).unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }
}
