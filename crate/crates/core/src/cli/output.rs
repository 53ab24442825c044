use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON with every float written as 17 significant digits in
/// scientific notation, so values survive a round trip unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundTripFormatter;

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTripFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Writes `x,y,value` rows with LF line endings; `None` values become `nan`.
pub fn write_grid_csv<W: Write>(
    out: W,
    rows: impl IntoIterator<Item = (f64, f64, Option<f64>)>,
) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["x", "y", "value"])?;
    for (x, y, v) in rows {
        let value = v.map_or_else(|| "nan".to_string(), |v| v.to_string());
        writer.write_record([x.to_string(), y.to_string(), value])?;
    }
    writer.flush()?;
    Ok(())
}
