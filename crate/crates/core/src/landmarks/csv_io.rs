//! Landmark CSV ingestion/emission.
//!
//! Columns: `index,name,x_mm,y_mm,z_mm,valid`, one row per landmark in
//! registry order. This is the exchange format for anonymized landmark
//! datasets.

use super::{registry, LandmarkSet};
use crate::{CoreError, Result};
use std::io::{Read, Write};

pub fn write_landmark_csv<W: Write>(w: W, set: &LandmarkSet) -> Result<()> {
    let reg = registry();
    if set.len() != reg.len() {
        return Err(CoreError::Landmarks(format!(
            "expected {} landmarks, got {}",
            reg.len(),
            set.len()
        )));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "name", "x_mm", "y_mm", "z_mm", "valid"])?;
    for l in reg.entries() {
        let c = set.get(l.index);
        out.write_record([
            l.index.to_string(),
            l.name.to_string(),
            format!("{:.6}", c[0]),
            format!("{:.6}", c[1]),
            format!("{:.6}", c[2]),
            (set.valid[l.index - 1] as u8).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_landmark_csv<R: Read>(r: R) -> Result<LandmarkSet> {
    let reg = registry();
    let mut set = LandmarkSet::zeros(reg.len());
    let mut seen = vec![false; reg.len()];
    let mut rdr = csv::Reader::from_reader(r);
    for record in rdr.records() {
        let record = record?;
        if record.len() != 6 {
            return Err(CoreError::Format(format!(
                "landmark csv row has {} fields, want 6",
                record.len()
            )));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|e| CoreError::Format(format!("bad index `{}`: {e}", &record[0])))?;
        if index < 1 || index > reg.len() {
            return Err(CoreError::Format(format!("landmark index {index} out of range")));
        }
        if seen[index - 1] {
            return Err(CoreError::Format(format!("duplicate landmark index {index}")));
        }
        seen[index - 1] = true;
        let expect = reg.get(index).name;
        if &record[1] != expect {
            return Err(CoreError::Format(format!(
                "landmark {index} named `{}`, registry says `{expect}`",
                &record[1]
            )));
        }
        let mut c = [0.0f64; 3];
        for (k, field) in record.iter().skip(2).take(3).enumerate() {
            c[k] = field
                .parse()
                .map_err(|e| CoreError::Format(format!("bad coordinate `{field}`: {e}")))?;
        }
        set.set(index, c);
        set.valid[index - 1] = &record[5] == "1" || record[5].eq_ignore_ascii_case("true");
    }
    if seen.iter().any(|&s| !s) {
        let missing: Vec<usize> =
            seen.iter().enumerate().filter(|(_, &s)| !s).map(|(i, _)| i + 1).collect();
        return Err(CoreError::Format(format!("missing landmark rows: {missing:?}")));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_lossless_at_six_decimals() {
        let set = LandmarkSet::new(
            (0..90)
                .map(|i| [i as f64 * 1.25, -(i as f64) * 0.5, i as f64 + 0.125])
                .collect(),
        );
        let mut buf = Vec::new();
        write_landmark_csv(&mut buf, &set).unwrap();
        let back = read_landmark_csv(buf.as_slice()).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn missing_rows_are_rejected() {
        let set = LandmarkSet::zeros(90);
        let mut buf = Vec::new();
        write_landmark_csv(&mut buf, &set).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let truncated: String = text.lines().take(50).collect::<Vec<_>>().join("\n");
        assert!(read_landmark_csv(truncated.as_bytes()).is_err());
    }

    #[test]
    fn wrong_name_is_rejected() {
        let set = LandmarkSet::zeros(90);
        let mut buf = Vec::new();
        write_landmark_csv(&mut buf, &set).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("Bregma", "Golgafrincham");
        assert!(read_landmark_csv(text.as_bytes()).is_err());
    }
}
