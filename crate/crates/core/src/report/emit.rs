use super::{Error, OutputFormat, Report};

/// Serialize a report. JSON keeps the struct key order and shortest
/// round-trip float literals; CSV is the record table with header
/// `check,anchor,measured,bound,pass`, RFC-4180 quoting and LF endings.
pub fn emit_report(report: &Report, format: OutputFormat) -> Result<Vec<u8>, Error> {
    match format {
        OutputFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            writer
                .write_record(["check", "anchor", "measured", "bound", "pass"])
                .map_err(|e| Error::Suite(e.to_string()))?;
            for record in &report.records {
                writer
                    .write_record([
                        record.name.as_str(),
                        record.anchor.as_str(),
                        &format_float(record.measured),
                        &format_float(record.bound),
                        if record.pass { "true" } else { "false" },
                    ])
                    .map_err(|e| Error::Suite(e.to_string()))?;
            }
            writer.into_inner().map_err(|e| Error::Suite(e.to_string()))
        }
    }
}

/// Shortest decimal that round-trips to the same f64 (`{}` on f64).
fn format_float(value: f64) -> String {
    format!("{value}")
}

/// Parse a JSON report back (round-trip partner of [`emit_report`]).
pub fn parse_report(bytes: &[u8]) -> Result<Report, Error> {
    Ok(serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::super::{Header, Record, Report, ToleranceTable};
    use super::*;

    fn tiny_report(records: Vec<Record>) -> Report {
        Report::assemble(
            Header {
                artifact: "symplecta".into(),
                version: "0.0.0".into(),
                suite: "core".into(),
                seed: 0,
                tolerances: ToleranceTable::default(),
                config_echo: "{}".into(),
                generated_at: "1970-01-01T00:00:00Z".into(),
                elapsed_seconds: 0.0,
            },
            records,
        )
    }

    #[test]
    fn empty_record_list_gives_header_only_csv() {
        let report = tiny_report(vec![]);
        let csv = emit_report(&report, OutputFormat::Csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "check,anchor,measured,bound,pass\n"
        );
    }

    #[test]
    fn one_record_gives_two_lines() {
        let report = tiny_report(vec![Record::hard("a-check", "anchor/x", 0.5, 1.0)]);
        let csv = String::from_utf8(emit_report(&report, OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n'));
        assert!(csv.contains("a-check,anchor/x,0.5,1,true"));
    }

    #[test]
    fn json_roundtrip_is_structural_identity() {
        let report = tiny_report(vec![
            Record::hard("b", "anchor/b", 1e-12, 1e-9),
            Record::soft("a", "anchor/a", 0.25, 0.1),
        ]);
        let bytes = emit_report(&report, OutputFormat::Json).unwrap();
        let back = parse_report(&bytes).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn records_are_sorted_by_name() {
        let report = tiny_report(vec![
            Record::hard("z-last", "anchor/z", 0.0, 1.0),
            Record::hard("a-first", "anchor/a", 0.0, 1.0),
        ]);
        assert_eq!(report.records[0].name, "a-first");
        assert_eq!(report.summary.total, 2);
        assert_eq!(report.summary.failed, 0);
    }

    #[test]
    fn quoting_follows_rfc4180() {
        let report = tiny_report(vec![Record::hard("name,with,commas", "anchor", 0.0, 1.0)]);
        let csv = String::from_utf8(emit_report(&report, OutputFormat::Csv).unwrap()).unwrap();
        assert!(csv.contains("\"name,with,commas\""));
    }
}
