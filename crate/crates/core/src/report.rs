//! Report rendering. Every format is a pure function of the scan report, so
//! identical configs give byte-identical output.

use std::fmt::Write;

use crate::config::ReportFormat;
use crate::scan::{ClassificationRecord, ScanReport};

pub const CSV_COLUMNS: [&str; 15] = [
    "theta1",
    "theta2",
    "sigma1",
    "sigma2",
    "gHH",
    "trB",
    "trJ",
    "dir_exists",
    "tot_umb",
    "pseudo",
    "ortho",
    "subgeo",
    "causal",
    "trapped",
    "max_residual",
];

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn render(report: &ScanReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Text => to_text(report),
    }
}

pub fn to_json(report: &ScanReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is plain data");
    s.push('\n');
    s
}

fn coord_names(report: &ScanReport) -> Vec<String> {
    report
        .records
        .first()
        .map(|r| r.coords.keys().cloned().collect())
        .unwrap_or_default()
}

fn csv_row(r: &ClassificationRecord) -> Vec<String> {
    let mut row: Vec<String> = r.coords.values().map(|v| format_float(*v)).collect();
    row.extend([r.theta1, r.theta2, r.sigma1, r.sigma2, r.g_hh, r.tr_b, r.tr_j].map(format_float));
    row.extend(
        [r.direction_exists, r.totally_umbilical, r.pseudo_umbilical, r.ortho_umbilical].map(|b| b.to_string()),
    );
    row.push(r.subgeodesic.as_str().to_string());
    row.push(r.causal_character.as_str().to_string());
    row.push(r.trapped_status.as_str().to_string());
    row.push(format_float(r.max_residual));
    row
}

pub fn to_csv(report: &ScanReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = coord_names(report);
    header.extend(CSV_COLUMNS.iter().map(|c| c.to_string()));
    w.write_record(&header).expect("in-memory write");
    for r in &report.records {
        w.write_record(csv_row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are utf-8")
}

pub fn to_text(report: &ScanReport) -> String {
    let s = &report.summary;
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "metric   {} {:?}", c.metric, c.metric_params);
    let _ = writeln!(out, "surface  {} {:?}", c.surface, c.surface_params);
    let _ = writeln!(out, "points   {} classified, {} skipped, {} failed", s.classified, s.skipped.len(), s.failed.len());
    for r in &report.records {
        let coords: Vec<String> = r.coords.iter().map(|(k, v)| format!("{k}={}", format_float(*v))).collect();
        let _ = writeln!(out);
        let _ = writeln!(out, "[{}]", coords.join(" "));
        let _ = writeln!(
            out,
            "  theta = ({}, {})  sigma = ({}, {})  g(H,H) = {}",
            format_float(r.theta1),
            format_float(r.theta2),
            format_float(r.sigma1),
            format_float(r.sigma2),
            format_float(r.g_hh)
        );
        let _ = writeln!(
            out,
            "  totally umbilical {}  direction {}  pseudo {}  ortho {}  subgeodesic {}",
            r.totally_umbilical,
            r.direction_exists,
            r.pseudo_umbilical,
            r.ortho_umbilical,
            r.subgeodesic.as_str()
        );
        let _ = writeln!(
            out,
            "  causal {}  trapped {}  max residual {}",
            r.causal_character.as_str(),
            r.trapped_status.as_str(),
            format_float(r.max_residual)
        );
        if let Some(k) = r.gaussian_curvature {
            let _ = writeln!(out, "  gaussian curvature {}", format_float(k));
        }
        for d in &r.diagnostics {
            let _ = writeln!(out, "  note: {d}");
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "summary");
    let k = &s.counts;
    let _ = writeln!(
        out,
        "  totally umbilical {}  direction {}  pseudo {}  ortho {}  subgeodesic {}",
        k.totally_umbilical, k.direction_exists, k.pseudo_umbilical, k.ortho_umbilical, k.subgeodesic
    );
    if let Some(t) = s.region_trapped_status {
        let _ = writeln!(out, "  region trapped status {}", t.as_str());
    }
    for (name, v) in &s.max_residuals {
        let _ = writeln!(out, "  max {name} {}", format_float(*v));
    }
    for locus in &s.loci {
        if locus.degenerate {
            let _ = writeln!(out, "  locus in {}: umbilical direction across the whole bracket", locus.param);
        }
        for root in &locus.roots {
            let _ = writeln!(out, "  locus {} = {}", locus.param, format_float(root.value));
        }
    }
    for f in s.skipped.iter().chain(&s.failed) {
        let _ = writeln!(out, "  {:?}: {}", f.coords, f.reason);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_grid, parse_params, ScanConfig};
    use crate::scan::run_scan;

    fn report() -> ScanReport {
        let cfg = ScanConfig {
            metric: "kerr_kerr_coords".into(),
            metric_params: parse_params("param", "m=1,a=0.5").unwrap(),
            surface: "const_vr_kerr".into(),
            surface_params: parse_params("sparam", "v=0,r=1.8660254037844386").unwrap(),
            grid: parse_grid("theta=0.3:2.8:4").unwrap(),
            ..Default::default()
        };
        run_scan(&cfg).unwrap()
    }

    #[test]
    fn float_format_is_shortest_round_trip() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1e-300), "1e-300");
        let x = 1.0 / 3.0;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_has_fixed_columns() {
        let csv = to_csv(&report());
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("theta,phi,theta1,theta2,sigma1,sigma2,gHH,trB,trJ,dir_exists"));
        assert!(header.ends_with("causal,trapped,max_residual"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 17);
        assert_eq!(first[first.len() - 2], "marginally_trapped");
    }

    #[test]
    fn json_records_round_trip_bit_exactly() {
        let r = report();
        let json = to_json(&r);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let back: Vec<ClassificationRecord> = serde_json::from_value(value["records"].clone()).unwrap();
        assert_eq!(back, r.records);
        assert_eq!(to_json(&r), json);
    }

    #[test]
    fn text_mentions_summary() {
        let text = to_text(&report());
        assert!(text.contains("region trapped status marginally_trapped"));
    }
}
