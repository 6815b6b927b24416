use friedlander::airy::ai_real;
use friedlander::field::{linspace, ComplexField};
use friedlander::norms::{fit_scaling, ScanResult, ScanRow};
use friedlander::phase::PhaseTable;
use num_complex::Complex64;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

#[test]
fn phase_table_survives_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let table = PhaseTable::new(50);
    {
        let mut w = BufWriter::new(File::create(&path).unwrap());
        writeln!(w, "# written by the test").unwrap();
        table.write_csv(&mut w).unwrap();
    }
    let back = PhaseTable::read_csv(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back.len(), 50);
    for (k, (&z, &lp)) in back.zeros.iter().zip(&back.lprime).enumerate() {
        assert!(ai_real(-z).abs() <= 1e-10, "k = {}", k + 1);
        assert!((lp - 2.0 * std::f64::consts::PI * back.aiprime_sq[k]).abs() <= 1e-8 * lp);
        if k > 0 {
            assert!(z > back.zeros[k - 1]);
        }
    }
}

#[test]
fn field_binary_roundtrip() {
    let (t, x, y) = (linspace(0.0, 1.0, 3), linspace(0.5, 1.5, 4), linspace(-1.0, 1.0, 5));
    let f = ComplexField::from_fn(t, x, y, |t, x, y| Complex64::new(t + x, x * y - t)).unwrap();
    let mut file = tempfile::tempfile().unwrap();
    f.write_binary(&mut file).unwrap();
    use std::io::{Seek, SeekFrom};
    file.seek(SeekFrom::Start(0)).unwrap();
    let g = ComplexField::read_binary(&mut file).unwrap();
    assert_eq!(f, g);
    assert!(ComplexField::read_binary(&[0u8; 10][..]).is_err());
}

#[test]
fn scan_csv_and_fit() {
    let rows = [50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&l: &f64| ScanRow { h: l.powi(-2), a: l.powf(-2.0 / 3.0), m: l.cbrt(), lambda: l, q: 4.0, r: f64::INFINITY, lhs: l.powf(0.1), rhs: 1.0, quotient: l.powf(0.1) })
        .collect();
    let scan = ScanResult { rows };
    let mut out = Vec::new();
    scan.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("h,a,M,lambda,q,r,lhs,rhs,quotient\n"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().contains(",4,inf,"));
    let fit = fit_scaling(&scan).unwrap();
    assert!((fit.slope - 0.1).abs() < 1e-12 && fit.n == 4);
    assert!(fit.summary().starts_with("slope="));
    let short = ScanResult { rows: scan.rows[..3].to_vec() };
    assert!(fit_scaling(&short).is_err());
}
