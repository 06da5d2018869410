use ndarray::{Array1, Array2};
use num_complex::Complex64;
use tempfile::tempdir;
use tycoon_core::io::{
    decode_pgm, decode_tfr, encode_pgm, encode_tfr, read_alpha_csv, read_if_trace, read_json,
    read_signal_csv, read_tfr, write_alpha_csv, write_if_overlay, write_if_trace, write_json,
    write_signal_csv, write_tfr, Truth,
};
use tycoon_core::synth::{make_two_component_benchmark, BenchmarkSpec};
use tycoon_core::{ChirpTrack, SampledSignal, TFGrid, TFMatrix};

#[test]
fn tfr_round_trip_is_bit_exact() {
    let g = TFGrid::new(13, 0.07).unwrap();
    let v = Array2::from_shape_fn(g.shape(), |(n, m)| Complex64::new((n * 31 + m) as f64 / 7.0, -(m as f64).sqrt()));
    let f = TFMatrix::from_values(g, v).unwrap();
    let dir = tempdir().unwrap();
    let p = dir.path().join("x.tfr");
    write_tfr(&p, &f).unwrap();
    let back = read_tfr(&p).unwrap();
    assert_eq!(back.grid(), f.grid());
    assert!(back.values().iter().zip(f.values()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    assert_eq!(std::fs::read(&p).unwrap(), encode_tfr(&f));
}

#[test]
fn corrupt_tfr_is_rejected() {
    let f = TFMatrix::zeros(TFGrid::new(6, 0.1).unwrap());
    let bytes = encode_tfr(&f);
    assert!(decode_tfr(&bytes[..bytes.len() - 1]).is_err());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_tfr(&bad).is_err());
    let mut v2 = bytes.clone();
    v2[4] = 2;
    assert!(decode_tfr(&v2).is_err());
    let err = read_tfr(std::path::Path::new("/nonexistent/missing.tfr")).unwrap_err();
    assert!(err.to_string().contains("missing.tfr"));
}

#[test]
fn signal_csv_round_trip() {
    let s = SampledSignal::new(Array1::from_shape_fn(50, |k| (k as f64 * 0.37).sin() * 1e3), 0.025).unwrap();
    let dir = tempdir().unwrap();
    let p = dir.path().join("s.csv");
    write_signal_csv(&p, &s).unwrap();
    let back = read_signal_csv(&p).unwrap();
    assert_eq!(back.samples(), s.samples());
    assert!((back.dt() - 0.025).abs() < 1e-15);
    std::fs::write(&p, "t,value\n0,1\n0.1,2\n0.3,3\n").unwrap();
    assert!(read_signal_csv(&p).is_err());
    std::fs::write(&p, "t,value\n0,1\n0.1,abc\n").unwrap();
    assert!(read_signal_csv(&p).is_err());
}

#[test]
fn alpha_and_if_traces_round_trip() {
    let dir = tempdir().unwrap();
    let alpha = ChirpTrack::new(Array1::from_shape_fn(30, |k| k as f64 * -0.013)).unwrap();
    let p = dir.path().join("a.csv");
    write_alpha_csv(&p, &alpha, 0.1).unwrap();
    assert_eq!(read_alpha_csv(&p).unwrap().values(), alpha.values());

    let inst: Vec<f64> = (0..41).map(|k| 1.0 + 0.01 * k as f64).collect();
    let q = dir.path().join("if.csv");
    write_if_trace(&q, &inst, 0.1).unwrap();
    let back = read_if_trace(&q, 41, 0.1).unwrap();
    for (a, b) in back.iter().zip(&inst) {
        assert!((a - b).abs() < 1e-12);
    }
    let fine = read_if_trace(&q, 81, 0.05).unwrap();
    assert!((fine[1] - 1.005).abs() < 1e-9);
    write_if_trace(&q, &[1.0, -0.5, 1.0], 1.0).unwrap();
    assert!(read_if_trace(&q, 3, 1.0).is_err());
}

#[test]
fn truth_json_round_trip_and_overlay() {
    let b = make_two_component_benchmark(&BenchmarkSpec::desk_scale(12.0, 3), None).unwrap();
    let truth = Truth::from_components(0.1, &b.components);
    let dir = tempdir().unwrap();
    let p = dir.path().join("truth.json");
    write_json(&p, &truth).unwrap();
    let back: Truth = read_json(&p).unwrap();
    assert_eq!(back.to_components().unwrap(), b.components);
    let o = dir.path().join("ov.csv");
    write_if_overlay(&o, &back).unwrap();
    let text = std::fs::read_to_string(&o).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,if_1,if_2");
    assert_eq!(lines.len(), 1 + b.signal.len());
    assert!(lines[1].ends_with(','));
}

#[test]
fn pgm_round_trip_and_orientation() {
    let img = Array2::from_shape_fn((5, 7), |(n, m)| if n == 4 { 1.0 } else { m as f64 / 6.0 * 0.5 });
    let bytes = encode_pgm(&img);
    let (w, h, px) = decode_pgm(&bytes).unwrap();
    assert_eq!((w, h), (7, 5));
    assert!(px[..7].iter().all(|&p| p == 255));
    assert_eq!(px[7], 0);
    assert_eq!(px[7 + 6], 128);
    assert!(decode_pgm(b"P2\n1 1\n255\n\x00").is_err());
    assert!(decode_pgm(&bytes[..bytes.len() - 1]).is_err());
}
