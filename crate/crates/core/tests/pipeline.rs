use std::io::BufReader;

use latgen::bounds::ZetaContext;
use latgen::experiments::{read_reports_csv, run_unimodular_experiment, write_reports_csv};
use latgen::groupgen::{generation_prob_exact, generation_bound_check, quotient_group};
use latgen::lattice::LatticeBasis;
use latgen::numeric::{int, rat};
use latgen::sampling::{sample_lattice_point_in_window, RngStream};
use latgen::{ExperimentConfig, Window};

#[test]
fn json_lattice_sampling_and_generation() {
    let l = LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["2", "1"], ["1/2", "3"]]}"#).unwrap();
    let w = Window::new(int(12), 2).unwrap();
    let support: Vec<_> = l.enumerate_window(&w).unwrap().into_iter().map(|p| p.vector).collect();
    let mut rng = RngStream::new(3, 0);
    let draws: Vec<_> = (0..400).map(|_| sample_lattice_point_in_window(&l, &w, &mut rng, 10_000).unwrap()).collect();
    assert!(draws.iter().all(|v| support.contains(v)));
    let own = l.basis().columns();
    assert!(l.generates_lattice(&own).unwrap());
    let doubled: Vec<_> = own.iter().map(|c| c.iter().map(|x| x * int(2)).collect()).collect();
    assert!(!l.generates_lattice(&doubled).unwrap());
}

#[test]
fn quotient_of_doubled_lattice() {
    let l = LatticeBasis::from_integer_columns(&[vec![2, 1], vec![1, 3]]).unwrap();
    let sub: Vec<_> = l.basis().columns().iter().map(|c| c.iter().map(|x| x * int(2)).collect()).collect();
    let (g, _) = quotient_group(&l, &sub).unwrap();
    assert_eq!(g.factors(), &[2, 2]);
    // three uniform elements generate (Z/2)^2 with probability (1 - 1/8)(1 - 1/4)
    assert_eq!(generation_prob_exact(&g, 3), rat(21, 32));
}

#[test]
fn group_bounds_dominate_ideal_product() {
    let report = generation_bound_check(4, &ZetaContext::new(20)).unwrap();
    assert!(report.all_hold());
}

#[test]
fn report_file_round_trip() {
    let cfg = ExperimentConfig {
        n: vec![2],
        reps: 3,
        samples: 200,
        seed: 9,
        ..Default::default()
    };
    let reports = run_unimodular_experiment(&cfg).unwrap();
    let dir = std::env::temp_dir().join(format!("latgen-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.csv");
    write_reports_csv(std::fs::File::create(&path).unwrap(), &reports).unwrap();
    let back = read_reports_csv(BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back, reports);
    let again = run_unimodular_experiment(&cfg).unwrap();
    assert_eq!(again, reports);
}
