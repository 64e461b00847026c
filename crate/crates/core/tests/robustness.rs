//! Spot checks across the admissible parameter space, away from the
//! reference points the acceptance suite pins: sharp profiles, the edge of
//! the closed-form branch, many fields, and several distinct winding ratios.

use hopfion_core::*;

#[test]
fn stress_parameter_space() {
    // sharp profile: q = 0.05
    let spec = ModelSpec::new(vec![0.75], vec![20], vec![1], Scale::new(1.0).unwrap()).unwrap();
    let (k, _) = integration_constants(&spec).unwrap();
    let tab = general_profile(&spec, 0, &[k], 1.0).unwrap();
    let closed = closed_form_profile(0.05).unwrap();
    let mut worst = 0.0_f64;
    for i in 1..=400 {
        let eta = 0.01 * i as f64;
        worst = worst.max((tab.s(eta) - closed.s(eta)).abs());
    }
    println!("q=0.05 tab-vs-closed max |ds| = {worst:e}");
    assert!(worst < 1e-8);
    let er = energy_reduced(&spec, &[k]).unwrap();
    let ec = energy_closed(&spec).unwrap();
    println!("q=0.05 reduced vs closed rel = {:e}", (er - ec).abs() / ec);
    assert!((er - ec).abs() / ec < 1e-8);

    // near branch edge: q = 0.9
    let spec = ModelSpec::new(vec![0.75], vec![10], vec![9], Scale::new(1.0).unwrap()).unwrap();
    let (k, _) = integration_constants(&spec).unwrap();
    let er = energy_reduced(&spec, &[k]).unwrap();
    let ec = energy_closed(&spec).unwrap();
    let sol = HopfionSolution::closed_form(spec).unwrap();
    let ep = energy_profile(&sol).unwrap();
    println!(
        "q=0.9: reduced rel {:e}, profile rel {:e}",
        (er - ec).abs() / ec,
        (ep - ec).abs() / ec
    );
    assert!((er - ec).abs() / ec < 1e-8);
    assert!((ep - ec).abs() / ec < 1e-6);

    // five fields, uneven exponent split
    let spec = ModelSpec::new(
        vec![0.05, 0.1, 0.2, 0.25, 0.15],
        vec![2, 4, 6, 8, 10],
        vec![1, 2, 3, 4, 5],
        Scale::new(1.0).unwrap(),
    )
    .unwrap();
    let sol = HopfionSolution::closed_form(spec.clone()).unwrap();
    let ec = energy_closed(&spec).unwrap();
    let ep = energy_profile(&sol).unwrap();
    let sampler = RegionSampler {
        count: 20,
        ..Default::default()
    };
    let mut worst_eom = 0.0_f64;
    for j in 0..5 {
        worst_eom = worst_eom.max(
            eom_residual(&sol, j, &sampler, None)
                .unwrap()
                .max_abs_residual,
        );
    }
    println!(
        "N=5: profile rel {:e}, worst EOM {:e}",
        (ep - ec).abs() / ec,
        worst_eom
    );
    assert!((ep - ec).abs() / ec < 1e-6);
    assert!(worst_eom < 1e-5);

    // general windings with three distinct ratios
    let spec = ModelSpec::new(
        vec![0.25, 0.25, 0.25],
        vec![1, 2, 5],
        vec![1, 3, 2],
        Scale::new(1.0).unwrap(),
    )
    .unwrap();
    assert!(!spec.q_ratio().is_constant());
    let sol = HopfionSolution::general(spec.clone()).unwrap();
    let k: Vec<f64> = sol.profiles().iter().map(|p| p.constants().0).collect();
    let er = energy_reduced(&spec, &k).unwrap();
    let ep = energy_profile(&sol).unwrap();
    let mut worst_eom = 0.0_f64;
    for j in 0..3 {
        worst_eom = worst_eom.max(
            eom_residual(&sol, j, &sampler, None)
                .unwrap()
                .max_abs_residual,
        );
    }
    println!(
        "general 3-ratio: |ep/er - 1| = {:e}, worst EOM {:e}",
        (ep - er).abs() / er,
        worst_eom
    );
    assert!((ep - er).abs() / er < 1e-5);
    assert!(worst_eom < 1e-5);
}
