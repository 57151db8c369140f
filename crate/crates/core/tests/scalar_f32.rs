use sqz_core::boson::{tmss_bch, tmss_fock, FockCutoff, SqueezeParametrization};
use sqz_core::entanglement::{entropy_closed_form, partial_trace_b, von_neumann_entropy};
use sqz_core::fermion::{fermion_entropy_energy, fermion_squeeze_check};
use sqz_core::{DensityMatrix32, TwoModeState32};

#[test]
fn f32_routes_agree_at_single_precision() {
    let cutoff = FockCutoff::new(30).unwrap();
    let p = SqueezeParametrization::<f32>::from_gamma(0.5).unwrap();
    let fock: TwoModeState32 = tmss_fock(p.tau, cutoff).unwrap();
    let bch: TwoModeState32 = tmss_bch(p.gamma, cutoff).unwrap();
    assert!(fock.max_abs_diff(&bch) < 1e-5);
    let rho: DensityMatrix32 = partial_trace_b(&fock).unwrap();
    let exact = entropy_closed_form(f64::from(p.tau)).unwrap();
    assert!((f64::from(von_neumann_entropy(&rho)) - exact).abs() < 1e-4);
}

#[test]
fn f32_fermion_squeeze() {
    let r = fermion_squeeze_check(0.6f32).unwrap();
    assert!(r.worst() < 1e-6);
    let (s, _) = fermion_entropy_energy(0.0f32).unwrap();
    assert_eq!(s, std::f32::consts::LN_2);
}
