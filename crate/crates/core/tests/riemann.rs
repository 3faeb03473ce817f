mod common;

use aaad::harness::{l1_error, simulate, RunConfig};
use common::ExactRiemann;

fn lax_errors(scheme: &str, c: &str, nx: usize) -> f64 {
    let cfg = RunConfig::parse(&format!("problem = lax\nscheme = {scheme}\nc = {c}\nnx = {nx}\n")).unwrap();
    let out = simulate(&cfg).unwrap();
    let xs: Vec<f64> = (0..nx).map(|i| out.grid.x_center(i)).collect();
    let exact = ExactRiemann::new((0.445, 0.31061, 8.928), (0.5, 0.0, 0.571), 1.4).density_at(&xs, 0.0, 1.3);
    l1_error(&out.final_snapshot().density(), &exact, out.grid.dx()).unwrap()
}

#[test]
fn sod_star_state_matches_tabulated_values() {
    let r = ExactRiemann::new((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4);
    assert!((r.p_star - 0.30313).abs() < 1e-5, "{}", r.p_star);
    assert!((r.u_star - 0.92745).abs() < 1e-5, "{}", r.u_star);
    let (dl, dr) = r.star_densities();
    assert!((dl - 0.42632).abs() < 1e-5 && (dr - 0.26557).abs() < 1e-5);
}

#[test]
fn lax_star_state_matches_tabulated_values() {
    let r = ExactRiemann::new((0.445, 0.31061, 8.928), (0.5, 0.0, 0.571), 1.4);
    let (dl, dr) = r.star_densities();
    assert!((r.p_star - 4.887).abs() < 2e-3, "{}", r.p_star);
    assert!((r.u_star - 2.4963).abs() < 2e-3, "{}", r.u_star);
    assert!((dl - 0.28935).abs() < 1e-3 && (dr - 1.79798).abs() < 1e-3, "{dl} {dr}");
}

#[test]
fn lax_errors_shrink_under_refinement() {
    for (scheme, c) in [("cu2", "0"), ("aaad2", "0.1"), ("aaad5", "0.5")] {
        let e: Vec<f64> = [100, 200, 400].iter().map(|&n| lax_errors(scheme, c, n)).collect();
        assert!(e[0] > e[1] && e[1] > e[2], "{scheme}: {e:?}");
        // discontinuous data: first-order convergence at best
        let rate = (e[0] / e[2]).log2() / 2.0;
        assert!(rate > 0.5 && rate < 1.3, "{scheme}: rate {rate}");
    }
}

#[test]
fn anti_diffusion_reduces_lax_error() {
    assert!(lax_errors("aaad2", "0.1", 200) < lax_errors("cu2", "0", 200));
    assert!(lax_errors("aaad5", "0.5", 200) < lax_errors("aweno5", "0", 200));
}
