use weightlab::funcspace::*;
use weightlab::weights::*;
fn main() {
    for k in [3, 5] {
        let delta = 2f64.powi(-k);
        let s = PiecewisePower::pure_power(1.0, delta - 1.0);
        let cfg = SearchConfig::new(Interval::new(-1.0, 1.0).unwrap()).with_levels(32);
        let e = ainfty_fujii_wilson(&s, &cfg).unwrap();
        println!("delta={delta} value={} argmax={:?} refined={} diverged={}", e.value, e.argmax, e.refined, e.diverged);
    }
}
