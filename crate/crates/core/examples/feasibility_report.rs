//! The experimental parameter chain for the free-space and cavity scenarios.
//!
//! cargo run --example feasibility_report

use spincat::feasibility::{evaluate_scenario, ExperimentalParams};

fn main() -> spincat::Result<()> {
    let scenarios = [
        ("free space", ExperimentalParams::bec_free_space()),
        ("cavity", ExperimentalParams::bec_cavity()),
    ];
    for (name, params) in scenarios {
        let r = evaluate_scenario(&params)?;
        println!("{name}: kappa0 = {}, N_a = {}, T = {}", params.kappa0, params.n_atoms, params.transmission);
        println!("  effective depth        {:>12.4}  (needs {:.1}: {:?})", r.effective_depth, r.depth_threshold, r.depth_flag);
        println!("  xi2 raw / achieved     {:>12.4} / {:.4}", r.xi2_raw, r.xi2_achieved);
        println!("  xi2 depth bound        {:>12.4}", r.xi2_max_depth);
        println!("  xi2 required for cat   {:>12.4}", r.xi2_required_cat);
        println!("  beta                   {:>12.4e}", r.beta);
        println!("  eta                    {:>12.4e}  (coherent: {})", r.eta, r.coherence_ok);
        println!("  rotation tolerance     {:>12.4e}", r.rotation_tolerance);
        println!("  cat lifetime [s]       {:>12.4e}", r.cat_lifetime);
    }
    Ok(())
}
