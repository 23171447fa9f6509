use cbgen::particle::*;
use cbgen::{ModelParams, RandomStream};
use std::time::Instant;

fn main() {
    let p = ModelParams::unit();
    let base = ParticleConfig::new(p, 2000, 5.0, 50.0).unwrap();
    let cfg = CampaignConfig::standard(base, 8);
    let t0 = Instant::now();
    let result = run_campaign(&cfg, RandomStream::new(42, 0)).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!("events {} in {:.2}s -> {:.1}M events/s", result.total_events, dt, result.total_events as f64 / dt / 1e6);
    let stats = |f: &dyn Fn(&ReplicateSummary) -> f64, name: &str| {
        let xs: Vec<f64> = result.replicates.iter().map(|r| f(r)).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
        println!("{name}: mean {:.5} rep-std {:.5} se {:.5}", m, v.sqrt(), (v / xs.len() as f64).sqrt());
    };
    stats(&|r| r.time_avg_mass, "mass      (exp 1.0)   ");
    stats(&|r| r.time_avg_mass_sq, "mass_sq   (exp 1.5)   ");
    stats(&|r| r.mean_lag_product, "lag_prod  (exp 1.18394)");
    stats(&|r| r.mean_cross_product, "cross     (exp 0.37363)");
    stats(&|r| r.mean_length_product, "len_prod  (exp 0.25413)");
    stats(&|r| r.mean_length, "len_mean  (exp ~0)     ");
    stats(&|r| r.mean_length_sq, "len_sq    (exp ~1.645) ");
}
