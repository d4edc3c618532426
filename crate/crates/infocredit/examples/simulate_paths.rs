//! Monte Carlo bond-price paths: simulate an ensemble, check the martingale
//! property of discounted prices, and inspect one defaulting path.

use infocredit::model::{DefaultMap, InfoModel, PhiSpec, PriorDensity, TermStructure};
use infocredit::numerics::Seed;
use infocredit::simulate::{innovation_path, simulate_paths};
use infocredit::{BondSpec, Dist, GridSpec, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let model = InfoModel::new(0.3, prior, map, tol).unwrap();
    let curve = TermStructure::flat(0.02);

    let spec = BondSpec::zero_recovery(1.0).unwrap();
    let grid = GridSpec::new(1.0, 100).unwrap();
    let n_paths = 20_000;
    let ens = simulate_paths(&model, &curve, &spec, &grid, n_paths, Seed::new(42, 0)).unwrap();

    // Discounted prices are martingales: E[B_tT] = B_0T / P_0t.
    let b0 = ens.paths.iter().map(|p| p.bond_price[0]).sum::<f64>() / n_paths as f64;
    println!("t,mean_price,martingale_target,std_err");
    for &i in &[25usize, 50, 75] {
        let t = grid.times()[i];
        let (mean, se) = ens.bond_price_stats(i);
        println!("{t:.2},{mean:.6},{:.6},{se:.6}", b0 / curve.discount(t));
    }

    let defaulted = ens.paths.iter().position(|p| p.tau <= 1.0);
    if let Some(i) = defaulted {
        let p = &ens.paths[i];
        println!("path {i}: tau = {:.4}", p.tau);
        let w = innovation_path(&model, &ens, i).unwrap();
        println!("innovation W at t_max: {:.6}", w.last().unwrap());
    }
    let frac = ens.paths.iter().filter(|p| p.tau <= 1.0).count() as f64 / n_paths as f64;
    println!("default fraction: {frac:.4} (prior: {:.4})", 1.0 - (-0.1f64).exp());
}
