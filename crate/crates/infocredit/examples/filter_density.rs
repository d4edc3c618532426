//! Conditional density of the hidden market factor X given an observed
//! level of the information process, printed for a few times t.

use infocredit::model::{
    DefaultMap, FactorPosterior, InfoModel, InformationState, PhiSpec, PriorDensity,
};
use infocredit::{Dist, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let model = InfoModel::new(0.3, prior, map, tol).unwrap();

    let xi = 0.4;
    println!("x,t=0.5,t=2,t=5");
    for i in 0..=60 {
        let x = i as f64 / 60.0;
        let mut row = format!("{x:.4}");
        for t in [0.5, 2.0, 5.0] {
            let state = InformationState::new(t, xi, true).unwrap();
            let posterior = FactorPosterior::new(&model, &state).unwrap();
            row.push_str(&format!(",{:.6}", posterior.density(x)));
        }
        println!("{row}");
    }
}
