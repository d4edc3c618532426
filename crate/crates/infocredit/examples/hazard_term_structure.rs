//! Forward hazard curve u -> h_tu seen from a fixed state, and the
//! consistency check exp(-integral of h) = posterior survival.

use infocredit::bond::forward_hazard;
use infocredit::model::{
    posterior_survival, DefaultMap, InfoModel, InformationState, PhiSpec, PriorDensity,
};
use infocredit::numerics::integrate;
use infocredit::{Dist, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let model = InfoModel::new(0.3, prior, map, tol).unwrap();

    let t = 0.5;
    let state = InformationState::new(t, 0.2, true).unwrap();

    println!("u,forward_hazard,exp_minus_int,posterior_survival");
    for i in 1..=8 {
        let u = t + 2.0 * i as f64 / 8.0;
        let h = forward_hazard(&model, &state, u).unwrap();
        let integral = integrate(
            |v| forward_hazard(&model, &state, v).unwrap(),
            t,
            u,
            model.tolerances(),
        )
        .unwrap();
        let surv = posterior_survival(&model, &state, u).unwrap();
        println!("{u:.3},{h:.8},{:.8},{surv:.8}", (-integral).exp());
    }
}
