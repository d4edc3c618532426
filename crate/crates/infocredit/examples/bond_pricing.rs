//! Price a defaultable zero-coupon bond across information levels, with and
//! without recovery, and show the current hazard rate at each state.

use infocredit::bond::{bond_price, hazard_rate, recovery_bond_price};
use infocredit::model::{DefaultMap, InfoModel, InformationState, PhiSpec, PriorDensity, TermStructure};
use infocredit::{BondSpec, Dist, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let model = InfoModel::new(0.3, prior, map, tol).unwrap();
    let curve = TermStructure::flat(0.02);

    let zero = BondSpec::zero_recovery(1.0).unwrap();
    let partial = BondSpec::new(1.0, 1.0, 0.4).unwrap();

    println!("t=0 price: {:.10}", {
        let s0 = InformationState::new(0.0, 0.0, true).unwrap();
        bond_price(&model, &curve, &s0, &zero).unwrap()
    });

    println!("xi,price,price_with_recovery,hazard");
    let t = 0.5;
    for j in 0..=10 {
        let xi = -2.0 + 4.0 * j as f64 / 10.0;
        let state = InformationState::new(t, xi, true).unwrap();
        let b = bond_price(&model, &curve, &state, &zero).unwrap();
        let br = recovery_bond_price(&model, &curve, &state, &partial).unwrap();
        let h = hazard_rate(&model, &state).unwrap();
        println!("{xi:.2},{b:.8},{br:.8},{h:.8}");
    }
}
