//! Closed-form call options on a defaultable bond: price surface over
//! strikes and maturities, critical information level, and the quadrature
//! oracle cross-check on one cell.

use infocredit::model::{DefaultMap, InfoModel, PhiSpec, PriorDensity, TermStructure};
use infocredit::option::{call_price, call_price_oracle, critical_value};
use infocredit::{Dist, OptionSpec, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.05 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let model = InfoModel::new(0.25, prior, map, tol).unwrap();
    let curve = TermStructure::flat(0.02);
    let bond_maturity = 5.0;

    println!("strike,t=1,t=2,t=3");
    for k in [0.3, 0.4, 0.5, 0.6, 0.7] {
        let mut row = format!("{k:.2}");
        for t in [1.0, 2.0, 3.0] {
            let spec = OptionSpec::new(k, t, bond_maturity).unwrap();
            row.push_str(&format!(",{:.6}", call_price(&model, &curve, &spec).unwrap()));
        }
        println!("{row}");
    }

    let spec = OptionSpec::new(0.6, 2.0, bond_maturity).unwrap();
    let y = critical_value(&model, &curve, &spec).unwrap();
    println!("critical information level at (K=0.6, t=2): {y:.6}");

    let cf = call_price(&model, &curve, &spec).unwrap();
    let oracle = call_price_oracle(&model, &curve, &spec).unwrap();
    println!("closed form {cf:.10} vs quadrature oracle {oracle:.10}");
}
