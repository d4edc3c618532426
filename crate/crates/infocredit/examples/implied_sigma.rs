//! Back out the information flow rate sigma from an observed call price.

use infocredit::model::{DefaultMap, InfoModel, PhiSpec, PriorDensity, TermStructure};
use infocredit::option::{call_price, implied_sigma};
use infocredit::{Dist, OptionSpec, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.05 }).unwrap();
    let prior =
        PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
    let curve = TermStructure::flat(0.02);
    let spec = OptionSpec::new(0.6, 2.0, 5.0).unwrap();

    // Quote a price under sigma = 0.25, then recover it from the price alone.
    let quoted = {
        let model = InfoModel::new(0.25, prior.clone(), map.clone(), tol).unwrap();
        call_price(&model, &curve, &spec).unwrap()
    };
    println!("quoted price at sigma=0.25: {quoted:.10}");

    let model = InfoModel::new(1.0, prior, map, tol).unwrap();
    let sigma = implied_sigma(&model, &curve, &spec, quoted, 2.0).unwrap();
    println!("implied sigma: {sigma:.10}");

    // Price sensitivity to sigma near the quote.
    for s in [0.15, 0.2, 0.25, 0.3, 0.35] {
        let m = model.with_sigma(s).unwrap();
        println!("sigma={s:.2}: price {:.8}", call_price(&m, &curve, &spec).unwrap());
    }
}
