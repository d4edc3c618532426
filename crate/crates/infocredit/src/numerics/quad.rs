//! Adaptive composite Gauss-Legendre quadrature.
//!
//! The interval is split into uniform seed panels (so narrow features cannot
//! hide from a single whole-interval estimate), each panel's error is
//! estimated by comparing it against its own bisection, and the panel with
//! the worst error is refined until the summed error estimate meets the
//! requested relative tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Tolerances};

/// 15-point Gauss-Legendre abscissas on [-1, 1] (nonnegative half; the rule
/// is symmetric).
const GL15_X: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_52,
    0.394_151_347_077_563_4,
    0.570_972_172_608_538_8,
    0.724_417_731_360_170_1,
    0.848_206_583_410_427_2,
    0.937_273_392_400_705_9,
    0.987_992_518_020_485_4,
];

const GL15_W: [f64; 8] = [
    0.202_578_241_925_561_27,
    0.198_431_485_327_111_58,
    0.186_161_000_015_562_1,
    0.166_269_205_816_993_93,
    0.139_570_677_926_154_3,
    0.107_159_220_467_171_93,
    0.070_366_047_488_108_12,
    0.030_753_241_996_117_268,
];

/// One 15-point Gauss-Legendre panel over [a, b].
pub(crate) fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = GL15_W[0] * f(c);
    for i in 1..8 {
        let dx = h * GL15_X[i];
        acc += GL15_W[i] * (f(c - dx) + f(c + dx));
    }
    acc * h
}

/// Nodes and weights of the 15-point rule mapped onto [a, b].
pub(crate) fn gl15_nodes(a: f64, b: f64) -> Vec<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = Vec::with_capacity(15);
    out.push((c, GL15_W[0] * h));
    for i in 1..8 {
        let dx = h * GL15_X[i];
        out.push((c - dx, GL15_W[i] * h));
        out.push((c + dx, GL15_W[i] * h));
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

const ABS_FLOOR: f64 = 1e-300;

/// A panel with its refined value (sum of the two half-panel rules) and the
/// bisection-difference error estimate. Ordered by error for the worklist.
struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Result<Self, NumericsError> {
        let m = 0.5 * (a + b);
        let left = gl15(f, a, m);
        let right = gl15(f, m, b);
        if !left.is_finite() || !right.is_finite() {
            return Err(NumericsError::NonFiniteIntegrand { x: m });
        }
        Ok(Panel { a, b, left, right, err: (left + right - whole).abs() })
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Worklist refinement shared by `integrate` and `adaptive_panels`: seed
/// uniform panels, then repeatedly bisect the panel with the largest error
/// estimate until the summed estimate meets `rel_tol` relative to the
/// magnitude of the running value, or the panel budget is exhausted.
fn refine_worklist<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    seeds: usize,
    max_panels: usize,
) -> Result<(BinaryHeap<Panel>, f64, f64), NumericsError> {
    let h = (hi - lo) / seeds as f64;
    let mut heap = BinaryHeap::with_capacity(seeds + 16);
    let mut value = 0.0f64;
    let mut mass = 0.0f64;
    let mut total_err = 0.0f64;
    for i in 0..seeds {
        let a = lo + i as f64 * h;
        let b = if i + 1 == seeds { hi } else { lo + (i + 1) as f64 * h };
        let whole = gl15(f, a, b);
        if !whole.is_finite() {
            return Err(NumericsError::NonFiniteIntegrand { x: 0.5 * (a + b) });
        }
        let p = Panel::split(f, a, b, whole)?;
        value += p.value();
        mass += p.left.abs() + p.right.abs();
        total_err += p.err;
        heap.push(p);
    }
    while total_err > rel_tol * mass.max(ABS_FLOOR) && heap.len() < max_panels {
        let worst = heap.pop().expect("worklist cannot be empty");
        let m = 0.5 * (worst.a + worst.b);
        if !(worst.a < m && m < worst.b) {
            // Panel narrower than float spacing: its error cannot shrink.
            total_err -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        value -= worst.value();
        mass -= worst.left.abs() + worst.right.abs();
        total_err -= worst.err;
        for (a, b, whole) in [(worst.a, m, worst.left), (m, worst.b, worst.right)] {
            let p = Panel::split(f, a, b, whole)?;
            value += p.value();
            mass += p.left.abs() + p.right.abs();
            total_err += p.err;
            heap.push(p);
        }
    }
    Ok((heap, value, total_err))
}

/// Uniform seed panels for general integration; dense enough that features a
/// few percent of the interval wide are sampled by the seed rules.
const SEED_PANELS: usize = 32;
const MAX_PANELS: usize = 16_384;

/// Integrate `f` over [lo, hi] to the relative tolerance in `tol`.
///
/// Returns an error carrying the best estimate when the panel budget is
/// exhausted before the tolerance is met.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    tol.validate()?;

    let (_, value, total_err) =
        refine_worklist(&f, lo, hi, tol.quad_rel_tol, SEED_PANELS, MAX_PANELS)?;
    if total_err > tol.quad_rel_tol * value.abs().max(ABS_FLOOR) {
        return Err(NumericsError::QuadNonConvergence {
            best: value,
            achieved: total_err / value.abs().max(ABS_FLOOR),
            requested: tol.quad_rel_tol,
        });
    }
    Ok(value)
}

/// Adaptively subdivide [lo, hi] for the integrand `f` and return the final
/// panel breakpoints. Used to freeze node layouts for repeated evaluation of
/// structurally similar integrands; fewer seeds than `integrate` because the
/// panel count sets the per-evaluation cost of every downstream use.
pub(crate) fn adaptive_panels<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let (heap, _, _) = match refine_worklist(&f, lo, hi, rel_tol, 8, MAX_PANELS) {
        Ok(r) => r,
        // Non-finite probe values: fall back to the seed layout and let the
        // caller's own evaluation surface the problem.
        Err(_) => return (0..=8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect(),
    };
    let mut cuts: Vec<f64> = heap.iter().map(|p| p.a).collect();
    cuts.push(hi);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    cuts
}
