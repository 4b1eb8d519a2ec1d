//! Limited-memory BFGS minimization with a strong-Wolfe line search.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsConfig {
    pub history: usize,
    pub max_iterations: usize,
    /// Stop when `|f_prev - f| / max(1, |f_prev|, |f|)` falls below this.
    pub rel_tol: f64,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub max_evaluations_per_search: usize,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        LbfgsConfig {
            history: 10,
            max_iterations: 200,
            rel_tol: 1e-6,
            c1: 1e-4,
            c2: 0.9,
            max_evaluations_per_search: 40,
        }
    }
}

/// State after an accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub iteration: usize,
    pub value: f64,
    pub gradient_norm: f64,
    pub step: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Point {
    alpha: f64,
    value: f64,
    slope: f64,
    gradient: Vec<f64>,
}

/// Minimizer of the cubic through two points with values and slopes,
/// safeguarded into the interior of the bracket.
fn cubic_step(a: &Point, b: &Point) -> f64 {
    let d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
    let disc = d1 * d1 - a.slope * b.slope;
    let (lo, hi) = (a.alpha.min(b.alpha), a.alpha.max(b.alpha));
    let mid = 0.5 * (lo + hi);
    if disc < 0.0 || !disc.is_finite() {
        return mid;
    }
    let d2 = disc.sqrt().copysign(b.alpha - a.alpha);
    let t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    let margin = 0.1 * (hi - lo);
    if t.is_finite() && t > lo + margin && t < hi - margin {
        t
    } else {
        mid
    }
}

struct Search<'a, F> {
    f: &'a mut F,
    x: &'a [f64],
    d: &'a [f64],
    f0: f64,
    slope0: f64,
    config: &'a LbfgsConfig,
    iteration: usize,
    evaluations: usize,
    trial: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>> Search<'_, F> {
    fn eval(&mut self, alpha: f64) -> Result<Point> {
        if self.evaluations >= self.config.max_evaluations_per_search {
            return Err(Error::LineSearch {
                iteration: self.iteration,
                message: format!(
                    "no step satisfying the strong Wolfe conditions after {} evaluations (last step {alpha:.3e}, f0 {:.6e}, slope {:.3e})",
                    self.evaluations, self.f0, self.slope0
                ),
            });
        }
        self.evaluations += 1;
        for ((t, &x), &d) in self.trial.iter_mut().zip(self.x).zip(self.d) {
            *t = x + alpha * d;
        }
        let (value, gradient) = (self.f)(&self.trial)?;
        if value.is_nan() {
            return Err(Error::NonFiniteObjective { iteration: self.iteration });
        }
        let slope = dot(&gradient, self.d);
        Ok(Point { alpha, value, slope, gradient })
    }

    fn armijo(&self, p: &Point) -> bool {
        p.value <= self.f0 + self.config.c1 * p.alpha * self.slope0
    }

    fn curvature(&self, p: &Point) -> bool {
        p.slope.abs() <= -self.config.c2 * self.slope0
    }

    fn run(&mut self, initial: f64) -> Result<Point> {
        let mut prev = Point {
            alpha: 0.0,
            value: self.f0,
            slope: self.slope0,
            gradient: Vec::new(),
        };
        let mut alpha = initial;
        let mut first = true;
        loop {
            let p = self.eval(alpha)?;
            if !self.armijo(&p) || (!first && p.value >= prev.value) {
                return self.zoom(prev, p);
            }
            if self.curvature(&p) {
                return Ok(p);
            }
            if p.slope >= 0.0 {
                return self.zoom(p, prev);
            }
            alpha = 2.0 * p.alpha;
            prev = p;
            first = false;
        }
    }

    /// `lo` satisfies sufficient decrease and has the lower value; the
    /// minimizer lies between `lo` and `hi`.
    fn zoom(&mut self, mut lo: Point, mut hi: Point) -> Result<Point> {
        loop {
            let alpha = if hi.value.is_finite() { cubic_step(&lo, &hi) } else { 0.5 * (lo.alpha + hi.alpha) };
            if (hi.alpha - lo.alpha).abs() <= f64::EPSILON * lo.alpha.abs().max(1.0) {
                return Err(Error::LineSearch {
                    iteration: self.iteration,
                    message: format!("bracket collapsed at step {alpha:.3e}"),
                });
            }
            let p = self.eval(alpha)?;
            if !self.armijo(&p) || p.value >= lo.value || !p.value.is_finite() {
                hi = p;
                continue;
            }
            if self.curvature(&p) {
                return Ok(p);
            }
            if p.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = p;
        }
    }
}

/// Minimizes `f` from `x0`. `f` returns the value and gradient;
/// `on_iteration` sees every accepted iterate.
pub fn minimize<F>(x0: Vec<f64>, mut f: F, config: &LbfgsConfig, mut on_iteration: impl FnMut(&Iterate)) -> Result<LbfgsOutcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut x = x0;
    let (mut fx, mut g) = f(&x)?;
    if !fx.is_finite() {
        return Err(Error::NonFiniteObjective { iteration: 0 });
    }
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(config.history);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        let gnorm = norm(&g);
        if gnorm == 0.0 {
            converged = true;
            break;
        }
        let iteration = iterations + 1;

        // Two-loop recursion: d = -H g.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = memory.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|qi| *qi *= gamma);
        }
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut d: Vec<f64> = q.into_iter().map(|v| -v).collect();
        let mut slope = dot(&g, &d);
        if slope.is_nan() || slope >= 0.0 {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
        }
        let initial = if memory.is_empty() { 1.0 / gnorm } else { 1.0 };

        let point = {
            let mut search = Search {
                f: &mut f,
                x: &x,
                d: &d,
                f0: fx,
                slope0: slope,
                config,
                iteration,
                evaluations: 0,
                trial: vec![0.0; x.len()],
            };
            let p = search.run(initial)?;
            (p, search.evaluations)
        };
        let (p, evaluations) = point;

        let s: Vec<f64> = d.iter().map(|di| p.alpha * di).collect();
        let y: Vec<f64> = p.gradient.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        x.iter_mut().zip(&s).for_each(|(xi, si)| *xi += si);
        let previous = fx;
        fx = p.value;
        g = p.gradient;
        if sy > 0.0 {
            if memory.len() == config.history {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        iterations = iteration;
        on_iteration(&Iterate {
            iteration,
            value: fx,
            gradient_norm: norm(&g),
            step: p.alpha,
            evaluations,
        });
        if (previous - fx).abs() / previous.abs().max(fx.abs()).max(1.0) < config.rel_tol {
            converged = true;
            break;
        }
    }
    Ok(LbfgsOutcome {
        x,
        value: fx,
        gradient: g,
        iterations,
        converged,
    })
}
