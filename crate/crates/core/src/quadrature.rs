//! Adaptive Simpson quadrature for vector-valued integrands.

use crate::error::{QfiError, Result};
use crate::mat2::{Mat2, C64};

/// Minimal vector-space interface needed by the integrator.
pub trait Integrand: Clone {
    fn axpy(&self, s: f64, other: &Self) -> Self;
    fn scaled(&self, s: f64) -> Self;
    fn norm(&self) -> f64;
}

impl Integrand for Mat2 {
    fn axpy(&self, s: f64, o: &Self) -> Self {
        *self + o.scale(C64::new(s, 0.0))
    }
    fn scaled(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }
    fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Integrand for Vec<C64> {
    fn axpy(&self, s: f64, o: &Self) -> Self {
        self.iter().zip(o).map(|(a, b)| a + b * s).collect()
    }
    fn scaled(&self, s: f64) -> Self {
        self.iter().map(|a| a * s).collect()
    }
    fn norm(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimpsonOptions {
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_depth: u32,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        SimpsonOptions { rel_tol: 1e-10, initial_panels: 16, max_depth: 40 }
    }
}

fn simpson<V: Integrand>(fa: &V, fm: &V, fb: &V, h: f64) -> V {
    fa.axpy(4.0, fm).axpy(1.0, fb).scaled(h / 6.0)
}

struct Panel<V> {
    a: f64,
    b: f64,
    fa: V,
    fm: V,
    fb: V,
    whole: V,
    depth: u32,
}

/// Integrates `f` over `[a, b]`, refining each panel until the Richardson error estimate is
/// below `rel_tol` times the norm of a coarse estimate of the integral.
pub fn adaptive_simpson<V, F>(f: F, a: f64, b: f64, opts: SimpsonOptions) -> Result<V>
where
    V: Integrand,
    F: Fn(f64) -> V,
{
    let n0 = opts.initial_panels.max(1);
    let h = (b - a) / n0 as f64;
    let mut panels = Vec::with_capacity(n0);
    let mut coarse: Option<V> = None;
    let mut f_left = f(a);
    for i in 0..n0 {
        let pa = a + h * i as f64;
        let pb = if i + 1 == n0 { b } else { a + h * (i + 1) as f64 };
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        let whole = simpson(&f_left, &fm, &fb, pb - pa);
        coarse = Some(match coarse {
            None => whole.clone(),
            Some(c) => c.axpy(1.0, &whole),
        });
        panels.push(Panel { a: pa, b: pb, fa: f_left, fm, fb: fb.clone(), whole, depth: 0 });
        f_left = fb;
    }
    let coarse = coarse.expect("at least one panel");
    let scale = coarse.norm();
    if scale == 0.0 || b == a {
        return Ok(coarse);
    }
    let eps_total = opts.rel_tol * scale;

    let mut total: Option<V> = None;
    let mut worst = 0.0f64;
    // explicit stack; left halves are processed before right halves so the summation order is fixed
    let mut stack: Vec<(Panel<V>, f64)> = panels.into_iter().rev().map(|p| (p, eps_total / n0 as f64)).collect();
    while let Some((p, eps)) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let flm = f(0.5 * (p.a + m));
        let frm = f(0.5 * (m + p.b));
        let left = simpson(&p.fa, &flm, &p.fm, m - p.a);
        let right = simpson(&p.fm, &frm, &p.fb, p.b - m);
        let both = left.axpy(1.0, &right);
        let err = both.axpy(-1.0, &p.whole).norm();
        if err <= 15.0 * eps || p.depth >= opts.max_depth {
            if err > 15.0 * eps {
                worst = worst.max(err / 15.0 / eps * opts.rel_tol);
            }
            let refined = both.axpy(1.0 / 15.0, &both.axpy(-1.0, &p.whole));
            total = Some(match total {
                None => refined,
                Some(t) => t.axpy(1.0, &refined),
            });
        } else {
            let d = p.depth + 1;
            stack.push((Panel { a: m, b: p.b, fa: p.fm.clone(), fm: frm, fb: p.fb, whole: right, depth: d }, eps / 2.0));
            stack.push((Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, depth: d }, eps / 2.0));
        }
    }
    if worst > opts.rel_tol {
        return Err(QfiError::QuadratureNotConverged { achieved: worst, requested: opts.rel_tol });
    }
    Ok(total.expect("non-empty"))
}
