use serde::{Deserialize, Serialize};

use super::field::Decay;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, NeumaierSum};

/// Accuracy presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fast,
    Standard,
    Thorough,
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Preset::Fast),
            "standard" => Ok(Preset::Standard),
            "thorough" => Ok(Preset::Thorough),
            _ => Err(Error::Domain(format!("unknown quadrature preset '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scheme {
    /// Gauss–Legendre in `|z|` and `t`, collapsed-simplex Gauss–Legendre ×
    /// trapezoidal phases on the sphere `S^{2d−1}`.
    PolarProduct,
    /// Halton points in the truncated box `[−R, R]^{2d} × [−T, T]`.
    HaltonBox { points: usize },
}

/// Quadrature over ℝ^{2d+1} for rapidly decaying integrands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub scheme: Scheme,
    pub r_panels: usize,
    pub r_nodes: usize,
    /// Panel breakpoints at `R (i/P)^grading`; `1` is uniform, `> 1` clusters near the axis.
    pub r_grading: f64,
    /// Panels per half-line in `t`.
    pub t_panels: usize,
    pub t_nodes: usize,
    pub simplex_nodes: usize,
    pub phase_nodes: usize,
    /// Nodes with `|z| < eps_axis` are dropped.
    pub eps_axis: f64,
    /// Relative refinement tolerance used by accuracy-checked norms.
    pub rel_tol: f64,
}

/// A value with an estimated quadrature error (`|fine − coarse|`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

impl Quadrature {
    pub fn preset(preset: Preset, d: usize) -> Self {
        // (r_panels, r_nodes, t_panels, t_nodes, simplex, phases)
        let p = match (preset, d) {
            (Preset::Fast, 1) => (2, 10, 1, 12, 1, 12),
            (Preset::Standard, 1) => (2, 16, 1, 16, 1, 16),
            (Preset::Thorough, 1) => (3, 20, 2, 16, 1, 24),
            (Preset::Fast, 2) => (2, 10, 2, 8, 4, 8),
            (Preset::Standard, 2) => (3, 12, 2, 12, 6, 12),
            (Preset::Thorough, 2) => (4, 14, 3, 14, 8, 14),
            (Preset::Fast, 3) => (2, 8, 2, 6, 3, 5),
            (Preset::Standard, 3) => (3, 8, 2, 8, 4, 6),
            (Preset::Thorough, 3) => (3, 10, 2, 10, 5, 8),
            (Preset::Fast, _) => (2, 6, 1, 6, 2, 4),
            (Preset::Standard, _) => (2, 8, 1, 8, 3, 5),
            (Preset::Thorough, _) => (2, 10, 1, 10, 3, 6),
        };
        Self {
            scheme: Scheme::PolarProduct,
            r_panels: p.0,
            r_nodes: p.1,
            r_grading: 1.0,
            t_panels: p.2,
            t_nodes: p.3,
            simplex_nodes: p.4,
            phase_nodes: p.5,
            eps_axis: 1e-8,
            rel_tol: 1e-6,
        }
    }

    pub fn halton(points: usize) -> Self {
        Self {
            scheme: Scheme::HaltonBox { points },
            ..Self::preset(Preset::Standard, 2)
        }
    }

    /// The lower refinement level used for error estimates.
    pub fn coarse(&self) -> Self {
        let mut c = self.clone();
        c.r_nodes = (self.r_nodes * 3 / 4).max(2);
        c.t_nodes = (self.t_nodes * 3 / 4).max(2);
        c.simplex_nodes = self.simplex_nodes.saturating_sub(1).max(1);
        c.phase_nodes = self.phase_nodes.saturating_sub(1).max(3);
        if let Scheme::HaltonBox { points } = self.scheme {
            c.scheme = Scheme::HaltonBox { points: points / 2 };
        }
        c
    }

    /// Number of nodes for dimension `d` (before axis exclusion).
    pub fn node_count(&self, d: usize) -> usize {
        match self.scheme {
            Scheme::HaltonBox { points } => points,
            Scheme::PolarProduct => {
                self.r_panels
                    * self.r_nodes
                    * 2
                    * self.t_panels
                    * self.t_nodes
                    * self.simplex_nodes.pow(d as u32 - 1)
                    * self.phase_nodes.pow(d as u32)
            }
        }
    }

    /// Streams `integrand(p, |z|, out)` over the nodes and returns `Σ w · out`
    /// per component (compensated, in node order).
    pub fn integrate<F>(&self, d: usize, decay: &Decay, k: usize, mut integrand: F) -> Vec<f64>
    where
        F: FnMut(&[f64], f64, &mut [f64]),
    {
        let mut sums = vec![NeumaierSum::new(); k];
        let mut out = vec![0.0; k];
        self.for_each_node(d, decay, |p, r, w| {
            out.iter_mut().for_each(|o| *o = 0.0);
            integrand(p, r, &mut out);
            for (s, &o) in sums.iter_mut().zip(&out) {
                s.add(w * o);
            }
        });
        sums.iter().map(|s| s.value()).collect()
    }

    /// Fine and coarse integration; error is `|fine − coarse|` per component.
    pub fn integrate_with_error<F>(&self, d: usize, decay: &Decay, k: usize, mut integrand: F) -> Vec<Estimate>
    where
        F: FnMut(&[f64], f64, &mut [f64]),
    {
        let fine = self.integrate(d, decay, k, &mut integrand);
        let coarse = self.coarse().integrate(d, decay, k, &mut integrand);
        fine.iter()
            .zip(&coarse)
            .map(|(&f, &c)| Estimate {
                value: f,
                error: (f - c).abs(),
            })
            .collect()
    }

    /// Both levels, for callers that combine components nonlinearly.
    pub fn integrate_levels<F>(&self, d: usize, decay: &Decay, k: usize, mut integrand: F) -> (Vec<f64>, Vec<f64>)
    where
        F: FnMut(&[f64], f64, &mut [f64]),
    {
        let fine = self.integrate(d, decay, k, &mut integrand);
        let coarse = self.coarse().integrate(d, decay, k, &mut integrand);
        (fine, coarse)
    }

    pub fn for_each_node<F>(&self, d: usize, decay: &Decay, mut visit: F)
    where
        F: FnMut(&[f64], f64, f64),
    {
        match self.scheme {
            Scheme::PolarProduct => self.polar_nodes(d, decay, &mut visit),
            Scheme::HaltonBox { points } => self.halton_nodes(d, decay, points, &mut visit),
        }
    }

    fn polar_nodes<F: FnMut(&[f64], f64, f64)>(&self, d: usize, decay: &Decay, visit: &mut F) {
        let rule_r = panel_rule(self.r_panels, self.r_nodes, decay.r_extent, self.r_grading);
        let half_t = panel_rule(self.t_panels, self.t_nodes, decay.t_extent, 1.0);
        let mut rule_t: Vec<(f64, f64)> = half_t.iter().rev().map(|&(t, w)| (-t, w)).collect();
        rule_t.extend(half_t.iter().copied());
        let sphere = sphere_rule(d, self.simplex_nodes, self.phase_nodes);
        let n = 2 * d + 1;
        let mut p = vec![0.0; n];
        let jac_pow = (2 * d - 1) as i32;
        for &(r, wr) in &rule_r {
            if r < self.eps_axis {
                continue;
            }
            let wr = wr * r.powi(jac_pow);
            for &(t, wt) in &rule_t {
                p[2 * d] = t;
                for (dir, ws) in &sphere {
                    for a in 0..2 * d {
                        p[a] = r * dir[a];
                    }
                    visit(&p, r, wr * wt * ws);
                }
            }
        }
    }

    fn halton_nodes<F: FnMut(&[f64], f64, f64)>(&self, d: usize, decay: &Decay, points: usize, visit: &mut F) {
        const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
        let n = 2 * d + 1;
        assert!(n <= PRIMES.len(), "Halton box supports d <= 7");
        let (rr, tt) = (decay.r_extent, decay.t_extent);
        let vol = (2.0 * rr).powi(2 * d as i32) * 2.0 * tt;
        let w = vol / points as f64;
        let mut p = vec![0.0; n];
        for i in 1..=points as u64 {
            for a in 0..n {
                let u = radical_inverse(i, PRIMES[a]);
                let ext = if a < 2 * d { rr } else { tt };
                p[a] = (2.0 * u - 1.0) * ext;
            }
            let r = p[..2 * d].iter().map(|v| v * v).sum::<f64>().sqrt();
            if r < self.eps_axis {
                continue;
            }
            visit(&p, r, w);
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// Composite Gauss–Legendre on `[0, len]`.
fn panel_rule(panels: usize, nodes: usize, len: f64, grading: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels * nodes);
    for i in 0..panels {
        let a = len * (i as f64 / panels as f64).powf(grading);
        let b = len * ((i + 1) as f64 / panels as f64).powf(grading);
        let (x, w) = gauss_legendre::<f64>(nodes, a, b);
        out.extend(x.into_iter().zip(w));
    }
    out
}

/// Directions and weights on the unit sphere `S^{2d−1} ⊂ ℂᵈ`, via
/// `z_j = √s_j e^{iφ_j}` with `s` on the simplex; `dσ = 2^{1−d} ds dφ`.
pub fn sphere_rule(d: usize, simplex_nodes: usize, phase_nodes: usize) -> Vec<(Vec<f64>, f64)> {
    let (u, wu) = gauss_legendre::<f64>(simplex_nodes, 0.0, 1.0);
    let dphi = 2.0 * std::f64::consts::PI / phase_nodes as f64;
    let base = 2f64.powi(1 - d as i32) * dphi.powi(d as i32);
    // simplex points in collapsed coordinates
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::new();
    let m = d - 1;
    let total = simplex_nodes.pow(m as u32);
    for flat in 0..total {
        let mut idx = flat;
        let mut s = Vec::with_capacity(d);
        let mut rest = 1.0;
        let mut w = 1.0;
        for _ in 0..m {
            let i = idx % simplex_nodes;
            idx /= simplex_nodes;
            s.push(rest * u[i]);
            // Jacobian of the collapsed map is the running product of (1 − u_k)
            w *= wu[i] * rest;
            rest *= 1.0 - u[i];
        }
        s.push(rest);
        simplex.push((s, w));
    }
    let phases = phase_nodes.pow(d as u32);
    let mut out = Vec::with_capacity(simplex.len() * phases);
    for (s, ws) in &simplex {
        for flat in 0..phases {
            let mut idx = flat;
            let mut dir = vec![0.0; 2 * d];
            for j in 0..d {
                let k = idx % phase_nodes;
                idx /= phase_nodes;
                // half-step offset keeps nodes off the coordinate planes
                let phi = (k as f64 + 0.5) * dphi;
                let rho = s[j].sqrt();
                dir[j] = rho * phi.cos();
                dir[d + j] = rho * phi.sin();
            }
            out.push((dir, ws * base));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area() {
        // |S^{2d-1}| = 2 π^d / (d-1)!
        for d in 1..=4usize {
            let area: f64 = sphere_rule(d, 4, 6).iter().map(|(_, w)| w).sum();
            let fact: f64 = (1..d).map(|k| k as f64).product();
            let exact = 2.0 * std::f64::consts::PI.powi(d as i32) / fact;
            assert!((area - exact).abs() < 1e-12 * exact, "d={d}: {area} vs {exact}");
        }
    }

    #[test]
    fn sphere_second_moments() {
        // ∫ x_1² dσ = |S| / (2d)
        for d in 2..=3usize {
            let rule = sphere_rule(d, 4, 6);
            let area: f64 = rule.iter().map(|(_, w)| w).sum();
            let m: f64 = rule.iter().map(|(x, w)| w * x[0] * x[0]).sum();
            assert!((m - area / (2 * d) as f64).abs() < 1e-12);
            let m4: f64 = rule.iter().map(|(x, w)| w * x[0].powi(4)).sum();
            // ∫ x_1⁴ = 3|S| / (2d (2d+2))
            let expect = 3.0 * area / ((2 * d) * (2 * d + 2)) as f64;
            assert!((m4 - expect).abs() < 1e-12, "{m4} {expect}");
        }
    }
}
