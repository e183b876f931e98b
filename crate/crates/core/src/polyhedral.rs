//! Polyhedra in V- or H-representation and relative-interior decisions by LP.
//!
//! The relative interior of `conv P + cone R` is the set of combinations with
//! strictly positive weights on every generator. For `{x : Ax ≥ b, Ex = e}` it is
//! obtained by first detecting implicit equalities (rows whose slack cannot be
//! made positive) and demanding strict slack on the rest. Both characterizations
//! are encoded with a common slack variable `t ∈ [0, 1]` that is maximized; a
//! point set meets the relative interior iff the optimum is positive.

use crate::error::Result;
use crate::lp::{Cmp, Lp, LpOutcome};

/// Strictness threshold on the optimal slack `t`.
pub const RI_SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Polyhedron {
    /// `conv(points) + cone(rays)`.
    V { dim: usize, points: Vec<Vec<f64>>, rays: Vec<Vec<f64>> },
    /// `{x : a·x ≥ b for (a, b) in ineq, a·x = b for (a, b) in eq}`.
    H { dim: usize, ineq: Vec<(Vec<f64>, f64)>, eq: Vec<(Vec<f64>, f64)> },
}

impl Polyhedron {
    pub fn full(dim: usize) -> Self {
        Polyhedron::H { dim, ineq: vec![], eq: vec![] }
    }

    pub fn point(p: Vec<f64>) -> Self {
        Polyhedron::V { dim: p.len(), points: vec![p], rays: vec![] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Polyhedron::V { dim, .. } | Polyhedron::H { dim, .. } => *dim,
        }
    }

    pub fn negated(&self) -> Self {
        let neg = |v: &Vec<f64>| v.iter().map(|x| -x).collect::<Vec<_>>();
        match self {
            Polyhedron::V { dim, points, rays } => Polyhedron::V {
                dim: *dim,
                points: points.iter().map(neg).collect(),
                rays: rays.iter().map(neg).collect(),
            },
            Polyhedron::H { dim, ineq, eq } => Polyhedron::H {
                dim: *dim,
                ineq: ineq.iter().map(|(a, b)| (neg(a), *b)).collect(),
                eq: eq.iter().map(|(a, b)| (neg(a), *b)).collect(),
            },
        }
    }

    /// Cartesian product.
    pub fn product(parts: &[Polyhedron]) -> Self {
        let dim: usize = parts.iter().map(|p| p.dim()).sum();
        if parts.iter().all(|p| matches!(p, Polyhedron::H { .. })) {
            let mut ineq = Vec::new();
            let mut eq = Vec::new();
            let mut off = 0;
            for p in parts {
                if let Polyhedron::H { dim: d, ineq: pi, eq: pe } = p {
                    let lift = |a: &Vec<f64>| {
                        let mut row = vec![0.0; dim];
                        row[off..off + d].copy_from_slice(a);
                        row
                    };
                    ineq.extend(pi.iter().map(|(a, b)| (lift(a), *b)));
                    eq.extend(pe.iter().map(|(a, b)| (lift(a), *b)));
                    off += d;
                }
            }
            return Polyhedron::H { dim, ineq, eq };
        }
        // Mixed: convert every factor to generators (H-factors must be cones or boxes).
        let mut points = vec![vec![0.0; dim]];
        let mut rays = Vec::new();
        let mut off = 0;
        for p in parts {
            let (pts, rs) = p.generators().expect("product factor without a V-representation");
            let d = p.dim();
            let mut next = Vec::with_capacity(points.len() * pts.len());
            for base in &points {
                for q in &pts {
                    let mut x = base.clone();
                    x[off..off + d].copy_from_slice(q);
                    next.push(x);
                }
            }
            points = next;
            for r in rs {
                let mut x = vec![0.0; dim];
                x[off..off + d].copy_from_slice(&r);
                rays.push(x);
            }
            off += d;
        }
        Polyhedron::V { dim, points, rays }
    }

    /// Generators of a V-polyhedron, or of a few H-shapes whose generators are
    /// immediate (full space and coordinate boxes/orthants).
    pub fn generators(&self) -> Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        match self {
            Polyhedron::V { points, rays, .. } => Some((points.clone(), rays.clone())),
            Polyhedron::H { dim, ineq, eq } => {
                if !eq.is_empty() {
                    return None;
                }
                let mut lo = vec![f64::NEG_INFINITY; *dim];
                let mut hi = vec![f64::INFINITY; *dim];
                for (a, b) in ineq {
                    let nz: Vec<usize> = (0..*dim).filter(|&i| a[i] != 0.0).collect();
                    if nz.len() != 1 {
                        return None;
                    }
                    let i = nz[0];
                    if a[i] > 0.0 {
                        lo[i] = lo[i].max(b / a[i]);
                    } else {
                        hi[i] = hi[i].min(b / a[i]);
                    }
                }
                Some(box_generators(&lo, &hi))
            }
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        match self {
            Polyhedron::H { ineq, eq, .. } => Ok(ineq.iter().all(|(a, b)| dotf(a, x) >= b - tol)
                && eq.iter().all(|(a, b)| (dotf(a, x) - b).abs() <= tol)),
            Polyhedron::V { .. } => {
                let mut prog = RiProgram::new();
                let vars = prog.point(self)?;
                prog.pin(&vars, x);
                Ok(prog.solve()?.is_some())
            }
        }
    }

    /// Per-row flag: `true` when the inequality holds with equality on the whole set.
    pub fn implicit_equalities(&self) -> Result<Vec<bool>> {
        match self {
            Polyhedron::V { .. } => Ok(vec![]),
            Polyhedron::H { dim, ineq, eq } => {
                let mut flags = Vec::with_capacity(ineq.len());
                for (i, (a_i, b_i)) in ineq.iter().enumerate() {
                    let mut lp = Lp::maximize();
                    let xs: Vec<usize> = (0..*dim).map(|_| lp.free_var(0.0)).collect();
                    // maximize a_i·x, capped so unbounded rows register as slack 1.
                    let s = lp.var(1.0, f64::NEG_INFINITY, 1.0);
                    let mut row: Vec<(usize, f64)> = xs.iter().zip(a_i).map(|(&v, &c)| (v, c)).collect();
                    row.push((s, -1.0));
                    lp.constraint(&row, Cmp::Ge, *b_i);
                    for (j, (a, b)) in ineq.iter().enumerate() {
                        if j != i {
                            let r: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                            lp.constraint(&r, Cmp::Ge, *b);
                        }
                    }
                    for (a, b) in eq {
                        let r: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                        lp.constraint(&r, Cmp::Eq, *b);
                    }
                    let implicit = match lp.solve()? {
                        LpOutcome::Optimal { objective, .. } => objective <= RI_SLACK_TOL,
                        LpOutcome::Unbounded => false,
                        LpOutcome::Infeasible => true,
                    };
                    flags.push(implicit);
                }
                Ok(flags)
            }
        }
    }

    /// `x ∈ ri P`.
    pub fn ri_contains(&self, x: &[f64]) -> Result<bool> {
        let mut prog = RiProgram::new();
        let vars = prog.point(self)?;
        prog.pin(&vars, x);
        Ok(prog.solve()?.map_or(false, |(t, _)| t > RI_SLACK_TOL))
    }
}

/// Generators of a (possibly unbounded) coordinate box.
pub fn box_generators(lo: &[f64], hi: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = lo.len();
    let mut points = vec![vec![0.0; n]];
    let mut rays = Vec::new();
    for i in 0..n {
        let mut choices = Vec::new();
        match (lo[i].is_finite(), hi[i].is_finite()) {
            (true, true) => {
                choices.push(lo[i]);
                if hi[i] > lo[i] {
                    choices.push(hi[i]);
                }
            }
            (true, false) => {
                choices.push(lo[i]);
                rays.push(unit(n, i, 1.0));
            }
            (false, true) => {
                choices.push(hi[i]);
                rays.push(unit(n, i, -1.0));
            }
            (false, false) => {
                choices.push(0.0);
                rays.push(unit(n, i, 1.0));
                rays.push(unit(n, i, -1.0));
            }
        }
        let mut next = Vec::with_capacity(points.len() * choices.len());
        for p in &points {
            for &c in &choices {
                let mut q = p.clone();
                q[i] = c;
                next.push(q);
            }
        }
        points = next;
    }
    (points, rays)
}

fn unit(n: usize, i: usize, s: f64) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = s;
    e
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Adds constraints `x ∈ P` for existing LP variables `x`.
pub fn constrain_member(lp: &mut Lp, xs: &[usize], p: &Polyhedron) {
    match p {
        Polyhedron::V { points, rays, .. } => {
            let lams: Vec<usize> = points.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
            let mus: Vec<usize> = rays.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
            let simplex: Vec<(usize, f64)> = lams.iter().map(|&l| (l, 1.0)).collect();
            lp.constraint(&simplex, Cmp::Eq, 1.0);
            for (k, &x) in xs.iter().enumerate() {
                let mut row = vec![(x, 1.0)];
                row.extend(lams.iter().zip(points).map(|(&l, pt)| (l, -pt[k])));
                row.extend(mus.iter().zip(rays).map(|(&m, r)| (m, -r[k])));
                lp.constraint(&row, Cmp::Eq, 0.0);
            }
        }
        Polyhedron::H { ineq, eq, .. } => {
            for (a, b) in ineq {
                let row: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                lp.constraint(&row, Cmp::Ge, *b);
            }
            for (a, b) in eq {
                let row: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                lp.constraint(&row, Cmp::Eq, *b);
            }
        }
    }
}

/// LP assembling "a point in the relative interior of each polyhedron" blocks,
/// coupled by linear equalities, maximizing the common strictness slack.
pub struct RiProgram {
    lp: Lp,
    t: usize,
}

impl Default for RiProgram {
    fn default() -> Self {
        Self::new()
    }
}

impl RiProgram {
    pub fn new() -> Self {
        let mut lp = Lp::maximize();
        let t = lp.var(1.0, 0.0, 1.0);
        RiProgram { lp, t }
    }

    /// Adds free point variables (no membership).
    pub fn free_point(&mut self, dim: usize) -> Vec<usize> {
        (0..dim).map(|_| self.lp.free_var(0.0)).collect()
    }

    /// Adds point variables constrained to `ri P` through the slack `t`.
    pub fn point(&mut self, p: &Polyhedron) -> Result<Vec<usize>> {
        let dim = p.dim();
        let xs = self.free_point(dim);
        match p {
            Polyhedron::V { points, rays, .. } => {
                let lams: Vec<usize> =
                    points.iter().map(|_| self.lp.var(0.0, 0.0, f64::INFINITY)).collect();
                let mus: Vec<usize> = rays.iter().map(|_| self.lp.var(0.0, 0.0, f64::INFINITY)).collect();
                let simplex: Vec<(usize, f64)> = lams.iter().map(|&l| (l, 1.0)).collect();
                self.lp.constraint(&simplex, Cmp::Eq, 1.0);
                for &g in lams.iter().chain(&mus) {
                    self.lp.constraint(&[(g, 1.0), (self.t, -1.0)], Cmp::Ge, 0.0);
                }
                for k in 0..dim {
                    let mut row = vec![(xs[k], 1.0)];
                    for (&l, pt) in lams.iter().zip(points) {
                        row.push((l, -pt[k]));
                    }
                    for (&m, r) in mus.iter().zip(rays) {
                        row.push((m, -r[k]));
                    }
                    self.lp.constraint(&row, Cmp::Eq, 0.0);
                }
            }
            Polyhedron::H { ineq, eq, .. } => {
                let implicit = p.implicit_equalities()?;
                for ((a, b), imp) in ineq.iter().zip(implicit) {
                    let mut row: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                    if imp {
                        self.lp.constraint(&row, Cmp::Eq, *b);
                    } else {
                        row.push((self.t, -1.0));
                        self.lp.constraint(&row, Cmp::Ge, *b);
                    }
                }
                for (a, b) in eq {
                    let row: Vec<(usize, f64)> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
                    self.lp.constraint(&row, Cmp::Eq, *b);
                }
            }
        }
        Ok(xs)
    }

    /// Constrains existing variables to lie in `P` (closed membership, no slack).
    pub fn member(&mut self, xs: &[usize], p: &Polyhedron) {
        constrain_member(&mut self.lp, xs, p);
    }

    pub fn pin(&mut self, vars: &[usize], value: &[f64]) {
        for (&v, &x) in vars.iter().zip(value) {
            self.lp.constraint(&[(v, 1.0)], Cmp::Eq, x);
        }
    }

    /// Adds `Σ_blocks scale_b · x_b = rhs` coordinatewise.
    pub fn link(&mut self, blocks: &[(&[usize], f64)], rhs: &[f64]) {
        for (k, &r) in rhs.iter().enumerate() {
            let row: Vec<(usize, f64)> = blocks.iter().map(|(vars, s)| (vars[k], *s)).collect();
            self.lp.constraint(&row, Cmp::Eq, r);
        }
    }

    /// Adds `M x_block + rhs_offset = y_block`, i.e. an affine image coupling.
    pub fn link_affine(&mut self, x: &[usize], m: &[Vec<f64>], offset: &[f64], y: &[usize]) {
        for (i, row_m) in m.iter().enumerate() {
            let mut row: Vec<(usize, f64)> = x.iter().zip(row_m).map(|(&v, &c)| (v, c)).collect();
            row.push((y[i], -1.0));
            self.lp.constraint(&row, Cmp::Eq, -offset[i]);
        }
    }

    /// Returns the optimal slack and all variable values, or `None` when even the
    /// closures do not meet.
    pub fn solve(&self) -> Result<Option<(f64, Vec<f64>)>> {
        match self.lp.solve()? {
            LpOutcome::Optimal { x, .. } => Ok(Some((x[self.t], x))),
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Ok(Some((1.0, vec![]))),
        }
    }
}

/// Witness of `ri A ∩ ri B ≠ ∅`.
pub fn ri_intersection_witness(a: &Polyhedron, b: &Polyhedron) -> Result<Option<Vec<f64>>> {
    let mut prog = RiProgram::new();
    let xa = prog.point(a)?;
    let xb = prog.point(b)?;
    prog.link(&[(&xa, 1.0), (&xb, -1.0)], &vec![0.0; a.dim()]);
    Ok(prog
        .solve()?
        .filter(|(t, _)| *t > RI_SLACK_TOL)
        .map(|(_, vals)| xa.iter().map(|&i| vals[i]).collect()))
}

/// `y ∈ ri(D − K) = ri D − ri K`.
pub fn ri_difference_contains(d: &Polyhedron, k: &Polyhedron, y: &[f64]) -> Result<bool> {
    let mut prog = RiProgram::new();
    let xd = prog.point(d)?;
    let xk = prog.point(k)?;
    prog.link(&[(&xd, 1.0), (&xk, -1.0)], y);
    Ok(prog.solve()?.map_or(false, |(t, _)| t > RI_SLACK_TOL))
}
