//! Thin wrapper over `minilp` with index-based variables.

use crate::error::{Error, Result};
use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&[f64], f64)> {
        match self {
            LpOutcome::Optimal { x, objective } => Some((x, *objective)),
            _ => None,
        }
    }
}

pub struct Lp {
    problem: Problem,
    vars: Vec<Variable>,
}

impl Lp {
    pub fn minimize() -> Self {
        Lp { problem: Problem::new(OptimizationDirection::Minimize), vars: Vec::new() }
    }

    pub fn maximize() -> Self {
        Lp { problem: Problem::new(OptimizationDirection::Maximize), vars: Vec::new() }
    }

    /// Adds a variable with objective coefficient and bounds (use infinities for free).
    pub fn var(&mut self, obj: f64, lo: f64, hi: f64) -> usize {
        let v = self.problem.add_var(obj, (lo, hi));
        self.vars.push(v);
        self.vars.len() - 1
    }

    pub fn free_var(&mut self, obj: f64) -> usize {
        self.var(obj, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn constraint(&mut self, terms: &[(usize, f64)], cmp: Cmp, rhs: f64) {
        let mut expr = LinearExpr::empty();
        let mut any = false;
        for &(i, c) in terms {
            if c != 0.0 {
                expr.add(self.vars[i], c);
                any = true;
            }
        }
        if !any {
            // minilp rejects empty rows; a constant row is either vacuous or infeasible.
            let holds = match cmp {
                Cmp::Le => 0.0 <= rhs + 1e-12,
                Cmp::Ge => 0.0 >= rhs - 1e-12,
                Cmp::Eq => rhs.abs() <= 1e-12,
            };
            if !holds {
                let z = self.var(0.0, 0.0, 0.0);
                let mut e = LinearExpr::empty();
                e.add(self.vars[z], 1.0);
                self.problem.add_constraint(e, ComparisonOp::Eq, 1.0);
            }
            return;
        }
        let op = match cmp {
            Cmp::Le => ComparisonOp::Le,
            Cmp::Ge => ComparisonOp::Ge,
            Cmp::Eq => ComparisonOp::Eq,
        };
        self.problem.add_constraint(expr, op, rhs);
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        match self.problem.solve() {
            Ok(sol) => {
                let x = self.vars.iter().map(|&v| *sol.var_value(v)).collect();
                Ok(LpOutcome::Optimal { x, objective: sol.objective() })
            }
            Err(minilp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(minilp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            #[allow(unreachable_patterns)]
            Err(e) => Err(Error::Lp(e.to_string())),
        }
    }
}
