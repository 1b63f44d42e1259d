//! Exact LP feasibility: phase-one simplex with Bland's rule over rationals.

use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A finite system of linear (in)equalities over rational variables. Each
/// variable is either free or constrained to be non-negative.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    nonnegative: Vec<bool>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible => None,
        }
    }
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, nonnegative: bool) -> usize {
        self.nonnegative.push(nonnegative);
        self.nonnegative.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.nonnegative.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        for &(v, _) in &coeffs {
            assert!(v < self.num_vars(), "constraint references unknown variable {v}");
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Exact check of every constraint and sign restriction.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        if self.nonnegative.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = c
                .coeffs
                .iter()
                .fold(Rational::zero(), |acc, (v, a)| acc + a * &x[*v]);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // last entry of each row is the right-hand side
    basis: Vec<usize>,
    cost: Vec<Rational>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len()
    }

    fn reduced_cost(&self, col: usize) -> Rational {
        let mut d = self.cost[col].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !self.cost[b].is_zero() && !self.rows[r][col].is_zero() {
                d -= &self.cost[b] * &self.rows[r][col];
            }
        }
        d
    }

    fn objective(&self) -> Rational {
        let rhs = self.width();
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (r, &b)| acc + &self.cost[b] * &self.rows[r][rhs])
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimises the cost; Bland's rule guarantees termination. The
    /// phase-one objective is bounded below by zero, so no unbounded exit.
    fn minimise(&mut self) {
        let rhs = self.width();
        loop {
            let entering = (0..self.width()).find(|&c| self.reduced_cost(c).is_negative());
            let Some(col) = entering else { return };
            let mut best: Option<(Rational, usize, usize)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[r] < *b),
                };
                if better {
                    best = Some((ratio, r, self.basis[r]));
                }
            }
            match best {
                Some((_, row, _)) => self.pivot(row, col),
                None => unreachable!("phase-one objective cannot be unbounded"),
            }
        }
    }
}

/// Decides feasibility exactly. On success the witness satisfies every
/// constraint when substituted (checked before returning).
pub fn lp_feasible(system: &LinearSystem) -> Feasibility {
    // Column layout: one column per non-negative variable, two (x+ and x-)
    // per free variable, then slacks, then artificials.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(system.num_vars());
    let mut width = 0;
    for &nn in &system.nonnegative {
        if nn {
            var_cols.push((width, None));
            width += 1;
        } else {
            var_cols.push((width, Some(width + 1)));
            width += 2;
        }
    }
    let structural = width;
    let m = system.constraints.len();

    let mut dense: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
    for c in &system.constraints {
        let mut row = vec![Rational::zero(); structural];
        for (v, a) in &c.coeffs {
            let (pos, neg) = var_cols[*v];
            row[pos] += a;
            if let Some(neg) = neg {
                row[neg] -= a;
            }
        }
        let (mut rel, mut rhs) = (c.relation, c.rhs.clone());
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        dense.push((row, rel, rhs));
    }

    let slacks = dense.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificials = dense.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let total = structural + slacks + artificials;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut cost = vec![Rational::zero(); total];
    let (mut next_slack, mut next_art) = (structural, structural + slacks);
    for (mut row, rel, rhs) in dense {
        row.resize(total + 1, Rational::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                cost[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                cost[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        row[total] = rhs;
        rows.push(row);
    }

    let mut tableau = Tableau { rows, basis, cost };
    tableau.minimise();
    if !tableau.objective().is_zero() {
        return Feasibility::Infeasible;
    }

    let mut values = vec![Rational::zero(); total];
    for (r, &b) in tableau.basis.iter().enumerate() {
        values[b] = tableau.rows[r][total].clone();
    }
    let x: Vec<Rational> = var_cols
        .iter()
        .map(|&(pos, neg)| match neg {
            Some(neg) => &values[pos] - &values[neg],
            None => values[pos].clone(),
        })
        .collect();
    assert!(system.satisfied_by(&x), "simplex produced a witness that violates the system");
    Feasibility::Feasible(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn pinned_half() {
        let mut s = LinearSystem::new();
        let x = s.add_var(false);
        s.add_constraint(vec![(x, int(1))], Relation::Ge, int(0));
        s.add_constraint(vec![(x, int(1))], Relation::Le, int(1));
        s.add_constraint(vec![(x, int(1))], Relation::Eq, rat(1, 2));
        assert_eq!(lp_feasible(&s), Feasibility::Feasible(vec![rat(1, 2)]));
    }

    #[test]
    fn contradictory_bounds() {
        let mut s = LinearSystem::new();
        let x = s.add_var(false);
        s.add_constraint(vec![(x, int(1))], Relation::Ge, int(1));
        s.add_constraint(vec![(x, int(1))], Relation::Le, int(0));
        assert_eq!(lp_feasible(&s), Feasibility::Infeasible);
    }

    #[test]
    fn free_variable_goes_negative() {
        let mut s = LinearSystem::new();
        let x = s.add_var(false);
        let y = s.add_var(true);
        s.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Eq, int(-2));
        s.add_constraint(vec![(y, int(1))], Relation::Ge, rat(1, 3));
        let w = lp_feasible(&s);
        let x = w.witness().unwrap();
        assert!(s.satisfied_by(x));
    }

    #[test]
    fn empty_system_is_feasible() {
        let mut s = LinearSystem::new();
        s.add_var(true);
        assert_eq!(lp_feasible(&s), Feasibility::Feasible(vec![int(0)]));
    }

    #[test]
    fn degenerate_cycling_candidate() {
        // Beale's classic cycling example recast as a feasibility problem.
        let mut s = LinearSystem::new();
        let v: Vec<usize> = (0..4).map(|_| s.add_var(true)).collect();
        s.add_constraint(
            vec![(v[0], rat(1, 4)), (v[1], int(-60)), (v[2], rat(-1, 25)), (v[3], int(9))],
            Relation::Le,
            int(0),
        );
        s.add_constraint(
            vec![(v[0], rat(1, 2)), (v[1], int(-90)), (v[2], rat(-1, 50)), (v[3], int(3))],
            Relation::Le,
            int(0),
        );
        s.add_constraint(vec![(v[2], int(1))], Relation::Le, int(1));
        s.add_constraint(
            vec![(v[0], rat(3, 4)), (v[1], int(-150)), (v[2], rat(1, 50)), (v[3], int(-6))],
            Relation::Ge,
            rat(1, 100),
        );
        let w = lp_feasible(&s);
        if let Some(x) = w.witness() {
            assert!(s.satisfied_by(x));
        }
    }

    proptest! {
        // Systems built around a known point are feasible and the returned
        // witness satisfies them exactly.
        #[test]
        fn witness_satisfies_constraints(
            point in prop::collection::vec(-5i64..6, 3),
            rows in prop::collection::vec((prop::collection::vec(-4i64..5, 3), 0usize..3, 0i64..4), 1..7),
        ) {
            let mut s = LinearSystem::new();
            for _ in 0..3 { s.add_var(false); }
            for (coeffs, rel, slack) in rows {
                let lhs: i64 = coeffs.iter().zip(&point).map(|(a, x)| a * x).sum();
                let (relation, rhs) = match rel {
                    0 => (Relation::Le, lhs + slack),
                    1 => (Relation::Ge, lhs - slack),
                    _ => (Relation::Eq, lhs),
                };
                s.add_constraint(
                    coeffs.iter().enumerate().map(|(v, a)| (v, int(*a))).collect(),
                    relation,
                    int(rhs),
                );
            }
            let w = lp_feasible(&s);
            prop_assert!(w.witness().is_some());
            prop_assert!(s.satisfied_by(w.witness().unwrap()));
        }

        #[test]
        fn infeasible_pairs_detected(a in -5i64..5, gap in 1i64..5) {
            let mut s = LinearSystem::new();
            let x = s.add_var(false);
            let y = s.add_var(true);
            s.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Le, int(a));
            s.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Ge, int(a + gap));
            prop_assert_eq!(lp_feasible(&s), Feasibility::Infeasible);
        }
    }
}
