//! Constrained fitness: cost is the objective, the deadline is the
//! constraint, compared with Deb's feasibility rules.

use std::cmp::Ordering;

use crate::money::Money;
use crate::scalar::Scalar;
use crate::schedule::Schedule;

/// Evaluated quality of one schedule under a deadline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fitness<S> {
    pub tec: Money,
    pub tet: S,
    /// `tet <= deadline`, exactly.
    pub feasible: bool,
}

impl<S: Scalar> Fitness<S> {
    pub fn of(schedule: &Schedule<S>, deadline: S) -> Fitness<S> {
        Fitness {
            tec: schedule.tec,
            tet: schedule.tet,
            feasible: schedule.tet <= deadline,
        }
    }
}

/// Deb-rule ordering: `Less` means fitter. Feasible beats infeasible; among
/// feasible, lower cost; among infeasible, lower execution time.
pub fn deb_cmp<S: Scalar>(a: &Fitness<S>, b: &Fitness<S>) -> Ordering {
    match (a.feasible, b.feasible) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.tec.cmp(&b.tec),
        (false, false) => a.tet.partial_cmp(&b.tet).unwrap_or(Ordering::Equal),
    }
}

/// The better of the two; exact ties resolve toward `a`, the incumbent.
pub fn compare_fitness<'a, S: Scalar>(a: &'a Fitness<S>, b: &'a Fitness<S>) -> &'a Fitness<S> {
    if deb_cmp(b, a) == Ordering::Less {
        b
    } else {
        a
    }
}

/// True iff `challenger` is strictly fitter than `incumbent`.
pub fn is_fitter<S: Scalar>(challenger: &Fitness<S>, incumbent: &Fitness<S>) -> bool {
    deb_cmp(challenger, incumbent) == Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(tec: f64, tet: f64, deadline: f64) -> Fitness<f64> {
        Fitness {
            tec: Money::from_dollars(tec),
            tet,
            feasible: tet <= deadline,
        }
    }

    #[test]
    fn both_feasible_lower_cost_wins() {
        let a = fit(5.0, 90.0, 100.0);
        let b = fit(7.0, 80.0, 100.0);
        assert_eq!(compare_fitness(&a, &b), &a);
        assert_eq!(compare_fitness(&b, &a), &a);
    }

    #[test]
    fn feasible_beats_cheaper_infeasible() {
        let a = fit(9.0, 90.0, 100.0);
        let b = fit(1.0, 150.0, 100.0);
        assert_eq!(compare_fitness(&a, &b), &a);
        assert_eq!(compare_fitness(&b, &a), &a);
    }

    #[test]
    fn both_infeasible_lower_tet_wins() {
        let a = fit(1.0, 120.0, 100.0);
        let b = fit(9.0, 110.0, 100.0);
        assert_eq!(compare_fitness(&a, &b), &b);
    }

    #[test]
    fn exact_tie_keeps_incumbent() {
        let a = fit(5.0, 90.0, 100.0);
        let b = fit(5.0, 95.0, 100.0);
        // Same cost, both feasible: the incumbent (first argument) stays.
        assert!(std::ptr::eq(compare_fitness(&a, &b), &a));
        assert!(std::ptr::eq(compare_fitness(&b, &a), &b));
        assert!(!is_fitter(&b, &a));
    }
}
