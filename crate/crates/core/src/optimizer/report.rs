//! Per-run report: seed, variant, deadline, and the global-best trajectory.
//!
//! Text rendering (one line per field, then one line per recorded point):
//!
//! ```text
//! report-v1
//! variant <name>
//! seed <u64>
//! deadline <seconds>
//! iter <t> tec <dollars> tet <seconds>
//! ...
//! final tec <dollars> tet <seconds> feasible <bool>
//! ```

use crate::money::Money;
use crate::scalar::Scalar;

use super::{Fitness, Variant};

#[derive(Clone, Debug)]
pub struct RunReport<S> {
    pub variant: Variant,
    pub seed: u64,
    pub deadline: S,
    /// Global-best (TEC, TET) after initialization (index 0) and after each
    /// iteration.
    pub trajectory: Vec<(Money, S)>,
    pub final_fitness: Fitness<S>,
}

impl<S: Scalar> RunReport<S> {
    pub fn to_text(&self) -> String {
        let mut out = String::from("report-v1\n");
        out.push_str(&format!("variant {}\n", self.variant));
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("deadline {}\n", self.deadline));
        for (t, (tec, tet)) in self.trajectory.iter().enumerate() {
            out.push_str(&format!("iter {t} tec {tec} tet {tet}\n"));
        }
        out.push_str(&format!(
            "final tec {} tet {} feasible {}\n",
            self.final_fitness.tec, self.final_fitness.tet, self.final_fitness.feasible
        ));
        out
    }
}
