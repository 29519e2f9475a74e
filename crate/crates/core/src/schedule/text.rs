//! Line-oriented schedule serialization for golden tests and CLI output.
//!
//! ```text
//! schedule-v1
//! task <id> instance <slot> start <s> finish <s>    one line per task
//! lease <slot> start <s> finish <s>                 one line per lease
//! tec <dollars>
//! tet <seconds>
//! ```
//!
//! Task ids and instance slots are 1-based; times use Rust's shortest
//! round-trip float rendering; money uses the canonical trimmed decimal.

use crate::scalar::Scalar;

use super::Schedule;

pub fn schedule_to_text<S: Scalar>(s: &Schedule<S>) -> String {
    let mut out = String::from("schedule-v1\n");
    for a in &s.assignments {
        out.push_str(&format!(
            "task {} instance {} start {} finish {}\n",
            a.task + 1,
            a.instance + 1,
            a.start,
            a.finish
        ));
    }
    for l in &s.leases {
        out.push_str(&format!(
            "lease {} start {} finish {}\n",
            l.instance + 1,
            l.start,
            l.finish
        ));
    }
    out.push_str(&format!("tec {}\ntet {}\n", s.tec, s.tet));
    out
}

#[cfg(test)]
mod tests {
    use crate::cloud::default_testbed;
    use crate::schedule::decode;
    use crate::workflow::graph_from_weights;

    #[test]
    fn golden_three_task_chain() {
        let g = graph_from_weights::<f64>(&[0.0, 0.0, 0.0], &[(1, 2, 0.0), (2, 3, 0.0)]).unwrap();
        let sys = default_testbed::<f64>();
        let sch = decode(&[1, 1, 1], &g, &sys).unwrap();
        let expected = "\
schedule-v1
task 1 instance 1 start 97 finish 97
task 2 instance 1 start 97 finish 97
task 3 instance 1 start 97 finish 97
lease 1 start 0 finish 97
tec 0.003
tet 97
";
        assert_eq!(super::schedule_to_text(&sch), expected);
    }
}
