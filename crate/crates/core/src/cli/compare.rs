//! The pairwise comparison runner.

use super::config::{CsKind, Plan, RunConfig};
use super::records::{DataError, ForecastRecord, OutputRow};
use crate::confseq::{cs_eb, cs_hoeffding, decide, ComparisonState, ConfInterval, Decision};
use crate::eprocess::{e_mixture, Direction, EvidenceState};
use crate::Result;

/// Online state of one comparison: confidence sequence plus both
/// e-processes.
#[derive(Debug, Clone)]
pub struct Comparator {
    plan: Plan,
    state: ComparisonState,
    ev_pq: EvidenceState,
    ev_qp: EvidenceState,
    prev: Option<ConfInterval>,
    first_decision: Option<u64>,
    last_decision: Decision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub rows: u64,
    pub final_decision: Decision,
    /// Input `t` of the first row whose decision is not `undecided`.
    pub first_decision_t: Option<u64>,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rows={} final_decision={}", self.rows, self.final_decision)?;
        match self.first_decision_t {
            Some(t) => write!(f, " first_decision_t={t}"),
            None => write!(f, " first_decision_t=none"),
        }
    }
}

impl Comparator {
    pub fn new(plan: Plan) -> Result<Self> {
        Ok(Comparator {
            state: ComparisonState::new(plan.bound, plan.centering)?,
            plan,
            ev_pq: EvidenceState::new(Direction::PQ),
            ev_qp: EvidenceState::new(Direction::QP),
            prev: None,
            first_decision: None,
            last_decision: Decision::Undecided,
        })
    }

    pub fn state(&self) -> &ComparisonState {
        &self.state
    }

    /// Feeds `δ̂` observed at input time `t`.
    pub fn step(&mut self, t: u64, dhat: f64) -> Result<OutputRow> {
        self.state.update(dhat)?;
        let ci = match self.plan.cs {
            CsKind::Eb => cs_eb(&self.state, &self.plan.boundary)?,
            CsKind::Hoeffding => cs_hoeffding(&self.state, &self.plan.boundary)?,
        };
        let mut ci = ci.clip(2.0 * self.plan.bound);
        if self.plan.intersect {
            if let Some(prev) = &self.prev {
                ci = ci.intersect(prev);
            }
            self.prev = Some(ci);
        }
        let e_pq = e_mixture(&self.state, &self.plan.mixture, Direction::PQ);
        let e_qp = e_mixture(&self.state, &self.plan.mixture, Direction::QP);
        self.ev_pq.observe(e_pq)?;
        self.ev_qp.observe(e_qp)?;
        let decision = decide(&ci);
        if decision != Decision::Undecided && self.first_decision.is_none() {
            self.first_decision = Some(t);
        }
        self.last_decision = decision;
        Ok(OutputRow {
            t,
            delta_hat: self.state.delta_hat(),
            vhat: self.state.vhat(),
            lcb: ci.lower,
            ucb: ci.upper,
            width: ci.width(),
            e_pq,
            e_qp,
            p_pq: self.ev_pq.p_value(),
            p_qp: self.ev_qp.p_value(),
            decision,
        })
    }

    pub fn summary(&self) -> Summary {
        Summary {
            rows: self.state.t(),
            final_decision: self.last_decision,
            first_decision_t: self.first_decision,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(crate::Error),
    #[error("{0}")]
    Data(#[from] DataError),
}

/// Intrinsic time at which post-hoc tuning places `ρ`.
fn first_pass_v(config: &RunConfig, dhats: &[f64]) -> Result<f64> {
    let mut s = ComparisonState::new(config.bound(), config.centering)?;
    for &d in dhats {
        s.update(d)?;
    }
    Ok(match config.cs {
        CsKind::Eb => s.vhat(),
        CsKind::Hoeffding => s.t() as f64 * config.bound() * config.bound(),
    })
}

/// Runs a comparison over parsed records. Row `t` depends only on records
/// up to `t`, except that post-hoc mode tunes `ρ` on the whole stream.
pub fn run_compare(
    config: &RunConfig,
    records: &[ForecastRecord],
) -> std::result::Result<(Vec<OutputRow>, Summary), RunError> {
    config.validate().map_err(RunError::Config)?;
    let dhats = records
        .iter()
        .map(|r| {
            r.differential(config.rule, &config.schema).map_err(|e| DataError {
                line: r.line,
                msg: e.to_string(),
            })
        })
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    let observed_v = if config.post_hoc {
        Some(first_pass_v(config, &dhats).map_err(RunError::Config)?)
    } else {
        None
    };
    let plan = config.plan(observed_v).map_err(RunError::Config)?;
    let mut cmp = Comparator::new(plan).map_err(RunError::Config)?;
    let mut rows = Vec::with_capacity(records.len());
    for (r, &d) in records.iter().zip(&dhats) {
        let row = cmp.step(r.t, d).map_err(|e| DataError {
            line: r.line,
            msg: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok((rows, cmp.summary()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Schema;
    use crate::cli::records::read_records;

    const TABLE: &str = "t,p,q,y
1,0.379,0.349,1
2,0.410,0.377,1
3,0.527,0.410,0
4,0.587,0.507,0
5,0.373,0.337,0
6,0.405,0.374,1
7,0.485,0.431,1
";

    #[test]
    fn seven_games() {
        let recs = read_records(TABLE.as_bytes(), &Schema::Binary).unwrap();
        let (rows, summary) = run_compare(&RunConfig::default(), &recs).unwrap();
        assert_eq!(rows.len(), 7);
        assert!((rows[6].delta_hat + 0.006876142857).abs() < 1e-9);
        assert_eq!(summary.final_decision, Decision::Undecided);
        assert_eq!(summary.first_decision_t, None);
        for r in &rows {
            assert!(r.lcb <= r.delta_hat && r.delta_hat <= r.ucb);
            assert!(r.p_pq > 0.0 && r.p_pq <= 1.0);
        }
    }

    #[test]
    fn first_decision_time() {
        let mut csv = String::from("t,p,q,y\n");
        for t in 1..=400 {
            csv.push_str(&format!("{t},0.9,0.1,1\n"));
        }
        let recs = read_records(csv.as_bytes(), &Schema::Binary).unwrap();
        let (rows, summary) = run_compare(&RunConfig::default(), &recs).unwrap();
        let first = rows.iter().find(|r| r.decision != Decision::Undecided).unwrap().t;
        assert_eq!(summary.first_decision_t, Some(first));
        assert_eq!(summary.final_decision, Decision::PBetter);
    }

    #[test]
    fn identical_columns() {
        let csv = "t,p,q,y\n1,0.3,0.3,1\n2,0.6,0.6,0\n3,0.2,0.2,0\n";
        let recs = read_records(csv.as_bytes(), &Schema::Binary).unwrap();
        let (rows, _) = run_compare(&RunConfig::default(), &recs).unwrap();
        for r in rows {
            assert_eq!(r.delta_hat, 0.0);
            assert_eq!(r.e_pq, r.e_qp);
            assert_eq!(r.decision, Decision::Undecided);
        }
    }
}
