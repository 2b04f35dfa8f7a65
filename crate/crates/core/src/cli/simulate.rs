//! Synthetic changepoint runs with the oracle `Δ_t` attached.

use std::io::Write;

use super::compare::{Comparator, Summary};
use super::config::{CsKind, RunConfig, Schema};
use super::records::{fmt_sig9, OutputRow};
use crate::confseq::ComparisonState;
use crate::forecasters::{changepoint_reality, play_game, sample_outcomes, ForecasterKind, GameRound};
use crate::scoring::pointwise_diff;
use crate::{Error, Result};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "ANYTIME_COMPARE_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub p: ForecasterKind,
    pub q: ForecasterKind,
    pub horizon: usize,
    pub seed: u64,
    pub noise: bool,
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub rounds: Vec<GameRound>,
    pub rows: Vec<OutputRow>,
    pub summary: Summary,
}

impl SimOutput {
    pub fn delta_true(&self) -> Vec<f64> {
        self.rounds.iter().map(|g| g.delta_true).collect()
    }
}

/// The seed after applying the environment override, if set and valid.
pub fn effective_seed(seed: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(seed),
    }
}

pub fn run_simulate(config: &RunConfig, sim: &SimConfig) -> Result<SimOutput> {
    config.validate()?;
    if config.schema != Schema::Binary {
        return Err(Error::Config("simulation produces binary forecasts only".into()));
    }
    let reality = changepoint_reality(sim.horizon, sim.seed, sim.noise)?;
    let outcomes = sample_outcomes(&reality, sim.seed);
    let rounds = play_game(sim.p, sim.q, &reality, &outcomes, config.rule)?;
    let dhats = rounds
        .iter()
        .map(|g| Ok(pointwise_diff(config.rule, g.p, g.q, g.y)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let observed_v = if config.post_hoc {
        let mut s = ComparisonState::new(config.bound(), config.centering)?;
        for &d in &dhats {
            s.update(d)?;
        }
        Some(match config.cs {
            CsKind::Eb => s.vhat(),
            CsKind::Hoeffding => s.t() as f64 * config.bound().powi(2),
        })
    } else {
        None
    };
    let mut cmp = Comparator::new(config.plan(observed_v)?)?;
    let rows = rounds
        .iter()
        .zip(&dhats)
        .map(|(g, &d)| cmp.step(g.t, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimOutput {
        rounds,
        rows,
        summary: cmp.summary(),
    })
}

/// Raw stream `t,p,q,y,r`.
pub fn write_data<W: Write>(out: W, rounds: &[GameRound]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "p", "q", "y", "r"])?;
    for g in rounds {
        w.write_record([
            g.t.to_string(),
            fmt_sig9(g.p),
            fmt_sig9(g.q),
            g.y.to_string(),
            fmt_sig9(g.r),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confseq::Decision;

    fn sim(p: &str, q: &str, horizon: usize, noise: bool) -> SimConfig {
        SimConfig {
            p: p.parse().unwrap(),
            q: q.parse().unwrap(),
            horizon,
            seed: 3,
            noise,
        }
    }

    #[test]
    fn identical_constants() {
        let out = run_simulate(&RunConfig::default(), &sim("always_0.5", "always_0.5", 300, true)).unwrap();
        for (row, g) in out.rows.iter().zip(&out.rounds) {
            assert_eq!(g.delta_true, 0.0);
            assert!(row.lcb <= 0.0 && 0.0 <= row.ucb);
            assert_eq!(row.decision, Decision::Undecided);
        }
    }

    #[test]
    fn data_csv_shape() {
        let out = run_simulate(&RunConfig::default(), &sim("laplace", "k29_poly3", 20, true)).unwrap();
        let mut buf = Vec::new();
        write_data(&mut buf, &out.rounds).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 21);
        assert!(text.starts_with("t,p,q,y,r\n1,0.5,0.5,"));
    }

    #[test]
    fn rejects_non_binary_schema() {
        let cfg = RunConfig {
            schema: Schema::Categorical { classes: 3 },
            ..RunConfig::default()
        };
        assert!(run_simulate(&cfg, &sim("laplace", "laplace", 5, false)).is_err());
    }
}
