//! American moneyline odds.

use crate::forecasters::rescale_pair;

/// Implied win probability of American odds: `100/(100 + o)` for `o ≥ 0`,
/// `−o/(100 − o)` for `o < 0`.
pub fn american_odds_to_prob(odds: i64) -> f64 {
    let o = odds as f64;
    if odds >= 0 {
        100.0 / (100.0 + o)
    } else {
        -o / (100.0 - o)
    }
}

/// Implied probability of one side, normalized against the opposing side's
/// odds to remove the bookmaker margin.
pub fn odds_pair_prob(odds: i64, opponent_odds: i64) -> f64 {
    rescale_pair(american_odds_to_prob(odds), american_odds_to_prob(opponent_odds)).0
}
