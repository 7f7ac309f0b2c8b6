use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DatagenError;
use crate::engine::RoundLog;

/// Desired relative frequency of rounds won with a given combination
/// (`none` for rounds nobody had to show down).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceTarget {
    pub label: String,
    pub target_weight: f64,
}

impl fmt::Display for BalanceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.target_weight, self.label)
    }
}

impl FromStr for BalanceTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (w, label) = s.trim().split_once(char::is_whitespace).ok_or_else(|| format!("expected `WEIGHT LABEL`, got `{s}`"))?;
        let target_weight: f64 = w.parse().map_err(|_| format!("bad weight `{w}`"))?;
        if !(target_weight > 0.0 && target_weight.is_finite()) {
            return Err(format!("weight must be positive, got `{w}`"));
        }
        Ok(BalanceTarget { label: label.trim().to_string(), target_weight })
    }
}

/// Parses a targets file: one `WEIGHT LABEL` per line, `#` comments.
pub fn parse_targets(text: &str) -> Result<Vec<BalanceTarget>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| l.parse().map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

/// Up- and down-samples rounds so the targeted outcome labels appear in
/// proportion to their weights. Rounds with untargeted labels pass through,
/// and the targeted rounds keep their combined count. Output rounds are
/// copies of input rounds in input order.
pub fn balance(logs: &[RoundLog], targets: &[BalanceTarget], seed: u64) -> Result<Vec<RoundLog>, DatagenError> {
    if logs.is_empty() {
        return Err(DatagenError::NoRounds);
    }
    let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in logs.iter().enumerate() {
        by_label.entry(l.outcome_label.as_str()).or_default().push(i);
    }
    for t in targets {
        if !by_label.contains_key(t.label.as_str()) {
            return Err(DatagenError::EmptyCategory(t.label.clone()));
        }
    }
    let targeted: usize = targets.iter().map(|t| by_label[t.label.as_str()].len()).sum();
    let quotas = apportion(targeted, &targets.iter().map(|t| t.target_weight).collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut copies = vec![0usize; logs.len()];
    for i in 0..logs.len() {
        if !targets.iter().any(|t| t.label == logs[i].outcome_label) {
            copies[i] = 1;
        }
    }
    for (t, &want) in targets.iter().zip(&quotas) {
        let pool = &by_label[t.label.as_str()];
        if want <= pool.len() {
            for k in index::sample(&mut rng, pool.len(), want) {
                copies[pool[k]] += 1;
            }
        } else {
            for &i in pool {
                copies[i] += 1;
            }
            for _ in pool.len()..want {
                copies[pool[rng.random_range(0..pool.len())]] += 1;
            }
        }
    }
    Ok(logs.iter().zip(copies).flat_map(|(l, c)| std::iter::repeat_n(l, c)).cloned().collect())
}

/// Splits `total` in proportion to `weights` by largest remainder.
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut out: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    let short = total - out.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        out[i] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apportion_sums_to_total() {
        assert_eq!(apportion(10, &[1.0, 1.0, 1.0]), vec![4, 3, 3]);
        assert_eq!(apportion(7, &[2.0, 5.0]), vec![2, 5]);
        assert_eq!(apportion(0, &[1.0]), vec![0]);
    }

    #[test]
    fn targets_parse() {
        let t = parse_targets("# comment\n1 Pair\n0.5 Straight Flush\n").unwrap();
        assert_eq!(t[1], BalanceTarget { label: "Straight Flush".into(), target_weight: 0.5 });
        assert!(parse_targets("0 Pair").is_err());
        assert!(parse_targets("Pair").is_err());
    }
}
