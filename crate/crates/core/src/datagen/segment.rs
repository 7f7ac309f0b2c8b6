use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentPolicy {
    /// Most lines per chunk.
    pub max_lines: usize,
    /// Chance each chunk is picked for rephrasing.
    pub rate: f64,
    /// Chance that every chunk is picked.
    pub epsilon: f64,
}

impl Default for SegmentPolicy {
    fn default() -> Self {
        Self { max_lines: 3, rate: 0.3, epsilon: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    pub chunks: Vec<String>,
    /// Chunks marked for rephrasing by an outside tool.
    pub rephrase: Vec<bool>,
}

/// Splits a script at line boundaries into runs of at most
/// `policy.max_lines` lines and marks some of them for rephrasing. The mask
/// is all-true with probability exactly `policy.epsilon`.
pub fn segment_script(text: &str, policy: &SegmentPolicy, seed: u64) -> Segmentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let take = rng.random_range(1..=policy.max_lines.max(1)).min(lines.len() - i);
        chunks.push(lines[i..i + take].concat());
        i += take;
    }
    let k = chunks.len();
    let rephrase = if rng.random_bool(policy.epsilon.clamp(0.0, 1.0)) {
        vec![true; k]
    } else {
        let mut mask: Vec<bool> = (0..k).map(|_| rng.random_bool(policy.rate.clamp(0.0, 1.0))).collect();
        if k > 0 && mask.iter().all(|&m| m) {
            mask[rng.random_range(0..k)] = false;
        }
        mask
    };
    Segmentation { chunks, rephrase }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::presets;

    #[test]
    fn single_line_is_one_chunk() {
        let s = segment_script("players: 4", &SegmentPolicy::default(), 1);
        assert_eq!(s.chunks, vec!["players: 4"]);
    }

    #[test]
    fn chunks_concatenate_to_the_script() {
        for (seed, p) in presets::all().enumerate() {
            let s = segment_script(p.text, &SegmentPolicy::default(), seed as u64);
            assert_eq!(s.chunks.concat(), p.text);
            assert_eq!(s.chunks.len(), s.rephrase.len());
            assert!(s.chunks.iter().all(|c| c.lines().count() <= 3));
        }
    }

    #[test]
    fn full_mask_is_rare() {
        let policy = SegmentPolicy::default();
        let text = presets::TEXAS;
        let full = (0..10_000).filter(|&s| segment_script(text, &policy, s).rephrase.iter().all(|&m| m)).count();
        let rate = full as f64 / 10_000.0;
        assert!((0.005..=0.015).contains(&rate), "{rate}");
    }
}
