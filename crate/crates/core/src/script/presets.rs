//! Bundled game scripts.
//!
//! The ten base games cover hold'em, draw, lowball and badugi families. The
//! remaining scripts are player-authored variants used to exercise the
//! combination algebra.

use super::{parse_script, GameSpec};

pub const TEXAS: &str = include_str!("../../presets/texas.script");
pub const OMAHA: &str = include_str!("../../presets/omaha.script");
pub const OMAHA_HL: &str = include_str!("../../presets/omaha-hl.script");
pub const SHORT_DECK: &str = include_str!("../../presets/short-deck.script");
pub const DEUCE_SEVEN_TRIPLE_DRAW: &str = include_str!("../../presets/27-triple-draw.script");
pub const ACE_FIVE_TRIPLE_DRAW: &str = include_str!("../../presets/a5-triple-draw.script");
pub const DEUCE_SEVEN_SINGLE_DRAW: &str = include_str!("../../presets/27-single-draw.script");
pub const BADUGI: &str = include_str!("../../presets/badugi.script");
pub const BADEUCEY: &str = include_str!("../../presets/badeucey.script");
pub const BADACEY: &str = include_str!("../../presets/badacey.script");

pub const THREE_CARD_DRAW: &str = include_str!("../../presets/3-card-draw.script");
pub const SIX_CARD_DRAW: &str = include_str!("../../presets/6-card-draw.script");
pub const DRAGONIE: &str = include_str!("../../presets/dragonie.script");
pub const THREE_KINGDOMS: &str = include_str!("../../presets/three-kingdoms.script");
pub const STARDUST: &str = include_str!("../../presets/stardust.script");
pub const ODD_LOVER: &str = include_str!("../../presets/odd-lover.script");
pub const JOKER_HOLDEM: &str = include_str!("../../presets/joker-holdem.script");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    /// Short key used on the command line, e.g. `omaha-hl`.
    pub name: &'static str,
    pub text: &'static str,
}

impl Preset {
    pub fn spec(&self) -> GameSpec {
        parse_script(self.text).unwrap_or_else(|e| panic!("bundled preset `{}` is broken: {e}", self.name))
    }
}

const BASE: [Preset; 10] = [
    Preset { name: "texas", text: TEXAS },
    Preset { name: "omaha", text: OMAHA },
    Preset { name: "omaha-hl", text: OMAHA_HL },
    Preset { name: "short-deck", text: SHORT_DECK },
    Preset { name: "27-triple-draw", text: DEUCE_SEVEN_TRIPLE_DRAW },
    Preset { name: "a5-triple-draw", text: ACE_FIVE_TRIPLE_DRAW },
    Preset { name: "27-single-draw", text: DEUCE_SEVEN_SINGLE_DRAW },
    Preset { name: "badugi", text: BADUGI },
    Preset { name: "badeucey", text: BADEUCEY },
    Preset { name: "badacey", text: BADACEY },
];

const AUTHORED: [Preset; 7] = [
    Preset { name: "3-card-draw", text: THREE_CARD_DRAW },
    Preset { name: "6-card-draw", text: SIX_CARD_DRAW },
    Preset { name: "dragonie", text: DRAGONIE },
    Preset { name: "three-kingdoms", text: THREE_KINGDOMS },
    Preset { name: "stardust", text: STARDUST },
    Preset { name: "odd-lover", text: ODD_LOVER },
    Preset { name: "joker-holdem", text: JOKER_HOLDEM },
];

/// The ten base games.
pub fn base() -> &'static [Preset] {
    &BASE
}

/// Player-authored variants.
pub fn authored() -> &'static [Preset] {
    &AUTHORED
}

/// Every bundled script, base games first.
pub fn all() -> impl Iterator<Item = Preset> {
    BASE.into_iter().chain(AUTHORED)
}

pub fn find(name: &str) -> Option<Preset> {
    all().find(|p| p.name == name)
}

pub fn texas() -> GameSpec {
    BASE[0].spec()
}

pub fn omaha() -> GameSpec {
    BASE[1].spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = all().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 17);
    }

    #[test]
    fn every_preset_parses() {
        for p in all() {
            let spec = p.spec();
            assert!(!spec.strategies.is_empty(), "{}", p.name);
        }
    }

    #[test]
    fn find_by_key() {
        assert_eq!(find("badugi").unwrap().spec().name, "Badugi");
        assert!(find("go-fish").is_none());
    }
}
