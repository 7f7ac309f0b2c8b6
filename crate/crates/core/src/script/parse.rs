use thiserror::Error;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("missing section `{name}`")]
    MissingSection { name: &'static str },
    #[error("line {line}: unknown symbol `{token}`")]
    UnknownSymbol { token: String, line: usize },
    #[error("line {line}: malformed flow")]
    MalformedFlow { line: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn malformed(line: usize, reason: impl Into<String>) -> ScriptError {
    ScriptError::Malformed { line, reason: reason.into() }
}

/// Sections that must appear, in the order they are reported when missing.
const REQUIRED: [&str; 6] = ["players", "bet limits", "suits", "values", "strategy", "flow"];

#[derive(Default)]
struct Draft {
    name: Option<String>,
    players: Option<usize>,
    bet_limits: Option<(Chips, Chips)>,
    blinds: Option<(Chips, Chips)>,
    stack: Option<Chips>,
    suits: Option<Vec<String>>,
    suit_ranks: Option<(usize, Vec<Vec<String>>)>,
    values: Option<Vec<String>>,
    specials: Vec<SpecialCardSpec>,
    strategies: Vec<RankingStrategy>,
    flow: Option<Vec<FlowStep>>,
    /// (line, token) references checked once every section is known.
    value_refs: Vec<(usize, String)>,
    special_refs: Vec<(usize, String)>,
}

impl Draft {
    fn has(&self, section: &str) -> bool {
        match section {
            "players" => self.players.is_some(),
            "bet limits" => self.bet_limits.is_some(),
            "suits" => self.suits.is_some(),
            "values" => self.values.is_some(),
            "strategy" => !self.strategies.is_empty(),
            "flow" => self.flow.is_some(),
            _ => true,
        }
    }
}

/// Parses a game script.
///
/// ```text
/// game: Texas Hold'em
/// players: 6
/// bet limits: 2 20
/// blinds: 1 2
/// starting stack: 100
/// suits: H D C S
/// suit ranks: H = D = C = S
/// values: 2 < 3 < 4 < 5 < 6 < 7 < 8 < 9 < 10 < J < Q < K < 1
/// special: J1 count 1 wild
/// strategy: high hand 5 hole any convention none wheel
/// combo 1 Pair = same_value(2) | tiebreak groups kickers
/// combo 0 High Card = any | tiebreak groups kickers
/// flow: start, blind, shuffle, deal 2, bet, flop 3, bet, show, prize
/// ```
///
/// Blank lines and lines starting with `#` are ignored. `combo` lines belong
/// to the closest preceding `strategy` line.
pub fn parse_script(text: &str) -> Result<GameSpec, ScriptError> {
    let mut d = Draft::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("combo ") {
            let strategy = d
                .strategies
                .last_mut()
                .ok_or_else(|| malformed(line, "combo before any strategy"))?;
            let combo = parse_combo(rest, line, &mut d.value_refs, &mut d.special_refs)?;
            strategy.combinations.push(combo);
            continue;
        }
        let (label, body) = trimmed
            .split_once(':')
            .ok_or_else(|| malformed(line, "expected `section: value`"))?;
        let body = body.trim();
        match label.trim() {
            "game" => set_once(&mut d.name, body.to_string(), line, "game")?,
            "players" => set_once(&mut d.players, parse_num(body, line)?, line, "players")?,
            "bet limits" => {
                let pair = parse_pair(body, line)?;
                set_once(&mut d.bet_limits, pair, line, "bet limits")?
            }
            "blinds" => {
                let pair = parse_pair(body, line)?;
                set_once(&mut d.blinds, pair, line, "blinds")?
            }
            "starting stack" => set_once(&mut d.stack, parse_num(body, line)?, line, "starting stack")?,
            "suits" => {
                let suits: Vec<String> = body.split_whitespace().map(String::from).collect();
                if suits.is_empty() {
                    return Err(malformed(line, "no suits"));
                }
                set_once(&mut d.suits, suits, line, "suits")?
            }
            "suit ranks" => {
                let classes = parse_suit_ranks(body, line)?;
                set_once(&mut d.suit_ranks, (line, classes), line, "suit ranks")?
            }
            "values" => {
                let values: Vec<String> = body.split('<').map(|v| v.trim().to_string()).collect();
                if values.iter().any(|v| v.is_empty() || v.contains(char::is_whitespace)) {
                    return Err(malformed(line, "values must be `v1 < v2 < ...`"));
                }
                set_once(&mut d.values, values, line, "values")?
            }
            "special" => d.specials.push(parse_special(body, line)?),
            "strategy" => d.strategies.push(parse_strategy(body, line, &mut d.value_refs)?),
            "flow" => set_once(&mut d.flow, parse_flow(body, line)?, line, "flow")?,
            other => return Err(malformed(line, format!("unknown section `{other}`"))),
        }
    }

    if let Some(name) = REQUIRED.iter().find(|s| !d.has(s)) {
        return Err(ScriptError::MissingSection { name });
    }
    let suits = d.suits.unwrap();
    let values = d.values.unwrap();

    let rank_classes = match d.suit_ranks {
        Some((line, classes)) => {
            if let Some(unknown) = classes.iter().flatten().find(|s| !suits.contains(s)) {
                return Err(ScriptError::UnknownSymbol { token: unknown.clone(), line });
            }
            classes
        }
        None => vec![suits.clone()],
    };
    for (line, v) in &d.value_refs {
        if !values.contains(v) {
            return Err(ScriptError::UnknownSymbol { token: v.clone(), line: *line });
        }
    }
    for (line, s) in &d.special_refs {
        if !d.specials.iter().any(|sp| &sp.symbol == s) {
            return Err(ScriptError::UnknownSymbol { token: s.clone(), line: *line });
        }
    }
    let (min_bet, max_bet) = d.bet_limits.unwrap();

    Ok(GameSpec {
        name: d.name.unwrap_or_else(|| "Untitled".to_string()),
        num_players: d.players.unwrap(),
        min_bet,
        max_bet,
        value_spec: ValueSpec { ordered: values },
        suit_spec: SuitSpec { suits, rank_classes },
        specials: d.specials,
        strategies: d.strategies,
        flow: d.flow.unwrap(),
        starting_stack: d.stack.unwrap_or(DEFAULT_STACK),
        blinds: d.blinds.unwrap_or(DEFAULT_BLINDS),
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, name: &str) -> Result<(), ScriptError> {
    if slot.is_some() {
        return Err(malformed(line, format!("duplicate section `{name}`")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, ScriptError> {
    s.trim().parse().map_err(|_| malformed(line, format!("expected a number, got `{}`", s.trim())))
}

fn parse_pair(s: &str, line: usize) -> Result<(Chips, Chips), ScriptError> {
    let parts: Vec<&str> = s.split_whitespace().filter(|p| *p != "to").collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_num(a, line)?, parse_num(b, line)?)),
        _ => Err(malformed(line, "expected two amounts")),
    }
}

/// `H = D < L` (ascending) or `L > H = D` (descending).
fn parse_suit_ranks(s: &str, line: usize) -> Result<Vec<Vec<String>>, ScriptError> {
    let descending = s.contains('>');
    if descending && s.contains('<') {
        return Err(malformed(line, "mixed `<` and `>` in suit ranks"));
    }
    let sep = if descending { '>' } else { '<' };
    let mut classes: Vec<Vec<String>> = s
        .split(sep)
        .map(|class| class.split('=').map(|x| x.trim().to_string()).collect::<Vec<_>>())
        .collect();
    if classes.iter().flatten().any(|x| x.is_empty()) {
        return Err(malformed(line, "empty suit in suit ranks"));
    }
    if descending {
        classes.reverse();
    }
    Ok(classes)
}

fn parse_special(s: &str, line: usize) -> Result<SpecialCardSpec, ScriptError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    match parts.as_slice() {
        [symbol, "count", n, kind] => {
            let kind = match *kind {
                "wild" => SpecialKind::Wild,
                "null" => SpecialKind::Null,
                other => return Err(malformed(line, format!("unknown special kind `{other}`"))),
            };
            Ok(SpecialCardSpec { symbol: symbol.to_string(), count: parse_num(n, line)?, kind })
        }
        _ => Err(malformed(line, "expected `special: SYMBOL count N wild|null`")),
    }
}

fn parse_strategy(
    s: &str,
    line: usize,
    value_refs: &mut Vec<(usize, String)>,
) -> Result<RankingStrategy, ScriptError> {
    let mut words = s.split_whitespace();
    let direction = match words.next() {
        Some("high") => Direction::High,
        Some("low") => Direction::Low,
        _ => return Err(malformed(line, "strategy must start with `high` or `low`")),
    };
    let mut strategy = RankingStrategy {
        direction,
        hand_size: 0,
        hole_use: HoleUse::Any,
        combinations: Vec::new(),
        low_convention: LowConvention::None,
        ace_low: false,
        wheel: false,
        qualifier: None,
    };
    let mut saw_hand = false;
    while let Some(word) = words.next() {
        let mut arg = || words.next().ok_or_else(|| malformed(line, format!("`{word}` needs an argument")));
        match word {
            "hand" => {
                strategy.hand_size = parse_num(arg()?, line)?;
                saw_hand = true;
            }
            "hole" => {
                strategy.hole_use = match arg()? {
                    "any" => HoleUse::Any,
                    "exactly" => HoleUse::Exactly(parse_num(arg()?, line)?),
                    other => return Err(malformed(line, format!("unknown hole use `{other}`"))),
                }
            }
            "convention" => {
                let name = arg()?;
                strategy.low_convention = LowConvention::from_name(name)
                    .ok_or_else(|| malformed(line, format!("unknown convention `{name}`")))?;
            }
            "qualifier" => {
                let v = arg()?.to_string();
                value_refs.push((line, v.clone()));
                strategy.qualifier = Some(v);
            }
            "acelow" => strategy.ace_low = true,
            "wheel" => strategy.wheel = true,
            other => return Err(malformed(line, format!("unknown strategy option `{other}`"))),
        }
    }
    if !saw_hand {
        return Err(malformed(line, "strategy needs `hand N`"));
    }
    Ok(strategy)
}

fn parse_combo(
    s: &str,
    line: usize,
    value_refs: &mut Vec<(usize, String)>,
    special_refs: &mut Vec<(usize, String)>,
) -> Result<CombinationDef, ScriptError> {
    let (head, rest) = s.split_once('=').ok_or_else(|| malformed(line, "combo needs `=`"))?;
    let head = head.trim();
    let (rank, name) = head.split_once(' ').ok_or_else(|| malformed(line, "combo needs a rank and a name"))?;
    let rank_index: u32 = parse_num(rank, line)?;
    let name = name.trim().to_string();
    if name.is_empty() {
        return Err(malformed(line, "empty combination name"));
    }
    let (pattern_text, tiebreak_text) = match rest.split_once('|') {
        Some((p, t)) => (p, Some(t)),
        None => (rest, None),
    };
    let pattern = parse_pattern(pattern_text, line, value_refs, special_refs)?;
    let tiebreak = match tiebreak_text {
        None => vec![TiebreakKey::Groups, TiebreakKey::Kickers],
        Some(t) => {
            let t = t.trim();
            let keys = t
                .strip_prefix("tiebreak")
                .ok_or_else(|| malformed(line, "expected `| tiebreak KEY ...`"))?;
            keys.split_whitespace()
                .map(|k| TiebreakKey::from_name(k).ok_or_else(|| malformed(line, format!("unknown tiebreak key `{k}`"))))
                .collect::<Result<_, _>>()?
        }
    };
    Ok(CombinationDef { name, rank_index, pattern, tiebreak })
}

fn parse_pattern(
    s: &str,
    line: usize,
    value_refs: &mut Vec<(usize, String)>,
    special_refs: &mut Vec<(usize, String)>,
) -> Result<Pattern, ScriptError> {
    let s = s.trim();
    if s == "any" {
        return Ok(Pattern::any());
    }
    let mut terms = Vec::new();
    for term in s.split('+') {
        let mut atoms = Vec::new();
        for atom in term.split('&') {
            atoms.push(parse_atom(atom.trim(), line, value_refs, special_refs)?);
        }
        terms.push(atoms);
    }
    Ok(Pattern { terms })
}

fn parse_atom(
    s: &str,
    line: usize,
    value_refs: &mut Vec<(usize, String)>,
    special_refs: &mut Vec<(usize, String)>,
) -> Result<Atom, ScriptError> {
    let (name, rest) = s.split_once('(').ok_or_else(|| malformed(line, format!("bad atom `{s}`")))?;
    let (arg, tail) = rest.split_once(')').ok_or_else(|| malformed(line, format!("bad atom `{s}`")))?;
    let arg = arg.trim();
    let tail = tail.trim();
    if name != "special" && !tail.is_empty() {
        return Err(malformed(line, format!("trailing text in atom `{s}`")));
    }
    let size = || parse_num::<usize>(arg, line);
    Ok(match name.trim() {
        "same_value" => Atom::SameValue(size()?),
        "consecutive" => Atom::ConsecutiveValues(size()?),
        "same_suit" => Atom::SameSuit(size()?),
        "distinct_suits" => Atom::DistinctSuits(size()?),
        "distinct_values" => Atom::DistinctValues(size()?),
        "value_in" => {
            let values: Vec<String> = arg.split_whitespace().map(String::from).collect();
            value_refs.extend(values.iter().map(|v| (line, v.clone())));
            Atom::ValueIn(values)
        }
        "special" => {
            let (cmp, count) = if let Some(n) = tail.strip_prefix("<=") {
                (CountCmp::AtMost, n)
            } else if let Some(n) = tail.strip_prefix('=') {
                (CountCmp::Exactly, n)
            } else {
                return Err(malformed(line, "special atom needs `=N` or `<=N`"));
            };
            special_refs.push((line, arg.to_string()));
            Atom::Special { symbol: arg.to_string(), cmp, count: parse_num(count, line)? }
        }
        other => return Err(malformed(line, format!("unknown atom `{other}`"))),
    })
}

fn parse_flow(s: &str, line: usize) -> Result<Vec<FlowStep>, ScriptError> {
    s.split(',')
        .map(|item| {
            let words: Vec<&str> = item.split_whitespace().collect();
            let step = match words.as_slice() {
                ["start"] => FlowStep::Start,
                ["blind"] => FlowStep::Blind,
                ["shuffle"] => FlowStep::Shuffle,
                ["bet"] => FlowStep::Bet,
                ["show"] => FlowStep::Show,
                ["prize"] => FlowStep::Prize,
                ["deal", n] => FlowStep::Deal(n.parse().map_err(|_| ScriptError::MalformedFlow { line })?),
                ["flop", n] => FlowStep::Flop(n.parse().map_err(|_| ScriptError::MalformedFlow { line })?),
                ["switch", n] => FlowStep::Switch(n.parse().map_err(|_| ScriptError::MalformedFlow { line })?),
                _ => return Err(ScriptError::MalformedFlow { line }),
            };
            Ok(step)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_reports_players_first() {
        assert_eq!(parse_script(""), Err(ScriptError::MissingSection { name: "players" }));
    }

    #[test]
    fn odd_lover_value_order_is_kept() {
        let spec = parse_script(presets::ODD_LOVER).unwrap();
        assert_eq!(spec.value_spec.ordered, ["2", "4", "6", "8", "10", "1", "3", "5", "7", "9"]);
    }

    #[test]
    fn texas_flow() {
        use FlowStep::*;
        let spec = parse_script(presets::TEXAS).unwrap();
        assert_eq!(
            spec.flow,
            [Start, Blind, Shuffle, Deal(2), Bet, Flop(3), Bet, Flop(1), Bet, Flop(1), Bet, Show, Prize]
        );
    }

    #[test]
    fn unknown_value_reference_is_reported_with_line() {
        let text = presets::TEXAS.replace("wheel\n", "wheel qualifier 99\n");
        assert!(matches!(parse_script(&text), Err(ScriptError::UnknownSymbol { token, .. }) if token == "99"));
    }

    #[test]
    fn bad_flow_step() {
        let text = presets::TEXAS.replace("deal 2", "deal two");
        assert!(matches!(parse_script(&text), Err(ScriptError::MalformedFlow { .. })));
        let text = presets::TEXAS.replace("show,", "reveal,");
        assert!(matches!(parse_script(&text), Err(ScriptError::MalformedFlow { .. })));
    }

    #[test]
    fn descending_suit_ranks() {
        assert_eq!(
            parse_suit_ranks("L > H = D", 1).unwrap(),
            vec![vec!["H".to_string(), "D".to_string()], vec!["L".to_string()]]
        );
    }

    #[test]
    fn undeclared_special_in_pattern() {
        let text = presets::TEXAS.replace("= same_value(2) |", "= same_value(2) & special(*)<=1 |");
        assert!(matches!(parse_script(&text), Err(ScriptError::UnknownSymbol { token, .. }) if token == "*"));
    }

    #[test]
    fn garbage_lines_are_typed_errors() {
        for text in ["players 3", "players: x", "combo 1 Pair = same_value(2)", "players: 2\nplayers: 3"] {
            assert!(matches!(parse_script(text), Err(ScriptError::Malformed { .. })), "{text}");
        }
    }
}
