use std::fmt::Write;

use super::*;

/// Renders a spec in the script grammar accepted by [`parse_script`].
/// Every optional section is written out, so equal specs give equal bytes.
pub fn render_script(spec: &GameSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "game: {}", spec.name);
    let _ = writeln!(out, "players: {}", spec.num_players);
    let _ = writeln!(out, "bet limits: {} {}", spec.min_bet, spec.max_bet);
    let _ = writeln!(out, "blinds: {} {}", spec.blinds.0, spec.blinds.1);
    let _ = writeln!(out, "starting stack: {}", spec.starting_stack);
    let _ = writeln!(out, "suits: {}", spec.suit_spec.suits.join(" "));
    let classes: Vec<String> = spec.suit_spec.rank_classes.iter().map(|c| c.join(" = ")).collect();
    let _ = writeln!(out, "suit ranks: {}", classes.join(" < "));
    let _ = writeln!(out, "values: {}", spec.value_spec.ordered.join(" < "));
    for sp in &spec.specials {
        let kind = match sp.kind {
            SpecialKind::Wild => "wild",
            SpecialKind::Null => "null",
        };
        let _ = writeln!(out, "special: {} count {} {}", sp.symbol, sp.count, kind);
    }
    for strategy in &spec.strategies {
        out.push_str(&render_strategy_line(strategy));
        out.push('\n');
        for combo in &strategy.combinations {
            let keys: Vec<&str> = combo.tiebreak.iter().map(|k| k.name()).collect();
            let _ = writeln!(
                out,
                "combo {} {} = {} | tiebreak {}",
                combo.rank_index,
                combo.name,
                render_pattern(&combo.pattern),
                keys.join(" ")
            );
        }
    }
    let flow: Vec<String> = spec.flow.iter().map(|s| render_flow_step(*s)).collect();
    let _ = writeln!(out, "flow: {}", flow.join(", "));
    out
}

fn render_strategy_line(s: &RankingStrategy) -> String {
    let dir = match s.direction {
        Direction::High => "high",
        Direction::Low => "low",
    };
    let hole = match s.hole_use {
        HoleUse::Any => "any".to_string(),
        HoleUse::Exactly(k) => format!("exactly {k}"),
    };
    let mut line = format!("strategy: {dir} hand {} hole {hole} convention {}", s.hand_size, s.low_convention.name());
    if let Some(q) = &s.qualifier {
        line.push_str(" qualifier ");
        line.push_str(q);
    }
    if s.ace_low {
        line.push_str(" acelow");
    }
    if s.wheel {
        line.push_str(" wheel");
    }
    line
}

pub(crate) fn render_pattern(p: &Pattern) -> String {
    if p.is_catch_all() {
        return "any".to_string();
    }
    p.terms
        .iter()
        .map(|term| term.iter().map(render_atom).collect::<Vec<_>>().join(" & "))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_atom(a: &Atom) -> String {
    match a {
        Atom::SameValue(k) => format!("same_value({k})"),
        Atom::ConsecutiveValues(k) => format!("consecutive({k})"),
        Atom::SameSuit(k) => format!("same_suit({k})"),
        Atom::DistinctSuits(k) => format!("distinct_suits({k})"),
        Atom::DistinctValues(k) => format!("distinct_values({k})"),
        Atom::ValueIn(vs) => format!("value_in({})", vs.join(" ")),
        Atom::Special { symbol, cmp, count } => {
            let op = match cmp {
                CountCmp::Exactly => "=",
                CountCmp::AtMost => "<=",
            };
            format!("special({symbol}){op}{count}")
        }
    }
}

fn render_flow_step(s: FlowStep) -> String {
    match s {
        FlowStep::Deal(n) => format!("deal {n}"),
        FlowStep::Flop(n) => format!("flop {n}"),
        FlowStep::Switch(n) => format!("switch {n}"),
        other => other.kind().name().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_roundtrips() {
        for preset in presets::all() {
            let spec = preset.spec();
            let text = render_script(&spec);
            assert_eq!(parse_script(&text).unwrap(), spec, "{}", preset.name);
            assert_eq!(render_script(&spec), text);
        }
    }

    #[test]
    fn rendered_sections() {
        let text = render_script(&presets::texas());
        for section in ["players:", "bet limits:", "suits:", "values:", "strategy:", "flow:"] {
            assert!(text.contains(section), "missing {section}");
        }
    }
}
