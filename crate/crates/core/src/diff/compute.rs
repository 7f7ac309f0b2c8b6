use super::{DiffScript, EditOp, Path, Seg};
use crate::state::GameState;
use crate::value::Value;

/// Edit script turning `prev` into `next`: for every record key that
/// differs, the shortest rendering among a replacement, an element-wise edit,
/// or trimming the front of a list and appending to its end.
pub fn compute_diff(prev: &GameState, next: &GameState) -> DiffScript {
    let (Value::Map(a), Value::Map(b)) = (prev.to_value(), next.to_value()) else {
        unreachable!("states are maps")
    };
    let mut ops = Vec::new();
    for ((k, va), (_, vb)) in a.iter().zip(b.iter()) {
        if va != vb {
            ops.extend(diff_at(&Path::key(k), va, vb));
        }
    }
    DiffScript { ops }
}

fn cost(ops: &[EditOp]) -> usize {
    ops.iter().map(|o| o.rendered_len() + 1).sum()
}

fn diff_at(path: &Path, a: &Value, b: &Value) -> Vec<EditOp> {
    let mut best = vec![EditOp::Set { path: path.clone(), value: b.clone() }];
    let mut best_cost = cost(&best);
    let mut consider = |cand: Vec<EditOp>| {
        let c = cost(&cand);
        if c < best_cost {
            best_cost = c;
            best = cand;
        }
    };

    match (a, b) {
        (Value::Map(ea), Value::Map(eb)) if ea.len() == eb.len() && ea.iter().zip(eb).all(|(x, y)| x.0 == y.0) => {
            let mut ops = Vec::new();
            for ((k, va), (_, vb)) in ea.iter().zip(eb) {
                if va != vb {
                    ops.extend(diff_at(&path.child(Seg::Key(k.clone())), va, vb));
                }
            }
            consider(ops);
        }
        (Value::List(la), Value::List(lb)) => {
            // Element-wise over the common prefix, then grow or shrink the tail.
            let common = la.len().min(lb.len());
            let mut ops = Vec::new();
            for i in 0..common {
                if la[i] != lb[i] {
                    ops.extend(diff_at(&path.child(Seg::Index(i)), &la[i], &lb[i]));
                }
            }
            for v in &lb[common..] {
                ops.push(EditOp::Append { path: path.clone(), value: v.clone() });
            }
            for i in (lb.len()..la.len()).rev() {
                ops.push(EditOp::Remove { path: path.child(Seg::Index(i)) });
            }
            consider(ops);

            // Drop k elements from the front, keep the rest, append the new tail.
            for k in 1..=la.len() {
                let kept = &la[k..];
                if kept.len() > lb.len() || lb[..kept.len()] != *kept {
                    continue;
                }
                let mut ops: Vec<EditOp> =
                    (0..k).map(|_| EditOp::Remove { path: path.child(Seg::Index(0)) }).collect();
                for v in &lb[kept.len()..] {
                    ops.push(EditOp::Append { path: path.clone(), value: v.clone() });
                }
                consider(ops);
                // Larger k only removes more and appends more.
                break;
            }
        }
        _ => {}
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::Card;
    use crate::diff::merge::apply_ops;
    use crate::state::Message;

    fn state() -> GameState {
        let c = |s: &str| Card::new(s).unwrap();
        GameState {
            deck: vec![c("H2"), c("H3"), c("H4"), c("H5")],
            hole: vec![vec![], vec![]],
            discards: vec![vec![], vec![]],
            stacks: vec![100, 100],
            street_bets: vec![0, 0],
            messages: vec![Message::to_all("hello")],
            ..GameState::default()
        }
    }

    #[test]
    fn identical_states_give_an_empty_diff() {
        assert!(compute_diff(&state(), &state()).is_empty());
    }

    #[test]
    fn picks_short_edits() {
        let a = state();
        let mut b = a.clone();
        b.stacks[1] = 95;
        b.street_bets[1] = 5;
        let d = compute_diff(&a, &b);
        assert_eq!(d.render(), "#diff v1\nset stacks/1 95\nset street_bets/1 5\n");

        let mut b = a.clone();
        let top = b.deck.remove(0);
        b.hole[0].push(top);
        let d = compute_diff(&a, &b);
        assert_eq!(d.render(), "#diff v1\nremove deck/0\nset hole/0 [H2]\n");
    }

    #[test]
    fn diff_applies_back() {
        let a = state();
        let mut b = a.clone();
        b.deck.reverse();
        b.messages = vec![Message::to_player(1, "your turn to bet")];
        b.current_actor = Some(1);
        let d = compute_diff(&a, &b);
        let v = apply_ops(a.to_value(), &d.ops, None).unwrap();
        assert_eq!(GameState::from_value(&v).unwrap(), b);
    }
}
