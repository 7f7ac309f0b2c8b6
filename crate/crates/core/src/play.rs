//! Interactive sessions: people and bots share a table and the engine
//! referees.
//!
//! Each session appends its events to `<data_dir>/<id>.ndjson` as they
//! happen, and [`Service::open`] rebuilds every session by replaying those
//! files through the engine.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{emit_samples, read_ndjson, Mode, SampleRecord};
use crate::engine::{
    derive_seed, legal_actions, outcome_label, pending_step, step, Action, EngineError, PlayerInput, Policy,
    RandomPolicy, RoundLog, TransitionRecord,
};
use crate::script::{parse_script, validate_spec, FlowStep, GameSpec};
use crate::state::{serialize_state, view_for_player, GameState};

#[derive(Debug, Error)]
pub enum PlayError {
    #[error("no session `{0}`")]
    UnknownSession(String),
    #[error("bad script: {0}")]
    Script(String),
    #[error("no seat {0} at this table")]
    NoSuchSeat(usize),
    #[error("seat {0} is already taken")]
    SeatTaken(usize),
    #[error("seat {0} is not played by a person")]
    NotHuman(usize),
    #[error("the round has not started: seats are still open")]
    Waiting,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("event log: {0}")]
    Storage(String),
}

impl From<std::io::Error> for PlayError {
    fn from(e: std::io::Error) -> Self {
        PlayError::Storage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Seat {
    Human,
    Bot { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Some seats are still open.
    Waiting,
    Active,
    Finished,
}

/// One line of a session's event file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Created { script: String, seed: u64 },
    Seated { seat: usize, occupant: Seat },
    Transition { step: usize, input: Option<PlayerInput>, category: crate::script::FlowKind, diff: String },
}

/// What one seat is shown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeatView {
    pub session: String,
    pub seat: usize,
    /// Transitions so far; grows by one with every engine step.
    pub step: usize,
    pub status: Status,
    pub seats: Vec<Option<Seat>>,
    /// The redacted record in its text form.
    pub state: String,
    pub pending: Option<String>,
    pub your_turn: bool,
    /// Actions this seat may post now.
    pub legal_actions: Vec<String>,
}

struct Bot {
    seat: usize,
    policy: RandomPolicy,
}

pub struct Session {
    pub id: String,
    pub spec: GameSpec,
    pub script: String,
    pub seed: u64,
    pub seats: Vec<Option<Seat>>,
    pub state: GameState,
    pub transitions: Vec<TransitionRecord>,
    pub outcome_label: String,
    bots: Vec<Bot>,
    log: Option<File>,
}

impl Session {
    pub fn status(&self) -> Status {
        if self.state.is_finished() {
            Status::Finished
        } else if self.seats.iter().any(Option::is_none) {
            Status::Waiting
        } else {
            Status::Active
        }
    }

    pub fn step_count(&self) -> usize {
        self.transitions.len()
    }

    fn record(&mut self, e: &Event) -> Result<(), PlayError> {
        if let Some(f) = &mut self.log {
            let mut line = serde_json::to_string(e).map_err(|e| PlayError::Storage(e.to_string()))?;
            line.push('\n');
            f.write_all(line.as_bytes())?;
            f.flush()?;
        }
        Ok(())
    }

    fn seat(&mut self, seat: usize, occupant: Seat) -> Result<(), PlayError> {
        match self.seats.get(seat) {
            None => return Err(PlayError::NoSuchSeat(seat)),
            Some(Some(_)) => return Err(PlayError::SeatTaken(seat)),
            Some(None) => {}
        }
        self.seats[seat] = Some(occupant);
        if let Seat::Bot { seed } = occupant {
            self.bots.push(Bot { seat, policy: RandomPolicy::new(seed) });
        }
        self.record(&Event::Seated { seat, occupant })?;
        self.advance()
    }

    fn apply(&mut self, input: Option<PlayerInput>) -> Result<(), PlayError> {
        if pending_step(&self.spec, &self.state) == Some(FlowStep::Prize) {
            self.outcome_label = outcome_label(&self.spec, &self.state);
        }
        let t = step(&self.spec, &self.state, input.as_ref())?;
        self.record(&Event::Transition {
            step: self.transitions.len(),
            input: input.clone(),
            category: t.category,
            diff: t.diff.render(),
        })?;
        let prev = std::mem::replace(&mut self.state, t.next.clone());
        self.transitions.push(TransitionRecord { prev, input, next: t.next, diff: t.diff, category: t.category });
        Ok(())
    }

    /// Runs automatic steps and bot turns until a person must act.
    fn advance(&mut self) -> Result<(), PlayError> {
        if self.status() == Status::Waiting {
            return Ok(());
        }
        while pending_step(&self.spec, &self.state).is_some() {
            let input = match self.state.current_actor {
                None => None,
                Some(p) => match self.bots.iter_mut().find(|b| b.seat == p) {
                    None => break,
                    Some(bot) => {
                        let legal = legal_actions(&self.spec, &self.state);
                        let view = view_for_player(&self.state, p).expect("actor is seated");
                        Some(PlayerInput { player: p, action: bot.policy.act(&self.spec, &view, p, &legal) })
                    }
                },
            };
            self.apply(input)?;
        }
        Ok(())
    }

    fn act(&mut self, seat: usize, action: Action) -> Result<(), PlayError> {
        match self.seats.get(seat) {
            None => return Err(PlayError::NoSuchSeat(seat)),
            Some(Some(Seat::Human)) => {}
            Some(_) => return Err(PlayError::NotHuman(seat)),
        }
        if self.status() == Status::Waiting {
            return Err(PlayError::Waiting);
        }
        self.apply(Some(PlayerInput { player: seat, action }))?;
        self.advance()
    }

    pub fn view(&self, seat: usize) -> Result<SeatView, PlayError> {
        if seat >= self.spec.num_players {
            return Err(PlayError::NoSuchSeat(seat));
        }
        // Before the start step only the seed is secret.
        let state = if self.state.is_blank() {
            GameState::blank(0)
        } else {
            view_for_player(&self.state, seat).map_err(|_| PlayError::NoSuchSeat(seat))?
        };
        let your_turn = self.status() == Status::Active && self.state.current_actor == Some(seat);
        let legal = if your_turn { legal_actions(&self.spec, &self.state) } else { Vec::new() };
        Ok(SeatView {
            session: self.id.clone(),
            seat,
            step: self.step_count(),
            status: self.status(),
            seats: self.seats.clone(),
            state: serialize_state(&state),
            pending: pending_step(&self.spec, &self.state).map(|s| s.to_string()),
            your_turn,
            legal_actions: legal.iter().map(ToString::to_string).collect(),
        })
    }

    pub fn round_log(&self) -> RoundLog {
        RoundLog {
            spec: self.spec.clone(),
            seed: self.seed,
            transitions: self.transitions.clone(),
            outcome_label: self.outcome_label.clone(),
        }
    }

    /// The played transitions as corpus records.
    pub fn export(&self, mode: Mode) -> Vec<SampleRecord> {
        emit_samples(&self.round_log(), mode, 0)
    }
}

/// All sessions. Each session is locked separately, so actions on one
/// table are applied one at a time while other tables proceed.
pub struct Service {
    data_dir: Option<PathBuf>,
    sessions: Mutex<BTreeMap<String, Arc<Mutex<Session>>>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Service {
    /// A service that keeps nothing on disk.
    pub fn in_memory() -> Self {
        Self { data_dir: None, sessions: Mutex::new(BTreeMap::new()) }
    }

    /// A service persisting to `dir`, with every session found there restored.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, PlayError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ndjson"))
            .collect();
        files.sort();
        let service = Self { data_dir: Some(dir), sessions: Mutex::new(BTreeMap::new()) };
        for path in files {
            let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let events: Vec<Event> = read_ndjson(BufReader::new(File::open(&path)?))
                .map_err(|e| PlayError::Storage(format!("{}: {e}", path.display())))?;
            let session = replay(&id, &events).map_err(|e| PlayError::Storage(format!("{}: {e}", path.display())))?;
            let mut session = session;
            session.log = Some(OpenOptions::new().append(true).open(&path)?);
            lock(&service.sessions).insert(id, Arc::new(Mutex::new(session)));
        }
        Ok(service)
    }

    /// Parses and validates `script` and opens a table. Without a seed one
    /// is derived from the session number.
    pub fn create(&self, script: &str, seed: Option<u64>) -> Result<String, PlayError> {
        let spec = parse_script(script).map_err(|e| PlayError::Script(e.to_string()))?;
        validate_spec(&spec).map_err(|v| {
            PlayError::Script(v.iter().map(|x| x.detail.as_str()).collect::<Vec<_>>().join("; "))
        })?;
        let mut sessions = lock(&self.sessions);
        let n = sessions.len();
        let id = format!("s{n:04}");
        let seed = seed.unwrap_or_else(|| derive_seed(0, "session", n));
        let mut session = new_session(&id, spec, script, seed);
        if let Some(dir) = &self.data_dir {
            session.log = Some(OpenOptions::new().create_new(true).append(true).open(dir.join(format!("{id}.ndjson")))?);
        }
        session.record(&Event::Created { script: script.to_string(), seed: session.seed })?;
        sessions.insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    pub fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, PlayError> {
        lock(&self.sessions).get(id).cloned().ok_or_else(|| PlayError::UnknownSession(id.to_string()))
    }

    pub fn session_ids(&self) -> Vec<String> {
        lock(&self.sessions).keys().cloned().collect()
    }

    fn with<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T, PlayError>) -> Result<T, PlayError> {
        let s = self.session(id)?;
        let mut guard = lock(&s);
        f(&mut guard)
    }

    pub fn join(&self, id: &str, seat: usize) -> Result<SeatView, PlayError> {
        self.with(id, |s| {
            s.seat(seat, Seat::Human)?;
            s.view(seat)
        })
    }

    pub fn add_bot(&self, id: &str, seat: usize, seed: u64) -> Result<(), PlayError> {
        self.with(id, |s| s.seat(seat, Seat::Bot { seed }))
    }

    pub fn view(&self, id: &str, seat: usize) -> Result<SeatView, PlayError> {
        self.with(id, |s| s.view(seat))
    }

    /// Applies a person's action, then lets bots and automatic steps run.
    /// On error nothing changes.
    pub fn post_action(&self, id: &str, seat: usize, action: Action) -> Result<SeatView, PlayError> {
        self.with(id, |s| {
            s.act(seat, action)?;
            s.view(seat)
        })
    }

    pub fn step_count(&self, id: &str) -> Result<usize, PlayError> {
        self.with(id, |s| Ok(s.step_count()))
    }

    pub fn export(&self, id: &str, mode: Mode) -> Result<Vec<SampleRecord>, PlayError> {
        self.with(id, |s| Ok(s.export(mode)))
    }
}

fn new_session(id: &str, spec: GameSpec, script: &str, seed: u64) -> Session {
    let n = spec.num_players;
    Session {
        id: id.to_string(),
        script: script.to_string(),
        seed,
        seats: vec![None; n],
        state: GameState::blank(seed & crate::engine::SEED_MASK),
        transitions: Vec::new(),
        outcome_label: "none".to_string(),
        bots: Vec::new(),
        log: None,
        spec,
    }
}

/// Rebuilds a session from its events, checking each recorded diff.
fn replay(id: &str, events: &[Event]) -> Result<Session, String> {
    let Some(Event::Created { script, seed }) = events.first() else { return Err("missing created event".into()) };
    let spec = parse_script(script).map_err(|e| e.to_string())?;
    let mut s = new_session(id, spec, script, *seed);
    for e in &events[1..] {
        match e {
            Event::Created { .. } => return Err("second created event".into()),
            Event::Seated { seat, occupant } => {
                // Seating may trigger bot moves; those are replayed from the log instead.
                s.seats[*seat] = Some(*occupant);
                if let Seat::Bot { seed } = occupant {
                    s.bots.push(Bot { seat: *seat, policy: RandomPolicy::new(*seed) });
                }
            }
            Event::Transition { step: i, input, diff, .. } => {
                if *i != s.transitions.len() {
                    return Err(format!("transition {i} out of order"));
                }
                // Keep the bot's generator in step with the recorded game.
                if let Some(inp) = input {
                    if let Some(bot) = s.bots.iter_mut().find(|b| b.seat == inp.player) {
                        let legal = legal_actions(&s.spec, &s.state);
                        let view = view_for_player(&s.state, inp.player).map_err(|e| e.to_string())?;
                        bot.policy.act(&s.spec, &view, inp.player, &legal);
                    }
                }
                s.apply(input.clone()).map_err(|e| e.to_string())?;
                if s.transitions.last().expect("just applied").diff.render() != *diff {
                    return Err(format!("transition {i} does not replay"));
                }
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::presets;

    #[test]
    fn bots_alone_finish_the_round() {
        let svc = Service::in_memory();
        let id = svc.create(presets::TEXAS, Some(3)).unwrap();
        for seat in 0..6 {
            svc.add_bot(&id, seat, seat as u64).unwrap();
        }
        let v = svc.view(&id, 0).unwrap();
        assert_eq!(v.status, Status::Finished);
        assert!(v.step > 10);
    }

    #[test]
    fn bad_scripts_are_rejected_verbatim() {
        let svc = Service::in_memory();
        let err = svc.create("players: many", None).unwrap_err();
        assert!(matches!(err, PlayError::Script(_)));
        let direct = parse_script("players: many").unwrap_err().to_string();
        assert_eq!(err.to_string(), format!("bad script: {direct}"));
    }
}
